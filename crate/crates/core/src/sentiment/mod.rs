//! Lexicon-based sentiment scoring.
//!
//! Two analyzers run side by side: [`polarity_score`] averages word
//! polarity/subjectivity from an adjective lexicon, and [`rule_based_score`]
//! sums social-media valences with capitalization, booster, negation and
//! exclamation rules into a normalized compound score.

mod lexicon;
mod polarity;
mod rules;
mod tokenize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ingest::RawPost;

pub use lexicon::{LexiconError, PolarityEntry, PolarityLexicon, RuleLexicon};
pub use polarity::polarity_score;
pub use rules::{normalize, rule_based_score, RuleConfig};

/// Scores for one piece of text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SentimentScore {
    pub polarity: f64,
    pub subjectivity: f64,
    pub compound: f64,
    pub pos: f64,
    pub neu: f64,
    pub neg: f64,
}

/// Both lexicons plus the rule constants.
#[derive(Debug, Clone)]
pub struct Analyzers {
    pub polarity: PolarityLexicon,
    pub rules: RuleLexicon,
    pub config: RuleConfig,
}

impl Analyzers {
    pub fn new(
        polarity: PolarityLexicon,
        rules: RuleLexicon,
        config: RuleConfig,
    ) -> Result<Self, LexiconError> {
        if polarity.is_empty() || rules.is_empty() {
            return Err(LexiconError::Empty);
        }
        config
            .validate()
            .map_err(|message| LexiconError::Line { line: 0, message })?;
        Ok(Analyzers {
            polarity,
            rules,
            config,
        })
    }

    /// Bundled lexicons with default rule constants.
    pub fn bundled() -> Self {
        Analyzers {
            polarity: PolarityLexicon::bundled(),
            rules: RuleLexicon::bundled(),
            config: RuleConfig::default(),
        }
    }

    pub fn score(&self, text: &str) -> SentimentScore {
        let (polarity, subjectivity) = polarity_score(text, &self.polarity);
        SentimentScore {
            polarity,
            subjectivity,
            ..rule_based_score(text, &self.rules, &self.config)
        }
    }
}

/// Per-event sentiment averages.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PostSentiment {
    pub avg_polarity: f64,
    pub avg_compound: f64,
}

/// Unweighted mean polarity and compound over `posts`.
///
/// Each post is scored on its title and body joined by a space; removed posts
/// and posts without matches contribute zero. No posts gives `(0, 0)`.
pub fn score_posts(posts: &[RawPost], analyzers: &Analyzers) -> PostSentiment {
    if posts.is_empty() {
        return PostSentiment::default();
    }
    let scores: Vec<(f64, f64)> = posts
        .par_iter()
        .map(|p| {
            let text = p.sentiment_text();
            if text.is_empty() {
                (0.0, 0.0)
            } else {
                let s = analyzers.score(&text);
                (s.polarity, s.compound)
            }
        })
        .collect();
    let n = posts.len() as f64;
    let (p, c) = scores
        .iter()
        .fold((0.0, 0.0), |(a, b), (p, c)| (a + p, b + c));
    PostSentiment {
        avg_polarity: p / n,
        avg_compound: c / n,
    }
}
