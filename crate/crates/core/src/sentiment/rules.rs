use serde::{Deserialize, Serialize};

use super::lexicon::RuleLexicon;
use super::tokenize::{tokenize, trailing_exclamations, Token};
use super::SentimentScore;

/// Constants of the rule-based analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleConfig {
    pub booster_increment: f64,
    pub caps_boost: f64,
    pub negation_window: usize,
    pub negation_factor: f64,
    pub exclamation_increment: f64,
    pub exclamation_cap: usize,
    pub normalization_alpha: f64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            booster_increment: 0.293,
            caps_boost: 0.733,
            negation_window: 3,
            negation_factor: -0.74,
            exclamation_increment: 0.292,
            exclamation_cap: 4,
            normalization_alpha: 15.0,
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.normalization_alpha.is_nan() || self.normalization_alpha <= 0.0 {
            return Err(format!(
                "normalization_alpha must be > 0, got {}",
                self.normalization_alpha
            ));
        }
        if self.negation_window < 1 {
            return Err("negation_window must be at least 1".into());
        }
        let finite = [
            self.booster_increment,
            self.caps_boost,
            self.negation_factor,
            self.exclamation_increment,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err("rule constants must be finite".into());
        }
        Ok(())
    }
}

const BOOSTERS: [&str; 8] = [
    "very",
    "extremely",
    "really",
    "absolutely",
    "incredibly",
    "totally",
    "hugely",
    "so",
];

const NEGATORS: [&str; 20] = [
    "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot",
    "without", "aint", "cant", "dont", "doesnt", "didnt", "isnt", "wasnt", "wont", "wouldnt",
];

fn is_negator(word: &str) -> bool {
    NEGATORS.contains(&word) || word.ends_with("n't")
}

fn is_booster(word: &str) -> bool {
    BOOSTERS.contains(&word)
}

/// Adds `amount` in the direction of `v`'s sign; zero stays zero.
fn toward_sign(v: f64, amount: f64) -> f64 {
    if v > 0.0 {
        v + amount
    } else if v < 0.0 {
        v - amount
    } else {
        v
    }
}

/// Maps an unbounded valence sum into (-1, 1).
pub fn normalize(sum: f64, alpha: f64) -> f64 {
    if sum == 0.0 {
        return 0.0;
    }
    (sum / (sum * sum + alpha).sqrt()).clamp(-1.0, 1.0)
}

fn lookup(lexicon: &RuleLexicon, tok: &Token<'_>) -> Option<f64> {
    lexicon.get(&tok.lower_raw()).or_else(|| {
        if tok.bare.is_empty() {
            None
        } else {
            lexicon.get(&tok.lower_bare())
        }
    })
}

/// Social-media rule-based score of `text`.
///
/// Each matched token starts from its lexicon valence. An ALL-CAPS token gets
/// `caps_boost` unless the whole text is shouted (two or more cased tokens,
/// all in caps). A booster word immediately before adds `booster_increment`.
/// A negator within `negation_window` preceding tokens multiplies by
/// `negation_factor`. Trailing `!` add `exclamation_increment` each, up to the
/// cap, in the direction of the sum. Only `compound`, `pos`, `neu` and `neg`
/// are filled in.
pub fn rule_based_score(text: &str, lexicon: &RuleLexicon, config: &RuleConfig) -> SentimentScore {
    let tokens = tokenize(text);
    let lowered: Vec<String> = tokens.iter().map(Token::lower_bare).collect();

    let cased: Vec<&Token<'_>> = tokens.iter().filter(|t| t.is_cased()).collect();
    let shouting = cased.len() >= 2 && cased.iter().all(|t| t.is_all_caps());

    let mut sum = 0.0;
    let mut pos_mass = 0.0;
    let mut neg_mass = 0.0;
    let mut neutral = 0.0;
    let mut counted = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        let word = &lowered[i];
        let valence = if is_negator(word) || is_booster(word) {
            None
        } else {
            lookup(lexicon, tok)
        };
        let Some(mut v) = valence else {
            if !tok.bare.is_empty() {
                neutral += 1.0;
                counted += 1;
            }
            continue;
        };
        counted += 1;
        if tok.is_all_caps() && !shouting {
            v = toward_sign(v, config.caps_boost);
        }
        if i > 0 && is_booster(&lowered[i - 1]) {
            v = toward_sign(v, config.booster_increment);
        }
        let reach = i.saturating_sub(config.negation_window);
        if lowered[reach..i].iter().any(|w| is_negator(w)) {
            v *= config.negation_factor;
        }
        sum += v;
        if v > 0.0 {
            pos_mass += v;
        } else if v < 0.0 {
            neg_mass -= v;
        } else {
            neutral += 1.0;
        }
    }

    let bangs = trailing_exclamations(text).min(config.exclamation_cap);
    sum = toward_sign(sum, config.exclamation_increment * bangs as f64);

    let compound = normalize(sum, config.normalization_alpha);
    let total = pos_mass + neg_mass + neutral;
    let (pos, neu, neg) = if counted == 0 || total <= 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (pos_mass / total, neutral / total, neg_mass / total)
    };
    SentimentScore {
        polarity: 0.0,
        subjectivity: 0.0,
        compound,
        pos,
        neu,
        neg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> RuleLexicon {
        RuleLexicon::from_entries([("good", 1.9), ("bad", -2.5)])
    }

    fn compound(text: &str) -> f64 {
        rule_based_score(text, &lex(), &RuleConfig::default()).compound
    }

    #[test]
    fn empty_text_is_neutral() {
        let s = rule_based_score("", &lex(), &RuleConfig::default());
        assert_eq!(s.compound, 0.0);
        assert_eq!((s.pos, s.neu, s.neg), (0.0, 0.0, 0.0));
    }

    // Expected values from an independent evaluation of s / sqrt(s^2 + 15):
    // 1.9 / sqrt(18.61) and 3.509 / sqrt(27.313081).
    #[test]
    fn single_word() {
        assert!((compound("good") - 0.440_433_570_760_168_5).abs() < 1e-12);
    }

    #[test]
    fn caps_and_exclamations() {
        let c = compound("GOOD!!!");
        assert!((c - 0.671_425_794_721_308_9).abs() < 1e-12, "{c}");
        assert!(c > compound("good"));
    }

    #[test]
    fn shouting_suppresses_caps_boost() {
        let lower = compound("good game");
        let shout = compound("GOOD GAME");
        assert_eq!(lower, shout);
        assert!(compound("a GOOD game") > lower);
    }

    #[test]
    fn booster_and_negation() {
        assert!(compound("very good") > compound("good"));
        let negated = compound("not good");
        assert!(negated < 0.0);
        let expected = normalize(1.9 * -0.74, 15.0);
        assert!((negated - expected).abs() < 1e-15);
        // outside the window
        assert!(compound("not a b c good") > 0.0);
    }

    #[test]
    fn proportions_sum_to_one() {
        let s = rule_based_score("good game but bad refs", &lex(), &RuleConfig::default());
        assert!((s.pos + s.neu + s.neg - 1.0).abs() < 1e-12);
        assert!((s.pos - 1.9 / 7.4).abs() < 1e-12);
        assert!((s.neg - 2.5 / 7.4).abs() < 1e-12);
    }

    #[test]
    fn exclamation_cap() {
        assert_eq!(compound("good!!!!"), compound("good!!!!!!!!"));
    }

    #[test]
    fn config_validation() {
        let mut c = RuleConfig::default();
        assert!(c.validate().is_ok());
        c.normalization_alpha = 0.0;
        assert!(c.validate().is_err());
        c = RuleConfig {
            negation_window: 0,
            ..RuleConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
