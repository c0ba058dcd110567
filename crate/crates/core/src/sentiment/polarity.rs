use super::lexicon::PolarityLexicon;
use super::tokenize::{tokenize, Token};

/// Negators recognised by the polarity scorer; any token ending in `n't` also counts.
const NEGATORS: [&str; 3] = ["not", "no", "never"];

/// How many preceding tokens a negator reaches.
const NEGATION_REACH: usize = 2;

/// Multiplier applied to a negated word's polarity.
const NEGATION_MULTIPLIER: f64 = -0.5;

pub(crate) fn is_polarity_negator(token: &str) -> bool {
    NEGATORS.contains(&token) || token.ends_with("n't")
}

fn lookup(
    lexicon: &PolarityLexicon,
    tok: &Token<'_>,
) -> Option<(String, super::lexicon::PolarityEntry)> {
    let raw = tok.lower_raw();
    if let Some(e) = lexicon.get(&raw) {
        return Some((raw, e));
    }
    if tok.bare.is_empty() {
        return None;
    }
    let bare = tok.lower_bare();
    lexicon.get(&bare).map(|e| (bare, e))
}

/// Mean lexicon polarity and subjectivity over matched tokens.
///
/// A negator within the two preceding tokens multiplies that match's polarity
/// by -0.5. Text without matches scores `(0, 0)`.
pub fn polarity_score(text: &str, lexicon: &PolarityLexicon) -> (f64, f64) {
    let tokens = tokenize(text);
    let lowered: Vec<String> = tokens.iter().map(Token::lower_bare).collect();

    let mut polarity_sum = 0.0;
    let mut subjectivity_sum = 0.0;
    let mut matched = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        if is_polarity_negator(&lowered[i]) {
            continue;
        }
        let Some((_, entry)) = lookup(lexicon, tok) else {
            continue;
        };
        let negated = lowered[i.saturating_sub(NEGATION_REACH)..i]
            .iter()
            .any(|w| is_polarity_negator(w));
        let p = if negated {
            entry.polarity * NEGATION_MULTIPLIER
        } else {
            entry.polarity
        };
        polarity_sum += p;
        subjectivity_sum += entry.subjectivity;
        matched += 1;
    }
    if matched == 0 {
        return (0.0, 0.0);
    }
    let n = matched as f64;
    (
        (polarity_sum / n).clamp(-1.0, 1.0),
        (subjectivity_sum / n).clamp(0.0, 1.0),
    )
}
