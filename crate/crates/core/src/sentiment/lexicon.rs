use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("lexicon is empty")]
    Empty,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Polarity and subjectivity of one word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarityEntry {
    pub polarity: f64,
    pub subjectivity: f64,
}

/// Word list mapping tokens to polarity in [-1, 1] and subjectivity in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityLexicon {
    entries: HashMap<String, PolarityEntry>,
}

/// Word list mapping tokens to a valence in [-4, 4].
#[derive(Debug, Clone, PartialEq)]
pub struct RuleLexicon {
    entries: HashMap<String, f64>,
}

const BUNDLED_POLARITY: &str = include_str!("../../data/lexicons/polarity_lexicon.tsv");
const BUNDLED_RULES: &str = include_str!("../../data/lexicons/rule_lexicon.tsv");

fn read_file(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Yields `(line number, fields)` for every data line; `#` starts a comment line.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

fn parse_token(line: usize, raw: &str) -> Result<String, LexiconError> {
    if raw.is_empty() || raw.chars().any(char::is_whitespace) {
        return Err(LexiconError::Line {
            line,
            message: format!("invalid token `{raw}`"),
        });
    }
    Ok(raw.to_lowercase())
}

fn parse_in_range(
    line: usize,
    raw: Option<&str>,
    what: &str,
    lo: f64,
    hi: f64,
) -> Result<f64, LexiconError> {
    let raw = raw.ok_or_else(|| LexiconError::Line {
        line,
        message: format!("missing {what}"),
    })?;
    let v: f64 = raw.trim().parse().map_err(|_| LexiconError::Line {
        line,
        message: format!("unparseable {what} `{raw}`"),
    })?;
    if !(lo..=hi).contains(&v) {
        return Err(LexiconError::Line {
            line,
            message: format!("{what} {v} outside [{lo}, {hi}]"),
        });
    }
    Ok(v)
}

impl PolarityLexicon {
    /// Parses `token<TAB>polarity<TAB>subjectivity` lines.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, fields) in data_lines(text) {
            let token = parse_token(line, fields[0])?;
            let polarity = parse_in_range(line, fields.get(1).copied(), "polarity", -1.0, 1.0)?;
            let subjectivity =
                parse_in_range(line, fields.get(2).copied(), "subjectivity", 0.0, 1.0)?;
            entries.insert(
                token,
                PolarityEntry {
                    polarity,
                    subjectivity,
                },
            );
        }
        if entries.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(PolarityLexicon { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path.as_ref())?)
    }

    /// The adjective lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_POLARITY).expect("bundled polarity lexicon is valid")
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, f64, f64)>,
        S: Into<String>,
    {
        PolarityLexicon {
            entries: entries
                .into_iter()
                .map(|(t, polarity, subjectivity)| {
                    (
                        t.into().to_lowercase(),
                        PolarityEntry {
                            polarity,
                            subjectivity,
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn get(&self, token: &str) -> Option<PolarityEntry> {
        self.entries.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same lexicon with every polarity negated.
    pub fn negated(&self) -> Self {
        PolarityLexicon {
            entries: self
                .entries
                .iter()
                .map(|(k, e)| {
                    (
                        k.clone(),
                        PolarityEntry {
                            polarity: -e.polarity,
                            subjectivity: e.subjectivity,
                        },
                    )
                })
                .collect(),
        }
    }
}

impl RuleLexicon {
    /// Parses `token<TAB>valence` lines; extra columns are ignored.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, fields) in data_lines(text) {
            let token = parse_token(line, fields[0])?;
            let valence = parse_in_range(line, fields.get(1).copied(), "valence", -4.0, 4.0)?;
            entries.insert(token, valence);
        }
        if entries.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(RuleLexicon { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(&read_file(path.as_ref())?)
    }

    /// The social-media valence lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_RULES).expect("bundled rule lexicon is valid")
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        RuleLexicon {
            entries: entries
                .into_iter()
                .map(|(t, v)| (t.into().to_lowercase(), v))
                .collect(),
        }
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn negated(&self) -> Self {
        RuleLexicon {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicons_load() {
        let p = PolarityLexicon::bundled();
        assert_eq!(
            p.get("great"),
            Some(PolarityEntry {
                polarity: 0.8,
                subjectivity: 0.75
            })
        );
        let r = RuleLexicon::bundled();
        assert_eq!(r.get("good"), Some(1.9));
        assert!(r.len() > 7000);
    }

    #[test]
    fn out_of_range_valence_is_rejected() {
        let err = RuleLexicon::parse("# c\nok\t1.0\nbad\t4.5\n").unwrap_err();
        assert!(matches!(err, LexiconError::Line { line: 3, .. }));
    }

    #[test]
    fn polarity_needs_subjectivity() {
        assert!(PolarityLexicon::parse("good\t0.7\n").is_err());
        assert!(PolarityLexicon::parse("good\t0.7\t1.2\n").is_err());
    }

    #[test]
    fn empty_lexicon_is_an_error() {
        assert!(matches!(
            RuleLexicon::parse("# nothing\n"),
            Err(LexiconError::Empty)
        ));
    }

    #[test]
    fn tokens_are_lowercased() {
        let r = RuleLexicon::parse("GOOD\t1.9\n").unwrap();
        assert_eq!(r.get("good"), Some(1.9));
    }
}
