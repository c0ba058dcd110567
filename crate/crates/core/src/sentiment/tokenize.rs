/// One whitespace-delimited token.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token<'a> {
    /// Token as written, with trailing `!`/`?` removed.
    pub raw: &'a str,
    /// `raw` stripped of leading and trailing punctuation.
    pub bare: &'a str,
}

impl Token<'_> {
    /// Has letters and none of them lowercase.
    pub fn is_all_caps(&self) -> bool {
        self.bare.chars().any(char::is_alphabetic) && !self.bare.chars().any(char::is_lowercase)
    }

    pub fn is_cased(&self) -> bool {
        self.bare
            .chars()
            .any(|c| c.is_uppercase() || c.is_lowercase())
    }

    pub fn lower_bare(&self) -> String {
        self.bare.to_lowercase()
    }

    pub fn lower_raw(&self) -> String {
        self.raw.to_lowercase()
    }
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation() || matches!(c, '“' | '”' | '‘' | '’' | '…' | '«' | '»' | '–' | '—')
}

/// Splits on Unicode whitespace. Pure-punctuation tokens are kept only when
/// they might be emoticons (the caller decides via lexicon lookup of `raw`).
pub(crate) fn tokenize(text: &str) -> Vec<Token<'_>> {
    text.split_whitespace()
        .filter_map(|piece| {
            let raw = piece.trim_end_matches(['!', '?']);
            let bare = raw.trim_matches(is_punct);
            if raw.is_empty() {
                None
            } else {
                Some(Token { raw, bare })
            }
        })
        .collect()
}

/// Number of `!` at the very end of the text.
pub(crate) fn trailing_exclamations(text: &str) -> usize {
    text.trim_end()
        .chars()
        .rev()
        .take_while(|&c| c == '!')
        .count()
}
