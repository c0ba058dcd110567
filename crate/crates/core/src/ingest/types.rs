use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IngestError;

/// The five championship series covered by the viewership tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sport {
    #[serde(rename = "World_Series")]
    WorldSeries,
    #[serde(rename = "Super_Bowl")]
    SuperBowl,
    #[serde(rename = "NBA_Finals")]
    NbaFinals,
    #[serde(rename = "Stanley_Cup")]
    StanleyCup,
    #[serde(rename = "MLS_Cup")]
    MlsCup,
}

impl Sport {
    pub const ALL: [Sport; 5] = [
        Sport::WorldSeries,
        Sport::SuperBowl,
        Sport::NbaFinals,
        Sport::StanleyCup,
        Sport::MlsCup,
    ];

    /// Category label used in CSV files and one-hot column names.
    pub fn as_str(self) -> &'static str {
        match self {
            Sport::WorldSeries => "World_Series",
            Sport::SuperBowl => "Super_Bowl",
            Sport::NbaFinals => "NBA_Finals",
            Sport::StanleyCup => "Stanley_Cup",
            Sport::MlsCup => "MLS_Cup",
        }
    }

    /// Broad title used as the first search term.
    pub fn event_title(self) -> &'static str {
        match self {
            Sport::WorldSeries => "World Series",
            Sport::SuperBowl => "Super Bowl",
            Sport::NbaFinals => "NBA Finals",
            Sport::StanleyCup => "Stanley Cup",
            Sport::MlsCup => "MLS Cup",
        }
    }
}

impl fmt::Display for Sport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sport::ALL
            .into_iter()
            .find(|sp| sp.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown sport `{s}`"))
    }
}

/// Identity of one televised event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSpec {
    pub name: String,
    pub sport: Sport,
    pub teams: Vec<String>,
    /// Scheduled start, epoch seconds UTC.
    pub start_time: i64,
    pub subreddit: String,
    pub event_title: String,
}

impl EventSpec {
    pub fn validate(&self) -> Result<(), IngestError> {
        if self.start_time <= 0 {
            return Err(IngestError::InvalidSpec(format!(
                "event `{}` has non-positive start time {}",
                self.name, self.start_time
            )));
        }
        if self.event_title.trim().is_empty() {
            return Err(IngestError::InvalidSpec(format!(
                "event `{}` has an empty event title",
                self.name
            )));
        }
        Ok(())
    }
}

/// An event together with its measured average audience.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledEvent {
    pub spec: EventSpec,
    pub year: i32,
    pub avg_viewers_millions: f64,
}

/// One archived submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub title: String,
    pub body: String,
    pub score: i64,
    pub num_comments: u64,
    pub created_utc: i64,
    pub subreddit: String,
}

impl RawPost {
    /// Moderated posts keep their counts but carry no scoreable text.
    pub fn is_removed(&self) -> bool {
        matches!(self.body.trim(), "[removed]" | "[deleted]")
    }

    /// Title and body joined by one space, or empty for removed posts.
    pub fn sentiment_text(&self) -> String {
        if self.is_removed() {
            String::new()
        } else if self.body.is_empty() {
            self.title.clone()
        } else {
            format!("{} {}", self.title, self.body)
        }
    }
}

/// Half-open time range `[after, before)` in epoch seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchWindow {
    pub after: i64,
    pub before: i64,
}

impl FetchWindow {
    /// The `hours` immediately preceding `start`.
    pub fn preceding(start: i64, hours: u32) -> Result<Self, IngestError> {
        if hours == 0 {
            return Err(IngestError::InvalidSpec(
                "window must be at least one hour".into(),
            ));
        }
        if start <= 0 {
            return Err(IngestError::InvalidSpec(format!(
                "non-positive start time {start}"
            )));
        }
        Ok(FetchWindow {
            after: start - i64::from(hours) * 3600,
            before: start,
        })
    }

    pub fn contains(&self, ts: i64) -> bool {
        self.after <= ts && ts < self.before
    }
}

/// File-name friendly form of an event name: `WS G5 2024` becomes `ws_g5_2024`.
pub fn event_slug(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slug() {
        assert_eq!(event_slug("WS G5 2024"), "ws_g5_2024");
        assert_eq!(event_slug("SB XLVI (2012)"), "sb_xlvi_2012");
    }

    #[test]
    fn sport_round_trip() {
        for s in Sport::ALL {
            assert_eq!(s.as_str().parse::<Sport>().unwrap(), s);
        }
        assert!("Copa".parse::<Sport>().is_err());
    }

    #[test]
    fn window_length() {
        let w = FetchWindow::preceding(1_000_000, 72).unwrap();
        assert_eq!(w.before - w.after, 72 * 3600);
        assert!(FetchWindow::preceding(1_000_000, 0).is_err());
    }

    #[test]
    fn removed_posts_have_no_text() {
        let mut p = RawPost {
            id: "a".into(),
            title: "Game day".into(),
            body: "[removed]".into(),
            score: 5,
            num_comments: 2,
            created_utc: 1,
            subreddit: "nba".into(),
        };
        assert_eq!(p.sentiment_text(), "");
        p.body = "let's go".into();
        assert_eq!(p.sentiment_text(), "Game day let's go");
    }
}
