use std::io::Read;
use std::path::Path;

use chrono::DateTime;

use super::{IngestError, LabeledEvent};
use crate::ingest::types::{EventSpec, Sport};

/// Exact header of the viewership CSV.
pub const VIEWERSHIP_HEADER: [&str; 7] = [
    "name",
    "sport",
    "year",
    "teams",
    "start_time",
    "subreddit",
    "avg_viewers_millions",
];

/// Loads labelled events from a viewership CSV file.
pub fn load_viewership_csv(path: impl AsRef<Path>) -> Result<Vec<LabeledEvent>, IngestError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_viewership(file)
}

pub fn read_viewership<R: Read>(reader: R) -> Result<Vec<LabeledEvent>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::Decode {
            index: None,
            message: e.to_string(),
        })?
        .clone();
    for column in VIEWERSHIP_HEADER {
        if !headers.iter().any(|h| h == column) {
            return Err(IngestError::Schema {
                column: column.into(),
            });
        }
    }
    if headers.len() != VIEWERSHIP_HEADER.len()
        || headers.iter().zip(VIEWERSHIP_HEADER).any(|(h, c)| h != c)
    {
        return Err(IngestError::Decode {
            index: None,
            message: format!("header must be exactly `{}`", VIEWERSHIP_HEADER.join(",")),
        });
    }

    let mut events = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| IngestError::Row {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row_err = |message: String| IngestError::Row { line, message };

        let name = record[0].to_string();
        let sport: Sport = record[1].parse().map_err(row_err)?;
        let year: i32 = record[2]
            .parse()
            .map_err(|_| row_err(format!("unparseable year `{}`", &record[2])))?;
        let teams = record[3]
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect();
        let start_time = parse_timestamp(&record[4]).ok_or_else(|| {
            row_err(format!(
                "unparseable start_time `{}` (ISO-8601 with offset required)",
                &record[4]
            ))
        })?;
        let subreddit = record[5].trim_start_matches("r/").to_string();
        let viewers: f64 = record[6]
            .parse()
            .map_err(|_| row_err(format!("unparseable viewer count `{}`", &record[6])))?;
        if !viewers.is_finite() || viewers < 0.0 {
            return Err(row_err(format!(
                "viewer count must be non-negative, got {viewers}"
            )));
        }

        let spec = EventSpec {
            name,
            sport,
            teams,
            start_time,
            subreddit,
            event_title: sport.event_title().to_string(),
        };
        spec.validate().map_err(|e| row_err(e.to_string()))?;
        events.push(LabeledEvent {
            spec,
            year,
            avg_viewers_millions: viewers,
        });
    }
    Ok(events)
}

/// Parses ISO-8601 with an explicit offset, seconds optional.
fn parse_timestamp(s: &str) -> Option<i64> {
    DateTime::parse_from_rfc3339(s)
        .or_else(|_| DateTime::parse_from_str(s, "%Y-%m-%dT%H:%M%:z"))
        .ok()
        .map(|dt| dt.timestamp())
}
