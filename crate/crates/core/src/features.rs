//! Per-event engagement features and the correlation screen.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{EventSpec, RawPost, Sport};
use crate::sentiment::{score_posts, Analyzers};

/// Numeric feature columns, in model order. One-hot sport columns follow.
pub const NUMERIC_FEATURES: [&str; 5] = [
    "total_posts",
    "total_comments",
    "total_scores",
    "avg_polarity",
    "avg_compound",
];

/// Exact header of the engagement CSV.
pub const ENGAGEMENT_HEADER: [&str; 8] = [
    "name",
    "sport",
    "total_posts",
    "total_comments",
    "total_scores",
    "avg_polarity",
    "avg_compound",
    "avg_viewers_millions",
];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("insufficient data: need at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("schema error: missing column `{column}`")]
    Schema { column: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Aggregated engagement over one event's collection window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventEngagement {
    pub name: String,
    pub sport: Sport,
    pub total_posts: u64,
    pub total_comments: u64,
    pub total_scores: i64,
    pub avg_polarity: f64,
    pub avg_compound: f64,
}

impl EventEngagement {
    /// The five numeric features in [`NUMERIC_FEATURES`] order.
    pub fn numeric(&self) -> [f64; 5] {
        [
            self.total_posts as f64,
            self.total_comments as f64,
            self.total_scores as f64,
            self.avg_polarity,
            self.avg_compound,
        ]
    }
}

/// One engagement row with its ground-truth audience.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRow {
    pub engagement: EventEngagement,
    pub viewers_millions: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub rows: Vec<LabeledRow>,
    pub feature_names: Vec<String>,
}

impl Default for Dataset {
    fn default() -> Self {
        Dataset::new(Vec::new())
    }
}

impl Dataset {
    pub fn new(rows: Vec<LabeledRow>) -> Self {
        Dataset {
            rows,
            feature_names: NUMERIC_FEATURES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.viewers_millions).collect()
    }

    /// Subset in the given index order.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Totals and sentiment averages for one event's posts.
pub fn aggregate_event(
    spec: &EventSpec,
    posts: &[RawPost],
    analyzers: &Analyzers,
) -> EventEngagement {
    let sentiment = score_posts(posts, analyzers);
    EventEngagement {
        name: spec.name.clone(),
        sport: spec.sport,
        total_posts: posts.len() as u64,
        total_comments: posts.iter().map(|p| p.num_comments).sum(),
        total_scores: posts.iter().map(|p| p.score).sum(),
        avg_polarity: sentiment.avg_polarity,
        avg_compound: sentiment.avg_compound,
    }
}

/// Removes events without posts. Returns the filtered dataset and the number removed.
pub fn drop_zero_post_events(dataset: Dataset) -> (Dataset, usize) {
    let before = dataset.rows.len();
    let rows: Vec<LabeledRow> = dataset
        .rows
        .into_iter()
        .filter(|r| r.engagement.total_posts > 0)
        .collect();
    let removed = before - rows.len();
    if removed > 0 {
        log::warn!("dropped {removed} event(s) with zero posts");
    }
    if rows.is_empty() && before > 0 {
        log::warn!("every event had zero posts; dataset is empty");
    }
    (
        Dataset {
            rows,
            feature_names: dataset.feature_names,
        },
        removed,
    )
}

/// A column usable in the correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    TotalPosts,
    TotalComments,
    TotalScores,
    AvgPolarity,
    AvgCompound,
    Viewers,
}

impl Column {
    pub const FEATURES: [Column; 5] = [
        Column::TotalPosts,
        Column::TotalComments,
        Column::TotalScores,
        Column::AvgPolarity,
        Column::AvgCompound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::TotalPosts => "total_posts",
            Column::TotalComments => "total_comments",
            Column::TotalScores => "total_scores",
            Column::AvgPolarity => "avg_polarity",
            Column::AvgCompound => "avg_compound",
            Column::Viewers => "avg_viewers_millions",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, FeatureError> {
        Column::FEATURES
            .into_iter()
            .chain([Column::Viewers])
            .find(|c| c.name() == name)
            .ok_or_else(|| FeatureError::UnknownColumn(name.into()))
    }

    pub fn value(self, row: &LabeledRow) -> f64 {
        let e = &row.engagement;
        match self {
            Column::TotalPosts => e.total_posts as f64,
            Column::TotalComments => e.total_comments as f64,
            Column::TotalScores => e.total_scores as f64,
            Column::AvgPolarity => e.avg_polarity,
            Column::AvgCompound => e.avg_compound,
            Column::Viewers => row.viewers_millions,
        }
    }
}

/// Symmetric Pearson correlation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Columns with zero variance; their off-diagonal correlations are 0.
    pub zero_variance: Vec<String>,
}

impl CorrelationMatrix {
    /// Largest off-diagonal |r|, with the pair that attains it.
    pub fn max_off_diagonal(&self) -> Option<(f64, usize, usize)> {
        let n = self.names.len();
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let r = self.values[i][j].abs();
                if best.is_none_or(|(b, _, _)| r > b) {
                    best = Some((r, i, j));
                }
            }
        }
        best
    }
}

/// Pearson r for every pair of `columns`. Diagonal is exactly 1.
pub fn pearson_matrix(
    dataset: &Dataset,
    columns: &[Column],
) -> Result<CorrelationMatrix, FeatureError> {
    let n = dataset.rows.len();
    if n < 2 {
        return Err(FeatureError::InsufficientData { needed: 2, got: n });
    }
    let centered: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| {
            let xs: Vec<f64> = dataset.rows.iter().map(|r| c.value(r)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            xs.into_iter().map(|x| x - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centered
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();

    let mut zero_variance = Vec::new();
    for (c, norm) in columns.iter().zip(&norms) {
        if *norm == 0.0 {
            log::warn!(
                "column `{}` has zero variance; its correlations are reported as 0",
                c.name()
            );
            zero_variance.push(c.name().to_string());
        }
    }

    let k = columns.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in i + 1..k {
            let r = if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                let dot: f64 = centered[i]
                    .iter()
                    .zip(&centered[j])
                    .map(|(a, b)| a * b)
                    .sum();
                (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: columns.iter().map(|c| c.name().to_string()).collect(),
        values,
        zero_variance,
    })
}

/// Reads an engagement CSV (header must match [`ENGAGEMENT_HEADER`] exactly).
pub fn read_engagement_csv<R: Read>(reader: R) -> Result<Dataset, FeatureError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    for column in ENGAGEMENT_HEADER {
        if !headers.iter().any(|h| h == column) {
            return Err(FeatureError::Schema {
                column: column.into(),
            });
        }
    }
    if headers.len() != ENGAGEMENT_HEADER.len()
        || headers.iter().zip(ENGAGEMENT_HEADER).any(|(h, c)| h != c)
    {
        return Err(FeatureError::Row {
            line: 1,
            message: format!("header must be exactly `{}`", ENGAGEMENT_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let err = |message: String| FeatureError::Row { line, message };
        let num = |i: usize| -> Result<f64, FeatureError> {
            let v: f64 = record[i].parse().map_err(|_| {
                err(format!(
                    "unparseable {} `{}`",
                    ENGAGEMENT_HEADER[i], &record[i]
                ))
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(format!("non-finite {}", ENGAGEMENT_HEADER[i])))
            }
        };
        let count = |i: usize| -> Result<u64, FeatureError> {
            record[i].parse().map_err(|_| {
                err(format!(
                    "{} must be a non-negative integer, got `{}`",
                    ENGAGEMENT_HEADER[i], &record[i]
                ))
            })
        };
        let engagement = EventEngagement {
            name: record[0].to_string(),
            sport: record[1].parse().map_err(err)?,
            total_posts: count(2)?,
            total_comments: count(3)?,
            total_scores: record[4].parse().map_err(|_| {
                err(format!(
                    "total_scores must be an integer, got `{}`",
                    &record[4]
                ))
            })?,
            avg_polarity: num(5)?,
            avg_compound: num(6)?,
        };
        if !(-1.0..=1.0).contains(&engagement.avg_polarity)
            || !(-1.0..=1.0).contains(&engagement.avg_compound)
        {
            return Err(err("sentiment averages must lie in [-1, 1]".into()));
        }
        let viewers = num(7)?;
        if viewers < 0.0 {
            return Err(err(format!(
                "avg_viewers_millions must be non-negative, got {viewers}"
            )));
        }
        rows.push(LabeledRow {
            engagement,
            viewers_millions: viewers,
        });
    }
    Ok(Dataset::new(rows))
}

pub fn load_engagement_csv(path: impl AsRef<Path>) -> Result<Dataset, FeatureError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| FeatureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_engagement_csv(file)
}

pub fn write_engagement_csv<W: Write>(writer: W, dataset: &Dataset) -> Result<(), FeatureError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ENGAGEMENT_HEADER)?;
    for row in &dataset.rows {
        let e = &row.engagement;
        w.write_record([
            e.name.clone(),
            e.sport.to_string(),
            e.total_posts.to_string(),
            e.total_comments.to_string(),
            e.total_scores.to_string(),
            e.avg_polarity.to_string(),
            e.avg_compound.to_string(),
            row.viewers_millions.to_string(),
        ])?;
    }
    w.flush().map_err(|source| FeatureError::Io {
        path: "<engagement csv>".into(),
        source,
    })
}

pub fn save_engagement_csv(path: impl AsRef<Path>, dataset: &Dataset) -> Result<(), FeatureError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|source| FeatureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_engagement_csv(file, dataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> EventSpec {
        EventSpec {
            name: "SB XLVI".into(),
            sport: Sport::SuperBowl,
            teams: vec!["NYG".into(), "NEP".into()],
            start_time: 1_328_484_600,
            subreddit: "nfl".into(),
            event_title: "Super Bowl".into(),
        }
    }

    fn post(score: i64, comments: u64) -> RawPost {
        RawPost {
            id: format!("{score}_{comments}"),
            title: "Super Bowl".into(),
            body: String::new(),
            score,
            num_comments: comments,
            created_utc: 1,
            subreddit: "nfl".into(),
        }
    }

    fn row(name: &str, posts: u64, viewers: f64) -> LabeledRow {
        LabeledRow {
            engagement: EventEngagement {
                name: name.into(),
                sport: Sport::NbaFinals,
                total_posts: posts,
                total_comments: posts * 3,
                total_scores: posts as i64 - 4,
                avg_polarity: 0.1,
                avg_compound: 0.2,
            },
            viewers_millions: viewers,
        }
    }

    #[test]
    fn totals() {
        let e = aggregate_event(&spec(), &[post(3, 2), post(-1, 5)], &Analyzers::bundled());
        assert_eq!((e.total_posts, e.total_comments, e.total_scores), (2, 7, 2));
        assert_eq!(e.sport, Sport::SuperBowl);
    }

    #[test]
    fn empty_posts() {
        let e = aggregate_event(&spec(), &[], &Analyzers::bundled());
        assert_eq!((e.total_posts, e.total_comments, e.total_scores), (0, 0, 0));
        assert_eq!((e.avg_polarity, e.avg_compound), (0.0, 0.0));
    }

    #[test]
    fn zero_post_filter() {
        let ds = Dataset::new(vec![
            row("a", 1, 1.0),
            row("b", 0, 1.0),
            row("c", 2, 1.0),
            row("d", 3, 1.0),
            row("e", 4, 1.0),
        ]);
        let (kept, removed) = drop_zero_post_events(ds.clone());
        assert_eq!((kept.len(), removed), (4, 1));

        let (kept, removed) = drop_zero_post_events(kept);
        assert_eq!((kept.len(), removed), (4, 0));

        let (kept, removed) =
            drop_zero_post_events(Dataset::new(vec![row("z", 0, 1.0), row("y", 0, 2.0)]));
        assert!(kept.is_empty());
        assert_eq!(removed, 2);
    }

    #[test]
    fn pearson_self_and_negation() {
        let ds = Dataset::new(
            (1..=6)
                .map(|i| row(&i.to_string(), i, -(i as f64)))
                .collect(),
        );
        let m = pearson_matrix(&ds, &[Column::TotalPosts, Column::Viewers]).unwrap();
        assert_eq!(m.values[0][0], 1.0);
        assert!((m.values[0][1] + 1.0).abs() < 1e-12);
        assert_eq!(m.values[0][1], m.values[1][0]);
    }

    #[test]
    fn pearson_zero_variance_is_flagged() {
        let ds = Dataset::new((1..=4).map(|i| row(&i.to_string(), i, 1.0)).collect());
        let m = pearson_matrix(&ds, &[Column::TotalPosts, Column::AvgPolarity]).unwrap();
        assert_eq!(m.values[0][1], 0.0);
        assert_eq!(m.values[1][1], 1.0);
        assert_eq!(m.zero_variance, vec!["avg_polarity"]);
    }

    #[test]
    fn pearson_needs_two_rows() {
        let ds = Dataset::new(vec![row("a", 1, 1.0)]);
        assert!(matches!(
            pearson_matrix(&ds, &Column::FEATURES),
            Err(FeatureError::InsufficientData { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn engagement_csv_round_trip() {
        let ds = Dataset::new(vec![
            row("SB XLVI", 98, 111.35),
            row("WS G5 2024", 120, 18.15),
        ]);
        let mut buf = Vec::new();
        write_engagement_csv(&mut buf, &ds).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("name,sport,total_posts,total_comments,total_scores,avg_polarity,avg_compound,avg_viewers_millions\n"));
        assert_eq!(read_engagement_csv(text.as_bytes()).unwrap(), ds);
    }

    #[test]
    fn engagement_csv_missing_column() {
        let text = "name,sport,total_posts,total_comments,total_scores,avg_polarity,avg_viewers_millions\n";
        match read_engagement_csv(text.as_bytes()) {
            Err(FeatureError::Schema { column }) => assert_eq!(column, "avg_compound"),
            other => panic!("{other:?}"),
        }
    }
}
