use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::features::{Dataset, NUMERIC_FEATURES};
use crate::ingest::Sport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IqrConfig {
    /// Fence multiplier.
    pub k: f64,
    /// Sport groups smaller than this are not screened.
    pub min_group_size: usize,
}

impl Default for IqrConfig {
    fn default() -> Self {
        IqrConfig {
            k: 1.5,
            min_group_size: 5,
        }
    }
}

/// One feature value outside its group's fences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierFlag {
    /// Row index in the screened dataset.
    pub row: usize,
    pub name: String,
    pub sport: Sport,
    pub feature: String,
    pub value: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenResult {
    pub retained: Dataset,
    /// Indices (into the input) of the retained rows, in input order.
    pub retained_rows: Vec<usize>,
    pub flags: Vec<OutlierFlag>,
}

impl ScreenResult {
    /// Distinct flagged row indices, ascending.
    pub fn flagged_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.flags.iter().map(|f| f.row).collect();
        rows.dedup();
        rows
    }
}

/// Quantile by linear interpolation between order statistics at `p * (n - 1)`.
/// `sorted` must be ascending and non-empty.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Tukey fences `(q1 - k*iqr, q3 + k*iqr)` of `values`.
pub fn tukey_fences(values: &[f64], k: f64) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_type7(&sorted, 0.25);
    let q3 = quantile_type7(&sorted, 0.75);
    let iqr = q3 - q1;
    (q1 - k * iqr, q3 + k * iqr)
}

/// Flags, per sport and per numeric feature, rows outside the Tukey fences,
/// and drops every flagged row.
pub fn iqr_screen_by_sport(dataset: &Dataset, config: &IqrConfig) -> ScreenResult {
    let mut groups: BTreeMap<Sport, Vec<usize>> = BTreeMap::new();
    for (i, row) in dataset.rows.iter().enumerate() {
        groups.entry(row.engagement.sport).or_default().push(i);
    }

    let mut flags = Vec::new();
    for (sport, members) in &groups {
        if members.len() < config.min_group_size {
            continue;
        }
        for (f, feature) in NUMERIC_FEATURES.iter().enumerate() {
            let values: Vec<f64> = members
                .iter()
                .map(|&i| dataset.rows[i].engagement.numeric()[f])
                .collect();
            let (lower, upper) = tukey_fences(&values, config.k);
            for (&i, &v) in members.iter().zip(&values) {
                if v < lower || v > upper {
                    flags.push(OutlierFlag {
                        row: i,
                        name: dataset.rows[i].engagement.name.clone(),
                        sport: *sport,
                        feature: feature.to_string(),
                        value: v,
                        lower_fence: lower,
                        upper_fence: upper,
                    });
                }
            }
        }
    }
    flags.sort_by(|a, b| a.row.cmp(&b.row).then_with(|| a.feature.cmp(&b.feature)));
    for flag in &flags {
        log::info!(
            "outlier: {} ({}) {}={} outside [{}, {}]",
            flag.name,
            flag.sport,
            flag.feature,
            flag.value,
            flag.lower_fence,
            flag.upper_fence
        );
    }

    let flagged: std::collections::HashSet<usize> = flags.iter().map(|f| f.row).collect();
    let retained_rows: Vec<usize> = (0..dataset.len())
        .filter(|i| !flagged.contains(i))
        .collect();
    ScreenResult {
        retained: dataset.select(&retained_rows),
        retained_rows,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{EventEngagement, LabeledRow};

    fn dataset(sport: Sport, posts: &[u64]) -> Dataset {
        Dataset::new(
            posts
                .iter()
                .enumerate()
                .map(|(i, &p)| LabeledRow {
                    engagement: EventEngagement {
                        name: format!("e{i}"),
                        sport,
                        total_posts: p,
                        total_comments: 10,
                        total_scores: 5,
                        avg_polarity: 0.1,
                        avg_compound: 0.3,
                    },
                    viewers_millions: 1.0,
                })
                .collect(),
        )
    }

    #[test]
    fn quartiles_type7() {
        let v: Vec<f64> = (1..=10).map(f64::from).chain([100.0]).collect();
        assert_eq!(quantile_type7(&v, 0.25), 3.5);
        assert_eq!(quantile_type7(&v, 0.75), 8.5);
        assert_eq!(tukey_fences(&v, 1.5), (-4.0, 16.0));
    }

    #[test]
    fn flags_the_far_value() {
        let posts: Vec<u64> = (1..=10).chain([100]).collect();
        let res = iqr_screen_by_sport(&dataset(Sport::NbaFinals, &posts), &IqrConfig::default());
        assert_eq!(res.flagged_rows(), vec![10]);
        assert_eq!(res.flags[0].upper_fence, 16.0);
        assert_eq!(res.retained.len(), 10);
    }

    #[test]
    fn identical_values_flag_nothing() {
        let res = iqr_screen_by_sport(&dataset(Sport::MlsCup, &[7; 8]), &IqrConfig::default());
        assert!(res.flags.is_empty());
    }

    #[test]
    fn small_groups_are_exempt() {
        let res = iqr_screen_by_sport(
            &dataset(Sport::MlsCup, &[1, 2, 3, 1000]),
            &IqrConfig::default(),
        );
        assert!(res.flags.is_empty());
        assert_eq!(res.retained.len(), 4);
    }

    #[test]
    fn groups_are_screened_separately() {
        let mut ds = dataset(Sport::SuperBowl, &[100, 101, 102, 103, 104]);
        ds.rows
            .extend(dataset(Sport::MlsCup, &[1, 2, 3, 4, 5]).rows);
        // pooled, the small values would be far below the Super Bowl ones
        assert!(iqr_screen_by_sport(&ds, &IqrConfig::default())
            .flags
            .is_empty());
    }
}
