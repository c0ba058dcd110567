mod common;

use buzzcast::features::Dataset;
use buzzcast::ingest::Sport;
use buzzcast::preprocess::{
    expm1, iqr_screen_by_sport, log1p, minmax_apply, minmax_fit, prepare, split, EncoderState,
    IqrConfig, PreprocessConfig, PreprocessError,
};
use buzzcast::Matrix;
use proptest::prelude::*;

/// Textbook quartiles: sort, then interpolate at p * (n - 1).
fn oracle_quartile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = p * (v.len() as f64 - 1.0);
    let i = pos as usize;
    if i + 1 >= v.len() {
        return v[i];
    }
    v[i] * (1.0 - (pos - i as f64)) + v[i + 1] * (pos - i as f64)
}

fn dataset(rows: &[(usize, [f64; 5])]) -> Dataset {
    Dataset::new(
        rows.iter()
            .enumerate()
            .map(|(i, (s, n))| common::row(&format!("e{i}"), Sport::ALL[*s], *n, 1.0 + i as f64))
            .collect(),
    )
}

#[test]
fn flags_only_the_extreme_value() {
    let rows: Vec<(usize, [f64; 5])> = (1..=10)
        .chain([100])
        .map(|v| (0, [v as f64, 5.0, 5.0, 0.1, 0.1]))
        .collect();
    let screen = iqr_screen_by_sport(&dataset(&rows), &IqrConfig::default());
    assert_eq!(screen.flagged_rows(), vec![10]);
    assert_eq!(screen.retained.len(), 10);
}

#[test]
fn minmax_example() {
    let m = Matrix::column(&[0.0, 5.0, 10.0]);
    let s = minmax_fit(&m).unwrap();
    assert_eq!(
        minmax_apply(&s, &m).unwrap().col_values(0),
        vec![0.0, 0.5, 1.0]
    );
}

#[test]
fn log_round_trip_sweep() {
    for i in 0..1000 {
        let x = 200.0 * i as f64 / 999.0;
        assert!((expm1(log1p(x).unwrap()) - x).abs() <= 1e-12 * x.max(1.0));
    }
    assert!(matches!(log1p(-0.5), Err(PreprocessError::Domain(_))));
}

#[test]
fn scaler_never_sees_test_rows() {
    let base = prepare(&common::sample_dataset(), &PreprocessConfig::default(), 42).unwrap();
    // screening is pre-split; skip it so perturbed rows cannot change the row set
    let config = PreprocessConfig {
        skip_screen: true,
        ..PreprocessConfig::default()
    };
    let a = prepare(&base.screened, &config, 42).unwrap();
    let mut poisoned_screened = base.screened.clone();
    for &i in &a.split.test {
        poisoned_screened.rows[i].engagement.total_posts *= 1000;
        poisoned_screened.rows[i].engagement.total_scores = -5000;
    }
    let b = prepare(&poisoned_screened, &config, 42).unwrap();
    assert_eq!(a.split, b.split);
    assert_eq!(a.space, b.space);
    assert_ne!(a.x_test, b.x_test);
}

proptest! {
    #[test]
    fn screen_matches_brute_force_fences(
        rows in prop::collection::vec((0usize..3, prop::array::uniform5(-50.0f64..50.0)), 1..40),
        outlier in prop::option::of((0usize..40, 0usize..5, 100.0f64..1000.0)),
    ) {
        let mut rows = rows;
        if let Some((r, f, v)) = outlier {
            let r = r % rows.len();
            rows[r].1[f] = v;
        }
        let ds = dataset(&rows);
        let config = IqrConfig::default();
        let screen = iqr_screen_by_sport(&ds, &config);

        // oracle reads stored values: count columns are integers
        let stored: Vec<[f64; 5]> = ds.rows.iter().map(|r| r.engagement.numeric()).collect();
        let mut expected = Vec::new();
        for (i, (sport, _)) in rows.iter().enumerate() {
            let values = stored[i];
            let group: Vec<usize> = (0..rows.len()).filter(|&j| rows[j].0 == *sport).collect();
            if group.len() < config.min_group_size {
                continue;
            }
            let outside = (0..5).any(|f| {
                let col: Vec<f64> = group.iter().map(|&j| stored[j][f]).collect();
                let q1 = oracle_quartile(&col, 0.25);
                let q3 = oracle_quartile(&col, 0.75);
                let iqr = q3 - q1;
                values[f] < q1 - 1.5 * iqr || values[f] > q3 + 1.5 * iqr
            });
            if outside {
                expected.push(i);
            }
        }
        prop_assert_eq!(screen.flagged_rows(), expected);
    }

    #[test]
    fn split_partitions_rows(n in 5usize..200, seed in any::<u64>()) {
        let s = split(n, 0.8, seed).unwrap();
        prop_assert_eq!(s.train.len(), (0.8 * n as f64).round() as usize);
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(&s, &split(n, 0.8, seed).unwrap());
    }

    #[test]
    fn train_features_scale_into_unit_interval(values in prop::collection::vec(-1e6f64..1e6, 2..50)) {
        let m = Matrix::column(&values);
        let s = minmax_fit(&m).unwrap();
        for v in minmax_apply(&s, &m).unwrap().col_values(0) {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn one_hot_sums(cats in prop::collection::vec("[a-d]", 1..6), probe in "[a-f]") {
        let enc = EncoderState::fit(cats.iter().map(String::as_str));
        let v = enc.one_hot(&probe);
        let sum: f64 = v.iter().sum();
        prop_assert!(sum <= 1.0);
        prop_assert_eq!(sum == 1.0, cats.contains(&probe));
    }
}
