mod common;

use buzzcast::explain::GlobalImportance;
use buzzcast::features::pearson_matrix;
use buzzcast::pipeline::HEATMAP_COLUMNS;
use buzzcast::report::{
    compute_metrics, heatmap_svg, importance_svg, render_scatter, scatter_svg, ReportError,
};
use proptest::prelude::*;

#[test]
fn metric_oracle() {
    let m = compute_metrics(&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0]).unwrap();
    assert!((m.mae - 1.0).abs() < 1e-12);
    assert!((m.rmse - 1.0).abs() < 1e-12);
    assert!((m.r2 + 0.5).abs() < 1e-12);
}

#[test]
fn perfect_and_mean_predictions() {
    let y = [3.0, 7.5, 1.25, 10.0];
    let m = compute_metrics(&y, &y).unwrap();
    assert_eq!((m.mae, m.rmse, m.r2), (0.0, 0.0, 1.0));
    let mean = y.iter().sum::<f64>() / 4.0;
    let m = compute_metrics(&y, &[mean; 4]).unwrap();
    assert!(m.r2.abs() < 1e-12);
}

#[test]
fn metric_errors() {
    assert!(matches!(
        compute_metrics(&[1.0], &[1.0, 2.0]),
        Err(ReportError::Shape { .. })
    ));
    assert!(matches!(compute_metrics(&[], &[]), Err(ReportError::Empty)));
    assert!(matches!(
        compute_metrics(&[2.0, 2.0], &[1.0, 3.0]),
        Err(ReportError::UndefinedR2 { mae, rmse }) if mae == 1.0 && rmse == 1.0
    ));
}

fn count(svg: &str, needle: &str) -> usize {
    svg.matches(needle).count()
}

#[test]
fn scatter_structure() {
    let svg = scatter_svg(&[1.0, 2.0, 3.0], &[1.5, 2.5, 2.0]).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"width="800" height="600""#));
    assert_eq!(count(&svg, "<circle"), 3);
    assert_eq!(count(&svg, "<line"), 1);
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(
        svg,
        scatter_svg(&[1.0, 2.0, 3.0], &[1.5, 2.5, 2.0]).unwrap()
    );
    assert!(matches!(scatter_svg(&[], &[]), Err(ReportError::Empty)));
}

#[test]
fn scatter_file_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    render_scatter(&[10.0, 20.0], &[11.0, 19.0], &a).unwrap();
    render_scatter(&[10.0, 20.0], &[11.0, 19.0], &b).unwrap();
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn importance_bars_follow_rank() {
    let imp = GlobalImportance {
        feature_names: vec!["a".into(), "b<c".into(), "d".into()],
        mean_abs: vec![0.2, 0.8, 0.0],
        order: vec![1, 0, 2],
    };
    let svg = importance_svg(&imp).unwrap();
    assert_eq!(count(&svg, r#"class="bar""#), 3);
    assert!(svg.contains("b&lt;c"));
    assert!(svg.find("b&lt;c").unwrap() < svg.find(">a<").unwrap());
}

#[test]
fn heatmap_cells_are_annotated() {
    let dataset = common::sample_dataset();
    let matrix = pearson_matrix(&dataset, &HEATMAP_COLUMNS).unwrap();
    let svg = heatmap_svg(&matrix).unwrap();
    assert_eq!(count(&svg, r#"class="cell""#), 36);
    assert_eq!(count(&svg, ">1.00<"), 6);
    for row in &matrix.values {
        for r in row {
            assert!(svg.contains(&format!(">{r:.2}<")));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rmse_never_below_mae(pairs in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..60)) {
        let (t, p): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        match compute_metrics(&t, &p) {
            Ok(m) => {
                prop_assert!(m.rmse >= m.mae);
                prop_assert!(m.r2 <= 1.0);
            }
            Err(ReportError::UndefinedR2 { mae, rmse }) => prop_assert!(rmse >= mae),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn metrics_ignore_row_order(pairs in prop::collection::vec((0f64..100.0, 0f64..100.0), 2..40), rot in 0usize..40) {
        let (t, p): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let k = rot % pairs.len();
        let (mut t2, mut p2) = (t.clone(), p.clone());
        t2.rotate_left(k);
        p2.rotate_left(k);
        if let (Ok(a), Ok(b)) = (compute_metrics(&t, &p), compute_metrics(&t2, &p2)) {
            prop_assert!((a.mae - b.mae).abs() <= 1e-9 * (1.0 + a.mae));
            prop_assert!((a.rmse - b.rmse).abs() <= 1e-9 * (1.0 + a.rmse));
            prop_assert!((a.r2 - b.r2).abs() <= 1e-9);
        }
    }
}
