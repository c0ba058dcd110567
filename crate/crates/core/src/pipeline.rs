//! End-to-end stages as run by the `buzzcast` binary.
//!
//! Each stage reads the previous stage's files and writes its own, so any
//! stage can be rerun in isolation:
//!
//! | stage       | reads                              | writes |
//! |-------------|------------------------------------|--------|
//! | `fetch`     | events CSV, archive                | `<posts_dir>/<slug>.json` |
//! | `featurize` | events CSV, post fixtures          | engagement CSV |
//! | `train`     | engagement CSV                     | `model.json`, `cv_results.csv`, `run_metadata.json` |
//! | `evaluate`  | model, engagement CSV              | `metrics.json`, `scatter.svg` |
//! | `explain`   | model, engagement CSV              | `attributions.csv`, `importance.csv`, `importance.svg` |
//! | `report`    | engagement CSV, run directory      | `heatmap.svg`, `summary.md` |

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::explain::{
    global_importance, sample_background, shapley_values, Attribution, GlobalImportance,
};
use crate::features::{
    aggregate_event, drop_zero_post_events, load_engagement_csv, pearson_matrix,
    save_engagement_csv, Column, CorrelationMatrix, Dataset, LabeledRow,
};
use crate::ingest::{
    event_slug, fetch_window, load_posts_fixture, write_posts_fixture, ArchiveSource, LabeledEvent,
    LocalArchive,
};
use crate::model::{fit_gbm, grid_search_cv, GbmEnsemble, GridSearch, HyperParams};
use crate::preprocess::{log1p, prepare, Prepared, PreprocessReport};
use crate::report::{
    compute_metrics, render_heatmap, render_importance, render_scatter, ReportError,
};
use crate::sentiment::{Analyzers, PolarityLexicon, RuleLexicon};
use crate::{Error, Matrix, Result};

pub const MODEL_FILE: &str = "model.json";
pub const CV_FILE: &str = "cv_results.csv";
pub const METADATA_FILE: &str = "run_metadata.json";
pub const METRICS_FILE: &str = "metrics.json";
pub const SCATTER_FILE: &str = "scatter.svg";
pub const ATTRIBUTIONS_FILE: &str = "attributions.csv";
pub const IMPORTANCE_CSV_FILE: &str = "importance.csv";
pub const IMPORTANCE_SVG_FILE: &str = "importance.svg";
pub const HEATMAP_FILE: &str = "heatmap.svg";
pub const SUMMARY_FILE: &str = "summary.md";

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    write(path, &(text + "\n"))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Path of an event's post fixture inside `posts_dir`.
pub fn fixture_path(posts_dir: &Path, event_name: &str) -> PathBuf {
    posts_dir.join(format!("{}.json", event_slug(event_name)))
}

/// Loads every `*.json` fixture in `dir` into one archive.
pub fn load_archive_dir(dir: &Path) -> Result<LocalArchive> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut posts = Vec::new();
    for path in &paths {
        posts.extend(load_posts_fixture(path)?);
    }
    log::info!(
        "loaded {} posts from {} fixture file(s) in {}",
        posts.len(),
        paths.len(),
        dir.display()
    );
    Ok(LocalArchive::new(posts))
}

/// Posts collected per event by [`fetch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FetchSummary {
    pub events: Vec<(String, usize)>,
}

/// Collects each event's window from `source` and writes one fixture per event.
pub fn fetch<S: ArchiveSource + ?Sized>(
    source: &S,
    events: &[LabeledEvent],
    window_hours: u32,
    posts_dir: &Path,
) -> Result<FetchSummary> {
    create_dir(posts_dir)?;
    let mut summary = Vec::with_capacity(events.len());
    for event in events {
        let posts = fetch_window(source, &event.spec, window_hours)?;
        log::info!("{}: {} posts", event.spec.name, posts.len());
        write_posts_fixture(fixture_path(posts_dir, &event.spec.name), &posts)?;
        summary.push((event.spec.name.clone(), posts.len()));
    }
    Ok(FetchSummary { events: summary })
}

/// Analyzers with the bundled lexicons and the configured rule constants.
pub fn analyzers(config: &Config) -> Result<Analyzers> {
    Ok(Analyzers::new(
        PolarityLexicon::bundled(),
        RuleLexicon::bundled(),
        config.sentiment,
    )?)
}

/// Aggregates each event's fixture into an engagement row. Events without a
/// fixture or without posts are dropped with a warning.
pub fn featurize(
    events: &[LabeledEvent],
    posts_dir: &Path,
    analyzers: &Analyzers,
) -> Result<(Dataset, usize)> {
    let mut rows = Vec::with_capacity(events.len());
    for event in events {
        let path = fixture_path(posts_dir, &event.spec.name);
        let posts = if path.exists() {
            load_posts_fixture(&path)?
        } else {
            log::warn!("{}: no post fixture at {}", event.spec.name, path.display());
            Vec::new()
        };
        rows.push(LabeledRow {
            engagement: aggregate_event(&event.spec, &posts, analyzers),
            viewers_millions: event.avg_viewers_millions,
        });
    }
    Ok(drop_zero_post_events(Dataset::new(rows)))
}

/// Everything produced by [`train`].
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: GbmEnsemble,
    pub search: GridSearch,
    pub prepared: Prepared,
    pub metadata: RunMetadata,
}

/// Reproducibility record written next to the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub version: String,
    pub seed: u64,
    pub window_hours: u32,
    pub input_rows: usize,
    pub cv_folds: usize,
    pub grid_size: usize,
    pub fits: usize,
    pub best_params: HyperParams,
    pub best_cv_mae_log: f64,
    pub preprocess: PreprocessReport,
}

/// Screens, splits and encodes `dataset`, grid-searches on the training split
/// and refits the best parameters on the whole training split.
pub fn train(dataset: &Dataset, config: &Config) -> Result<TrainOutcome> {
    let seed = config.seed;
    let prepared = prepare(dataset, &config.preprocess, seed)?;
    let search = grid_search_cv(
        &prepared.x_train,
        &prepared.y_train_log,
        &config.model.grid,
        config.model.cv_folds,
        seed,
    )?;
    let best = search.best;
    log::info!(
        "best parameters {best:?} (mean CV MAE {:.4} log)",
        search.best_result().mean_mae
    );
    let booster = fit_gbm(&prepared.x_train, &prepared.y_train_log, &best, seed)?;
    let model = GbmEnsemble::new(booster, prepared.space.clone(), best, seed)?;
    let metadata = RunMetadata {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        window_hours: config.ingest.window_hours,
        input_rows: dataset.len(),
        cv_folds: config.model.cv_folds,
        grid_size: search.results.len(),
        fits: search.fits,
        best_params: best,
        best_cv_mae_log: search.best_result().mean_mae,
        preprocess: prepared.report(),
    };
    Ok(TrainOutcome {
        model,
        search,
        prepared,
        metadata,
    })
}

pub fn write_train_artifacts(outcome: &TrainOutcome, out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    let path = out_dir.join(MODEL_FILE);
    outcome.model.save(&path)?;
    write(&out_dir.join(CV_FILE), &outcome.search.cv_table())?;
    write_json(&out_dir.join(METADATA_FILE), &outcome.metadata)
}

/// Which rows `evaluate` scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalSplit {
    /// The held-out split reproduced from the model's seed.
    Test,
    /// Every row that survived outlier screening (training and test).
    Full,
}

impl fmt::Display for EvalSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalSplit::Test => "test",
            EvalSplit::Full => "full",
        })
    }
}

impl std::str::FromStr for EvalSplit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "test" => Ok(EvalSplit::Test),
            "full" => Ok(EvalSplit::Full),
            other => Err(Error::Validation(format!(
                "unknown split `{other}` (expected test or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub name: String,
    pub actual: f64,
    pub predicted: f64,
}

/// Viewer-space evaluation. `r2` is absent when the actual values are constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub split: EvalSplit,
    pub n: usize,
    pub mae: f64,
    pub rmse: f64,
    pub r2: Option<f64>,
    pub rows: Vec<EvalRow>,
}

impl Evaluation {
    pub fn actual(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.actual).collect()
    }

    pub fn predicted(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.predicted).collect()
    }
}

/// Re-runs preparation with the model's seed and checks that it reproduces
/// the model's transforms, which ties the split to the one used in training.
pub fn reproduce_split(
    model: &GbmEnsemble,
    dataset: &Dataset,
    config: &Config,
) -> Result<Prepared> {
    let prepared = prepare(dataset, &config.preprocess, model.seed)?;
    if prepared.space != model.feature_space() {
        return Err(Error::Validation(
            "engagement data or preprocessing settings differ from the ones the model was trained on".into(),
        ));
    }
    Ok(prepared)
}

/// Scores the model in viewer space on the chosen split.
pub fn evaluate(
    model: &GbmEnsemble,
    dataset: &Dataset,
    split: EvalSplit,
    config: &Config,
) -> Result<Evaluation> {
    let prepared = reproduce_split(model, dataset, config)?;
    let rows = match split {
        EvalSplit::Test => prepared.test(),
        EvalSplit::Full => prepared.screened.clone(),
    };
    let mut out = Vec::with_capacity(rows.len());
    for row in &rows.rows {
        out.push(EvalRow {
            name: row.engagement.name.clone(),
            actual: row.viewers_millions,
            predicted: model.predict_viewers(&row.engagement)?,
        });
    }
    let actual: Vec<f64> = out.iter().map(|r| r.actual).collect();
    let predicted: Vec<f64> = out.iter().map(|r| r.predicted).collect();
    let (mae, rmse, r2) = match compute_metrics(&actual, &predicted) {
        Ok(m) => (m.mae, m.rmse, Some(m.r2)),
        Err(ReportError::UndefinedR2 { mae, rmse }) => {
            log::warn!("R² undefined: actual viewership is constant on the {split} split");
            (mae, rmse, None)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Evaluation {
        split,
        n: out.len(),
        mae,
        rmse,
        r2,
        rows: out,
    })
}

pub fn write_evaluation(evaluation: &Evaluation, out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    write_json(&out_dir.join(METRICS_FILE), evaluation)?;
    render_scatter(
        &evaluation.actual(),
        &evaluation.predicted(),
        out_dir.join(SCATTER_FILE),
    )?;
    Ok(())
}

/// Attribution for one event plus global importance over all screened rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub event: String,
    pub attribution: Attribution,
    pub importance: GlobalImportance,
}

/// Explains the model against a background drawn from its training split.
///
/// `event` selects the explained row by name; by default the first test row.
pub fn explain(
    model: &GbmEnsemble,
    dataset: &Dataset,
    event: Option<&str>,
    config: &Config,
) -> Result<Explanation> {
    let prepared = reproduce_split(model, dataset, config)?;
    let background =
        sample_background(&prepared.x_train, config.explain.background_cap, model.seed);
    let all = prepared.space.encode_dataset(&prepared.screened)?;
    let index = match event {
        Some(name) => prepared
            .screened
            .rows
            .iter()
            .position(|r| r.engagement.name == name)
            .ok_or_else(|| {
                Error::Validation(format!("event `{name}` is not in the screened dataset"))
            })?,
        None => *prepared.split.test.first().unwrap_or(&0),
    };
    let attribution = shapley_values(model, all.row(index), &background)?;
    let importance = global_importance(model, &all, &background)?;
    Ok(Explanation {
        event: prepared.screened.rows[index].engagement.name.clone(),
        attribution,
        importance,
    })
}

pub fn write_explanation(explanation: &Explanation, out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    explanation
        .attribution
        .save_csv(out_dir.join(ATTRIBUTIONS_FILE))?;
    explanation
        .importance
        .save_csv(out_dir.join(IMPORTANCE_CSV_FILE))?;
    render_importance(&explanation.importance, out_dir.join(IMPORTANCE_SVG_FILE))?;
    Ok(())
}

/// Columns of the correlation figure: the numeric features and the target.
pub const HEATMAP_COLUMNS: [Column; 6] = [
    Column::TotalPosts,
    Column::TotalComments,
    Column::TotalScores,
    Column::AvgPolarity,
    Column::AvgCompound,
    Column::Viewers,
];

/// Writes the correlation heatmap and a markdown summary of whatever run
/// artifacts exist in `run_dir`.
pub fn report(dataset: &Dataset, run_dir: &Path) -> Result<CorrelationMatrix> {
    create_dir(run_dir)?;
    let corr = pearson_matrix(dataset, &HEATMAP_COLUMNS)?;
    render_heatmap(&corr, run_dir.join(HEATMAP_FILE))?;

    let metadata: Option<RunMetadata> = optional(run_dir.join(METADATA_FILE), read_json)?;
    let evaluation: Option<Evaluation> = optional(run_dir.join(METRICS_FILE), read_json)?;
    let importance: Option<String> = optional(run_dir.join(IMPORTANCE_CSV_FILE), |p| {
        std::fs::read_to_string(p).map_err(|e| Error::io(p, e))
    })?;
    let summary = summary_markdown(
        dataset,
        &corr,
        metadata.as_ref(),
        evaluation.as_ref(),
        importance.as_deref(),
    );
    write(&run_dir.join(SUMMARY_FILE), &summary)?;
    Ok(corr)
}

fn optional<T>(path: PathBuf, read: impl Fn(&Path) -> Result<T>) -> Result<Option<T>> {
    if path.exists() {
        read(&path).map(Some)
    } else {
        Ok(None)
    }
}

fn summary_markdown(
    dataset: &Dataset,
    corr: &CorrelationMatrix,
    metadata: Option<&RunMetadata>,
    evaluation: Option<&Evaluation>,
    importance_csv: Option<&str>,
) -> String {
    let mut out = String::from("# Viewership model summary\n\n");
    let _ = writeln!(out, "Events in engagement data: {}\n", dataset.len());

    if let Some(m) = metadata {
        out.push_str("## Training\n\n");
        let _ = writeln!(out, "- seed: {}", m.seed);
        let _ = writeln!(out, "- window: {} hours", m.window_hours);
        let _ = writeln!(
            out,
            "- rows: {} in, {} after outlier screening ({} outlier flags)",
            m.input_rows,
            m.preprocess.retained_rows,
            m.preprocess.flagged_outliers.len()
        );
        let _ = writeln!(
            out,
            "- split: {} train / {} test",
            m.preprocess.split.train.len(),
            m.preprocess.split.test.len()
        );
        let _ = writeln!(
            out,
            "- grid: {} combinations, {} folds, {} fits",
            m.grid_size, m.cv_folds, m.fits
        );
        let p = &m.best_params;
        let _ = writeln!(
            out,
            "- best: n_estimators={} learning_rate={} max_depth={} min_samples_split={} subsample={} (CV MAE {:.4}, log scale)\n",
            p.n_estimators, p.learning_rate, p.max_depth, p.min_samples_split, p.subsample, m.best_cv_mae_log
        );
    }

    if let Some(e) = evaluation {
        let _ = writeln!(out, "## Evaluation ({} split, {} events)\n", e.split, e.n);
        out.push_str("| metric | value |\n|---|---|\n");
        let _ = writeln!(out, "| MAE (M viewers) | {:.3} |", e.mae);
        let _ = writeln!(out, "| RMSE (M viewers) | {:.3} |", e.rmse);
        match e.r2 {
            Some(r2) => {
                let _ = writeln!(out, "| R² | {r2:.3} |\n");
            }
            None => out.push_str("| R² | undefined |\n\n"),
        }
    }

    if let Some(csv) = importance_csv {
        out.push_str("## Feature importance (mean |Shapley value|, log scale)\n\n| rank | feature | value |\n|---|---|---|\n");
        for line in csv.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            if let [rank, feature, value] = cells.as_slice() {
                let v: f64 = value.parse().unwrap_or(f64::NAN);
                let _ = writeln!(out, "| {rank} | {feature} | {v:.4} |");
            }
        }
        out.push('\n');
    }

    out.push_str("## Correlations\n\n");
    if let Some((r, i, j)) = corr.max_off_diagonal() {
        let _ = writeln!(
            out,
            "Largest |r| off the diagonal: {r:.2} ({} vs {})",
            corr.names[i], corr.names[j]
        );
    }
    if !corr.zero_variance.is_empty() {
        let _ = writeln!(
            out,
            "\nZero-variance columns: {}",
            corr.zero_variance.join(", ")
        );
    }
    out
}

/// Convenience for callers that hold paths: load, train and write artifacts.
pub fn train_from_csv(data: &Path, out_dir: &Path, config: &Config) -> Result<TrainOutcome> {
    let dataset = load_engagement_csv(data)?;
    let outcome = train(&dataset, config)?;
    write_train_artifacts(&outcome, out_dir)?;
    Ok(outcome)
}

/// Featurize and save in one step.
pub fn featurize_to_csv(
    events: &[LabeledEvent],
    posts_dir: &Path,
    out: &Path,
    config: &Config,
) -> Result<Dataset> {
    let (dataset, _) = featurize(events, posts_dir, &analyzers(config)?)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    save_engagement_csv(out, &dataset)?;
    Ok(dataset)
}

/// Log-space targets of a dataset, for callers building matrices by hand.
pub fn log_targets(dataset: &Dataset) -> Result<Vec<f64>> {
    Ok(dataset
        .rows
        .iter()
        .map(|r| log1p(r.viewers_millions))
        .collect::<std::result::Result<_, _>>()?)
}

/// Encodes `dataset` with a model's stored transforms.
pub fn encode_with(model: &GbmEnsemble, dataset: &Dataset) -> Result<Matrix> {
    Ok(model.feature_space().encode_dataset(dataset)?)
}
