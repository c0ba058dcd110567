use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use buzzcast::config::Config;
use buzzcast::features::load_engagement_csv;
use buzzcast::ingest::{load_viewership_csv, HttpArchive};
use buzzcast::model::GbmEnsemble;
use buzzcast::pipeline::{self, EvalSplit};
use buzzcast::{Error, Result};

/// Forecast televised-sports viewership from social-media engagement.
#[derive(Debug, Parser)]
#[command(name = "buzzcast", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Random seed for splitting, folds and subsampling [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Hours of posts collected before each event [default: 72]
    #[arg(long, global = true)]
    window_hours: Option<u32>,
    /// TOML configuration file
    #[arg(long, global = true, env = "BUZZCAST_CONFIG")]
    config: Option<PathBuf>,
    /// Read posts from local fixtures only; never touch the network
    #[arg(long, global = true)]
    offline: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collect each event's pre-game posts into per-event fixtures
    Fetch {
        /// Viewership CSV listing the events
        #[arg(long)]
        events: PathBuf,
        /// Directory of archive fixtures to read with --offline
        #[arg(long)]
        archive: Option<PathBuf>,
        #[arg(long, default_value = "posts")]
        out_dir: PathBuf,
    },
    /// Aggregate post fixtures into an engagement CSV
    Featurize {
        #[arg(long)]
        events: PathBuf,
        #[arg(long, default_value = "posts")]
        posts_dir: PathBuf,
        #[arg(long, default_value = "engagement.csv")]
        out: PathBuf,
    },
    /// Grid-search and fit the model
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
    },
    /// Score the model in viewer space and plot actual vs predicted
    Evaluate {
        #[arg(long, default_value = "run/model.json")]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Rows to score: test or full
        #[arg(long, default_value = "test")]
        split: EvalSplit,
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
    },
    /// Shapley attributions and global feature importance
    Explain {
        #[arg(long, default_value = "run/model.json")]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Event to explain [default: first test event]
        #[arg(long)]
        event: Option<String>,
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
    },
    /// Correlation heatmap and a markdown summary of the run directory
    Report {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "run")]
        run_dir: PathBuf,
    },
}

fn load_config(global: &Global) -> Result<Config> {
    let mut config = match &global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = global.seed {
        config.seed = seed;
    }
    if let Some(hours) = global.window_hours {
        config.ingest.window_hours = hours;
    }
    config.validate()?;
    Ok(config)
}

fn load_model(path: &Path) -> Result<GbmEnsemble> {
    Ok(GbmEnsemble::load(path)?)
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(&cli.global)?;
    match cli.command {
        Command::Fetch {
            events,
            archive,
            out_dir,
        } => {
            let events = load_viewership_csv(events)?;
            let hours = config.ingest.window_hours;
            let summary = if cli.global.offline {
                let dir = archive.ok_or_else(|| {
                    Error::Validation("--offline fetch needs --archive DIR".into())
                })?;
                pipeline::fetch(&pipeline::load_archive_dir(&dir)?, &events, hours, &out_dir)?
            } else {
                pipeline::fetch(
                    &HttpArchive::new(config.ingest.client()),
                    &events,
                    hours,
                    &out_dir,
                )?
            };
            for (name, n) in summary.events {
                println!("{name}\t{n}");
            }
        }
        Command::Featurize {
            events,
            posts_dir,
            out,
        } => {
            let events = load_viewership_csv(events)?;
            let dataset = pipeline::featurize_to_csv(&events, &posts_dir, &out, &config)?;
            println!("wrote {} events to {}", dataset.len(), out.display());
        }
        Command::Train { data, out_dir } => {
            let outcome = pipeline::train_from_csv(&data, &out_dir, &config)?;
            let m = &outcome.metadata;
            println!(
                "{} fits over {} combinations; best {:?} (CV MAE {:.4}, log scale)",
                m.fits, m.grid_size, m.best_params, m.best_cv_mae_log
            );
        }
        Command::Evaluate {
            model,
            data,
            split,
            out_dir,
        } => {
            let model = load_model(&model)?;
            let evaluation =
                pipeline::evaluate(&model, &load_engagement_csv(data)?, split, &config)?;
            pipeline::write_evaluation(&evaluation, &out_dir)?;
            let r2 = evaluation
                .r2
                .map_or("undefined".to_string(), |r| format!("{r:.4}"));
            println!(
                "{} split ({} events): MAE {:.4}M  RMSE {:.4}M  R² {r2}",
                evaluation.split, evaluation.n, evaluation.mae, evaluation.rmse
            );
        }
        Command::Explain {
            model,
            data,
            event,
            out_dir,
        } => {
            let model = load_model(&model)?;
            let explanation = pipeline::explain(
                &model,
                &load_engagement_csv(data)?,
                event.as_deref(),
                &config,
            )?;
            pipeline::write_explanation(&explanation, &out_dir)?;
            println!("explained {}", explanation.event);
            for (rank, (name, v)) in explanation.importance.ranked().into_iter().enumerate() {
                println!("{:>2}. {name:<28} {v:.4}", rank + 1);
            }
        }
        Command::Report { data, run_dir } => {
            pipeline::report(&load_engagement_csv(data)?, &run_dir)?;
            println!("wrote {}", run_dir.join(pipeline::SUMMARY_FILE).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
