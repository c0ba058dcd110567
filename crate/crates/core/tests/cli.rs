mod common;

use std::path::Path;
use std::process::{Command, Output};

use buzzcast::ingest::{FixtureServer, LocalArchive};

fn buzzcast(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buzzcast"))
        .current_dir(dir)
        .env_remove("BUZZCAST_CONFIG")
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .expect("run buzzcast")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn sample(name: &str) -> String {
    common::sample_dir().join(name).display().to_string()
}

fn featurize_sample(dir: &Path) {
    let archive = sample("archive");
    let events = sample("events.csv");
    let out = buzzcast(
        dir,
        &[
            "--offline",
            "fetch",
            "--events",
            &events,
            "--archive",
            &archive,
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = buzzcast(dir, &["featurize", "--events", &events]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn offline_pipeline_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    featurize_sample(d);
    for args in [
        &["train", "--data", "engagement.csv"][..],
        &["evaluate", "--data", "engagement.csv"],
        &["evaluate", "--data", "engagement.csv", "--split", "full"],
        &["explain", "--data", "engagement.csv"],
        &["report", "--data", "engagement.csv"],
    ] {
        let out = buzzcast(d, args);
        assert_eq!(
            code(&out),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for f in [
        "model.json",
        "cv_results.csv",
        "metrics.json",
        "scatter.svg",
        "importance.svg",
        "heatmap.svg",
        "summary.md",
    ] {
        assert!(d.join("run").join(f).is_file(), "missing {f}");
    }
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&buzzcast(d, &["train"])), 2);
    assert_eq!(
        code(&buzzcast(
            d,
            &["evaluate", "--data", "x.csv", "--split", "half"]
        )),
        2
    );
    std::fs::write(d.join("bad.toml"), "seed = 1\nbogus = 2\n").unwrap();
    let events = sample("events.csv");
    assert_eq!(
        code(&buzzcast(
            d,
            &["--config", "bad.toml", "featurize", "--events", &events]
        )),
        2
    );
    std::fs::write(d.join("events.csv"), "name,sport\nx,nfl\n").unwrap();
    assert_eq!(
        code(&buzzcast(d, &["featurize", "--events", "events.csv"])),
        2
    );
    let out = buzzcast(d, &["--offline", "fetch", "--events", &events]);
    assert_eq!(code(&out), 2);
}

#[test]
fn too_few_events_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    featurize_sample(d);
    let text = std::fs::read_to_string(d.join("engagement.csv")).unwrap();
    let head: Vec<&str> = text.lines().take(4).collect();
    std::fs::write(d.join("small.csv"), head.join("\n") + "\n").unwrap();
    let out = buzzcast(d, &["train", "--data", "small.csv"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unreachable_archive_exits_3() {
    let server =
        FixtureServer::start_with_failures(LocalArchive::new(Vec::new()), usize::MAX).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = format!(
        "[ingest]\napi_base = \"{}\"\nretry_attempts = 2\ninitial_backoff_ms = 1\nrequest_interval_ms = 0\ntimeout_secs = 5\n",
        server.base_url()
    );
    std::fs::write(d.join("net.toml"), config).unwrap();
    let events = sample("events.csv");
    let out = buzzcast(d, &["--config", "net.toml", "fetch", "--events", &events]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(server.requests(), 2);
}
