use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use racah_core::reduction::{make_q, total_casimir, ReducedContext};
use racah_core::Operator;
use racah_verify::cli::Cli;
use racah_verify::{run, ConfigError, OutputFormat, RunConfig, Suite};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_racah-verify"))
}

fn json_run(config: &RunConfig) -> Vec<Value> {
    let mut buf = Vec::new();
    let mut config = config.clone();
    config.output = OutputFormat::Json;
    run(&config, &mut buf).unwrap();
    String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is a JSON object"))
        .collect()
}

fn without_timing(lines: &[Value]) -> Vec<Value> {
    lines
        .iter()
        .cloned()
        .map(|mut v| {
            if let Some(o) = v.as_object_mut() {
                o.remove("ms");
            }
            v
        })
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("racah-verify-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn json_entries_carry_every_field() {
    let lines = json_run(&RunConfig::new(3).with_suites(&[Suite::O2n]));
    let entries: Vec<&Value> = lines.iter().filter(|v| v.get("relation").is_some()).collect();
    assert!(entries.len() > 20);
    for e in &entries {
        for key in ["relation", "tuple", "method", "passed", "residual_terms", "ms"] {
            assert!(e.get(key).is_some(), "missing {key} in {e}");
        }
        assert_eq!(e["passed"], true);
        assert_eq!(e["residual_terms"], 0);
    }
    assert!(entries.iter().any(|e| e["relation"] == "o2n-bracket"));
    assert!(entries.iter().any(|e| e["relation"] == "o2n-casimir-central"));
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["total"].as_u64().unwrap() as usize, entries.len());
    assert_eq!(summary["failed"], 0);
}

#[test]
fn small_n_reports_skipped_relations() {
    let lines = json_run(&RunConfig::new(3).with_suites(&[Suite::Racah]));
    let skipped: Vec<&str> = lines
        .iter()
        .filter(|v| v["skipped"] == true)
        .map(|v| v["relation"].as_str().unwrap())
        .collect();
    assert_eq!(skipped, ["racah-pf-disjoint", "racah-ff-overlap", "racah-ff-chain"]);
    assert_eq!(lines.last().unwrap()["skipped"], 3);
    assert!(lines.iter().any(|v| v["relation"] == "casimir-dependency"));
}

#[test]
fn worker_count_does_not_change_results() {
    let base = RunConfig::new(3).with_suites(&[Suite::Howe, Suite::Reduction]);
    let mut wide = base.clone();
    wide.jobs = 4;
    assert_eq!(without_timing(&json_run(&base)), without_timing(&json_run(&wide)));
}

#[test]
fn oracle_alone_covers_every_family_and_is_seeded() {
    let mut config = RunConfig::new(3).with_suites(&[Suite::Oracle]);
    config.trials = 2;
    config.seed = 11;
    let a = json_run(&config);
    let oracle: Vec<&Value> = a.iter().filter(|v| v["method"] == "oracle").collect();
    for family in ["o2n-bracket", "su11", "howe-closed-form", "racah-pp", "reduced-symmetry", "weyl-composition"] {
        assert!(oracle.iter().any(|v| v["relation"] == family), "{family} missing");
    }
    assert!(oracle.iter().all(|v| v["passed"] == true));
    assert_eq!(without_timing(&a), without_timing(&json_run(&config)));
}

#[test]
fn text_output_has_summary() {
    let mut buf = Vec::new();
    let summary = run(&RunConfig::new(3).with_suites(&[Suite::Su11]), &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(summary.all_passed());
    assert!(text.contains("== su11"));
    assert!(text.lines().any(|l| l.starts_with("PASS howe-su11")));
    assert_eq!(
        text.lines().last().unwrap(),
        format!("total={} passed={} failed=0 skipped=0", summary.total, summary.passed)
    );
}

#[test]
fn emitted_operators_parse_back() {
    let dir = scratch("emit");
    let mut config = RunConfig::new(3).with_suites(&[Suite::Su11]);
    config.emit = Some(dir.clone());
    run(&config, Vec::new()).unwrap();
    let ctx = ReducedContext::new(3).unwrap();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let text = std::fs::read_to_string(dir.join(format!("Q_{i}_{j}.txt"))).unwrap();
        assert_eq!(Operator::parse(ctx.signature(), text.trim()).unwrap(), make_q(&ctx, i, j).unwrap());
    }
    let text = std::fs::read_to_string(dir.join("C_total.txt")).unwrap();
    assert_eq!(Operator::parse(ctx.signature(), text.trim()).unwrap(), total_casimir(&ctx));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn argument_parsing() {
    let cfg = Cli::try_parse_from(["racah-verify", "--suite", "racah,howe", "--n", "4", "--jobs", "2", "--json"])
        .unwrap()
        .into_config()
        .unwrap();
    assert_eq!(cfg.n, 4);
    assert_eq!(cfg.jobs, 2);
    assert_eq!(cfg.output, OutputFormat::Json);
    assert_eq!(cfg.suites.iter().copied().collect::<Vec<_>>(), [Suite::Howe, Suite::Racah]);

    let all = Cli::try_parse_from(["racah-verify"]).unwrap().into_config().unwrap();
    assert_eq!(all.suites.len(), 6);
    assert_eq!(all.trials, 100);

    let err = Cli::try_parse_from(["racah-verify", "--n", "6"]).unwrap().into_config().unwrap_err();
    assert_eq!(err, ConfigError::NTooLarge(6));
    assert!(Cli::try_parse_from(["racah-verify", "--n", "6", "--allow-large-n"])
        .unwrap()
        .into_config()
        .is_ok());
    assert!(Cli::try_parse_from(["racah-verify", "--suite", "bogus"]).is_err());
}

#[test]
fn exit_codes() {
    let ok = bin().args(["--n", "3", "--suite", "o2n"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("failed=0"));

    for args in [&["--n", "2"][..], &["--n", "6"], &["--jobs", "0"], &["--frobnicate"], &["--suite", "nope"]] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
