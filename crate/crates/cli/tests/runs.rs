// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use shutter_cli::report::Format;
use shutter_cli::{
    emit_report, parse_scenario, run_scenario, Mode, RunOptions, RunReport, Scenario,
};

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.sc"))
}

fn load(name: &str) -> Scenario {
    parse_scenario(&fs::read_to_string(scenario_path(name)).unwrap()).unwrap()
}

fn run(name: &str, mode: Mode) -> RunReport {
    let options = RunOptions {
        name: name.into(),
        timing: false,
    };
    run_scenario(&load(name), mode, &options).unwrap()
}

fn run_src(src: &str, mode: Mode) -> Result<RunReport, shutter_cli::RunError> {
    run_scenario(&parse_scenario(src).unwrap(), mode, &RunOptions::default())
}

#[test]
fn every_corpus_scenario_passes_in_enumerate_mode() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let r = run(&name, Mode::Enumerate);
        assert!(r.passed, "{name}: {:#?}", r.expectations);
        assert!((r.total_probability - 1.0).abs() < 1e-10, "{name}");
    }
}

#[test]
fn memory_cycle_enumerates_four_quarter_branches() {
    let r = run("memory_cycle", Mode::Enumerate);
    assert_eq!(r.branches.len(), 4);
    for b in &r.branches {
        assert!((b.probability - 0.25).abs() < 1e-12);
        assert!(b.fidelity.unwrap() >= 1.0 - 1e-10);
        assert!(b.passed);
    }
    assert!(r.passed);
}

#[test]
fn cnot_on_10_gives_11_in_all_sixteen_branches() {
    let r = run("cnot_10", Mode::Enumerate);
    assert_eq!(r.branches.len(), 16);
    assert_eq!(r.bits, ["a", "c", "b", "d"]);
    let mut seen = std::collections::BTreeSet::new();
    for b in &r.branches {
        assert!((b.probability - 1.0 / 16.0).abs() < 1e-12);
        assert!(b.fidelity.unwrap() >= 1.0 - 1e-10);
        seen.insert(b.bits.values().copied().collect::<Vec<_>>());
    }
    assert_eq!(seen.len(), 16);
}

#[test]
fn sampled_cnot_frequencies_stay_within_four_sigma() {
    let trials = 4096;
    let r = run("cnot_10", Mode::Sample { trials, seed: 1 });
    assert_eq!(r.seed, Some(1));
    assert_eq!(r.trials, Some(trials));
    let p = 1.0 / 16.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    assert_eq!(r.branches.len(), 16);
    let total: u64 = r.branches.iter().map(|b| b.count.unwrap()).sum();
    assert_eq!(total, trials);
    for b in &r.branches {
        assert!((b.frequency.unwrap() - p).abs() <= 4.0 * sigma, "{b:?}");
    }
    assert!(r.passed);
}

#[test]
fn sample_mode_agrees_with_enumeration_on_unequal_branches() {
    // P(m=0) = 0.36 after measuring 0.6|0> + 0.8|1>.
    let src = "declare photon p\nprep p amps 0.6 0.8\nmeasure p z -> m\nexpect prob m=0 0.36\n";
    let exact = run_src(src, Mode::Enumerate).unwrap();
    assert!(exact.passed);
    let sampled = run_src(
        src,
        Mode::Sample {
            trials: 20_000,
            seed: 3,
        },
    )
    .unwrap();
    assert!(sampled.passed, "{:?}", sampled.expectations);
    assert!(sampled.chi_square.unwrap().p_value > 1e-3);
}

#[test]
fn seeds_make_reports_reproducible() {
    let a = run(
        "cnot_bell",
        Mode::Sample {
            trials: 2000,
            seed: 42,
        },
    );
    let b = run(
        "cnot_bell",
        Mode::Sample {
            trials: 2000,
            seed: 42,
        },
    );
    let c = run(
        "cnot_bell",
        Mode::Sample {
            trials: 2000,
            seed: 43,
        },
    );
    for f in [Format::Text, Format::Json, Format::Csv] {
        assert_eq!(emit_report(&a, f), emit_report(&b, f));
    }
    assert_ne!(emit_report(&a, Format::Json), emit_report(&c, Format::Json));
    let e1 = run("ghz_storage", Mode::Enumerate);
    let e2 = run("ghz_storage", Mode::Enumerate);
    assert_eq!(
        emit_report(&e1, Format::Json),
        emit_report(&e2, Format::Json)
    );
}

#[test]
fn csv_report_has_one_row_per_branch() {
    let r = run("memory_cycle", Mode::Enumerate);
    let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,b,probability,fidelity"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let total: f64 = rows.iter().map(|r| r[2]).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn report_without_expectations_has_no_result_column() {
    let src = "declare photon p\nprep p basis 0\napply H p\nmeasure p z -> m\n";
    let r = run_src(src, Mode::Enumerate).unwrap();
    assert!(r.expectations.is_empty());
    assert!(r.passed);
    let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
    let header = text.lines().find(|l| l.contains("halted")).unwrap();
    assert_eq!(
        header.split_whitespace().collect::<Vec<_>>(),
        ["m", "halted", "probability", "fidelity"]
    );
    assert!(!text.contains("PASS") && !text.contains("FAIL"));
    assert_eq!(text.lines().filter(|l| l.ends_with('-')).count(), 2);
}

#[test]
fn json_report_is_structured() {
    let r = run("ifm_nested_199", Mode::Enumerate);
    let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
    assert_eq!(v["mode"], "enumerate");
    assert!(v["seed"].is_null());
    assert!(v.get("elapsed_ms").is_none());
    assert_eq!(v["branches"].as_array().unwrap().len(), 2);
    assert_eq!(v["branches"][1]["halted"], true);
    assert_eq!(v["expectations"].as_array().unwrap().len(), 4);
}

#[test]
fn failing_expectation_fails_the_report() {
    let src = "declare photon p\nprep p basis 0\nexpect state p amps 0 1 fidelity 0.5\n";
    let r = run_src(src, Mode::Enumerate).unwrap();
    assert!(!r.passed);
    assert_eq!(r.expectations[0].line, 3);
    assert_eq!(r.expectations[0].observed, Some(0.0));
}

#[test]
fn runtime_errors_name_the_statement_line() {
    // The shutter is |0>, not |+>, so the write precondition fails.
    let src = "declare photon p\ndeclare shutter s\nprep p s basis 0 0\n\nwrite p -> s bit a\n";
    let e = run_src(src, Mode::Enumerate).unwrap_err();
    assert_eq!(e.line, 5);
    let e = run_src(
        "declare photon p\nprep p basis 0\nprep p basis 1\n",
        Mode::Enumerate,
    )
    .unwrap_err();
    assert_eq!(e.line, 3);
}

#[test]
fn absorbed_paths_halt() {
    let src = "declare photon p\nprep p basis 0\nifm single p theta pi/4 cycles 1 bomb present -> x\napply H p\nmeasure p z -> m\nexpect branches 3\n";
    let r = run_src(src, Mode::Enumerate).unwrap();
    assert!(r.passed, "{:?}", r.expectations);
    let halted: Vec<_> = r.branches.iter().filter(|b| b.halted).collect();
    assert_eq!(halted.len(), 1);
    assert!((halted[0].probability - 0.5).abs() < 1e-12);
    assert!(!halted[0].bits.contains_key("m"));
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shutterlogic"));
    c.env_remove(shutter_cli::OUT_DIR_ENV);
    c
}

#[test]
fn binary_exit_codes() {
    let ok = bin()
        .args(["run"])
        .arg(scenario_path("memory_cycle"))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("result: PASS"));

    let dir = tempfile::tempdir().unwrap();
    let failing = dir.path().join("fail.sc");
    fs::write(
        &failing,
        "declare photon p\nprep p basis 0\nexpect state p amps 0 1 fidelity 0.5\n",
    )
    .unwrap();
    assert_eq!(
        bin()
            .arg("run")
            .arg(&failing)
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );

    let broken = dir.path().join("broken.sc");
    fs::write(&broken, "declare photon q0\nprep q0 amps 0.6 0.8001\n").unwrap();
    let out = bin().arg("check").arg(&broken).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 14"));

    let out = bin()
        .arg("check")
        .arg(scenario_path("cnot_explicit"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn binary_output_destinations() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .env(shutter_cli::OUT_DIR_ENV, dir.path())
        .args([
            "run", "--mode", "sample", "--trials", "500", "--seed", "9", "--format", "json",
        ])
        .arg(scenario_path("cnot_10"))
        .status()
        .unwrap();
    assert!(status.success());
    let via_env = fs::read(dir.path().join("cnot_10.json")).unwrap();

    let explicit = dir.path().join("nested/out.json");
    let status = bin()
        .args([
            "run", "--mode", "sample", "--trials", "500", "--seed", "9", "--format", "json",
            "--out",
        ])
        .arg(&explicit)
        .arg(scenario_path("cnot_10"))
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(explicit).unwrap(), via_env);
    let v: serde_json::Value = serde_json::from_slice(&via_env).unwrap();
    assert_eq!(v["seed"], 9);
}

#[test]
fn binary_sweep() {
    let out = bin()
        .args([
            "sweep-ifm",
            "--n-min",
            "3",
            "--n-max",
            "9",
            "--odd-only",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "N,theta,leakage_prob,explosion_prob,survival_prob"
    );
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let cells: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let n = cells[0];
        let theta = std::f64::consts::PI / (n + 1.0);
        assert!((cells[1] - theta).abs() < 1e-15);
        let x = (n - 1.0) / 2.0 * theta;
        assert!((cells[2] - x.cos().powi(2)).abs() < 1e-12);
        assert!((cells[4] - theta.cos().powf(2.0 * n)).abs() < 1e-12);
        assert!((cells[3] + cells[4] - 1.0).abs() < 1e-12);
    }
}
