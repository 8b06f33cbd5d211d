use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pfilter::engine::{pfilter, PreparedProblem};
use pfilter::simulate::DesignKind;
use pfilter::{Layer, MultiLayerProblem, PValueVector};
use pfilter_cli::{
    oracle_check_with, run_report, simulate_to, OracleOptions, PfilterReport, RunMethod,
    RunOptions, RunReport, SimulateOptions, SIMULATE_HEADER,
};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pfilter"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn status(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

fn two_layer_files(dir: &TempDir) -> (PathBuf, PathBuf, PathBuf) {
    (
        write(dir, "p.csv", "id,p\n1,0.05\n2,0.9\n"),
        write(dir, "fine.csv", "id,label\n1,a\n2,b\n"),
        write(dir, "coarse.csv", "id,label\n1,all\n2,all\n"),
    )
}

#[test]
fn run_pfilter_two_layer_example() {
    let dir = TempDir::new().unwrap();
    let (p, fine, coarse) = two_layer_files(&dir);
    let out = dir.path().join("report.json");
    let code = status(
        bin()
            .args(["run", "--pvalues"])
            .arg(&p)
            .arg("--layer")
            .arg(&fine)
            .arg("--layer")
            .arg(&coarse)
            .args(["--alpha", "0.2", "--alpha", "0.2", "--out"])
            .arg(&out),
    );
    assert_eq!(code, 0);
    let report: RunReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let RunReport::Pfilter(r) = report else {
        panic!("wrong method");
    };
    let values: Vec<f64> = r.layers.iter().map(|l| l.threshold.value).collect();
    assert_eq!(values, [0.1, 0.2]);
    assert_eq!(r.layers[0].threshold.grid_index, 1);
    assert_eq!(r.layers[0].threshold.grid_size, 2);
    assert_eq!(r.selected, [1]);
    assert_eq!(r.layers[0].selected_groups[0].label, "a");
}

#[test]
fn report_round_trips_to_discovery_report() {
    let dir = TempDir::new().unwrap();
    let (p, fine, coarse) = two_layer_files(&dir);
    let opts = RunOptions {
        pvalues: p,
        layers: vec![fine, coarse],
        alphas: vec![0.2, 0.2],
        method: RunMethod::Pfilter,
        out: None,
    };
    let RunReport::Pfilter(written) = run_report(&opts).unwrap() else {
        panic!("wrong method");
    };
    let text = serde_json::to_string(&written).unwrap();
    let parsed: PfilterReport = serde_json::from_str(&text).unwrap();

    let problem = MultiLayerProblem::new(
        PValueVector::new(vec![0.05, 0.9]).unwrap(),
        vec![Layer::finest(2), Layer::coarsest(2)],
        vec![0.2, 0.2],
    )
    .unwrap();
    assert_eq!(parsed.to_discovery_report(), pfilter(&problem));
}

#[test]
fn report_round_trip_three_layer_example() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/three_layer");
    let opts = RunOptions {
        pvalues: dir.join("pvalues.csv"),
        layers: ["individual", "voxel", "roi_delay"]
            .iter()
            .map(|n| dir.join(format!("{n}.csv")))
            .collect(),
        alphas: vec![0.05, 0.05, 0.1],
        method: RunMethod::Pfilter,
        out: None,
    };
    let RunReport::Pfilter(r) = run_report(&opts).unwrap() else {
        panic!("wrong method");
    };
    let parsed: PfilterReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(parsed, r);
    let rebuilt = parsed.to_discovery_report();
    assert_eq!(
        rebuilt.thresholds.values(),
        r.layers
            .iter()
            .map(|l| l.threshold.value)
            .collect::<Vec<_>>()
    );
    assert!(r.passes <= r.pass_bound);
    assert_eq!(
        r.layers.iter().map(|l| l.groups).collect::<Vec<_>>(),
        [12, 4, 6]
    );
}

#[test]
fn run_bh_example() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.tsv", "1\t0.01\n2\t0.04\n3\t0.5\n");
    let out = bin()
        .args(["run", "--method", "bh", "--alpha", "0.1", "--pvalues"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    let RunReport::Bh {
        selected, cutoff, ..
    } = report
    else {
        panic!("wrong method");
    };
    assert_eq!(selected, [1, 2]);
    assert_eq!((cutoff.grid_index, cutoff.grid_size), (2, 3));
}

#[test]
fn run_other_methods() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "1,0.001\n2,0.002\n3,0.8\n4,0.9\n");
    let layer = write(&dir, "pairs.csv", "1,x\n2,x\n3,y\n4,y\n");
    let opts = |method, layers: Vec<PathBuf>, alphas: Vec<f64>| RunOptions {
        pvalues: p.clone(),
        layers,
        alphas,
        method,
        out: None,
    };
    let RunReport::Simes {
        rejected, simes, ..
    } = run_report(&opts(RunMethod::Simes, vec![], vec![0.05])).unwrap()
    else {
        panic!()
    };
    assert!(rejected);
    assert_eq!(simes, 0.004);
    let RunReport::GroupBh {
        selected_groups,
        selected,
        ..
    } = run_report(&opts(RunMethod::GroupBh, vec![layer.clone()], vec![0.1])).unwrap()
    else {
        panic!()
    };
    assert_eq!(selected_groups.len(), 1);
    assert_eq!(selected_groups[0].label, "x");
    assert_eq!(selected, [1, 2]);
    let RunReport::Bb { selected, .. } =
        run_report(&opts(RunMethod::Bb, vec![layer.clone()], vec![0.1, 0.1])).unwrap()
    else {
        panic!()
    };
    assert_eq!(selected, [1, 2]);
    // wrong arity is a usage error
    let err = run_report(&opts(RunMethod::Bh, vec![layer], vec![0.1])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn input_errors_exit_2_and_partitions_exit_3() {
    let dir = TempDir::new().unwrap();
    let (p, fine, _) = two_layer_files(&dir);
    let missing = dir.path().join("missing.csv");
    let run = |pv: &Path, layer: &Path| {
        let out = bin()
            .args(["run", "--alpha", "0.2", "--pvalues"])
            .arg(pv)
            .arg("--layer")
            .arg(layer)
            .output()
            .unwrap();
        (
            out.status.code().unwrap(),
            String::from_utf8(out.stderr).unwrap(),
        )
    };
    assert_eq!(run(&p, &missing).0, 2);

    let bad = write(&dir, "bad.csv", "id,p\n1,0.1\n2,oops\n");
    let (code, err) = run(&bad, &fine);
    assert_eq!(code, 2);
    assert!(err.contains("bad.csv:3:"), "{err}");

    let overlap = write(&dir, "overlap.csv", "1,a\n1,b\n");
    let (code, err) = run(&p, &overlap);
    assert_eq!(code, 3);
    assert!(
        err.contains("index 1 in two groups") && err.contains("index 2 uncovered"),
        "{err}"
    );

    assert_eq!(
        status(bin().args(["run", "--method", "nope", "--pvalues"]).arg(&p)),
        2
    );
    // layer count must match alpha count
    assert_eq!(
        status(
            bin()
                .args(["run", "--pvalues"])
                .arg(&p)
                .arg("--layer")
                .arg(&fine)
        ),
        2
    );
}

fn simulate(design: DesignKind, mus: Vec<f64>, seed: u64) -> String {
    let mut buf = Vec::new();
    let opts = SimulateOptions {
        design,
        mus,
        trials: 20,
        seed,
        alphas: vec![],
        methods: vec![],
        out: None,
    };
    simulate_to(&opts, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn simulate_table_shapes() {
    let grouped = simulate(DesignKind::Grouped, vec![3.0], 1);
    let lines: Vec<&str> = grouped.lines().collect();
    assert_eq!(lines[0], SIMULATE_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 6);
    assert!(
        lines[1].starts_with("grouped,3.0,pfilter,entries,0.2,20,"),
        "{}",
        lines[1]
    );

    let grid = simulate(DesignKind::Grid, vec![2.0, 3.0], 1);
    assert_eq!(grid.lines().count(), 1 + 2 * 9);
    for line in grid.lines().skip(1) {
        assert_eq!(line.split(',').count(), SIMULATE_HEADER.len());
    }
}

#[test]
fn simulate_is_byte_identical_across_invocations() {
    let dir = TempDir::new().unwrap();
    let outputs: Vec<Vec<u8>> = ["a.csv", "b.csv"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            let code = status(
                bin()
                    .args([
                        "simulate", "--design", "grouped", "--mu", "3", "--trials", "100",
                        "--seed", "1", "--out",
                    ])
                    .arg(&out),
            );
            assert_eq!(code, 0);
            fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(String::from_utf8_lossy(&outputs[0]).lines().count(), 7);
    assert_ne!(
        simulate(DesignKind::Grouped, vec![3.0], 1),
        simulate(DesignKind::Grouped, vec![3.0], 2)
    );
}

#[test]
fn simulate_bad_flags_exit_2() {
    assert_eq!(
        status(bin().args(["simulate", "--design", "spiral", "--mu", "3"])),
        2
    );
    assert_eq!(
        status(bin().args([
            "simulate", "--design", "grid", "--mu", "3", "--alpha", "0.1", "--alpha", "0.2"
        ])),
        2
    );
    assert_eq!(
        status(bin().args(["simulate", "--design", "grid", "--mu", "3", "--method", "lasso"])),
        2
    );
}

#[test]
fn oracle_check_passes() {
    assert_eq!(
        status(bin().args(["oracle-check", "--trials", "1000", "--seed", "1"])),
        0
    );
    assert_eq!(status(bin().args(["oracle-check", "--trials", "0"])), 0);
    assert_eq!(status(bin().args(["oracle-check", "--max-n", "13"])), 2);
}

#[test]
fn oracle_check_catches_corrupted_update() {
    // feasibility without the max(1, .) floor
    let corrupted = |p: &MultiLayerProblem| {
        let prepared = PreparedProblem::new(p);
        let (indices, _, _) = prepared.fixed_point_with(|prep, m, indices| {
            let current = indices[m];
            (0..=current)
                .rev()
                .find(|&k| {
                    let mut trial = indices.to_vec();
                    trial[m] = k;
                    let selected = prep.selection(&trial);
                    let groups =
                        pfilter::engine::layer_selection(&selected, &prep.problem().layers()[m]);
                    k <= groups.len()
                })
                .unwrap_or(0)
        });
        indices
    };
    let opts = OracleOptions {
        trials: 1000,
        seed: 1,
        max_n: 12,
        max_m: 3,
    };
    let mut out = Vec::new();
    let err = oracle_check_with(&opts, corrupted, &mut out).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let text = String::from_utf8(out).unwrap();
    let cx: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "pvalues",
        "layers",
        "alphas",
        "expected_indices",
        "found_indices",
    ] {
        assert!(cx.get(key).is_some(), "counterexample lacks {key}: {text}");
    }

    let mut out = Vec::new();
    let exact = |p: &MultiLayerProblem| PreparedProblem::new(p).fixed_point().0;
    oracle_check_with(&opts, exact, &mut out).unwrap();
}
