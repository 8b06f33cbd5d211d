use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use pfilter::classic::{bh_khat, bh_reject, group_simes, group_simes_bh, simes};
use pfilter::comparators::{bb_flatten, bb_procedure};
use pfilter::engine::{brute_force_pfilter, pfilter, PreparedProblem};
use pfilter::simulate::{
    random_instance, run_trials, trial_rng, Design, DesignKind, Method, TrialConfig,
};
use pfilter::MultiLayerProblem;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::io::{read_layer, read_pvalues, LayerFile};
use crate::report::{PfilterReport, RunReport};

/// Procedures available to `pfilter run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RunMethod {
    Pfilter,
    Bh,
    Bb,
    Simes,
    GroupBh,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub pvalues: PathBuf,
    pub layers: Vec<PathBuf>,
    pub alphas: Vec<f64>,
    pub method: RunMethod,
    pub out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => Ok(Box::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let target = out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(&target, e.into()))?;
    writeln!(w)
        .and_then(|()| w.flush())
        .map_err(|e| CliError::io(&target, e))
}

fn expect_counts(
    method: &str,
    layers: usize,
    want_layers: usize,
    alphas: usize,
    want_alphas: &[usize],
) -> Result<()> {
    if layers != want_layers {
        return Err(CliError::Usage(format!(
            "method {method} takes {want_layers} --layer file(s), got {layers}"
        )));
    }
    if !want_alphas.contains(&alphas) {
        let want: Vec<String> = want_alphas.iter().map(ToString::to_string).collect();
        return Err(CliError::Usage(format!(
            "method {method} takes {} --alpha value(s), got {alphas}",
            want.join(" or ")
        )));
    }
    Ok(())
}

/// Builds the report for `pfilter run` without writing it.
pub fn run_report(opts: &RunOptions) -> Result<RunReport> {
    if let Some(a) = opts.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(CliError::Usage(format!(
            "alpha {a} must be finite and nonnegative"
        )));
    }
    let pvalues = read_pvalues(&opts.pvalues)?;
    let n = pvalues.len();
    let layers: Vec<LayerFile> = opts
        .layers
        .iter()
        .map(|p| read_layer(p, n))
        .collect::<Result<_>>()?;
    let (nl, na) = (layers.len(), opts.alphas.len());
    let report = match opts.method {
        RunMethod::Pfilter => {
            if nl == 0 || nl != na {
                return Err(CliError::Usage(format!(
                    "method pfilter needs one --alpha per --layer, got {nl} layer(s) and {na} alpha(s)"
                )));
            }
            let problem = MultiLayerProblem::new(
                pvalues,
                layers.iter().map(|l| l.layer.clone()).collect(),
                opts.alphas.clone(),
            )?;
            RunReport::Pfilter(PfilterReport::new(&pfilter(&problem), &layers, n))
        }
        RunMethod::Bh => {
            expect_counts("bh", nl, 0, na, &[1])?;
            let alpha = opts.alphas[0];
            RunReport::bh(
                n,
                alpha,
                bh_khat(&pvalues, alpha),
                &bh_reject(&pvalues, alpha),
            )
        }
        RunMethod::Simes => {
            expect_counts("simes", nl, 0, na, &[1])?;
            let alpha = opts.alphas[0];
            let s = simes(&pvalues);
            RunReport::Simes {
                n,
                alpha,
                simes: s,
                rejected: s <= alpha,
            }
        }
        RunMethod::GroupBh => {
            expect_counts("group-bh", nl, 1, na, &[1])?;
            let (file, alpha) = (&layers[0], opts.alphas[0]);
            let values = group_simes(&pvalues, &file.layer)
                .iter()
                .map(|s| s.value())
                .collect();
            let groups = group_simes_bh(&pvalues, &file.layer, alpha);
            RunReport::group_bh(alpha, file, values, &groups)
        }
        RunMethod::Bb => {
            expect_counts("bb", nl, 1, na, &[1, 2])?;
            let file = &layers[0];
            let alpha_group = opts.alphas[0];
            let alpha_overall = *opts.alphas.last().expect("one or two alphas");
            let bb = bb_procedure(&pvalues, &file.layer, alpha_group, alpha_overall);
            RunReport::bb(
                alpha_group,
                alpha_overall,
                file,
                &bb.within,
                &bb_flatten(&bb),
            )
        }
    };
    Ok(report)
}

pub fn cmd_run(opts: &RunOptions) -> Result<()> {
    let report = run_report(opts)?;
    write_json(&report, opts.out.as_deref())
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub design: DesignKind,
    pub mus: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Empty for the default level on every layer, one value for all
    /// layers, or one per layer.
    pub alphas: Vec<f64>,
    /// Empty for every method.
    pub methods: Vec<Method>,
    pub out: Option<PathBuf>,
}

/// Column order of the simulation table.
pub const SIMULATE_HEADER: [&str; 11] = [
    "design",
    "mu",
    "method",
    "layer",
    "alpha",
    "trials",
    "mean_fdr",
    "se_fdr",
    "mean_power",
    "se_power",
    "mean_selected_groups",
];

#[derive(Serialize)]
struct SimulateRow<'a> {
    design: &'a str,
    mu: f64,
    method: &'a str,
    layer: &'a str,
    alpha: f64,
    trials: usize,
    mean_fdr: f64,
    se_fdr: f64,
    mean_power: f64,
    se_power: f64,
    mean_selected_groups: f64,
}

/// Writes the simulation table to `out`.
pub fn simulate_to<W: Write>(opts: &SimulateOptions, out: W) -> Result<()> {
    let design = Design::new(opts.design);
    let layers = design.layers().len();
    let alphas = match opts.alphas.len() {
        0 => vec![pfilter::simulate::DEFAULT_ALPHA; layers],
        1 => vec![opts.alphas[0]; layers],
        k if k == layers => opts.alphas.clone(),
        k => {
            return Err(CliError::Usage(format!(
                "design {} has {layers} layers; give 1 or {layers} --alpha values, not {k}",
                opts.design.name()
            )))
        }
    };
    let methods = if opts.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        opts.methods.clone()
    };
    if opts.mus.is_empty() {
        return Err(CliError::Usage("give at least one --mu".into()));
    }
    if let Some(mu) = opts.mus.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
        return Err(CliError::Usage(format!(
            "mu {mu} must be finite and nonnegative"
        )));
    }

    let to_io = |e: csv::Error| CliError::io("<simulate output>", e.into());
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(SIMULATE_HEADER).map_err(to_io)?;
    for &mu in &opts.mus {
        let config = TrialConfig {
            design: &design,
            methods: &methods,
            alphas: &alphas,
            mu,
            seed: opts.seed,
        };
        let result = run_trials(&config, opts.trials)?;
        for agg in &result.methods {
            for layer in &agg.layers {
                writer
                    .serialize(SimulateRow {
                        design: opts.design.name(),
                        mu,
                        method: agg.method.name(),
                        layer: layer.layer,
                        alpha: layer.alpha,
                        trials: agg.trials,
                        mean_fdr: layer.fdr.mean,
                        se_fdr: layer.fdr.se,
                        mean_power: layer.power.mean,
                        se_power: layer.power.se,
                        mean_selected_groups: layer.mean_selected_groups,
                    })
                    .map_err(to_io)?;
            }
        }
    }
    writer
        .flush()
        .map_err(|e| CliError::io("<simulate output>", e))
}

pub fn cmd_simulate(opts: &SimulateOptions) -> Result<()> {
    simulate_to(opts, output(opts.out.as_deref())?)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub max_m: usize,
}

/// Largest instance sizes the exhaustive oracle accepts.
pub const ORACLE_MAX_N: usize = 12;
pub const ORACLE_MAX_M: usize = 3;

#[derive(Serialize)]
struct Counterexample<'a> {
    instance: usize,
    seed: u64,
    pvalues: &'a [f64],
    /// Per layer, the 1-based group of each hypothesis.
    layers: Vec<Vec<usize>>,
    alphas: &'a [f64],
    expected_indices: &'a [usize],
    found_indices: &'a [usize],
}

/// Compares `solver` (grid indices per layer) against the exhaustive
/// oracle on random instances. Writes the first counterexample to `out`
/// and fails with [`CliError::CheckFailed`].
pub fn oracle_check_with<F, W>(opts: &OracleOptions, solver: F, mut out: W) -> Result<()>
where
    F: Fn(&MultiLayerProblem) -> Vec<usize>,
    W: Write,
{
    if opts.max_n == 0 || opts.max_n > ORACLE_MAX_N || opts.max_m == 0 || opts.max_m > ORACLE_MAX_M
    {
        return Err(CliError::Usage(format!(
            "--max-n must be in 1..={ORACLE_MAX_N} and --max-m in 1..={ORACLE_MAX_M}"
        )));
    }
    let mut rng = trial_rng(opts.seed, 0);
    for k in 0..opts.trials {
        let problem = random_instance(&mut rng, opts.max_n, opts.max_m);
        let expected = brute_force_pfilter(&problem)?.indices();
        let found = solver(&problem);
        if found != expected {
            let cx = Counterexample {
                instance: k,
                seed: opts.seed,
                pvalues: problem.pvalues(),
                layers: problem
                    .layers()
                    .iter()
                    .map(|l| l.membership().iter().map(|g| g + 1).collect())
                    .collect(),
                alphas: problem.alphas(),
                expected_indices: &expected,
                found_indices: &found,
            };
            let text = serde_json::to_string_pretty(&cx).expect("plain data serializes");
            writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))?;
            return Err(CliError::CheckFailed(format!(
                "instance {k}: fixed point {found:?} differs from oracle {expected:?}"
            )));
        }
    }
    writeln!(out, "oracle check: {} instances matched", opts.trials)
        .map_err(|e| CliError::io("<stdout>", e))
}

pub fn cmd_oracle_check(opts: &OracleOptions) -> Result<()> {
    let solver = |p: &MultiLayerProblem| {
        let prepared = PreparedProblem::new(p);
        prepared.fixed_point().0
    };
    oracle_check_with(opts, solver, io::stdout().lock())
}
