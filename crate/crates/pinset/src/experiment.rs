//! Trend experiments on generated signed threshold networks.
//!
//! Defaults: Erdos-Renyi edge probability 0.3, 20 trials per cell, every
//! threshold 0 and each node excitatory with probability 0.5. The edge
//! probability and the trial count are not fixed by any reference setup;
//! they are reported with every run.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use pinset_core::genlab::{generate, pick_attractor, Family, GenError, GenSpec, TauMode};
use pinset_core::structured::solve_cycle_baseline;
use pinset_core::verify::{verify_exhaustive, verify_monte_carlo, InitialPolicy, Schedule};
use pinset_core::{Attractor, InputSet, NodeId, RegulatoryNetwork, StateVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::pipeline::{reduce, solve, Method, ReductionKind, SolveOptions};

pub const DEFAULT_ER_P: f64 = 0.3;
pub const DEFAULT_TRIALS: usize = 20;
/// Above this many free nodes verification samples initial states.
pub const EXHAUSTIVE_FREE_LIMIT: usize = 16;
pub const SAMPLED_VERIFY_TRIALS: u64 = 256;

/// Topology of one experiment family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    ErdosRenyi {
        p: f64,
    },
    /// Erdos-Renyi with the expected edge count of `ScaleFree { m }`.
    ErdosRenyiMatched {
        m: usize,
    },
    ScaleFree {
        m: usize,
    },
    /// Scale-free with `m = ceil(fraction * n)`.
    ScaleFreeFraction {
        fraction: f64,
    },
}

/// Edges of a preferential attachment graph with `m` links per new node.
pub fn scale_free_edges(n: usize, m: usize) -> usize {
    (1..n).map(|t| m.min(t)).sum()
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ErdosRenyi { .. } | FamilySpec::ErdosRenyiMatched { .. } => "erdos_renyi",
            FamilySpec::ScaleFree { .. } | FamilySpec::ScaleFreeFraction { .. } => "scale_free",
        }
    }

    pub fn family(&self, n: usize) -> Family {
        match *self {
            FamilySpec::ErdosRenyi { p } => Family::ErdosRenyi { p },
            FamilySpec::ErdosRenyiMatched { m } => {
                let pairs = n * n.saturating_sub(1) / 2;
                let p = if pairs == 0 {
                    0.0
                } else {
                    (scale_free_edges(n, m) as f64 / pairs as f64).min(1.0)
                };
                Family::ErdosRenyi { p }
            }
            FamilySpec::ScaleFree { m } => Family::ScaleFree { m },
            FamilySpec::ScaleFreeFraction { fraction } => Family::ScaleFree {
                m: ((fraction * n as f64).ceil() as usize).max(1),
            },
        }
    }

    /// The parameter as written in result rows.
    pub fn param(&self, n: usize) -> String {
        match (*self, self.family(n)) {
            (FamilySpec::ErdosRenyi { p }, _) => format!("p={p}"),
            (FamilySpec::ErdosRenyiMatched { m }, Family::ErdosRenyi { p }) => {
                format!("p={p:.4} (m={m})")
            }
            (FamilySpec::ScaleFree { m }, _) => format!("m={m}"),
            (FamilySpec::ScaleFreeFraction { fraction }, Family::ScaleFree { m }) => {
                format!("m={m} ({fraction}n)")
            }
            _ => unreachable!("family follows its spec"),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::ErdosRenyi { p } => write!(f, "er:{p}"),
            FamilySpec::ErdosRenyiMatched { m } => write!(f, "er-matched:{m}"),
            FamilySpec::ScaleFree { m } => write!(f, "sf:{m}"),
            FamilySpec::ScaleFreeFraction { fraction } => write!(f, "sf-frac:{fraction}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = String;

    /// `er:P`, `er-matched:M`, `sf:M` or `sf-frac:F`; a bare `er` uses the
    /// default edge probability.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let bad = || format!("invalid family '{s}'");
        let float = |a: &str| a.parse::<f64>().map_err(|_| bad());
        let int = |a: &str| a.parse::<usize>().map_err(|_| bad());
        match kind {
            "er" if arg.is_empty() => Ok(FamilySpec::ErdosRenyi { p: DEFAULT_ER_P }),
            "er" => Ok(FamilySpec::ErdosRenyi { p: float(arg)? }),
            "er-matched" => Ok(FamilySpec::ErdosRenyiMatched { m: int(arg)? }),
            "sf" => Ok(FamilySpec::ScaleFree { m: int(arg)? }),
            "sf-frac" => Ok(FamilySpec::ScaleFreeFraction {
                fraction: float(arg)?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendSolver {
    TssGreedy,
    TssExact,
    CycleBaseline,
}

impl TrendSolver {
    pub fn name(self) -> &'static str {
        match self {
            TrendSolver::TssGreedy => "tss_greedy",
            TrendSolver::TssExact => "tss_exact",
            TrendSolver::CycleBaseline => "cycle_baseline",
        }
    }
}

impl FromStr for TrendSolver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            TrendSolver::TssGreedy,
            TrendSolver::TssExact,
            TrendSolver::CycleBaseline,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| format!("unknown solver '{s}'"))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub families: Vec<FamilySpec>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub solvers: Vec<TrendSolver>,
    pub seed: u64,
    pub tau: f64,
    pub sign_prob: f64,
    /// Measure wall-clock time; otherwise `runtime_ms` is 0 and the output
    /// depends on the seed alone.
    pub record_runtime: bool,
}

impl ExperimentConfig {
    pub fn new(families: Vec<FamilySpec>, sizes: Vec<usize>, seed: u64) -> Self {
        Self {
            families,
            sizes,
            trials: DEFAULT_TRIALS,
            solvers: vec![TrendSolver::TssGreedy],
            seed,
            tau: 0.0,
            sign_prob: 0.5,
            record_runtime: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub family: String,
    pub n: usize,
    pub param: String,
    pub solver: String,
    pub trial: usize,
    pub input_count: usize,
    pub runtime_ms: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub family: String,
    pub n: usize,
    pub param: String,
    pub trial: usize,
    pub solver: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub family: String,
    pub n: usize,
    pub param: String,
    pub solver: String,
    pub trials: usize,
    pub mean_inputs: f64,
    pub std_inputs: f64,
    pub mean_runtime_ms: f64,
    pub verified_fraction: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
    /// Cells whose network has no fixed point to steer to.
    pub skipped: Vec<CellFailure>,
    pub failures: Vec<CellFailure>,
}

/// Seed of cell `index` derived from the master seed.
pub fn cell_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Whether pinning `inputs` at `x` drives `net` to `x`: exhaustive when few
/// nodes are free, sampled synchronous runs otherwise.
pub fn certify(net: &RegulatoryNetwork, x: &StateVector, inputs: &[NodeId], seed: u64) -> bool {
    let Ok(target) = Attractor::fixed_point(net, x.clone()) else {
        return false;
    };
    let pins = InputSet::from_target(x, inputs.iter().copied());
    let free = net.len() - pins.len();
    let report = if free <= EXHAUSTIVE_FREE_LIMIT {
        verify_exhaustive(net, &target, &pins, None, InitialPolicy::AgreeWithPins)
    } else {
        verify_monte_carlo(
            net,
            &target,
            &pins,
            Schedule::Sync,
            SAMPLED_VERIFY_TRIALS,
            seed,
            None,
            InitialPolicy::AgreeWithPins,
        )
    };
    report.is_ok_and(|r| r.all_converged())
}

/// Inputs chosen by `solver` for `net` at fixed point `x`.
pub fn trend_inputs(
    net: &RegulatoryNetwork,
    x: &StateVector,
    solver: TrendSolver,
) -> Result<Vec<NodeId>, String> {
    match solver {
        TrendSolver::CycleBaseline => Ok(solve_cycle_baseline(net)
            .members
            .into_iter()
            .map(NodeId)
            .collect()),
        TrendSolver::TssGreedy | TrendSolver::TssExact => {
            let reduced = reduce(net, std::slice::from_ref(x), ReductionKind::Threshold)
                .map_err(|e| e.to_string())?;
            let method = if solver == TrendSolver::TssGreedy {
                Method::Greedy
            } else {
                Method::Exact
            };
            let sol = solve(Some(net), &reduced, method, &SolveOptions::default())
                .map_err(|e| e.to_string())?;
            Ok(sol.inputs)
        }
    }
}

/// Runs every (family, size, trial) cell: generate, pick the smallest fixed
/// point, solve with each solver and verify. Cell errors are recorded, not
/// fatal; networks without a fixed point are counted as skipped.
pub fn run_trend_experiment(config: &ExperimentConfig) -> ExperimentResult {
    let mut result = ExperimentResult::default();
    let mut index = 0u64;
    for family in &config.families {
        for &n in &config.sizes {
            let param = family.param(n);
            for trial in 0..config.trials {
                let seed = cell_seed(config.seed, index);
                index += 1;
                let fail = |solver: Option<&str>, error: String| CellFailure {
                    family: family.name().into(),
                    n,
                    param: param.clone(),
                    trial,
                    solver: solver.map(Into::into),
                    error,
                };
                let spec = GenSpec {
                    family: family.family(n),
                    n,
                    seed,
                    sign_prob: config.sign_prob,
                    tau: TauMode::Constant(config.tau),
                };
                let net = match generate(&spec) {
                    Ok(net) => net,
                    Err(e) => {
                        result.failures.push(fail(None, e.to_string()));
                        continue;
                    }
                };
                let x = match pick_attractor(&net) {
                    Ok(x) => x,
                    Err(e @ GenError::NoFixedPoint) => {
                        result.skipped.push(fail(None, e.to_string()));
                        continue;
                    }
                    Err(e) => {
                        result.failures.push(fail(None, e.to_string()));
                        continue;
                    }
                };
                for &solver in &config.solvers {
                    let start = Instant::now();
                    let inputs = trend_inputs(&net, &x, solver);
                    let runtime_ms = if config.record_runtime {
                        start.elapsed().as_secs_f64() * 1e3
                    } else {
                        0.0
                    };
                    match inputs {
                        Ok(inputs) => {
                            let verified = certify(&net, &x, &inputs, seed);
                            result.rows.push(ExperimentRow {
                                family: family.name().into(),
                                n,
                                param: param.clone(),
                                solver: solver.name().into(),
                                trial,
                                input_count: inputs.len(),
                                runtime_ms,
                                verified,
                            });
                        }
                        Err(e) => result.failures.push(fail(Some(solver.name()), e)),
                    }
                }
            }
        }
    }
    result
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Mean and spread per (family, n, param, solver), in first-seen order.
pub fn aggregate(rows: &[ExperimentRow]) -> Vec<AggregateRow> {
    let mut keys: Vec<(String, usize, String, String)> = Vec::new();
    for r in rows {
        let key = (r.family.clone(), r.n, r.param.clone(), r.solver.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(family, n, param, solver)| {
            let cell: Vec<&ExperimentRow> = rows
                .iter()
                .filter(|r| {
                    r.family == family && r.n == n && r.param == param && r.solver == solver
                })
                .collect();
            let inputs: Vec<f64> = cell.iter().map(|r| r.input_count as f64).collect();
            let times: Vec<f64> = cell.iter().map(|r| r.runtime_ms).collect();
            AggregateRow {
                trials: cell.len(),
                mean_inputs: mean(&inputs),
                std_inputs: std_dev(&inputs),
                mean_runtime_ms: mean(&times),
                verified_fraction: cell.iter().filter(|r| r.verified).count() as f64
                    / cell.len() as f64,
                family,
                n,
                param,
                solver,
            }
        })
        .collect()
}

fn resample_mean(xs: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    (0..xs.len())
        .map(|_| xs[rng.gen_range(0..xs.len())])
        .sum::<f64>()
        / xs.len() as f64
}

/// Fraction of bootstrap resamples (each sample resampled independently)
/// in which `claim(mean_a, mean_b)` holds.
pub fn bootstrap_support(
    a: &[f64],
    b: &[f64],
    resamples: usize,
    seed: u64,
    claim: impl Fn(f64, f64) -> bool,
) -> f64 {
    if a.is_empty() || b.is_empty() || resamples == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..resamples)
        .filter(|_| {
            let ma = resample_mean(a, &mut rng);
            let mb = resample_mean(b, &mut rng);
            claim(ma, mb)
        })
        .count();
    hits as f64 / resamples as f64
}

/// Paired version: resamples indices jointly and tests `claim` on the mean
/// of the differences `a[i] - b[i]`.
pub fn bootstrap_paired_support(
    a: &[f64],
    b: &[f64],
    resamples: usize,
    seed: u64,
    claim: impl Fn(f64) -> bool,
) -> f64 {
    assert_eq!(a.len(), b.len(), "paired samples differ in length");
    if a.is_empty() || resamples == 0 {
        return 0.0;
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..resamples)
        .filter(|_| claim(resample_mean(&diffs, &mut rng)))
        .count();
    hits as f64 / resamples as f64
}

pub fn write_rows_csv(rows: &[ExperimentRow], out: impl io::Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record([
            "family",
            "n",
            "param",
            "solver",
            "trial",
            "input_count",
            "runtime_ms",
            "verified",
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv(rows: &[AggregateRow], out: impl io::Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
