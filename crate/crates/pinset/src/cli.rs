//! The `pinset` command line.
//!
//! Exit status: 0 on success, 1 on a domain error (unsolvable instance,
//! malformed input file, failed verification), 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use pinset_core::genlab::{generate, pick_attractor, Family, GenSpec, TauMode};
use pinset_core::structured::HierarchySpec;
use pinset_core::tss::export_ilp;
use pinset_core::verify::{
    verify_cyclic, verify_exhaustive, verify_monte_carlo, InitialPolicy, Sampling, Schedule,
    VerificationReport, MAX_EXHAUSTIVE_FREE,
};
use pinset_core::{
    Attractor, InputSet, NodeId, Provenance, RegulatoryNetwork, StateVector, TssInstance,
};
use serde_json::json;

use crate::bn::{import_rules, parse_document, serialize_document};
use crate::experiment::{
    aggregate, run_trend_experiment, write_aggregate_csv, write_rows_csv, ExperimentConfig,
    FamilySpec, TrendSolver, DEFAULT_ER_P, DEFAULT_TRIALS,
};
use crate::pipeline::{
    reduce, solve, Method, PipelineError, Reduced, ReductionKind, Solution, SolveOptions,
};
use crate::tss_format::{parse_tss, serialize_tss};

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "ATTRACTOR_CONTROL_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "pinset",
    version,
    about = "Pin a small set of nodes to drive a Boolean network to an attractor"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the attractors of a network.
    Attractor(AttractorArgs),
    /// Reduce a control problem to a target set instance (`.tss`).
    Reduce(ReduceArgs),
    /// Compute a set of nodes to pin.
    Solve(SolveArgs),
    /// Check by simulation that pinning a set reaches the attractor.
    Verify(VerifyArgs),
    /// Generate a random signed threshold network.
    Generate(GenerateArgs),
    /// Run a trend experiment and write per-trial CSV rows.
    Experiment(ExperimentArgs),
    /// Write the target set integer program in LP format.
    ExportIlp(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Network (`.bn`, or `.rules` for `name = expression` lines).
    network: PathBuf,
    /// Target attractor states as bit strings, one per state in order;
    /// defaults to the document's `attractor` line.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    attractor: Vec<String>,
    #[arg(long, default_value = "general")]
    reduction: String,
}

#[derive(Debug, Args)]
struct AttractorArgs {
    network: PathBuf,
    /// Most attractors to report.
    #[arg(long, default_value_t = 64)]
    max: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Network file, or a `.tss` instance.
    input: PathBuf,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    attractor: Vec<String>,
    #[arg(long, default_value = "general")]
    reduction: String,
    #[arg(long, default_value = "exact")]
    method: String,
    /// Branching factor for `hierarchy`.
    #[arg(long)]
    k: Option<usize>,
    /// Depth for `hierarchy`.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Mc,
    Async,
    Stochastic,
    Cyclic,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Nodes to pin, by name; computed with `--method` when absent.
    #[arg(long, value_delimiter = ',')]
    inputs: Option<Vec<String>>,
    #[arg(long, default_value = "exact")]
    method: String,
    #[arg(long, value_enum, default_value_t = VerifyMode::Exhaustive)]
    mode: VerifyMode,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Start from every state, not only those agreeing with the pins.
    #[arg(long)]
    any_state: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// `er:P`, `sf:M`, `hier:K:DEPTH` or `cactus:S1,S2,...`.
    #[arg(long)]
    family: String,
    /// Node count; implied for the hierarchical and cactus families.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.5)]
    sign_prob: f64,
    /// Skip the fixed point search.
    #[arg(long)]
    no_attractor: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// `er:P`, `er-matched:M`, `sf:M` or `sf-frac:F`; repeatable.
    #[arg(long = "family", required = true)]
    families: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Any of tss_greedy, tss_exact, cycle_baseline.
    #[arg(long, value_delimiter = ',', default_value = "tss_greedy")]
    solvers: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.5)]
    sign_prob: f64,
    /// Record wall-clock time; output is then no longer reproducible.
    #[arg(long)]
    timings: bool,
    /// Per-trial CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aggregate CSV (mean and standard deviation per cell).
    #[arg(long)]
    aggregate: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Network file, or a `.tss` instance.
    input: PathBuf,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    attractor: Vec<String>,
    #[arg(long, default_value = "general")]
    reduction: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Usage(m) => CliError::Usage(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter(LOG_ENV)).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Domain(m) => eprintln!("pinset: {m}"),
            }
            e.code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Attractor(a) => cmd_attractor(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::ExportIlp(a) => cmd_export(a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension().is_some_and(|e| e == ext)
}

/// Network plus the attractor stored in the file, if any.
fn load_network(path: &Path) -> Result<(RegulatoryNetwork, Option<Vec<StateVector>>), CliError> {
    let text = read(path)?;
    let at = |e: crate::bn::ParseError| CliError::Domain(format!("{}: {e}", path.display()));
    if has_extension(path, "rules") {
        return Ok((import_rules(&text).map_err(at)?, None));
    }
    let doc = parse_document(&text).map_err(at)?;
    Ok((doc.network, doc.attractor))
}

fn target_states(
    net: &RegulatoryNetwork,
    given: &[String],
    stored: Option<Vec<StateVector>>,
) -> Result<Vec<StateVector>, CliError> {
    if given.is_empty() {
        return stored.ok_or_else(|| {
            usage("no --attractor given and the network file has no attractor line")
        });
    }
    given
        .iter()
        .map(|bits| match StateVector::parse_bits(bits) {
            Some(s) if s.len() == net.len() => Ok(s),
            _ => Err(usage(format!("'{bits}' is not a {}-bit state", net.len()))),
        })
        .collect()
}

fn parse_with<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(usage)
}

fn node_label(inst: &TssInstance, net: Option<&RegulatoryNetwork>, v: usize) -> String {
    let name = |node: NodeId| match net {
        Some(net) if node.0 < net.len() => net.name(node).to_string(),
        _ => format!("#{}", node.0),
    };
    match inst.provenance(v) {
        Provenance::Original { node, phase: 0 } => name(node),
        Provenance::Original { node, phase } => format!("{}@{phase}", name(node)),
        Provenance::Auxiliary {
            owner,
            clause,
            phase,
        } => format!("{}.c{clause}@{phase}", name(owner)),
    }
}

fn input_names(net: Option<&RegulatoryNetwork>, inputs: &[NodeId]) -> Vec<String> {
    inputs
        .iter()
        .map(|&j| match net {
            Some(net) => net.name(j).to_string(),
            None => format!("#{}", j.0),
        })
        .collect()
}

fn cmd_attractor(a: AttractorArgs) -> Result<(), CliError> {
    let (net, _) = load_network(&a.network)?;
    let n = net.len();
    let mut found: Vec<Vec<StateVector>> = Vec::new();
    if n <= MAX_EXHAUSTIVE_FREE {
        let pins = InputSet::new();
        let mut on_cycle = std::collections::BTreeSet::new();
        for code in 0..1u64 << n {
            let start = StateVector::from_index(code, n);
            if on_cycle.contains(&start) {
                continue;
            }
            let att = net.find_attractor_from(&start, &pins);
            let mut states = att.states().to_vec();
            if on_cycle.contains(&states[0]) {
                continue;
            }
            on_cycle.extend(states.iter().cloned());
            // Start each cycle at its smallest state.
            let first = (0..states.len()).min_by_key(|&k| &states[k]).unwrap_or(0);
            states.rotate_left(first);
            found.push(states);
        }
        found.sort();
        found.truncate(a.max);
    } else {
        info!("{n} nodes: listing fixed points only");
        found = net
            .find_fixed_points(a.max)
            .map_err(domain)?
            .into_iter()
            .map(|s| vec![s])
            .collect();
    }
    let mut out = String::new();
    match a.format {
        Format::Text => {
            for states in &found {
                let bits: Vec<String> = states.iter().map(StateVector::to_bit_string).collect();
                if states.len() == 1 {
                    writeln!(out, "fixed {}", bits[0]).unwrap();
                } else {
                    writeln!(out, "cycle {}: {}", states.len(), bits.join(" ")).unwrap();
                }
            }
            writeln!(out, "{} attractor(s)", found.len()).unwrap();
        }
        Format::Json => {
            let list: Vec<Vec<String>> = found
                .iter()
                .map(|states| states.iter().map(StateVector::to_bit_string).collect())
                .collect();
            let doc = json!({ "nodes": net.names(), "complete": n <= MAX_EXHAUSTIVE_FREE, "attractors": list });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    emit(None, &out)
}

fn reduce_problem(
    p: &ProblemArgs,
) -> Result<(RegulatoryNetwork, Vec<StateVector>, Reduced), CliError> {
    let (net, stored) = load_network(&p.network)?;
    let states = target_states(&net, &p.attractor, stored)?;
    let kind: ReductionKind = parse_with(&p.reduction)?;
    let reduced = reduce(&net, &states, kind)?;
    debug!(
        "{kind} reduction: {} instance nodes, {} edges",
        reduced.instance.len(),
        reduced.instance.edge_count()
    );
    Ok((net, states, reduced))
}

fn cmd_reduce(a: ReduceArgs) -> Result<(), CliError> {
    let (_, _, reduced) = reduce_problem(&a.problem)?;
    emit(a.out.as_deref(), &serialize_tss(&reduced.instance))
}

fn solve_options(k: Option<usize>, depth: Option<usize>) -> Result<SolveOptions, CliError> {
    let hierarchy = match (k, depth) {
        (Some(k), Some(depth)) => Some(HierarchySpec { k, depth }),
        (None, None) => None,
        _ => return Err(usage("--k and --depth go together")),
    };
    Ok(SolveOptions {
        hierarchy,
        ..SolveOptions::default()
    })
}

fn certificate_text(
    out: &mut String,
    inst: &TssInstance,
    net: Option<&RegulatoryNetwork>,
    sol: &Solution,
) {
    let cert = &sol.certificate;
    writeln!(
        out,
        "certificate: cascade activates {}/{} instance nodes in {} round(s)",
        cert.activated_count(),
        inst.len(),
        cert.rounds().len().saturating_sub(1)
    )
    .unwrap();
    for (k, round) in cert.rounds().iter().enumerate() {
        let labels: Vec<String> = round.iter().map(|&v| node_label(inst, net, v)).collect();
        writeln!(out, "  round {k}: {}", labels.join(", ")).unwrap();
    }
}

fn cmd_solve(a: SolveArgs) -> Result<(), CliError> {
    let method: Method = parse_with(&a.method)?;
    let opts = solve_options(a.k, a.depth)?;
    let (net, reduced, reduction) = if has_extension(&a.input, "tss") {
        let inst = parse_tss(&read(&a.input)?)
            .map_err(|e| domain(format!("{}: {e}", a.input.display())))?;
        let reduced = Reduced {
            instance: inst,
            classes: None,
        };
        (None, reduced, "none".to_string())
    } else {
        let problem = ProblemArgs {
            network: a.input.clone(),
            attractor: a.attractor.clone(),
            reduction: a.reduction.clone(),
        };
        let (net, _, reduced) = reduce_problem(&problem)?;
        (Some(net), reduced, a.reduction.clone())
    };
    let sol = solve(net.as_ref(), &reduced, method, &opts)?;
    let inst = &reduced.instance;
    let names = input_names(net.as_ref(), &sol.inputs);
    let mut out = String::new();
    match a.format {
        Format::Text => {
            writeln!(out, "S = {{{}}}", names.join(", ")).unwrap();
            writeln!(
                out,
                "method: {method}, reduction: {reduction}, instance: {} nodes, {} edges",
                inst.len(),
                inst.edge_count()
            )
            .unwrap();
            if let Some(note) = &sol.note {
                writeln!(out, "note: {note}").unwrap();
            }
            certificate_text(&mut out, inst, net.as_ref(), &sol);
        }
        Format::Json => {
            let rounds: Vec<Vec<String>> = sol
                .certificate
                .rounds()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| node_label(inst, net.as_ref(), v))
                        .collect()
                })
                .collect();
            let doc = json!({
                "method": method.name(),
                "reduction": reduction,
                "inputs": names,
                "seed_nodes": sol.set.members,
                "instance_nodes": inst.len(),
                "instance_edges": inst.edge_count(),
                "activated": sol.certificate.activated_count(),
                "covers_all": sol.certificate.covers_all(),
                "rounds": rounds,
                "note": sol.note,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    emit(a.out.as_deref(), &out)
}

fn report_json(report: &VerificationReport) -> serde_json::Value {
    json!({
        "mode": format!("{:?}", report.mode).to_lowercase(),
        "trials": report.trials,
        "converged": report.converged,
        "max_steps_observed": report.max_steps_observed,
        "counterexample": report.counterexample.as_ref().map(|c| json!({
            "initial": c.initial.to_bit_string(),
            "schedule": c.schedule,
        })),
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let (net, stored) = load_network(&a.problem.network)?;
    let states = target_states(&net, &a.problem.attractor, stored)?;
    let inputs: Vec<NodeId> = match &a.inputs {
        Some(names) => names
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| {
                net.node_by_name(s)
                    .ok_or_else(|| usage(format!("unknown node '{s}'")))
            })
            .collect::<Result<_, _>>()?,
        None => {
            let kind: ReductionKind = parse_with(&a.problem.reduction)?;
            let reduced = reduce(&net, &states, kind)?;
            let method: Method = parse_with(&a.method)?;
            solve(Some(&net), &reduced, method, &SolveOptions::default())?.inputs
        }
    };
    let target = Attractor::new(&net, states.clone()).map_err(domain)?;
    let policy = if a.any_state {
        InitialPolicy::AnyState
    } else {
        InitialPolicy::AgreeWithPins
    };
    let sampled = |default: u64| -> Result<(u64, u64), CliError> {
        let seed = a
            .seed
            .ok_or_else(|| usage("sampled verification needs --seed"))?;
        Ok((a.trials.unwrap_or(default), seed))
    };
    let schedule = match a.mode {
        VerifyMode::Mc => Some(Schedule::Sync),
        VerifyMode::Async => Some(Schedule::AsyncUniform),
        VerifyMode::Stochastic => Some(Schedule::StochasticUniform),
        VerifyMode::Exhaustive | VerifyMode::Cyclic => None,
    };
    let report = match (a.mode, schedule) {
        (VerifyMode::Cyclic, _) => {
            let sampling = match (a.trials, a.seed) {
                (None, None) => Sampling::Exhaustive,
                _ => {
                    let (trials, seed) = sampled(1000)?;
                    Sampling::MonteCarlo { trials, seed }
                }
            };
            verify_cyclic(&net, &target, &inputs, sampling, a.horizon)
        }
        (_, Some(schedule)) => {
            if states.len() != 1 {
                return Err(usage(
                    "sampled schedules need a fixed-point attractor; use --mode cyclic",
                ));
            }
            let (trials, seed) = sampled(1000)?;
            let pins = InputSet::from_target(&states[0], inputs.iter().copied());
            let horizon = a.horizon.or(Some(64 * net.len().max(1)));
            verify_monte_carlo(
                &net, &target, &pins, schedule, trials, seed, horizon, policy,
            )
        }
        _ => {
            if states.len() != 1 {
                return Err(usage(
                    "exhaustive mode needs a fixed point; use --mode cyclic",
                ));
            }
            let pins = InputSet::from_target(&states[0], inputs.iter().copied());
            verify_exhaustive(&net, &target, &pins, a.horizon, policy)
        }
    }
    .map_err(domain)?;
    let names = input_names(Some(&net), &inputs);
    let mut out = String::new();
    match a.format {
        Format::Text => {
            writeln!(out, "pins: {{{}}}", names.join(", ")).unwrap();
            writeln!(out, "{}/{} converged", report.converged, report.trials).unwrap();
            writeln!(out, "max steps: {}", report.max_steps_observed).unwrap();
            if let Some(c) = &report.counterexample {
                writeln!(out, "counterexample: initial {}", c.initial.to_bit_string()).unwrap();
            }
        }
        Format::Json => {
            let mut doc = report_json(&report);
            doc["pins"] = json!(names);
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    emit(None, &out)?;
    if report.all_converged() {
        Ok(())
    } else {
        Err(CliError::Domain(format!(
            "{} of {} runs missed the attractor",
            report.trials - report.converged,
            report.trials
        )))
    }
}

fn parse_gen_family(s: &str) -> Result<Family, CliError> {
    let bad = || usage(format!("invalid family '{s}'"));
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "er" if arg.is_empty() => Ok(Family::ErdosRenyi { p: DEFAULT_ER_P }),
        "er" => Ok(Family::ErdosRenyi {
            p: arg.parse().map_err(|_| bad())?,
        }),
        "sf" => Ok(Family::ScaleFree {
            m: arg.parse().map_err(|_| bad())?,
        }),
        "hier" => {
            let (k, depth) = arg.split_once(':').ok_or_else(bad)?;
            Ok(Family::Hierarchical {
                k: k.parse().map_err(|_| bad())?,
                depth: depth.parse().map_err(|_| bad())?,
            })
        }
        "cactus" => Ok(Family::BlockCactus {
            block_sizes: arg
                .split(',')
                .map(|b| b.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?,
        }),
        _ => Err(bad()),
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<(), CliError> {
    let seed = a.seed.ok_or_else(|| usage("generate needs --seed"))?;
    let family = parse_gen_family(&a.family)?;
    let n = match (&family, a.n) {
        (Family::Hierarchical { k, depth }, _) => HierarchySpec {
            k: *k,
            depth: *depth,
        }
        .node_count(),
        (Family::BlockCactus { block_sizes }, _) => block_sizes.iter().sum(),
        (_, Some(n)) => n,
        (_, None) => return Err(usage("--n is required for this family")),
    };
    let spec = GenSpec {
        family,
        n,
        seed,
        sign_prob: a.sign_prob,
        tau: TauMode::Constant(a.tau),
    };
    let net = generate(&spec).map_err(|e| usage(e.to_string()))?;
    let attractor = if a.no_attractor {
        None
    } else {
        match pick_attractor(&net) {
            Ok(x) => Some(vec![x]),
            Err(e) => {
                log::warn!("no attractor line written: {e}");
                None
            }
        }
    };
    emit(
        a.out.as_deref(),
        &serialize_document(&net, attractor.as_deref()),
    )
}

fn cmd_experiment(a: ExperimentArgs) -> Result<(), CliError> {
    let seed = a.seed.ok_or_else(|| usage("experiment needs --seed"))?;
    let families = a
        .families
        .iter()
        .map(|f| parse_with::<FamilySpec>(f))
        .collect::<Result<Vec<_>, _>>()?;
    let solvers = a
        .solvers
        .iter()
        .map(|s| parse_with::<TrendSolver>(s))
        .collect::<Result<Vec<_>, _>>()?;
    if a.sizes.contains(&0) || a.trials == 0 {
        return Err(usage("sizes and trials must be positive"));
    }
    let mut config = ExperimentConfig::new(families, a.sizes.clone(), seed);
    config.trials = a.trials;
    config.solvers = solvers;
    config.tau = a.tau;
    config.sign_prob = a.sign_prob;
    config.record_runtime = a.timings;
    let metadata = json!({
        "seed": seed,
        "trials": config.trials,
        "tau": config.tau,
        "sign_prob": config.sign_prob,
        "families": config.families.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "sizes": config.sizes,
        "defaults_note": format!(
            "er edge probability {DEFAULT_ER_P} and {DEFAULT_TRIALS} trials are defaults chosen here, not published settings"
        ),
    });
    let result = run_trend_experiment(&config);
    if !result.skipped.is_empty() {
        info!("{} cell(s) skipped: no fixed point", result.skipped.len());
    }
    for f in &result.failures {
        log::warn!(
            "cell {} n={} trial {} failed: {}",
            f.family,
            f.n,
            f.trial,
            f.error
        );
    }
    let agg = aggregate(&result.rows);
    if let Some(path) = &a.aggregate {
        let file = fs::File::create(path)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        write_aggregate_csv(&agg, file).map_err(domain)?;
    }
    let text = match a.format {
        Format::Text => {
            eprintln!(
                "# {}",
                metadata["defaults_note"].as_str().unwrap_or_default()
            );
            let mut buf = Vec::new();
            write_rows_csv(&result.rows, &mut buf).map_err(domain)?;
            String::from_utf8(buf).map_err(domain)?
        }
        Format::Json => {
            let doc = json!({
                "metadata": metadata,
                "rows": result.rows,
                "aggregate": agg,
                "skipped": result.skipped,
                "failures": result.failures,
            });
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    emit(a.out.as_deref(), &text)?;
    if result.rows.iter().any(|r| !r.verified) {
        return Err(CliError::Domain(
            "some recorded input sets failed verification".into(),
        ));
    }
    Ok(())
}

/// Row counts of the exported program for `m` nodes.
pub fn ilp_row_counts(m: usize) -> (usize, usize, usize) {
    (
        m,
        m * m.saturating_sub(1) / 2,
        m * m.saturating_sub(1) * m.saturating_sub(2),
    )
}

fn cmd_export(a: ExportArgs) -> Result<(), CliError> {
    let inst = if has_extension(&a.input, "tss") {
        parse_tss(&read(&a.input)?).map_err(|e| domain(format!("{}: {e}", a.input.display())))?
    } else {
        let problem = ProblemArgs {
            network: a.input.clone(),
            attractor: a.attractor.clone(),
            reduction: a.reduction.clone(),
        };
        reduce_problem(&problem)?.2.instance
    };
    let mut lp = String::new();
    export_ilp(&inst, &mut lp).map_err(domain)?;
    emit(a.out.as_deref(), &lp)?;
    let (cover, order, tri) = ilp_row_counts(inst.len());
    eprintln!(
        "{} rows: {cover} threshold, {order} ordering, {tri} transitivity",
        cover + order + tri
    );
    Ok(())
}
