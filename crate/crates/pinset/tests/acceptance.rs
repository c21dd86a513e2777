//! Acceptance run: one line per criterion. A failing criterion is reported
//! but only turns into a nonzero exit status when `ACCEPTANCE_STRICT` is set,
//! so the remaining test targets still run under `cargo test`.

mod common;

use std::time::{Duration, Instant};

use common::{random_document, rng};
use pinset::bn::{parse_document, serialize_document};
use pinset::experiment::{
    bootstrap_paired_support, bootstrap_support, run_trend_experiment, ExperimentConfig,
    ExperimentRow, FamilySpec, TrendSolver,
};
use pinset::pipeline::{reduce, solve, Method, PipelineError, ReductionKind, SolveOptions};
use pinset::tss_format::{parse_tss, serialize_tss};
use pinset_core::cnf::rule_to_cnf;
use pinset_core::genlab::{
    generate, pick_attractor, random_network, random_rule, Family, GenSpec, RuleClass, TauMode,
};
use pinset_core::reduction::{
    build_augmented, build_cyclic, build_threshold_tss, merge_threshold, merged_threshold,
    NodeClass, ReductionError, SignedThresholdNet,
};
use pinset_core::structured::{
    solve_block_cactus, solve_clique, solve_cycle_baseline, solve_hierarchical,
    solve_unanimous_fvs, unanimous_condition, CliquePartition, HierarchySpec, StructError,
};
use pinset_core::tss::{is_target_set, solve_exact, ExactOptions};
use pinset_core::verify::{
    verify_cyclic, verify_exhaustive, verify_monte_carlo, InitialPolicy, Sampling, Schedule,
};
use pinset_core::{
    Attractor, InputSet, NodeId, RegulatoryNetwork, StateVector, TssInstance, UpdateRule,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const RESAMPLES: usize = 2000;
const CONFIDENCE: f64 = 0.95;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------------------
// Oracles

/// Bitmask cascade straight from the definition.
fn brute_covers(inst: &TssInstance, seed: u64) -> bool {
    let m = inst.len();
    let mut active = seed;
    loop {
        let mut next = active;
        for v in 0..m {
            if next >> v & 1 == 1 {
                continue;
            }
            let pressure: i64 = inst
                .in_edges(v)
                .iter()
                .filter(|&&(u, _)| active >> u & 1 == 1)
                .map(|&(_, k)| k as i64)
                .sum();
            if pressure >= inst.tau(v) {
                next |= 1 << v;
            }
        }
        if next == active {
            return active.count_ones() as usize == m;
        }
        active = next;
    }
}

fn brute_minimum(inst: &TssInstance) -> u32 {
    let m = inst.len();
    (0u64..1 << m)
        .filter(|&s| brute_covers(inst, s))
        .map(u64::count_ones)
        .min()
        .expect("the full set covers")
}

fn mask(nodes: &[usize]) -> u64 {
    nodes.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// Synchronous runs from every pin-consistent state; true iff each one
/// settles on `x`.
fn all_runs_reach(net: &RegulatoryNetwork, x: &StateVector, pins: &InputSet) -> bool {
    let n = net.len();
    let free: Vec<usize> = (0..n).filter(|&i| pins.get(NodeId(i)).is_none()).collect();
    let budget = (1usize << free.len()) + 2;
    (0u64..1 << free.len()).all(|code| {
        let mut s = x.clone();
        for (k, &i) in free.iter().enumerate() {
            s.set(i, code >> k & 1 == 1);
        }
        for _ in 0..budget {
            s = net.step_synchronous(&s, pins);
        }
        s == *x && net.step_synchronous(&s, pins) == *x
    })
}

/// Replays `states` on `genes` from every consistent start and checks that
/// the run ends up tracing the cycle.
fn all_runs_track(net: &RegulatoryNetwork, states: &[StateVector], genes: &[NodeId]) -> bool {
    let n = net.len();
    let p = states.len();
    let phase = |t: usize| InputSet::from_target(&states[t % p], genes.iter().copied());
    let free: Vec<usize> = (0..n).filter(|&i| !genes.contains(&NodeId(i))).collect();
    let budget = p * ((1usize << free.len()) + 2);
    (0u64..1 << free.len()).all(|code| {
        let mut s = states[0].clone();
        for (k, &i) in free.iter().enumerate() {
            s.set(i, code >> k & 1 == 1);
        }
        let mut t = 0;
        while t < budget {
            t += 1;
            s = net.step_synchronous(&s, &phase(t));
        }
        let mut tail = Vec::with_capacity(p);
        for _ in 0..p {
            tail.push(s.clone());
            t += 1;
            s = net.step_synchronous(&s, &phase(t));
        }
        (0..p).any(|shift| (0..p).all(|l| tail[l] == states[(l + shift) % p]))
    })
}

// ---------------------------------------------------------------------------
// 1. Sufficiency

fn check_fixed_point_set(
    net: &RegulatoryNetwork,
    x: &StateVector,
    inputs: &[NodeId],
    label: &str,
    failures: &mut Vec<String>,
) {
    let pins = InputSet::from_target(x, inputs.iter().copied());
    let target = Attractor::fixed_point(net, x.clone()).unwrap();
    let lib = verify_exhaustive(net, &target, &pins, None, InitialPolicy::AgreeWithPins)
        .map(|r| r.all_converged())
        .unwrap_or(false);
    let oracle = all_runs_reach(net, x, &pins);
    if !(lib && oracle) {
        failures.push(format!("{label}: library {lib}, oracle {oracle}"));
    }
}

fn sufficiency() -> Outcome {
    let classes = [
        RuleClass::TruthTable,
        RuleClass::Threshold,
        RuleClass::NestedCanalyzing,
        RuleClass::Mixed,
    ];
    let mut nets = 0;
    let mut sets = 0;
    let mut failures = Vec::new();
    let mut seed = 0u64;
    let opts = SolveOptions::default();
    while nets < 250 {
        seed += 1;
        let mut r = rng(seed);
        let n = r.gen_range(1..=10);
        let kind = seed as usize % 5;
        let net = if kind < 4 {
            random_network(n, 3, classes[kind], r.gen_bool(0.5), &mut r)
        } else {
            let mut spec = GenSpec::new(
                Family::ErdosRenyi {
                    p: r.gen_range(0.1..0.5),
                },
                n,
                seed,
            );
            spec.tau = TauMode::Constant(r.gen_range(0..3) as f64 * 0.5);
            generate(&spec).unwrap()
        };
        let Some(x) = net.find_fixed_points(1).unwrap().into_iter().next() else {
            continue;
        };
        nets += 1;
        let mut plans = vec![(
            ReductionKind::General,
            vec![Method::Exact, Method::Greedy, Method::Cactus],
        )];
        match kind {
            1 | 4 => plans.push((
                ReductionKind::Threshold,
                vec![
                    Method::Exact,
                    Method::Greedy,
                    Method::Clique,
                    Method::Cactus,
                ],
            )),
            2 => {
                plans.push((ReductionKind::Nc, vec![Method::Exact, Method::Greedy]));
                plans.push((
                    ReductionKind::NcUnanimous,
                    vec![Method::Exact, Method::Greedy, Method::NcFvs],
                ));
            }
            _ => {}
        }
        for (reduction, methods) in plans {
            let reduced = match reduce(&net, std::slice::from_ref(&x), reduction) {
                Ok(red) => red,
                // Random threshold rules draw a sign per edge, so most are not signed networks.
                Err(PipelineError::Reduction(ReductionError::MixedSignNode(_))) if kind == 1 => {
                    continue
                }
                Err(e) => {
                    failures.push(format!("seed {seed} {reduction}: {e}"));
                    continue;
                }
            };
            for method in methods {
                let sol = match solve(Some(&net), &reduced, method, &opts) {
                    Ok(sol) => sol,
                    // Structure-specific solvers reject instances without the structure.
                    Err(PipelineError::Struct(
                        StructError::NotACliqueInstance(_)
                        | StructError::NotATree(_)
                        | StructError::NotACliquePartition(_),
                    )) if matches!(method, Method::Clique | Method::Cactus) => continue,
                    Err(e) => {
                        failures.push(format!("seed {seed} {reduction}/{method}: {e}"));
                        continue;
                    }
                };
                sets += 1;
                check_fixed_point_set(
                    &net,
                    &x,
                    &sol.inputs,
                    &format!("seed {seed} {reduction}/{method}"),
                    &mut failures,
                );
            }
        }
        let baseline: Vec<NodeId> = solve_cycle_baseline(&net)
            .members
            .into_iter()
            .map(NodeId)
            .collect();
        sets += 1;
        check_fixed_point_set(
            &net,
            &x,
            &baseline,
            &format!("seed {seed} cycle-baseline"),
            &mut failures,
        );
    }
    // Cyclic attractors with replayed pins.
    let mut cyclic = 0;
    let mut seed = 10_000u64;
    while cyclic < 50 {
        seed += 1;
        let mut r = rng(seed);
        let n = r.gen_range(2..=7);
        let net = random_network(n, 2, RuleClass::Mixed, true, &mut r);
        let start = StateVector::from_index(r.gen_range(0..1u64 << n), n);
        let att = net.find_attractor_from(&start, &InputSet::new());
        if att.period() < 2 {
            continue;
        }
        cyclic += 1;
        let inst = build_cyclic(&net, &att).unwrap();
        for (name, set) in [
            ("exact", solve_exact(&inst, ExactOptions::default())),
            ("greedy", pinset_core::tss::solve_greedy(&inst, true)),
        ] {
            let Ok(set) = set else {
                failures.push(format!("cyclic seed {seed} {name}: no set"));
                continue;
            };
            sets += 1;
            let genes = set.inputs(&inst);
            let lib = verify_cyclic(&net, &att, &genes, Sampling::Exhaustive, None)
                .map(|r| r.all_converged())
                .unwrap_or(false);
            let oracle = all_runs_track(&net, att.states(), &genes);
            if !(lib && oracle) {
                failures.push(format!(
                    "cyclic seed {seed} {name}: library {lib}, oracle {oracle}"
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{nets} fixed-point networks + {cyclic} cyclic, {sets} input sets, {} counterexamples{}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" {:?}", &failures[..failures.len().min(5)]) }
        ),
    )
}

// ---------------------------------------------------------------------------
// 2. Exact solver against subset enumeration

fn random_tss(r: &mut ChaCha8Rng, max_m: usize) -> TssInstance {
    let m = r.gen_range(1..=max_m);
    let density = r.gen_range(0.1..0.5);
    let mut inst = TssInstance::plain(vec![0; m]);
    for u in 0..m {
        for v in 0..m {
            if r.gen_bool(density) {
                inst.add_edges(u, v, r.gen_range(1..=2));
            }
        }
    }
    for v in 0..m {
        let d = inst.in_degree(v) as i64;
        inst.set_tau(v, r.gen_range(-1..=d + 1));
    }
    inst
}

fn exact_vs_enumeration() -> Outcome {
    let mut mismatches = 0;
    let cases = 150;
    for seed in 0..cases {
        let inst = random_tss(&mut rng(seed), 12);
        let exact = solve_exact(&inst, ExactOptions::default()).unwrap();
        if !brute_covers(&inst, mask(&exact.members)) || exact.len() as u32 != brute_minimum(&inst)
        {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{cases} instances (m <= 12), {mismatches} mismatches"),
    )
}

// ---------------------------------------------------------------------------
// 3. Clique and block cactus solvers

fn wire_block(inst: &mut TssInstance, block: &[usize], classes: &[NodeClass]) {
    for &u in block {
        for &v in block {
            if u != v && classes[u].feeds(classes[v]) {
                inst.add_edge(u, v);
            }
        }
    }
}

fn random_classes(r: &mut ChaCha8Rng, m: usize) -> Vec<NodeClass> {
    (0..m)
        .map(|_| NodeClass::new(r.gen_bool(0.5), r.gen_bool(0.5)))
        .collect()
}

fn randomize_tau(r: &mut ChaCha8Rng, inst: &mut TssInstance) {
    for v in 0..inst.len() {
        let d = inst.in_degree(v) as i64;
        inst.set_tau(v, r.gen_range(-1..=d + 1));
    }
}

fn structured_exactness() -> Outcome {
    let mut bad = Vec::new();
    let cliques = 150;
    for seed in 0..cliques {
        let mut r = rng(seed);
        let m = r.gen_range(1..=10);
        let classes = random_classes(&mut r, m);
        let mut inst = TssInstance::plain(vec![0; m]);
        wire_block(&mut inst, &(0..m).collect::<Vec<_>>(), &classes);
        randomize_tau(&mut r, &mut inst);
        let fast = solve_clique(&inst, Some(&classes)).unwrap();
        if !brute_covers(&inst, mask(&fast.members)) || fast.len() as u32 != brute_minimum(&inst) {
            bad.push(format!("clique seed {seed}"));
        }
    }
    let cacti = 100;
    for seed in 0..cacti {
        let mut r = rng(1_000 + seed);
        let nb = r.gen_range(1..=5);
        let mut sizes: Vec<usize> = (0..nb).map(|_| r.gen_range(1..=4)).collect();
        while sizes.iter().sum::<usize>() > 12 {
            sizes.pop();
        }
        let m: usize = sizes.iter().sum();
        let classes = random_classes(&mut r, m);
        let mut inst = TssInstance::plain(vec![0; m]);
        let mut blocks = Vec::new();
        let mut start = 0;
        for &s in &sizes {
            let block: Vec<usize> = (start..start + s).collect();
            wire_block(&mut inst, &block, &classes);
            blocks.push(block);
            start += s;
        }
        for b in 1..blocks.len() {
            let p = r.gen_range(0..b);
            let u = *blocks[b].choose(&mut r).unwrap();
            let v = *blocks[p].choose(&mut r).unwrap();
            if r.gen_bool(0.5) {
                inst.add_edge(u, v)
            } else {
                inst.add_edge(v, u)
            }
        }
        randomize_tau(&mut r, &mut inst);
        let fast =
            solve_block_cactus(&inst, &CliquePartition::new(blocks), Some(&classes)).unwrap();
        if !brute_covers(&inst, mask(&fast.members)) || fast.len() as u32 != brute_minimum(&inst) {
            bad.push(format!("cactus seed {seed}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{cliques} cliques (n <= 10), {cacti} cacti (n <= 12), {} mismatches {bad:?}",
            bad.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. Cycle and connectivity characterization for unanimous thresholds

/// `in_masks[v]`: in-neighbors of `v`. Threshold is the in-degree, so a node
/// fires once all its in-neighbors are active.
fn unanimous_cascade(in_masks: &[u64], seed: u64) -> bool {
    let full = (1u64 << in_masks.len()) - 1;
    let mut active = seed;
    loop {
        let next = in_masks.iter().enumerate().fold(active, |acc, (v, &m)| {
            if m & active == m {
                acc | 1 << v
            } else {
                acc
            }
        });
        if next == active {
            return active == full;
        }
        active = next;
    }
}

/// The graph minus `seed` is acyclic and every node is reachable from the
/// seed or from a node without in-edges.
fn cycles_hit_and_connected(in_masks: &[u64], seed: u64) -> bool {
    let m = in_masks.len();
    let full = (1u64 << m) - 1;
    let mut left = full & !seed;
    loop {
        let peel = (0..m)
            .filter(|&v| left >> v & 1 == 1 && in_masks[v] & left == 0)
            .fold(0u64, |acc, v| acc | 1 << v);
        if peel == 0 {
            break;
        }
        left &= !peel;
    }
    if left != 0 {
        return false;
    }
    let sources = (0..m)
        .filter(|&v| in_masks[v] == 0)
        .fold(0u64, |acc, v| acc | 1 << v);
    let mut reach = seed | sources;
    loop {
        let next = (0..m)
            .filter(|&v| in_masks[v] & reach != 0)
            .fold(reach, |acc, v| acc | 1 << v);
        if next == reach {
            return reach == full;
        }
        reach = next;
    }
}

fn unanimous_instance(in_masks: &[u64]) -> TssInstance {
    let m = in_masks.len();
    let mut inst = TssInstance::plain(vec![0; m]);
    for v in 0..m {
        for u in 0..m {
            if in_masks[v] >> u & 1 == 1 {
                inst.add_edge(u, v);
            }
        }
        inst.set_tau(v, inst.in_degree(v) as i64);
    }
    inst
}

fn unanimous_characterization() -> Outcome {
    let mut bad = 0u64;
    let mut checked = 0u64;
    // Random digraphs up to 8 nodes, every subset, against the library too.
    let samples = 300;
    for seed in 0..samples {
        let mut r = rng(seed);
        let m = r.gen_range(1..=8);
        let density = r.gen_range(0.1..0.4);
        let in_masks: Vec<u64> = (0..m)
            .map(|_| {
                (0..m)
                    .filter(|_| r.gen_bool(density))
                    .fold(0u64, |acc, u| acc | 1 << u)
            })
            .collect();
        let inst = unanimous_instance(&in_masks);
        let fvs = solve_unanimous_fvs(&inst);
        if !unanimous_cascade(&in_masks, mask(&fvs.members)) {
            bad += 1;
        }
        for s in 0u64..1 << m {
            let seed_nodes: Vec<usize> = (0..m).filter(|&v| s >> v & 1 == 1).collect();
            let truth = unanimous_cascade(&in_masks, s);
            checked += 1;
            if truth != cycles_hit_and_connected(&in_masks, s)
                || truth != is_target_set(&inst, &seed_nodes)
                || truth != unanimous_condition(&inst, &seed_nodes)
            {
                bad += 1;
            }
        }
    }
    // Every digraph on up to 4 nodes (self-loops allowed) and on 5 nodes
    // without self-loops, every subset.
    let mut graphs = 0u64;
    for m in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (0..m).map(move |v| (u, v)))
            .filter(|&(u, v)| m < 5 || u != v)
            .collect();
        for g in 0u64..1 << pairs.len() {
            graphs += 1;
            let mut in_masks = vec![0u64; m];
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if g >> k & 1 == 1 {
                    in_masks[v] |= 1 << u;
                }
            }
            let lib = (m <= 4).then(|| unanimous_instance(&in_masks));
            for s in 0u64..1 << m {
                checked += 1;
                let truth = unanimous_cascade(&in_masks, s);
                if truth != cycles_hit_and_connected(&in_masks, s) {
                    bad += 1;
                }
                if let Some(inst) = &lib {
                    let seed_nodes: Vec<usize> = (0..m).filter(|&v| s >> v & 1 == 1).collect();
                    if truth != unanimous_condition(inst, &seed_nodes) {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("{samples} random digraphs (n <= 8) + {graphs} exhaustive (n <= 5), {checked} (graph, set) pairs, {bad} disagreements"),
    )
}

// ---------------------------------------------------------------------------
// 5. Baseline dominance

fn baseline_dominance() -> Outcome {
    let mut invalid = 0;
    let mut nets = 0;
    let mut seed = 0u64;
    let mut tss_sizes = Vec::new();
    let mut base_sizes = Vec::new();
    while nets < 150 {
        seed += 1;
        let mut r = rng(50_000 + seed);
        let n = r.gen_range(1..=8);
        let net = random_network(n, 3, RuleClass::Mixed, true, &mut r);
        let Some(x) = net.find_fixed_points(1).unwrap().into_iter().next() else {
            continue;
        };
        nets += 1;
        let inst = build_augmented(&net, &x).unwrap();
        let base = solve_cycle_baseline(&net);
        if !brute_covers(&inst, mask(&base.members)) {
            invalid += 1;
        }
        let exact = solve_exact(&inst, ExactOptions::default()).unwrap();
        tss_sizes.push(exact.inputs(&inst).len() as f64);
        base_sizes.push(base.len() as f64);
    }
    let small = bootstrap_paired_support(&tss_sizes, &base_sizes, RESAMPLES, 5, |d| d < 0.0);

    let mut config = ExperimentConfig::new(
        vec![FamilySpec::ScaleFreeFraction { fraction: 0.2 }],
        vec![10, 20, 40],
        2024,
    );
    config.solvers = vec![TrendSolver::TssGreedy, TrendSolver::CycleBaseline];
    let result = run_trend_experiment(&config);
    let unverified = result.rows.iter().filter(|r| !r.verified).count();
    let mut per_n = Vec::new();
    let mut trend_ok = true;
    for n in [10, 20, 40] {
        let (tss, base) = paired_columns(&result.rows, n, "tss_greedy", "cycle_baseline");
        let support = bootstrap_paired_support(&tss, &base, RESAMPLES, n as u64, |d| d < 0.0);
        trend_ok &= support >= CONFIDENCE && tss.len() >= config.trials / 2;
        per_n.push(format!(
            "n={n}: {:.2} vs {:.2} ({support:.3})",
            mean(&tss),
            mean(&base)
        ));
    }
    let pass = invalid == 0
        && small >= CONFIDENCE
        && unverified == 0
        && result.failures.is_empty()
        && trend_ok;
    let skipped = result.skipped.len();
    outcome(
        pass,
        format!(
            "{nets} nets, {invalid} invalid baseline sets; exact {:.2} vs baseline {:.2} (support {small:.3}); \
             scale-free 0.2n greedy vs baseline {}; {unverified} unverified rows, {} failed cells, {skipped} without a fixed point",
            mean(&tss_sizes),
            mean(&base_sizes),
            per_n.join(", "),
            result.failures.len()
        ),
    )
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len().max(1) as f64
}

/// Input counts of two solvers on the same networks, matched by trial.
fn paired_columns(rows: &[ExperimentRow], n: usize, a: &str, b: &str) -> (Vec<f64>, Vec<f64>) {
    let pick = |solver: &str, trial: usize| {
        rows.iter()
            .find(|r| r.n == n && r.solver == solver && r.trial == trial)
            .map(|r| r.input_count as f64)
    };
    let trials: Vec<usize> = rows
        .iter()
        .filter(|r| r.n == n && r.solver == a)
        .map(|r| r.trial)
        .collect();
    trials
        .into_iter()
        .filter_map(|t| Some((pick(a, t)?, pick(b, t)?)))
        .unzip()
}

// ---------------------------------------------------------------------------
// 6. Hierarchical bound

fn hierarchical_bound() -> Outcome {
    let mut shapes = Vec::new();
    for k in 1..=15usize {
        for depth in 1..=4usize {
            if (k + 1).pow(depth as u32) <= 16 {
                shapes.push((k, depth));
            }
        }
    }
    let mut instances = 0;
    let mut bad = Vec::new();
    for &(k, depth) in &shapes {
        let n = (k + 1).pow(depth as u32);
        for seed in 0..12u64 {
            let mut spec = GenSpec::new(Family::Hierarchical { k, depth }, n, seed);
            spec.tau = TauMode::Constant([0.0, 0.5, 1.0, 2.0][seed as usize % 4]);
            spec.sign_prob = [0.5, 0.8, 1.0][seed as usize % 3];
            let net = generate(&spec).unwrap();
            let Ok(x) = pick_attractor(&net) else {
                continue;
            };
            let inst = build_threshold_tss(&SignedThresholdNet::new(net).unwrap(), &x).unwrap();
            instances += 1;
            let alg = match solve_hierarchical(&inst, HierarchySpec { k, depth }) {
                Ok(s) => s,
                Err(e) => {
                    bad.push(format!("k={k} depth={depth} seed={seed}: {e}"));
                    continue;
                }
            };
            let exact = solve_exact(&inst, ExactOptions::default()).unwrap();
            let factor = (n as f64).log2().ceil() as usize;
            if !brute_covers(&inst, mask(&alg.members)) || alg.len() > factor * exact.len() {
                bad.push(format!(
                    "k={k} depth={depth} seed={seed}: {} vs {}",
                    alg.len(),
                    exact.len()
                ));
            }
        }
    }
    outcome(
        bad.is_empty() && instances > 0,
        format!(
            "{instances} instances over {} shapes, {} violations {bad:?}",
            shapes.len(),
            bad.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// 7. Probabilistic merge and asynchronous updates

fn probabilistic_and_async() -> Outcome {
    let mut cases = 0;
    let mut unequal = 0;
    let mut missed = Vec::new();
    let mut seed = 0u64;
    let trials = 1000;
    while cases < 60 {
        seed += 1;
        let mut r = rng(70_000 + seed);
        let n = r.gen_range(2..=7);
        let sign: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let rules: Vec<UpdateRule> = (0..n)
            .map(|i| {
                let signed: Vec<(NodeId, bool)> = (0..n)
                    .filter(|&j| j != i && r.gen_bool(0.4))
                    .map(|j| (NodeId(j), sign[j]))
                    .collect();
                let k = r.gen_range(2..=3);
                UpdateRule::RuleSet(
                    (0..k)
                        .map(|_| UpdateRule::signed_threshold(&signed, r.gen_range(-1..=2) as f64))
                        .collect(),
                )
            })
            .collect();
        let net = RegulatoryNetwork::new(rules).unwrap();
        let Some(x) = net.find_fixed_points(1).unwrap().into_iter().next() else {
            continue;
        };
        cases += 1;
        let single_rules: Vec<UpdateRule> = (0..n)
            .map(|i| {
                let rule = net.rule(NodeId(i));
                let UpdateRule::Threshold {
                    inputs, weights, ..
                } = rule.alternative(0).unwrap().clone()
                else {
                    unreachable!("alternatives are thresholds")
                };
                UpdateRule::Threshold {
                    inputs,
                    weights,
                    tau: merged_threshold(rule, NodeId(i), x.get(i)).unwrap(),
                }
            })
            .collect();
        let single = RegulatoryNetwork::new(single_rules).unwrap();
        let merged = merge_threshold(&net, &x).unwrap();
        if merged
            != build_threshold_tss(&SignedThresholdNet::new(single.clone()).unwrap(), &x).unwrap()
        {
            unequal += 1;
        }
        let set = solve_exact(&merged, ExactOptions::default()).unwrap();
        let pins = InputSet::from_target(&x, set.inputs(&merged));
        let horizon = Some(64 * n);
        for (label, network, schedule) in [
            ("stochastic", &net, Schedule::StochasticUniform),
            ("async", &single, Schedule::AsyncUniform),
        ] {
            let target = Attractor::fixed_point(network, x.clone()).unwrap();
            let rep = verify_monte_carlo(
                network,
                &target,
                &pins,
                schedule,
                trials,
                seed,
                horizon,
                InitialPolicy::AgreeWithPins,
            )
            .unwrap();
            if rep.trials != trials || !rep.all_converged() {
                missed.push(format!(
                    "case {seed} {label}: {}/{}",
                    rep.converged, rep.trials
                ));
            }
        }
    }
    outcome(
        unequal == 0 && missed.is_empty(),
        format!(
            "{cases} rule-set networks, {unequal} unequal instances, {trials} stochastic + {trials} asynchronous trials each, {} short {missed:?}",
            missed.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// 8. Trends on generated networks

fn counts(rows: &[ExperimentRow], n: usize, param_prefix: &str) -> Vec<f64> {
    rows.iter()
        .filter(|r| r.n == n && r.param.starts_with(param_prefix) && r.solver == "tss_greedy")
        .map(|r| r.input_count as f64)
        .collect()
}

fn trends() -> Outcome {
    let sizes = vec![10, 20, 40];
    let matched = ExperimentConfig::new(
        vec![
            FamilySpec::ScaleFree { m: 2 },
            FamilySpec::ErdosRenyiMatched { m: 2 },
        ],
        sizes.clone(),
        8,
    );
    let by_m = ExperimentConfig::new(
        vec![
            FamilySpec::ScaleFree { m: 1 },
            FamilySpec::ScaleFree { m: 2 },
            FamilySpec::ScaleFree { m: 4 },
        ],
        sizes.clone(),
        9,
    );
    let a = run_trend_experiment(&matched);
    let b = run_trend_experiment(&by_m);
    let unverified = a.rows.iter().chain(&b.rows).filter(|r| !r.verified).count();
    let failed = a.failures.len() + b.failures.len();
    let skipped = a.skipped.len() + b.skipped.len();
    let mut pass = unverified == 0 && failed == 0;
    let mut notes = Vec::new();
    for &n in &sizes {
        let sf: Vec<f64> = a
            .rows
            .iter()
            .filter(|r| r.n == n && r.family == "scale_free")
            .map(|r| r.input_count as f64)
            .collect();
        let er: Vec<f64> = a
            .rows
            .iter()
            .filter(|r| r.n == n && r.family == "erdos_renyi")
            .map(|r| r.input_count as f64)
            .collect();
        let s = bootstrap_support(&sf, &er, RESAMPLES, n as u64, |x, y| x <= y);
        pass &= s >= CONFIDENCE;
        notes.push(format!(
            "n={n} sf {:.2} <= er {:.2} ({s:.3})",
            mean(&sf),
            mean(&er)
        ));
        let (m1, m2, m4) = (
            counts(&b.rows, n, "m=1"),
            counts(&b.rows, n, "m=2"),
            counts(&b.rows, n, "m=4"),
        );
        let s12 = bootstrap_support(&m1, &m2, RESAMPLES, 100 + n as u64, |x, y| x >= y);
        let s24 = bootstrap_support(&m2, &m4, RESAMPLES, 200 + n as u64, |x, y| x >= y);
        pass &= s12 >= CONFIDENCE && s24 >= CONFIDENCE;
        notes.push(format!(
            "m=1,2,4: {:.2} >= {:.2} >= {:.2} ({s12:.3}, {s24:.3})",
            mean(&m1),
            mean(&m2),
            mean(&m4)
        ));
    }
    outcome(
        pass,
        format!(
            "{}; {unverified} unverified rows, {failed} failed cells, {skipped} without a fixed point",
            notes.join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------
// 9. CNF fidelity and format round trips

fn cnf_and_formats() -> Outcome {
    let mut rules = 0;
    let mut cnf_bad = 0;
    for d in 0..=10usize {
        for (c, class) in [
            RuleClass::TruthTable,
            RuleClass::Threshold,
            RuleClass::NestedCanalyzing,
        ]
        .into_iter()
        .enumerate()
        {
            for k in 0..12u64 {
                let mut r = rng((d as u64) << 16 | (c as u64) << 8 | k);
                let inputs: Vec<NodeId> = (0..d).map(NodeId).collect();
                let rule = random_rule(&inputs, class, &mut r);
                let cnf = rule_to_cnf(&rule).unwrap();
                rules += 1;
                let ok = (0usize..1 << d).all(|code| {
                    let value = |j: NodeId| code >> j.0 & 1 == 1;
                    cnf.evaluate(value) == rule.evaluate_with(&value, None).unwrap()
                });
                if !ok {
                    cnf_bad += 1;
                }
            }
        }
    }
    let mut bn_bad = 0;
    let docs = 200;
    for seed in 0..docs {
        let (net, attractor) = random_document(seed);
        let text = serialize_document(&net, attractor.as_deref());
        let same = parse_document(&text)
            .map(|doc| {
                doc.network == net
                    && serialize_document(&doc.network, doc.attractor.as_deref()) == text
            })
            .unwrap_or(false);
        if !same {
            bn_bad += 1;
        }
    }
    let mut tss_docs = 0;
    let mut tss_bad = 0;
    let mut seed = 0u64;
    while tss_docs < 100 {
        seed += 1;
        let mut r = rng(90_000 + seed);
        let n = r.gen_range(1..=6);
        let net = random_network(n, 3, RuleClass::Mixed, true, &mut r);
        let Some(x) = net.find_fixed_points(1).unwrap().into_iter().next() else {
            continue;
        };
        for kind in ReductionKind::ALL {
            let Ok(red) = reduce(&net, std::slice::from_ref(&x), kind) else {
                continue;
            };
            tss_docs += 1;
            let text = serialize_tss(&red.instance);
            let same = parse_tss(&text)
                .map(|back| back == red.instance && serialize_tss(&back) == text)
                .unwrap_or(false);
            if !same {
                tss_bad += 1;
            }
        }
    }
    outcome(
        cnf_bad == 0 && bn_bad == 0 && tss_bad == 0,
        format!(
            "{rules} rules (d <= 10), {cnf_bad} CNF mismatches; {docs} .bn and {tss_docs} .tss documents, {} not byte-identical",
            bn_bad + tss_bad
        ),
    )
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 9] = [
        ("sufficiency of solver sets", Some(300), sufficiency),
        (
            "exact solver vs enumeration",
            Some(120),
            exact_vs_enumeration,
        ),
        (
            "clique and cactus exactness",
            Some(180),
            structured_exactness,
        ),
        (
            "unanimous cycle characterization",
            None,
            unanimous_characterization,
        ),
        ("baseline dominance", Some(300), baseline_dominance),
        ("hierarchical log bound", None, hierarchical_bound),
        (
            "probabilistic and asynchronous",
            None,
            probabilistic_and_async,
        ),
        ("trend reproduction", Some(900), trends),
        ("cnf fidelity and round trips", None, cnf_and_formats),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > Duration::from_secs(limit) {
                result.pass = false;
                result
                    .detail
                    .push_str(&format!("; over the {limit}s budget"));
            }
        }
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {} [{:.1}s]",
            if result.pass { "PASS" } else { "FAIL" },
            k + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{}/9 criteria passed", 9 - failed);
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
