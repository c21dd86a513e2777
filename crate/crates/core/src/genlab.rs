//! Seeded random network generators and fixed-point selection.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{NetError, NodeId, RegulatoryNetwork, UpdateRule};
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Each unordered pair is linked with probability `p`, direction drawn
    /// per edge.
    ErdosRenyi { p: f64 },
    /// Preferential attachment: every new node links to `m` distinct earlier
    /// nodes drawn with weight degree + 1, direction drawn per edge.
    ScaleFree { m: usize },
    /// Hub-and-replica modules with symmetric edges, `(k+1)^depth` nodes.
    Hierarchical { k: usize, depth: usize },
    /// Complete blocks of the given sizes joined in a random tree by single
    /// directed arcs.
    BlockCactus { block_sizes: Vec<usize> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ErdosRenyi { .. } => "erdos_renyi",
            Family::ScaleFree { .. } => "scale_free",
            Family::Hierarchical { .. } => "hierarchical",
            Family::BlockCactus { .. } => "block_cactus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TauMode {
    Constant(f64),
    PerNode(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Probability that a node is excitatory.
    pub sign_prob: f64,
    pub tau: TauMode,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            sign_prob: 0.5,
            tau: TauMode::Constant(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("network has no fixed point")]
    NoFixedPoint,
    #[error(transparent)]
    Net(#[from] NetError),
}

fn invalid(msg: String) -> GenError {
    GenError::InvalidParameter(msg)
}

fn check_prob(name: &str, p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {p} is not a probability")))
    }
}

/// Directed edge list of the family's topology.
pub fn topology(
    family: &Family,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, GenError> {
    let mut edges = Vec::new();
    match family {
        Family::ErdosRenyi { p } => {
            check_prob("p", *p)?;
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(*p) {
                        edges.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
                    }
                }
            }
        }
        Family::ScaleFree { m } => {
            if *m == 0 && n > 1 {
                return Err(invalid("scale-free attachment m must be positive".into()));
            }
            let mut degree = vec![0usize; n];
            for t in 1..n {
                let mut targets: BTreeSet<usize> = BTreeSet::new();
                let want = (*m).min(t);
                while targets.len() < want {
                    let total: usize = (0..t)
                        .filter(|u| !targets.contains(u))
                        .map(|u| degree[u] + 1)
                        .sum();
                    let mut pick = rng.gen_range(0..total);
                    for u in (0..t).filter(|u| !targets.contains(u)) {
                        if pick < degree[u] + 1 {
                            targets.insert(u);
                            break;
                        }
                        pick -= degree[u] + 1;
                    }
                }
                for u in targets {
                    degree[u] += 1;
                    degree[t] += 1;
                    edges.push(if rng.gen_bool(0.5) { (u, t) } else { (t, u) });
                }
            }
        }
        Family::Hierarchical { k, depth } => {
            if *k == 0 || *depth == 0 {
                return Err(invalid("hierarchy needs k >= 1 and depth >= 1".into()));
            }
            let size = (k + 1).pow(*depth as u32);
            if size != n {
                return Err(invalid(format!("hierarchy has {size} nodes, n = {n}")));
            }
            hierarchy_pairs(0, *depth, *k, &mut edges);
        }
        Family::BlockCactus { block_sizes } => {
            let total: usize = block_sizes.iter().sum();
            if total != n || block_sizes.contains(&0) {
                return Err(invalid(format!("block sizes sum to {total}, n = {n}")));
            }
            let mut starts = Vec::with_capacity(block_sizes.len());
            let mut start = 0;
            for &size in block_sizes {
                starts.push(start);
                for u in start..start + size {
                    for v in start..start + size {
                        if u != v {
                            edges.push((u, v));
                        }
                    }
                }
                start += size;
            }
            for b in 1..block_sizes.len() {
                let parent = rng.gen_range(0..b);
                let u = starts[b] + rng.gen_range(0..block_sizes[b]);
                let v = starts[parent] + rng.gen_range(0..block_sizes[parent]);
                edges.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    Ok(edges)
}

fn hierarchy_pairs(start: usize, depth: usize, k: usize, edges: &mut Vec<(usize, usize)>) {
    if depth == 1 {
        for u in start..start + k + 1 {
            for v in start..start + k + 1 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        return;
    }
    let sub = (k + 1).pow(depth as u32 - 1);
    for j in 0..=k {
        hierarchy_pairs(start + j * sub, depth - 1, k, edges);
    }
    // Peripheral nodes of every replica link to the hub both ways.
    for v in start + sub..start + (k + 1) * sub {
        if !(v - start).is_multiple_of(k + 1) {
            edges.push((start, v));
            edges.push((v, start));
        }
    }
}

/// Signed threshold network over `edges`: each source acts with its node's
/// sign on every target.
pub fn threshold_network(
    n: usize,
    edges: &[(usize, usize)],
    excitatory: &[bool],
    tau: &TauMode,
) -> Result<RegulatoryNetwork, GenError> {
    let mut inputs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        inputs[v].insert(u);
    }
    let rules = (0..n)
        .map(|i| {
            let t = match tau {
                TauMode::Constant(t) => *t,
                TauMode::PerNode(ts) => *ts
                    .get(i)
                    .ok_or_else(|| invalid("threshold list too short".into()))?,
            };
            let signed: Vec<(NodeId, bool)> = inputs[i]
                .iter()
                .map(|&j| (NodeId(j), excitatory[j]))
                .collect();
            Ok(UpdateRule::signed_threshold(&signed, t))
        })
        .collect::<Result<Vec<_>, GenError>>()?;
    Ok(RegulatoryNetwork::new(rules)?)
}

/// Purely signed threshold network drawn from `spec`.
pub fn generate(spec: &GenSpec) -> Result<RegulatoryNetwork, GenError> {
    if spec.n == 0 {
        return Err(invalid("n must be at least 1".into()));
    }
    check_prob("sign_prob", spec.sign_prob)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = topology(&spec.family, spec.n, &mut rng)?;
    let excitatory: Vec<bool> = (0..spec.n).map(|_| rng.gen_bool(spec.sign_prob)).collect();
    threshold_network(spec.n, &edges, &excitatory, &spec.tau)
}

/// Lexicographically smallest fixed point.
pub fn pick_attractor(net: &RegulatoryNetwork) -> Result<StateVector, GenError> {
    net.find_fixed_points(1)?
        .into_iter()
        .next()
        .ok_or(GenError::NoFixedPoint)
}

/// Rule family for [`random_network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleClass {
    TruthTable,
    Threshold,
    NestedCanalyzing,
    /// A per-node mix of the three.
    Mixed,
}

/// Random network with each node reading up to `max_in` distinct inputs
/// (self-loops allowed when `self_loops`).
pub fn random_network(
    n: usize,
    max_in: usize,
    class: RuleClass,
    self_loops: bool,
    rng: &mut ChaCha8Rng,
) -> RegulatoryNetwork {
    let rules = (0..n)
        .map(|i| {
            let pool: Vec<usize> = (0..n).filter(|&j| self_loops || j != i).collect();
            let d = rng.gen_range(0..=max_in.min(pool.len()));
            let mut inputs: Vec<NodeId> =
                pool.choose_multiple(rng, d).map(|&j| NodeId(j)).collect();
            inputs.sort();
            let class = match class {
                RuleClass::Mixed => [
                    RuleClass::TruthTable,
                    RuleClass::Threshold,
                    RuleClass::NestedCanalyzing,
                ][rng.gen_range(0..3)],
                c => c,
            };
            random_rule(&inputs, class, rng)
        })
        .collect();
    RegulatoryNetwork::new(rules).expect("generated rules are valid")
}

/// Random rule of `class` over `inputs`.
pub fn random_rule(inputs: &[NodeId], class: RuleClass, rng: &mut ChaCha8Rng) -> UpdateRule {
    match class {
        RuleClass::TruthTable | RuleClass::Mixed => {
            let table: Vec<bool> = (0..1usize << inputs.len())
                .map(|_| rng.gen_bool(0.5))
                .collect();
            UpdateRule::TruthTable {
                inputs: inputs.to_vec(),
                table,
            }
        }
        RuleClass::Threshold => {
            let signed: Vec<(NodeId, bool)> =
                inputs.iter().map(|&j| (j, rng.gen_bool(0.6))).collect();
            let d = inputs.len() as i64;
            let tau = rng.gen_range(-1..=d.max(1)) as f64;
            UpdateRule::signed_threshold(&signed, tau)
        }
        RuleClass::NestedCanalyzing => {
            let mut order = inputs.to_vec();
            order.shuffle(rng);
            let d = order.len();
            UpdateRule::NestedCanalyzing {
                order,
                canalyzing: (0..d).map(|_| rng.gen_bool(0.5)).collect(),
                canalyzed: (0..d).map(|_| rng.gen_bool(0.5)).collect(),
                default: rng.gen_bool(0.5),
            }
        }
    }
}
