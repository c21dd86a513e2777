//! Solvers that exploit network structure: signed cliques, block cacti,
//! hierarchical modules, unanimous thresholds and the cycle-breaking
//! baseline.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph;
use crate::network::RegulatoryNetwork;
use crate::reduction::{regulation_graph, NodeClass};
use crate::tss::{
    cascade, mandatory_seeds, solve_exact, CascadeEngine, ExactOptions, TargetSet, TssError,
    TssInstance,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructError {
    #[error("not a signed clique instance: {0}")]
    NotACliqueInstance(String),
    #[error("not a clique partition: {0}")]
    NotACliquePartition(String),
    #[error("block contraction is not a tree: {0}")]
    NotATree(String),
    #[error("not a hierarchical instance: {0}")]
    NotHierarchical(String),
    #[error(transparent)]
    Tss(#[from] TssError),
}

/// Disjoint blocks covering the instance's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    pub blocks: Vec<Vec<usize>>,
}

impl CliquePartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        Self { blocks }
    }

    /// Block index of each node; fails unless the blocks cover `0..m`
    /// exactly once.
    pub fn block_of(&self, m: usize) -> Result<Vec<usize>, StructError> {
        let mut owner = vec![usize::MAX; m];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                if v >= m {
                    return Err(StructError::NotACliquePartition(format!(
                        "node {v} out of range"
                    )));
                }
                if owner[v] != usize::MAX {
                    return Err(StructError::NotACliquePartition(format!(
                        "node {v} in two blocks"
                    )));
                }
                owner[v] = b;
            }
        }
        if let Some(v) = owner.iter().position(|&b| b == usize::MAX) {
            return Err(StructError::NotACliquePartition(format!(
                "node {v} not covered"
            )));
        }
        Ok(owner)
    }
}

/// Minimum target set of a signed clique. Within one class a seed can always
/// be traded for a non-seed of larger threshold, so only the prefixes of
/// each class sorted by decreasing threshold are tried: at most `n^4`
/// candidates. With `classes = None` the instance must be a complete digraph
/// and is treated as a single class.
pub fn solve_clique(
    inst: &TssInstance,
    classes: Option<&[NodeClass]>,
) -> Result<TargetSet, StructError> {
    let m = inst.len();
    let uniform;
    let classes = match classes {
        Some(c) => c,
        None => {
            uniform = vec![NodeClass::E1; m];
            &uniform
        }
    };
    if classes.len() != m {
        return Err(StructError::NotACliqueInstance(
            "class list length differs".into(),
        ));
    }
    for u in 0..m {
        for v in 0..m {
            if u == v {
                continue;
            }
            let mult = inst.multiplicity(u, v);
            let want = classes[u].feeds(classes[v]) as u32;
            if mult != want {
                return Err(StructError::NotACliqueInstance(format!(
                    "edge {u} -> {v} has multiplicity {mult}, expected {want}"
                )));
            }
        }
    }
    let order = [NodeClass::E1, NodeClass::E0, NodeClass::I1, NodeClass::I0];
    let groups: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| {
            let mut g: Vec<usize> = (0..m).filter(|&v| classes[v] == c).collect();
            g.sort_by(|&a, &b| inst.tau(b).cmp(&inst.tau(a)).then(a.cmp(&b)));
            g
        })
        .collect();
    let mut engine = CascadeEngine::new(inst);
    let mut best: Option<Vec<usize>> = None;
    for a in 0..=groups[0].len() {
        for b in 0..=groups[1].len() {
            for c in 0..=groups[2].len() {
                for d in 0..=groups[3].len() {
                    let total = a + b + c + d;
                    if best.as_ref().is_some_and(|s| s.len() <= total) {
                        continue;
                    }
                    let seed: Vec<usize> = groups[0][..a]
                        .iter()
                        .chain(&groups[1][..b])
                        .chain(&groups[2][..c])
                        .chain(&groups[3][..d])
                        .copied()
                        .collect();
                    if engine.covers(seed.iter().copied()) {
                        best = Some(seed);
                    }
                }
            }
        }
    }
    Ok(TargetSet::new(
        best.expect("seeding every node is a target set"),
    ))
}

/// One inter-block arc of the contracted graph.
#[derive(Debug, Clone, Copy)]
struct BlockArc {
    from: usize,
    to: usize,
    mult: u32,
}

/// Exact minimum target set of a block cactus: blocks are signed cliques
/// joined by single arcs whose undirected contraction is a forest. Leaves
/// are peeled off in order of lowest block index. A leaf feeding the rest is
/// solved first and its arc lowers the head's threshold in the rest; a leaf
/// fed by the rest has its head's threshold lowered before it is solved.
pub fn solve_block_cactus(
    inst: &TssInstance,
    partition: &CliquePartition,
    classes: Option<&[NodeClass]>,
) -> Result<TargetSet, StructError> {
    let m = inst.len();
    let owner = partition.block_of(m)?;
    let nb = partition.blocks.len();
    let mut arcs: Vec<BlockArc> = Vec::new();
    let mut pair_seen = alloc::collections::BTreeSet::new();
    for (u, v, mult) in inst.edges() {
        let (bu, bv) = (owner[u], owner[v]);
        if bu == bv {
            continue;
        }
        if !pair_seen.insert((bu.min(bv), bu.max(bv))) {
            return Err(StructError::NotATree(format!(
                "blocks {bu} and {bv} are joined by more than one arc"
            )));
        }
        arcs.push(BlockArc {
            from: u,
            to: v,
            mult,
        });
    }
    // Forest check on the contracted graph.
    let mut parent: Vec<usize> = (0..nb).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for arc in &arcs {
        let (a, b) = (
            find(&mut parent, owner[arc.from]),
            find(&mut parent, owner[arc.to]),
        );
        if a == b {
            return Err(StructError::NotATree("contracted graph has a cycle".into()));
        }
        parent[a] = b;
    }

    let mut tau: Vec<i64> = inst.thresholds().to_vec();
    let mut alive_block = vec![true; nb];
    let mut alive_arc = vec![true; arcs.len()];
    let mut chosen: Vec<usize> = Vec::new();
    for _ in 0..nb {
        let degree = |b: usize, alive_arc: &[bool]| {
            arcs.iter()
                .zip(alive_arc)
                .filter(|(a, &live)| live && (owner[a.from] == b || owner[a.to] == b))
                .count()
        };
        let leaf = (0..nb)
            .find(|&b| alive_block[b] && degree(b, &alive_arc) <= 1)
            .expect("a forest always has a leaf");
        let arc = (0..arcs.len())
            .find(|&k| alive_arc[k] && (owner[arcs[k].from] == leaf || owner[arcs[k].to] == leaf));
        if let Some(k) = arc {
            let a = arcs[k];
            if owner[a.to] == leaf {
                tau[a.to] -= a.mult as i64;
            }
        }
        let nodes = &partition.blocks[leaf];
        let mut sub = inst.induced(nodes);
        for (pos, &v) in nodes.iter().enumerate() {
            sub.set_tau(pos, tau[v]);
        }
        let sub_classes: Option<Vec<NodeClass>> =
            classes.map(|c| nodes.iter().map(|&v| c[v]).collect());
        let local = solve_clique(&sub, sub_classes.as_deref())?;
        chosen.extend(local.members.iter().map(|&pos| nodes[pos]));
        if let Some(k) = arc {
            let a = arcs[k];
            if owner[a.from] == leaf {
                tau[a.to] -= a.mult as i64;
            }
            alive_arc[k] = false;
        }
        alive_block[leaf] = false;
    }
    Ok(TargetSet::new(chosen))
}

/// Result of [`cactusify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cactusified {
    pub instance: TssInstance,
    pub partition: CliquePartition,
    /// Arcs added inside clusters, each raising its head's threshold by one.
    pub added: Vec<(usize, usize)>,
    /// Inter-cluster arcs dropped so the contraction becomes a forest.
    pub removed: Vec<(usize, usize)>,
}

/// Turns an instance into a block cactus that is harder to activate than the
/// original: clusters are completed (each added arc raises its head's
/// threshold), and among inter-cluster arcs only a spanning forest of the
/// contraction survives, lowest-index arcs first. Every target set of the
/// result is a target set of the input.
pub fn cactusify(inst: &TssInstance, clusters: &[Vec<usize>]) -> Result<Cactusified, StructError> {
    let partition = CliquePartition::new(clusters.to_vec());
    let owner = partition.block_of(inst.len())?;
    let mut out = inst.clone();
    let mut added = Vec::new();
    for block in clusters {
        for &u in block {
            for &v in block {
                if u != v && !out.has_edge(u, v) {
                    out.add_edge(u, v);
                    out.set_tau(v, out.tau(v) + 1);
                    added.push((u, v));
                }
            }
        }
    }
    added.sort_unstable();
    let mut cross: Vec<(usize, usize)> = out
        .edges()
        .filter(|&(u, v, _)| owner[u] != owner[v])
        .map(|(u, v, _)| (u, v))
        .collect();
    cross.sort_unstable();
    let mut parent: Vec<usize> = (0..clusters.len()).collect();
    let find = |parent: &mut Vec<usize>, mut x: usize| {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    };
    let mut removed = Vec::new();
    for (u, v) in cross {
        let (a, b) = (find(&mut parent, owner[u]), find(&mut parent, owner[v]));
        if a == b {
            out.remove_edge(u, v);
            removed.push((u, v));
        } else {
            parent[a] = b;
        }
    }
    Ok(Cactusified {
        instance: out,
        partition,
        added,
        removed,
    })
}

/// Greedy clustering: each node joins the first cluster whose members are
/// all adjacent to it (in either direction), or opens a new cluster.
pub fn greedy_clique_partition(inst: &TssInstance) -> Vec<Vec<usize>> {
    let adjacent = |u: usize, v: usize| inst.has_edge(u, v) || inst.has_edge(v, u);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for v in 0..inst.len() {
        match clusters
            .iter_mut()
            .find(|c| c.iter().all(|&u| adjacent(u, v)))
        {
            Some(c) => c.push(v),
            None => clusters.push(vec![v]),
        }
    }
    clusters
}

/// Shape of a hierarchical instance: `depth` levels, `k` copies per level,
/// `(k+1)^depth` nodes laid out so that every module of level `d` occupies a
/// contiguous range whose first node is its hub. The global hub is node 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HierarchySpec {
    pub k: usize,
    pub depth: usize,
}

impl HierarchySpec {
    pub fn node_count(&self) -> usize {
        (self.k + 1).pow(self.depth as u32)
    }
}

fn check_hierarchy(
    inst: &TssInstance,
    start: usize,
    depth: usize,
    k: usize,
) -> Result<(), StructError> {
    if depth <= 1 {
        return Ok(());
    }
    let sub = (k + 1).pow(depth as u32 - 1);
    let end = start + sub * (k + 1);
    for v in start..end {
        for &(u, _) in inst.in_edges(v) {
            if u < start || u >= end {
                continue;
            }
            let (mu, mv) = ((u - start) / sub, (v - start) / sub);
            if mu != mv && u != start && v != start {
                return Err(StructError::NotHierarchical(format!(
                    "edge {u} -> {v} joins two modules away from hub {start}"
                )));
            }
        }
    }
    for j in 0..=k {
        check_hierarchy(inst, start + j * sub, depth - 1, k)?;
    }
    Ok(())
}

/// Hierarchical recursion. Each module is solved twice, once alone and once
/// assuming the hub is active (its hub neighbors need one fewer active
/// in-neighbor). Modules where hub help saves nothing keep their
/// stand-alone set; the hub is seeded if those sets do not activate it; the
/// other modules take their hub-assisted sets.
pub fn solve_hierarchical(
    inst: &TssInstance,
    spec: HierarchySpec,
) -> Result<TargetSet, StructError> {
    if spec.k == 0 || spec.depth == 0 {
        return Err(StructError::NotHierarchical(
            "k and depth must be positive".into(),
        ));
    }
    if inst.len() != spec.node_count() {
        return Err(StructError::NotHierarchical(format!(
            "expected {} nodes, found {}",
            spec.node_count(),
            inst.len()
        )));
    }
    for v in 0..inst.len() {
        if inst
            .in_edges(v)
            .iter()
            .any(|&(u, _)| u / (spec.k + 1) != v / (spec.k + 1))
            && spec.depth == 1
        {
            return Err(StructError::NotHierarchical(
                "edge leaves the base clique".into(),
            ));
        }
    }
    check_hierarchy(inst, 0, spec.depth, spec.k)?;
    let nodes: Vec<usize> = (0..inst.len()).collect();
    let local = hierarchy_rec(&inst.induced(&nodes), spec.depth, spec.k)?;
    Ok(TargetSet::new(local))
}

fn hierarchy_rec(inst: &TssInstance, depth: usize, k: usize) -> Result<Vec<usize>, StructError> {
    if depth == 1 {
        let opts = ExactOptions {
            restrict_to_original: false,
            ..ExactOptions::default()
        };
        return Ok(solve_exact(inst, opts)?.members);
    }
    let sub = (k + 1).pow(depth as u32 - 1);
    let hub = 0;
    let mut committed: Vec<usize> = Vec::new();
    let mut assisted: Vec<Vec<usize>> = Vec::new();
    for j in 0..=k {
        let nodes: Vec<usize> = (j * sub..(j + 1) * sub).collect();
        let alone = inst.induced(&nodes);
        let mut helped = alone.clone();
        if j == 0 {
            helped.set_tau(0, helped.tau(0).min(0));
        } else {
            for (pos, &v) in nodes.iter().enumerate() {
                let mult = inst.multiplicity(hub, v) as i64;
                if mult > 0 {
                    helped.set_tau(pos, helped.tau(pos) - mult);
                }
            }
        }
        let s_alone = hierarchy_rec(&alone, depth - 1, k)?;
        let s_helped = hierarchy_rec(&helped, depth - 1, k)?;
        let lift = |s: Vec<usize>| s.into_iter().map(|p| nodes[p]).collect::<Vec<_>>();
        if s_alone.len() == s_helped.len() {
            committed.extend(lift(s_alone));
        } else {
            assisted.push(lift(s_helped));
        }
    }
    if !cascade(inst, &committed).is_active(hub) {
        committed.push(hub);
    }
    for s in assisted {
        committed.extend(s);
    }
    committed.sort_unstable();
    committed.dedup();
    Ok(committed)
}

/// Seed set for instances with unanimous thresholds (threshold equal to
/// in-degree): every node that can never be activated, plus a heuristic
/// feedback vertex set of each cyclic strongly connected component.
pub fn solve_unanimous_fvs(inst: &TssInstance) -> TargetSet {
    let m = inst.len();
    let out: graph::Adjacency = inst
        .out_edges()
        .into_iter()
        .map(|row| row.into_iter().map(|(v, _)| v).collect())
        .collect();
    let mut removed = vec![false; m];
    let mut chosen = mandatory_seeds(inst);
    for &v in &chosen {
        removed[v] = true;
    }
    for comp in graph::strongly_connected_components(&out) {
        let cyclic = comp.len() > 1 || out[comp[0]].contains(&comp[0]);
        if !cyclic {
            continue;
        }
        let mut outside = vec![true; m];
        for &v in &comp {
            outside[v] = removed[v];
        }
        chosen.extend(graph::heuristic_fvs(&out, &outside));
    }
    TargetSet::new(chosen)
}

/// Whether `seed` meets every cycle of the instance graph and every node is
/// reachable from the seed or from a node of non-positive threshold.
pub fn unanimous_condition(inst: &TssInstance, seed: &[usize]) -> bool {
    let m = inst.len();
    let out: graph::Adjacency = inst
        .out_edges()
        .into_iter()
        .map(|row| row.into_iter().map(|(v, _)| v).collect())
        .collect();
    let mut removed = vec![false; m];
    for &v in seed {
        removed[v] = true;
    }
    let roots = seed
        .iter()
        .copied()
        .chain((0..m).filter(|&v| inst.tau(v) <= 0));
    graph::is_acyclic_without(&out, &removed)
        && graph::reachable_from(&out, roots).iter().all(|&r| r)
}

/// The cycle-breaking baseline on the regulation graph: a heuristic feedback
/// vertex set, then nodes added until everything is reachable from the set.
pub fn solve_cycle_baseline(net: &RegulatoryNetwork) -> TargetSet {
    let out = regulation_graph(net);
    let n = net.len();
    let mut chosen = graph::heuristic_fvs(&out, &vec![false; n]);
    loop {
        let reach = graph::reachable_from(&out, chosen.iter().copied());
        let Some(v) = (0..n).find(|&v| {
            !reach[v]
                && net
                    .in_neighbors(crate::NodeId(v))
                    .iter()
                    .all(|j| !reach[j.0])
        }) else {
            break;
        };
        // Walk back to an unreached node with no unreached predecessor; the
        // remaining graph is acyclic so this terminates.
        let mut u = v;
        while let Some(j) = net
            .in_neighbors(crate::NodeId(u))
            .iter()
            .find(|j| !reach[j.0] && j.0 != u)
        {
            u = j.0;
        }
        chosen.push(u);
    }
    TargetSet::new(chosen)
}
