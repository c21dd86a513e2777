//! Target set selection: threshold cascades, target-set checks, exact and
//! greedy minimum target sets, and an LP export of the integer program.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::network::NodeId;

/// Where a TSS node comes from. `phase` indexes the attractor state a node
/// copy stands for; it is `0` for fixed-point reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Original {
        node: NodeId,
        phase: usize,
    },
    Auxiliary {
        owner: NodeId,
        clause: usize,
        phase: usize,
    },
}

impl Provenance {
    pub fn original(node: NodeId) -> Self {
        Provenance::Original { node, phase: 0 }
    }

    pub fn is_original(&self) -> bool {
        matches!(self, Provenance::Original { .. })
    }

    /// The regulatory node this TSS node belongs to.
    pub fn node(&self) -> NodeId {
        match *self {
            Provenance::Original { node, .. } => node,
            Provenance::Auxiliary { owner, .. } => owner,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TssError {
    #[error("no admissible seed set activates every node")]
    Infeasible,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(&'static str),
    #[error("seed set leaves {0} nodes inactive")]
    NotATargetSet(usize),
    #[error("node {index} out of range for an instance of {m} nodes")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("failed to write output")]
    Write,
}

impl From<fmt::Error> for TssError {
    fn from(_: fmt::Error) -> Self {
        TssError::Write
    }
}

/// Directed graph with an integer activation threshold per node. Parallel
/// edges are stored as a multiplicity and count toward activation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TssInstance {
    in_edges: Vec<Vec<(usize, u32)>>,
    tau: Vec<i64>,
    provenance: Vec<Provenance>,
}

impl TssInstance {
    /// Edgeless instance.
    pub fn new(tau: Vec<i64>, provenance: Vec<Provenance>) -> Self {
        assert_eq!(tau.len(), provenance.len());
        Self {
            in_edges: vec![Vec::new(); tau.len()],
            tau,
            provenance,
        }
    }

    /// Instance whose nodes are all `Original` with phase 0, node `v`
    /// standing for regulatory node `v`.
    pub fn plain(tau: Vec<i64>) -> Self {
        let provenance = (0..tau.len())
            .map(|v| Provenance::original(NodeId(v)))
            .collect();
        Self::new(tau, provenance)
    }

    pub fn from_edges(tau: Vec<i64>, edges: &[(usize, usize)]) -> Self {
        let mut inst = Self::plain(tau);
        for &(u, v) in edges {
            inst.add_edge(u, v);
        }
        inst
    }

    /// Adds one copy of edge `from -> to`.
    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.add_edges(from, to, 1);
    }

    pub fn add_edges(&mut self, from: usize, to: usize, multiplicity: u32) {
        assert!(
            from < self.len() && to < self.len(),
            "edge endpoint out of range"
        );
        if multiplicity == 0 {
            return;
        }
        let row = &mut self.in_edges[to];
        match row.binary_search_by_key(&from, |&(u, _)| u) {
            Ok(k) => row[k].1 += multiplicity,
            Err(k) => row.insert(k, (from, multiplicity)),
        }
    }

    /// Removes every copy of `from -> to`; returns the removed multiplicity.
    pub fn remove_edge(&mut self, from: usize, to: usize) -> u32 {
        let row = &mut self.in_edges[to];
        match row.binary_search_by_key(&from, |&(u, _)| u) {
            Ok(k) => row.remove(k).1,
            Err(_) => 0,
        }
    }

    pub fn push_node(&mut self, tau: i64, provenance: Provenance) -> usize {
        self.tau.push(tau);
        self.provenance.push(provenance);
        self.in_edges.push(Vec::new());
        self.tau.len() - 1
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn tau(&self, v: usize) -> i64 {
        self.tau[v]
    }

    pub fn thresholds(&self) -> &[i64] {
        &self.tau
    }

    pub fn set_tau(&mut self, v: usize, tau: i64) {
        self.tau[v] = tau;
    }

    pub fn provenance(&self, v: usize) -> Provenance {
        self.provenance[v]
    }

    pub fn provenances(&self) -> &[Provenance] {
        &self.provenance
    }

    /// `(source, multiplicity)` pairs, ascending by source.
    pub fn in_edges(&self, v: usize) -> &[(usize, u32)] {
        &self.in_edges[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.multiplicity(from, to) > 0
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u32 {
        let row = &self.in_edges[to];
        row.binary_search_by_key(&from, |&(u, _)| u)
            .map(|k| row[k].1)
            .unwrap_or(0)
    }

    /// In-degree counted with multiplicity.
    pub fn in_degree(&self, v: usize) -> u64 {
        self.in_edges[v].iter().map(|&(_, m)| m as u64).sum()
    }

    /// All edges as `(from, to, multiplicity)`, sorted by `(to, from)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.in_edges
            .iter()
            .enumerate()
            .flat_map(|(to, row)| row.iter().map(move |&(from, m)| (from, to, m)))
    }

    pub fn edge_count(&self) -> usize {
        self.in_edges.iter().map(Vec::len).sum()
    }

    pub fn out_edges(&self) -> Vec<Vec<(usize, u32)>> {
        let mut out = vec![Vec::new(); self.len()];
        for (from, to, m) in self.edges() {
            out[from].push((to, m));
        }
        out
    }

    /// Node indices tagged `Original`.
    pub fn originals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.provenance[v].is_original())
    }

    /// Groups of instance nodes that are seeded together. With `restrict`,
    /// one group per regulatory node collecting all of its `Original` copies;
    /// otherwise every instance node alone.
    pub fn seed_units(&self, restrict_to_original: bool) -> Vec<Vec<usize>> {
        if !restrict_to_original {
            return (0..self.len()).map(|v| vec![v]).collect();
        }
        let mut groups: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for v in self.originals() {
            groups.entry(self.provenance[v].node()).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Sub-instance induced by `nodes` (in the given order). Edges from
    /// outside the set are dropped.
    pub fn induced(&self, nodes: &[usize]) -> TssInstance {
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &v) in nodes.iter().enumerate() {
            pos[v] = k;
        }
        let mut sub = TssInstance::new(
            nodes.iter().map(|&v| self.tau[v]).collect(),
            nodes.iter().map(|&v| self.provenance[v]).collect(),
        );
        for (k, &v) in nodes.iter().enumerate() {
            for &(u, m) in &self.in_edges[v] {
                if pos[u] != usize::MAX {
                    sub.add_edges(pos[u], k, m);
                }
            }
        }
        sub
    }
}

/// Activation rounds of a cascade: `rounds[0]` is the seed and `rounds[k]`
/// the nodes that join at step `k`. The run stops at the first empty round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeTrace {
    rounds: Vec<Vec<usize>>,
    active: Vec<bool>,
}

impl CascadeTrace {
    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }

    /// Cumulative sets `X[0] ⊆ X[1] ⊆ …`, one per round.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut acc: Vec<usize> = Vec::new();
        self.rounds
            .iter()
            .map(|r| {
                acc.extend_from_slice(r);
                let mut layer = acc.clone();
                layer.sort_unstable();
                layer
            })
            .collect()
    }

    /// Final active set `X*`, ascending.
    pub fn fixpoint(&self) -> Vec<usize> {
        (0..self.active.len()).filter(|&v| self.active[v]).collect()
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active[v]
    }

    pub fn activated_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn covers_all(&self) -> bool {
        self.active.iter().all(|&a| a)
    }

    pub fn activation_round(&self, v: usize) -> Option<usize> {
        self.rounds.iter().position(|r| r.contains(&v))
    }
}

/// Layered threshold cascade from `seed`. Each round adds every inactive node
/// whose active in-edges (with multiplicity) reach its threshold, evaluated
/// against the previous round's set.
pub fn cascade(inst: &TssInstance, seed: &[usize]) -> CascadeTrace {
    let m = inst.len();
    let out = inst.out_edges();
    let mut active = vec![false; m];
    let mut count = vec![0i64; m];
    let mut first: Vec<usize> = seed.to_vec();
    first.sort_unstable();
    first.dedup();
    for &v in &first {
        assert!(v < m, "seed node out of range");
        active[v] = true;
    }
    for &v in &first {
        for &(w, mult) in &out[v] {
            count[w] += mult as i64;
        }
    }
    let mut rounds = vec![first];
    let mut candidates: Vec<usize> = (0..m).collect();
    let mut mark = vec![false; m];
    loop {
        let newly: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&v| !active[v] && count[v] >= inst.tau(v))
            .collect();
        if newly.is_empty() {
            break;
        }
        for &v in &newly {
            active[v] = true;
        }
        candidates.clear();
        for &v in &newly {
            for &(w, mult) in &out[v] {
                count[w] += mult as i64;
                if !active[w] && !mark[w] {
                    mark[w] = true;
                    candidates.push(w);
                }
            }
        }
        candidates.sort_unstable();
        for &w in &candidates {
            mark[w] = false;
        }
        rounds.push(newly);
    }
    CascadeTrace { rounds, active }
}

pub fn is_target_set(inst: &TssInstance, seed: &[usize]) -> bool {
    CascadeEngine::new(inst).covers(seed.iter().copied())
}

/// Cascade certificate for `seed`, or an error naming how many nodes stay
/// inactive.
pub fn minimal_certificate(inst: &TssInstance, seed: &[usize]) -> Result<CascadeTrace, TssError> {
    let trace = cascade(inst, seed);
    let inactive = inst.len() - trace.activated_count();
    if inactive > 0 {
        return Err(TssError::NotATargetSet(inactive));
    }
    Ok(trace)
}

/// Nodes whose threshold exceeds their in-degree; no cascade can reach them.
pub fn mandatory_seeds(inst: &TssInstance) -> Vec<usize> {
    (0..inst.len())
        .filter(|&v| inst.tau(v) > inst.in_degree(v) as i64)
        .collect()
}

/// Reusable fixpoint evaluator. Only the final active set is computed, which
/// is independent of activation order.
pub struct CascadeEngine<'a> {
    inst: &'a TssInstance,
    out: Vec<Vec<(usize, u32)>>,
    active: Vec<bool>,
    count: Vec<i64>,
    queue: Vec<usize>,
}

impl<'a> CascadeEngine<'a> {
    pub fn new(inst: &'a TssInstance) -> Self {
        let m = inst.len();
        Self {
            inst,
            out: inst.out_edges(),
            active: vec![false; m],
            count: vec![0; m],
            queue: Vec::with_capacity(m),
        }
    }

    /// Size of the cascade fixpoint from `seed`.
    pub fn fixpoint_size(&mut self, seed: impl IntoIterator<Item = usize>) -> usize {
        self.active.iter_mut().for_each(|a| *a = false);
        self.count.iter_mut().for_each(|c| *c = 0);
        self.queue.clear();
        let mut size = 0;
        for v in seed {
            if !self.active[v] {
                self.active[v] = true;
                self.queue.push(v);
                size += 1;
            }
        }
        for v in 0..self.inst.len() {
            if !self.active[v] && self.inst.tau(v) <= 0 {
                self.active[v] = true;
                self.queue.push(v);
                size += 1;
            }
        }
        while let Some(v) = self.queue.pop() {
            for &(w, mult) in &self.out[v] {
                if !self.active[w] {
                    self.count[w] += mult as i64;
                    if self.count[w] >= self.inst.tau(w) {
                        self.active[w] = true;
                        self.queue.push(w);
                        size += 1;
                    }
                }
            }
        }
        size
    }

    pub fn covers(&mut self, seed: impl IntoIterator<Item = usize>) -> bool {
        self.fixpoint_size(seed) == self.inst.len()
    }

    /// Activity flags of the last run.
    pub fn active(&self) -> &[bool] {
        &self.active
    }
}

/// Seed set chosen by a solver, as ascending TSS node indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TargetSet {
    pub members: Vec<usize>,
}

impl TargetSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Distinct regulatory nodes behind the `Original` members.
    pub fn inputs(&self, inst: &TssInstance) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .members
            .iter()
            .filter(|&&v| inst.provenance(v).is_original())
            .map(|&v| inst.provenance(v).node())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest number of free seed units the enumeration accepts.
    pub max_candidates: usize,
    /// Cap on cascade evaluations.
    pub max_evaluations: u64,
    /// Only `Original` nodes may be seeded (grouped per regulatory node).
    pub restrict_to_original: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            max_candidates: 25,
            max_evaluations: 20_000_000,
            restrict_to_original: true,
        }
    }
}

fn expand(units: &[Vec<usize>], chosen: impl IntoIterator<Item = usize>) -> Vec<usize> {
    chosen
        .into_iter()
        .flat_map(|u| units[u].iter().copied())
        .collect()
}

/// Units that hold a mandatory node; `None` if some mandatory node cannot be
/// seeded at all.
fn forced_units(inst: &TssInstance, units: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut owner = vec![usize::MAX; inst.len()];
    for (u, nodes) in units.iter().enumerate() {
        for &v in nodes {
            owner[v] = u;
        }
    }
    let mut forced = Vec::new();
    for v in mandatory_seeds(inst) {
        if owner[v] == usize::MAX {
            return None;
        }
        forced.push(owner[v]);
    }
    forced.sort_unstable();
    forced.dedup();
    Some(forced)
}

/// Minimum-cardinality target set (counted in seed units), lexicographically
/// smallest among the minimum ones. Cardinalities are tried in increasing
/// order, so the result carries its own optimality proof.
pub fn solve_exact(inst: &TssInstance, opts: ExactOptions) -> Result<TargetSet, TssError> {
    let units = inst.seed_units(opts.restrict_to_original);
    let forced = forced_units(inst, &units).ok_or(TssError::Infeasible)?;
    let mut engine = CascadeEngine::new(inst);
    if !engine.covers(expand(&units, 0..units.len())) {
        return Err(TssError::Infeasible);
    }
    let free: Vec<usize> = (0..units.len()).filter(|u| !forced.contains(u)).collect();
    // The greedy answer bounds the search from above.
    let upper = solve_greedy_units(inst, &units, &forced, &mut engine)?.len();
    if free.len() > opts.max_candidates {
        return Err(TssError::BudgetExceeded("too many candidate nodes"));
    }
    let mut evaluations = 0u64;
    for k in 0..=upper.saturating_sub(forced.len()).min(free.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            evaluations += 1;
            if evaluations > opts.max_evaluations {
                return Err(TssError::BudgetExceeded("cascade evaluation limit"));
            }
            let chosen = forced.iter().copied().chain(idx.iter().map(|&i| free[i]));
            if engine.covers(expand(&units, chosen.clone())) {
                return Ok(TargetSet::new(expand(&units, chosen)));
            }
            if !next_combination(&mut idx, free.len()) {
                break;
            }
        }
    }
    unreachable!("greedy bound guarantees a target set of at most that size")
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order; returns `false` after the last one.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Greedy target set: add the unit that maximizes the cascade fixpoint
/// (lowest index on ties) until everything is active, then drop redundant
/// units in reverse order of addition.
pub fn solve_greedy(inst: &TssInstance, restrict_to_original: bool) -> Result<TargetSet, TssError> {
    let units = inst.seed_units(restrict_to_original);
    let forced = forced_units(inst, &units).ok_or(TssError::Infeasible)?;
    let mut engine = CascadeEngine::new(inst);
    let chosen = solve_greedy_units(inst, &units, &forced, &mut engine)?;
    Ok(TargetSet::new(expand(&units, chosen)))
}

/// Rewrites `members` as whole `Original` units, the only seeds pinning can
/// realize. A covering set of whole units comes back unchanged; otherwise the
/// units it touches are kept, completed greedily and pruned.
pub fn realize_on_originals(inst: &TssInstance, members: &[usize]) -> Result<TargetSet, TssError> {
    let units = inst.seed_units(true);
    let touched: Vec<usize> = (0..units.len())
        .filter(|&u| units[u].iter().any(|v| members.contains(v)))
        .collect();
    let whole = TargetSet::new(expand(&units, touched.iter().copied()));
    let mut engine = CascadeEngine::new(inst);
    if whole.members == TargetSet::new(members.to_vec()).members
        && engine.covers(whole.members.iter().copied())
    {
        return Ok(whole);
    }
    let forced = forced_units(inst, &units).ok_or(TssError::Infeasible)?;
    let mut start = touched;
    start.extend(forced);
    start.sort_unstable();
    start.dedup();
    let chosen = solve_greedy_units(inst, &units, &start, &mut engine)?;
    Ok(TargetSet::new(expand(&units, chosen)))
}

fn solve_greedy_units(
    inst: &TssInstance,
    units: &[Vec<usize>],
    forced: &[usize],
    engine: &mut CascadeEngine<'_>,
) -> Result<Vec<usize>, TssError> {
    let m = inst.len();
    let mut chosen: Vec<usize> = forced.to_vec();
    let mut used = vec![false; units.len()];
    for &u in forced {
        used[u] = true;
    }
    let mut size = engine.fixpoint_size(expand(units, chosen.iter().copied()));
    while size < m {
        let mut best: Option<(usize, usize)> = None;
        engine.fixpoint_size(expand(units, chosen.iter().copied()));
        let active: Vec<bool> = engine.active().to_vec();
        for u in 0..units.len() {
            // Units already fully active cannot enlarge the fixpoint.
            if used[u] || units[u].iter().all(|&v| active[v]) {
                continue;
            }
            let s = engine.fixpoint_size(expand(units, chosen.iter().copied().chain([u])));
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((u, s));
            }
        }
        let Some((u, s)) = best else {
            return Err(TssError::Infeasible);
        };
        used[u] = true;
        chosen.push(u);
        size = s;
    }
    let mut k = chosen.len();
    while k > 0 {
        k -= 1;
        let trial: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, &u)| u)
            .collect();
        if engine.covers(expand(units, trial.iter().copied())) {
            chosen = trial;
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Writes the target-set integer program in CPLEX LP format: binaries `s_i`
/// (node `i` seeded) and `e_i_j`, one covering row per node, one ordering
/// equality per unordered pair and one transitivity row per ordered triple.
pub fn export_ilp(inst: &TssInstance, sink: &mut impl fmt::Write) -> Result<(), TssError> {
    let m = inst.len();
    writeln!(sink, "\\ target set selection integer program")?;
    writeln!(sink, "\\ nodes: {m}, edges: {}", inst.edge_count())?;
    writeln!(sink, "Minimize")?;
    write!(sink, " obj:")?;
    for i in 0..m {
        write!(sink, "{} s_{i}", if i == 0 { "" } else { " +" })?;
    }
    writeln!(sink)?;
    writeln!(sink, "Subject To")?;
    // Covering rows: sum over edges (i, j) of e_i_j >= tau_i (1 - s_i).
    let out = inst.out_edges();
    for i in 0..m {
        write!(sink, " thr_{i}:")?;
        for (k, &(j, mult)) in out[i].iter().enumerate() {
            let sep = if k == 0 { "" } else { " +" };
            if mult == 1 {
                write!(sink, "{sep} e_{i}_{j}")?;
            } else {
                write!(sink, "{sep} {mult} e_{i}_{j}")?;
            }
        }
        let tau = inst.tau(i);
        let sep = if out[i].is_empty() { "" } else { " +" };
        writeln!(sink, "{sep} {tau} s_{i} >= {tau}")?;
    }
    for i in 0..m {
        for j in i + 1..m {
            writeln!(sink, " ord_{i}_{j}: e_{i}_{j} + e_{j}_{i} = 1")?;
        }
    }
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                if i != j && j != l && i != l {
                    writeln!(
                        sink,
                        " tri_{i}_{j}_{l}: e_{i}_{j} + e_{j}_{l} + e_{l}_{i} <= 2"
                    )?;
                }
            }
        }
    }
    writeln!(sink, "Binary")?;
    for i in 0..m {
        writeln!(sink, " s_{i}")?;
    }
    for i in 0..m {
        for j in 0..m {
            if i != j || inst.has_edge(i, i) && j == i {
                writeln!(sink, " e_{i}_{j}")?;
            }
        }
    }
    writeln!(sink, "End")?;
    Ok(())
}
