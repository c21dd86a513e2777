//! Boolean regulatory networks and their dynamics.
//!
//! A network is a list of update rules, one per node. The regulatory graph is
//! implied by the rules: node `j` is an in-neighbor of node `i` whenever
//! `rules[i]` reads `x_j`. Rules come in four shapes (truth table, weighted
//! threshold, nested canalyzing, and a set of alternatives for probabilistic
//! networks) and every dynamics routine here works on all of them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::state::StateVector;

/// Dense index of a node in a [`RegulatoryNetwork`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error("node index {index} out of range for a network of {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("state has length {got}, network has {expected} nodes")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("node {node}: {reason}")]
    MalformedRule { node: usize, reason: String },
    #[error("alternative {index} is not defined for node {node} ({available} available)")]
    InvalidAlternative {
        node: usize,
        index: usize,
        available: usize,
    },
    #[error("initial state disagrees with the pinned value of node {0}")]
    PinConflict(NodeId),
    #[error("fixed-point search exceeds the search budget: {0}")]
    SearchBudgetExceeded(String),
    #[error("sequence is not an attractor: {0}")]
    InvalidAttractor(String),
}

/// Per-node update function.
#[derive(Debug, Clone, PartialEq)]
pub enum UpdateRule {
    /// Lookup table over `inputs` (strictly ascending). The first input is
    /// the most significant bit of the table index.
    TruthTable {
        inputs: Vec<NodeId>,
        table: Vec<bool>,
    },
    /// Fires iff `sum(weights[k] * x[inputs[k]]) >= tau`.
    Threshold {
        inputs: Vec<NodeId>,
        weights: Vec<f64>,
        tau: f64,
    },
    /// Ranked inputs: the first `order[l]` with `x == canalyzing[l]` decides
    /// the output `canalyzed[l]`; if none matches the output is `default`.
    NestedCanalyzing {
        order: Vec<NodeId>,
        canalyzing: Vec<bool>,
        canalyzed: Vec<bool>,
        default: bool,
    },
    /// Alternatives selected by the random context of a probabilistic network.
    RuleSet(Vec<UpdateRule>),
}

impl UpdateRule {
    pub fn constant(value: bool) -> Self {
        UpdateRule::TruthTable {
            inputs: Vec::new(),
            table: vec![value],
        }
    }

    pub fn copy(j: NodeId) -> Self {
        Self::from_fn(&[j], |x| x[0])
    }

    pub fn negation(j: NodeId) -> Self {
        Self::from_fn(&[j], |x| !x[0])
    }

    pub fn or(inputs: &[NodeId]) -> Self {
        Self::from_fn(inputs, |x| x.iter().any(|&b| b))
    }

    pub fn and(inputs: &[NodeId]) -> Self {
        Self::from_fn(inputs, |x| x.iter().all(|&b| b))
    }

    /// Tabulates `f` over `inputs`. The closure receives the input values in
    /// the order given here; the stored table is canonicalized to ascending
    /// node order.
    pub fn from_fn(inputs: &[NodeId], f: impl Fn(&[bool]) -> bool) -> Self {
        let mut sorted: Vec<NodeId> = inputs.to_vec();
        sorted.sort();
        sorted.dedup();
        let d = sorted.len();
        let mut table = Vec::with_capacity(1 << d);
        let mut given = vec![false; inputs.len()];
        for code in 0..(1usize << d) {
            for (k, node) in inputs.iter().enumerate() {
                let pos = sorted.binary_search(node).expect("input present");
                given[k] = (code >> (d - 1 - pos)) & 1 == 1;
            }
            table.push(f(&given));
        }
        UpdateRule::TruthTable {
            inputs: sorted,
            table,
        }
    }

    /// Threshold rule with `+1`/`-1` weights.
    pub fn signed_threshold(inputs: &[(NodeId, bool)], tau: f64) -> Self {
        UpdateRule::Threshold {
            inputs: inputs.iter().map(|&(j, _)| j).collect(),
            weights: inputs
                .iter()
                .map(|&(_, exc)| if exc { 1.0 } else { -1.0 })
                .collect(),
            tau,
        }
    }

    /// Variables read by this rule, ascending and duplicate-free.
    pub fn inputs(&self) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = match self {
            UpdateRule::TruthTable { inputs, .. } | UpdateRule::Threshold { inputs, .. } => {
                inputs.clone()
            }
            UpdateRule::NestedCanalyzing { order, .. } => order.clone(),
            UpdateRule::RuleSet(alts) => alts.iter().flat_map(|r| r.inputs()).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// Number of alternatives; plain rules count as one.
    pub fn alternatives(&self) -> usize {
        match self {
            UpdateRule::RuleSet(alts) => alts.len(),
            _ => 1,
        }
    }

    /// Alternative `xi`. Plain rules are shared by every alternative index.
    pub fn alternative(&self, xi: usize) -> Option<&UpdateRule> {
        match self {
            UpdateRule::RuleSet(alts) => alts.get(xi),
            _ => Some(self),
        }
    }

    /// Evaluates the rule with variable values supplied by `value`. For a
    /// `RuleSet`, `which` selects the alternative (`None` means the first).
    pub fn evaluate_with(
        &self,
        value: &impl Fn(NodeId) -> bool,
        which: Option<usize>,
    ) -> Option<bool> {
        match self {
            UpdateRule::TruthTable { inputs, table } => {
                let mut code = 0usize;
                for &j in inputs {
                    code = (code << 1) | value(j) as usize;
                }
                table.get(code).copied()
            }
            UpdateRule::Threshold {
                inputs,
                weights,
                tau,
            } => {
                let sum: f64 = inputs
                    .iter()
                    .zip(weights)
                    .filter(|(&j, _)| value(j))
                    .map(|(_, &w)| w)
                    .sum();
                Some(sum >= *tau)
            }
            UpdateRule::NestedCanalyzing {
                order,
                canalyzing,
                canalyzed,
                default,
            } => {
                for ((&j, &b), &a) in order.iter().zip(canalyzing).zip(canalyzed) {
                    if value(j) == b {
                        return Some(a);
                    }
                }
                Some(*default)
            }
            UpdateRule::RuleSet(alts) => alts.get(which.unwrap_or(0))?.evaluate_with(value, None),
        }
    }

    fn validate(&self, node: usize, n: usize) -> Result<(), NetError> {
        let malformed = |reason: String| NetError::MalformedRule { node, reason };
        let check_range = |ids: &[NodeId]| -> Result<(), NetError> {
            for &j in ids {
                if j.0 >= n {
                    return Err(NetError::IndexOutOfRange { index: j.0, n });
                }
            }
            Ok(())
        };
        let check_distinct = |ids: &[NodeId]| -> Result<(), NetError> {
            let set: BTreeSet<NodeId> = ids.iter().copied().collect();
            if set.len() != ids.len() {
                return Err(malformed("repeated input".into()));
            }
            Ok(())
        };
        match self {
            UpdateRule::TruthTable { inputs, table } => {
                check_range(inputs)?;
                if inputs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(malformed(
                        "truth-table inputs must be strictly ascending".into(),
                    ));
                }
                if inputs.len() >= usize::BITS as usize || table.len() != 1usize << inputs.len() {
                    return Err(malformed(format!(
                        "truth table has {} rows for {} inputs",
                        table.len(),
                        inputs.len()
                    )));
                }
            }
            UpdateRule::Threshold {
                inputs,
                weights,
                tau,
            } => {
                check_range(inputs)?;
                check_distinct(inputs)?;
                if weights.len() != inputs.len() {
                    return Err(malformed("one weight per threshold input required".into()));
                }
                if !tau.is_finite() || weights.iter().any(|w| !w.is_finite()) {
                    return Err(malformed("non-finite threshold parameter".into()));
                }
            }
            UpdateRule::NestedCanalyzing {
                order,
                canalyzing,
                canalyzed,
                ..
            } => {
                check_range(order)?;
                check_distinct(order)?;
                if canalyzing.len() != order.len() || canalyzed.len() != order.len() {
                    return Err(malformed("nested canalyzing lists differ in length".into()));
                }
            }
            UpdateRule::RuleSet(alts) => {
                if alts.is_empty() {
                    return Err(malformed("empty rule set".into()));
                }
                for alt in alts {
                    if matches!(alt, UpdateRule::RuleSet(_)) {
                        return Err(malformed("nested rule sets".into()));
                    }
                    alt.validate(node, n)?;
                }
            }
        }
        Ok(())
    }
}

/// Nodes held at fixed values, overriding their update rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputSet {
    pins: BTreeMap<NodeId, bool>,
}

impl InputSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pins each of `nodes` to its value in `target`.
    pub fn from_target(target: &StateVector, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let pins = nodes.into_iter().map(|j| (j, target.get(j.0))).collect();
        Self { pins }
    }

    pub fn pin(&mut self, node: NodeId, value: bool) -> &mut Self {
        self.pins.insert(node, value);
        self
    }

    pub fn get(&self, node: NodeId) -> Option<bool> {
        self.pins.get(&node).copied()
    }

    pub fn len(&self) -> usize {
        self.pins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.pins.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, bool)> + '_ {
        self.pins.iter().map(|(&k, &v)| (k, v))
    }

    /// Whether `state` carries the pinned value on every pinned node.
    pub fn agrees_with(&self, state: &StateVector) -> bool {
        self.pins.iter().all(|(j, &v)| state.get(j.0) == v)
    }

    /// Overwrites pinned coordinates of `state`.
    pub fn apply(&self, state: &mut StateVector) {
        for (j, &v) in &self.pins {
            state.set(j.0, v);
        }
    }
}

/// Cyclic sequence of states closed under the synchronous update map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attractor {
    states: Vec<StateVector>,
}

impl Attractor {
    /// Checks that `states` is a cycle of `net` (each state maps to the next,
    /// the last back to the first, and no state repeats).
    pub fn new(net: &RegulatoryNetwork, states: Vec<StateVector>) -> Result<Self, NetError> {
        if states.is_empty() {
            return Err(NetError::InvalidAttractor("no states".into()));
        }
        let distinct: BTreeSet<&StateVector> = states.iter().collect();
        if distinct.len() != states.len() {
            return Err(NetError::InvalidAttractor("repeated state".into()));
        }
        let none = InputSet::new();
        for (l, s) in states.iter().enumerate() {
            net.check_dims(s)?;
            let next = &states[(l + 1) % states.len()];
            if &net.step_synchronous(s, &none) != next {
                return Err(NetError::InvalidAttractor(format!(
                    "state {l} does not map to its successor"
                )));
            }
        }
        Ok(Self { states })
    }

    pub fn fixed_point(net: &RegulatoryNetwork, state: StateVector) -> Result<Self, NetError> {
        Self::new(net, vec![state])
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn period(&self) -> usize {
        self.states.len()
    }

    pub fn contains(&self, state: &StateVector) -> bool {
        self.states.contains(state)
    }

    /// Whether `cycle` lists the same states in the same cyclic order.
    pub fn matches_up_to_rotation(&self, cycle: &[StateVector]) -> bool {
        let p = self.states.len();
        if cycle.len() != p {
            return false;
        }
        (0..p).any(|shift| (0..p).all(|l| self.states[(l + shift) % p] == cycle[l]))
    }
}

/// Outcome of [`RegulatoryNetwork::simulate_pinned`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    /// Steps taken before stopping.
    pub steps: usize,
    /// Step index at which the recurring state was first visited.
    pub cycle_start: Option<usize>,
    pub cycle_length: Option<usize>,
    pub final_state: StateVector,
}

impl Simulation {
    /// A repeated state was reached within the step budget.
    pub fn converged(&self) -> bool {
        self.cycle_length.is_some()
    }

    pub fn reached_fixed_point(&self) -> bool {
        self.cycle_length == Some(1)
    }
}

/// Largest network for which [`RegulatoryNetwork::find_fixed_points`]
/// enumerates the full state space.
pub const BRUTE_FORCE_NODES: usize = 22;
const BACKTRACK_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RegulatoryNetwork {
    names: Vec<String>,
    rules: Vec<UpdateRule>,
    in_neighbors: Vec<Vec<NodeId>>,
}

impl RegulatoryNetwork {
    /// Network with default names `x1..xn`.
    pub fn new(rules: Vec<UpdateRule>) -> Result<Self, NetError> {
        let names = (1..=rules.len()).map(|i| format!("x{i}")).collect();
        Self::with_names(names, rules)
    }

    pub fn with_names(names: Vec<String>, rules: Vec<UpdateRule>) -> Result<Self, NetError> {
        let n = rules.len();
        if names.len() != n {
            return Err(NetError::DimensionMismatch {
                expected: n,
                got: names.len(),
            });
        }
        for (i, rule) in rules.iter().enumerate() {
            rule.validate(i, n)?;
        }
        let in_neighbors = rules.iter().map(UpdateRule::inputs).collect();
        Ok(Self {
            names,
            rules,
            in_neighbors,
        })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node.0]
    }

    pub fn rules(&self) -> &[UpdateRule] {
        &self.rules
    }

    pub fn rule(&self, node: NodeId) -> &UpdateRule {
        &self.rules[node.0]
    }

    pub fn in_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.in_neighbors[node.0]
    }

    /// Out-neighbor lists derived from the in-neighbor lists.
    pub fn out_neighbors(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.len()];
        for (i, ins) in self.in_neighbors.iter().enumerate() {
            for &j in ins {
                out[j.0].push(NodeId(i));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.in_neighbors.iter().map(Vec::len).sum()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.len()).map(NodeId)
    }

    /// Largest alternative count over all nodes (`1` for deterministic nets).
    pub fn alternatives(&self) -> usize {
        self.rules
            .iter()
            .map(UpdateRule::alternatives)
            .max()
            .unwrap_or(1)
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|s| s == name).map(NodeId)
    }

    fn check_dims(&self, state: &StateVector) -> Result<(), NetError> {
        if state.len() != self.len() {
            return Err(NetError::DimensionMismatch {
                expected: self.len(),
                got: state.len(),
            });
        }
        Ok(())
    }

    /// `f_i(state)` for a single node; `which` picks a rule-set alternative.
    pub fn evaluate_rule(
        &self,
        node: NodeId,
        state: &StateVector,
        which: Option<usize>,
    ) -> Result<bool, NetError> {
        if node.0 >= self.len() {
            return Err(NetError::IndexOutOfRange {
                index: node.0,
                n: self.len(),
            });
        }
        self.check_dims(state)?;
        let rule = &self.rules[node.0];
        rule.evaluate_with(&|j: NodeId| state.get(j.0), which)
            .ok_or(NetError::InvalidAlternative {
                node: node.0,
                index: which.unwrap_or(0),
                available: rule.alternatives(),
            })
    }

    /// All unpinned nodes update simultaneously; pinned nodes hold their pins.
    /// Rule sets use their first alternative.
    ///
    /// # Panics
    /// If `state` has the wrong length.
    pub fn step_synchronous(&self, state: &StateVector, pins: &InputSet) -> StateVector {
        assert_eq!(state.len(), self.len(), "state dimension mismatch");
        let mut next = StateVector::zeros(self.len());
        let value = |j: NodeId| state.get(j.0);
        for (i, rule) in self.rules.iter().enumerate() {
            let v = match pins.get(NodeId(i)) {
                Some(p) => p,
                None => rule.evaluate_with(&value, None).expect("validated rule"),
            };
            next.set(i, v);
        }
        next
    }

    /// Synchronous step of the probabilistic network under context `xi`.
    /// Nodes with a single rule use it for every context.
    pub fn step_stochastic(
        &self,
        state: &StateVector,
        pins: &InputSet,
        xi: usize,
    ) -> Result<StateVector, NetError> {
        self.check_dims(state)?;
        let mut next = StateVector::zeros(self.len());
        let value = |j: NodeId| state.get(j.0);
        for (i, rule) in self.rules.iter().enumerate() {
            let v = match pins.get(NodeId(i)) {
                Some(p) => p,
                None => {
                    let alt = rule.alternative(xi).ok_or(NetError::InvalidAlternative {
                        node: i,
                        index: xi,
                        available: rule.alternatives(),
                    })?;
                    alt.evaluate_with(&value, None).expect("validated rule")
                }
            };
            next.set(i, v);
        }
        Ok(next)
    }

    /// Synchronous step where node `i` uses alternative `choices[i]` (taken
    /// modulo its number of alternatives), as in a probabilistic network with
    /// independent per-node contexts.
    pub fn step_with_choices(
        &self,
        state: &StateVector,
        pins: &InputSet,
        choices: &[usize],
    ) -> Result<StateVector, NetError> {
        self.check_dims(state)?;
        if choices.len() != self.len() {
            return Err(NetError::DimensionMismatch {
                expected: self.len(),
                got: choices.len(),
            });
        }
        let mut next = StateVector::zeros(self.len());
        let value = |j: NodeId| state.get(j.0);
        for (i, rule) in self.rules.iter().enumerate() {
            let v = match pins.get(NodeId(i)) {
                Some(p) => p,
                None => rule
                    .evaluate_with(&value, Some(choices[i] % rule.alternatives()))
                    .expect("validated rule"),
            };
            next.set(i, v);
        }
        Ok(next)
    }

    /// Only `active` is recomputed; a pinned `active` node keeps its pin.
    pub fn step_asynchronous(
        &self,
        state: &StateVector,
        pins: &InputSet,
        active: NodeId,
    ) -> Result<StateVector, NetError> {
        let mut next = state.clone();
        let v = match pins.get(active) {
            Some(p) => p,
            None => self.evaluate_rule(active, state, None)?,
        };
        next.set(active.0, v);
        Ok(next)
    }

    /// Iterates the pinned synchronous map from `initial` until a state
    /// repeats or `max_steps` steps have been taken.
    pub fn simulate_pinned(
        &self,
        initial: &StateVector,
        pins: &InputSet,
        max_steps: usize,
    ) -> Result<Simulation, NetError> {
        self.check_dims(initial)?;
        if let Some((j, _)) = pins.iter().find(|&(j, v)| initial.get(j.0) != v) {
            return Err(NetError::PinConflict(j));
        }
        let mut seen: BTreeMap<StateVector, usize> = BTreeMap::new();
        let mut state = initial.clone();
        seen.insert(state.clone(), 0);
        for step in 1..=max_steps.max(1) {
            let next = self.step_synchronous(&state, pins);
            if let Some(&first) = seen.get(&next) {
                return Ok(Simulation {
                    steps: step,
                    cycle_start: Some(first),
                    cycle_length: Some(step - first),
                    final_state: next,
                });
            }
            seen.insert(next.clone(), step);
            state = next;
        }
        Ok(Simulation {
            steps: max_steps.max(1),
            cycle_start: None,
            cycle_length: None,
            final_state: state,
        })
    }

    /// The attractor eventually reached from `initial` under `pins`, listed
    /// in visit order. Pins are applied to the initial state first.
    pub fn find_attractor_from(&self, initial: &StateVector, pins: &InputSet) -> Attractor {
        let mut state = initial.clone();
        pins.apply(&mut state);
        let mut seen: BTreeMap<StateVector, usize> = BTreeMap::new();
        let mut trail = Vec::new();
        loop {
            if let Some(&first) = seen.get(&state) {
                return Attractor {
                    states: trail.split_off(first),
                };
            }
            seen.insert(state.clone(), trail.len());
            trail.push(state.clone());
            state = self.step_synchronous(&state, pins);
        }
    }

    /// `f(x) = x` under every alternative.
    pub fn is_fixed_point(&self, state: &StateVector) -> bool {
        if state.len() != self.len() {
            return false;
        }
        let value = |j: NodeId| state.get(j.0);
        self.rules.iter().enumerate().all(|(i, rule)| {
            (0..rule.alternatives())
                .all(|xi| rule.evaluate_with(&value, Some(xi)) == Some(state.get(i)))
        })
    }

    fn all_threshold(&self) -> bool {
        self.rules
            .iter()
            .all(|r| matches!(r, UpdateRule::Threshold { .. }))
    }

    /// Up to `limit` fixed points (common to all alternatives) in
    /// lexicographic order. Threshold networks use a pruned backtracking
    /// search; anything else is enumerated when `n <= BRUTE_FORCE_NODES`.
    pub fn find_fixed_points(&self, limit: usize) -> Result<Vec<StateVector>, NetError> {
        if self.all_threshold() && !self.is_empty() {
            self.fixed_points_backtracking(limit, BACKTRACK_BUDGET)
        } else if self.len() <= BRUTE_FORCE_NODES {
            Ok(self.fixed_points_brute_force(limit))
        } else {
            Err(NetError::SearchBudgetExceeded(format!(
                "{} nodes with non-threshold rules exceeds the enumeration bound of {}",
                self.len(),
                BRUTE_FORCE_NODES
            )))
        }
    }

    /// Exhaustive enumeration of all `2^n` states.
    pub fn fixed_points_brute_force(&self, limit: usize) -> Vec<StateVector> {
        assert!(self.len() <= 63, "state space too large to enumerate");
        let mut out = Vec::new();
        for code in 0..(1u64 << self.len()) {
            if out.len() >= limit {
                break;
            }
            let s = StateVector::from_index(code, self.len());
            if self.is_fixed_point(&s) {
                out.push(s);
            }
        }
        out
    }

    /// Depth-first assignment of nodes `0..n` (0 before 1), pruning any
    /// threshold node whose reachable weighted-sum interval cannot reproduce
    /// its assigned value.
    pub fn fixed_points_backtracking(
        &self,
        limit: usize,
        budget: u64,
    ) -> Result<Vec<StateVector>, NetError> {
        struct Row {
            inputs: Vec<(usize, f64)>,
            tau: f64,
        }
        let n = self.len();
        let mut rows = Vec::with_capacity(n);
        for rule in &self.rules {
            match rule {
                UpdateRule::Threshold {
                    inputs,
                    weights,
                    tau,
                } => rows.push(Row {
                    inputs: inputs
                        .iter()
                        .map(|j| j.0)
                        .zip(weights.iter().copied())
                        .collect(),
                    tau: *tau,
                }),
                _ => {
                    return Err(NetError::SearchBudgetExceeded(
                        "backtracking requires threshold rules".into(),
                    ))
                }
            }
        }
        let out_nb = self.out_neighbors();
        // A row is consistent if its assigned value is still achievable.
        let consistent = |i: usize, assign: &[Option<bool>]| -> bool {
            let Some(xi) = assign[i] else { return true };
            let row = &rows[i];
            let (mut lo, mut hi) = (0.0f64, 0.0f64);
            for &(j, w) in &row.inputs {
                match assign[j] {
                    Some(true) => {
                        lo += w;
                        hi += w;
                    }
                    Some(false) => {}
                    None if w > 0.0 => hi += w,
                    None => lo += w,
                }
            }
            if xi {
                hi >= row.tau
            } else {
                lo < row.tau
            }
        };

        let mut assign: Vec<Option<bool>> = vec![None; n];
        let mut out = Vec::new();
        let mut visits = 0u64;
        // Explicit stack of (depth, next value to try).
        let mut stack: Vec<(usize, u8)> = vec![(0, 0)];
        while let Some(&mut (depth, ref mut next)) = stack.last_mut() {
            if depth == n {
                out.push(StateVector::from_bools(
                    &assign
                        .iter()
                        .map(|v| v.unwrap_or(false))
                        .collect::<Vec<_>>(),
                ));
                stack.pop();
                if out.len() >= limit {
                    break;
                }
                continue;
            }
            if *next > 1 {
                assign[depth] = None;
                stack.pop();
                continue;
            }
            let value = *next == 1;
            *next += 1;
            visits += 1;
            if visits > budget {
                return Err(NetError::SearchBudgetExceeded(format!(
                    "backtracking exceeded {budget} node visits"
                )));
            }
            assign[depth] = Some(value);
            let ok = consistent(depth, &assign)
                && out_nb[depth].iter().all(|&k| consistent(k.0, &assign));
            if ok {
                stack.push((depth + 1, 0));
            }
        }
        Ok(out)
    }
}
