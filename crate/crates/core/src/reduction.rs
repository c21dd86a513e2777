//! Reductions from attractor control problems to target set selection.
//!
//! In every instance an active TSS node stands for a network node (or a
//! clause of its rule) that has settled at its desired value for good. Any
//! target set restricted to `Original` nodes is therefore a pinning set.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::cnf::{rule_to_cnf, table_to_cnf, CnfError, CnfForm};
use crate::graph;
use crate::network::{Attractor, NetError, NodeId, RegulatoryNetwork, UpdateRule};
use crate::state::StateVector;
use crate::tss::{Provenance, TssInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("desired state is not a fixed point of the network")]
    NotAFixedPoint,
    #[error("desired state is not a fixed point of every alternative")]
    AttractorNotCommonFixedPoint,
    #[error("node {node}: {source}")]
    Cnf { node: NodeId, source: CnfError },
    #[error("node {0} is neither purely excitatory nor purely inhibitory")]
    MixedSignNode(NodeId),
    #[error("node {0} has a weight other than +1 or -1")]
    NonUnitWeight(NodeId),
    #[error("node {0} does not have a threshold rule")]
    NotThreshold(NodeId),
    #[error("node {0} does not have a nested canalyzing rule")]
    NotNestedCanalyzing(NodeId),
    #[error("alternatives of node {0} differ in more than the threshold")]
    NotThresholdFamily(NodeId),
    #[error("invalid attractor: {0}")]
    InvalidAttractor(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

pub(crate) fn ceil_f64(x: f64) -> i64 {
    let t = x as i64;
    if (t as f64) < x {
        t + 1
    } else {
        t
    }
}

pub(crate) fn floor_f64(x: f64) -> i64 {
    let t = x as i64;
    if (t as f64) > x {
        t - 1
    } else {
        t
    }
}

fn check_fixed_point(net: &RegulatoryNetwork, x_star: &StateVector) -> Result<(), ReductionError> {
    if x_star.len() != net.len() {
        return Err(NetError::DimensionMismatch {
            expected: net.len(),
            got: x_star.len(),
        }
        .into());
    }
    if !net.is_fixed_point(x_star) {
        return Err(if net.alternatives() > 1 {
            ReductionError::AttractorNotCommonFixedPoint
        } else {
            ReductionError::NotAFixedPoint
        });
    }
    Ok(())
}

fn plain_rule(net: &RegulatoryNetwork, i: usize) -> Result<&UpdateRule, ReductionError> {
    match net.rule(NodeId(i)) {
        UpdateRule::RuleSet(alts) if alts.len() == 1 => Ok(&alts[0]),
        UpdateRule::RuleSet(_) => Err(ReductionError::Cnf {
            node: NodeId(i),
            source: CnfError::RuleSet,
        }),
        rule => Ok(rule),
    }
}

fn cnf_of(rule: &UpdateRule, i: usize) -> Result<CnfForm, ReductionError> {
    rule_to_cnf(rule).map_err(|source| ReductionError::Cnf {
        node: NodeId(i),
        source,
    })
}

/// Adds the clause gadgets of node `i` (one auxiliary per usable clause) reading
/// literals from the copy at `src_base` whose target values are `src`, and
/// feeding the copy of `i` at `dst` whose target value is `want`.
fn add_clause_gadgets(
    inst: &mut TssInstance,
    cnf: &CnfForm,
    owner: usize,
    phase: usize,
    dst: usize,
    want: bool,
    src_base: usize,
    src: &StateVector,
) {
    for (s, clause) in cnf.clauses.iter().enumerate() {
        // For an off target only clauses false at the source state can
        // switch the node off; the others would be dead auxiliaries.
        if !want && clause.iter().any(|&(j, positive)| src.get(j.0) == positive) {
            continue;
        }
        let tau = if want { 1 } else { clause.len() as i64 };
        let aux = inst.push_node(
            tau,
            Provenance::Auxiliary {
                owner: NodeId(owner),
                clause: s,
                phase,
            },
        );
        inst.add_edge(aux, dst);
        for &(j, positive) in clause {
            // Positive literals connect when the source agrees with the
            // target, negated ones when it disagrees.
            if (src.get(j.0) == want) == positive {
                inst.add_edge(src_base + j.0, aux);
            }
        }
    }
}

fn augment(n: usize, cnfs: &[CnfForm], x_star: &StateVector) -> TssInstance {
    let tau = (0..n)
        .map(|i| {
            if x_star.get(i) {
                cnfs[i].len() as i64
            } else {
                1
            }
        })
        .collect();
    let mut inst = TssInstance::plain(tau);
    for (i, cnf) in cnfs.iter().enumerate() {
        add_clause_gadgets(&mut inst, cnf, i, 0, i, x_star.get(i), 0, x_star);
    }
    inst
}

/// Clause-gadget instance for a fixed point: one auxiliary per CNF clause of
/// every rule, except clauses of off nodes that hold at `x*`. Originals occupy indices `0..n`; auxiliaries follow in node
/// and clause order.
pub fn build_augmented(
    net: &RegulatoryNetwork,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    check_fixed_point(net, x_star)?;
    let cnfs = (0..net.len())
        .map(|i| cnf_of(plain_rule(net, i)?, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(augment(net.len(), &cnfs, x_star))
}

/// Class of a node in a signed threshold network relative to a target state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    E1,
    E0,
    I1,
    I0,
}

impl NodeClass {
    pub fn new(excitatory: bool, on: bool) -> Self {
        match (excitatory, on) {
            (true, true) => NodeClass::E1,
            (true, false) => NodeClass::E0,
            (false, true) => NodeClass::I1,
            (false, false) => NodeClass::I0,
        }
    }

    pub fn is_excitatory(self) -> bool {
        matches!(self, NodeClass::E1 | NodeClass::E0)
    }

    pub fn is_on(self) -> bool {
        matches!(self, NodeClass::E1 | NodeClass::I1)
    }

    /// Whether the reduced instance has an edge from this class to `to`.
    pub fn feeds(self, to: NodeClass) -> bool {
        (self.is_on() == to.is_on()) == self.is_excitatory()
    }
}

/// A network of threshold rules with unit weights in which every node acts
/// with one sign on all of its targets. Rule sets whose alternatives are
/// such threshold rules are accepted as well.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedThresholdNet {
    net: RegulatoryNetwork,
    excitatory: Vec<bool>,
}

fn threshold_parts(
    rule: &UpdateRule,
    i: usize,
) -> Result<(&[NodeId], &[f64], f64), ReductionError> {
    match rule {
        UpdateRule::Threshold {
            inputs,
            weights,
            tau,
        } => Ok((inputs, weights, *tau)),
        _ => Err(ReductionError::NotThreshold(NodeId(i))),
    }
}

impl SignedThresholdNet {
    pub fn new(net: RegulatoryNetwork) -> Result<Self, ReductionError> {
        let mut sign: Vec<Option<bool>> = vec![None; net.len()];
        for (i, rule) in net.rules().iter().enumerate() {
            for xi in 0..rule.alternatives() {
                let alt = rule.alternative(xi).expect("alternative in range");
                let (inputs, weights, _) = threshold_parts(alt, i)?;
                for (&j, &w) in inputs.iter().zip(weights) {
                    let exc = if w == 1.0 {
                        true
                    } else if w == -1.0 {
                        false
                    } else {
                        return Err(ReductionError::NonUnitWeight(NodeId(i)));
                    };
                    match sign[j.0] {
                        Some(s) if s != exc => return Err(ReductionError::MixedSignNode(j)),
                        _ => sign[j.0] = Some(exc),
                    }
                }
            }
        }
        let excitatory = sign.into_iter().map(|s| s.unwrap_or(true)).collect();
        Ok(Self { net, excitatory })
    }

    pub fn network(&self) -> &RegulatoryNetwork {
        &self.net
    }

    pub fn is_excitatory(&self, node: NodeId) -> bool {
        self.excitatory[node.0]
    }

    pub fn classes(&self, x_star: &StateVector) -> Vec<NodeClass> {
        (0..self.net.len())
            .map(|i| NodeClass::new(self.excitatory[i], x_star.get(i)))
            .collect()
    }
}

/// Threshold of the reduced instance for a node with rule threshold `tau`,
/// `exc`/`inh` excitatory/inhibitory in-neighbors and target value `on`.
///
/// For an off node the sum must drop strictly below `tau`; counting settled
/// neighbors gives the sum at most `exc - count`, so `count` has to exceed
/// `exc - tau`. That bound is combined with `tau + exc`.
pub fn reduced_threshold(tau: f64, exc: usize, inh: usize, on: bool) -> i64 {
    if on {
        ceil_f64(tau) + inh as i64
    } else {
        let additive = ceil_f64(tau) + exc as i64;
        let strict = floor_f64(exc as f64 - tau) + 1;
        additive.max(strict)
    }
}

/// Instance on the original node set: edge `j -> i` for every regulation
/// whose settled source pushes `i` toward its target value.
pub fn build_threshold_tss(
    snet: &SignedThresholdNet,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    let net = &snet.net;
    if net.alternatives() > 1 {
        return Err(ReductionError::Cnf {
            node: NodeId(0),
            source: CnfError::RuleSet,
        });
    }
    check_fixed_point(net, x_star)?;
    threshold_instance(snet, x_star, |i| {
        let (_, _, tau) = threshold_parts(plain_rule(net, i)?, i)?;
        Ok(tau)
    })
}

fn threshold_instance(
    snet: &SignedThresholdNet,
    x_star: &StateVector,
    tau_of: impl Fn(usize) -> Result<f64, ReductionError>,
) -> Result<TssInstance, ReductionError> {
    let net = &snet.net;
    let n = net.len();
    let mut tau = Vec::with_capacity(n);
    for i in 0..n {
        let inputs = net.in_neighbors(NodeId(i));
        let exc = inputs.iter().filter(|&&j| snet.excitatory[j.0]).count();
        let inh = inputs.len() - exc;
        tau.push(reduced_threshold(tau_of(i)?, exc, inh, x_star.get(i)));
    }
    let mut inst = TssInstance::plain(tau);
    for i in 0..n {
        for &j in net.in_neighbors(NodeId(i)) {
            if (x_star.get(j.0) == x_star.get(i)) == snet.excitatory[j.0] {
                inst.add_edge(j.0, i);
            }
        }
    }
    Ok(inst)
}

fn nc_parts(
    rule: &UpdateRule,
    i: usize,
) -> Result<(&[NodeId], &[bool], &[bool], bool), ReductionError> {
    match rule {
        UpdateRule::NestedCanalyzing {
            order,
            canalyzing,
            canalyzed,
            default,
        } => Ok((order, canalyzing, canalyzed, *default)),
        _ => Err(ReductionError::NotNestedCanalyzing(NodeId(i))),
    }
}

/// Nested canalyzing instance with one auxiliary `u_{i,s}` per rank `s`
/// whose canalyzed value equals `x*_i`. The auxiliary reads `j_s` and every
/// earlier rank with the opposite canalyzed value, and fires when all of them
/// have settled; the node fires on any auxiliary. Terms that are false at
/// `x*` can never justify the node and get no auxiliary. Nodes left without
/// auxiliaries have no in-edges and must be seeded.
pub fn build_nc_full(
    net: &RegulatoryNetwork,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    check_fixed_point(net, x_star)?;
    let n = net.len();
    let mut inst = TssInstance::plain(vec![1; n]);
    for i in 0..n {
        let (order, b, a, _) = nc_parts(plain_rule(net, i)?, i)?;
        let want = x_star.get(i);
        for s in 0..order.len() {
            if a[s] != want {
                continue;
            }
            let mut sources: Vec<usize> = (0..s).filter(|&l| a[l] != want).collect();
            sources.push(s);
            let consistent = sources
                .iter()
                .all(|&l| (x_star.get(order[l].0) == b[l]) == (l == s));
            if !consistent {
                continue;
            }
            let aux = inst.push_node(
                sources.len() as i64,
                Provenance::Auxiliary {
                    owner: NodeId(i),
                    clause: s,
                    phase: 0,
                },
            );
            for l in sources {
                inst.add_edge(order[l].0, aux);
            }
            inst.add_edge(aux, i);
        }
    }
    Ok(inst)
}

/// Rank that decides node `i` at `x*`: the first rank whose input sits at its
/// canalyzing value, or `None` when the default applies.
pub fn deciding_rank(order: &[NodeId], canalyzing: &[bool], x_star: &StateVector) -> Option<usize> {
    (0..order.len()).find(|&l| x_star.get(order[l].0) == canalyzing[l])
}

/// Unanimous nested canalyzing instance on the original nodes: `i` reads the
/// inputs ranked up to the rank that decides it at `x*` (all inputs when the
/// default decides) and fires once all of them have settled.
pub fn build_nc_unanimous(
    net: &RegulatoryNetwork,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    check_fixed_point(net, x_star)?;
    let n = net.len();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, row) in edges.iter_mut().enumerate() {
        let (order, b, _, _) = nc_parts(plain_rule(net, i)?, i)?;
        let upto = deciding_rank(order, b, x_star).map_or(order.len(), |l| l + 1);
        row.extend(order[..upto].iter().map(|j| j.0));
    }
    let mut inst = TssInstance::plain(edges.iter().map(|r| r.len() as i64).collect());
    for (i, row) in edges.iter().enumerate() {
        for &j in row {
            inst.add_edge(j, i);
        }
    }
    Ok(inst)
}

/// Product instance for an attractor of period `p >= 2`: one copy of the
/// clause-gadget construction per phase, where phase `a` targets state
/// `x^a` and reads the copy of phase `a - 1 (mod p)`. Originals of phase
/// `a` occupy `a*n .. (a+1)*n`; auxiliaries follow.
pub fn build_cyclic(
    net: &RegulatoryNetwork,
    attractor: &Attractor,
) -> Result<TssInstance, ReductionError> {
    let p = attractor.period();
    if p < 2 {
        return Err(ReductionError::InvalidAttractor(
            "cyclic construction needs period at least 2".into(),
        ));
    }
    let states = attractor.states();
    // Re-validate against this network.
    Attractor::new(net, states.to_vec())
        .map_err(|e| ReductionError::InvalidAttractor(e.to_string()))?;
    let n = net.len();
    let cnfs = (0..n)
        .map(|i| cnf_of(plain_rule(net, i)?, i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut tau = Vec::with_capacity(n * p);
    let mut prov = Vec::with_capacity(n * p);
    for (a, state) in states.iter().enumerate() {
        for i in 0..n {
            tau.push(if state.get(i) {
                cnfs[i].len() as i64
            } else {
                1
            });
            prov.push(Provenance::Original {
                node: NodeId(i),
                phase: a,
            });
        }
    }
    let mut inst = TssInstance::new(tau, prov);
    for a in 0..p {
        let prev = (a + p - 1) % p;
        for (i, cnf) in cnfs.iter().enumerate() {
            add_clause_gadgets(
                &mut inst,
                cnf,
                i,
                a,
                a * n + i,
                states[a].get(i),
                prev * n,
                &states[prev],
            );
        }
    }
    Ok(inst)
}

/// Truth table (over `rule.inputs()`) of the merged function of a rule set
/// for a node whose target value is `want`.
pub fn merged_table(rule: &UpdateRule, node: NodeId, want: bool) -> (Vec<NodeId>, Vec<bool>) {
    let inputs = rule.inputs();
    let d = inputs.len();
    let k = rule.alternatives();
    let table = (0..1usize << d)
        .map(|code| {
            let bit = |j: NodeId| {
                let pos = inputs.binary_search(&j).expect("rule input");
                (code >> (d - 1 - pos)) & 1 == 1
            };
            let held = |j: NodeId| if j == node { want } else { bit(j) };
            let now = (0..k).map(|xi| rule.evaluate_with(&bit, Some(xi)).expect("alternative"));
            let kept = (0..k).map(|xi| rule.evaluate_with(&held, Some(xi)).expect("alternative"));
            if want {
                let mut now = now;
                let mut kept = kept;
                now.any(|v| v) && kept.all(|v| v)
            } else {
                let mut now = now;
                let mut kept = kept;
                now.all(|v| v) || kept.any(|v| v)
            }
        })
        .collect();
    (inputs, table)
}

/// Probabilistic network reduction: rule sets with several alternatives are
/// replaced by their merged function for the node's target value; single
/// rules are used as they are. The result is a clause-gadget instance.
pub fn merge_probabilistic(
    net: &RegulatoryNetwork,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    check_fixed_point(net, x_star)?;
    let mut cnfs = Vec::with_capacity(net.len());
    for i in 0..net.len() {
        let rule = net.rule(NodeId(i));
        if rule.alternatives() > 1 {
            let (inputs, table) = merged_table(rule, NodeId(i), x_star.get(i));
            if inputs.len() > crate::cnf::MAX_CNF_FAN_IN {
                return Err(ReductionError::Cnf {
                    node: NodeId(i),
                    source: CnfError::FanInTooLarge { d: inputs.len() },
                });
            }
            cnfs.push(table_to_cnf(&inputs, &table));
        } else {
            cnfs.push(cnf_of(plain_rule(net, i)?, i)?);
        }
    }
    Ok(augment(net.len(), &cnfs, x_star))
}

/// Threshold a rule set of same-sign threshold alternatives collapses to:
/// the largest threshold for nodes that must switch on, the smallest for
/// nodes that must stay off.
pub fn merged_threshold(
    rule: &UpdateRule,
    node: NodeId,
    want: bool,
) -> Result<f64, ReductionError> {
    let (inputs, weights, mut tau) =
        threshold_parts(rule.alternative(0).expect("first alternative"), node.0)?;
    for xi in 1..rule.alternatives() {
        let (ins, ws, t) = threshold_parts(rule.alternative(xi).expect("alternative"), node.0)?;
        if ins != inputs || ws != weights {
            return Err(ReductionError::NotThresholdFamily(node));
        }
        tau = if want { tau.max(t) } else { tau.min(t) };
    }
    Ok(tau)
}

/// Threshold-specialized reduction of a probabilistic signed threshold
/// network whose alternatives differ only in their thresholds.
pub fn merge_threshold(
    net: &RegulatoryNetwork,
    x_star: &StateVector,
) -> Result<TssInstance, ReductionError> {
    check_fixed_point(net, x_star)?;
    let snet = SignedThresholdNet::new(net.clone())?;
    threshold_instance(&snet, x_star, |i| {
        merged_threshold(net.rule(NodeId(i)), NodeId(i), x_star.get(i))
    })
}

/// Out-adjacency of the regulation graph (self-loops included).
pub fn regulation_graph(net: &RegulatoryNetwork) -> graph::Adjacency {
    net.out_neighbors()
        .into_iter()
        .map(|row| row.into_iter().map(|j| j.0).collect())
        .collect()
}

/// The cycle-breaking baseline condition on the regulation graph: `s` meets
/// every directed cycle and every node is reachable from `s`.
pub fn baseline_implies_target(net: &RegulatoryNetwork, s: &[NodeId]) -> bool {
    let out = regulation_graph(net);
    let mut removed = vec![false; net.len()];
    for &j in s {
        removed[j.0] = true;
    }
    graph::is_acyclic_without(&out, &removed)
        && graph::reachable_from(&out, s.iter().map(|j| j.0))
            .iter()
            .all(|&r| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tss::{is_target_set, solve_exact, ExactOptions};

    fn n(i: usize) -> NodeId {
        NodeId(i)
    }

    fn bits(s: &str) -> StateVector {
        StateVector::parse_bits(s).unwrap()
    }

    fn net_a() -> RegulatoryNetwork {
        RegulatoryNetwork::new(vec![
            UpdateRule::copy(n(0)),
            UpdateRule::copy(n(1)),
            UpdateRule::or(&[n(0), n(1)]),
        ])
        .unwrap()
    }

    #[test]
    fn augmented_net_a() {
        let inst = build_augmented(&net_a(), &bits("111")).unwrap();
        assert_eq!(inst.len(), 6);
        let aux3 = (0..6)
            .find(|&v| matches!(inst.provenance(v), Provenance::Auxiliary { owner, .. } if owner == n(2)))
            .unwrap();
        assert_eq!(inst.tau(aux3), 1);
        assert_eq!(inst.tau(2), 1);
        assert!(inst.has_edge(0, aux3) && inst.has_edge(1, aux3) && inst.has_edge(aux3, 2));
        let s = solve_exact(&inst, ExactOptions::default()).unwrap();
        assert_eq!(s.members, vec![0, 1]);
    }

    #[test]
    fn augmented_rejects_non_fixed_point() {
        assert_eq!(
            build_augmented(&net_a(), &bits("100")),
            Err(ReductionError::NotAFixedPoint)
        );
    }

    #[test]
    fn self_copy_needs_seeding() {
        let net = RegulatoryNetwork::new(vec![UpdateRule::copy(n(0))]).unwrap();
        let inst = build_augmented(&net, &bits("1")).unwrap();
        assert_eq!(inst.len(), 2);
        assert!(!is_target_set(&inst, &[]));
        assert!(is_target_set(&inst, &[0]));
    }

    #[test]
    fn threshold_display_values() {
        assert_eq!(reduced_threshold(1.0, 2, 1, true), 2);
        assert_eq!(reduced_threshold(1.0, 2, 1, false), 3);
        // With tau = 0 an off node needs more than every excitatory input.
        assert_eq!(reduced_threshold(0.0, 2, 0, false), 3);
        assert_eq!(reduced_threshold(-0.5, 2, 0, false), 3);
        assert_eq!(reduced_threshold(0.5, 0, 1, true), 2);
    }

    #[test]
    fn excitatory_two_cycle() {
        let net = RegulatoryNetwork::new(vec![
            UpdateRule::signed_threshold(&[(n(1), true)], 1.0),
            UpdateRule::signed_threshold(&[(n(0), true)], 1.0),
        ])
        .unwrap();
        let snet = SignedThresholdNet::new(net).unwrap();
        let inst = build_threshold_tss(&snet, &bits("11")).unwrap();
        assert!(inst.has_edge(0, 1) && inst.has_edge(1, 0));
        assert_eq!(
            solve_exact(&inst, ExactOptions::default()).unwrap().len(),
            1
        );
    }

    #[test]
    fn mixed_sign_rejected() {
        let net = RegulatoryNetwork::new(vec![
            UpdateRule::constant(true),
            UpdateRule::signed_threshold(&[(n(0), true)], 1.0),
            UpdateRule::signed_threshold(&[(n(0), false)], 0.0),
        ])
        .unwrap();
        assert_eq!(
            SignedThresholdNet::new(net),
            Err(ReductionError::NotThreshold(n(0)))
        );
        let net = RegulatoryNetwork::new(vec![
            UpdateRule::signed_threshold(&[], 0.0),
            UpdateRule::signed_threshold(&[(n(0), true)], 1.0),
            UpdateRule::signed_threshold(&[(n(0), false)], 0.0),
        ])
        .unwrap();
        assert_eq!(
            SignedThresholdNet::new(net),
            Err(ReductionError::MixedSignNode(n(0)))
        );
    }

    fn nc(order: &[usize], b: &[bool], a: &[bool], default: bool) -> UpdateRule {
        UpdateRule::NestedCanalyzing {
            order: order.iter().map(|&j| n(j)).collect(),
            canalyzing: b.to_vec(),
            canalyzed: a.to_vec(),
            default,
        }
    }

    #[test]
    fn nc_full_single_aux() {
        // Node 2 reads (x0, x1) with b = (1, 1), a = (1, 0), default 0.
        let net = RegulatoryNetwork::new(vec![
            nc(&[], &[], &[], true),
            nc(&[], &[], &[], false),
            nc(&[0, 1], &[true, true], &[true, false], false),
        ])
        .unwrap();
        let inst = build_nc_full(&net, &bits("101")).unwrap();
        let aux: Vec<usize> = (3..inst.len()).collect();
        assert_eq!(aux.len(), 1);
        assert_eq!(inst.in_edges(aux[0]), &[(0, 1)]);
        assert_eq!(inst.tau(aux[0]), 1);
        assert_eq!(inst.tau(2), 1);
    }

    #[test]
    fn nc_full_default_only_node_is_mandatory() {
        let net = RegulatoryNetwork::new(vec![
            nc(&[], &[], &[], false),
            nc(&[0], &[true], &[false], true),
        ])
        .unwrap();
        let inst = build_nc_full(&net, &bits("01")).unwrap();
        assert!(inst.in_edges(1).is_empty());
        assert!(crate::tss::mandatory_seeds(&inst).contains(&1));
    }

    #[test]
    fn nc_unanimous_ranks() {
        let net = RegulatoryNetwork::new(vec![
            nc(&[], &[], &[], true),
            nc(&[], &[], &[], false),
            nc(&[0, 1], &[true, true], &[true, false], false),
            nc(&[1, 0], &[true, true], &[false, true], false),
        ])
        .unwrap();
        let inst = build_nc_unanimous(&net, &bits("1011")).unwrap();
        assert_eq!(inst.in_edges(2), &[(0, 1)]);
        assert_eq!(inst.tau(2), 1);
        assert_eq!(inst.in_edges(3), &[(0, 1), (1, 1)]);
        assert_eq!(inst.tau(3), 2);
    }

    #[test]
    fn cyclic_negation() {
        let net = RegulatoryNetwork::new(vec![UpdateRule::negation(n(0))]).unwrap();
        let att = Attractor::new(&net, vec![bits("0"), bits("1")]).unwrap();
        let inst = build_cyclic(&net, &att).unwrap();
        assert_eq!(inst.len(), 4);
        // Each copy's auxiliary reads the other copy.
        assert!(
            inst.has_edge(1, 3) && inst.has_edge(0, 2)
                || inst.has_edge(0, 3) && inst.has_edge(1, 2)
        );
        let fixed = Attractor::fixed_point(&net_a(), bits("111")).unwrap();
        assert!(matches!(
            build_cyclic(&net_a(), &fixed),
            Err(ReductionError::InvalidAttractor(_))
        ));
    }

    #[test]
    fn merge_of_single_rules_is_augmented() {
        let x = bits("111");
        assert_eq!(
            merge_probabilistic(&net_a(), &x),
            build_augmented(&net_a(), &x)
        );
    }

    #[test]
    fn merge_copy_and_constant() {
        let rule = UpdateRule::RuleSet(vec![UpdateRule::copy(n(0)), UpdateRule::constant(true)]);
        let (inputs, table) = merged_table(&rule, n(1), true);
        assert_eq!(inputs, vec![n(0)]);
        assert_eq!(table, vec![false, true]);
    }

    #[test]
    fn threshold_merge_takes_max_for_on_nodes() {
        let rule = UpdateRule::RuleSet(vec![
            UpdateRule::signed_threshold(&[(n(0), true), (n(1), true)], 1.0),
            UpdateRule::signed_threshold(&[(n(0), true), (n(1), true)], 2.0),
        ]);
        assert_eq!(merged_threshold(&rule, n(2), true).unwrap(), 2.0);
        assert_eq!(merged_threshold(&rule, n(2), false).unwrap(), 1.0);
    }

    #[test]
    fn baseline_condition() {
        assert!(baseline_implies_target(&net_a(), &[n(0), n(1)]));
        let two =
            RegulatoryNetwork::new(vec![UpdateRule::copy(n(1)), UpdateRule::copy(n(0))]).unwrap();
        assert!(!baseline_implies_target(&two, &[]));
        assert!(baseline_implies_target(&two, &[n(0)]));
    }
}
