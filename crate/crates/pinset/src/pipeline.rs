//! Named reductions and solvers, shared by the CLI and the experiment
//! harness.

use std::fmt;
use std::str::FromStr;

use pinset_core::reduction::{
    build_augmented, build_cyclic, build_nc_full, build_nc_unanimous, build_threshold_tss,
    merge_probabilistic, merge_threshold, NodeClass, ReductionError, SignedThresholdNet,
};
use pinset_core::structured::{
    cactusify, greedy_clique_partition, solve_block_cactus, solve_clique, solve_cycle_baseline,
    solve_hierarchical, solve_unanimous_fvs, CliquePartition, HierarchySpec, StructError,
};
use pinset_core::tss::{
    cascade, realize_on_originals, solve_exact, solve_greedy, CascadeTrace, ExactOptions,
};
use pinset_core::{
    Attractor, NetError, NodeId, RegulatoryNetwork, StateVector, TargetSet, TssError, TssInstance,
};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Tss(#[from] TssError),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    General,
    Threshold,
    Nc,
    NcUnanimous,
    Cyclic,
    Probabilistic,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 6] = [
        ReductionKind::General,
        ReductionKind::Threshold,
        ReductionKind::Nc,
        ReductionKind::NcUnanimous,
        ReductionKind::Cyclic,
        ReductionKind::Probabilistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::General => "general",
            ReductionKind::Threshold => "threshold",
            ReductionKind::Nc => "nc",
            ReductionKind::NcUnanimous => "nc-unanimous",
            ReductionKind::Cyclic => "cyclic",
            ReductionKind::Probabilistic => "probabilistic",
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown reduction '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Greedy,
    Clique,
    Cactus,
    Hierarchy,
    NcFvs,
    CycleBaseline,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Exact,
        Method::Greedy,
        Method::Clique,
        Method::Cactus,
        Method::Hierarchy,
        Method::NcFvs,
        Method::CycleBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::Clique => "clique",
            Method::Cactus => "cactus",
            Method::Hierarchy => "hierarchy",
            Method::NcFvs => "nc-fvs",
            Method::CycleBaseline => "cycle-baseline",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// A reduced instance, with node classes when it came from a signed
/// threshold network.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub instance: TssInstance,
    pub classes: Option<Vec<NodeClass>>,
}

fn fixed_point(
    attractor: &[StateVector],
    kind: ReductionKind,
) -> Result<&StateVector, PipelineError> {
    match attractor {
        [x] => Ok(x),
        _ => Err(PipelineError::Usage(format!(
            "reduction '{kind}' needs a fixed point, got {} states",
            attractor.len()
        ))),
    }
}

pub fn reduce(
    net: &RegulatoryNetwork,
    attractor: &[StateVector],
    kind: ReductionKind,
) -> Result<Reduced, PipelineError> {
    if attractor.iter().any(|s| s.len() != net.len()) {
        return Err(PipelineError::Usage(format!(
            "attractor states must have {} bits",
            net.len()
        )));
    }
    let plain = |instance| Reduced {
        instance,
        classes: None,
    };
    Ok(match kind {
        ReductionKind::General => plain(build_augmented(net, fixed_point(attractor, kind)?)?),
        ReductionKind::Threshold => {
            let x = fixed_point(attractor, kind)?;
            let snet = SignedThresholdNet::new(net.clone())?;
            let classes = snet.classes(x);
            let instance = if net.alternatives() > 1 {
                merge_threshold(net, x)?
            } else {
                build_threshold_tss(&snet, x)?
            };
            Reduced {
                instance,
                classes: Some(classes),
            }
        }
        ReductionKind::Nc => plain(build_nc_full(net, fixed_point(attractor, kind)?)?),
        ReductionKind::NcUnanimous => {
            plain(build_nc_unanimous(net, fixed_point(attractor, kind)?)?)
        }
        ReductionKind::Cyclic => {
            let att = Attractor::new(net, attractor.to_vec())
                .map_err(|e| ReductionError::InvalidAttractor(e.to_string()))?;
            plain(build_cyclic(net, &att)?)
        }
        ReductionKind::Probabilistic => {
            plain(merge_probabilistic(net, fixed_point(attractor, kind)?)?)
        }
    })
}

/// Extra solver parameters.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub hierarchy: Option<HierarchySpec>,
    pub exact: ExactOptions,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Seeded instance nodes; for the cycle baseline, network nodes.
    pub set: TargetSet,
    /// Regulatory nodes to pin.
    pub inputs: Vec<NodeId>,
    /// Cascade from the set on the instance.
    pub certificate: CascadeTrace,
    pub note: Option<String>,
}

pub fn solve(
    net: Option<&RegulatoryNetwork>,
    reduced: &Reduced,
    method: Method,
    opts: &SolveOptions,
) -> Result<Solution, PipelineError> {
    let inst = &reduced.instance;
    let classes = reduced.classes.as_deref();
    let mut note = None;
    let set = match method {
        Method::Exact => solve_exact(inst, opts.exact)?,
        Method::Greedy => solve_greedy(inst, true)?,
        Method::Clique => solve_clique(inst, classes)?,
        Method::Cactus => {
            let blocks = greedy_clique_partition(inst);
            match solve_block_cactus(inst, &CliquePartition::new(blocks.clone()), classes) {
                Ok(s) => s,
                Err(StructError::NotATree(_)) | Err(StructError::NotACliqueInstance(_)) => {
                    let c = cactusify(inst, &blocks)?;
                    note = Some(format!(
                        "instance made a block cactus: {} arcs added, {} removed",
                        c.added.len(),
                        c.removed.len()
                    ));
                    solve_block_cactus(&c.instance, &c.partition, None)?
                }
                Err(e) => return Err(e.into()),
            }
        }
        Method::Hierarchy => {
            let spec = opts
                .hierarchy
                .ok_or_else(|| PipelineError::Usage("hierarchy needs --k and --depth".into()))?;
            solve_hierarchical(inst, spec)?
        }
        Method::NcFvs => solve_unanimous_fvs(inst),
        Method::CycleBaseline => {
            let net =
                net.ok_or_else(|| PipelineError::Usage("cycle-baseline needs a network".into()))?;
            let set = solve_cycle_baseline(net);
            let inputs = set.members.iter().map(|&v| NodeId(v)).collect();
            // The network nodes are the first instance nodes of the fixed
            // point reductions.
            let seed: Vec<usize> = set
                .members
                .iter()
                .copied()
                .filter(|&v| v < inst.len())
                .collect();
            return Ok(Solution {
                certificate: cascade(inst, &seed),
                set,
                inputs,
                note,
            });
        }
    };
    // Structured solvers may seed auxiliary nodes or a single phase of a
    // node; pinning realizes whole regulatory nodes only.
    let realized = realize_on_originals(inst, &set.members)?;
    if realized != set {
        let extra = format!(
            "seed set rewritten onto regulatory nodes ({} -> {} seeds)",
            set.len(),
            realized.len()
        );
        note = Some(match note {
            Some(n) => format!("{n}; {extra}"),
            None => extra,
        });
    }
    let set = realized;
    let inputs = set.inputs(inst);
    Ok(Solution {
        certificate: cascade(inst, &set.members),
        set,
        inputs,
        note,
    })
}
