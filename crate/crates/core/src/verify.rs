//! Simulation-based confirmation that a pinning set drives a network to its
//! attractor: exhaustive over initial states for small networks, seeded
//! Monte Carlo otherwise, under synchronous, asynchronous and stochastic
//! schedules.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{Attractor, InputSet, NetError, NodeId, RegulatoryNetwork};
use crate::state::StateVector;

/// Largest number of free nodes enumerated by exhaustive verification.
pub const MAX_EXHAUSTIVE_FREE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// All nodes update together.
    Sync,
    /// One uniformly drawn node updates per step.
    AsyncUniform,
    /// Nodes update one at a time in index order.
    RoundRobin,
    /// All nodes update together, each under its own uniformly drawn
    /// alternative.
    StochasticUniform,
}

/// Which initial states are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialPolicy {
    /// Only states that already agree with the pins.
    #[default]
    AgreeWithPins,
    /// Any state; pins take effect from the first update on.
    AnyState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub initial: StateVector,
    /// Node drawn at each step (asynchronous), or the `n` alternatives drawn
    /// at each step (stochastic); empty for synchronous runs.
    pub schedule: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: Mode,
    pub trials: u64,
    pub converged: u64,
    pub max_steps_observed: usize,
    /// First failing trial, present iff `converged < trials`.
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn all_converged(&self) -> bool {
        self.converged == self.trials
    }

    fn record(&mut self, ok: bool, steps: usize, failure: impl FnOnce() -> Counterexample) {
        self.trials += 1;
        self.max_steps_observed = self.max_steps_observed.max(steps);
        if ok {
            self.converged += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(failure());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{free} free nodes exceed the exhaustive bound of {max}", max = MAX_EXHAUSTIVE_FREE)]
    TooLarge { free: usize },
    #[error("schedule needs a fixed-point target")]
    NeedsFixedPoint,
    #[error(transparent)]
    Net(#[from] NetError),
}

fn empty_report(mode: Mode) -> VerificationReport {
    VerificationReport {
        mode,
        trials: 0,
        converged: 0,
        max_steps_observed: 0,
        counterexample: None,
    }
}

fn free_nodes(n: usize, pins: &InputSet, policy: InitialPolicy) -> Vec<usize> {
    (0..n)
        .filter(|&i| policy == InitialPolicy::AnyState || pins.get(NodeId(i)).is_none())
        .collect()
}

/// Synchronous run from `initial`: whether its eventual cycle is the target
/// attractor (up to rotation), and how many steps the run took.
fn sync_run(
    net: &RegulatoryNetwork,
    target: &Attractor,
    pins: &InputSet,
    initial: &StateVector,
    horizon: usize,
) -> (bool, usize) {
    let mut state = initial.clone();
    let mut seen: BTreeMap<StateVector, usize> = BTreeMap::new();
    let mut trail: Vec<StateVector> = Vec::new();
    for step in 0..=horizon {
        if let Some(&first) = seen.get(&state) {
            return (target.matches_up_to_rotation(&trail[first..]), step);
        }
        seen.insert(state.clone(), step);
        trail.push(state.clone());
        state = net.step_synchronous(&state, pins);
    }
    (false, horizon)
}

/// Tries every initial state that the policy allows. The default horizon is
/// `2^free + p` steps.
pub fn verify_exhaustive(
    net: &RegulatoryNetwork,
    target: &Attractor,
    pins: &InputSet,
    horizon: Option<usize>,
    policy: InitialPolicy,
) -> Result<VerificationReport, VerifyError> {
    let free = free_nodes(net.len(), pins, policy);
    if free.len() > MAX_EXHAUSTIVE_FREE {
        return Err(VerifyError::TooLarge { free: free.len() });
    }
    let horizon = horizon.unwrap_or((1usize << free.len()) + target.period());
    let mut base = StateVector::zeros(net.len());
    pins.apply(&mut base);
    let mut report = empty_report(Mode::Exhaustive);
    for code in 0..1u64 << free.len() {
        let mut initial = base.clone();
        for (k, &i) in free.iter().enumerate() {
            initial.set(i, (code >> (free.len() - 1 - k)) & 1 == 1);
        }
        let (ok, steps) = sync_run(net, target, pins, &initial, horizon);
        report.record(ok, steps, || Counterexample {
            initial: initial.clone(),
            schedule: Vec::new(),
        });
    }
    Ok(report)
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_initial(
    rng: &mut ChaCha8Rng,
    n: usize,
    pins: &InputSet,
    policy: InitialPolicy,
) -> StateVector {
    let mut s = StateVector::zeros(n);
    for i in 0..n {
        s.set(i, rng.gen::<bool>());
    }
    if policy == InitialPolicy::AgreeWithPins {
        pins.apply(&mut s);
    }
    s
}

/// Seeded random trials. Synchronous trials check the eventual cycle;
/// asynchronous and stochastic trials succeed once the (absorbing) fixed
/// point is reached within `horizon` steps (default `64 n`).
#[allow(clippy::too_many_arguments)]
pub fn verify_monte_carlo(
    net: &RegulatoryNetwork,
    target: &Attractor,
    pins: &InputSet,
    schedule: Schedule,
    trials: u64,
    seed: u64,
    horizon: Option<usize>,
    policy: InitialPolicy,
) -> Result<VerificationReport, VerifyError> {
    let n = net.len();
    let horizon = horizon.unwrap_or(64 * n.max(1));
    if schedule != Schedule::Sync && target.period() != 1 {
        return Err(VerifyError::NeedsFixedPoint);
    }
    let goal = &target.states()[0];
    let mut report = empty_report(Mode::MonteCarlo);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let initial = random_initial(&mut rng, n, pins, policy);
        if schedule == Schedule::Sync {
            let (ok, steps) = sync_run(net, target, pins, &initial, horizon);
            report.record(ok, steps, || Counterexample {
                initial: initial.clone(),
                schedule: Vec::new(),
            });
            continue;
        }
        let mut state = initial.clone();
        let mut drawn = Vec::new();
        let mut steps = 0;
        while &state != goal && steps < horizon {
            state = match schedule {
                Schedule::AsyncUniform => {
                    let i = rng.gen_range(0..n);
                    drawn.push(i);
                    net.step_asynchronous(&state, pins, NodeId(i))?
                }
                Schedule::RoundRobin => {
                    let i = steps % n;
                    drawn.push(i);
                    net.step_asynchronous(&state, pins, NodeId(i))?
                }
                Schedule::StochasticUniform => {
                    let start = drawn.len();
                    for rule in net.rules() {
                        drawn.push(rng.gen_range(0..rule.alternatives()));
                    }
                    net.step_with_choices(&state, pins, &drawn[start..])?
                }
                Schedule::Sync => unreachable!(),
            };
            steps += 1;
        }
        let ok = &state == goal;
        report.record(ok, steps, || Counterexample {
            initial,
            schedule: drawn,
        });
    }
    Ok(report)
}

/// How initial states are chosen for [`verify_cyclic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Convergence to a cyclic attractor with pinned genes replaying it: at time
/// `t` a pinned gene holds its value in state `t mod p`. Initial states agree
/// with the first attractor state on the pinned genes. A run converges when
/// its eventual cycle lists the attractor states in order, up to rotation.
pub fn verify_cyclic(
    net: &RegulatoryNetwork,
    target: &Attractor,
    genes: &[NodeId],
    sampling: Sampling,
    horizon: Option<usize>,
) -> Result<VerificationReport, VerifyError> {
    let n = net.len();
    let p = target.period();
    let states = target.states();
    let pins_at = |phase: usize| InputSet::from_target(&states[phase % p], genes.iter().copied());
    let phases: Vec<InputSet> = (0..p).map(pins_at).collect();
    let free: Vec<usize> = (0..n).filter(|i| !genes.contains(&NodeId(*i))).collect();
    let horizon = horizon.unwrap_or_else(|| {
        if free.len() < 40 {
            p * ((1usize << free.len()) + 1)
        } else {
            64 * n * p
        }
    });
    let run = |initial: &StateVector| -> (bool, usize) {
        let mut state = initial.clone();
        let mut seen: BTreeMap<(StateVector, usize), usize> = BTreeMap::new();
        let mut trail: Vec<StateVector> = Vec::new();
        for t in 0..=horizon {
            let key = (state.clone(), t % p);
            if let Some(&first) = seen.get(&key) {
                let cycle = &trail[first..];
                let ok = (0..p).any(|shift| {
                    cycle
                        .iter()
                        .enumerate()
                        .all(|(l, s)| *s == states[(l + shift) % p])
                });
                return (ok, t);
            }
            seen.insert(key, t);
            trail.push(state.clone());
            state = net.step_synchronous(&state, &phases[(t + 1) % p]);
        }
        (false, horizon)
    };
    let mut base = StateVector::zeros(n);
    phases[0].apply(&mut base);
    match sampling {
        Sampling::Exhaustive => {
            if free.len() > MAX_EXHAUSTIVE_FREE {
                return Err(VerifyError::TooLarge { free: free.len() });
            }
            let mut report = empty_report(Mode::Exhaustive);
            for code in 0..1u64 << free.len() {
                let mut initial = base.clone();
                for (k, &i) in free.iter().enumerate() {
                    initial.set(i, (code >> (free.len() - 1 - k)) & 1 == 1);
                }
                let (ok, steps) = run(&initial);
                report.record(ok, steps, || Counterexample {
                    initial: initial.clone(),
                    schedule: Vec::new(),
                });
            }
            Ok(report)
        }
        Sampling::MonteCarlo { trials, seed } => {
            let mut report = empty_report(Mode::MonteCarlo);
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial);
                let initial = random_initial(&mut rng, n, &phases[0], InitialPolicy::AgreeWithPins);
                let (ok, steps) = run(&initial);
                report.record(ok, steps, || Counterexample {
                    initial: initial.clone(),
                    schedule: Vec::new(),
                });
            }
            Ok(report)
        }
    }
}
