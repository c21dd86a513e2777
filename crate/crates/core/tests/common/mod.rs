#![allow(dead_code)]

use pinset_core::genlab::{random_network, RuleClass};
use pinset_core::{RegulatoryNetwork, StateVector, TssInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain fixpoint iteration straight from the definition, over a bitmask seed.
pub fn brute_covers(inst: &TssInstance, seed: u64) -> bool {
    let m = inst.len();
    let mut active: Vec<bool> = (0..m).map(|v| seed >> v & 1 == 1).collect();
    loop {
        let mut changed = false;
        for v in 0..m {
            if active[v] {
                continue;
            }
            let pressure: i64 = inst
                .in_edges(v)
                .iter()
                .filter(|&&(u, _)| active[u])
                .map(|&(_, k)| k as i64)
                .sum();
            if pressure >= inst.tau(v) {
                active[v] = true;
                changed = true;
            }
        }
        if !changed {
            return active.iter().all(|&a| a);
        }
    }
}

/// Smallest target set size over all subsets of `allowed`.
pub fn brute_minimum(inst: &TssInstance, allowed: u64) -> Option<u32> {
    let m = inst.len();
    (0u64..1 << m)
        .filter(|s| s & !allowed == 0)
        .filter(|&s| brute_covers(inst, s))
        .map(|s| s.count_ones())
        .min()
}

pub fn random_tss(rng: &mut ChaCha8Rng, max_m: usize) -> TssInstance {
    let m = rng.gen_range(1..=max_m);
    let density = rng.gen_range(0.1..0.6);
    let mut inst = TssInstance::plain(vec![0; m]);
    for u in 0..m {
        for v in 0..m {
            if rng.gen_bool(density) {
                inst.add_edges(u, v, rng.gen_range(1..=2));
            }
        }
    }
    for v in 0..m {
        let d = inst.in_degree(v) as i64;
        inst.set_tau(v, rng.gen_range(-1..=d + 1));
    }
    inst
}

/// Random network with at least one fixed point, and its smallest one.
pub fn net_with_fixed_point(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_in: usize,
    class: RuleClass,
    self_loops: bool,
) -> (RegulatoryNetwork, StateVector) {
    loop {
        let net = random_network(n, max_in, class, self_loops, rng);
        if let Some(x) = net.find_fixed_points(1).unwrap().into_iter().next() {
            return (net, x);
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
