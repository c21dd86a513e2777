#![allow(dead_code)]

use pinset_core::genlab::{random_network, random_rule, RuleClass};
use pinset_core::{NodeId, RegulatoryNetwork, StateVector, UpdateRule};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weighted_threshold(inputs: &[NodeId], rng: &mut ChaCha8Rng) -> UpdateRule {
    let weights = [1.0, -1.0, 2.5, -0.5, 0.1, 3.0];
    UpdateRule::Threshold {
        inputs: inputs.to_vec(),
        weights: inputs
            .iter()
            .map(|_| *weights.choose(rng).unwrap())
            .collect(),
        tau: [0.0, 1.0, -1.5, 0.25, 2.0][rng.gen_range(0..5)],
    }
}

/// A network touching every rule kind, with unusual names and, half the
/// time, an attractor line.
pub fn random_document(seed: u64) -> (RegulatoryNetwork, Option<Vec<StateVector>>) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=9);
    let base = random_network(n, 3, RuleClass::Mixed, true, &mut r);
    let rules: Vec<UpdateRule> = base
        .rules()
        .iter()
        .map(|rule| {
            let inputs = rule.inputs();
            match r.gen_range(0..6) {
                0 => weighted_threshold(&inputs, &mut r),
                1 => UpdateRule::RuleSet(
                    (0..r.gen_range(2..=3))
                        .map(|_| random_rule(&inputs, RuleClass::Threshold, &mut r))
                        .collect(),
                ),
                2 => UpdateRule::constant(r.gen_bool(0.5)),
                _ => rule.clone(),
            }
        })
        .collect();
    let names = (0..n)
        .map(|i| match i % 3 {
            0 => format!("x{}", i + 1),
            1 => format!("Gene_{i}"),
            _ => format!("p53.a{i}"),
        })
        .collect();
    let net = RegulatoryNetwork::with_names(names, rules).unwrap();
    let attractor = r.gen_bool(0.5).then(|| {
        (0..r.gen_range(1..=3))
            .map(|_| StateVector::from_index(r.gen_range(0..1u64 << n), n))
            .collect()
    });
    (net, attractor)
}
