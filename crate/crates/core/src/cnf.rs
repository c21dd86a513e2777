//! Conjunctive normal forms of update rules.
//!
//! Clauses are the prime implicates of the rule, found by merging the
//! maxterms of its falsifying assignments. The result is canonical: it
//! depends only on the Boolean function, never on how the rule was written.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::network::{NodeId, UpdateRule};

/// Largest fan-in accepted by [`rule_to_cnf`].
pub const MAX_CNF_FAN_IN: usize = 16;

/// A literal: `(j, true)` is `x_j`, `(j, false)` is `¬x_j`.
pub type Literal = (NodeId, bool);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfForm {
    pub clauses: Vec<Vec<Literal>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("fan-in {d} exceeds the conversion bound of {max}", max = MAX_CNF_FAN_IN)]
    FanInTooLarge { d: usize },
    #[error("rule sets must be merged before conversion")]
    RuleSet,
}

impl CnfForm {
    pub fn evaluate(&self, value: impl Fn(NodeId) -> bool) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&(j, pos)| value(j) == pos))
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

/// CNF of a rule over its own inputs.
pub fn rule_to_cnf(rule: &UpdateRule) -> Result<CnfForm, CnfError> {
    if matches!(rule, UpdateRule::RuleSet(_)) {
        return Err(CnfError::RuleSet);
    }
    let inputs = rule.inputs();
    let d = inputs.len();
    if d > MAX_CNF_FAN_IN {
        return Err(CnfError::FanInTooLarge { d });
    }
    let table: Vec<bool> = (0..1usize << d)
        .map(|code| {
            let value = |j: NodeId| {
                let pos = inputs.binary_search(&j).expect("rule input");
                (code >> (d - 1 - pos)) & 1 == 1
            };
            rule.evaluate_with(&value, None).expect("plain rule")
        })
        .collect();
    Ok(table_to_cnf(&inputs, &table))
}

/// CNF of the function tabulated over `inputs` (first input is the most
/// significant bit of the row index).
pub fn table_to_cnf(inputs: &[NodeId], table: &[bool]) -> CnfForm {
    let d = inputs.len();
    debug_assert_eq!(table.len(), 1 << d);
    let full: u32 = if d == 0 { 0 } else { (1u32 << d) - 1 };
    // Implicants of the negated function as (care mask, values) pairs; bit
    // `d - 1 - k` stands for input `k`.
    let mut level: BTreeSet<(u32, u32)> = (0..table.len() as u32)
        .filter(|&code| !table[code as usize])
        .map(|code| (full, code))
        .collect();
    let mut primes: BTreeSet<(u32, u32)> = BTreeSet::new();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        for &(mask, val) in &level {
            let mut bits = mask;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits &= bits - 1;
                if val & b == 0 && level.contains(&(mask, val | b)) {
                    next.insert((mask & !b, val & !b));
                    merged.insert((mask, val));
                    merged.insert((mask, val | b));
                }
            }
        }
        for imp in &level {
            if !merged.contains(imp) {
                primes.insert(*imp);
            }
        }
        level = next;
    }
    let mut clauses: Vec<Vec<Literal>> = primes
        .into_iter()
        .map(|(mask, val)| {
            (0..d)
                .filter(|&k| mask >> (d - 1 - k) & 1 == 1)
                .map(|k| (inputs[k], val >> (d - 1 - k) & 1 == 0))
                .collect()
        })
        .collect();
    clauses.sort();
    CnfForm { clauses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn n(i: usize) -> NodeId {
        NodeId(i)
    }

    fn agrees(rule: &UpdateRule) {
        let cnf = rule_to_cnf(rule).unwrap();
        let inputs = rule.inputs();
        for code in 0..1usize << inputs.len() {
            let value = |j: NodeId| {
                let k = inputs.iter().position(|&x| x == j).unwrap();
                (code >> k) & 1 == 1
            };
            assert_eq!(
                cnf.evaluate(value),
                rule.evaluate_with(&value, None).unwrap()
            );
        }
    }

    #[test]
    fn or_is_one_clause() {
        let cnf = rule_to_cnf(&UpdateRule::or(&[n(0), n(1)])).unwrap();
        assert_eq!(cnf.clauses, vec![vec![(n(0), true), (n(1), true)]]);
    }

    #[test]
    fn and_is_two_unit_clauses() {
        let cnf = rule_to_cnf(&UpdateRule::and(&[n(0), n(1)])).unwrap();
        assert_eq!(cnf.clauses, vec![vec![(n(0), true)], vec![(n(1), true)]]);
    }

    #[test]
    fn constants() {
        assert!(rule_to_cnf(&UpdateRule::constant(true)).unwrap().is_empty());
        assert_eq!(
            rule_to_cnf(&UpdateRule::constant(false)).unwrap().clauses,
            vec![Vec::<Literal>::new()]
        );
    }

    #[test]
    fn negation_and_xor() {
        let neg = rule_to_cnf(&UpdateRule::negation(n(2))).unwrap();
        assert_eq!(neg.clauses, vec![vec![(n(2), false)]]);
        let xor = UpdateRule::from_fn(&[n(0), n(1)], |x| x[0] ^ x[1]);
        assert_eq!(rule_to_cnf(&xor).unwrap().len(), 2);
        agrees(&xor);
    }

    #[test]
    fn other_rule_kinds_agree() {
        agrees(&UpdateRule::signed_threshold(
            &[(n(0), true), (n(1), false), (n(3), true)],
            1.0,
        ));
        agrees(&UpdateRule::NestedCanalyzing {
            order: vec![n(2), n(0), n(1)],
            canalyzing: vec![true, false, true],
            canalyzed: vec![false, true, true],
            default: false,
        });
    }

    #[test]
    fn fan_in_limit() {
        let inputs: Vec<NodeId> = (0..17).map(NodeId).collect();
        assert_eq!(
            rule_to_cnf(&UpdateRule::or(&inputs)),
            Err(CnfError::FanInTooLarge { d: 17 })
        );
        assert_eq!(
            rule_to_cnf(&UpdateRule::RuleSet(vec![UpdateRule::constant(true)])),
            Err(CnfError::RuleSet)
        );
    }
}
