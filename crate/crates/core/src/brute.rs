//! Uncompressed reference solver over raw selected sets.
//!
//! Knows nothing about lattices or compressed states: a position is the
//! exact set of selected elements as a bitmask, and generation is tested by
//! closing that set under the multiplication table.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::game::{Outcome, Seat};
use crate::group::FiniteGroup;

pub const ORACLE_CAP: usize = 16;

struct Oracle<'a> {
    g: &'a FiniteGroup,
    full: u32,
    closures: HashMap<u32, u32>,
    values: HashMap<u32, Outcome>,
}

impl Oracle<'_> {
    fn closure(&mut self, set: u32) -> u32 {
        if let Some(&c) = self.closures.get(&set) {
            return c;
        }
        let n = self.g.order();
        let mut members = set | 1;
        loop {
            let mut grown = members;
            for a in (0..n).filter(|&a| members >> a & 1 == 1) {
                for b in (0..n).filter(|&b| members >> b & 1 == 1) {
                    grown |= 1 << self.g.mul(a, b);
                }
            }
            if grown == members {
                break;
            }
            members = grown;
        }
        self.closures.insert(set, members);
        members
    }

    fn value(&mut self, selected: u32) -> Outcome {
        if let Some(&v) = self.values.get(&selected) {
            return v;
        }
        let mover = Seat::to_move(selected.count_ones() as usize);
        let mut best: Option<Outcome> = None;
        for x in 0..self.g.order() {
            if selected >> x & 1 == 1 {
                continue;
            }
            let next = selected | 1 << x;
            let outcome = if self.closure(next) == self.full {
                Outcome::with_loser(mover)
            } else {
                self.value(next)
            };
            if best.is_none_or(|b| mover.rank_in(outcome) > mover.rank_in(b)) {
                best = Some(outcome);
            }
        }
        let v = best.expect("a nongenerating position always has an unselected element");
        self.values.insert(selected, v);
        v
    }
}

/// Solve the game by exhaustive search over selected sets; `|G| <= 16`.
pub fn brute_solve(g: &FiniteGroup) -> Result<Outcome, SolveError> {
    let n = g.order();
    if n > ORACLE_CAP {
        return Err(SolveError::OracleCap {
            cap: ORACLE_CAP,
            order: n,
        });
    }
    let mut oracle = Oracle {
        g,
        full: ((1u64 << n) - 1) as u32,
        closures: HashMap::new(),
        values: HashMap::new(),
    };
    Ok(oracle.value(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, make_dihedral};

    #[test]
    fn small_cyclic() {
        assert_eq!(brute_solve(&make_cyclic(2).unwrap()).unwrap().winner(), Seat::ONE);
        assert_eq!(brute_solve(&make_cyclic(4).unwrap()).unwrap().winner(), Seat::TWO);
        assert_eq!(brute_solve(&make_cyclic(9).unwrap()).unwrap().winner(), Seat::THREE);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            brute_solve(&make_dihedral(9).unwrap()),
            Err(SolveError::OracleCap { cap: 16, order: 18 })
        ));
    }
}
