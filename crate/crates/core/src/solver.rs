//! Backward induction over compressed states.
//!
//! All selected elements lie in the subgroup `H` they generate, so the rest
//! of the game only depends on `H` and on how many of its elements are
//! already taken. A state is therefore `(H, k)`; the mover is seat
//! `(k mod 3) + 1`. From `(H, k)` a move either stays inside `H` (there are
//! `|H| - k` such elements), escalates to a larger proper subgroup
//! `<H, x>`, or generates the whole group and loses.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::bitset::ElementSet;
use crate::error::SolveError;
use crate::game::{Outcome, Seat};
use crate::group::FiniteGroup;
use crate::lattice::SubgroupLattice;

/// `(generated subgroup, number of selected elements)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CompressedGameState {
    pub subgroup_id: usize,
    pub selected: usize,
}

impl CompressedGameState {
    pub fn start() -> Self {
        CompressedGameState {
            subgroup_id: 0,
            selected: 0,
        }
    }

    pub fn mover(&self) -> Seat {
        Seat::to_move(self.selected)
    }

    fn validate(&self, lat: &SubgroupLattice) -> Result<(), SolveError> {
        let invalid = SolveError::InvalidState {
            subgroup: self.subgroup_id,
            selected: self.selected,
        };
        if self.subgroup_id >= lat.full_id() {
            return Err(invalid);
        }
        let size = lat.get(self.subgroup_id).size();
        if self.selected > size || (self.selected == 0 && self.subgroup_id != lat.trivial_id()) {
            return Err(invalid);
        }
        Ok(())
    }
}

/// Successor class of a move. The derived order is the tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "target", rename_all = "lowercase")]
pub enum MoveClass {
    Stay,
    Escalate(usize),
    Generates,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MoveOption {
    pub class: MoveClass,
    pub multiplicity: usize,
}

/// For each `x` outside `H`, the lattice id of `<H, x>`, counted per target.
pub fn escalation_counts(g: &FiniteGroup, lat: &SubgroupLattice, h: usize) -> BTreeMap<usize, usize> {
    let sub = lat.get(h);
    let mut by_cyclic: HashMap<usize, usize> = HashMap::new();
    let mut counts = BTreeMap::new();
    for x in g.elements().filter(|&x| !sub.contains(x)) {
        let c = lat.cyclic_id(x);
        let target = *by_cyclic.entry(c).or_insert_with(|| lat.join(g, h, c));
        *counts.entry(target).or_insert(0) += 1;
    }
    counts
}

fn classes_from(counts: &BTreeMap<usize, usize>, stay: usize, full: usize) -> Vec<MoveOption> {
    let mut out = Vec::with_capacity(counts.len() + 1);
    if stay > 0 {
        out.push(MoveOption {
            class: MoveClass::Stay,
            multiplicity: stay,
        });
    }
    for (&target, &multiplicity) in counts {
        out.push(MoveOption {
            class: if target == full {
                MoveClass::Generates
            } else {
                MoveClass::Escalate(target)
            },
            multiplicity,
        });
    }
    out
}

/// Legal moves from `s`, grouped by successor class.
pub fn legal_move_classes(
    g: &FiniteGroup,
    lat: &SubgroupLattice,
    s: CompressedGameState,
) -> Result<Vec<MoveOption>, SolveError> {
    s.validate(lat)?;
    let counts = escalation_counts(g, lat, s.subgroup_id);
    let stay = lat.get(s.subgroup_id).size() - s.selected;
    Ok(classes_from(&counts, stay, lat.full_id()))
}

/// Which of several equally good classes the solver records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Stay first, then the smallest target id, generating last.
    #[default]
    Canonical,
    /// The reverse of canonical; only used to show values do not depend on it.
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StateValue {
    pub outcome: Outcome,
    pub best: MoveClass,
}

/// Value and recommended class of every reachable state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedTable {
    entries: BTreeMap<(usize, usize), StateValue>,
    escalations: BTreeMap<usize, BTreeMap<usize, usize>>,
    full_id: usize,
    final_subgroup: usize,
    total_moves: usize,
}

impl SolvedTable {
    pub fn get(&self, s: CompressedGameState) -> Option<StateValue> {
        self.entries.get(&(s.subgroup_id, s.selected)).copied()
    }

    pub fn outcome(&self) -> Outcome {
        self.entries[&(0, 0)].outcome
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = (CompressedGameState, StateValue)> + '_ {
        self.entries
            .iter()
            .map(|(&(subgroup_id, selected), &v)| (CompressedGameState { subgroup_id, selected }, v))
    }

    /// Escalation targets (with counts) out of a reachable subgroup; the
    /// whole group's id stands for generating moves.
    pub fn escalations(&self, h: usize) -> Option<&BTreeMap<usize, usize>> {
        self.escalations.get(&h)
    }

    /// Move classes from a reachable state, from the cached escalation data.
    pub fn move_classes(&self, lat: &SubgroupLattice, s: CompressedGameState) -> Option<Vec<MoveOption>> {
        let counts = self.escalations.get(&s.subgroup_id)?;
        let stay = lat.get(s.subgroup_id).size().checked_sub(s.selected)?;
        Some(classes_from(counts, stay, self.full_id))
    }

    /// Outcome after the mover at `s` plays a move of class `class`.
    pub fn successor_outcome(&self, s: CompressedGameState, class: MoveClass) -> Option<Outcome> {
        match class {
            MoveClass::Generates => Some(Outcome::with_loser(s.mover())),
            MoveClass::Stay => self.entries.get(&(s.subgroup_id, s.selected + 1)).map(|v| v.outcome),
            MoveClass::Escalate(t) => self.entries.get(&(t, s.selected + 1)).map(|v| v.outcome),
        }
    }

    /// Subgroup whose elements are exhausted on the optimal line of play.
    pub fn final_subgroup(&self) -> usize {
        self.final_subgroup
    }

    /// Number of selections, the generating one included, on the optimal line.
    pub fn total_moves(&self) -> usize {
        self.total_moves
    }

    pub fn to_json(&self, lat: &SubgroupLattice) -> serde_json::Value {
        let states: Vec<serde_json::Value> = self
            .states()
            .map(|(s, v)| {
                serde_json::json!({
                    "subgroup": s.subgroup_id,
                    "subgroupOrder": lat.get(s.subgroup_id).size(),
                    "selected": s.selected,
                    "mover": s.mover(),
                    "loser": v.outcome.loser,
                    "winner": v.outcome.winner(),
                    "best": v.best,
                })
            })
            .collect();
        serde_json::json!({
            "outcome": {
                "loser": self.outcome().loser,
                "winner": self.outcome().winner(),
                "runnerUp": self.outcome().runner_up(),
            },
            "finalSubgroupOrder": lat.get(self.final_subgroup).size(),
            "totalMoves": self.total_moves,
            "states": states,
        })
    }
}

/// Solve the game on `g`, building its subgroup lattice first.
pub fn solve(g: &FiniteGroup) -> Result<(Outcome, SolvedTable), SolveError> {
    let lat = SubgroupLattice::build(g);
    let table = solve_with(g, &lat, TieBreak::Canonical)?;
    Ok((table.outcome(), table))
}

pub fn solve_with(g: &FiniteGroup, lat: &SubgroupLattice, tie: TieBreak) -> Result<SolvedTable, SolveError> {
    if g.order() < 2 {
        return Err(crate::error::GroupError::Trivial.into());
    }
    let full = lat.full_id();

    // Forward pass: reachable states, layer by selection count.
    let mut escalations: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut layers: Vec<BTreeSet<usize>> = vec![BTreeSet::from([lat.trivial_id()])];
    loop {
        let k = layers.len() - 1;
        let mut next = BTreeSet::new();
        for &h in &layers[k] {
            if lat.get(h).size() > k {
                next.insert(h);
            }
            let counts = escalations.entry(h).or_insert_with(|| escalation_counts(g, lat, h));
            next.extend(counts.keys().copied().filter(|&t| t != full));
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }

    // Backward pass.
    let mut entries: BTreeMap<(usize, usize), StateValue> = BTreeMap::new();
    for (k, layer) in layers.iter().enumerate().rev() {
        let mover = Seat::to_move(k);
        for &h in layer {
            let stay = lat.get(h).size() - k;
            let options = classes_from(&escalations[&h], stay, full);
            let value_of = |class: MoveClass| match class {
                MoveClass::Generates => Outcome::with_loser(mover),
                MoveClass::Stay => entries[&(h, k + 1)].outcome,
                MoveClass::Escalate(t) => entries[&(t, k + 1)].outcome,
            };
            let mut ordered: Vec<MoveClass> = options.iter().map(|o| o.class).collect();
            if tie == TieBreak::Reverse {
                ordered.reverse();
            }
            let mut best: Option<StateValue> = None;
            for class in ordered {
                let outcome = value_of(class);
                if best.is_none_or(|b| mover.rank_in(outcome) > mover.rank_in(b.outcome)) {
                    best = Some(StateValue { outcome, best: class });
                }
            }
            entries.insert((h, k), best.expect("every state has a move"));
        }
    }

    // Follow the recommended line to its end.
    let mut s = CompressedGameState::start();
    let (final_subgroup, total_moves) = loop {
        match entries[&(s.subgroup_id, s.selected)].best {
            MoveClass::Generates => break (s.subgroup_id, s.selected + 1),
            MoveClass::Stay => s.selected += 1,
            MoveClass::Escalate(t) => {
                s.subgroup_id = t;
                s.selected += 1;
            }
        }
    };

    Ok(SolvedTable {
        entries,
        escalations,
        full_id: full,
        final_subgroup,
        total_moves,
    })
}

/// A concrete element realizing the recommended class at `s`: the smallest
/// unselected element of that class. `selected` is the actual selected set.
pub fn optimal_move(
    g: &FiniteGroup,
    lat: &SubgroupLattice,
    table: &SolvedTable,
    s: CompressedGameState,
    selected: &ElementSet,
) -> Result<usize, SolveError> {
    s.validate(lat)?;
    let value = table.get(s).ok_or(SolveError::InvalidState {
        subgroup: s.subgroup_id,
        selected: s.selected,
    })?;
    let h = s.subgroup_id;
    let sub = lat.get(h);
    let forced = sub.size() == s.selected
        && table
            .escalations(h)
            .is_none_or(|c| c.keys().all(|&t| t == lat.full_id()));
    if forced {
        return Err(SolveError::Terminal);
    }
    let target = match value.best {
        MoveClass::Stay => {
            return sub
                .members()
                .iter()
                .find(|&x| !selected.contains(x))
                .ok_or(SolveError::InvalidState {
                    subgroup: h,
                    selected: s.selected,
                });
        }
        MoveClass::Escalate(t) => t,
        MoveClass::Generates => lat.full_id(),
    };
    Ok(g.elements()
        .find(|&x| !sub.contains(x) && lat.join_element(g, h, x) == target)
        .expect("recommended class is nonempty"))
}

/// Closed-form value of a state in a maximal subgroup: the remaining
/// `h_order - k` elements are stalled away, then the next seat generates.
pub fn maximal_closed_form(h_order: usize, k: usize, mover: Seat) -> Outcome {
    Outcome::with_loser(mover.advance(h_order - k))
}

/// [`maximal_closed_form`] for a lattice state, rejecting non-maximal subgroups.
pub fn maximal_state_value(lat: &SubgroupLattice, s: CompressedGameState) -> Result<Outcome, SolveError> {
    if s.subgroup_id >= lat.len() || !lat.is_maximal(s.subgroup_id) {
        return Err(SolveError::NotMaximal(s.subgroup_id));
    }
    let size = lat.get(s.subgroup_id).size();
    if s.selected > size {
        return Err(SolveError::InvalidState {
            subgroup: s.subgroup_id,
            selected: s.selected,
        });
    }
    Ok(maximal_closed_form(size, s.selected, s.mover()))
}
