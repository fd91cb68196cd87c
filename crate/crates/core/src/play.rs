//! Move-by-move play on a solved group, shared by the terminal REPL and the
//! HTTP service. Values come from the compressed table; legality comes from
//! the actual selected set.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::descriptor::GroupSpec;
use crate::error::SolveError;
use crate::game::{Outcome, Rank, Seat};
use crate::group::FiniteGroup;
use crate::lattice::SubgroupLattice;
use crate::solver::{optimal_move, solve_with, CompressedGameState, MoveClass, SolvedTable, TieBreak};

/// A group with its lattice and solved table; immutable and shareable.
#[derive(Debug)]
pub struct SolvedGame {
    pub group: FiniteGroup,
    pub lattice: SubgroupLattice,
    pub table: SolvedTable,
}

impl SolvedGame {
    pub fn new(group: FiniteGroup) -> Result<Self, SolveError> {
        let lattice = SubgroupLattice::build(&group);
        let table = solve_with(&group, &lattice, TieBreak::Canonical)?;
        Ok(SolvedGame { group, lattice, table })
    }

    pub fn from_descriptor(descriptor: &str, cap: usize) -> Result<Self, SolveError> {
        Self::new(GroupSpec::parse(descriptor)?.build(cap)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnnotatedMove {
    pub element: usize,
    /// The mover's final rank if she plays this and everyone plays optimally after.
    pub rank: Rank,
    pub generates: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("the game is over")]
    GameOver,
    #[error("element {0} was already selected")]
    AlreadySelected(usize),
    #[error("element {element} out of range for order {order}")]
    OutOfRange { element: usize, order: usize },
}

/// One game in progress.
#[derive(Clone, Debug)]
pub struct Match {
    game: Arc<SolvedGame>,
    selected: Vec<usize>,
    selected_set: ElementSet,
    subgroup_id: usize,
    outcome: Option<Outcome>,
    /// Table value of the state before the generating move.
    value_before_end: Option<Outcome>,
}

impl Match {
    pub fn new(game: Arc<SolvedGame>) -> Self {
        let n = game.group.order();
        Match {
            game,
            selected: Vec::new(),
            selected_set: ElementSet::new(n),
            subgroup_id: 0,
            outcome: None,
            value_before_end: None,
        }
    }

    pub fn game(&self) -> &SolvedGame {
        &self.game
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn turn(&self) -> Seat {
        Seat::to_move(self.selected.len())
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn value_before_end(&self) -> Option<Outcome> {
        self.value_before_end
    }

    /// `|<selected>|`.
    pub fn subgroup_order(&self) -> usize {
        if self.is_finished() {
            self.game.group.order()
        } else {
            self.game.lattice.get(self.subgroup_id).size()
        }
    }

    pub fn state(&self) -> CompressedGameState {
        CompressedGameState {
            subgroup_id: self.subgroup_id,
            selected: self.selected.len(),
        }
    }

    fn class_of(&self, x: usize) -> MoveClass {
        let lat = &self.game.lattice;
        if lat.get(self.subgroup_id).contains(x) {
            return MoveClass::Stay;
        }
        let target = lat.join_element(&self.game.group, self.subgroup_id, x);
        if target == lat.full_id() {
            MoveClass::Generates
        } else {
            MoveClass::Escalate(target)
        }
    }

    /// Every unselected element with the mover's resulting rank.
    pub fn legal_moves(&self) -> Vec<AnnotatedMove> {
        if self.is_finished() {
            return Vec::new();
        }
        let state = self.state();
        let mover = self.turn();
        self.game
            .group
            .elements()
            .filter(|&x| !self.selected_set.contains(x))
            .map(|x| {
                let class = self.class_of(x);
                let outcome = self
                    .game
                    .table
                    .successor_outcome(state, class)
                    .expect("successor of a reachable state is solved");
                AnnotatedMove {
                    element: x,
                    rank: mover.rank_in(outcome),
                    generates: class == MoveClass::Generates,
                }
            })
            .collect()
    }

    pub fn play(&mut self, x: usize) -> Result<Option<Outcome>, MoveError> {
        if self.is_finished() {
            return Err(MoveError::GameOver);
        }
        let order = self.game.group.order();
        if x >= order {
            return Err(MoveError::OutOfRange { element: x, order });
        }
        if self.selected_set.contains(x) {
            return Err(MoveError::AlreadySelected(x));
        }
        let mover = self.turn();
        let class = self.class_of(x);
        let before = self.game.table.get(self.state()).map(|v| v.outcome);
        self.selected.push(x);
        self.selected_set.insert(x);
        match class {
            MoveClass::Stay => {}
            MoveClass::Escalate(t) => self.subgroup_id = t,
            MoveClass::Generates => {
                self.outcome = Some(Outcome::with_loser(mover));
                self.value_before_end = before;
            }
        }
        Ok(self.outcome)
    }

    /// The engine's choice: the recommended element, or when the mover is
    /// forced to generate, the smallest remaining element.
    pub fn engine_choice(&self) -> Result<usize, MoveError> {
        if self.is_finished() {
            return Err(MoveError::GameOver);
        }
        let g = &self.game;
        match optimal_move(&g.group, &g.lattice, &g.table, self.state(), &self.selected_set) {
            Ok(x) => Ok(x),
            Err(_) => Ok(g
                .group
                .elements()
                .find(|&x| !self.selected_set.contains(x))
                .expect("an unfinished game has unselected elements")),
        }
    }

    pub fn engine_move(&mut self) -> Result<usize, MoveError> {
        let x = self.engine_choice()?;
        self.play(x)?;
        Ok(x)
    }
}
