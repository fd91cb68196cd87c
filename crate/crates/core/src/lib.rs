//! Exact analysis of the three-player avoidance game "Do Not Generate".
//!
//! Players 1, 2, 3 take turns selecting distinct elements of a finite group.
//! Whoever makes the selected set generate the group loses, the player
//! before them wins, and the remaining player is runner-up.
//!
//! - [`group`], [`lattice`], [`structure`]: groups as Cayley tables, their
//!   subgroup lattices, `d(G)`, nilpotence and Sylow data.
//! - [`solver`], [`brute`]: backward induction over `(subgroup, count)`
//!   states and an uncompressed reference solver.
//! - [`theory`]: closed-form predictions.
//! - [`verify`]: sweeps comparing the two, with CSV/JSON reports.
//! - [`play`]: move-by-move play against the solved table.

pub mod arith;
pub mod bitset;
pub mod brute;
pub mod catalog;
pub mod descriptor;
pub mod error;
pub mod game;
pub mod group;
pub mod lattice;
pub mod play;
pub mod solver;
pub mod structure;
pub mod theory;
pub mod verify;

pub use bitset::ElementSet;
pub use descriptor::{build_group, GroupSpec};
pub use error::{GroupError, SolveError};
pub use game::{Outcome, Rank, Seat};
pub use group::{FiniteGroup, DEFAULT_ORDER_CAP};
pub use lattice::{Subgroup, SubgroupLattice};
pub use solver::{solve, CompressedGameState, MoveClass, SolvedTable};
