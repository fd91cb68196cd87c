//! Seats, outcomes and the per-seat ranking of outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A player position. Turn order is 1 → 2 → 3 → 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Seat(u8);

impl Seat {
    pub const ONE: Seat = Seat(1);
    pub const TWO: Seat = Seat(2);
    pub const THREE: Seat = Seat(3);
    pub const ALL: [Seat; 3] = [Seat::ONE, Seat::TWO, Seat::THREE];

    pub fn new(n: u8) -> Option<Seat> {
        (1..=3).contains(&n).then_some(Seat(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn next(self) -> Seat {
        Seat(self.0 % 3 + 1)
    }

    pub fn prev(self) -> Seat {
        Seat((self.0 + 1) % 3 + 1)
    }

    /// The seat `turns` moves after this one.
    pub fn advance(self, turns: usize) -> Seat {
        Seat(((self.0 as usize - 1 + turns) % 3) as u8 + 1)
    }

    /// Seat to move after `selected` elements have been chosen.
    pub fn to_move(selected: usize) -> Seat {
        Seat::ONE.advance(selected)
    }

    /// This seat's finishing rank when `outcome` occurs.
    pub fn rank_in(self, outcome: Outcome) -> Rank {
        if self == outcome.loser {
            Rank::Lose
        } else if self == outcome.winner() {
            Rank::Win
        } else {
            Rank::Second
        }
    }
}

impl TryFrom<u8> for Seat {
    type Error = String;
    fn try_from(n: u8) -> Result<Self, Self::Error> {
        Seat::new(n).ok_or_else(|| format!("seat must be 1, 2 or 3, got {n}"))
    }
}

impl From<Seat> for u8 {
    fn from(s: Seat) -> u8 {
        s.0
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Finishing rank from one seat's point of view; ordered worst to best.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Rank {
    Lose,
    Second,
    Win,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rank::Lose => "LOSE",
            Rank::Second => "SECOND",
            Rank::Win => "WIN",
        })
    }
}

/// A finished game, determined by who generated the group. The seat that
/// moved just before the loser (cyclically) wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub loser: Seat,
}

impl Outcome {
    pub fn with_loser(loser: Seat) -> Self {
        Outcome { loser }
    }

    pub fn winner(self) -> Seat {
        self.loser.prev()
    }

    pub fn runner_up(self) -> Seat {
        self.loser.next()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "winner: {}, runner-up: {}, loser: {}",
            self.winner(),
            self.runner_up(),
            self.loser
        )
    }
}
