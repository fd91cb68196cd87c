//! In-memory session store.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use dng_core::catalog::catalog;
use dng_core::play::{AnnotatedMove, Match, MoveError, SolvedGame};
use dng_core::{Outcome, Seat, SolveError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Controller {
    Human,
    Engine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    InProgress,
    Finished,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OutcomeView {
    pub loser: Seat,
    pub winner: Seat,
    pub runner_up: Seat,
}

impl From<Outcome> for OutcomeView {
    fn from(o: Outcome) -> Self {
        OutcomeView {
            loser: o.loser,
            winner: o.winner(),
            runner_up: o.runner_up(),
        }
    }
}

/// What clients see.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: String,
    pub descriptor: String,
    pub order: usize,
    pub seats: [Controller; 3],
    pub selected: Vec<usize>,
    pub subgroup_order: usize,
    pub turn: Seat,
    pub status: Status,
    pub legal_moves: Vec<AnnotatedMove>,
    pub outcome: Option<OutcomeView>,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Group(#[from] SolveError),
    #[error("no game with id {0}")]
    NotFound(String),
    #[error("it is {0}'s turn and that seat is engine-controlled")]
    NotHumanTurn(Seat),
    #[error(transparent)]
    Move(#[from] MoveError),
}

pub struct Session {
    id: String,
    seats: [Controller; 3],
    game: Match,
}

impl Session {
    fn controller(&self, seat: Seat) -> Controller {
        self.seats[usize::from(seat.number() - 1)]
    }

    /// Let engine seats move until a human is on turn or the game ends.
    fn run_engines(&mut self) {
        while !self.game.is_finished() && self.controller(self.game.turn()) == Controller::Engine {
            self.game
                .engine_move()
                .expect("engine moves on an unfinished game are legal");
        }
    }

    pub fn view(&self) -> SessionView {
        let g = self.game.game();
        SessionView {
            id: self.id.clone(),
            descriptor: g.group.descriptor().to_string(),
            order: g.group.order(),
            seats: self.seats,
            selected: self.game.selected().to_vec(),
            subgroup_order: self.game.subgroup_order(),
            turn: self.game.turn(),
            status: if self.game.is_finished() {
                Status::Finished
            } else {
                Status::InProgress
            },
            legal_moves: self.game.legal_moves(),
            outcome: self.game.outcome().map(OutcomeView::from),
        }
    }

    pub fn game(&self) -> &Match {
        &self.game
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotEntry {
    id: String,
    descriptor: String,
    seats: [Controller; 3],
    selected: Vec<usize>,
}

/// Sessions keyed by id. Each session has its own lock, so requests to
/// one game are serialized while different games proceed independently.
pub struct Store {
    order_cap: usize,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    solved: Mutex<HashMap<String, Arc<SolvedGame>>>,
}

fn fresh_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

impl Store {
    pub fn new(order_cap: usize) -> Self {
        Store {
            order_cap,
            sessions: RwLock::new(HashMap::new()),
            solved: Mutex::new(HashMap::new()),
        }
    }

    pub fn catalog(&self) -> Vec<String> {
        catalog().into_iter().filter(|d| !d.starts_with("table:")).collect()
    }

    /// Solved games are shared across sessions on the same descriptor.
    fn solved(&self, descriptor: &str) -> Result<Arc<SolvedGame>, SolveError> {
        if let Some(g) = self.solved.lock().unwrap().get(descriptor) {
            return Ok(g.clone());
        }
        let g = Arc::new(SolvedGame::from_descriptor(descriptor, self.order_cap)?);
        self.solved
            .lock()
            .unwrap()
            .entry(descriptor.to_string())
            .or_insert_with(|| g.clone());
        Ok(g)
    }

    fn insert(&self, session: Session) -> SessionView {
        let view = session.view();
        self.sessions
            .write()
            .unwrap()
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        view
    }

    pub fn create(&self, descriptor: &str, seats: [Controller; 3]) -> Result<SessionView, SessionError> {
        let game = self.solved(descriptor)?;
        let mut session = Session {
            id: fresh_id(),
            seats,
            game: Match::new(game),
        };
        session.run_engines();
        Ok(self.insert(session))
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn view(&self, id: &str) -> Result<SessionView, SessionError> {
        Ok(self.get(id)?.lock().unwrap().view())
    }

    /// A human move followed by any engine replies.
    pub fn play(&self, id: &str, element: usize) -> Result<SessionView, SessionError> {
        let handle = self.get(id)?;
        let mut session = handle.lock().unwrap();
        if session.game.is_finished() {
            return Err(MoveError::GameOver.into());
        }
        let turn = session.game.turn();
        if session.controller(turn) != Controller::Human {
            return Err(SessionError::NotHumanTurn(turn));
        }
        session.game.play(element)?;
        session.run_engines();
        Ok(session.view())
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn save_snapshot(&self, path: &Path) -> std::io::Result<()> {
        let mut entries: Vec<SnapshotEntry> = self
            .sessions
            .read()
            .unwrap()
            .values()
            .map(|s| {
                let s = s.lock().unwrap();
                SnapshotEntry {
                    id: s.id.clone(),
                    descriptor: s.game.game().group.descriptor().to_string(),
                    seats: s.seats,
                    selected: s.game.selected().to_vec(),
                }
            })
            .collect();
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        std::fs::write(path, serde_json::to_vec_pretty(&entries)?)
    }

    /// Replays every saved session. Returns how many were restored.
    pub fn load_snapshot(&self, path: &Path) -> Result<usize, Box<dyn std::error::Error + Send + Sync>> {
        let entries: Vec<SnapshotEntry> = serde_json::from_slice(&std::fs::read(path)?)?;
        let count = entries.len();
        for e in entries {
            let mut game = Match::new(self.solved(&e.descriptor)?);
            for x in e.selected {
                game.play(x)?;
            }
            self.insert(Session {
                id: e.id,
                seats: e.seats,
                game,
            });
        }
        Ok(count)
    }
}
