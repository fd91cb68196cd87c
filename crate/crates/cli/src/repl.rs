//! Terminal play.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use dng_core::play::{Match, SolvedGame};
use dng_core::{Outcome, Rank, Seat};

/// How a session ended.
#[derive(Debug, PartialEq, Eq)]
pub enum Ending {
    Finished(Outcome),
    /// Input ran out or the player quit.
    Aborted,
}

fn print_moves(m: &Match, out: &mut impl Write) -> io::Result<()> {
    let moves = m.legal_moves();
    for rank in [Rank::Win, Rank::Second, Rank::Lose] {
        let listed: Vec<String> = moves
            .iter()
            .filter(|a| a.rank == rank)
            .map(|a| {
                if a.generates {
                    format!("{}*", a.element)
                } else {
                    a.element.to_string()
                }
            })
            .collect();
        if !listed.is_empty() {
            writeln!(out, "  {:<7}{}", rank.to_string(), listed.join(" "))?;
        }
    }
    writeln!(out, "  (* generates the group)")
}

/// Plays one game. Seats in `humans` read element indices from `input`;
/// the others play the engine move.
pub fn run(game: Arc<SolvedGame>, humans: &[Seat], input: impl BufRead, out: &mut impl Write) -> io::Result<Ending> {
    let mut lines = input.lines();
    let mut m = Match::new(game);
    let order = m.game().group.order();
    writeln!(out, "group {} (order {order})", m.game().group.descriptor())?;
    while m.outcome().is_none() {
        let seat = m.turn();
        writeln!(
            out,
            "selected: {:?}  subgroup order: {}  {seat} to move",
            m.selected(),
            m.subgroup_order()
        )?;
        let x = if humans.contains(&seat) {
            print_moves(&m, out)?;
            loop {
                write!(out, "{seat}> ")?;
                out.flush()?;
                let Some(line) = lines.next().transpose()? else {
                    writeln!(out)?;
                    writeln!(out, "aborted")?;
                    return Ok(Ending::Aborted);
                };
                let line = line.trim();
                if line == "q" || line == "quit" {
                    writeln!(out, "aborted")?;
                    return Ok(Ending::Aborted);
                }
                match line.parse::<usize>() {
                    Ok(x) => match m.play(x) {
                        Ok(_) => break x,
                        Err(e) => writeln!(out, "illegal move: {e}")?,
                    },
                    Err(_) => writeln!(out, "enter an element index in 0..{order}, or q to quit")?,
                }
            }
        } else {
            let x = m.engine_move().expect("engine moves on an unfinished game");
            writeln!(out, "{seat} (engine) plays {x}")?;
            x
        };
        if let Some(o) = m.outcome() {
            writeln!(out, "{seat} played {x} and generated the group")?;
            writeln!(
                out,
                "{} loses, {} wins, {} is runner-up",
                o.loser,
                o.winner(),
                o.runner_up()
            )?;
        }
    }
    Ok(Ending::Finished(m.outcome().expect("loop exits on a finished game")))
}
