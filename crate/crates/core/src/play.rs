//! Turn-based text game of Maximum Nim against the optimal engine.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::grundy::{optimal_moves, RuleFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayConfig {
    pub pile: u64,
    pub k: u64,
    pub human_first: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    HumanWins,
    EngineWins,
    /// Input ended before the game did.
    Abandoned,
}

/// Engine policy: the smallest winning removal, else one stone. `None` when
/// no move is legal.
pub fn engine_move(x: u64, f: &RuleFunction) -> Result<Option<u64>> {
    if f.cap(x).min(x) == 0 {
        return Ok(None);
    }
    Ok(Some(optimal_moves(x, f)?.first().copied().unwrap_or(1)))
}

/// Plays one game, reading the human's moves from `input`.
pub fn play<R: BufRead, W: Write>(config: PlayConfig, mut input: R, mut out: W) -> Result<Outcome> {
    let f = RuleFunction::floor_div(config.k)?;
    let io_err = |e: io::Error| Error::InvalidArgument(format!("terminal i/o failed: {e}"));
    let mut pile = config.pile;
    let mut human_turn = config.human_first;
    writeln!(out, "Maximum Nim: removing up to floor(x/{}) stones from a pile of x.", config.k).map_err(io_err)?;
    loop {
        let cap = f.cap(pile).min(pile);
        let who = if human_turn { "You" } else { "Engine" };
        if cap == 0 {
            writeln!(out, "Pile: {pile}. {who} cannot move.").map_err(io_err)?;
            let outcome = if human_turn { Outcome::EngineWins } else { Outcome::HumanWins };
            let msg = if human_turn { "You lose; the engine wins." } else { "The engine loses; you win!" };
            writeln!(out, "{msg}").map_err(io_err)?;
            return Ok(outcome);
        }
        if human_turn {
            let take = loop {
                write!(out, "Pile: {pile}. Remove how many (1..={cap})? ").map_err(io_err)?;
                out.flush().map_err(io_err)?;
                let mut line = String::new();
                if input.read_line(&mut line).map_err(io_err)? == 0 {
                    writeln!(out, "\nInput closed; game abandoned.").map_err(io_err)?;
                    return Ok(Outcome::Abandoned);
                }
                match line.trim().parse::<u64>() {
                    Ok(u) if (1..=cap).contains(&u) => break u,
                    _ => writeln!(out, "Illegal move {:?}; enter a number from 1 to {cap}.", line.trim())
                        .map_err(io_err)?,
                }
            };
            pile -= take;
            writeln!(out, "You remove {take}.").map_err(io_err)?;
        } else {
            let take = engine_move(pile, &f)?.expect("cap > 0");
            pile -= take;
            writeln!(out, "Pile: {}. Engine removes {take}.", pile + take).map_err(io_err)?;
        }
        human_turn = !human_turn;
    }
}
