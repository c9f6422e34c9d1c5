//! Maximum Nim with the rule function `floor(x/k)` and its link to the
//! every-k-th Josephus problem: the number `m` on a circle of `n` is removed
//! at step `n - G(nk - m)`, where `G` is the Grundy function of the game.

pub mod bench;
pub mod bridge;
pub mod error;
pub mod grundy;
pub mod josephus;
pub mod ostree;
pub mod play;
pub mod verify;

pub use bridge::{
    elimination_rank, eliminated_at, full_order_fast, inverse_step, survivor_classic, survivor_fast,
};
pub use error::{Error, Result};
pub use grundy::{
    grundy_floor_k, grundy_levine, grundy_oracle, is_p_position, mex, moves, optimal_moves, Oracle,
    RuleFunction,
};
pub use josephus::{jj_by_definition, label_rounds, simulate, simulate_with, EliminationTrace, Engine};
