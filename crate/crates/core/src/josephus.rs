//! Direct simulation of the every-k-th Josephus elimination.
//!
//! Numbers `1..=n` sit in a circle. Counting starts at 1 and every k-th
//! remaining number is removed, with the count restarting at the number after
//! each removal. The last number standing is recorded as the n-th removal, so
//! an [`EliminationTrace`] always lists all `n` numbers.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ostree::OrderStatSet;

/// Largest admissible `n * k`; products must stay below `2^63`.
pub const MAX_NK: u64 = i64::MAX as u64;

/// Validated circle size and step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JosephusParams {
    n: u64,
    k: u64,
    nk: u64,
}

impl JosephusParams {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!("n must be >= 1, got {n}")));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be >= 2, got {k}")));
        }
        let nk = n
            .checked_mul(k)
            .filter(|&p| p <= MAX_NK)
            .ok_or_else(|| Error::Overflow(format!("n*k = {n}*{k} does not fit below 2^63")))?;
        Ok(Self { n, k, nk })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn nk(&self) -> u64 {
        self.nk
    }

    /// Checks that `m` names a number on the circle.
    pub fn check_member(&self, m: u64) -> Result<()> {
        if m < 1 || m > self.n {
            return Err(Error::InvalidArgument(format!("m must be in 1..={}, got {m}", self.n)));
        }
        Ok(())
    }

    /// Checks that `i` is a valid 1-based removal step.
    pub fn check_step(&self, i: u64) -> Result<()> {
        if i < 1 || i > self.n {
            return Err(Error::InvalidArgument(format!("i must be in 1..={}, got {i}", self.n)));
        }
        Ok(())
    }
}

/// Simulation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Linked circle, walking `k - 1` links per removal: `O(n k)`.
    Naive,
    /// Fenwick-tree rank jumps: `O(n log n)`.
    #[default]
    OrderStat,
}

/// Full removal order of one circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub n: u64,
    pub k: u64,
    pub order: Vec<u64>,
    pub survivor: u64,
    pub rounds: Option<Vec<u64>>,
}

impl EliminationTrace {
    /// 1-based removal step of `m`; the survivor is step `n`.
    pub fn step_of(&self, m: u64) -> Option<u64> {
        self.order.iter().position(|&v| v == m).map(|i| i as u64 + 1)
    }

    /// `n - i` where `m` is the i-th removal (0 for the survivor).
    pub fn jj(&self, m: u64) -> Result<u64> {
        let step = self
            .step_of(m)
            .ok_or_else(|| Error::InvalidArgument(format!("m must be in 1..={}, got {m}", self.n)))?;
        Ok(self.n - step)
    }

    /// `jj(m)` for every `m`, indexed by `m - 1`.
    pub fn jj_table(&self) -> Vec<u64> {
        let mut table = vec![0u64; self.order.len()];
        for (i, &m) in self.order.iter().enumerate() {
            table[m as usize - 1] = self.n - (i as u64 + 1);
        }
        table
    }

    /// CSV with header `i,removed,round`. Rounds are computed if missing.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let labelled;
        let rounds = match &self.rounds {
            Some(r) => r,
            None => {
                labelled = label_rounds(self);
                labelled.rounds.as_ref().expect("labelled")
            }
        };
        writeln!(out, "i,removed,round")?;
        for (i, (m, r)) in self.order.iter().zip(rounds).enumerate() {
            writeln!(out, "{},{},{}", i + 1, m, r)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

/// Simulates with the default engine.
pub fn simulate(n: u64, k: u64) -> Result<EliminationTrace> {
    simulate_with(Engine::default(), n, k)
}

pub fn simulate_with(engine: Engine, n: u64, k: u64) -> Result<EliminationTrace> {
    JosephusParams::new(n, k)?;
    if n > u32::MAX as u64 {
        return Err(Error::Infeasible(format!("cannot materialize a circle of {n} numbers")));
    }
    let order = match engine {
        Engine::Naive => naive_order(n as usize, k),
        Engine::OrderStat => ostree_order(n as usize, k),
    };
    let survivor = *order.last().expect("n >= 1");
    Ok(EliminationTrace { n, k, order, survivor, rounds: None })
}

fn naive_order(n: usize, k: u64) -> Vec<u64> {
    // next[i] is the slot after i on the circle.
    let mut next: Vec<u32> = (1..=n as u32).collect();
    next[n - 1] = 0;
    let mut prev = n - 1;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 1..k {
            prev = next[prev] as usize;
        }
        let victim = next[prev] as usize;
        next[prev] = next[victim];
        order.push(victim as u64 + 1);
    }
    order
}

fn ostree_order(n: usize, k: u64) -> Vec<u64> {
    let mut set = OrderStatSet::full(n);
    let mut order = Vec::with_capacity(n);
    let mut idx = 0usize;
    for remaining in (1..=n).rev() {
        idx = ((idx as u64 + (k - 1) % remaining as u64) % remaining as u64) as usize;
        let victim = set.select(idx).expect("idx < remaining");
        set.remove(victim);
        order.push(victim as u64 + 1);
        if remaining > 1 {
            idx %= remaining - 1;
        }
    }
    order
}

/// `JJ_k(n, m) = n - i` where `m` is the i-th number removed.
pub fn jj_by_definition(n: u64, k: u64, m: u64) -> Result<u64> {
    JosephusParams::new(n, k)?.check_member(m)?;
    simulate(n, k)?.jj(m)
}

/// Assigns a round to each removal. The count walks the remaining numbers in
/// increasing order; a new round starts every time that walk wraps from the
/// highest remaining number back to the lowest. The final number, once alone,
/// is taken on its first visit.
pub fn label_rounds(trace: &EliminationTrace) -> EliminationTrace {
    let n = trace.order.len();
    let k = trace.k;
    let mut set = OrderStatSet::full(n);
    let mut rounds = Vec::with_capacity(n);
    let mut round = 1u64;
    let mut prev: Option<usize> = None;
    for (step, &m) in trace.order.iter().enumerate() {
        let remaining = (n - step) as u64;
        // Walk positions s, s+1, ... in the sorted remainder, where s counts
        // the numbers left of the previous victim.
        let start = prev.map_or(0, |p| set.rank(p) as u64);
        let end = if remaining == 1 { start } else { start + k - 1 };
        let first = start.max(1);
        let wraps = (end / remaining).saturating_sub((first - 1) / remaining);
        round += wraps;
        rounds.push(round);
        let victim = m as usize - 1;
        set.remove(victim);
        prev = Some(victim);
    }
    EliminationTrace { rounds: Some(rounds), ..trace.clone() }
}
