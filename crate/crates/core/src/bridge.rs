//! Josephus queries answered through Maximum Nim Grundy values.
//!
//! With `G` the Grundy function of the rule `floor(x/k)`, the number `m` is
//! removed at step `n - G(nk - m)`. Ranks therefore cost one descent of the
//! floor-k recursion. The inverse direction climbs the same recursion: start
//! from the multiple of `k` whose Grundy value is `n - i`, then take the unique
//! non-multiple preimage under `x -> x - floor(x/k) - 1` until the chain enters
//! the window `[nk - n, nk - 1]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grundy::floor_k_chain;
use crate::josephus::JosephusParams;

/// Which question a [`BridgeQueryResult`] answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeQuery {
    /// Step at which `m` is removed.
    Rank { m: u64 },
    /// Number removed at step `i`.
    At { i: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BridgeQueryResult {
    pub n: u64,
    pub k: u64,
    pub query: BridgeQuery,
    pub answer: u64,
    /// Recursion steps taken, up or down.
    pub grundy_chain_length: u64,
}

/// The rank query with its chain length.
pub fn rank_query(n: u64, k: u64, m: u64) -> Result<BridgeQueryResult> {
    let params = JosephusParams::new(n, k)?;
    params.check_member(m)?;
    let (g, steps) = floor_k_chain(params.nk() - m, k)?;
    if g >= n {
        return Err(Error::InternalInvariant(format!("G({}) = {g} is not below n = {n}", params.nk() - m)));
    }
    Ok(BridgeQueryResult { n, k, query: BridgeQuery::Rank { m }, answer: n - g, grundy_chain_length: steps })
}

/// 1-based step at which `m` is removed; the survivor has rank `n`.
pub fn elimination_rank(n: u64, k: u64, m: u64) -> Result<u64> {
    rank_query(n, k, m).map(|r| r.answer)
}

/// The unique `x` with `x % k != 0` and `x - floor(x/k) - 1 = y`.
pub fn inverse_step(y: u64, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be >= 2, got {k}")));
    }
    // Writing x = qk + r with 1 <= r < k gives y = q(k-1) + r - 1.
    let q = y / (k - 1);
    let r = y % (k - 1) + 1;
    q.checked_mul(k)
        .and_then(|v| v.checked_add(r))
        .ok_or_else(|| Error::Overflow(format!("inverse step of {y} for k = {k}")))
}

/// The inverse query with its chain length.
pub fn at_query(n: u64, k: u64, i: u64) -> Result<BridgeQueryResult> {
    let params = JosephusParams::new(n, k)?;
    params.check_step(i)?;
    let nk = params.nk();
    let low = nk - n;
    // (n - i) * k <= nk - k, so this never overflows.
    let mut x = (n - i) * k;
    let mut steps = 0u64;
    while x < low {
        x = inverse_step(x, k)?;
        steps += 1;
    }
    if x >= nk {
        return Err(Error::InternalInvariant(format!(
            "chain for n={n}, k={k}, i={i} overshot to {x} >= {nk}"
        )));
    }
    Ok(BridgeQueryResult { n, k, query: BridgeQuery::At { i }, answer: nk - x, grundy_chain_length: steps })
}

/// Number removed at step `i` (1-based); step `n` gives the survivor.
pub fn eliminated_at(n: u64, k: u64, i: u64) -> Result<u64> {
    at_query(n, k, i).map(|r| r.answer)
}

pub fn survivor_fast(n: u64, k: u64) -> Result<u64> {
    eliminated_at(n, k, n)
}

/// The whole removal order, one inverse query per step.
pub fn full_order_fast(n: u64, k: u64) -> Result<Vec<u64>> {
    JosephusParams::new(n, k)?;
    (1..=n).map(|i| eliminated_at(n, k, i)).collect()
}

/// [`full_order_fast`] with the queries spread over the rayon pool.
pub fn full_order_fast_par(n: u64, k: u64) -> Result<Vec<u64>> {
    JosephusParams::new(n, k)?;
    (1..=n).into_par_iter().map(|i| eliminated_at(n, k, i)).collect()
}

/// Survivor by the textbook recurrence `J(j) = (J(j-1) + k) mod j`.
pub fn survivor_classic(n: u64, k: u64) -> Result<u64> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    Ok(ClassicSurvivors::new(k).nth(n as usize - 1).expect("infinite"))
}

/// Survivors of the circles `n = 1, 2, 3, ...` by the textbook recurrence.
#[derive(Debug, Clone)]
pub struct ClassicSurvivors {
    k: u64,
    j: u64,
    // 0-based survivor of the current circle.
    pos: u64,
}

impl ClassicSurvivors {
    pub fn new(k: u64) -> Self {
        Self { k, j: 0, pos: 0 }
    }
}

impl Iterator for ClassicSurvivors {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.j += 1;
        if self.j > 1 {
            self.pos = ((self.pos as u128 + self.k as u128) % self.j as u128) as u64;
        }
        Some(self.pos + 1)
    }
}
