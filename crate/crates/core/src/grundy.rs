//! Grundy numbers of single-pile Maximum Nim.
//!
//! A pile of `x` stones allows removing between 1 and `f(x)` stones, where the
//! rule function `f` satisfies `f(0) = 0` and `0 <= f(m) - f(m-1) <= 1`.
//! Three evaluators are provided:
//!
//! * [`Oracle`]: the plain mex recursion over every position `0..=x`. Quadratic
//!   and bounded; it is the ground truth the other evaluators are checked against.
//! * [`grundy_levine`]: for any valid rule function, `G(x) = f(x)` at a jump
//!   point (`f(x) > f(x-1)`) and `G(x) = G(x - f(x) - 1)` otherwise.
//! * [`grundy_floor_k`]: for `f(x) = floor(x/k)`, multiples of `k` have
//!   `G(x) = x/k` and every other position maps to `floor((k-1)x/k)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Pile size.
pub type Position = u64;
/// Grundy number of a pile position.
pub type GrundyValue = u64;

/// Smallest non-negative integer not contained in `values`.
pub fn mex<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    let values: Vec<u64> = values.into_iter().collect();
    // The answer is at most values.len(), so larger members are irrelevant.
    let mut seen = vec![false; values.len() + 1];
    for v in values {
        if v < seen.len() as u64 {
            seen[v as usize] = true;
        }
    }
    seen.iter().position(|&s| !s).expect("pigeonhole") as u64
}

/// What kind of rule function a [`RuleFunction`] wraps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// `f(x) = floor(x/k)`.
    FloorDiv(u64),
    /// Prefix sums of a stored 0/1 increment sequence.
    Tabulated { len: usize },
    /// An arbitrary, unchecked closure.
    Custom,
}

#[derive(Clone)]
enum Repr {
    FloorDiv(u64),
    // values[m] = f(m) for m <= increments.len(); constant afterwards.
    Tabulated(Arc<[u64]>),
    Custom(Arc<dyn Fn(u64) -> u64 + Send + Sync>),
}

/// The per-pile removal cap `f`.
#[derive(Clone)]
pub struct RuleFunction {
    repr: Repr,
}

impl RuleFunction {
    pub fn floor_div(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("floor-div rule needs k >= 2, got {k}")));
        }
        Ok(Self { repr: Repr::FloorDiv(k) })
    }

    /// Builds `f` from increments `f(m) - f(m-1)` for `m = 1..=len`, with
    /// `f(0) = 0`. Past the table `f` stays at its last value.
    pub fn tabulated(increments: &[u8]) -> Result<Self> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        values.push(0u64);
        let mut acc = 0u64;
        for (i, &step) in increments.iter().enumerate() {
            if step > 1 {
                return Err(Error::InvalidRule { m: i as u64 + 1, prev: acc, cur: acc + step as u64 });
            }
            acc += step as u64;
            values.push(acc);
        }
        Ok(Self { repr: Repr::Tabulated(values.into()) })
    }

    /// Wraps an arbitrary function. Nothing is checked up front; the
    /// evaluators report [`Error::InvalidRule`] when they hit a bad step.
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        Self { repr: Repr::Custom(Arc::new(f)) }
    }

    pub fn kind(&self) -> RuleKind {
        match &self.repr {
            Repr::FloorDiv(k) => RuleKind::FloorDiv(*k),
            Repr::Tabulated(v) => RuleKind::Tabulated { len: v.len() - 1 },
            Repr::Custom(_) => RuleKind::Custom,
        }
    }

    /// Maximum number of stones removable from a pile of `m`.
    #[inline]
    pub fn cap(&self, m: u64) -> u64 {
        match &self.repr {
            Repr::FloorDiv(k) => m / k,
            Repr::Tabulated(v) => {
                let last = v.len() - 1;
                v[(m as usize).min(last)]
            }
            Repr::Custom(f) => f(m),
        }
    }

    /// Checks `f(0) = 0` and `f(m) - f(m-1) in {0, 1}` for `m = 1..=upto`.
    pub fn validate(&self, upto: u64) -> Result<()> {
        if let Repr::FloorDiv(_) | Repr::Tabulated(_) = self.repr {
            return Ok(());
        }
        let mut prev = self.cap(0);
        if prev != 0 {
            return Err(Error::InvalidRule { m: 0, prev: 0, cur: prev });
        }
        for m in 1..=upto {
            let cur = self.cap(m);
            check_step(m, prev, cur)?;
            prev = cur;
        }
        Ok(())
    }
}

impl fmt::Debug for RuleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RuleKind::FloorDiv(k) => write!(f, "FloorDiv({k})"),
            RuleKind::Tabulated { len } => write!(f, "Tabulated(len={len})"),
            RuleKind::Custom => write!(f, "Custom"),
        }
    }
}

#[inline]
fn check_step(m: u64, prev: u64, cur: u64) -> Result<()> {
    if cur < prev || cur - prev > 1 {
        return Err(Error::InvalidRule { m, prev, cur });
    }
    Ok(())
}

/// Positions reachable from `x` in one move, nearest first.
pub fn moves(x: Position, f: &RuleFunction) -> Vec<Position> {
    let cap = f.cap(x).min(x);
    (1..=cap).map(|u| x - u).collect()
}

/// Mex-recursion evaluator with a hard size cap.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    limit: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { limit: Self::DEFAULT_LIMIT }
    }
}

impl Oracle {
    pub const DEFAULT_LIMIT: u64 = 100_000;

    pub fn with_limit(limit: u64) -> Self {
        Self { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Grundy numbers of every position `0..=x`.
    pub fn table(&self, x: Position, f: &RuleFunction) -> Result<Vec<GrundyValue>> {
        if x > self.limit {
            return Err(Error::BoundExceeded { x, limit: self.limit });
        }
        f.validate(x)?;
        let mut table: Vec<GrundyValue> = Vec::with_capacity(x as usize + 1);
        for pos in 0..=x as usize {
            let cap = f.cap(pos as u64) as usize;
            let g = mex((1..=cap).map(|u| table[pos - u]));
            table.push(g);
        }
        Ok(table)
    }

    pub fn grundy(&self, x: Position, f: &RuleFunction) -> Result<GrundyValue> {
        Ok(*self.table(x, f)?.last().expect("table covers 0..=x"))
    }
}

/// [`Oracle`] with the default limit.
pub fn grundy_oracle(x: Position, f: &RuleFunction) -> Result<GrundyValue> {
    Oracle::default().grundy(x, f)
}

/// Grundy number for an arbitrary valid rule function, descending through
/// flat stretches of `f` until a jump point or zero.
pub fn grundy_levine(x: Position, f: &RuleFunction) -> Result<GrundyValue> {
    let mut x = x;
    loop {
        if x == 0 {
            let f0 = f.cap(0);
            if f0 != 0 {
                return Err(Error::InvalidRule { m: 0, prev: 0, cur: f0 });
            }
            return Ok(0);
        }
        let cur = f.cap(x);
        let prev = f.cap(x - 1);
        check_step(x, prev, cur)?;
        if x == 1 && prev != 0 {
            return Err(Error::InvalidRule { m: 0, prev: 0, cur: prev });
        }
        if cur > prev {
            return Ok(cur);
        }
        // cur == prev and prev <= x - 1 for a valid f, so this cannot underflow.
        x = x
            .checked_sub(cur + 1)
            .ok_or(Error::InvalidRule { m: x, prev, cur })?;
    }
}

/// Grundy value of `x` under `floor(x/k)` together with the number of
/// descent steps the recursion took.
pub fn floor_k_chain(x: Position, k: u64) -> Result<(GrundyValue, u64)> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be >= 2, got {k}")));
    }
    let mut x = x;
    let mut steps = 0u64;
    while !x.is_multiple_of(k) {
        // floor((k-1)x/k) without the multiplication.
        x = x - x / k - 1;
        steps += 1;
    }
    Ok((x / k, steps))
}

/// Grundy value of `x` under the rule function `floor(x/k)`.
pub fn grundy_floor_k(x: Position, k: u64) -> Result<GrundyValue> {
    floor_k_chain(x, k).map(|(g, _)| g)
}

/// Evaluator selector, mostly for the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Oracle,
    Levine,
    #[default]
    FloorK,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "levine" => Ok(Method::Levine),
            "floork" | "floor-k" => Ok(Method::FloorK),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

pub fn grundy_with(method: Method, x: Position, f: &RuleFunction) -> Result<GrundyValue> {
    match method {
        Method::Oracle => grundy_oracle(x, f),
        Method::Levine => grundy_levine(x, f),
        Method::FloorK => match f.kind() {
            RuleKind::FloorDiv(k) => grundy_floor_k(x, k),
            kind => Err(Error::InvalidArgument(format!(
                "floor-k evaluator needs a floor-div rule, got {kind:?}"
            ))),
        },
    }
}

/// Fastest evaluator applicable to `f`.
pub fn grundy(x: Position, f: &RuleFunction) -> Result<GrundyValue> {
    match f.kind() {
        RuleKind::FloorDiv(k) => grundy_floor_k(x, k),
        _ => grundy_levine(x, f),
    }
}

/// True iff the previous player wins from `x`, i.e. `G(x) = 0`.
pub fn is_p_position(x: Position, f: &RuleFunction) -> Result<bool> {
    Ok(grundy(x, f)? == 0)
}

/// Removal counts that move to a P-position, in increasing order.
pub fn optimal_moves(x: Position, f: &RuleFunction) -> Result<Vec<u64>> {
    let cap = f.cap(x).min(x);
    let mut out = Vec::new();
    for u in 1..=cap {
        if grundy(x - u, f)? == 0 {
            out.push(u);
        }
    }
    Ok(out)
}
