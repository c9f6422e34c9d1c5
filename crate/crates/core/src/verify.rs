//! Exhaustive grid check of `JJ_k(n, m) = G(nk - m)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grundy::grundy_floor_k;
use crate::josephus::{simulate, JosephusParams};

pub const REPORT_SCHEMA: u32 = 1;

/// Inclusive ranges of `k` and `n` to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub k_min: u64,
    pub k_max: u64,
    pub n_min: u64,
    pub n_max: u64,
}

impl GridSpec {
    pub fn new(k_min: u64, k_max: u64, n_min: u64, n_max: u64) -> Result<Self> {
        if k_min < 2 {
            return Err(Error::InvalidArgument(format!("k-min must be >= 2, got {k_min}")));
        }
        if n_min < 1 {
            return Err(Error::InvalidArgument(format!("n-min must be >= 1, got {n_min}")));
        }
        if k_min > k_max {
            return Err(Error::InvalidArgument(format!("k-min {k_min} exceeds k-max {k_max}")));
        }
        if n_min > n_max {
            return Err(Error::InvalidArgument(format!("n-min {n_min} exceeds n-max {n_max}")));
        }
        JosephusParams::new(n_max, k_max)?;
        Ok(Self { k_min, k_max, n_min, n_max })
    }

    fn cells(&self) -> Vec<(u64, u64)> {
        (self.k_min..=self.k_max)
            .flat_map(|k| (self.n_min..=self.n_max).map(move |n| (n, k)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    /// `JJ_k(n, m)` from the simulation.
    pub expected: u64,
    /// `G(nk - m)` from the evaluator under test.
    pub got: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellResult {
    pub n: u64,
    pub k: u64,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub cells: u64,
    pub failed_cells: u64,
    pub checked: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub grid: GridSpec,
    pub cells: Vec<CellResult>,
    pub first_counterexample: Option<Counterexample>,
    pub totals: Totals,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.totals.failed_cells == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Checks the grid against [`grundy_floor_k`], optionally on `jobs` workers.
pub fn verify_grid(grid: GridSpec, jobs: Option<usize>) -> Result<VerificationReport> {
    verify_grid_with(grid, jobs, grundy_floor_k)
}

/// Same as [`verify_grid`] with a caller-supplied evaluator `(x, k) -> G(x)`.
pub fn verify_grid_with<F>(grid: GridSpec, jobs: Option<usize>, grundy: F) -> Result<VerificationReport>
where
    F: Fn(u64, u64) -> Result<u64> + Sync,
{
    let started = Instant::now();
    let cells = grid.cells();
    let run = || -> Result<Vec<CellResult>> {
        cells.par_iter().map(|&(n, k)| check_cell(n, k, &grundy)).collect()
    };
    let results = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let first_counterexample = results.iter().find_map(|c| c.counterexample);
    let totals = Totals {
        cells: results.len() as u64,
        failed_cells: results.iter().filter(|c| !c.pass).count() as u64,
        checked: results.iter().map(|c| c.n).sum(),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(VerificationReport { schema: REPORT_SCHEMA, grid, cells: results, first_counterexample, totals })
}

fn check_cell<F>(n: u64, k: u64, grundy: &F) -> Result<CellResult>
where
    F: Fn(u64, u64) -> Result<u64>,
{
    let nk = JosephusParams::new(n, k)?.nk();
    let jj = simulate(n, k)?.jj_table();
    let mut counterexample = None;
    for m in 1..=n {
        let expected = jj[m as usize - 1];
        let got = grundy(nk - m, k)?;
        if got != expected {
            counterexample = Some(Counterexample { n, k, m, expected, got });
            break;
        }
    }
    Ok(CellResult { n, k, pass: counterexample.is_none(), counterexample })
}
