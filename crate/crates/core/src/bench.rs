//! Timing comparison of simulation against Grundy-based queries.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bridge::{full_order_fast, rank_query, survivor_classic, survivor_fast};
use crate::error::{Error, Result};
use crate::josephus::{simulate_with, Engine, JosephusParams};

/// Pinned constant for the chain-length bound `c * k * ln(nk) + c`.
pub const CHAIN_BOUND_C: f64 = 2.0;

const NAIVE_MAX_WORK: u64 = 500_000_000;
const MATERIALIZE_MAX_N: u64 = 50_000_000;
const BRIDGE_ORDER_MAX_N: u64 = 10_000_000;
const CLASSIC_MAX_N: u64 = 2_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    SimulateNaive,
    SimulateOstree,
    BridgeRank,
    BridgeOrder,
    SurvivorClassic,
    SurvivorFast,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 6] = [
        BenchMethod::SimulateNaive,
        BenchMethod::SimulateOstree,
        BenchMethod::BridgeRank,
        BenchMethod::BridgeOrder,
        BenchMethod::SurvivorClassic,
        BenchMethod::SurvivorFast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::SimulateNaive => "simulate-naive",
            BenchMethod::SimulateOstree => "simulate-ostree",
            BenchMethod::BridgeRank => "bridge-rank",
            BenchMethod::BridgeOrder => "bridge-order",
            BenchMethod::SurvivorClassic => "survivor-classic",
            BenchMethod::SurvivorFast => "survivor-fast",
        }
    }

    /// Refuses scales at which the method would have to hold or walk too much.
    pub fn check_feasible(self, n: u64, k: u64) -> Result<()> {
        let too_big = match self {
            BenchMethod::SimulateNaive => n.saturating_mul(k) > NAIVE_MAX_WORK,
            BenchMethod::SimulateOstree => n > MATERIALIZE_MAX_N,
            BenchMethod::BridgeOrder => n > BRIDGE_ORDER_MAX_N,
            BenchMethod::SurvivorClassic => n > CLASSIC_MAX_N,
            BenchMethod::BridgeRank | BenchMethod::SurvivorFast => false,
        };
        if too_big {
            return Err(Error::Infeasible(format!("{self} at n={n}, k={k}")));
        }
        Ok(())
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bench method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub n: u64,
    pub k: u64,
    /// Random rank queries for `bridge-rank`, repetitions for `survivor-fast`.
    pub queries: usize,
    /// Repetitions of the whole-circle methods.
    pub reps: usize,
    pub seed: u64,
}

/// Wall-clock statistics in nanoseconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingStats {
    pub samples: usize,
    pub median_ns: f64,
    pub p95_ns: f64,
    pub mean_ns: f64,
    pub total_ns: f64,
}

impl TimingStats {
    pub fn from_samples(samples: &[Duration]) -> Self {
        let mut ns: Vec<f64> = samples.iter().map(|d| d.as_secs_f64() * 1e9).collect();
        ns.sort_by(|a, b| a.total_cmp(b));
        let total: f64 = ns.iter().sum();
        Self {
            samples: ns.len(),
            median_ns: percentile(&ns, 0.5),
            p95_ns: percentile(&ns, 0.95),
            mean_ns: if ns.is_empty() { 0.0 } else { total / ns.len() as f64 },
            total_ns: total,
        }
    }
}

// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStats {
    pub max: u64,
    pub mean: f64,
    /// `k * ln(nk)` for this circle.
    pub scale: f64,
    /// Smallest `c` with `max <= c * scale + c`.
    pub fitted_c: f64,
    pub bound_c: f64,
    pub within_bound: bool,
}

impl ChainStats {
    pub fn from_lengths(lengths: &[u64], n: u64, k: u64) -> Self {
        let max = lengths.iter().copied().max().unwrap_or(0);
        let mean = if lengths.is_empty() {
            0.0
        } else {
            lengths.iter().sum::<u64>() as f64 / lengths.len() as f64
        };
        let scale = k as f64 * ((n as f64) * (k as f64)).ln();
        let fitted_c = max as f64 / (scale + 1.0);
        Self { max, mean, scale, fitted_c, bound_c: CHAIN_BOUND_C, within_bound: fitted_c <= CHAIN_BOUND_C }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: BenchMethod,
    pub n: u64,
    pub k: u64,
    pub queries: usize,
    /// FNV-1a over the method's answers; equal digests mean equal outputs.
    pub output_digest: String,
    pub chain: Option<ChainStats>,
    pub timing: TimingStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub seed: u64,
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn record(&self, method: BenchMethod) -> Option<&BenchRecord> {
        self.records.iter().find(|r| r.method == method)
    }
}

#[derive(Debug, Clone, Copy)]
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn push(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn hex(self) -> String {
        format!("{:016x}", self.0)
    }
}

fn digest_of(values: &[u64]) -> String {
    let mut h = Fnv::new();
    values.iter().for_each(|&v| h.push(v));
    h.hex()
}

/// The random targets `m` used by `bridge-rank`.
pub fn rank_query_set(config: &BenchConfig) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.queries).map(|_| rng.gen_range(1..=config.n)).collect()
}

/// Runs every method in `methods` on the same parameters.
pub fn run_bench(config: &BenchConfig, methods: &[BenchMethod]) -> Result<BenchReport> {
    JosephusParams::new(config.n, config.k)?;
    for m in methods {
        m.check_feasible(config.n, config.k)?;
    }
    let records = methods.iter().map(|&m| run_method(config, m)).collect::<Result<_>>()?;
    Ok(BenchReport { schema: crate::verify::REPORT_SCHEMA, seed: config.seed, records })
}

fn run_method(config: &BenchConfig, method: BenchMethod) -> Result<BenchRecord> {
    let BenchConfig { n, k, .. } = *config;
    let reps = config.reps.max(1);
    let mut samples = Vec::new();
    let mut chain = None;
    let digest;
    let queries;
    match method {
        BenchMethod::SimulateNaive | BenchMethod::SimulateOstree | BenchMethod::BridgeOrder => {
            let mut order = Vec::new();
            for _ in 0..reps {
                let t = Instant::now();
                order = match method {
                    BenchMethod::SimulateNaive => simulate_with(Engine::Naive, n, k)?.order,
                    BenchMethod::SimulateOstree => simulate_with(Engine::OrderStat, n, k)?.order,
                    _ => full_order_fast(n, k)?,
                };
                samples.push(t.elapsed());
            }
            digest = digest_of(&order);
            queries = reps;
        }
        BenchMethod::BridgeRank => {
            let targets = rank_query_set(config);
            let mut ranks = Vec::with_capacity(targets.len());
            let mut lengths = Vec::with_capacity(targets.len());
            for &m in &targets {
                let t = Instant::now();
                let r = rank_query(n, k, m)?;
                samples.push(t.elapsed());
                ranks.push(r.answer);
                lengths.push(r.grundy_chain_length);
            }
            digest = digest_of(&ranks);
            chain = Some(ChainStats::from_lengths(&lengths, n, k));
            queries = targets.len();
        }
        BenchMethod::SurvivorClassic | BenchMethod::SurvivorFast => {
            let count = if method == BenchMethod::SurvivorFast { config.queries.max(1) } else { reps };
            let mut survivor = 0;
            for _ in 0..count {
                let t = Instant::now();
                survivor = if method == BenchMethod::SurvivorFast {
                    survivor_fast(n, k)?
                } else {
                    survivor_classic(n, k)?
                };
                samples.push(t.elapsed());
            }
            digest = digest_of(&[survivor]);
            queries = count;
        }
    }
    Ok(BenchRecord {
        method,
        n,
        k,
        queries,
        output_digest: digest,
        chain,
        timing: TimingStats::from_samples(&samples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: u64, k: u64) -> BenchConfig {
        BenchConfig { n, k, queries: 50, reps: 1, seed: 7 }
    }

    #[test]
    fn method_names_roundtrip() {
        for m in BenchMethod::ALL {
            assert_eq!(m.name().parse::<BenchMethod>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("simulate".parse::<BenchMethod>().is_err());
    }

    #[test]
    fn percentiles() {
        let s: Vec<Duration> = (1..=20).map(Duration::from_nanos).collect();
        let t = TimingStats::from_samples(&s);
        assert_eq!(t.median_ns, 10.0);
        assert_eq!(t.p95_ns, 19.0);
        assert_eq!(t.samples, 20);
        assert_eq!(TimingStats::from_samples(&[]).median_ns, 0.0);
    }

    #[test]
    fn order_methods_agree() {
        let r = run_bench(
            &config(2000, 5),
            &[BenchMethod::SimulateNaive, BenchMethod::SimulateOstree, BenchMethod::BridgeOrder],
        )
        .unwrap();
        let digests: Vec<&str> = r.records.iter().map(|r| r.output_digest.as_str()).collect();
        assert!(digests.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn survivor_methods_agree() {
        let r = run_bench(&config(50_000, 3), &[BenchMethod::SurvivorClassic, BenchMethod::SurvivorFast]).unwrap();
        assert_eq!(r.records[0].output_digest, r.records[1].output_digest);
    }

    #[test]
    fn infeasible_scales_are_refused() {
        let err = run_bench(&config(1_000_000_000, 7), &[BenchMethod::SimulateNaive]).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
        assert!(run_bench(&config(1_000_000_000, 7), &[BenchMethod::BridgeOrder]).is_err());
        assert!(run_bench(&config(1_000_000_000, 7), &[BenchMethod::BridgeRank]).is_ok());
    }

    #[test]
    fn rank_bench_is_deterministic() {
        let c = config(1_000_000, 4);
        let a = run_bench(&c, &[BenchMethod::BridgeRank]).unwrap();
        let b = run_bench(&c, &[BenchMethod::BridgeRank]).unwrap();
        assert_eq!(a.records[0].output_digest, b.records[0].output_digest);
        assert_eq!(a.records[0].chain, b.records[0].chain);
        assert!(a.records[0].chain.as_ref().unwrap().within_bound);
    }
}
