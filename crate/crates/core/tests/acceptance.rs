//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; exits non-zero if any criterion fails.

use std::alloc::{GlobalAlloc, Layout, System};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use maxnim::bench::{rank_query_set, run_bench, BenchConfig, BenchMethod, ChainStats, CHAIN_BOUND_C};
use maxnim::bridge::{rank_query, ClassicSurvivors};
use maxnim::grundy::Oracle;
use maxnim::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Counting;

static ALLOCATED: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        ALLOCATED.fetch_add(layout.size(), Ordering::Relaxed);
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) }
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn example_reproduction() -> Check {
    let t = Instant::now();
    let trace = simulate(10, 3).map_err(|e| e.to_string())?;
    ensure(trace.order[..9] == [3, 6, 9, 2, 7, 1, 8, 5, 10], || format!("order {:?}", trace.order))?;
    ensure(trace.survivor == 4, || format!("survivor {}", trace.survivor))?;
    for (m, expected) in [(3, 9), (6, 8), (5, 2), (10, 1)] {
        let got = jj_by_definition(10, 3, m).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("JJ_3(10,{m}) = {got}, expected {expected}"))?;
    }
    within(t.elapsed(), Duration::from_secs(1), "example")?;
    Ok(format!("order and JJ values exact in {:?}", t.elapsed()))
}

fn theorem_grid() -> Check {
    let t = Instant::now();
    let mut checked = 0u64;
    for k in 2..=8u64 {
        for n in 1..=200u64 {
            for m in 1..=n {
                let jj = jj_by_definition(n, k, m).map_err(|e| e.to_string())?;
                let g = grundy_floor_k(n * k - m, k).map_err(|e| e.to_string())?;
                ensure(jj == g, || format!("counterexample n={n} k={k} m={m}: JJ={jj}, G={g}"))?;
                checked += 1;
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(60), "grid")?;
    Ok(format!("{checked} checks, 0 counterexamples in {:?}", t.elapsed()))
}

fn lemma_validation() -> Check {
    let t = Instant::now();
    let oracle = Oracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_786e_696d);
    let rules = 50;
    for r in 0..rules {
        // Vary the density of jumps so both sparse and dense rules appear.
        let p: f64 = rng.gen_range(0.05..0.95);
        let incs: Vec<u8> = (0..2000).map(|_| rng.gen_bool(p) as u8).collect();
        let f = RuleFunction::tabulated(&incs).map_err(|e| e.to_string())?;
        let table = oracle.table(2000, &f).map_err(|e| e.to_string())?;
        for (x, &g) in table.iter().enumerate() {
            let got = grundy_levine(x as u64, &f).map_err(|e| e.to_string())?;
            ensure(got == g, || format!("rule {r}, x={x}: levine {got}, oracle {g}"))?;
        }
    }
    for k in 2..=6 {
        let f = RuleFunction::floor_div(k).map_err(|e| e.to_string())?;
        let table = oracle.table(3000, &f).map_err(|e| e.to_string())?;
        for (x, &g) in table.iter().enumerate() {
            let got = grundy_floor_k(x as u64, k).map_err(|e| e.to_string())?;
            ensure(got == g, || format!("k={k}, x={x}: floor-k {got}, oracle {g}"))?;
        }
    }
    Ok(format!("{rules} random rules to x=2000 and k=2..6 to x=3000 in {:?}", t.elapsed()))
}

fn floor_identity() -> Check {
    let mut non_multiples = 0u64;
    for k in 2..=8u64 {
        for x in 0..=1_000_000u64 {
            let lhs = x as i64 - (x / k) as i64 - 1;
            let rhs = ((k - 1) * x / k) as i64;
            if x % k != 0 {
                ensure(lhs == rhs, || format!("k={k}, x={x}: {lhs} != {rhs}"))?;
                non_multiples += 1;
            } else {
                // On multiples of k the left side falls one short.
                ensure(lhs == rhs - 1, || format!("k={k}, multiple x={x}: {lhs} vs {rhs}"))?;
            }
        }
    }
    Ok(format!("{non_multiples} non-multiples exact; multiples differ by exactly 1"))
}

fn inverse_bridge() -> Check {
    let t = Instant::now();
    for k in 2..=8u64 {
        for n in 1..=300u64 {
            let fast = full_order_fast(n, k).map_err(|e| e.to_string())?;
            let sim = simulate(n, k).map_err(|e| e.to_string())?.order;
            ensure(fast == sim, || format!("order mismatch n={n} k={k}"))?;
        }
        for y in 0..=100_000u64 {
            let x = inverse_step(y, k).map_err(|e| e.to_string())?;
            ensure(x % k != 0 && x - x / k - 1 == y, || format!("inverse_step({y}, {k}) = {x}"))?;
        }
        for x in (0..=100_000u64).filter(|x| x % k != 0) {
            let back = inverse_step(x - x / k - 1, k).map_err(|e| e.to_string())?;
            ensure(back == x, || format!("roundtrip of x={x}, k={k} gave {back}"))?;
        }
    }
    Ok(format!("orders n<=300, k<=8 and roundtrips to 1e5 in {:?}", t.elapsed()))
}

fn survivor_oracle() -> Check {
    let t = Instant::now();
    for k in [2u64, 3, 5, 7, 10] {
        for (n, classic) in (1..=100_000u64).zip(ClassicSurvivors::new(k)) {
            let fast = survivor_fast(n, k).map_err(|e| e.to_string())?;
            ensure(fast == classic, || format!("n={n} k={k}: fast {fast}, classic {classic}"))?;
        }
        let n = 1_000_000;
        let fast = survivor_fast(n, k).map_err(|e| e.to_string())?;
        let classic = survivor_classic(n, k).map_err(|e| e.to_string())?;
        ensure(fast == classic, || format!("n=1e6 k={k}: fast {fast}, classic {classic}"))?;
    }
    Ok(format!("all n<=1e5 and n=1e6 for k in {{2,3,5,7,10}} in {:?}", t.elapsed()))
}

fn performance() -> Check {
    let config = BenchConfig { n: 1_000_000_000, k: 7, queries: 1000, reps: 1, seed: 2024 };
    let targets = rank_query_set(&config);

    // Allocation while answering the queries, excluding the result vectors.
    let mut lengths = Vec::with_capacity(targets.len());
    let mut times = Vec::with_capacity(targets.len());
    let before = ALLOCATED.load(Ordering::Relaxed);
    for &m in &targets {
        let t = Instant::now();
        let r = rank_query(config.n, config.k, m).map_err(|e| e.to_string())?;
        times.push(t.elapsed());
        lengths.push(r.grundy_chain_length);
    }
    let allocated = ALLOCATED.load(Ordering::Relaxed) - before;
    ensure(allocated < 1 << 16, || format!("queries allocated {allocated} bytes"))?;

    times.sort();
    let median = times[times.len() / 2];
    within(median, Duration::from_millis(1), "median rank query")?;

    let chain = ChainStats::from_lengths(&lengths, config.n, config.k);
    ensure(chain.within_bound, || format!("chain max {} exceeds {CHAIN_BOUND_C}*k*ln(nk)+c", chain.max))?;

    let report = run_bench(&config, &[BenchMethod::BridgeRank]).map_err(|e| e.to_string())?;
    let record = report.record(BenchMethod::BridgeRank).expect("requested");
    let logged = record.chain.as_ref().expect("rank records carry chain stats");
    ensure(logged.within_bound, || format!("bench report chain stats {logged:?}"))?;
    println!("    bench record: {}", serde_json::to_string(record).unwrap());
    Ok(format!(
        "median {median:?}, {allocated} bytes allocated, chain max {} (fitted c = {:.3} <= {CHAIN_BOUND_C})",
        chain.max, chain.fitted_c
    ))
}

fn pn_soundness() -> Check {
    let oracle = Oracle::default();
    for k in 2..=6 {
        let f = RuleFunction::floor_div(k).map_err(|e| e.to_string())?;
        let g = oracle.table(2000, &f).map_err(|e| e.to_string())?;
        for x in 0..=2000u64 {
            let options = moves(x, &f);
            if g[x as usize] == 0 {
                ensure(options.iter().all(|&y| g[y as usize] != 0), || format!("k={k}: P-position {x} reaches a P-position"))?;
            } else {
                ensure(options.iter().any(|&y| g[y as usize] == 0), || format!("k={k}: N-position {x} has no move to a P-position"))?;
                let best = optimal_moves(x, &f).map_err(|e| e.to_string())?;
                ensure(!best.is_empty(), || format!("k={k}: optimal_moves({x}) empty"))?;
            }
        }
    }
    Ok("k=2..6, x<=2000".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("example reproduction (n=10, k=3)", example_reproduction),
        ("JJ_k(n,m) = G(nk-m) on k<=8, n<=200", theorem_grid),
        ("Grundy evaluators agree with the mex oracle", lemma_validation),
        ("floor identity x - floor(x/k) - 1 = floor((k-1)x/k)", floor_identity),
        ("inverse bridge orders and roundtrips", inverse_bridge),
        ("survivor_fast = classic recurrence", survivor_oracle),
        ("rank query performance at n=1e9, k=7", performance),
        ("P/N soundness", pn_soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS AC{} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL AC{} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
