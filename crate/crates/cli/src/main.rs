use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use maxnim::bench::{run_bench, BenchConfig, BenchMethod};
use maxnim::bridge::{at_query, rank_query};
use maxnim::grundy::{grundy_with, Method, Oracle, RuleFunction, RuleKind};
use maxnim::josephus::{label_rounds, simulate, simulate_with, EliminationTrace, Engine, JosephusParams};
use maxnim::play::{play, PlayConfig};
use maxnim::verify::{verify_grid, GridSpec};
use maxnim::{full_order_fast, survivor_fast, Error};

/// Orders above this size are exported through the fast engine by default.
const SIM_ORDER_DEFAULT_MAX_N: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "maxnim", version, about = "Maximum Nim Grundy numbers and every-k-th Josephus queries")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result to PATH instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized query sets.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Sim,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Oracle,
    Levine,
    Floork,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grundy numbers of Maximum Nim.
    Grundy(GrundyArgs),
    /// Every-k-th Josephus queries.
    Josephus {
        #[command(subcommand)]
        action: JosephusAction,
    },
    /// Check JJ_k(n,m) = G(nk-m) over a grid of circles.
    Verify(VerifyArgs),
    /// Time simulation against Grundy-based queries.
    Bench(BenchArgs),
    /// Play Maximum Nim against the engine.
    Play(PlayArgs),
}

#[derive(Args, Debug)]
struct GrundyArgs {
    /// Rule function floor(x/k).
    #[arg(long, conflicts_with = "rule_file", required_unless_present = "rule_file")]
    k: Option<u64>,
    /// File of 0/1 increments f(m) - f(m-1) for m = 1, 2, ...
    #[arg(long)]
    rule_file: Option<PathBuf>,
    /// Single position.
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    x: Option<u64>,
    /// Inclusive range A:B, printed as CSV x,grundy.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Largest position the oracle accepts.
    #[arg(long, default_value_t = Oracle::DEFAULT_LIMIT)]
    oracle_limit: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct Circle {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
}

#[derive(Subcommand, Debug)]
enum JosephusAction {
    /// Full removal order; the survivor comes last.
    Order(Circle),
    /// The last number standing.
    Survivor(Circle),
    /// Step at which M is removed.
    Rank {
        #[command(flatten)]
        circle: Circle,
        #[arg(long)]
        m: u64,
    },
    /// Number removed at step I.
    At {
        #[command(flatten)]
        circle: Circle,
        #[arg(long)]
        i: u64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    k_min: u64,
    #[arg(long, default_value_t = 8)]
    k_max: u64,
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long, default_value_t = 200)]
    n_max: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(long, default_value_t = 5)]
    k: u64,
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    /// Repetitions of whole-circle methods.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', default_value = "simulate-naive,simulate-ostree,bridge-rank,bridge-order,survivor-classic,survivor-fast")]
    methods: Vec<String>,
}

#[derive(Args, Debug)]
struct PlayArgs {
    /// Initial pile size.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    human_first: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::InvalidRule { .. } => 2,
            Error::BoundExceeded { .. } | Error::Overflow(_) | Error::Infeasible(_) => 3,
            Error::InternalInvariant(_) => 4,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

struct Output {
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Output {
    /// Explicit format, else one inferred from the --out extension, else `fallback`.
    fn format_or(&self, fallback: Format) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => fallback,
        }
    }

    fn emit(&self, body: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, body)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
            }
        }
    }
}

fn paint(text: &str, ansi: &str) -> String {
    if std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal() {
        format!("\x1b[{ansi}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::usage(format!("range must look like A:B, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Failure::usage(format!("range start {a} exceeds end {b}")));
    }
    Ok((a, b))
}

fn read_rule_file(path: &Path) -> Result<RuleFunction, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut incs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            match tok {
                "0" => incs.push(0),
                "1" => incs.push(1),
                other => return Err(Failure::usage(format!("rule file increments must be 0 or 1, got {other:?}"))),
            }
        }
    }
    Ok(RuleFunction::tabulated(&incs)?)
}

fn cmd_grundy(args: GrundyArgs, output: &Output) -> CmdResult {
    let rule = match (args.k, &args.rule_file) {
        (Some(k), _) => RuleFunction::floor_div(k)?,
        (None, Some(path)) => read_rule_file(path)?,
        (None, None) => return Err(Failure::usage("one of --k or --rule-file is required")),
    };
    let method = match args.method {
        Some(MethodArg::Oracle) => Method::Oracle,
        Some(MethodArg::Levine) => Method::Levine,
        Some(MethodArg::Floork) => Method::FloorK,
        None if matches!(rule.kind(), RuleKind::FloorDiv(_)) => Method::FloorK,
        None => Method::Levine,
    };
    let (lo, hi) = match (args.x, &args.range) {
        (Some(x), _) => (x, x),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err(Failure::usage("one of --x or --range is required")),
    };
    let values: Vec<(u64, u64)> = if method == Method::Oracle {
        let table = Oracle::with_limit(args.oracle_limit).table(hi, &rule)?;
        (lo..=hi).map(|x| (x, table[x as usize])).collect()
    } else {
        (lo..=hi).map(|x| grundy_with(method, x, &rule).map(|g| (x, g))).collect::<Result<_, _>>()?
    };

    let single = args.x.is_some();
    let body = match output.format_or(if single { Format::Text } else { Format::Csv }) {
        Format::Json if single => format!("{}\n", json!({ "x": values[0].0, "grundy": values[0].1 })),
        Format::Json => {
            let rows: Vec<_> = values.iter().map(|&(x, g)| json!({ "x": x, "grundy": g })).collect();
            format!("{}\n", serde_json::Value::Array(rows))
        }
        Format::Text if single => format!("{}\n", values[0].1),
        Format::Text | Format::Csv => {
            let mut s = String::from("x,grundy\n");
            for (x, g) in values {
                s.push_str(&format!("{x},{g}\n"));
            }
            s
        }
    };
    output.emit(&body)?;
    Ok(0)
}

fn query_body(output: &Output, circle: Circle, engine: EngineArg, answer: u64, extra: serde_json::Value) -> String {
    match output.format_or(Format::Text) {
        Format::Json => {
            let mut obj = json!({
                "n": circle.n,
                "k": circle.k,
                "engine": if engine == EngineArg::Sim { "sim" } else { "fast" },
                "answer": answer,
            });
            if let (Some(o), Some(e)) = (obj.as_object_mut(), extra.as_object()) {
                o.extend(e.clone());
            }
            format!("{obj}\n")
        }
        _ => format!("{answer}\n"),
    }
}

fn cmd_josephus(action: JosephusAction, output: &Output) -> CmdResult {
    match action {
        JosephusAction::Order(circle) => {
            JosephusParams::new(circle.n, circle.k)?;
            let engine = circle.engine.unwrap_or(if circle.n <= SIM_ORDER_DEFAULT_MAX_N {
                EngineArg::Sim
            } else {
                EngineArg::Fast
            });
            let trace = match engine {
                EngineArg::Sim => simulate(circle.n, circle.k)?,
                EngineArg::Fast => {
                    let order = full_order_fast(circle.n, circle.k)?;
                    let survivor = *order.last().expect("n >= 1");
                    EliminationTrace { n: circle.n, k: circle.k, order, survivor, rounds: None }
                }
            };
            let fallback = if output.out.is_some() { Format::Csv } else { Format::Text };
            let body = match output.format_or(fallback) {
                Format::Text => {
                    let items: Vec<String> = trace.order.iter().map(u64::to_string).collect();
                    format!("{}\n", items.join(" "))
                }
                Format::Csv => {
                    let mut buf = Vec::new();
                    label_rounds(&trace)
                        .write_csv(&mut buf)
                        .map_err(|e| Failure::usage(format!("cannot format csv: {e}")))?;
                    String::from_utf8(buf).expect("ascii")
                }
                Format::Json => format!("{}\n", label_rounds(&trace).to_json()),
            };
            output.emit(&body)?;
        }
        JosephusAction::Survivor(circle) => {
            let engine = circle.engine.unwrap_or(EngineArg::Fast);
            let answer = match engine {
                EngineArg::Sim => simulate(circle.n, circle.k)?.survivor,
                EngineArg::Fast => survivor_fast(circle.n, circle.k)?,
            };
            output.emit(&query_body(output, circle, engine, answer, json!({})))?;
        }
        JosephusAction::Rank { circle, m } => {
            let engine = circle.engine.unwrap_or(EngineArg::Fast);
            let (answer, extra) = match engine {
                EngineArg::Sim => {
                    JosephusParams::new(circle.n, circle.k)?.check_member(m)?;
                    (simulate(circle.n, circle.k)?.step_of(m).expect("member"), json!({ "m": m }))
                }
                EngineArg::Fast => {
                    let r = rank_query(circle.n, circle.k, m)?;
                    (r.answer, json!({ "m": m, "grundy_chain_length": r.grundy_chain_length }))
                }
            };
            output.emit(&query_body(output, circle, engine, answer, extra))?;
        }
        JosephusAction::At { circle, i } => {
            let engine = circle.engine.unwrap_or(EngineArg::Fast);
            let (answer, extra) = match engine {
                EngineArg::Sim => {
                    JosephusParams::new(circle.n, circle.k)?.check_step(i)?;
                    let trace = simulate_with(Engine::OrderStat, circle.n, circle.k)?;
                    (trace.order[i as usize - 1], json!({ "i": i }))
                }
                EngineArg::Fast => {
                    let r = at_query(circle.n, circle.k, i)?;
                    (r.answer, json!({ "i": i, "grundy_chain_length": r.grundy_chain_length }))
                }
            };
            output.emit(&query_body(output, circle, engine, answer, extra))?;
        }
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, jobs: Option<usize>, output: &Output) -> CmdResult {
    let grid = GridSpec::new(args.k_min, args.k_max, args.n_min, args.n_max)?;
    let report = verify_grid(grid, jobs)?;
    let json = format!("{}\n", report.to_json());
    if let Some(path) = &output.out {
        fs::write(path, &json).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if output.format == Some(Format::Json) {
        print!("{json}");
    } else {
        let status = if report.all_pass() { paint("PASS", "32") } else { paint("FAIL", "31") };
        println!(
            "{status} k in [{}, {}], n in [{}, {}]: {} checks over {} cells, {} failing, {:.1} ms",
            grid.k_min,
            grid.k_max,
            grid.n_min,
            grid.n_max,
            report.totals.checked,
            report.totals.cells,
            report.totals.failed_cells,
            report.totals.elapsed_ms
        );
        if let Some(ce) = report.first_counterexample {
            println!(
                "first counterexample: n={} k={} m={}: JJ={} but G={}",
                ce.n, ce.k, ce.m, ce.expected, ce.got
            );
        }
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_bench(args: BenchArgs, seed: u64, output: &Output) -> CmdResult {
    let methods = args
        .methods
        .iter()
        .map(|m| m.trim().parse::<BenchMethod>())
        .collect::<Result<Vec<_>, _>>()?;
    if methods.is_empty() {
        return Err(Failure::usage("no bench methods selected"));
    }
    let config = BenchConfig { n: args.n, k: args.k, queries: args.queries, reps: args.reps, seed };
    let report = run_bench(&config, &methods)?;
    let json = format!("{}\n", report.to_json());
    if let Some(path) = &output.out {
        fs::write(path, &json).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if output.format == Some(Format::Json) {
        print!("{json}");
    } else {
        println!("n={} k={} seed={}", config.n, config.k, seed);
        println!("{:<18} {:>8} {:>14} {:>14} {:>18} {:>10}", "method", "samples", "median", "p95", "digest", "chain max");
        for r in &report.records {
            println!(
                "{:<18} {:>8} {:>14} {:>14} {:>18} {:>10}",
                r.method.name(),
                r.timing.samples,
                human_ns(r.timing.median_ns),
                human_ns(r.timing.p95_ns),
                r.output_digest,
                r.chain.as_ref().map_or("-".to_string(), |c| c.max.to_string())
            );
        }
    }
    Ok(0)
}

fn human_ns(ns: f64) -> String {
    match ns {
        ns if ns < 1e3 => format!("{ns:.0} ns"),
        ns if ns < 1e6 => format!("{:.2} us", ns / 1e3),
        ns if ns < 1e9 => format!("{:.2} ms", ns / 1e6),
        ns => format!("{:.2} s", ns / 1e9),
    }
}

fn cmd_play(args: PlayArgs) -> CmdResult {
    let config = PlayConfig { pile: args.n, k: args.k, human_first: args.human_first };
    let stdin = io::stdin();
    play(config, stdin.lock(), io::stdout().lock())?;
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    let output = Output { format: cli.format, out: cli.out };
    match cli.command {
        Command::Grundy(args) => cmd_grundy(args, &output),
        Command::Josephus { action } => cmd_josephus(action, &output),
        Command::Verify(args) => cmd_verify(args, cli.jobs, &output),
        Command::Bench(args) => cmd_bench(args, cli.seed, &output),
        Command::Play(args) => cmd_play(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("maxnim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
