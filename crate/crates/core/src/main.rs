use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use padic_balls::balls::{classify_nilpotent, enumerate_balls, idempotent_rank};
use padic_balls::padic::SessionParams;
use padic_balls::quotient::{spectrum, Measure, QuotientContext};
use padic_balls::verify::{run, SuiteConfig};
use padic_balls::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

/// Exact harmonic analysis of special balls for gl_n over Q_p.
#[derive(Parser, Debug)]
#[command(name = "padic-balls", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// List the special balls at the level with nilpotency tags and ranks.
    Census(CensusArgs),
    /// Balls B with e_B * xi nonzero for a measure xi read from a file.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug)]
struct SessionArgs {
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Matrix size n.
    #[arg(long, default_value_t = 2)]
    size: usize,
    /// Lattice depth e (default 1, or 2 for p = 2).
    #[arg(long)]
    depth: Option<u32>,
    /// Quotient level m.
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// p-adic digits carried (default 2m + 2e + 2).
    #[arg(long)]
    precision: Option<u32>,
}

impl SessionArgs {
    fn session(&self) -> padic_balls::Result<SessionParams> {
        let e = self.depth.unwrap_or_else(|| SessionParams::min_depth(self.p));
        let precision = self.precision.unwrap_or_else(|| SessionParams::guard_precision(e, self.level));
        SessionParams::with_precision(self.p, self.size, e, self.level, precision)
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    session: SessionArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample counts as name=count; repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    samples: Vec<String>,
    /// Suite to run; repeatable (default: all).
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall-clock time per suite (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    session: SessionArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    session: SessionArgs,
    /// Measure file on the group side.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match cli.cmd {
        Cmd::Verify(args) => verify(args),
        Cmd::Census(args) => census(args),
        Cmd::Spectrum(args) => spectrum_cmd(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<u8, (u8, String)>;

fn usage(e: Error) -> (u8, String) {
    match e {
        Error::InvalidParams(_) | Error::QuotientTooLarge(_) => (EXIT_USAGE, e.to_string()),
        _ => (EXIT_FAIL, e.to_string()),
    }
}

fn emit(value: &Value, path: Option<&PathBuf>) -> Result<(), (u8, String)> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match path {
        Some(p) => fs::write(p, text).map_err(|e| (EXIT_FAIL, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> CmdResult {
    let sp = args.session.session().map_err(usage)?;
    let mut config = SuiteConfig::new(sp);
    config.seed = args.seed;
    if !args.suites.is_empty() {
        let names: Vec<&str> = args.suites.iter().map(String::as_str).collect();
        config = config.with_suites(&names).map_err(usage)?;
    }
    for item in &args.samples {
        let (key, count) = item
            .split_once('=')
            .and_then(|(k, v)| v.parse::<usize>().ok().map(|v| (k, v)))
            .ok_or_else(|| (EXIT_USAGE, format!("--samples expects name=count, got {item:?}")))?;
        config.set_samples(key, count).map_err(usage)?;
    }
    let report = run(&config, args.timings).map_err(usage)?;
    for s in &report.suites {
        let status = if !s.passed() {
            "FAIL"
        } else if s.unknown > 0 {
            "UNKNOWN"
        } else {
            "ok"
        };
        eprintln!("{:<11} {:<7} {} checks, {} failed", s.name, status, s.checks, s.failed);
    }
    emit(&report.to_json(), args.json.as_ref())?;
    Ok(report.exit_code() as u8)
}

fn census(args: CensusArgs) -> CmdResult {
    let sp = args.session.session().map_err(usage)?;
    let ctx = QuotientContext::new(sp).map_err(usage)?;
    let rows: Vec<Value> = enumerate_balls(&sp, sp.m)
        .iter()
        .map(|b| {
            json!({
                "center": b.center().to_json(),
                "r_exp": b.r_exp(),
                "norm_exponent": b.norm_exponent(),
                "nilpotency": classify_nilpotent(&sp, b).tag(),
                "rank": idempotent_rank(&ctx, b),
            })
        })
        .collect();
    emit(&Value::Array(rows), args.json.as_ref())?;
    Ok(0)
}

fn spectrum_cmd(args: SpectrumArgs) -> CmdResult {
    let sp = args.session.session().map_err(usage)?;
    let text = fs::read_to_string(&args.input).map_err(|e| (EXIT_DATA, format!("{}: {e}", args.input.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| (EXIT_DATA, format!("{}: {e}", args.input.display())))?;
    let ctx = QuotientContext::new(sp).map_err(usage)?;
    let xi = Measure::from_json(&ctx, &value).map_err(|e| (EXIT_DATA, e.to_string()))?;
    let balls = enumerate_balls(&sp, sp.m);
    let hits = spectrum(&ctx, &balls, &xi).map_err(|e| match e {
        Error::QuotientMismatch(_) | Error::LevelMismatch(_) => (EXIT_DATA, e.to_string()),
        e => usage(e),
    })?;
    let rows: Vec<Value> = hits
        .iter()
        .map(|b| {
            json!({
                "center": b.center().to_json(),
                "r_exp": b.r_exp(),
                "nilpotency": classify_nilpotent(&sp, b).tag(),
            })
        })
        .collect();
    emit(&Value::Array(rows), args.json.as_ref())?;
    Ok(0)
}
