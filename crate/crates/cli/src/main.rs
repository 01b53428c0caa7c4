//! `densic`: exact densities of automatic sets from the command line.
//!
//! Exit codes: 0 success, 1 internal failure, 2 unreadable or malformed
//! input, 3 search cap exceeded, 4 inadmissible density target, 5 failed
//! verification.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use densic_core::automaton::{parse_dfao, serialize_dfao, AutomaticSet};
use densic_core::constructor::{construct, DensityTarget};
use densic_core::density::{densities_with, Analysis, SearchOptions, Strategy};
use densic_core::exact::{format_decimal, int, parse_rational, to_f64};
use densic_core::oracle::simulate;
use densic_core::Error;

use report::{Extremes, Format, Report};

#[derive(Parser)]
#[command(name = "densic", version, about = "Exact upper and lower densities of automatic sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the extremal densities (or means) of an automaton file.
    Analyze {
        file: PathBuf,
        /// Treat outputs as a rational sequence instead of a 0/1 set.
        #[arg(long)]
        mean: bool,
        /// Worker threads for the search.
        #[arg(long, env = "DENSIC_THREADS")]
        threads: Option<usize>,
        /// Cap on enumerated candidates or search states.
        #[arg(long, default_value_t = 100_000_000)]
        max_candidates: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Enumerate every bounded witness instead of solving.
        #[arg(long)]
        exhaustive: bool,
        /// Merge equivalent states before analysis.
        #[arg(long)]
        minimize: bool,
        /// Append wall-clock timings (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Build an automatic set with lower density ALPHA and upper density BETA.
    Construct {
        alpha: String,
        beta: String,
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate s(n)/n for n = 1..N and emit a CSV trace.
    Simulate {
        file: PathBuf,
        n: u64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Construct, analyze and simulate a target, checking every stage.
    Verify { alpha: String, beta: String, k: u32, n: u64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Records,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn stage(stage: &str, e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidAutomaton(_) | Error::NotASet { .. } | Error::Domain(_) => 2,
            Error::Infeasible { .. } => 3,
            Error::Inadmissible(_) => 4,
            _ => 1,
        };
        Failure::new(code, format!("{stage}: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            file,
            mean,
            threads,
            max_candidates,
            format,
            exhaustive,
            minimize,
            timing,
        } => {
            let opts = SearchOptions {
                max_candidates,
                strategy: if exhaustive { Strategy::Exhaustive } else { Strategy::Solver },
            };
            let format = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Records => Format::Records,
            };
            with_threads(threads, || analyze(&file, mean, &opts, format, minimize, timing))
        }
        Command::Construct { alpha, beta, k, output } => cmd_construct(&alpha, &beta, k, output.as_deref()),
        Command::Simulate { file, n, stride, output } => cmd_simulate(&file, n, stride, output.as_deref()),
        Command::Verify { alpha, beta, k, n } => cmd_verify(&alpha, &beta, k, n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("densic: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn with_threads(threads: Option<usize>, run: impl FnOnce() -> Outcome + Send) -> Outcome {
    match threads {
        None => run(),
        Some(0) => Err(Failure::new(2, "--threads must be positive")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::new(1, format!("thread pool: {e}")))?
            .install(run),
    }
}

fn read_automaton(path: &std::path::Path) -> std::result::Result<densic_core::automaton::Dfao, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("read {}: {e}", path.display())))?;
    parse_dfao(&text).map_err(|e| Failure::stage("parse", e))
}

fn analyze(path: &std::path::Path, mean: bool, opts: &SearchOptions, format: Format, minimize: bool, timing: bool) -> Outcome {
    let start = Instant::now();
    let mut d = read_automaton(path)?.normalize();
    if minimize {
        d = d.minimized().normalize();
    }
    let report = if mean {
        let analysis = Analysis::new(&d).map_err(|e| Failure::stage("asymptotics", e))?;
        let (upper, witness_upper) = analysis.limsup(opts).map_err(|e| Failure::stage("limsup", e))?;
        let (lower, witness_lower) = analysis.liminf(opts).map_err(|e| Failure::stage("liminf", e))?;
        Report {
            mean: true,
            analysis,
            extremes: Extremes {
                upper,
                lower,
                witness_upper,
                witness_lower,
                trivial: None,
            },
        }
    } else {
        let set = AutomaticSet::new(d).map_err(|e| Failure::stage("set", e))?;
        let r = densities_with(&set, opts).map_err(|e| Failure::stage("densities", e))?;
        Report {
            mean: false,
            extremes: Extremes {
                upper: r.upper,
                lower: r.lower,
                witness_upper: r.witness_upper,
                witness_lower: r.witness_lower,
                trivial: Some(r.trivial_case),
            },
            analysis: r.analysis,
        }
    };
    let mut text = report.render(format);
    if timing {
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        text.push_str(&match format {
            Format::Text => format!("time {ms:.1} ms\n"),
            Format::Records => format!("time.total_ms={ms:.1}\n"),
        });
    }
    emit(&text)
}

fn emit(text: &str) -> Outcome {
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Failure::new(1, format!("write: {e}")))
}

fn target(alpha: &str, beta: &str, k: u32) -> std::result::Result<DensityTarget, Failure> {
    let parse = |s: &str| parse_rational(s).ok_or_else(|| Failure::new(2, format!("not a rational number: `{s}`")));
    DensityTarget::new(parse(alpha)?, parse(beta)?, k).map_err(|e| Failure::stage("target", e))
}

fn cmd_construct(alpha: &str, beta: &str, k: u32, output: Option<&std::path::Path>) -> Outcome {
    let t = target(alpha, beta, k)?;
    let c = construct(&t).map_err(|e| Failure::stage("construct", e))?;
    let summary = match &c.params {
        Some(p) => format!(
            "K={} C={} A={} B={} states={}\n",
            p.big_k,
            p.c,
            p.a,
            p.b,
            c.set.dfao().state_count()
        ),
        None => format!(
            "trivial target: {} set, states=1\n",
            if t.alpha() == &int(0) { "empty" } else { "full" }
        ),
    };
    let text = serialize_dfao(c.set.dfao());
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::new(1, format!("write {}: {e}", path.display())))?;
            emit(&summary)
        }
        None => {
            eprint!("{summary}");
            emit(&text)
        }
    }
}

fn cmd_simulate(path: &std::path::Path, n: u64, stride: u64, output: Option<&std::path::Path>) -> Outcome {
    let d = read_automaton(path)?;
    let trace = simulate(&d, n, stride).map_err(|e| Failure::stage("simulate", e))?;
    let summary = format!(
        "sup {} at n={}\ninf {} at n={}\n(window n >= {})\n",
        format_decimal(&trace.running_sup.1, 12),
        trace.running_sup.0,
        format_decimal(&trace.running_inf.1, 12),
        trace.running_inf.0,
        trace.window_start
    );
    match output {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| Failure::new(1, format!("create {}: {e}", p.display())))?;
            trace
                .write_csv(io::BufWriter::new(file))
                .map_err(|e| Failure::new(1, format!("write {}: {e}", p.display())))?;
            emit(&summary)
        }
        None => {
            trace
                .write_csv(io::BufWriter::new(io::stdout().lock()))
                .map_err(|e| Failure::new(1, format!("write: {e}")))?;
            eprint!("{summary}");
            Ok(())
        }
    }
}

/// Empirical tolerance for the simulated sup and inf.
const SIM_TOLERANCE: f64 = 0.02;

fn cmd_verify(alpha: &str, beta: &str, k: u32, n: u64) -> Outcome {
    let t = target(alpha, beta, k)?;
    let c = construct(&t).map_err(|e| Failure::stage("construct", e))?;
    let r = densities_with(&c.set, &SearchOptions::default()).map_err(|e| Failure::stage("analyze", e))?;
    let mut out = String::new();
    let check = |out: &mut String, name: &str, ok: bool, detail: String| -> Outcome {
        out.push_str(&format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" }));
        if ok {
            Ok(())
        } else {
            let _ = emit(out);
            Err(Failure::new(5, format!("verification failed at {name}: {detail}")))
        }
    };
    check(&mut out, "lower", &r.lower == t.alpha(), format!("analyzed {} target {}", r.lower, t.alpha()))?;
    check(&mut out, "upper", &r.upper == t.beta(), format!("analyzed {} target {}", r.upper, t.beta()))?;
    let trace = simulate(c.set.dfao(), n, n).map_err(|e| Failure::stage("simulate", e))?;
    let (sup, inf) = (to_f64(&trace.running_sup.1), to_f64(&trace.running_inf.1));
    let (a, b) = (to_f64(t.alpha()), to_f64(t.beta()));
    check(
        &mut out,
        "simulated sup",
        (sup - b).abs() <= SIM_TOLERANCE,
        format!("{} vs {} (tolerance {SIM_TOLERANCE})", format_decimal(&trace.running_sup.1, 12), t.beta()),
    )?;
    check(
        &mut out,
        "simulated inf",
        (inf - a).abs() <= SIM_TOLERANCE,
        format!("{} vs {} (tolerance {SIM_TOLERANCE})", format_decimal(&trace.running_inf.1, 12), t.alpha()),
    )?;
    emit(&out)
}
