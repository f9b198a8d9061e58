//! `bid`: classify, iterate and inspect finitary inductive definitions, and
//! run Turing machines through their operators.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bid::engine::{
    read_trace, write_trace, EngineError, InflationMode, Inflationary, Operator, TraceVerdict, DEFAULT_EXHAUSTIVE_CAP,
};
use bid::eval::{Env, EvalError, Limits};
use bid::parser::{parse_program, Program, SyntaxError};
use bid::syntax::classify;
use bid::tm::{Flavor, Machine, TmError};
use bid::BitStr;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bid", version, about = "Finitary inductive definitions over bounded arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Iteration budget: steps run directly before period detection is
    /// required, and the cap on traces and machine runs.
    #[arg(long, global = true, env = "BID_BUDGET", default_value_t = 1 << 24,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the least class of every definition in a file.
    Classify { file: PathBuf },
    /// Apply an operator `n` times.
    Iterate {
        #[command(flatten)]
        op: OpArgs,
        /// Number of steps (any natural number).
        #[arg(short = 'n', long)]
        steps: BigUint,
        #[arg(long)]
        start: Option<BitStr>,
        /// Write every visited state as a JSONL trace.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Least fixed point of an inflationary operator, reached from ∅.
    Fixpoint {
        #[command(flatten)]
        op: OpArgs,
    },
    /// Preperiod `u` and period `v` of the iteration, with `U` and `V` as strings.
    Period {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        start: Option<BitStr>,
    },
    /// Decide whether `Y ⊆ φ(Y)` for every state.
    Inflationary {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// States tried in sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Check a JSONL trace against the operator.
    VerifyTrace {
        #[command(flatten)]
        op: OpArgs,
        trace: PathBuf,
        #[arg(long)]
        start: Option<BitStr>,
    },
    /// Run a Turing machine description on an input.
    RunTm {
        machine: PathBuf,
        input: BitStr,
        /// Defaults to ptime for time bounds and pspace for space bounds.
        #[arg(long)]
        flavor: Option<Flavor>,
        /// Simulate the machine directly instead of through its operator.
        #[arg(long)]
        direct: bool,
    },
}

#[derive(Args)]
struct OpArgs {
    /// File of definitions.
    file: PathBuf,
    /// Definition to use as the operator.
    name: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    width: u64,
    /// Value of an extra variable, as `k=5` or `Z=0b101`.
    #[arg(long = "set", value_name = "VAR=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Syntactic,
    Sampled,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
    /// Output was cut off by a closed pipe, as with `| head`.
    broken_pipe: bool,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), broken_pipe: false }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match &e {
            EngineError::ResourceLimit { .. } | EngineError::Eval(EvalError::ResourceLimit { .. }) => 3,
            EngineError::NotSigma0(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TmError> for Failure {
    fn from(e: TmError) -> Self {
        match e {
            TmError::Engine(e) => e.into(),
            TmError::Budget(_) => Failure::new(3, e.to_string()),
            TmError::BoundExceeded { .. } | TmError::OutOfSpace { .. } => Failure::new(4, e.to_string()),
            e => Failure::new(1, e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { broken_pipe: e.kind() == io::ErrorKind::BrokenPipe, ..Failure::new(1, e.to_string()) }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) if f.broken_pipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bid: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits { iterations: cli.budget, ..Limits::default() }
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    parse_program(&text).map_err(|e: SyntaxError| Failure::new(2, format!("{}: {e}", path.display())))
}

fn operator(cli: &Cli, args: &OpArgs) -> Result<Operator, Failure> {
    let program = load_program(&args.file)?;
    let def = program
        .get(&args.name)
        .ok_or_else(|| Failure::new(2, format!("{}: no definition named {}", args.file.display(), args.name)))?;
    let mut env = Env::new().with_limits(limits(cli));
    for item in &args.set {
        let (name, value) =
            item.split_once('=').ok_or_else(|| Failure::new(2, format!("--set {item}: expected VAR=VALUE")))?;
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            let s: BitStr = value.parse().map_err(|e| Failure::new(2, format!("--set {item}: {e}")))?;
            env.set_str(name, s);
        } else {
            let n: BigUint = value.parse().map_err(|e| Failure::new(2, format!("--set {item}: {e}")))?;
            env.set_num(name, n);
        }
    }
    let width = usize::try_from(args.width).map_err(|_| Failure::new(3, "width does not fit in memory"))?;
    Ok(Operator::new(def.clone(), width, &env)?)
}

/// Writes one result: `text` in text mode, `json` as a single line otherwise.
fn emit(cli: &Cli, text: impl FnOnce() -> String, json: impl Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match cli.format {
        Format::Text => writeln!(out, "{}", text())?,
        Format::Json => {
            serde_json::to_writer(&mut out, &json).map_err(|e| Failure::new(1, e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_trace_file(path: &Path, trace: &bid::engine::IterationTrace) -> Result<(), Failure> {
    let mut out = BufWriter::new(File::create(path)?);
    write_trace(&mut out, trace)?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { file } => {
            let program = load_program(file)?;
            #[derive(Serialize)]
            struct Row {
                name: String,
                class: String,
            }
            let rows: Vec<Row> = program
                .items
                .iter()
                .map(|(d, _)| Row { name: d.name.clone(), class: classify(&d.body).to_string() })
                .collect();
            emit(cli, || rows.iter().map(|r| format!("{}: {}", r.name, r.class)).collect::<Vec<_>>().join("\n"), &rows)
        }
        Command::Iterate { op, steps, start, trace_out } => {
            let op = operator(cli, op)?;
            let start = start.clone().unwrap_or_default();
            let state = match trace_out {
                Some(path) => {
                    let n = steps.to_string().parse::<u64>().ok().filter(|&n| n <= cli.budget);
                    let Some(n) = n else {
                        // Keep what fits in the budget, then report the overrun.
                        write_trace_file(path, &op.iterate_with_trace(&start, cli.budget)?)?;
                        return Err(Failure::new(
                            3,
                            format!("resource limit: trace of {steps} steps exceeds the budget {}; wrote {} steps", cli.budget, cli.budget),
                        ));
                    };
                    let trace = op.iterate_with_trace(&start, n)?;
                    write_trace_file(path, &trace)?;
                    trace.states.last().cloned().unwrap_or_default()
                }
                None => op.iterate_natural(&start, steps, cli.budget)?,
            };
            #[derive(Serialize)]
            struct Out {
                state: String,
                steps: String,
                width: usize,
            }
            let out = Out { state: state.to_string(), steps: steps.to_string(), width: op.width() };
            emit(cli, || out.state.clone(), &out)
        }
        Command::Fixpoint { op } => {
            let op = operator(cli, op)?;
            let (k, state) = op.find_fixpoint_inflationary()?;
            #[derive(Serialize)]
            struct Out {
                k: u64,
                fixpoint: String,
            }
            let out = Out { k, fixpoint: state.to_string() };
            emit(cli, || format!("k={} fixpoint={}", out.k, out.fixpoint), &out)
        }
        Command::Period { op, start } => {
            let op = operator(cli, op)?;
            let report = op.find_period(&start.clone().unwrap_or_default())?;
            let (u_str, v_str) = report.witnesses();
            #[derive(Serialize)]
            struct Out {
                u: u64,
                v: u64,
                #[serde(rename = "U")]
                u_string: String,
                #[serde(rename = "V")]
                v_string: String,
                state_at_u: String,
            }
            let out = Out {
                u: report.u,
                v: report.v,
                u_string: u_str.to_string(),
                v_string: v_str.to_string(),
                state_at_u: report.state_at_u.to_string(),
            };
            emit(cli, || format!("u={} v={} U={} V={}", out.u, out.v, out.u_string, out.v_string), &out)
        }
        Command::Inflationary { op, mode, samples } => {
            let op = operator(cli, op)?;
            let mode = match mode {
                Mode::Exhaustive => InflationMode::Exhaustive { cap: DEFAULT_EXHAUSTIVE_CAP },
                Mode::Syntactic => InflationMode::Syntactic,
                Mode::Sampled => InflationMode::Sampled { samples: *samples, seed: cli.seed },
            };
            #[derive(Serialize)]
            struct Out {
                inflationary: &'static str,
                #[serde(skip_serializing_if = "Option::is_none")]
                state: Option<String>,
                #[serde(skip_serializing_if = "Option::is_none")]
                index: Option<usize>,
            }
            let out = match op.is_inflationary(mode)? {
                Inflationary::Yes => Out { inflationary: "yes", state: None, index: None },
                Inflationary::Unknown => Out { inflationary: "unknown", state: None, index: None },
                Inflationary::No { state, index } => {
                    Out { inflationary: "no", state: Some(state.to_string()), index: Some(index) }
                }
            };
            emit(
                cli,
                || match (&out.state, out.index) {
                    (Some(s), Some(i)) => format!("no state={s} index={i}"),
                    _ => out.inflationary.to_string(),
                },
                &out,
            )
        }
        Command::VerifyTrace { op, trace, start } => {
            let op = operator(cli, op)?;
            let file = File::open(trace).map_err(|e| Failure::new(1, format!("{}: {e}", trace.display())))?;
            let t = read_trace(BufReader::new(file)).map_err(|e| Failure::new(2, format!("{}: {e}", trace.display())))?;
            if t.width != op.width() {
                return Err(Failure::new(1, format!("trace width {} differs from --width {}", t.width, op.width())));
            }
            let verdict = op.verify_trace(&t, &start.clone().unwrap_or_default())?;
            #[derive(Serialize)]
            struct Out {
                ok: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                fault: Option<usize>,
                states: usize,
            }
            let out = match verdict {
                TraceVerdict::Ok => Out { ok: true, fault: None, states: t.states.len() },
                TraceVerdict::Fault(j) => Out { ok: false, fault: Some(j), states: t.states.len() },
            };
            emit(
                cli,
                || match out.fault {
                    None => format!("ok states={}", out.states),
                    Some(j) => format!("fault index={j}"),
                },
                &out,
            )?;
            if out.ok {
                Ok(())
            } else {
                Err(Failure::new(1, "trace does not follow the operator"))
            }
        }
        Command::RunTm { machine, input, flavor, direct } => {
            let m = Machine::load(machine)?;
            #[derive(Serialize)]
            struct Out {
                output: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                iterations: Option<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                steps: Option<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                width: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                flavor: Option<String>,
            }
            let out = if *direct {
                let run = m.run_direct(input, cli.budget)?;
                Out { output: run.output.to_string(), iterations: None, steps: Some(run.steps), width: None, flavor: None }
            } else {
                let flavor = flavor.unwrap_or(Flavor::for_bound(m.bound));
                let run = m.run_via_id(input, flavor, limits(cli))?;
                Out {
                    output: run.output.to_string(),
                    iterations: Some(run.iterations),
                    steps: None,
                    width: Some(run.width),
                    flavor: Some(flavor.to_string()),
                }
            };
            emit(
                cli,
                || match (out.iterations, out.width, out.steps) {
                    (Some(k), Some(w), _) => format!("output={} iterations={k} width={w}", out.output),
                    (_, _, Some(s)) => format!("output={} steps={s}", out.output),
                    _ => unreachable!(),
                },
                &out,
            )
        }
    }
}
