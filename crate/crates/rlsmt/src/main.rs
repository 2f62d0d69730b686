use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rlsmt::bench::{self, BenchRow, Family, PairOp};
use rlsmt::format::parse_problem;
use rlsmt::smt::{compile_problem, Mode, Problem};
use rlsmt::solver::{solve, Engine, SolverOptions, Status};
use rlsmt::ts::aiger;
use rlsmt::ts::TransitionSystem;

/// Exit codes mirror the answer so scripts can branch without parsing:
/// 10 sat, 20 unsat, 30 unknown, 1 error.
const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNKNOWN: u8 = 30;

#[derive(Parser)]
#[command(
    name = "rlsmt",
    version,
    about = "Decides Boolean combinations of regex membership constraints on string variables"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a problem file ('-' or nothing reads stdin)
    Solve {
        #[arg(default_value = "-")]
        file: String,
        #[command(flatten)]
        opts: CommonOpts,
        /// Write the encoded transition system as ASCII AIGER
        /// (reversed mode only)
        #[arg(long, value_name = "PATH")]
        emit_aiger: Option<PathBuf>,
        /// Encode (and emit, if asked) but skip solving
        #[arg(long)]
        compile_only: bool,
        /// Print only the verdict, no variable assignments
        #[arg(long)]
        no_witness: bool,
    },
    /// Run the scaling families and print one CSV row per instance
    Bench {
        /// Family to run (repeatable); default is all four:
        /// sat-diff, unsat-diff, sat-int, unsat-int
        #[arg(long = "family", value_name = "NAME")]
        families: Vec<String>,
        /// Smallest instance size
        #[arg(long, default_value_t = 1, value_name = "A")]
        n_min: usize,
        /// Largest instance size
        #[arg(long, default_value_t = 10, value_name = "B")]
        n_max: usize,
        #[command(flatten)]
        opts: CommonOpts,
        /// Write the CSV here (progress still streams to stderr)
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Solve pairwise combinations of regexes from a file, one per line
    Pairs {
        /// File of regexes; blank lines are skipped
        #[arg(long, value_name = "FILE")]
        regex_file: PathBuf,
        /// intersect: x in both; difference: x in the first but not
        /// the second
        #[arg(long, value_enum)]
        op: OpArg,
        #[command(flatten)]
        opts: CommonOpts,
        /// Write the CSV here (progress still streams to stderr)
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonOpts {
    #[arg(long, value_enum, default_value_t = EngineArg::Portfolio)]
    engine: EngineArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Reversed)]
    mode: ModeArg,
    /// Longest run the bounded engine searches for
    #[arg(long, default_value_t = 300)]
    max_bound: usize,
    /// Frame cap for the inductive engine
    #[arg(long, default_value_t = 300)]
    max_frames: usize,
    /// State cap for the explicit engine
    #[arg(long, default_value_t = 2_000_000)]
    state_limit: usize,
    /// Wall-clock budget per problem, in milliseconds
    #[arg(long, value_name = "N")]
    timeout_ms: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Bmc,
    Ic3,
    Explicit,
    Portfolio,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Forward,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Intersect,
    Difference,
}

impl CommonOpts {
    fn to_solver_options(&self) -> SolverOptions {
        SolverOptions {
            engine: match self.engine {
                EngineArg::Bmc => Engine::Bmc,
                EngineArg::Ic3 => Engine::Ic3,
                EngineArg::Explicit => Engine::Explicit,
                EngineArg::Portfolio => Engine::Portfolio,
            },
            mode: match self.mode {
                ModeArg::Forward => Mode::Forward,
                ModeArg::Reversed => Mode::Reversed,
            },
            max_bound: self.max_bound,
            max_frames: self.max_frames,
            state_limit: self.state_limit,
            timeout: self.timeout_ms.map(Duration::from_millis),
        }
    }
}

fn main() -> ExitCode {
    let run = || -> Result<u8, String> {
        match Cli::parse().cmd {
            Cmd::Solve { file, opts, emit_aiger, compile_only, no_witness } => {
                run_solve(&file, &opts, emit_aiger.as_deref(), compile_only, no_witness)
            }
            Cmd::Bench { families, n_min, n_max, opts, csv } => {
                run_bench(&families, n_min, n_max, &opts, csv.as_deref())?;
                Ok(0)
            }
            Cmd::Pairs { regex_file, op, opts, csv } => {
                run_pairs(&regex_file, op, &opts, csv.as_deref())?;
                Ok(0)
            }
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("reading {file}: {e}"))
    }
}

fn run_solve(
    file: &str,
    common: &CommonOpts,
    emit_aiger: Option<&Path>,
    compile_only: bool,
    no_witness: bool,
) -> Result<u8, String> {
    let opts = common.to_solver_options();
    let problem = parse_problem(&read_input(file)?).map_err(|e| e.to_string())?;

    if let Some(path) = emit_aiger {
        if opts.mode != Mode::Reversed {
            return Err("--emit-aiger needs --mode reversed".into());
        }
        let ts = encode(&problem, Mode::Reversed)?;
        let aig = aiger::from_ts(&ts)?;
        std::fs::write(path, aig.to_ascii())
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    } else if compile_only {
        encode(&problem, opts.mode)?;
    }
    if compile_only {
        return Ok(0);
    }

    let solution = solve(&problem, &opts)?;
    let code = match &solution.status {
        Status::Sat => {
            println!("sat");
            if !no_witness {
                for (name, word) in solution.witness.as_deref().unwrap_or(&[]) {
                    println!("{name} = \"{}\"", quote_bytes(word));
                }
            }
            EXIT_SAT
        }
        Status::Unsat => {
            println!("unsat");
            EXIT_UNSAT
        }
        Status::Unknown(reason) => {
            println!("unknown");
            eprintln!("gave up: {reason}");
            EXIT_UNKNOWN
        }
    };
    eprintln!(
        "; engine={} depth={} time={}ms",
        solution.engine,
        solution.depth,
        solution.elapsed.as_millis()
    );
    Ok(code)
}

fn encode(problem: &Problem, mode: Mode) -> Result<TransitionSystem, String> {
    let bfa = compile_problem(problem, mode).map_err(|e| e.to_string())?;
    Ok(TransitionSystem::encode(&bfa))
}

/// Streams rows as they finish — to stdout, or to stderr with the full
/// CSV also written to `csv` at the end.
struct CsvSink<'a> {
    path: Option<&'a Path>,
    lines: Vec<String>,
}

impl<'a> CsvSink<'a> {
    fn new(path: Option<&'a Path>) -> CsvSink<'a> {
        let sink = CsvSink { path, lines: vec![bench::CSV_HEADER.to_string()] };
        sink.emit(bench::CSV_HEADER);
        sink
    }

    fn emit(&self, line: &str) {
        if self.path.is_some() {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }

    fn row(&mut self, row: &BenchRow) {
        let line = bench::csv_line(row);
        self.emit(&line);
        self.lines.push(line);
    }

    fn finish(mut self) -> Result<(), String> {
        if let Some(path) = self.path {
            self.lines.push(String::new()); // trailing newline
            std::fs::write(path, self.lines.join("\n"))
                .map_err(|e| format!("writing {}: {e}", path.display()))?;
        }
        Ok(())
    }
}

fn run_bench(
    family_names: &[String],
    n_min: usize,
    n_max: usize,
    common: &CommonOpts,
    csv: Option<&Path>,
) -> Result<(), String> {
    if n_min < 1 || n_max > 64 || n_min > n_max {
        return Err(format!("need 1 <= n-min <= n-max <= 64, got {n_min}..{n_max}"));
    }
    let families: Vec<Family> = if family_names.is_empty() {
        Family::ALL.to_vec()
    } else {
        family_names
            .iter()
            .map(|n| Family::by_name(n).ok_or_else(|| format!("unknown family '{n}'")))
            .collect::<Result<_, _>>()?
    };
    let opts = common.to_solver_options();
    let mut sink = CsvSink::new(csv);
    bench::run_families(&families, n_min, n_max, &opts, &mut |row| sink.row(row));
    sink.finish()
}

fn run_pairs(
    regex_file: &Path,
    op: OpArg,
    common: &CommonOpts,
    csv: Option<&Path>,
) -> Result<(), String> {
    let text = std::fs::read_to_string(regex_file)
        .map_err(|e| format!("reading {}: {e}", regex_file.display()))?;
    let regexes: Vec<String> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
    if regexes.len() < 2 {
        return Err("need at least two regexes to form pairs".into());
    }
    let op = match op {
        OpArg::Intersect => PairOp::Intersect,
        OpArg::Difference => PairOp::Difference,
    };
    let opts = common.to_solver_options();
    let mut sink = CsvSink::new(csv);
    bench::run_pairs(&regexes, op, &opts, &mut |row| sink.row(row));
    sink.finish()
}

/// Escapes a byte string the same way the input format quotes regexes:
/// printable ASCII stays, `"` and `\` get backslashes, the rest is
/// `\xNN`.
fn quote_bytes(word: &[u8]) -> String {
    let mut out = String::new();
    for &b in word {
        match b {
            b'"' => out.push_str("\\\""),
            b'\\' => out.push_str("\\\\"),
            0x20..=0x7e => out.push(b as char),
            b'\n' => out.push_str("\\n"),
            b'\t' => out.push_str("\\t"),
            other => out.push_str(&format!("\\x{other:02x}")),
        }
    }
    out
}
