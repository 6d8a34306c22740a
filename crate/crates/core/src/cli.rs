//! Command-line front end. Exit codes: 0 found/pass, 1 negative result,
//! 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith;
use crate::complement::{self, PeriodicSet};
use crate::finset::{self, FiniteSet, FormWitness};
use crate::harness::{self, DeficitTrace};
use crate::tiling::{self, IdentityReport};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const DEFAULT_TRACE_HORIZON: u64 = 10_000;
const DEFAULT_MMAX: u64 = 200;

#[derive(Parser, Debug)]
#[command(
    name = "addcomp",
    version,
    about = "Additive complements of finite sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a set is {a + i*m^s + k_i*m^(s+1)}
    DetectForm {
        #[command(flatten)]
        set: SetArgs,
        /// Form modulus (defaults to the set size)
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a set and an exact complement, then verify them
    Construct {
        /// Two-factor family: A = {u + v*d1*d2}, B = {w*d1} mod d1*d2^2
        #[arg(long, requires = "d2")]
        d1: Option<u64>,
        #[arg(long, requires = "d1")]
        d2: Option<u64>,
        #[command(flatten)]
        set: SetArgs,
        /// Last n checked (defaults to the certification minimum)
        #[arg(long)]
        horizon: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search exact cyclic complements for M = |A|, 2|A|, ... <= mmax
    Tile {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = DEFAULT_MMAX)]
        mmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate A(x), B(x), A(x)B(x) - x as CSV
    Trace {
        #[command(flatten)]
        set: SetArgs,
        /// `greedy`, a periodic-set JSON file, or a set file
        #[arg(long)]
        complement: String,
        /// Last x tabulated
        #[arg(long, default_value_t = DEFAULT_TRACE_HORIZON)]
        horizon: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the generating-function identities for a periodic complement
    Verify {
        #[command(flatten)]
        set: SetArgs,
        /// Periodic-set JSON file
        #[arg(long)]
        complement: PathBuf,
        /// Last n checked (defaults to the certification minimum)
        #[arg(long)]
        horizon: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct SetArgs {
    /// Inline set, e.g. "0,1,5" or "0 1 5"
    set: Option<String>,
    /// Read the set from a file instead
    #[arg(long, conflicts_with = "set")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Failure carrying the exit code to report.
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

struct Outcome {
    code: i32,
    body: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out_path = match &cli.command {
        Command::DetectForm { output, .. }
        | Command::Construct { output, .. }
        | Command::Tile { output, .. }
        | Command::Trace { output, .. }
        | Command::Verify { output, .. } => output.out.clone(),
    };
    match dispatch(cli.command, stderr) {
        Ok(Outcome { code, body }) => {
            let written = match out_path {
                Some(path) => fs::write(&path, &body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_INPUT
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, stderr: &mut dyn Write) -> Result<Outcome, Failure> {
    match command {
        Command::DetectForm { set, m, output } => detect_form(&read_set(&set)?, m, output.format),
        Command::Construct {
            d1,
            d2,
            set,
            horizon,
            output,
        } => {
            let (a, b) = match (d1, d2) {
                (Some(d1), Some(d2)) => {
                    complement::theorem2_sets(d1, d2).map_err(|e| input_error(e.to_string()))?
                }
                _ => {
                    let a = read_set(&set)?;
                    let Some(w) = witness_of(&a)? else {
                        return Ok(Outcome {
                            code: EXIT_NEGATIVE,
                            body: render_value(
                                &json!({"schema": SCHEMA, "A": a, "B": null}),
                                output.format,
                            ),
                        });
                    };
                    let b = complement::canonical_complement(&w)
                        .map_err(|e| input_error(e.to_string()))?;
                    (a, b)
                }
            };
            construct(&a, &b, horizon, output.format)
        }
        Command::Tile { set, mmax, output } => tile(&read_set(&set)?, mmax, output.format),
        Command::Trace {
            set,
            complement,
            horizon,
            output,
        } => trace(
            &read_set(&set)?,
            &complement,
            horizon,
            output.format,
            stderr,
        ),
        Command::Verify {
            set,
            complement,
            horizon,
            output,
        } => {
            let a = read_set(&set)?;
            let b = read_periodic(&complement)?;
            let report = identity_check(&a, &b, horizon)?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let value = json!({"schema": SCHEMA, "A": a, "B": b, "identity": report});
            Ok(Outcome {
                code,
                body: render_report(&value, &report, output.format),
            })
        }
    }
}

fn read_set(args: &SetArgs) -> Result<FiniteSet, Failure> {
    let text = match (&args.set, &args.input) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(input_error("no input set given")),
    };
    let set: FiniteSet = text
        .parse()
        .map_err(|e: finset::SetError| input_error(e.to_string()))?;
    if set.is_empty() {
        return Err(input_error("input set is empty"));
    }
    Ok(set)
}

fn read_periodic(path: &PathBuf) -> Result<PeriodicSet, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input_error(format!("bad periodic set in {}: {e}", path.display())))
}

fn witness_json(w: &FormWitness) -> Value {
    json!({
        "m": w.m,
        "s": w.s,
        "a": w.a,
        "k": w.k,
        "assignment": w.assignment().unwrap_or_default(),
    })
}

fn witness_text(w: &FormWitness) -> String {
    let k: Vec<String> = w.k.iter().map(i64::to_string).collect();
    format!("m={} s={} a={} k=[{}]", w.m, w.s, w.a, k.join(","))
}

fn witness_of(a: &FiniteSet) -> Result<Option<FormWitness>, Failure> {
    finset::detect_form(a, a.len() as u64).map_err(|e| input_error(e.to_string()))
}

fn detect_form(a: &FiniteSet, m: Option<u64>, format: Option<Format>) -> Result<Outcome, Failure> {
    let m = m.unwrap_or(a.len() as u64);
    let witness = finset::detect_form(a, m).map_err(|e| input_error(e.to_string()))?;
    let prime = m == a.len() as u64 && arith::is_prime(m);
    let (cyclotomic, agreement) = if prime {
        let cyc = finset::cyclotomic_form_witness(a).map_err(|e| input_error(e.to_string()))?;
        let realizes = |w: &FormWitness| finset::realize_form(w).as_ref() == Ok(a);
        let agree = match (&witness, &cyc) {
            (Some(w), Some((_, c))) => realizes(w) && realizes(c) && w.s == c.s,
            (None, None) => true,
            _ => false,
        };
        let value = match &cyc {
            Some((s, w)) => json!({"s": s, "witness": witness_json(w)}),
            None => Value::Null,
        };
        (value, json!(agree))
    } else {
        (json!("unknown"), Value::Null)
    };
    let code = if witness.is_some() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let body = match format.unwrap_or(Format::Json) {
        Format::Text => match &witness {
            Some(w) => format!("{}\n", witness_text(w)),
            None => "none\n".to_string(),
        },
        _ => render_value(
            &json!({
                "schema": SCHEMA,
                "set": a,
                "m": m,
                "witness": witness.as_ref().map(witness_json),
                "cyclotomic": cyclotomic,
                "agreement": agreement,
            }),
            format,
        ),
    };
    Ok(Outcome { code, body })
}

fn identity_check(
    a: &FiniteSet,
    b: &PeriodicSet,
    horizon: Option<u64>,
) -> Result<IdentityReport, Failure> {
    let horizon = horizon.unwrap_or_else(|| tiling::minimum_horizon(a, b));
    tiling::periodic_identity_check(a, b, horizon).map_err(|e| input_error(e.to_string()))
}

fn construct(
    a: &FiniteSet,
    b: &PeriodicSet,
    horizon: Option<u64>,
    format: Option<Format>,
) -> Result<Outcome, Failure> {
    let report = identity_check(a, b, horizon)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let value = json!({"schema": SCHEMA, "A": a, "B": b, "identity": report});
    Ok(Outcome {
        code,
        body: render_report(&value, &report, format),
    })
}

fn render_report(value: &Value, report: &IdentityReport, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Json) {
        Format::Text => {
            let mut s = format!(
                "verdict: {}\nn1: {}\nsize product: {} = {}\n",
                serde_json::to_value(&report.verdict).expect("serializable")["status"]
                    .as_str()
                    .unwrap_or("?"),
                report.n1,
                report.size_product.0,
                report.size_product.1,
            );
            if let Some(m) = &report.first_mismatch {
                s += &format!(
                    "first mismatch: z^{} lhs {} rhs {}\n",
                    m.exponent, m.lhs, m.rhs
                );
            }
            s
        }
        _ => render_value(value, format),
    }
}

fn tile(a: &FiniteSet, mmax: u64, format: Option<Format>) -> Result<Outcome, Failure> {
    if mmax < a.len() as u64 {
        return Err(input_error(format!(
            "--mmax {mmax} is below the set size {}",
            a.len()
        )));
    }
    let sweep = tiling::search_cyclic_complements(a, mmax);
    let code = if sweep.tilings.is_empty() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    let body = match format.unwrap_or(Format::Json) {
        Format::Text => {
            let mut s = String::new();
            for t in &sweep.tilings {
                s += &format!("M={} T={:?}\n", t.modulus, t.t);
            }
            if sweep.tilings.is_empty() {
                s += &format!("no tiling for M in {:?}\n", sweep.tried);
            }
            s
        }
        _ => render_value(
            &json!({
                "schema": SCHEMA,
                "set": a,
                "mmax": mmax,
                "tilings": sweep.tilings,
                "tried": sweep.tried,
            }),
            format,
        ),
    };
    Ok(Outcome { code, body })
}

enum ComplementSpec {
    Finite(FiniteSet),
    Periodic(PeriodicSet),
}

fn read_complement(spec: &str, a: &FiniteSet, horizon: u64) -> Result<ComplementSpec, Failure> {
    if spec == "greedy" {
        return complement::greedy_complement(a, horizon)
            .map(ComplementSpec::Finite)
            .map_err(|e| input_error(e.to_string()));
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| input_error(format!("cannot read complement {spec}: {e}")))?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text)
            .map(ComplementSpec::Periodic)
            .map_err(|e| input_error(format!("bad periodic set in {spec}: {e}")))
    } else {
        text.parse()
            .map(ComplementSpec::Finite)
            .map_err(|e: finset::SetError| input_error(format!("bad set in {spec}: {e}")))
    }
}

fn trace(
    a: &FiniteSet,
    spec: &str,
    horizon: u64,
    format: Option<Format>,
    stderr: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let top = a.max().unwrap_or(0);
    if horizon < top {
        return Err(input_error(format!(
            "--horizon {horizon} is below max(A) = {top}"
        )));
    }
    let t: DeficitTrace = match read_complement(spec, a, horizon)? {
        ComplementSpec::Finite(b) => harness::deficit_trace(a, &b, horizon),
        ComplementSpec::Periodic(b) => harness::deficit_trace(a, &b, horizon),
    };
    let windows = harness::decade_windows(horizon);
    if !windows.is_empty() {
        if let Ok(probe) = harness::divergence_probe(&t, &windows) {
            let mins: Vec<String> = probe
                .windows
                .iter()
                .map(|w| format!("[{},{}]:{}", w.start, w.end, w.min))
                .collect();
            let verdict = serde_json::to_value(probe.verdict).expect("serializable");
            let _ = writeln!(
                stderr,
                "window minima {} -> {}",
                mins.join(" "),
                verdict.as_str().unwrap_or("?")
            );
        }
    }
    let body = match format.unwrap_or(Format::Csv) {
        Format::Json => render_value(&json!({"schema": SCHEMA, "rows": t.rows}), format),
        _ => {
            let mut buf = Vec::new();
            t.write_csv(&mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("ascii")
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        body,
    })
}

fn render_value(value: &Value, format: Option<Format>) -> String {
    match format {
        Some(Format::Text) => format!("{value}\n"),
        _ => format!(
            "{}\n",
            serde_json::to_string_pretty(value).expect("serializable")
        ),
    }
}
