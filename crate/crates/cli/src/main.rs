use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use entcert::audit::{self, AuditSpec, SweepGrid};
use entcert::bounds::{solve_s0, thm2_bound, thm5_bound, TheoremId};
use entcert::entropy::{shannon, UnifiedParams};
use entcert::measures::{self, MeasureValue};
use entcert::qstate::{w_state, Bipartition};
use entcert::Execution;

mod parse;

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(name = "entcert", version, about = "Entanglement measures and monogamy/polygamy bound certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure across a bipartition.
    Measure {
        /// ghz:N, w:N, haar:N:SEED, schmidt:λ0,λ1,λ2,λ3,λ4,θ, or a JSON state file
        #[arg(long)]
        state: String,
        #[arg(long, value_enum)]
        measure: MeasureKind,
        /// 1-based, e.g. "1|2,3"
        #[arg(long)]
        partition: String,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Evaluate one bound; exit 0 when it certifies, 1 when it does not.
    Certify(CertifyArgs),
    /// Run a seeded audit over Haar-random states.
    Audit {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Defaults to $ENTCERT_SEED, then 20240601.
        #[arg(long)]
        seed: Option<u64>,
        /// name=value or name=lo:hi; repeatable
        #[arg(long = "param", value_parser = parse::param_range)]
        params: Vec<(String, audit::ParamRange)>,
        #[arg(long, default_value_t = audit::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        sequential: bool,
    },
    /// Tabulate an example over a parameter grid as CSV.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        example: u8,
        /// e.g. alpha=0:1:0.02,r=2:3:0.02 or beta=1:3:0.05,s=0.9/1/1.1
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 1.71)]
        k: f64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Reproduce the numbers quoted for a worked example.
    Example {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureKind {
    Concurrence,
    Eof,
    Unified,
}

#[derive(clap::Args)]
struct CertifyArgs {
    #[arg(long)]
    theorem: TheoremId,
    /// Not needed for the scalar lemmas.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Entropy parameter s, or the polygamy exponent for eq35/thm5/thm6.
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long)]
    q: Option<f64>,
    /// Left block size A1..Am.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    /// Nonincreasing sequence for lemma2, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, default_value_t = audit::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

/// Rounds to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(sig12(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit(value: impl serde::Serialize) -> Result<(), String> {
    let mut v = serde_json::to_value(value).map_err(|e| e.to_string())?;
    round_json(&mut v);
    let text = serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?;
    write_stdout(&(text + "\n"))
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn write_stdout(text: &str) -> Result<(), String> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other.map_err(|e| format!("stdout: {e}")),
    }
}

fn core(e: entcert::Error) -> String {
    e.to_string()
}

fn cmd_measure(state: &str, kind: MeasureKind, partition: &str, q: Option<f64>, s: Option<f64>) -> Result<(), String> {
    let psi = parse::state(state)?;
    let part = Bipartition::parse(partition).map_err(core)?;
    let (value, params): (MeasureValue, Value) = match kind {
        MeasureKind::Concurrence => (measures::concurrence(&psi, &part).map_err(core)?, json!({})),
        MeasureKind::Eof => (measures::eof(&psi, &part).map_err(core)?, json!({})),
        MeasureKind::Unified => {
            let (Some(q), Some(s)) = (q, s) else {
                return Err("--measure unified needs --q and --s".into());
            };
            let p = UnifiedParams::new(q, s).map_err(core)?;
            (measures::unified_ent(&psi, &part, p).map_err(core)?, json!({ "q": q, "s": s }))
        }
    };
    emit(json!({ "value": value.value, "method": value.method, "params": params }))
}

fn cmd_certify(a: &CertifyArgs) -> Result<bool, String> {
    let psi = a.state.as_deref().map(parse::state).transpose()?;
    let n = psi.as_ref().map_or(0, |p| p.num_subsystems());
    let theorem = a.theorem;
    let flag = |name: &str, v: Option<f64>| v.ok_or_else(|| format!("{theorem} needs --{name}"));
    let mut params = BTreeMap::new();
    for (name, _, _) in audit::default_ranges(theorem, n) {
        let value = match name {
            "alpha" => flag("alpha", a.alpha)?,
            "beta" => flag("beta", a.beta)?,
            "r" => flag("r", a.r)?,
            "k" => a.k,
            "q" => flag("q", a.q)?,
            "s" | "s_entropy" => flag("s", a.s)?,
            "m" => flag("m", a.m.map(|m| m as f64))?,
            "x" => flag("x", a.x)?,
            "y" => flag("y", a.y)?,
            "t_over_k" => flag("t", a.t)? / a.k,
            "len" => a.p.len() as f64,
            other => return Err(format!("unhandled parameter {other}")),
        };
        params.insert(name.to_string(), value);
    }
    let report = audit::evaluate(theorem, psi.as_ref(), &params, &a.p).map_err(core)?;
    let ok = report.certifies(a.tolerance);
    emit(&report)?;
    Ok(ok)
}

fn base_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("ENTCERT_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("ENTCERT_SEED='{text}' is not an unsigned 64-bit integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn sweep_csv(grid: &SweepGrid) -> String {
    let mut out = String::from(audit::CSV_HEADER);
    out.push('\n');
    for r in &grid.rows {
        let cells = [r.axis1, r.axis2, r.lhs, r.rhs_new, r.rhs_prior, r.diff].map(sig12);
        let _ = writeln!(out, "{},{},{},{},{},{}", cells[0], cells[1], cells[2], cells[3], cells[4], cells[5]);
    }
    out
}

fn cmd_sweep(example: u8, grid: Option<&str>, k: f64, exec: Execution) -> Result<SweepGrid, String> {
    let default = if example == 1 {
        "alpha=0:1:0.02,r=2:3:0.02"
    } else {
        "beta=1:3:0.05,s=0.9/1/1.1"
    };
    let axes = parse::grid(grid.unwrap_or(default))?;
    let [a, b]: [audit::Axis; 2] = axes
        .try_into()
        .map_err(|v: Vec<_>| format!("grid needs two axes, got {}", v.len()))?;
    if example == 1 {
        audit::sweep_example1(a, b, k, exec).map_err(core)
    } else {
        audit::sweep_example2(a, b, exec).map_err(core)
    }
}

fn row(quantity: &str, quoted: f64, computed: f64) -> Value {
    json!({
        "quantity": quantity,
        "quoted": quoted,
        "computed": computed,
        "deviation": (computed - quoted).abs(),
    })
}

fn cmd_example(id: u8) -> Result<Value, String> {
    if id == 1 {
        let psi = audit::example1_state();
        let whole = shannon(&psi.reduced(&[0]).map_err(core)?.spectrum().map_err(core)?);
        let e12 = measures::eof_2q(&psi.reduced(&[0, 1]).map_err(core)?).map_err(core)?.value;
        let e13 = measures::eof_2q(&psi.reduced(&[0, 2]).map_err(core)?).map_err(core)?.value;
        let bound = thm2_bound(&psi, 0.5, 2.0, 1.71).map_err(core)?;
        Ok(json!({
            "example": 1,
            "state": "λ0 = λ3 = 1/2, λ2 = 1/√2, λ1 = λ4 = 0, k = 1.71",
            "rows": [
                row("E(A1|A2A3)", 0.81, whole),
                row("E(A1A3)", 0.60, e13),
                row("E(A1A2)", 0.35, e12),
            ],
            "notes": [
                "pairwise labels follow the |A1A2A3> ket ordering, which puts 0.60 on A1A3 and 0.35 on A1A2",
            ],
            "thm2_at_alpha_0.5_r_2": {
                "case": bound.case_label,
                "lhs": bound.lhs,
                "rhs": bound.rhs,
                "margin": bound.margin,
            },
        }))
    } else {
        let w = w_state(3).map_err(core)?;
        let whole = shannon(&w.reduced(&[0]).map_err(core)?.spectrum().map_err(core)?);
        let e12 = measures::eof_2q(&w.reduced(&[0, 1]).map_err(core)?).map_err(core)?.value;
        let e13 = measures::eof_2q(&w.reduced(&[0, 2]).map_err(core)?).map_err(core)?.value;
        let s0 = solve_s0(&[e12, e13]).map_err(core)?;
        let bound = thm5_bound(&w, 1.5, 1.0, 1.0).map_err(core)?;
        Ok(json!({
            "example": 2,
            "state": "W state on three qubits, k = 1",
            "rows": [
                row("E(A1|A2A3)", 0.92, whole),
                row("E(A1A2)", 0.55, e12),
                row("E(A1A3)", 0.55, e13),
                row("s0", 1.16, s0),
                row("2^(beta/s) 0.55^beta at beta 1.5, s 1", 2f64.powf(1.5) * 0.55f64.powf(1.5), bound.rhs),
            ],
            "thm5_at_beta_1.5_s_1": {
                "case": bound.case_label,
                "lhs": bound.lhs,
                "rhs": bound.rhs,
                "margin": bound.margin,
            },
        }))
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Measure { state, measure, partition, q, s } => {
            cmd_measure(&state, measure, &partition, q, s)?;
        }
        Command::Certify(args) => {
            let ok = cmd_certify(&args)?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Audit { theorem, qubits, trials, seed, params, tolerance, sequential } => {
            let mut spec = AuditSpec::new(theorem, qubits, trials, base_seed(seed)?);
            spec.tolerance = tolerance;
            for (name, range) in params {
                spec = spec.with_range(&name, range);
            }
            let report = audit::run_audit_with(&spec, execution(sequential)).map_err(core)?;
            emit(&report)?;
        }
        Command::Sweep { example, grid, k, out, sequential } => {
            let grid = cmd_sweep(example, grid.as_deref(), k, execution(sequential))?;
            let csv = sweep_csv(&grid);
            match out {
                Some(path) => {
                    std::fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
                    eprintln!("wrote {} rows to {}", grid.rows.len(), path.display());
                }
                None => write_stdout(&csv)?,
            }
        }
        Command::Example { id } => emit(cmd_example(id)?)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("entcert: {msg}");
            ExitCode::from(2)
        }
    }
}
