//! `emsym`: symmetry classification of charged-particle motion from the
//! command line.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use emsym::dynamics::{integrate, involution_report, write_csv, InvariantFn, Method, PhaseState};
use emsym::fields::{parse_field_file, CatalogTable, FieldSpec};
use emsym::liealg::{EquivGenerator, SymGenerator};
use emsym::optimal::{canonicalize_1d, verify_optimal_tables, CanonError};
use emsym::verify::{
    audit_catalog, classify, fix_c9, gauge_reconstruct, match_tables, sample_states, CatalogAudit, DetectOptions,
    RowStatus,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_MAXWELL: u8 = 3;
const EXIT_ORACLE: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;

#[derive(Parser)]
#[command(name = "emsym", version, about = "Point symmetries and first integrals of ẍ = ẋ×B + E")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Optimal,
    Symmetry,
    Noether,
    All,
}

#[derive(Args)]
struct Common {
    /// Seed for all quasi-random sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Detect the symmetry algebra of a field file and name its table row.
    ///
    /// Exit codes: 2 parse error, 3 div B or curl E nonzero, 4 disagreement
    /// between the field residual and the prolongation.
    Classify {
        file: PathBuf,
        /// Relative singular-value threshold of the nullspace.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Number of sample points.
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a generator {"c": [9 coefficients], "f": gauge} to its
    /// one-dimensional optimal class. Reads stdin when FILE is `-`.
    ///
    /// Exit codes: 2 malformed input, 5 no finite part.
    Canon {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Audit the optimal systems and the catalog of invariant potentials.
    VerifyTables {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        /// Parameter draws per optimal-system row.
        #[arg(long, default_value_t = 3)]
        draws: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate a trajectory and write CSV with invariant columns.
    Integrate {
        file: PathBuf,
        /// Initial position `x,y,z`.
        #[arg(long, value_parser = triple, allow_hyphen_values = true)]
        x: [f64; 3],
        /// Initial velocity `vx,vy,vz`.
        #[arg(long, value_parser = triple, allow_hyphen_values = true)]
        v: [f64; 3],
        #[arg(long = "t-end", default_value_t = 10.0)]
        t_end: f64,
        /// Fixed RK4 step; adaptive DOPRI5 when absent.
        #[arg(long)]
        step: Option<f64>,
        /// Tolerance of the adaptive method, absolute and relative.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// First integral of a Noether generator such as `v4` or `v7 + 2*v8`,
        /// with its gauge term reconstructed. Repeatable.
        #[arg(long = "noether")]
        noether: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise brackets, drift and functional independence of H and the
    /// given Noether integrals.
    Involution {
        file: PathBuf,
        #[arg(long = "noether", required = true)]
        noether: Vec<String>,
        #[arg(long, value_parser = triple, allow_hyphen_values = true)]
        x: Option<[f64; 3]>,
        #[arg(long, value_parser = triple, allow_hyphen_values = true)]
        v: Option<[f64; 3]>,
        #[arg(long = "t-end", default_value_t = 20.0)]
        t_end: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Number of sampled states for brackets and rank.
        #[arg(long, default_value_t = 20)]
        states: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected three comma-separated numbers".to_string())
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| fail(EXIT_FAILURE, format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", p.display()))),
        None => {
            let mut so = io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| fail(EXIT_FAILURE, e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn load_field(path: &Path) -> Result<FieldSpec, Failure> {
    let src = read_input(path)?;
    parse_field_file(&src).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn maxwell_audit(fs: &FieldSpec, seed: u64) -> Result<(), Failure> {
    let pts = fs.sample_points(40, 0.5, 2.0, seed);
    let (d, c) = fs
        .maxwell_residual(&pts)
        .map_err(|e| fail(EXIT_MAXWELL, format!("field is not evaluable: {e}")))?;
    if !(d < 1e-9 && c < 1e-9) {
        return Err(fail(EXIT_MAXWELL, format!("Maxwell audit failed: |div B| = {d:.3e}, |curl E| = {c:.3e}")));
    }
    Ok(())
}

fn cmd_classify(file: &Path, tol: f64, points: usize, common: &Common) -> Outcome {
    if !(tol > 0.0 && tol < 1.0) || points < 8 {
        return Err(fail(EXIT_PARSE, "--tol must lie in (0, 1) and --points be at least 8"));
    }
    let fs = load_field(file)?;
    maxwell_audit(&fs, common.seed)?;
    let opts = DetectOptions {
        points,
        tol,
        seed: common.seed,
        ..DetectOptions::default()
    };
    let rep = classify(&fs, &opts).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    let matched = if rep.dimension > 0 { match_tables(&rep.basis, &rep.noether_basis, common.seed) } else { None };
    let mut v = serde_json::to_value(&rep).expect("report serializes");
    v["match"] = match &matched {
        Some(m) => json!({
            "label": m.label,
            "params": m.params,
            "subalgebra": m.subalgebra,
            "wholeAlgebra": m.whole,
        }),
        None => Value::Null,
    };
    let text = match common.format {
        Format::Json => pretty(&v),
        Format::Text => {
            let mut s = format!("dimension {}\n", rep.dimension);
            for b in &rep.basis {
                s += &format!("  {}\n", SymGenerator::from_f64(*b));
            }
            s += &format!("noether dimension {}\n", rep.noether_basis.len());
            for b in &rep.noether_basis {
                s += &format!("  {}\n", SymGenerator::from_f64(*b));
            }
            if let Some(g) = rep.gap_ratio {
                s += &format!("gap ratio {g:.3e}\n");
            }
            s += &format!("oracle agreement {}\n", rep.oracle_agreement);
            s += &format!(
                "match {}\n",
                matched.as_ref().map_or("none".to_string(), |m| m.label.clone())
            );
            for w in &rep.warnings {
                s += &format!("warning: {w}\n");
            }
            s
        }
    };
    emit(common.out.as_ref(), &text)?;
    if !rep.oracle_agreement {
        return Err(fail(EXIT_ORACLE, "field residual and prolongation disagree"));
    }
    Ok(0)
}

fn cmd_canon(file: &Path, common: &Common) -> Outcome {
    let src = read_input(file)?;
    let v: Value = serde_json::from_str(&src).map_err(|e| fail(EXIT_PARSE, format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let g = EquivGenerator::from_json(&v).map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
    let class = match canonicalize_1d(&g) {
        Ok(c) => c,
        Err(CanonError::Degenerate) => return Err(fail(EXIT_DEGENERATE, CanonError::Degenerate.to_string())),
        Err(e) => return Err(fail(EXIT_FAILURE, e.to_string())),
    };
    let text = match common.format {
        Format::Json => pretty(&class.to_json()),
        Format::Text => format!("class {}\nrepresentative {}\nscale {}\nsteps {}\n", class.class_id, class.representative, class.scale, class.witness.len()),
    };
    emit(common.out.as_ref(), &text)?;
    Ok(0)
}

fn catalog_text(a: &CatalogAudit) -> String {
    let mut s = String::new();
    for r in &a.rows {
        let worst = r
            .generators
            .iter()
            .map(|g| g.field_residual.max(g.prolongation_residual))
            .fold(0.0f64, f64::max);
        s += &format!(
            "{:<5} {:<28} dim {} residual {:.1e}{}\n",
            match r.status {
                RowStatus::Pass => "PASS",
                RowStatus::Warn => "WARN",
                RowStatus::Fail => "FAIL",
            },
            format!("{} ({})", r.id, serde_json::to_value(r.variant).expect("variant").as_str().unwrap_or("")),
            r.detected_dimension,
            worst,
            r.notes.first().map_or(String::new(), |n| format!("  {n}"))
        );
    }
    s
}

fn cmd_verify_tables(scope: Scope, draws: usize, common: &Common) -> Outcome {
    let (optimal, sym, noe) = match scope {
        Scope::Optimal => (true, false, false),
        Scope::Symmetry => (false, true, false),
        Scope::Noether => (false, false, true),
        Scope::All => (true, true, true),
    };
    let mut report = serde_json::Map::new();
    let mut text = String::new();
    let mut ok = true;
    if optimal {
        let r = verify_optimal_tables(draws, common.seed);
        ok &= r.pass;
        for a in &r.rows {
            text += &format!("{:<5} optimal {}\n", if a.pass { "PASS" } else { "FAIL" }, a.id);
        }
        report.insert("optimal".into(), r.to_json());
    }
    for (on, name, tables) in [
        (sym, "symmetry", [CatalogTable::Sym2, CatalogTable::Sym3, CatalogTable::Sym4]),
        (noe, "noether", [CatalogTable::Noe2, CatalogTable::Noe3, CatalogTable::Noe4]),
    ] {
        if !on {
            continue;
        }
        let a = audit_catalog(&tables, common.seed);
        ok &= a.failures().is_empty();
        text += &catalog_text(&a);
        report.insert(
            name.into(),
            json!({
                "pass": a.failures().is_empty(),
                "warnings": a.warnings().len(),
                "rows": serde_json::to_value(&a.rows).expect("audit serializes"),
            }),
        );
    }
    report.insert("pass".into(), json!(ok));
    let out = match common.format {
        Format::Json => pretty(&Value::Object(report)),
        Format::Text => text,
    };
    emit(common.out.as_ref(), &out)?;
    Ok(if ok { 0 } else { EXIT_FAILURE })
}

fn method(step: Option<f64>, tol: f64) -> Result<Method, Failure> {
    match step {
        Some(h) if h > 0.0 => Ok(Method::Rk4 { h }),
        Some(_) => Err(fail(EXIT_PARSE, "--step must be positive")),
        None if tol > 0.0 => Ok(Method::Adaptive { atol: tol, rtol: tol }),
        None => Err(fail(EXIT_PARSE, "--tol must be positive")),
    }
}

fn noether_invariants(fs: &FieldSpec, specs: &[String], seed: u64) -> Result<Vec<InvariantFn>, Failure> {
    let pts = fs.sample_points(40, 0.5, 2.0, seed);
    specs
        .iter()
        .map(|src| {
            let g = SymGenerator::parse(src).map_err(|e| fail(EXIT_PARSE, format!("{src:?}: {e}")))?;
            if !g.is_noether() {
                return Err(fail(EXIT_FAILURE, format!("{src}: not a Noether generator (c8 ≠ 2c7)")));
            }
            let c9 = fix_c9(fs, &g, &pts).map_err(|e| fail(EXIT_FAILURE, format!("{src}: {e}")))?;
            let f = gauge_reconstruct(fs, &g, &pts).map_err(|e| fail(EXIT_FAILURE, format!("{src}: {e}")))?;
            Ok(InvariantFn::from_generator(src.replace(' ', ""), fs, &g, c9, f))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_integrate(file: &Path, x: [f64; 3], v: [f64; 3], t_end: f64, step: Option<f64>, tol: f64, noether: &[String], seed: u64, out: Option<&PathBuf>) -> Outcome {
    if !(t_end > 0.0) {
        return Err(fail(EXIT_PARSE, "--t-end must be positive"));
    }
    let m = method(step, tol)?;
    let fs = load_field(file)?;
    let mut invs = vec![InvariantFn::hamiltonian(&fs)];
    invs.extend(noether_invariants(&fs, noether, seed)?);
    let (traj, err) = match integrate(&fs, PhaseState::new(x, v), t_end, m) {
        Ok(t) => (t, None),
        Err(e) => (e.partial().to_vec(), Some(e)),
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, &traj, &invs).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    emit(out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    match err {
        None => Ok(0),
        Some(e) => {
            let last = traj.last().map_or("none".to_string(), |s| format!("t={} x={:?} v={:?}", s.t, s.x, s.v));
            Err(fail(EXIT_FAILURE, format!("{e}; last valid state {last}")))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_involution(file: &Path, noether: &[String], x: Option<[f64; 3]>, v: Option<[f64; 3]>, t_end: f64, step: Option<f64>, tol: f64, states: usize, common: &Common) -> Outcome {
    let m = method(step, tol)?;
    let fs = load_field(file)?;
    let mut invs = vec![InvariantFn::hamiltonian(&fs)];
    invs.extend(noether_invariants(&fs, noether, common.seed)?);
    let pts = fs.sample_points(states.max(1), 0.5, 2.0, common.seed);
    let sampled = sample_states(&pts, states, common.seed);
    let start = match (x, v) {
        (Some(x), Some(v)) => PhaseState::new(x, v),
        _ => *sampled.first().ok_or_else(|| fail(EXIT_FAILURE, "no regular sample points"))?,
    };
    let rep = involution_report(&fs, &invs, &sampled, start, t_end, m);
    let text = match common.format {
        Format::Json => pretty(&serde_json::to_value(&rep).expect("report serializes")),
        Format::Text => {
            let mut s = format!("rank {} of {}\n", rep.rank, rep.names.len());
            for (i, n) in rep.names.iter().enumerate() {
                s += &format!("{n}: drift {:.3e}", rep.drift[i]);
                for (j, m) in rep.names.iter().enumerate() {
                    if j > i {
                        s += &format!("  {{{n},{m}}} {:.3e}", rep.brackets[i][j]);
                    }
                }
                s.push('\n');
            }
            for e in &rep.errors {
                s += &format!("error: {e}\n");
            }
            s
        }
    };
    emit(common.out.as_ref(), &text)?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { file, tol, points, common } => cmd_classify(&file, tol, points, &common),
        Command::Canon { file, common } => cmd_canon(&file, &common),
        Command::VerifyTables { scope, draws, common } => cmd_verify_tables(scope, draws, &common),
        Command::Integrate { file, x, v, t_end, step, tol, noether, seed, out } => {
            cmd_integrate(&file, x, v, t_end, step, tol, &noether, seed.unwrap_or(0), out.as_ref())
        }
        Command::Involution { file, noether, x, v, t_end, step, tol, states, common } => {
            cmd_involution(&file, &noether, x, v, t_end, step, tol, states, &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE as i32 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("emsym: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
