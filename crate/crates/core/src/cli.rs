//! Command-line front end.
//!
//! Every command builds a [`CommandReport`]; the text output and the `--json`
//! output are two renderings of the same value. Exit codes: 0 when every
//! check passes, 1 for a semantic failure, 2 for unreadable or malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::boolean_rep::{stone_map, verify_boolean_semiring, BooleanSemiring};
use crate::clan::{theorem_2_4_check, verify_clan};
use crate::error::{Error, Result};
use crate::gns::{gns_construct, verify_algebra, verify_state, AlgebraState};
use crate::io::{self, DilationFile, InputFile, OperatorFile, OperatorKind, StructureFile, StructureKind};
use crate::matrix::ToleranceConfig;
use crate::naimark::{dilate, verify_dilation};
use crate::order::verify_poset;
use crate::ortho::{boolean_criterion, is_distributive, satisfies_weak_modular, verify_logic};
use crate::property;
use crate::quasilogic::{classify, verify_quasilogic};
use crate::report::VerificationReport;
use crate::semilogic::verify_semilogic;

#[derive(Debug, Parser)]
#[command(name = "qstruct", version, about = "Finite quantum-logic structures: axiom checks, Stone, GNS and Naimark constructions")]
struct Cli {
    /// Emit the report as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance for matrix identities.
    #[arg(long, global = true, env = "QSTRUCT_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum KindArg {
    Auto,
    Poset,
    Quasilogic,
    Semilogic,
    OrthoLogic,
    BooleanSemiring,
}

impl KindArg {
    fn structure_kind(self) -> Option<StructureKind> {
        match self {
            KindArg::Auto => None,
            KindArg::Poset => Some(StructureKind::Poset),
            KindArg::Quasilogic => Some(StructureKind::Quasilogic),
            KindArg::Semilogic => Some(StructureKind::Semilogic),
            KindArg::OrthoLogic => Some(StructureKind::OrthoLogic),
            KindArg::BooleanSemiring => Some(StructureKind::BooleanSemiring),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the axiom suites for a structure or operator file.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        kind: KindArg,
    },
    /// Stone representation of a boolean semiring.
    Stone {
        path: PathBuf,
        /// Write the represented set semiring as a structure file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Minimal Naimark dilation of a POVM file.
    Dilate {
        path: PathBuf,
        /// Write the dilation as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// GNS representation of a state on an algebra file.
    Gns {
        path: PathBuf,
        /// A state named in the file, or a path to a state file.
        #[arg(long)]
        state: Option<String>,
    },
    /// Seeded randomized property suites.
    Property {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per suite; each suite has its own default.
        #[arg(long)]
        iters: Option<usize>,
        /// Where minimized failure witnesses are written.
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Structural(_) => "structural",
            Error::Domain(_) => "domain",
            Error::AxiomViolation { .. } => "axiom_violation",
            Error::Internal(_) => "internal",
            Error::InvalidState(_) => "invalid_state",
            Error::InvalidPovm { .. } => "invalid_povm",
            Error::Construction { .. } => "construction",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        };
        ErrorInfo {
            kind,
            message: e.to_string(),
        }
    }
}

/// What a command prints, in either format.
#[derive(Debug, Clone, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub input: Option<String>,
    pub status: Status,
    pub exit_code: i32,
    pub summary: Map<String, Value>,
    pub reports: Vec<VerificationReport>,
    pub error: Option<ErrorInfo>,
}

impl CommandReport {
    fn new(command: &str, input: Option<&Path>) -> Self {
        CommandReport {
            command: command.into(),
            input: input.map(|p| p.display().to_string()),
            status: Status::Pass,
            exit_code: 0,
            summary: Map::new(),
            reports: Vec::new(),
            error: None,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary
            .insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn push(&mut self, report: VerificationReport) {
        if !report.is_valid() && self.status == Status::Pass {
            self.status = Status::Fail;
            self.exit_code = 1;
        }
        self.reports.push(report);
    }

    fn fail(&mut self, e: &Error) {
        self.exit_code = self.exit_code.max(e.exit_code());
        self.status = if e.exit_code() == 2 { Status::Error } else { Status::Fail };
        self.error = Some(e.into());
    }
}

impl std::fmt::Display for CommandReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        match &self.input {
            Some(i) => writeln!(f, "{} {i}: {status}", self.command)?,
            None => writeln!(f, "{}: {status}", self.command)?,
        }
        for (k, v) in &self.summary {
            match v {
                Value::String(s) => writeln!(f, "  {k}: {s}")?,
                other => writeln!(f, "  {k}: {other}")?,
            }
        }
        for r in &self.reports {
            write!(f, "{r}")?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "error ({}): {}", e.kind, e.message)?;
        }
        Ok(())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = execute(&cli);
    // A closed pipe downstream is not our failure; the exit code still stands.
    let mut stdout = std::io::stdout().lock();
    if cli.json {
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        let _ = write!(stdout, "{report}");
    }
    report.exit_code
}

fn tolerance(cli: &Cli) -> Result<ToleranceConfig> {
    match cli.tol {
        None => Ok(ToleranceConfig::default()),
        Some(eps) => ToleranceConfig::with_eps(eps).map_err(|e| Error::Parse(format!("--tol/QSTRUCT_TOL: {e}"))),
    }
}

/// Runs the parsed command; never panics on bad input.
fn execute(cli: &Cli) -> CommandReport {
    let (name, input) = match &cli.command {
        Command::Check { path, .. } => ("check", Some(path.as_path())),
        Command::Stone { path, .. } => ("stone", Some(path.as_path())),
        Command::Dilate { path, .. } => ("dilate", Some(path.as_path())),
        Command::Gns { path, .. } => ("gns", Some(path.as_path())),
        Command::Property { .. } => ("property", None),
    };
    let mut out = CommandReport::new(name, input);
    let result = tolerance(cli).and_then(|tol| {
        out.set("tolerance", tol.eps);
        match &cli.command {
            Command::Check { path, kind } => cmd_check(&mut out, path, *kind, &tol),
            Command::Stone { path, emit } => cmd_stone(&mut out, path, emit.as_deref()),
            Command::Dilate { path, emit } => cmd_dilate(&mut out, path, emit.as_deref(), &tol),
            Command::Gns { path, state } => cmd_gns(&mut out, path, state.as_deref(), &tol),
            Command::Property {
                suite,
                seed,
                iters,
                witness_dir,
            } => cmd_property(&mut out, suite, *seed, *iters, witness_dir, &tol),
        }
    });
    if let Err(e) = result {
        out.fail(&e);
    }
    out
}

fn cmd_check(out: &mut CommandReport, path: &Path, kind: KindArg, tol: &ToleranceConfig) -> Result<()> {
    match io::read_input(path)? {
        InputFile::Structure(file) => {
            let kind = kind.structure_kind().unwrap_or_else(|| file.detect_kind());
            out.set("kind", kind.to_string());
            check_structure(out, &file, kind)
        }
        InputFile::Operator(file) => {
            if kind != KindArg::Auto {
                return Err(Error::Parse("--kind applies to structure files only".into()));
            }
            check_operators(out, &file, path, tol)
        }
    }
}

fn check_structure(out: &mut CommandReport, file: &StructureFile, kind: StructureKind) -> Result<()> {
    match kind {
        StructureKind::Poset => out.push(verify_poset(&file.poset()?)),
        StructureKind::Quasilogic => {
            let q = file.to_quasilogic()?;
            let report = verify_quasilogic(&q);
            if report.is_valid() {
                let c = classify(&q);
                out.set("classification", c.label.to_string());
                out.set("relations", c);
            }
            out.push(report);
        }
        StructureKind::Semilogic => {
            let s = file.to_semilogic()?;
            let report = verify_semilogic(&s);
            if report.is_valid() {
                out.set("is_logic", s.is_logic());
            }
            out.push(report);
        }
        StructureKind::OrthoLogic => {
            let lg = file.to_ortho_logic()?;
            let report = verify_logic(&lg);
            if report.is_valid() {
                let c = classify(lg.base());
                out.set("classification", c.label.to_string());
                out.set("relations", c);
                out.set("weak_modular", satisfies_weak_modular(&lg));
                out.set("distributive", is_distributive(&lg));
                out.set("boolean_criterion", boolean_criterion(&lg));
            }
            out.push(report);
        }
        StructureKind::BooleanSemiring => out.push(verify_boolean_semiring(&file.to_semiring_base()?)),
    }
    Ok(())
}

fn check_operators(out: &mut CommandReport, file: &OperatorFile, path: &Path, tol: &ToleranceConfig) -> Result<()> {
    match file.kind {
        OperatorKind::Clan => {
            out.set("kind", "clan");
            let clan = file.to_clan()?;
            let report = verify_clan(&clan, tol);
            let valid = report.is_valid();
            out.push(report);
            if valid {
                let c = theorem_2_4_check(&clan, tol)?;
                out.set("distributive", c.distributive);
                out.set("criterion", c.criterion);
                out.set("witnesses", json!({
                    "distributivity": c.distributivity_witness,
                    "criterion": c.criterion_witness,
                }));
            }
        }
        OperatorKind::Povm => {
            out.set("kind", "povm");
            let p = file.to_povm(path.parent(), tol)?;
            out.set("outcomes", file.roles.outcomes.clone().unwrap_or_default());
            out.set("dim_h", p.dim_h());
            out.set("events", p.semiring().len());
            out.set("projection_valued", p.is_projection_valued(tol));
        }
        OperatorKind::Algebra => {
            out.set("kind", "algebra");
            let alg = file.to_algebra(tol)?;
            out.set("dim", alg.dim());
            out.set("span_dim", alg.span_dim());
            let report = verify_algebra(&alg, tol);
            let valid = report.is_valid();
            out.push(report);
            if valid {
                for name in file.roles.states.iter().flat_map(|s| s.keys()) {
                    let (_, state) = file.state(Some(name))?;
                    let mut r = verify_state(&alg, &state, tol)?;
                    r.subject = format!("state {name}");
                    out.push(r);
                }
            }
        }
    }
    Ok(())
}

fn cmd_stone(out: &mut CommandReport, path: &Path, emit: Option<&Path>) -> Result<()> {
    let file = io::read_structure(path)?;
    let base = file.to_semiring_base()?;
    let report = verify_boolean_semiring(&base);
    if !report.is_valid() {
        out.push(report);
        return Ok(());
    }
    let b = BooleanSemiring::new(base)?;
    let rep = stone_map(&b)?;
    out.set("points", rep.points());
    let filters: Map<String, Value> = rep
        .point_labels
        .iter()
        .zip(&rep.filters)
        .map(|(x, f)| {
            let members: Vec<&str> = f.members.iter().map(|&m| b.label(m)).collect();
            (x.clone(), json!(members))
        })
        .collect();
    out.set("filters", filters);
    let h0: Map<String, Value> = b
        .ids()
        .map(|x| {
            let pts: Vec<&str> = rep.h0[x.0].iter().map(|&i| rep.point_labels[i].as_str()).collect();
            (b.label(x).to_string(), json!(pts))
        })
        .collect();
    out.set("h0", h0);
    if let Some(target) = emit {
        let structure = io::set_system_structure(&rep.image())?;
        std::fs::write(target, structure.to_json())?;
        out.set("emitted", target.display().to_string());
    }
    out.push(rep.report);
    Ok(())
}

fn cmd_dilate(out: &mut CommandReport, path: &Path, emit: Option<&Path>, tol: &ToleranceConfig) -> Result<()> {
    let file = io::read_operator(path)?;
    if file.kind != OperatorKind::Povm {
        return Err(Error::Parse(format!("{}: expected a POVM file", path.display())));
    }
    let p = file.to_povm(path.parent(), tol)?;
    let d = dilate(&p, tol)?;
    out.set("dim_h", d.dim_h());
    out.set("dim_e", d.dim_e);
    let report = verify_dilation(&p, &d, tol);
    let residuals: Map<String, Value> = report
        .info
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("residual.").map(|k| (k.to_string(), v.clone())))
        .collect();
    out.set("residuals", residuals);
    if let Some(target) = emit {
        std::fs::write(target, DilationFile::from_dilation(&p, &d).to_json())?;
        out.set("emitted", target.display().to_string());
    }
    out.push(report);
    Ok(())
}

fn cmd_gns(out: &mut CommandReport, path: &Path, state: Option<&str>, tol: &ToleranceConfig) -> Result<()> {
    let file = io::read_operator(path)?;
    if file.kind != OperatorKind::Algebra {
        return Err(Error::Parse(format!("{}: expected an algebra file", path.display())));
    }
    let alg = file.to_algebra(tol)?;
    let named = state.is_some_and(|s| file.roles.states.as_ref().is_some_and(|m| m.contains_key(s)));
    let (name, r): (String, AlgebraState) = match state {
        Some(s) if !named && Path::new(s).is_file() => {
            let bytes = std::fs::read(s)?;
            (s.to_string(), io::parse_state(&bytes, file.dim)?)
        }
        other => file.state(other)?,
    };
    out.set("state", name.clone());
    let mut state_report = verify_state(&alg, &r, tol)?;
    state_report.subject = format!("state {name}");
    if !state_report.is_valid() {
        out.push(state_report);
        return Ok(());
    }
    out.push(state_report);
    let g = gns_construct(&alg, &r, tol)?;
    out.set("space_dim", g.space_dim);
    out.set("kernel_dim", g.kernel_dim);
    out.set("span_dim", g.span_dim);
    out.set("e1", g.e1.clone());
    out.set("reconstruction_residual", g.residuals.reconstruction);
    out.set("residuals", &g.residuals);
    out.push(g.report);
    Ok(())
}

fn cmd_property(
    out: &mut CommandReport,
    suite: &str,
    seed: u64,
    iters: Option<usize>,
    witness_dir: &Path,
    tol: &ToleranceConfig,
) -> Result<()> {
    out.set("suite", suite);
    out.set("seed", seed);
    let outcomes = property::run(suite, seed, iters, tol)?;
    for o in &outcomes {
        let mut r = VerificationReport::new(format!("property suite {}", o.suite));
        r.note("iters", o.iters);
        match &o.failure {
            None => {
                let check = r.check(&format!("{}.cases", o.suite));
                for _ in 0..o.iters {
                    check.pass();
                }
            }
            Some(w) => {
                let file = property::write_witness(witness_dir, w)?;
                r.check(&format!("{}.cases", o.suite))
                    .fail(&[format!("iteration {}", w.iteration), format!("size {}", w.size)], w.detail.clone());
                r.note("witness_file", file.display().to_string());
            }
        }
        out.push(r);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["qstruct", "frobnicate"]), 2);
        assert_eq!(run(["qstruct", "property", "--suite", "bogus"]), 2);
        assert_eq!(run(["qstruct", "check", "/definitely/not/here.json"]), 2);
        assert_eq!(run(["qstruct", "--tol", "2", "property", "--suite", "matrix", "--iters", "1"]), 2);
    }

    #[test]
    fn report_renders_both_ways() {
        let mut r = CommandReport::new("check", Some(Path::new("x.json")));
        r.set("kind", "poset");
        let mut v = VerificationReport::new("poset");
        v.check("poset.reflexive").fail(&["a"], "a <= a fails");
        r.push(v);
        assert_eq!(r.exit_code, 1);
        let text = r.to_string();
        assert!(text.starts_with("check x.json: FAIL"));
        assert!(text.contains("witness (a): a <= a fails"));
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["summary"]["kind"], "poset");
    }
}
