//! Batch front end: symbol files in, certificates, factorizations, spectra
//! and boundary tables out.
//!
//! Every command produces its primary output (JSON, or CSV for `numrange`
//! and `report`) plus an exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | pass / canonical |
//! | 1 | fail / not canonical |
//! | 2 | inapplicable, boundary, unstable or non-convergent |
//! | 3 | input error |
//!
//! With `--report <path>` a [`RunReport`] is written as well, embedding the
//! SHA-256 of each input file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blockstruct::BlockSymbol;
use crate::certify::{self, CertifyOptions, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::factorize::{self, FactorOptions, FactorStatus, FactorizationResult};
use crate::hankel;
use crate::linalg::C64;
use crate::numrange;
use crate::trigpoly::LaurentMatrixPoly;

pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable overriding the default grid size.
pub const GRID_ENV: &str = "WHC_GRID";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "whc", version, about = "Factorability certificates and Wiener-Hopf factorization on the unit circle")]
pub struct Cli {
    /// Also write a JSON run report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Run one certifier on a block symbol file {"A", "B", "D"}.
    Certify {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        file: PathBuf,
        /// B1 symbol file for thneg (default: anti-analytic part of B).
        #[arg(long)]
        b1: Option<PathBuf>,
        /// γ for the exact criterion as `re` or `re,im` (default: inferred from D − BB*).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Canonical factorization, or partial indices when it does not exist.
    Factorize {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        trunc: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        shifts_window: i64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Solve φ⁺ = Gφ⁻ + g.
    SolveRh {
        file: PathBuf,
        rhs: PathBuf,
        #[arg(long, default_value_t = 32)]
        trunc: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Hankel norm and singular values of a symbol (or of B in a block file).
    Hankel {
        file: PathBuf,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Support function table of W(M) with M = G(e^{i·at}), or Γ(e^{i·at}) for block files.
    Numrange {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, default_value_t = numrange::DEFAULT_NDIRS)]
        ndirs: usize,
    },
    /// Run a manifest of jobs and emit one CSV row per job.
    Report { manifest: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremArg {
    Thcan,
    Cocont,
    Thcir,
    Thneg,
    Cok1,
    Exact,
}

impl TheoremArg {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Thcan => "thcan",
            Self::Cocont => "cocont",
            Self::Thcir => "thcir",
            Self::Thneg => "thneg",
            Self::Cok1 => "cok1",
            Self::Exact => "exact",
        }
    }
}

/// Either file schema.
#[derive(Clone, Debug)]
pub enum SymbolInput {
    Plain(LaurentMatrixPoly),
    Block(BlockSymbol),
}

impl SymbolInput {
    /// The full symbol `G`.
    pub fn symbol(&self) -> LaurentMatrixPoly {
        match self {
            Self::Plain(p) => p.clone(),
            Self::Block(b) => b.assemble(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputFile>,
    pub exit_code: i32,
    pub outputs: serde_json::Value,
    pub timings: Vec<Timing>,
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
    pub report: RunReport,
}

#[derive(Default)]
struct Recorder {
    inputs: Vec<InputFile>,
    timings: Vec<Timing>,
}

impl Recorder {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.inputs.push(InputFile {
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(Timing {
            stage: stage.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn format_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Format(format!("{}: {e}", path.display()))
}

/// Reads a plain or block symbol file, telling them apart by the `"A"` key.
fn load_symbol(rec: &mut Recorder, path: &Path) -> Result<SymbolInput> {
    let text = rec.read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format_err(path, e))?;
    if value.get("A").is_some() {
        Ok(SymbolInput::Block(decode(path, value)?))
    } else {
        Ok(SymbolInput::Plain(decode(path, value)?))
    }
}

/// Deserializes with the JSON path of the offending field in the error.
fn decode<T: serde::de::DeserializeOwned>(path: &Path, value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        if field == "." {
            format_err(path, e.into_inner())
        } else {
            format_err(path, format!("field {field}: {}", e.into_inner()))
        }
    })
}

fn load_plain(rec: &mut Recorder, path: &Path) -> Result<LaurentMatrixPoly> {
    match load_symbol(rec, path)? {
        SymbolInput::Plain(p) => Ok(p),
        SymbolInput::Block(_) => Err(format_err(path, "expected a plain symbol, found a block symbol")),
    }
}

fn load_block(rec: &mut Recorder, path: &Path) -> Result<BlockSymbol> {
    match load_symbol(rec, path)? {
        SymbolInput::Block(b) => Ok(b),
        SymbolInput::Plain(_) => Err(format_err(path, "expected a block symbol {\"A\", \"B\", \"D\"}")),
    }
}

/// Grid from the flag, then `WHC_GRID`, then the per-operation default.
fn grid_override(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var(GRID_ENV).ok().and_then(|v| v.trim().parse().ok()))
}

fn parse_gamma(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| Error::Format(format!("bad γ component {x:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::Format(format!("bad γ {s:?}; use re or re,im"))),
    }
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inapplicable | Verdict::Boundary => EXIT_UNDECIDED,
    }
}

pub fn status_exit_code(s: FactorStatus) -> i32 {
    match s {
        FactorStatus::Canonical => EXIT_PASS,
        FactorStatus::NotCanonical | FactorStatus::Singular => EXIT_FAIL,
        FactorStatus::NonConvergent | FactorStatus::Unstable => EXIT_UNDECIDED,
    }
}

fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Format(_) | Error::Shape(_) | Error::NotHermitian { .. } => EXIT_INPUT,
        Error::NotCanonical { .. } | Error::SingularSymbol { .. } => EXIT_FAIL,
        _ => EXIT_UNDECIDED,
    }
}

/// Runs one certifier.
pub fn certify_block(
    bs: &BlockSymbol,
    theorem: TheoremArg,
    b1: Option<&LaurentMatrixPoly>,
    gamma: Option<C64>,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    match theorem {
        TheoremArg::Thcan => certify::certify_thcan(bs, opts),
        TheoremArg::Cocont => certify::certify_cocont(bs, opts),
        TheoremArg::Thcir => certify::certify_thcir(bs, opts),
        TheoremArg::Thneg => certify::certify_thneg(bs, b1, opts),
        TheoremArg::Cok1 => certify::certify_cok1(bs, opts),
        TheoremArg::Exact => {
            if !bs.a_is_identity(1e-12) {
                let mut c = certify::exact_gamma_criterion(bs.b(), C64::new(0.0, 0.0));
                c.verdict = Verdict::Inapplicable;
                c.claims.clear();
                c.details.notes = vec!["A is not the identity".into()];
                return Ok(c);
            }
            match gamma.or_else(|| certify::infer_gamma(bs)) {
                Some(g) => Ok(certify::exact_gamma_criterion(bs.b(), g)),
                None => {
                    let mut c = certify::exact_gamma_criterion(bs.b(), C64::new(0.0, 0.0));
                    c.verdict = Verdict::Inapplicable;
                    c.claims.clear();
                    c.details.notes = vec!["D − BB* is not a constant multiple of I".into()];
                    Ok(c)
                }
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable output")
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// Runs a parsed command line. Never panics on bad input; input problems
/// yield exit code 3 with the error in the output.
pub fn run(cli: &Cli, argv: &[String]) -> Outcome {
    let mut rec = Recorder::default();
    let result = dispatch(&cli.command, &mut rec);
    let (stdout, exit_code, outputs) = match result {
        Ok(x) => x,
        Err(e) => {
            let v = serde_json::json!({ "error": e.to_string() });
            (pretty(&v), error_exit_code(&e), v)
        }
    };
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: argv.to_vec(),
        inputs: rec.inputs,
        exit_code,
        outputs,
        timings: rec.timings,
    };
    Outcome {
        stdout,
        exit_code,
        report,
    }
}

fn dispatch(cmd: &Command, rec: &mut Recorder) -> Result<(String, i32, serde_json::Value)> {
    match cmd {
        Command::Certify {
            theorem,
            file,
            b1,
            gamma,
            grid,
        } => {
            let bs = load_block(rec, file)?;
            let b1 = b1.as_deref().map(|p| load_plain(rec, p)).transpose()?;
            let gamma = gamma.as_deref().map(parse_gamma).transpose()?;
            let opts = CertifyOptions {
                npoints: grid_override(*grid),
                ..Default::default()
            };
            let cert = rec.time("certify", || certify_block(&bs, *theorem, b1.as_ref(), gamma, &opts))?;
            let v = to_json(&cert);
            Ok((pretty(&v), verdict_exit_code(cert.verdict), v))
        }
        Command::Factorize {
            file,
            trunc,
            tol,
            shifts_window,
            grid,
        } => {
            let g = load_symbol(rec, file)?.symbol();
            let opts = FactorOptions {
                trunc: *trunc,
                tol: *tol,
                shifts_window: *shifts_window,
                npoints: grid_override(*grid),
                ..Default::default()
            };
            let r = rec.time("factorize", || factorize::factorize(&g, &opts))?;
            let v = to_json(&r);
            Ok((pretty(&v), status_exit_code(r.status), v))
        }
        Command::SolveRh {
            file,
            rhs,
            trunc,
            tol,
            grid,
        } => {
            let g = load_symbol(rec, file)?.symbol();
            let rhs = load_plain(rec, rhs)?;
            let opts = FactorOptions {
                trunc: *trunc,
                tol: *tol,
                npoints: grid_override(*grid),
                ..Default::default()
            };
            let sol = rec.time("solve-rh", || factorize::solve_rh(&g, &rhs, &opts))?;
            let v = to_json(&sol);
            Ok((pretty(&v), EXIT_PASS, v))
        }
        Command::Hankel { file, trunc } => {
            let b = match load_symbol(rec, file)? {
                SymbolInput::Plain(p) => p,
                SymbolInput::Block(bs) => bs.b().clone(),
            };
            let n = trunc.unwrap_or_else(|| hankel::default_truncation(&b));
            let spec = rec.time("hankel", || hankel::hankel_sq_spectrum(&b, n));
            let v = serde_json::json!({
                "norm": spec.norm(),
                "singvals": spec.singvals,
                "exact": spec.exact,
                "truncation": spec.truncation,
                "sq_spectrum": spec.sq_spectrum(),
                "ess_spectrum": hankel::ess_spectrum_note(&b),
            });
            Ok((pretty(&v), EXIT_PASS, v))
        }
        Command::Numrange { file, at, ndirs } => {
            if *ndirs < 16 {
                return Err(Error::Format(format!("--ndirs {ndirs} is below 16")));
            }
            let t = C64::from_polar(1.0, *at);
            let m = match load_symbol(rec, file)? {
                SymbolInput::Plain(p) => {
                    if !p.is_square() {
                        return Err(Error::Shape("numerical range of a non-square symbol".into()));
                    }
                    p.eval(t)
                }
                SymbolInput::Block(bs) => {
                    // Γ at a single point: D − B A⁻¹ B*.
                    let a = bs.a().eval(t);
                    let b = bs.b().eval(t);
                    let d = bs.d().eval(t);
                    let ainv = a.try_inverse().ok_or(Error::SingularSymbol {
                        node: 0,
                        cond: f64::INFINITY,
                    })?;
                    d - &b * ainv * b.adjoint()
                }
            };
            let bnd = rec.time("numrange", || numrange::nr_boundary(&m, *ndirs));
            let csv = numrange_csv(&bnd);
            Ok((csv, EXIT_PASS, to_json(&bnd)))
        }
        Command::Report { manifest } => {
            let (csv, code) = rec.time("report", || run_manifest(manifest));
            let text = csv?;
            Ok((text.clone(), code, serde_json::Value::String(text)))
        }
    }
}

/// Float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn numrange_csv(b: &numrange::NRBoundary) -> String {
    let mut out = String::from("theta,support,bnd_re,bnd_im\n");
    for u in 0..b.ndirs {
        let z = b.bndpoints[u];
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt17(b.theta(u)),
            fmt17(b.support[u]),
            fmt17(z.re),
            fmt17(z.im)
        );
    }
    out
}

/// One job of a batch manifest `{"runs": [...]}`. Paths are relative to the
/// manifest's directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRun {
    pub file: String,
    /// `certify` or `factorize`.
    pub command: String,
    #[serde(default)]
    pub theorem: Option<TheoremArg>,
    #[serde(default)]
    pub b1: Option<String>,
    #[serde(default)]
    pub gamma: Option<String>,
    #[serde(default)]
    pub trunc: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub runs: Vec<ManifestRun>,
}

pub const REPORT_COLUMNS: &str =
    "schema_version,file,command,theorem,verdict,alpha,plo,phi,total_index,partial_indices,residual,error";

#[derive(Default)]
struct Row {
    file: String,
    command: String,
    theorem: String,
    verdict: String,
    alpha: Option<f64>,
    plo: Option<f64>,
    phi: Option<f64>,
    total: Option<i64>,
    partial: Option<Vec<i64>>,
    residual: Option<f64>,
    error: String,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Row {
    fn to_csv(&self) -> String {
        let f = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
        let partial = self
            .partial
            .as_ref()
            .map(|p| p.iter().map(i64::to_string).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        [
            SCHEMA_VERSION.to_string(),
            csv_field(&self.file),
            csv_field(&self.command),
            self.theorem.clone(),
            self.verdict.clone(),
            f(self.alpha),
            f(self.plo),
            f(self.phi),
            self.total.map(|t| t.to_string()).unwrap_or_default(),
            partial,
            f(self.residual),
            csv_field(&self.error),
        ]
        .join(",")
    }
}

fn run_row(base: &Path, job: &ManifestRun) -> (Row, bool) {
    let mut row = Row {
        file: job.file.clone(),
        command: job.command.clone(),
        theorem: job.theorem.map(|t| t.as_str().to_string()).unwrap_or_default(),
        ..Default::default()
    };
    let mut rec = Recorder::default();
    let result = (|| -> Result<()> {
        let path = base.join(&job.file);
        match job.command.as_str() {
            "certify" => {
                let theorem = job
                    .theorem
                    .ok_or_else(|| Error::Format("certify job without theorem".into()))?;
                let bs = load_block(&mut rec, &path)?;
                let b1 = job
                    .b1
                    .as_ref()
                    .map(|p| load_plain(&mut rec, &base.join(p)))
                    .transpose()?;
                let gamma = job.gamma.as_deref().map(parse_gamma).transpose()?;
                let opts = CertifyOptions {
                    npoints: grid_override(None),
                    ..Default::default()
                };
                let cert = certify_block(&bs, theorem, b1.as_ref(), gamma, &opts)?;
                row.verdict = serde_json::to_value(cert.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                row.alpha = cert.details.alpha;
                if let Some(p) = cert.pinterval {
                    row.plo = Some(p.plo);
                    row.phi = Some(p.phi);
                }
                if cert.claims.contains(&certify::Claim::TotalIndexZero) {
                    row.total = Some(0);
                }
            }
            "factorize" => {
                let g = load_symbol(&mut rec, &path)?.symbol();
                let opts = FactorOptions {
                    trunc: job.trunc.unwrap_or(32),
                    npoints: grid_override(None),
                    ..Default::default()
                };
                let r: FactorizationResult = factorize::factorize(&g, &opts)?;
                row.verdict = serde_json::to_value(r.status)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                row.total = r.total;
                row.partial = r.partial;
                row.residual = r.residual;
            }
            other => return Err(Error::Format(format!("unknown command {other:?}"))),
        }
        Ok(())
    })();
    let input_error = match result {
        Ok(()) => false,
        Err(e) => {
            row.error = e.to_string();
            error_exit_code(&e) == EXIT_INPUT
        }
    };
    (row, input_error)
}

/// Runs every job of a manifest in order and returns the CSV table with
/// the exit code (3 if any job had an input error, else 0).
pub fn run_manifest(path: &Path) -> (Result<String>, i32) {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return (
                Err(Error::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                }),
                EXIT_INPUT,
            )
        }
    };
    let manifest: Manifest = match serde_json::from_str(&text) {
        Ok(m) => m,
        Err(e) => return (Err(format_err(path, e)), EXIT_INPUT),
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = format!("{REPORT_COLUMNS}\n");
    let mut code = EXIT_PASS;
    for job in &manifest.runs {
        let (row, input_error) = run_row(base, job);
        if input_error {
            code = EXIT_INPUT;
        }
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    (Ok(out), code)
}

/// Writes a symbol file in the on-disk schema.
pub fn write_symbol(path: &Path, p: &LaurentMatrixPoly) -> Result<()> {
    write_json(path, p)
}

pub fn write_block(path: &Path, bs: &BlockSymbol) -> Result<()> {
    write_json(path, bs)
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable symbol");
    std::fs::write(path, text + "\n").map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
