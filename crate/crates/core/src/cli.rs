//! Command dispatch shared by the binary, the tests and the browser demo.
//!
//! Each command reads one JSON document, runs the matching pipeline and
//! produces a JSON report that repeats the configuration it ran with.
//! Exit codes: 0 when every verdict passes, 1 on a verdict failure or a
//! numerical precondition failure, 2 on usage, I/O or parse errors.

use crate::blaschke::{BlaschkeProduct, TmIndex};
use crate::debranges::{
    extract_generators, random_f_tuple, verify_contraction_property, verify_independence,
    verify_norm_identity, ModelSubspace, DEFAULT_SEED,
};
use crate::error::Error;
use crate::gallery::section2_report;
use crate::json;
use crate::linalg::{c64, CMat};
use crate::operator::{near_isometry_certificate, shimorin_check, OperatorMatrix, DEFAULT_K_MAX};
use crate::wold::{multivariable_wold, wold_decompose_with, WoldOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_M_MAX_BASIS: usize = 10;
pub const DEFAULT_GALLERY_N: i64 = 12;
pub const DEFAULT_GALLERY_D: usize = 64;
/// Random samples drawn by the `debranges` command for each randomized check.
pub const DEFAULT_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Basis,
    Check,
    Wold,
    WoldMulti,
    Debranges,
    Gallery,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Basis,
        Command::Check,
        Command::Wold,
        Command::WoldMulti,
        Command::Debranges,
        Command::Gallery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::Check => "check",
            Command::Wold => "wold",
            Command::WoldMulti => "wold-multi",
            Command::Debranges => "debranges",
            Command::Gallery => "gallery",
        }
    }

    fn needs_input(self) -> bool {
        self != Command::Gallery
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

/// Options for one invocation. `None` means the command's documented default.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub tol: f64,
    /// Truncation degree for `basis`.
    pub cap: Option<usize>,
    pub k_max: usize,
    pub m_max: Option<usize>,
    pub power_cap: Option<usize>,
    /// Number of operators taken from the tuple by `wold-multi`.
    pub m: Option<usize>,
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: i64,
    pub d: usize,
    #[serde(skip)]
    pub input_path: Option<PathBuf>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            tol: DEFAULT_TOL,
            cap: None,
            k_max: DEFAULT_K_MAX,
            m_max: None,
            power_cap: None,
            m: None,
            seed: DEFAULT_SEED,
            n: DEFAULT_GALLERY_N,
            d: DEFAULT_GALLERY_D,
            input_path: None,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!(
                "--tol must be a positive number, got {}",
                self.tol
            )));
        }
        let positive = [
            ("--cap", self.cap),
            ("--m-max", self.m_max),
            ("--power-cap", self.power_cap),
            ("--m", self.m),
        ];
        for (flag, v) in positive {
            if v == Some(0) {
                return Err(CliError::Usage(format!("{flag} must be positive")));
            }
        }
        if self.k_max == 0 {
            return Err(CliError::Usage("--k-max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("malformed input: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of a command that ran to completion.
#[derive(Clone, Debug)]
pub struct Report {
    pub passes: bool,
    pub body: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passes {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&self.body).expect("report values are finite JSON");
        s.push('\n');
        s
    }
}

/// Runs `config` on already loaded input text.
pub fn execute(config: &RunConfig, input: Option<&str>) -> Result<Report, CliError> {
    config.validate()?;
    let text = match (config.command.needs_input(), input) {
        (true, Some(t)) => t,
        (true, None) => {
            return Err(CliError::Usage(format!(
                "`{}` needs --input",
                config.command
            )))
        }
        (false, _) => "",
    };
    let outcome = match config.command {
        Command::Basis => basis(config, parse(text)?),
        Command::Check => check(config, parse(text)?),
        Command::Wold => wold(config, parse(text)?),
        Command::WoldMulti => wold_multi(config, parse(text)?),
        Command::Debranges => debranges(config, parse(text)?),
        Command::Gallery => gallery(config),
    };
    let (passes, result) = match outcome {
        Ok(pair) => pair,
        Err(e) => (
            false,
            json!({ "error": e.to_string(), "error_kind": error_kind(&e) }),
        ),
    };
    let body = json!({
        "command": config.command,
        "config": config,
        "passes": passes,
        "result": result,
    });
    Ok(Report { passes, body })
}

/// Reads the input, runs, writes the report and returns the exit code.
/// Diagnostics for exit code 2 go to `stderr`.
pub fn run(
    config: &RunConfig,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> i32 {
    let result = load(config).and_then(|input| execute(config, input.as_deref()));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let text = report.render();
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(stderr, "error: cannot write `{}`: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    report.exit_code()
}

fn load(config: &RunConfig) -> Result<Option<String>, CliError> {
    match &config.input_path {
        Some(p) => std::fs::read_to_string(p)
            .map(Some)
            .map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            }),
        None if config.command.needs_input() => {
            let mut text = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut text).map_err(|e| {
                CliError::Io {
                    path: "<stdin>".into(),
                    message: e.to_string(),
                }
            })?;
            Ok(Some(text))
        }
        None => Ok(None),
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    json::parse(text).map_err(CliError::Parse)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::BoundViolation { .. } => "BOUND_VIOLATION",
        Error::InvarianceFailure { .. } => "INVARIANCE_FAILURE",
        Error::NotInvariant { .. } => "NOT_INVARIANT",
        Error::IllConditioned(_) => "ILL_CONDITIONED",
        Error::Precondition(_) => "PRECONDITION",
        Error::WindowOverflow(_) => "WINDOW_OVERFLOW",
        _ => "INVALID_INPUT",
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values are finite JSON")
}

type Outcome = crate::error::Result<(bool, Value)>;

fn basis(config: &RunConfig, b: BlaschkeProduct) -> Outcome {
    let m_max = config.m_max.unwrap_or(DEFAULT_M_MAX_BASIS);
    let r = b.degree();
    let cap = config
        .cap
        .unwrap_or_else(|| b.recommended_cap().max(r * (m_max + 1)));
    let mut vectors = Vec::new();
    let mut cols = Vec::new();
    for m in 0..=m_max {
        for j in 0..r {
            let v = b.tm_basis_coeffs(TmIndex::new(j, m), cap)?;
            vectors.push(json!({ "j": j, "m": m, "coeffs": v }));
            cols.push(v.into_coeffs());
        }
    }
    let frame = CMat::from_columns(&cols);
    let gram_defect = (frame.adjoint() * &frame - CMat::identity(cols.len(), cols.len())).norm();
    let samples = 256;
    let unimodularity_defect = (0..samples)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / samples as f64;
            b.evaluate(c64(theta.cos(), theta.sin()))
                .map(|w| (w.norm() - 1.0).abs())
        })
        .collect::<crate::error::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let passes = gram_defect < config.tol && unimodularity_defect < config.tol;
    Ok((
        passes,
        json!({
            "product": b,
            "cap": cap,
            "m_max": m_max,
            "gram_defect": gram_defect,
            "unimodularity_defect": unimodularity_defect,
            "vectors": vectors,
        }),
    ))
}

fn check(config: &RunConfig, t: OperatorMatrix) -> Outcome {
    let certificate = near_isometry_certificate(&t, config.k_max, config.tol)?;
    let shimorin = shimorin_check(&t, config.tol);
    Ok((
        certificate.verdict,
        json!({ "certificate": certificate, "shimorin": shimorin }),
    ))
}

fn wold(config: &RunConfig, t: OperatorMatrix) -> Outcome {
    let m_max = config.m_max.unwrap_or_else(|| t.window_dim());
    let opts = WoldOptions {
        k_max: config.k_max,
        power_cap: config.power_cap,
        ..WoldOptions::new(m_max, config.tol)
    };
    let wd = wold_decompose_with(&t, &opts)?;
    Ok((wd.passes(config.tol), to_value(&wd)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleInput {
    operators: Vec<OperatorMatrix>,
}

fn wold_multi(config: &RunConfig, input: TupleInput) -> Outcome {
    let m = config.m.unwrap_or(input.operators.len());
    let mw = multivariable_wold(&input.operators, m, config.power_cap, config.tol)?;
    Ok((mw.passes(config.tol), to_value(&mw)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DebrangesInput {
    subspace: ModelSubspace,
    products: Vec<BlaschkeProduct>,
}

fn debranges(config: &RunConfig, input: DebrangesInput) -> Outcome {
    let (m, bs, tol) = (&input.subspace, &input.products, config.tol);
    let g = extract_generators(m, bs, tol)?;
    let independence = verify_independence(&g, bs, m, tol)?;
    let contraction = verify_contraction_property(&g, bs, m, DEFAULT_SAMPLES, config.seed, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut norm_identity = Vec::with_capacity(DEFAULT_SAMPLES);
    for _ in 0..DEFAULT_SAMPLES {
        let fs = random_f_tuple(&g, m, bs, tol, &mut rng)?;
        norm_identity.push(verify_norm_identity(&g, &fs, m, bs, tol)?.residual);
    }
    let max_norm_residual = norm_identity.iter().copied().fold(0.0, f64::max);
    let passes = g.bound_holds
        && g.residual_representation < tol.sqrt()
        && independence.passes
        && contraction.passes
        && max_norm_residual < tol.sqrt();
    Ok((
        passes,
        json!({
            "generators": g,
            "independence": independence,
            "contraction": contraction,
            "norm_identity": { "samples": DEFAULT_SAMPLES, "seed": config.seed, "max_residual": max_norm_residual },
        }),
    ))
}

fn gallery(config: &RunConfig) -> Outcome {
    let r = section2_report(config.n, config.d, config.tol)?;
    Ok((r.separation_holds, to_value(&r)))
}
