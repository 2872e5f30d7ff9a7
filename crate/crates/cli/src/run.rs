use std::path::{Path, PathBuf};

use periodrh_core::circle::criteria::{least_level_for, level_bound};
use periodrh_core::circle::{large_weight_criterion, least_level_table, predict_angles};
use periodrh_core::fixtures;
use periodrh_core::pipeline::{verify_form, Outcome, Stage, Verification, VerifyConfig};
use periodrh_core::{ErrorKind, NewformSpec, PrecisionBudget, Sign};
use rayon::prelude::*;

use crate::report::{diag, AngleSummary, Check, FormReport, Report, TableRow, ThresholdReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug)]
pub enum CliError {
    NoInputs(String),
    Invalid(String),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::NoInputs(m) => write!(f, "no inputs: {m}"),
            CliError::Invalid(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub paper_suite: bool,
    pub precision_bits: u32,
    pub tol_circle: f64,
    pub tol_residual: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub criteria: bool,
    pub angles: bool,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            inputs: Vec::new(),
            paper_suite: false,
            precision_bits: v.budget.bits,
            tol_circle: v.circle_tol,
            tol_residual: v.residual_tol,
            format: Format::Json,
            out: None,
            jobs: None,
            criteria: true,
            angles: true,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < 53 {
            return Err(CliError::Invalid(format!(
                "precision must be at least 53 bits, got {}",
                self.precision_bits
            )));
        }
        for (name, t) in [("circle", self.tol_circle), ("residual", self.tol_residual)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Invalid(format!("{name} tolerance must be positive, got {t}")));
            }
        }
        if self.jobs == Some(0) {
            return Err(CliError::Invalid("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// The default target error, loosened when the precision cannot reach it.
    pub fn budget(&self) -> PrecisionBudget {
        let base = PrecisionBudget::default();
        let unit = 2f64.powi(-(self.precision_bits as i32 - base.guard_bits as i32));
        PrecisionBudget {
            bits: self.precision_bits,
            target_rel_err: base.target_rel_err.max(16.0 * unit),
            ..base
        }
    }

    /// Digits the target accuracy supports, plus one guard digit.
    pub fn digits(&self) -> usize {
        let b = self.budget();
        let accurate = (-b.target_rel_err.log10()).ceil() as usize + 1;
        b.decimal_digits().min(accurate)
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            budget: self.budget(),
            circle_tol: self.tol_circle,
            residual_tol: self.tol_residual,
            criteria: self.criteria,
            angles: self.angles,
            timings: self.timings,
            ..VerifyConfig::default()
        }
    }
}

/// One resolved input: where it came from and the parsed spec or why parsing failed.
pub struct Input {
    pub source: String,
    pub spec: Result<NewformSpec, String>,
}

fn spec_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))? {
        let entry = entry.map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::NoInputs(format!("{} contains no spec files", dir.display())));
    }
    Ok(files)
}

/// Expand directories (sorted, non-recursive) and append the bundled corpus
/// when requested.
pub fn collect_inputs(config: &RunConfig) -> Result<Vec<Input>, CliError> {
    let mut out = Vec::new();
    for path in &config.inputs {
        let files = if path.is_dir() { spec_files(path)? } else { vec![path.clone()] };
        for f in files {
            out.push(Input {
                source: f.display().to_string(),
                spec: NewformSpec::from_path(&f).map_err(|e| e.to_string()),
            });
        }
    }
    if config.paper_suite {
        for (name, text) in fixtures::DOCUMENTS {
            out.push(Input {
                source: format!("bundled:{name}"),
                spec: NewformSpec::parse_document(text, None).map_err(|e| e.to_string()),
            });
        }
    }
    if out.is_empty() {
        return Err(CliError::NoInputs("give at least one spec path or --paper-suite".into()));
    }
    Ok(out)
}

fn pool(config: &RunConfig) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.jobs {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Invalid(e.to_string()))
}

fn failure_outcome(v: &Verification) -> Option<Outcome> {
    v.failure.as_ref().map(|f| match f.error.kind() {
        ErrorKind::Input => Outcome::InputError,
        ErrorKind::Numerical => Outcome::Inconsistent,
    })
}

/// Run the pipeline on every input in parallel; reports keep input order.
fn run_forms(
    config: &RunConfig,
    vc: VerifyConfig,
    outcome: fn(&Verification) -> Outcome,
) -> Result<Vec<FormReport>, CliError> {
    let inputs = collect_inputs(config)?;
    let digits = config.digits();
    let reports = pool(config)?.install(|| {
        inputs
            .par_iter()
            .map(|input| match &input.spec {
                Ok(spec) => {
                    let v = verify_form(spec, &vc);
                    FormReport::from_verification(&v, &input.source, digits, outcome(&v))
                }
                Err(message) => FormReport::unreadable(&input.source, message.clone()),
            })
            .collect()
    });
    Ok(reports)
}

fn header(command: &str, config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    Ok(Report::new(command, config.precision_bits, config.digits()))
}

pub fn run_verify(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = header("verify", config)?;
    report.forms = run_forms(config, config.verify_config(), Verification::outcome)?;
    Ok(report.finish())
}

pub fn run_lvalues(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = header("lvalues", config)?;
    let vc = VerifyConfig {
        stop_after: Some(Stage::LValues),
        criteria: false,
        angles: false,
        ..config.verify_config()
    };
    report.forms = run_forms(config, vc, |v| {
        failure_outcome(v).unwrap_or(if v.monotonicity.as_ref().is_some_and(|m| m.passed()) {
            Outcome::Pass
        } else {
            Outcome::Inconsistent
        })
    })?;
    Ok(report.finish())
}

/// Angles from spec files (predicted and matched), or predicted only from
/// `(k, N, ε)` when no spec is given.
pub fn run_angles(config: &RunConfig, manual: Option<(u32, u64, Sign)>) -> Result<Report, CliError> {
    let mut report = header("angles", config)?;
    if let Some((k, level, sign)) = manual {
        check_weight(k)?;
        let mut form = FormReport::unreadable("arguments", String::new());
        form.label = format!("{k}.{level}");
        form.k = Some(k);
        form.n = Some(level);
        form.epsilon = Some(sign.value());
        form.failure = None;
        match predict_angles(k / 2 - 1, level, sign) {
            Ok(a) => {
                form.angles = Some(AngleSummary::predicted_only(&a));
                form.outcome = "pass".into();
                form.exit_code = 0;
                form.passed = true;
            }
            Err(e) => {
                form.angles = Some(AngleSummary::failed(e.to_string()));
                let input = e.kind() == ErrorKind::Input;
                form.outcome = if input { "input-error" } else { "inconsistent" }.into();
                form.exit_code = if input { 2 } else { 3 };
            }
        }
        report.forms.push(form);
        if config.inputs.is_empty() && !config.paper_suite {
            return Ok(report.finish());
        }
    }
    let vc = VerifyConfig {
        criteria: false,
        angles: true,
        ..config.verify_config()
    };
    report.forms.extend(run_forms(config, vc, |v| {
        let base = v.outcome();
        match (&v.angles, base) {
            (Some(Err(e)), Outcome::Pass) if e.kind() == ErrorKind::Input => Outcome::InputError,
            (Some(Err(_)), Outcome::Pass) => Outcome::Inconsistent,
            _ => base,
        }
    })?);
    Ok(report.finish())
}

fn check_weight(k: u32) -> Result<(), CliError> {
    if k < 4 || k % 2 == 1 {
        return Err(CliError::Invalid(format!("weight must be even and at least 4, got {k}")));
    }
    Ok(())
}

/// Level-only thresholds for weight `k`, with verdicts at `level` when given.
pub fn thresholds(k: u32, level: Option<u64>) -> Result<ThresholdReport, CliError> {
    check_weight(k)?;
    if level == Some(0) {
        return Err(CliError::Invalid("level must be at least 1".into()));
    }
    let m = k / 2 - 1;
    let mut notes = Vec::new();
    let bound = level_bound(k, level.unwrap_or(1), 128);
    match &bound {
        Some(b) => notes.push(format!("N ≥ {} sufficient for monotone coefficients", b.least_level)),
        None => {
            notes.push("central coefficient condition is trivially satisfiable at weight 4".into());
            notes.push("no monotone coefficient rows (m - 1 = 0)".into());
        }
    }
    let (large_weight, large_least) = if m >= 2 {
        let least = least_level_for(m);
        notes.push(format!("N ≥ {least} sufficient for the large-weight criterion"));
        (level.map(|n| Check::from(&large_weight_criterion(m, n))), Some(least))
    } else {
        (None, None)
    };
    Ok(ThresholdReport {
        k,
        n: level,
        szego_threshold: bound.as_ref().map(|b| diag(b.threshold)),
        szego_least_level: bound.as_ref().map(|b| b.least_level),
        szego_holds: level.and(bound.as_ref()).map(|b| b.holds),
        large_weight,
        large_weight_least_level: large_least,
        notes,
    })
}

pub fn table() -> Vec<TableRow> {
    least_level_table()
        .into_iter()
        .map(|(m, least)| TableRow {
            m,
            least_level: least,
            at_least: Check::from(&large_weight_criterion(m, least)),
            below: Some(if least > 1 {
                Check::from(&large_weight_criterion(m, least - 1))
            } else {
                Check::from(&large_weight_criterion(m - 1, least))
            }),
        })
        .collect()
}

/// Weights whose monotone-coefficient level thresholds are reproduced by `--paper-suite`.
pub const SUITE_WEIGHTS: [u32; 4] = [8, 10, 12, 14];

pub fn run_criteria(
    config: &RunConfig,
    weight: Option<u32>,
    level: Option<u64>,
    with_table: bool,
) -> Result<Report, CliError> {
    let mut report = header("criteria", config)?;
    if let Some(k) = weight {
        report.thresholds.push(thresholds(k, level)?);
    } else if level.is_some() {
        return Err(CliError::Invalid("--level needs --weight".into()));
    }
    if config.paper_suite {
        for k in SUITE_WEIGHTS {
            report.thresholds.push(thresholds(k, None)?);
        }
    }
    if with_table || config.paper_suite {
        report.table = table();
    }
    if !config.inputs.is_empty() || config.paper_suite {
        let vc = VerifyConfig {
            criteria: true,
            angles: false,
            ..config.verify_config()
        };
        report.forms = run_forms(config, vc, |v| failure_outcome(v).unwrap_or(Outcome::Pass))?;
    } else if weight.is_none() && !with_table {
        return Err(CliError::NoInputs("give --weight, --table, spec paths or --paper-suite".into()));
    }
    Ok(report.finish())
}
