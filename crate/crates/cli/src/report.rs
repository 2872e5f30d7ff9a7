//! Serializable reports. Every number is a decimal string with a fixed
//! count of significant digits so that reports compare byte for byte.

use periodrh_core::circle::criteria::{CorrectionReport, LevelBound, SzegoReport};
use periodrh_core::circle::{AngleMatch, CircleReport, CriteriaReport, Criterion, SignChangeReport};
use periodrh_core::lfunction::{CriticalValues, MonotonicityReport};
use periodrh_core::mp::{float, format_sig};
use periodrh_core::periodpoly::IdentityReport;
use periodrh_core::pipeline::{Outcome, Verification};
use periodrh_core::ErrorKind;
use serde::{Deserialize, Serialize};

/// Significant digits for diagnostics (residuals, margins, tolerances).
pub const DIAGNOSTIC_DIGITS: usize = 6;

/// Significant digits for angles and zero locations.
pub const ANGLE_DIGITS: usize = 15;

pub fn diag(x: f64) -> String {
    format_sig(&float(64, x), DIAGNOSTIC_DIGITS)
}

pub fn angle(x: f64) -> String {
    format_sig(&float(64, x), ANGLE_DIGITS)
}

/// Process exit code for an outcome.
pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Pass => 0,
        Outcome::InputError => 2,
        Outcome::Inconsistent => 3,
        Outcome::CertificationFailure => 4,
    }
}

fn outcome_name(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Pass => "pass",
        Outcome::InputError => "input-error",
        Outcome::Inconsistent => "inconsistent",
        Outcome::CertificationFailure => "certification-failure",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub precision_bits: u32,
    /// Significant digits of L, Λ and polynomial coefficients.
    pub digits: usize,
    pub diagnostic_digits: usize,
    pub forms: Vec<FormReport>,
    pub thresholds: Vec<ThresholdReport>,
    pub table: Vec<TableRow>,
    pub passed: usize,
    pub failed: usize,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, precision_bits: u32, digits: usize) -> Self {
        Self {
            command: command.to_string(),
            precision_bits,
            digits,
            diagnostic_digits: DIAGNOSTIC_DIGITS,
            forms: Vec::new(),
            thresholds: Vec::new(),
            table: Vec::new(),
            passed: 0,
            failed: 0,
            exit_code: 0,
        }
    }

    /// Fill the tallies. The exit code is the largest over all forms.
    pub fn finish(mut self) -> Self {
        self.passed = self.forms.iter().filter(|f| f.passed).count();
        self.failed = self.forms.len() - self.passed;
        self.exit_code = self.forms.iter().map(|f| f.exit_code).max().unwrap_or(0);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormReport {
    pub label: String,
    pub source: String,
    pub k: Option<u32>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub epsilon: Option<i32>,
    pub sign_detection: Option<SignSummary>,
    pub hecke: Option<HeckeSummary>,
    pub truncation: Option<usize>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "L_error")]
    pub l_error: Vec<String>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<String>,
    #[serde(rename = "Lambda_error")]
    pub lambda_error: Option<String>,
    pub fe_residual: Option<String>,
    pub monotonicity: Option<ChecksSummary>,
    /// Coefficients of `r_f`, lowest degree first, as `[re, im]`.
    pub period_polynomial: Vec<[String; 2]>,
    /// Coefficients `p_0..p_m` of the half-range polynomial.
    pub half_range_polynomial: Vec<String>,
    pub identities: Option<IdentitySummary>,
    pub circle: Option<CircleSummary>,
    pub sign_changes: Option<SignChangeSummary>,
    pub criteria: Option<CriteriaSummary>,
    pub angles: Option<AngleSummary>,
    pub failure: Option<FailureSummary>,
    pub outcome: String,
    pub passed: bool,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignSummary {
    pub detected: i32,
    pub residual_plus: String,
    pub residual_minus: String,
    pub involution_ratio: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeckeSummary {
    pub coprime_pairs: usize,
    pub recursions: usize,
    pub primes: usize,
    pub violations: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub margin: String,
    pub holds: bool,
}

impl From<&Criterion> for Check {
    fn from(c: &Criterion) -> Self {
        Self {
            name: c.name.clone(),
            lhs: diag(c.lhs),
            rhs: diag(c.rhs),
            margin: diag(c.margin),
            holds: c.holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecksSummary {
    pub checks: Vec<Check>,
    pub tolerance: String,
    pub passed: bool,
}

impl From<&MonotonicityReport> for ChecksSummary {
    fn from(m: &MonotonicityReport) -> Self {
        Self {
            checks: m
                .links
                .iter()
                .map(|l| Check {
                    name: l.description.clone(),
                    lhs: diag(l.lower),
                    rhs: diag(l.upper),
                    margin: diag(l.margin),
                    holds: l.holds,
                })
                .collect(),
            tolerance: diag(m.tolerance),
            passed: m.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub residual: String,
    pub tolerance: String,
    pub samples: usize,
    pub passed: bool,
}

impl From<&IdentityReport> for ResidualSummary {
    fn from(r: &IdentityReport) -> Self {
        Self {
            residual: diag(r.max_residual),
            tolerance: diag(r.tolerance),
            samples: r.samples,
            passed: r.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub route_discrepancy: String,
    pub half_range: Option<ResidualSummary>,
    pub reflection: Option<ResidualSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub re: String,
    pub im: String,
    /// `√N |ρ| - 1`.
    pub deviation: String,
    pub residual: String,
    /// `arg(i√N ρ)` in `[0, 2π)`.
    pub angle: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleSummary {
    pub roots: Vec<RootRow>,
    pub iterations: usize,
    pub ill_conditioned: bool,
    pub max_deviation: String,
    pub tolerance: String,
    pub fricke_closure: String,
    pub mirror_closure: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignChangeSummary {
    pub count: usize,
    pub expected: usize,
    /// Half coefficients of the trigonometric polynomial.
    pub coefficients: Vec<String>,
    pub intervals: Vec<[String; 2]>,
    pub grid_points: usize,
    pub indeterminate: bool,
    pub precision_doubled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub threshold: String,
    pub least_level: u64,
    pub level: u64,
    pub holds: bool,
}

impl From<&LevelBound> for LevelSummary {
    fn from(b: &LevelBound) -> Self {
        Self {
            threshold: diag(b.threshold),
            least_level: b.least_level,
            level: b.level,
            holds: b.holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzegoSummary {
    pub central: Check,
    pub monotone: Vec<Check>,
    pub coefficients_monotone: bool,
    pub level: Option<LevelSummary>,
}

impl From<&SzegoReport> for SzegoSummary {
    fn from(s: &SzegoReport) -> Self {
        Self {
            central: (&s.central).into(),
            monotone: s.monotone.iter().map(Check::from).collect(),
            coefficients_monotone: s.coefficients_monotone(),
            level: s.level.as_ref().map(LevelSummary::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSummary {
    pub samples: usize,
    pub max_s12: String,
    pub s12_bound: String,
    pub max_s123: String,
    pub max_abs_sum: String,
    pub abs_sum_bound: Option<String>,
    pub main_term_floor: String,
    pub dominated: bool,
    pub bounds_hold: bool,
}

impl From<&CorrectionReport> for CorrectionSummary {
    fn from(c: &CorrectionReport) -> Self {
        Self {
            samples: c.samples,
            max_s12: diag(c.max_s12),
            s12_bound: diag(c.s12_bound),
            max_s123: diag(c.max_s123),
            max_abs_sum: diag(c.max_abs_sum),
            abs_sum_bound: c.abs_sum_bound.map(diag),
            main_term_floor: diag(c.main_term_floor),
            dominated: c.dominated,
            bounds_hold: c.bounds_hold(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaSummary {
    pub central: Vec<Check>,
    pub szego: SzegoSummary,
    pub large_weight: Option<Check>,
    pub corrections: Option<CorrectionSummary>,
}

impl From<&CriteriaReport> for CriteriaSummary {
    fn from(c: &CriteriaReport) -> Self {
        Self {
            central: c.central.iter().map(Check::from).collect(),
            szego: (&c.szego).into(),
            large_weight: c.large_weight.as_ref().map(Check::from),
            corrections: c.corrections.as_ref().map(CorrectionSummary::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnglePair {
    pub root: usize,
    pub angle: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSummary {
    pub predicted: Vec<String>,
    pub pairs: Vec<AnglePair>,
    pub max_residual: Option<String>,
    pub bound: Option<String>,
    pub empirical_tol: Option<String>,
    pub within_bound: Option<bool>,
    pub within_empirical: Option<bool>,
    pub error: Option<String>,
}

impl AngleSummary {
    pub fn predicted_only(angles: &[f64]) -> Self {
        Self {
            predicted: angles.iter().map(|&a| angle(a)).collect(),
            pairs: Vec::new(),
            max_residual: None,
            bound: None,
            empirical_tol: None,
            within_bound: None,
            within_empirical: None,
            error: None,
        }
    }

    pub fn failed(message: String) -> Self {
        Self {
            error: Some(message),
            ..Self::predicted_only(&[])
        }
    }

    fn matched(predicted: &[f64], m: &AngleMatch) -> Self {
        Self {
            pairs: m
                .pairs
                .iter()
                .map(|&(root, angle, residual)| AnglePair {
                    root,
                    angle: self::angle(predicted[angle]),
                    residual: diag(residual),
                })
                .collect(),
            max_residual: Some(diag(m.max_residual)),
            bound: Some(diag(m.bound)),
            empirical_tol: Some(diag(m.empirical_tol)),
            within_bound: Some(m.within_bound),
            within_empirical: Some(m.within_empirical),
            ..Self::predicted_only(predicted)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureSummary {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    /// Level beyond which monotone coefficients are guaranteed.
    pub szego_threshold: Option<String>,
    pub szego_least_level: Option<u64>,
    pub szego_holds: Option<bool>,
    pub large_weight: Option<Check>,
    pub large_weight_least_level: Option<u64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u32,
    pub least_level: u64,
    pub at_least: Check,
    pub below: Option<Check>,
}

impl FormReport {
    /// A report for an input that could not be read or parsed.
    pub fn unreadable(source: &str, message: String) -> Self {
        let mut r = Self::blank(source.to_string(), source.to_string());
        r.failure = Some(FailureSummary {
            stage: "input".into(),
            kind: "input".into(),
            message,
        });
        r.outcome = outcome_name(Outcome::InputError).into();
        r.exit_code = 2;
        r
    }

    fn blank(label: String, source: String) -> Self {
        Self {
            label,
            source,
            k: None,
            n: None,
            epsilon: None,
            sign_detection: None,
            hecke: None,
            truncation: None,
            l: Vec::new(),
            l_error: Vec::new(),
            lambda: Vec::new(),
            lambda_error: None,
            fe_residual: None,
            monotonicity: None,
            period_polynomial: Vec::new(),
            half_range_polynomial: Vec::new(),
            identities: None,
            circle: None,
            sign_changes: None,
            criteria: None,
            angles: None,
            failure: None,
            outcome: String::new(),
            passed: false,
            exit_code: 0,
            timings: Vec::new(),
        }
    }

    /// Assemble a report from whatever stages ran. `outcome` is decided by
    /// the caller since a partial run has its own pass condition.
    pub fn from_verification(v: &Verification, source: &str, digits: usize, outcome: Outcome) -> Self {
        let mut r = Self::blank(v.label.clone(), source.to_string());
        r.k = Some(v.weight);
        r.n = Some(v.level);
        r.sign_detection = v.sign.as_ref().map(|s| SignSummary {
            detected: s.sign.value(),
            residual_plus: diag(s.residual_plus),
            residual_minus: diag(s.residual_minus),
            involution_ratio: diag(s.involution_ratio),
        });
        r.epsilon = v.sign.as_ref().map(|s| s.sign.value());
        r.hecke = v.hecke.as_ref().map(|h| HeckeSummary {
            coprime_pairs: h.coprime_pairs_checked,
            recursions: h.recursions_checked,
            primes: h.primes_checked,
            violations: h.violations.iter().map(|x| format!("{x:?}")).collect(),
            passed: h.passed(),
        });
        if let Some(cv) = &v.values {
            r.fill_values(cv, digits);
        }
        r.monotonicity = v.monotonicity.as_ref().map(ChecksSummary::from);
        if let Some(rf) = &v.rf {
            r.period_polynomial = rf
                .coefficients
                .iter()
                .map(|c| [format_sig(&c.re, digits), format_sig(&c.im, digits)])
                .collect();
            r.identities = Some(IdentitySummary {
                route_discrepancy: diag(rf.route_discrepancy),
                half_range: v.identity.as_ref().map(ResidualSummary::from),
                reflection: v.reflection.as_ref().map(ResidualSummary::from),
            });
        }
        if let Some(pf) = &v.pf {
            r.half_range_polynomial = pf.coefficients.iter().map(|c| format_sig(c, digits)).collect();
        }
        if let (Some(roots), Some(circle)) = (&v.roots, &v.circle) {
            r.circle = Some(circle_summary(roots, circle, digits));
        }
        if let (Some(sc), Some(pf), Some(s)) = (&v.sign_changes, &v.pf, &v.sign) {
            let u = periodrh_core::circle::trig_polynomial(pf, s.sign);
            r.sign_changes = Some(sign_change_summary(sc, &u.half_coefficients(), v, digits));
        }
        r.criteria = v.criteria.as_ref().map(CriteriaSummary::from);
        r.angles = v.angles.as_ref().map(|a| match (a, &v.values) {
            (Ok(m), Some(cv)) => {
                let predicted = periodrh_core::circle::angles_for(cv).unwrap_or_default();
                AngleSummary::matched(&predicted, m)
            }
            (Err(e), _) => AngleSummary::failed(e.to_string()),
            (Ok(_), None) => AngleSummary::failed("no critical values".into()),
        });
        r.failure = v.failure.as_ref().map(|f| FailureSummary {
            stage: f.stage.to_string(),
            kind: match f.error.kind() {
                ErrorKind::Input => "input".into(),
                ErrorKind::Numerical => "numerical".into(),
            },
            message: f.error.to_string(),
        });
        r.timings = v
            .timings
            .iter()
            .map(|(s, t)| Timing {
                stage: s.to_string(),
                seconds: diag(*t),
            })
            .collect();
        r.outcome = outcome_name(outcome).into();
        r.exit_code = exit_code(outcome);
        r.passed = outcome == Outcome::Pass;
        r
    }

    fn fill_values(&mut self, cv: &CriticalValues, digits: usize) {
        self.truncation = Some(cv.truncation);
        self.l = (1..cv.weight).map(|s| format_sig(cv.l_value(s), digits)).collect();
        self.l_error = (1..cv.weight).map(|s| diag(cv.l_error_bound(s))).collect();
        self.lambda = (1..cv.weight).map(|s| format_sig(cv.lambda(s), digits)).collect();
        self.lambda_error = Some(diag(cv.error_bound));
        self.fe_residual = Some(diag(cv.fe_residual));
    }
}

fn circle_summary(
    roots: &periodrh_core::circle::RootSet,
    circle: &CircleReport,
    digits: usize,
) -> CircleSummary {
    CircleSummary {
        roots: roots
            .roots
            .iter()
            .zip(&circle.deviations)
            .zip(&roots.residuals)
            .map(|((z, &dev), &res)| RootRow {
                re: format_sig(&z.re, digits),
                im: format_sig(&z.im, digits),
                deviation: diag(dev),
                residual: diag(res),
                angle: angle(periodrh_core::circle::root_angle(z, circle.level)),
            })
            .collect(),
        iterations: roots.iterations,
        ill_conditioned: roots.ill_conditioned,
        max_deviation: diag(circle.max_deviation),
        tolerance: diag(circle.tolerance),
        fricke_closure: diag(circle.fricke_closure),
        mirror_closure: diag(circle.mirror_closure),
        passed: circle.passed,
    }
}

fn sign_change_summary(
    sc: &SignChangeReport,
    half: &[periodrh_core::rug::Float],
    v: &Verification,
    digits: usize,
) -> SignChangeSummary {
    SignChangeSummary {
        count: sc.count,
        expected: v.weight as usize - 2,
        coefficients: half.iter().map(|c| format_sig(c, digits)).collect(),
        intervals: sc.intervals.iter().map(|&(a, b)| [angle(a), angle(b)]).collect(),
        grid_points: sc.grid_points,
        indeterminate: sc.indeterminate,
        precision_doubled: v.precision_doubled,
    }
}
