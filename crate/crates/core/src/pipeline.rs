//! End-to-end verification of one newform.

use std::fmt;
use std::time::Instant;

use crate::circle::{
    angles_for, certify_circle, count_sign_changes, evaluate_criteria, find_roots,
    match_roots_to_angles, trig_polynomial, AngleMatch, CircleReport, CriteriaReport, RootSet,
    SignChangeReport,
};
use crate::circle::angles::ANGLE_CONSTANT;
use crate::circle::roots::{CIRCLE_TOL, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::lfunction::{
    check_monotonicity, detect_sign, lambda_values, required_terms, CriticalValues,
    MonotonicityReport, SignDetection,
};
use crate::mp::PrecisionBudget;
use crate::periodpoly::{
    build_pf, build_rf, check_fricke_reflection, check_half_range_identity, circle_samples,
    IdentityReport, PPoly, PeriodPolynomial,
};
use crate::qexpansion::{validate_hecke, HeckeReport, NewformSpec, QExpansion};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub budget: PrecisionBudget,
    /// Tolerance on `|√N |ρ| - 1|`.
    pub circle_tol: f64,
    /// Per-root residual tolerance relative to `max |c_n|`.
    pub residual_tol: f64,
    /// Constant `C` in the angle bound `C/(2^k √N)`.
    pub angle_constant: f64,
    pub criteria: bool,
    pub angles: bool,
    /// Record wall-clock time per stage. Off by default so that reports are
    /// reproducible byte for byte.
    pub timings: bool,
    /// Skip every stage after this one.
    pub stop_after: Option<Stage>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            budget: PrecisionBudget::default(),
            circle_tol: CIRCLE_TOL,
            residual_tol: RESIDUAL_TOL,
            angle_constant: ANGLE_CONSTANT,
            criteria: true,
            angles: true,
            timings: false,
            stop_after: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Expansion,
    Hecke,
    Sign,
    LValues,
    Identities,
    Roots,
    SignChanges,
    Criteria,
    Angles,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Expansion => "expansion",
            Stage::Hecke => "hecke",
            Stage::Sign => "sign",
            Stage::LValues => "lvalues",
            Stage::Identities => "identities",
            Stage::Roots => "roots",
            Stage::SignChanges => "sign-changes",
            Stage::Criteria => "criteria",
            Stage::Angles => "angles",
        };
        f.write_str(s)
    }
}

#[derive(Debug)]
pub struct StageFailure {
    pub stage: Stage,
    pub error: Error,
}

/// Everything computed for one form. Stages after a failure are `None`.
#[derive(Debug)]
pub struct Verification {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub hecke: Option<HeckeReport>,
    pub sign: Option<SignDetection>,
    pub values: Option<CriticalValues>,
    pub monotonicity: Option<MonotonicityReport>,
    pub rf: Option<PeriodPolynomial>,
    pub pf: Option<PPoly>,
    pub identity: Option<IdentityReport>,
    pub reflection: Option<IdentityReport>,
    pub roots: Option<RootSet>,
    pub circle: Option<CircleReport>,
    pub sign_changes: Option<SignChangeReport>,
    /// The sign-change count was indeterminate and was redone at doubled precision.
    pub precision_doubled: bool,
    pub criteria: Option<CriteriaReport>,
    /// Angle prediction may legitimately be unavailable (non-unique phase
    /// solutions); that outcome is recorded here and does not fail the form.
    pub angles: Option<Result<AngleMatch>>,
    pub failure: Option<StageFailure>,
    pub timings: Vec<(Stage, f64)>,
}

/// Outcome classes, one per process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    InputError,
    Inconsistent,
    CertificationFailure,
}

impl Verification {
    fn new(spec: &NewformSpec) -> Self {
        Self {
            label: spec.label.clone(),
            weight: spec.weight,
            level: spec.level,
            hecke: None,
            sign: None,
            values: None,
            monotonicity: None,
            rf: None,
            pf: None,
            identity: None,
            reflection: None,
            roots: None,
            circle: None,
            sign_changes: None,
            precision_doubled: false,
            criteria: None,
            angles: None,
            failure: None,
            timings: Vec::new(),
        }
    }

    /// Pass iff no stage failed, the roots are certified on the circle, and
    /// the monotonicity chains hold. The functional equation and the
    /// polynomial identities are enforced by their stages.
    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }

    pub fn outcome(&self) -> Outcome {
        if let Some(f) = &self.failure {
            return match f.error.kind() {
                crate::error::ErrorKind::Input => Outcome::InputError,
                crate::error::ErrorKind::Numerical => Outcome::Inconsistent,
            };
        }
        if !self.circle.as_ref().is_some_and(|c| c.passed) {
            return Outcome::CertificationFailure;
        }
        if !self.monotonicity.as_ref().is_some_and(|m| m.passed()) {
            return Outcome::Inconsistent;
        }
        Outcome::Pass
    }
}

struct Clock {
    enabled: bool,
    start: Instant,
}

impl Clock {
    fn lap(&mut self, v: &mut Verification, stage: Stage) {
        if self.enabled {
            let now = Instant::now();
            v.timings.push((stage, (now - self.start).as_secs_f64()));
            self.start = now;
        }
    }
}

macro_rules! stage {
    ($v:expr, $stage:expr, $e:expr) => {
        match $e {
            Ok(x) => x,
            Err(error) => {
                $v.failure = Some(StageFailure {
                    stage: $stage,
                    error,
                });
                return $v;
            }
        }
    };
}

fn load(spec: &NewformSpec, budget: &PrecisionBudget) -> Result<QExpansion> {
    spec.load_expansion(required_terms(spec.weight, spec.level, budget))
}

/// Critical values with the sign fixed, reloading enough coefficients for `budget`.
fn values_at(spec: &NewformSpec, sign: crate::Sign, budget: &PrecisionBudget) -> Result<CriticalValues> {
    let q = load(spec, budget)?;
    lambda_values(&q, spec.weight, spec.level, sign, budget)
}

pub fn verify_form(spec: &NewformSpec, config: &VerifyConfig) -> Verification {
    let mut v = Verification::new(spec);
    let mut clock = Clock {
        enabled: config.timings,
        start: Instant::now(),
    };
    let budget = config.budget;
    stage!(v, Stage::Expansion, budget.validate());

    let q = stage!(v, Stage::Expansion, load(spec, &budget));
    clock.lap(&mut v, Stage::Expansion);

    let hecke = validate_hecke(&q, spec.weight, spec.level);
    let hecke_ok = hecke.passed();
    let first = hecke.violations.first().map(|x| format!("{x:?}"));
    v.hecke = Some(hecke);
    if !hecke_ok {
        v.failure = Some(StageFailure {
            stage: Stage::Hecke,
            error: Error::Hecke(first.unwrap_or_default()),
        });
        return v;
    }
    clock.lap(&mut v, Stage::Hecke);

    let detection = stage!(v, Stage::Sign, detect_sign(&q, spec.weight, spec.level, &budget));
    let sign = detection.sign;
    v.sign = Some(detection);
    if let Some(declared) = spec.sign {
        if declared != sign {
            v.failure = Some(StageFailure {
                stage: Stage::Sign,
                error: Error::MetadataMismatch {
                    field: "sign",
                    declared: declared.to_string(),
                    found: sign.to_string(),
                },
            });
            return v;
        }
    }
    clock.lap(&mut v, Stage::Sign);

    let cv = stage!(
        v,
        Stage::LValues,
        lambda_values(&q, spec.weight, spec.level, sign, &budget)
    );
    v.monotonicity = Some(check_monotonicity(&cv));
    v.values = Some(cv.clone());
    clock.lap(&mut v, Stage::LValues);
    if config.stop_after == Some(Stage::LValues) {
        return v;
    }

    let rf = build_rf(&cv);
    let pf = build_pf(&cv);
    v.rf = Some(rf.clone());
    v.pf = Some(pf.clone());
    let unit = budget.rounding_unit();
    if rf.route_discrepancy > 1e3 * unit {
        v.failure = Some(StageFailure {
            stage: Stage::Identities,
            error: Error::Inconsistency(format!(
                "the two period-polynomial constructions differ by {:e}",
                rf.route_discrepancy
            )),
        });
        return v;
    }
    let samples = circle_samples(cv.prec(), 4 * cv.m() as usize + 1);
    let identity = stage!(v, Stage::Identities, check_half_range_identity(&rf, &pf, &samples, unit));
    v.identity = Some(identity);
    let reflection = stage!(v, Stage::Identities, check_fricke_reflection(&rf, &samples, unit));
    v.reflection = Some(reflection);
    clock.lap(&mut v, Stage::Identities);

    let roots = stage!(v, Stage::Roots, find_roots(&rf, config.residual_tol));
    v.circle = Some(certify_circle(&roots.roots, spec.level, config.circle_tol));
    v.roots = Some(roots.clone());
    clock.lap(&mut v, Stage::Roots);

    let expected = spec.weight as usize - 2;
    let mut changes = count_sign_changes(&trig_polynomial(&pf, sign));
    if changes.count != expected && changes.indeterminate {
        let doubled = budget.doubled();
        let cv2 = stage!(v, Stage::SignChanges, values_at(spec, sign, &doubled));
        changes = count_sign_changes(&trig_polynomial(&build_pf(&cv2), sign));
        v.precision_doubled = true;
    }
    v.sign_changes = Some(changes);
    clock.lap(&mut v, Stage::SignChanges);

    if config.criteria {
        v.criteria = Some(stage!(v, Stage::Criteria, evaluate_criteria(&cv)));
        clock.lap(&mut v, Stage::Criteria);
    }
    if config.angles {
        v.angles = Some(angles_for(&cv).and_then(|a| {
            match_roots_to_angles(&roots.roots, spec.level, spec.weight, &a, config.angle_constant)
        }));
        clock.lap(&mut v, Stage::Angles);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qexpansion::CoefficientSource;

    #[test]
    fn weight4_passes() {
        let v = verify_form(&fixtures::weight4_level8(), &VerifyConfig::default());
        assert!(v.passed(), "{:?}", v.failure);
        assert_eq!(v.sign_changes.unwrap().count, 2);
        assert!(v.timings.is_empty());
    }

    #[test]
    fn declared_sign_mismatch_is_input_error() {
        let mut spec = fixtures::weight4_level8();
        spec.sign = Some(crate::Sign::Minus);
        let v = verify_form(&spec, &VerifyConfig::default());
        assert_eq!(v.failure.as_ref().unwrap().stage, Stage::Sign);
        assert_eq!(v.outcome(), Outcome::InputError);
    }

    #[test]
    fn corrupted_coefficients_fail_hecke() {
        let mut text = String::from("weight=4\nlevel=8\n");
        let q = fixtures::weight4_level8().load_expansion(80).unwrap();
        for n in 1..=80 {
            let a = if n == 6 { q.a(6).clone() + 1 } else { q.a(n).clone() };
            text.push_str(&format!("{a}\n"));
        }
        let spec = NewformSpec::new(4, 8, None, CoefficientSource::Text(text), "bad").unwrap();
        let v = verify_form(&spec, &VerifyConfig::default());
        assert_eq!(v.failure.as_ref().unwrap().stage, Stage::Hecke);
        assert_eq!(v.outcome(), Outcome::InputError);
    }

    #[test]
    fn timings_when_requested() {
        let config = VerifyConfig {
            timings: true,
            ..Default::default()
        };
        let v = verify_form(&fixtures::weight4_level8(), &config);
        assert!(!v.timings.is_empty());
    }
}
