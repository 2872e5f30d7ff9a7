//! Acceptance suite: every criterion at its stated tolerance, one line each.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use periodrh_core::circle::angles::ANGLE_CONSTANT;
use periodrh_core::circle::criteria::{large_weight_criterion, level_bound};
use periodrh_core::circle::{
    certify_circle, count_sign_changes, find_roots, match_roots_to_angles, predict_angles,
    trig_polynomial,
};
use periodrh_core::lfunction::{check_monotonicity, detect_sign, lambda_values, required_terms, CriticalValues};
use periodrh_core::mp::Complex;
use periodrh_core::periodpoly::{build_pf, build_rf, check_half_range_identity, circle_samples};
use periodrh_core::pipeline::{verify_form, VerifyConfig};
use periodrh_core::{fixtures, PrecisionBudget, Sign};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn values_for(spec: &periodrh_core::NewformSpec) -> CriticalValues {
    let budget = PrecisionBudget::default();
    let q = spec.load_expansion(required_terms(spec.weight, spec.level, &budget)).unwrap();
    let sign = detect_sign(&q, spec.weight, spec.level, &budget).unwrap().sign;
    lambda_values(&q, spec.weight, spec.level, sign, &budget).unwrap()
}

/// Weight 4, level 8: L(1), L(2), L(3) to 5e-7 in under a second.
fn weight4_l_values() -> Outcome {
    let start = Instant::now();
    let cv = values_for(&fixtures::weight4_level8());
    let elapsed = start.elapsed().as_secs_f64();
    let expected = [0.3545006, 0.6900311, 0.8746953];
    let err = (1..=3)
        .map(|s| (cv.l_value(s).to_f64() - expected[s as usize - 1]).abs())
        .fold(0.0, f64::max);
    outcome(
        err < 5e-7 && elapsed < 1.0,
        format!("max |ΔL| = {err:.2e}, {elapsed:.3} s"),
    )
}

/// Weight 4, level 8: coefficients, roots and root norms.
fn weight4_polynomial() -> Outcome {
    let cv = values_for(&fixtures::weight4_level8());
    let rf = build_rf(&cv);
    let c: Vec<(f64, f64)> = rf.coefficients.iter().map(Complex::to_f64).collect();
    let expected = [(0.0, -0.00705256701815496), (0.0349573870, 0.0), (0.0, 0.0564205361)];
    let coeff_err = c
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
        .fold(0.0, f64::max);
    let roots = find_roots(&rf, 1e-12).unwrap();
    let got: Vec<(f64, f64)> = roots.roots.iter().map(Complex::to_f64).collect();
    let root_err = common::max_pairing_distance(&got, &[(0.17037672, 0.30979311), (-0.17037672, 0.30979311)]);
    let target = 1.0 / (2.0 * 2f64.sqrt());
    let norm_err = roots
        .roots
        .iter()
        .map(|r| (r.abs().to_f64() - target).abs())
        .fold(0.0, f64::max);
    outcome(
        coeff_err < 1e-9 && root_err < 1e-7 && norm_err < 1e-9,
        format!("coefficients {coeff_err:.2e}, roots {root_err:.2e}, norms {norm_err:.2e}"),
    )
}

/// Delta: all ten roots on |z| = 1, and the two displayed coefficients.
fn delta_polynomial() -> Outcome {
    let cv = values_for(&fixtures::delta());
    let rf = build_rf(&cv);
    let roots = find_roots(&rf, 1e-12).unwrap();
    let report = certify_circle(&roots.roots, 1, 1e-9);
    let c10 = rf.coefficients[10].to_f64();
    let c9 = rf.coefficients[9].to_f64();
    let e10 = 0.114379 * 36.0 / 691.0;
    let e9 = 4.0 * 0.00926927;
    let err = (c10.0.abs() + (c10.1 - e10).abs()).max((c9.0 - e9).abs() + c9.1.abs());
    outcome(
        roots.roots.len() == 10 && report.passed && err < 1e-5,
        format!(
            "{} roots, max ||ρ|-1| = {:.2e}, coefficient error {err:.2e}",
            roots.roots.len(),
            report.max_deviation
        ),
    )
}

/// Weight 10, level 12: L-values, cosine coefficients, sign-change localization.
fn weight10_level12() -> Outcome {
    let cv = values_for(&fixtures::weight10_level12());
    let expected_l = [
        343.041936898889,
        140.422365373567,
        32.9164131544840,
        6.41626479306637,
        1.71889934464323,
    ];
    let l_err = (1..=5)
        .map(|s| (cv.l_value(s).to_f64() - expected_l[s as usize - 1]).abs())
        .fold(0.0, f64::max);
    let u = trig_polynomial(&build_pf(&cv), cv.sign);
    let half: Vec<f64> = u.half_coefficients().iter().map(|c| c.to_f64()).collect();
    let expected_cos = [
        73.5501402820398,
        199.188643773093,
        308.910589184567,
        341.466246468159,
        189.128932153817,
    ];
    let cos_err = half
        .iter()
        .zip(&expected_cos)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let changes = count_sign_changes(&u);
    let zeros = changes.zeros_in(0.0, PI);
    let intervals = [(4, 5), (10, 11), (14, 15), (18, 19)];
    let localized = zeros.len() == 4
        && intervals.iter().all(|&(a, b)| {
            let (lo, hi) = (a as f64 * PI / 20.0, b as f64 * PI / 20.0);
            zeros.iter().filter(|&&t| t > lo && t < hi).count() == 1
        });
    outcome(
        l_err < 1e-9 && cos_err < 1e-9 && localized,
        format!(
            "L error {l_err:.2e}, cosine error {cos_err:.2e}, {} zeros in [0,π) localized: {localized}",
            zeros.len()
        ),
    )
}

/// Level thresholds for the monotone-coefficient criterion.
fn level_thresholds() -> Outcome {
    let got: Vec<u64> = [8, 10, 12, 14]
        .iter()
        .map(|&k| level_bound(k, 1, 128).unwrap().least_level)
        .collect();
    outcome(got == [142, 64, 45, 42], format!("ceilings {got:?}"))
}

/// Large-weight criterion against the published (m, N(m)) table.
fn large_weight_table() -> Outcome {
    let start = Instant::now();
    let table: [(u32, u64); 12] = [
        (29, 1),
        (21, 2),
        (18, 3),
        (16, 4),
        (14, 5),
        (13, 6),
        (12, 7),
        (11, 9),
        (10, 11),
        (9, 14),
        (8, 20),
        (7, 28),
    ];
    let mut bad = Vec::new();
    for &(m, n) in &table {
        if !large_weight_criterion(m, n).holds {
            bad.push(format!("fails at ({m},{n})"));
        }
        if n > 1 {
            let below = large_weight_criterion(m, n - 1);
            if below.holds {
                bad.push(format!("holds at ({m},{}) with margin {:.4}", n - 1, below.margin));
            }
        } else if large_weight_criterion(m - 1, n).holds {
            bad.push(format!("holds at ({},{n})", m - 1));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = bad.is_empty() && elapsed < 1.0;
    let detail = if bad.is_empty() {
        format!("all 12 pairs, {elapsed:.3} s")
    } else {
        format!("{}; {elapsed:.3} s", bad.join("; "))
    };
    outcome(passed, detail)
}

/// Structural properties over every bundled form.
fn fixture_properties() -> Outcome {
    let mut problems = Vec::new();
    let mut worst_quad: f64 = 0.0;
    for (spec, _, cv) in common::fixture_values() {
        let label = &spec.label;
        if !(cv.fe_residual < cv.error_bound) {
            problems.push(format!("{label}: functional equation {:.1e} >= {:.1e}", cv.fe_residual, cv.error_bound));
        }
        if !check_monotonicity(&cv).passed() {
            problems.push(format!("{label}: monotonicity"));
        }
        let rf = build_rf(&cv);
        let pf = build_pf(&cv);
        let samples = circle_samples(cv.prec(), 4 * cv.m() as usize + 1);
        if let Err(e) = check_half_range_identity(&rf, &pf, &samples, cv.budget.rounding_unit()) {
            problems.push(format!("{label}: {e}"));
        }
        let long = spec.load_expansion(400).unwrap();
        let quad = common::lambda_by_quadrature(&long, cv.weight, cv.level, cv.sign, cv.prec());
        let tol = 10.0 * cv.budget.target_rel_err * cv.scale();
        let quad_err = quad
            .iter()
            .zip(&cv.lambda)
            .map(|(a, b)| rug::Float::with_val(a.prec(), a - b).to_f64().abs())
            .fold(0.0, f64::max);
        worst_quad = worst_quad.max(quad_err / tol);
        if !(quad_err <= tol) {
            problems.push(format!("{label}: quadrature differs by {quad_err:.1e} > {tol:.1e}"));
        }
        match find_roots(&rf, 1e-12) {
            Ok(roots) => {
                let report = certify_circle(&roots.roots, cv.level, 1e-9);
                let changes = count_sign_changes(&trig_polynomial(&pf, cv.sign));
                let d = cv.weight as usize - 2;
                if roots.roots.len() != d || changes.count != d {
                    problems.push(format!("{label}: {} roots, {} sign changes", roots.roots.len(), changes.count));
                }
                if !(report.fricke_closure < 1e-9) {
                    problems.push(format!("{label}: closure {:.1e}", report.fricke_closure));
                }
            }
            Err(e) => problems.push(format!("{label}: {e}")),
        }
    }
    let detail = if problems.is_empty() {
        format!(
            "{} fixtures, worst quadrature discrepancy {worst_quad:.1e} of tolerance",
            fixtures::DOCUMENTS.len()
        )
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

/// Predicted angles against computed roots.
fn angle_matching() -> Outcome {
    let config = VerifyConfig::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for spec in [fixtures::delta(), fixtures::weight10_level12()] {
        let v = verify_form(&spec, &config);
        match v.angles {
            Some(Ok(m)) => {
                ok &= m.within_bound && m.within_empirical;
                lines.push(format!("{} max {:.2e} (bound {:.2e})", spec.label, m.max_residual, m.bound));
            }
            other => {
                ok = false;
                lines.push(format!("{}: {other:?}", spec.label));
            }
        }
    }
    // synthetic weight 4, ε = -1
    let level = 13u64;
    let cv = CriticalValues::from_lambda_f64(4, level, Sign::Minus, &[-0.25, 0.0, 0.25]);
    let roots = find_roots(&build_rf(&cv), 1e-12).unwrap();
    let r = 1.0 / (level as f64).sqrt();
    let exact = common::max_pairing_distance(
        &roots.roots.iter().map(Complex::to_f64).collect::<Vec<_>>(),
        &[(0.0, r), (0.0, -r)],
    );
    let predicted = predict_angles(1, level, Sign::Minus).unwrap();
    let matched = match_roots_to_angles(&roots.roots, level, 4, &predicted, ANGLE_CONSTANT).unwrap();
    let tight = 1e3 * cv.budget.rounding_unit();
    ok &= exact < tight && matched.max_residual < 1e-15;
    lines.push(format!("synthetic ±i/√13 error {exact:.1e}, angle residual {:.1e}", matched.max_residual));
    outcome(ok, lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("weight-4 level-8 L-values", weight4_l_values),
        ("weight-4 level-8 period polynomial and roots", weight4_polynomial),
        ("Delta roots on the unit circle", delta_polynomial),
        ("weight-10 level-12 values and sign changes", weight10_level12),
        ("level thresholds 142/64/45/42", level_thresholds),
        ("large-weight least-level table", large_weight_table),
        ("fixture property suite", fixture_properties),
        ("predicted angle matching", angle_matching),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let r = run();
        if !r.passed {
            failures += 1;
        }
        println!(
            "criterion {}: {} [{}] {}",
            i + 1,
            if r.passed { "PASS" } else { "FAIL" },
            name,
            r.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
