//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use periodrh_core::lfunction::CriticalValues;
use periodrh_core::mp::pi;
use periodrh_core::{QExpansion, Sign};
use rug::Float;

/// Gauss-Legendre nodes and weights on [-1, 1] at `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    let pi = pi(prec);
    let tol = Float::with_val(prec, Float::with_val(prec, 1) >> (prec - 8));
    (0..n)
        .map(|i| {
            let mut x = Float::with_val(prec, &pi * (i as f64 + 0.75)) / (n as f64 + 0.5);
            x = x.cos();
            let mut dp = Float::new(prec);
            for _ in 0..100 {
                // P_n(x) and P_{n-1}(x) by the three-term recurrence
                let mut p0 = Float::with_val(prec, 1);
                let mut p1 = x.clone();
                for k in 2..=n {
                    let p2 = (Float::with_val(prec, &x * &p1) * (2 * k - 1) as u32
                        - Float::with_val(prec, &p0 * (k - 1) as u32))
                        / k as u32;
                    p0 = p1;
                    p1 = p2;
                }
                let x2m1 = Float::with_val(prec, x.square_ref()) - 1u32;
                dp = (Float::with_val(prec, &x * &p1) - &p0) * n as u32 / x2m1;
                let dx = Float::with_val(prec, &p1 / &dp);
                x -= &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            let one_minus = Float::with_val(prec, 1u32 - Float::with_val(prec, x.square_ref()));
            let w = Float::with_val(prec, 2u32 / (one_minus * Float::with_val(prec, dp.square_ref())));
            (x, w)
        })
        .collect()
}

/// `g(y) = Σ a(n) e^{-2πny/√N}`, summed until terms are negligible.
fn theta(q: &QExpansion, y: &Float, level: u64, k: u32) -> Float {
    let prec = y.prec();
    let rate = Float::with_val(prec, pi(prec) * 2u32) * y / Float::with_val(prec, level).sqrt();
    let r = Float::with_val(prec, (-rate.clone()).exp());
    let mut rn = Float::with_val(prec, 1);
    let mut acc = Float::new(prec);
    let floor = Float::with_val(prec, Float::with_val(prec, 1) >> (prec + 40));
    for n in 1..=q.len() {
        rn *= &r;
        let bound = Float::with_val(prec, &rn * periodrh_core::mp::powi(&Float::with_val(prec, n), k as i32));
        acc += Float::with_val(prec, q.a(n) * &rn);
        if bound < floor {
            return acc;
        }
    }
    panic!("expansion too short for the quadrature oracle at y = {y}");
}

/// `Λ(f,s) = ∫_1^∞ g(y) (y^{s-1} + ε y^{k-s-1}) dy` by composite Gauss-Legendre.
pub fn lambda_by_quadrature(q: &QExpansion, k: u32, level: u64, sign: Sign, prec: u32) -> Vec<Float> {
    let nodes = gauss_legendre(30, prec);
    let h = Float::with_val(prec, level).sqrt() / 2u32;
    let eps = sign.value();
    let mut totals = vec![Float::new(prec); k as usize - 1];
    let floor = Float::with_val(prec, Float::with_val(prec, 1) >> (prec + 20));
    let mut a = Float::with_val(prec, 1);
    loop {
        let b = Float::with_val(prec, &a + &h);
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let half = Float::with_val(prec, &h / 2u32);
        let mut panel = vec![Float::new(prec); k as usize - 1];
        for (x, w) in &nodes {
            let y = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
            let g = theta(q, &y, level, k) * w;
            for s in 1..k {
                let up = periodrh_core::mp::powi(&y, (s - 1) as i32);
                let down = periodrh_core::mp::powi(&y, (k - s - 1) as i32);
                let kernel = if eps > 0 { up + down } else { up - down };
                panel[s as usize - 1] += Float::with_val(prec, &g * &kernel);
            }
        }
        let mut largest = Float::new(prec);
        for (t, p) in totals.iter_mut().zip(&panel) {
            let p = Float::with_val(prec, p * &half);
            if Float::with_val(prec, p.abs_ref()) > largest {
                largest = Float::with_val(prec, p.abs_ref());
            }
            *t += p;
        }
        let scale = totals.iter().map(|t| t.to_f64().abs()).fold(0.0, f64::max);
        if largest < Float::with_val(prec, &floor * scale.max(1e-300)) {
            return totals;
        }
        a = b;
    }
}

/// Roots of `r_f` from eigenvalues of the companion matrix of the real
/// polynomial `Σ binom(k-2,n) Λ(k-1-n) w^n`, mapped back by `z = w/(i√N)`.
pub fn companion_roots(cv: &CriticalValues) -> Vec<(f64, f64)> {
    let k = cv.weight;
    let d = (k - 2) as usize;
    let coeffs: Vec<f64> = (0..=d)
        .map(|n| {
            let b = periodrh_core::special::binomial(k - 2, n as u32).to_f64();
            b * cv.lambda(k - 1 - n as u32).to_f64()
        })
        .collect();
    let lead = coeffs[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -coeffs[i] / lead;
    }
    let sqrt_n = (cv.level as f64).sqrt();
    m.complex_eigenvalues()
        .iter()
        // w/(i√N) = -i w/√N
        .map(|w| (w.im / sqrt_n, -w.re / sqrt_n))
        .collect()
}

/// Solutions of `mθ - x sin θ = target` on `[0, 2π)` by a fine grid scan and bisection.
pub fn scan_phase(m: f64, x: f64, target: f64) -> Vec<f64> {
    let f = |t: f64| m * t - x * t.sin() - target;
    let n = 200_000;
    let tau = std::f64::consts::TAU;
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (tau * i as f64 / n as f64, tau * (i + 1) as f64 / n as f64);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == fa.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}

/// Every bundled form with its critical values at the default budget.
pub fn fixture_values() -> Vec<(periodrh_core::NewformSpec, QExpansion, CriticalValues)> {
    let budget = periodrh_core::PrecisionBudget::default();
    periodrh_core::fixtures::all()
        .unwrap()
        .into_iter()
        .map(|spec| {
            let m = periodrh_core::lfunction::required_terms(spec.weight, spec.level, &budget);
            let q = spec.load_expansion(m).unwrap();
            let sign = spec.sign.expect("fixtures declare their sign");
            let cv = periodrh_core::lfunction::lambda_values(&q, spec.weight, spec.level, sign, &budget)
                .unwrap();
            (spec, q, cv)
        })
        .collect()
}

/// Pair each computed root with its nearest reference and return the largest distance.
pub fn max_pairing_distance(computed: &[(f64, f64)], reference: &[(f64, f64)]) -> f64 {
    assert_eq!(computed.len(), reference.len());
    let mut used = vec![false; reference.len()];
    let mut worst: f64 = 0.0;
    for c in computed {
        let (j, d) = reference
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, r)| (j, ((c.0 - r.0).powi(2) + (c.1 - r.1).powi(2)).sqrt()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
