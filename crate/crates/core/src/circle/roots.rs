//! Simultaneous root finding and certification on `|z| = 1/√N`.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{float, pi, Complex};
use crate::periodpoly::PeriodPolynomial;

pub const ITERATION_CAP: usize = 200;
/// Default per-root residual tolerance, relative to `max |c_n|`.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Default tolerance on `|√N |ρ| - 1|`.
pub const CIRCLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    /// `|p(ρ)| / max |c_n|` per root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Set when `|c_d| / max |c_n|` is tiny.
    pub ill_conditioned: bool,
}

impl RootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// `(p(z), p'(z))` by Horner's rule.
fn eval_with_derivative(c: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec();
    let mut p = Complex::zero(prec);
    let mut dp = Complex::zero(prec);
    for a in c.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(a);
    }
    (p, dp)
}

fn is_zero(c: &Complex) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// All roots of `Σ c_n z^n` by Aberth iteration seeded on `|z| = radius`,
/// followed by one Newton polish per root.
pub fn find_polynomial_roots(
    coefficients: &[Complex],
    radius: &Float,
    residual_tol: f64,
) -> Result<RootSet> {
    let d = coefficients.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::Domain("polynomial has degree 0".into()));
    }
    if is_zero(&coefficients[d]) {
        return Err(Error::Domain("leading coefficient vanishes".into()));
    }
    let prec = radius.prec();
    let scale = coefficients
        .iter()
        .map(|c| c.abs().to_f64())
        .fold(0.0, f64::max);
    let ill_conditioned = coefficients[d].abs().to_f64() < 1e-30 * scale;

    // seeds at half-spacing offsets from angle 0, plus a small fixed twist so
    // that no pair of seeds is mirror-symmetric about a coordinate axis
    let step = Float::with_val(prec, pi(prec) * 2u32) / d as u32;
    let twist = float(prec, 0.0137);
    let mut z: Vec<Complex> = (0..d)
        .map(|j| {
            let theta = Float::with_val(prec, &step * (j as f64 + 0.5)) + &twist;
            Complex::from_polar(radius, &theta)
        })
        .collect();

    let converged_at = Float::with_val(prec, Float::with_val(prec, 1) >> (prec.saturating_sub(12)));
    let mut iterations = 0;
    for _ in 0..ITERATION_CAP {
        iterations += 1;
        let mut biggest = Float::new(prec);
        for i in 0..d {
            let (p, dp) = eval_with_derivative(coefficients, &z[i]);
            if is_zero(&p) {
                continue;
            }
            let newton = p.div(&dp);
            let mut repulsion = Complex::zero(prec);
            for j in 0..d {
                if i != j {
                    repulsion = repulsion.add(&z[i].sub(&z[j]).recip());
                }
            }
            let denom = Complex::one(prec).sub(&newton.mul(&repulsion));
            let w = newton.div(&denom);
            let rel = Float::with_val(prec, w.abs() / z[i].abs().max(&Float::with_val(prec, 1e-300)));
            if rel > biggest {
                biggest = rel;
            }
            z[i] = z[i].sub(&w);
        }
        if biggest < converged_at {
            break;
        }
    }

    for zi in z.iter_mut() {
        let (p, dp) = eval_with_derivative(coefficients, zi);
        if !is_zero(&p) && !is_zero(&dp) {
            *zi = zi.sub(&p.div(&dp));
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|zi| eval_with_derivative(coefficients, zi).0.abs().to_f64() / scale)
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if !(max_residual <= residual_tol) {
        return Err(Error::NonConvergence {
            iterations,
            max_residual,
            best: z.iter().map(Complex::to_f64).collect(),
        });
    }
    Ok(RootSet {
        roots: z,
        residuals,
        iterations,
        ill_conditioned,
    })
}

/// Roots of `r_f`, seeded on `|z| = 1/√N`.
pub fn find_roots(rf: &PeriodPolynomial, residual_tol: f64) -> Result<RootSet> {
    let prec = rf.prec();
    let radius = Float::with_val(prec, rf.level).sqrt().recip();
    find_polynomial_roots(&rf.coefficients, &radius, residual_tol)
}

/// Root locations measured against the circle `|z| = 1/√N`.
#[derive(Clone, Debug)]
pub struct CircleReport {
    pub level: u64,
    pub roots: Vec<Complex>,
    /// `|√N |ρ| - 1|` per root.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Hausdorff distance between the roots and their images under `ρ ↦ -1/(Nρ)`.
    pub fricke_closure: f64,
    /// Same under `ρ ↦ -conj(ρ)`.
    pub mirror_closure: f64,
    pub passed: bool,
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex], b: &[Complex]) -> f64 {
    let one_way = |x: &[Complex], y: &[Complex]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.sub(q).abs().to_f64())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

pub fn certify_circle(roots: &[Complex], level: u64, tol: f64) -> CircleReport {
    let prec = roots.first().map(Complex::prec).unwrap_or(128);
    let n_f = Float::with_val(prec, level);
    let sqrt_n = Float::with_val(prec, n_f.sqrt_ref());
    let deviations: Vec<f64> = roots
        .iter()
        .map(|r| {
            let d = Float::with_val(prec, r.abs() * &sqrt_n) - 1u32;
            d.to_f64().abs()
        })
        .collect();
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    let fricke: Vec<Complex> = roots.iter().map(|r| r.scale(&n_f).recip().neg()).collect();
    let mirror: Vec<Complex> = roots.iter().map(|r| r.conj().neg()).collect();
    CircleReport {
        level,
        roots: roots.to_vec(),
        deviations,
        max_deviation,
        tolerance: tol,
        fricke_closure: hausdorff(roots, &fricke),
        mirror_closure: hausdorff(roots, &mirror),
        passed: max_deviation < tol,
    }
}
