//! The period polynomial `r_f`, its half-range companion `P_f`, and the
//! normalized evaluator `Q_f` with its main-term decomposition.

use rug::Float;

use crate::error::{Error, Result};
use crate::lfunction::CriticalValues;
use crate::mp::{factorial, float, horner, pi, powi, Complex};
use crate::qexpansion::Sign;
use crate::special::binomial_f;

/// `r_f(z) = Σ_{n=0}^{k-2} c_n z^n`.
#[derive(Clone, Debug)]
pub struct PeriodPolynomial {
    pub coefficients: Vec<Complex>,
    pub weight: u32,
    pub level: u64,
    pub sign: Sign,
    /// Largest coefficient difference between the L-value and Λ-value
    /// constructions, relative to the largest coefficient.
    pub route_discrepancy: f64,
}

impl PeriodPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.coefficients[0].prec()
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        horner(&self.coefficients, z)
    }

    /// `max_n |c_n|`.
    pub fn coefficient_scale(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// `Σ |c_n| |z|^n`, the magnitude scale of evaluating at `z`.
    pub fn eval_scale(&self, z: &Complex) -> f64 {
        let r = z.abs().to_f64();
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.abs().to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.re.is_zero() && c.im.is_zero())
    }
}

/// `c_n = -((k-2)!/(2πi)^{k-1}) (2πi)^n/n! L(k-1-n)`.
fn coefficients_from_l(cv: &CriticalValues) -> Vec<Complex> {
    let prec = cv.prec();
    let k = cv.weight;
    let two_pi = pi(prec) * 2u32;
    let kf = factorial(prec, k - 2);
    (0..=k - 2)
        .map(|n| {
            // (2πi)^{n-(k-1)} = (2π)^{n-k+1} i^{n-k+1}
            let e = n as i64 - (k as i64 - 1);
            let mag = powi(&two_pi, e as i32) * &kf / factorial(prec, n);
            let mag = -(mag * cv.l_value(k - 1 - n));
            Complex::i_pow(prec, e).scale(&mag)
        })
        .collect()
}

/// `c_n = i^{k-1} N^{-(k-1)/2} binom(k-2,n) (√N i)^n Λ(k-1-n)`.
fn coefficients_from_lambda(cv: &CriticalValues) -> Vec<Complex> {
    let prec = cv.prec();
    let k = cv.weight;
    let sqrt_n = Float::with_val(prec, cv.level).sqrt();
    (0..=k - 2)
        .map(|n| {
            let mag = powi(&sqrt_n, n as i32 - (k as i32 - 1))
                * binomial_f(prec, k - 2, n)
                * cv.lambda(k - 1 - n);
            Complex::i_pow(prec, (k - 1 + n) as i64).scale(&mag)
        })
        .collect()
}

/// Build `r_f` from the L-values and cross-check against the Λ-value form.
pub fn build_rf(cv: &CriticalValues) -> PeriodPolynomial {
    let coefficients = coefficients_from_l(cv);
    let alt = coefficients_from_lambda(cv);
    let scale = coefficients
        .iter()
        .map(|c| c.abs().to_f64())
        .fold(0.0, f64::max);
    let diff = coefficients
        .iter()
        .zip(&alt)
        .map(|(a, b)| a.sub(b).abs().to_f64())
        .fold(0.0, f64::max);
    let route_discrepancy = if scale > 0.0 { diff / scale } else { diff };
    PeriodPolynomial {
        coefficients,
        weight: cv.weight,
        level: cv.level,
        sign: cv.sign,
        route_discrepancy,
    }
}

/// `P_f(z) = ½ binom(2m,m) Λ(k/2) + Σ_{j=1}^m binom(2m,m+j) Λ(k/2+j) z^j`.
#[derive(Clone, Debug)]
pub struct PPoly {
    /// `p_0, …, p_m`.
    pub coefficients: Vec<Float>,
    pub m: u32,
}

impl PPoly {
    pub fn eval(&self, z: &Complex) -> Complex {
        let c: Vec<Complex> = self.coefficients.iter().cloned().map(Complex::real).collect();
        horner(&c, z)
    }

    pub fn eval_real(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coefficients.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

pub fn build_pf(cv: &CriticalValues) -> PPoly {
    let prec = cv.prec();
    let m = cv.m();
    let half = cv.weight / 2;
    let mut coefficients = Vec::with_capacity(m as usize + 1);
    coefficients.push(binomial_f(prec, 2 * m, m) * cv.lambda(half) / 2u32);
    for j in 1..=m {
        coefficients.push(binomial_f(prec, 2 * m, m + j) * cv.lambda(half + j));
    }
    PPoly { coefficients, m }
}

/// `count` equally spaced points on the unit circle starting at `z = 1`.
pub fn circle_samples(prec: u32, count: usize) -> Vec<Complex> {
    let two_pi = pi(prec) * 2u32;
    let one = float(prec, 1.0);
    (0..count)
        .map(|j| {
            let theta = Float::with_val(prec, &two_pi * j as u32) / count as u32;
            Complex::from_polar(&one, &theta)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

fn identity_tolerance(rf: &PeriodPolynomial, points: &[Complex], rounding_unit: f64) -> f64 {
    let scale = points
        .iter()
        .map(|z| rf.eval_scale(z))
        .fold(0.0, f64::max);
    10.0 * rounding_unit * scale.max(f64::MIN_POSITIVE)
}

/// Check `r_f(z/(i√N)) = i^{k-1} N^{-(k-1)/2} ε z^m (P_f(z) + ε P_f(1/z))`
/// at each sample `z`.
pub fn check_half_range_identity(
    rf: &PeriodPolynomial,
    pf: &PPoly,
    samples: &[Complex],
    rounding_unit: f64,
) -> Result<IdentityReport> {
    let prec = rf.prec();
    let k = rf.weight;
    let eps = rf.sign.value();
    let sqrt_n = Float::with_val(prec, rf.level).sqrt();
    let i_sqrt_n = Complex::new(Float::new(prec), sqrt_n.clone());
    let prefactor = Complex::i_pow(prec, k as i64 - 1)
        .scale(&powi(&sqrt_n, -(k as i32 - 1)))
        .scale(&float(prec, eps as f64));
    let mut max_residual: f64 = 0.0;
    let mut arguments = Vec::with_capacity(samples.len());
    for z in samples {
        let w = z.div(&i_sqrt_n);
        let lhs = rf.eval(&w);
        let p = pf.eval(z);
        let p_inv = pf.eval(&z.recip()).scale(&float(prec, eps as f64));
        let rhs = prefactor.mul(&z.powi(pf.m as i64)).mul(&p.add(&p_inv));
        max_residual = max_residual.max(lhs.sub(&rhs).abs().to_f64());
        arguments.push(w);
    }
    let tolerance = identity_tolerance(rf, &arguments, rounding_unit);
    let report = IdentityReport {
        max_residual,
        tolerance,
        samples: samples.len(),
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::IdentityFailure {
            residual: max_residual,
            tolerance,
        })
    }
}

/// Check `r_f(z) = -i^k ε (N z²)^{(k-2)/2} r_f(-1/(Nz))` at each sample,
/// scaled onto the circle `|z| = 1/√N`.
pub fn check_fricke_reflection(
    rf: &PeriodPolynomial,
    samples: &[Complex],
    rounding_unit: f64,
) -> Result<IdentityReport> {
    let prec = rf.prec();
    let k = rf.weight;
    let n_f = Float::with_val(prec, rf.level);
    let sqrt_n = Float::with_val(prec, n_f.sqrt_ref());
    let inv_sqrt_n = Float::with_val(prec, sqrt_n.recip_ref());
    let eps = float(prec, rf.sign.value() as f64);
    let mut max_residual: f64 = 0.0;
    let mut arguments = Vec::with_capacity(samples.len());
    for u in samples {
        let z = u.scale(&inv_sqrt_n);
        let lhs = rf.eval(&z);
        let reflected = z.scale(&n_f).recip().neg();
        let factor = z.mul(&z).scale(&n_f).powi((k as i64 - 2) / 2);
        let rhs = Complex::i_pow(prec, k as i64)
            .neg()
            .scale(&eps)
            .mul(&factor)
            .mul(&rf.eval(&reflected));
        max_residual = max_residual.max(lhs.sub(&rhs).abs().to_f64());
        arguments.push(z);
    }
    let tolerance = identity_tolerance(rf, &arguments, rounding_unit);
    let report = IdentityReport {
        max_residual,
        tolerance,
        samples: samples.len(),
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::IdentityFailure {
            residual: max_residual,
            tolerance,
        })
    }
}

/// `Q_f(z)` split as `z^m exp(2π/(z√N)) + S_1 + S_2 + S_3`.
#[derive(Clone, Debug)]
pub struct QfValue {
    pub q: Complex,
    pub main: Complex,
    pub s1: Complex,
    pub s2: Complex,
    pub s3: Complex,
}

/// Pointwise evaluator for `Q_f`.
#[derive(Clone, Debug)]
pub struct QfEvaluator {
    pub m: u32,
    pub level: u64,
    /// `L(2m+1-j)/L(2m+1)` for `j = 0..m-1`.
    ratios: Vec<Float>,
    /// The constant `S_3`.
    s3: Float,
    /// `(2m)! (√N/2π)^{2m+1} L(2m+1)`.
    normalizer: Float,
    /// `2π/√N`.
    x: Float,
    prec: u32,
}

pub fn build_qf(cv: &CriticalValues) -> Result<QfEvaluator> {
    let m = cv.m();
    if m < 2 {
        return Err(Error::Domain(format!(
            "Q_f needs weight at least 6, got {}",
            cv.weight
        )));
    }
    let prec = cv.prec();
    let top = cv.l_value(2 * m + 1);
    if top.is_zero() {
        return Err(Error::Domain("L(f,k-1) vanishes".into()));
    }
    let sqrt_n = Float::with_val(prec, cv.level).sqrt();
    let two_pi = pi(prec) * 2u32;
    let x = Float::with_val(prec, &two_pi / &sqrt_n);
    let ratios = (0..m)
        .map(|j| Float::with_val(prec, cv.l_value(2 * m + 1 - j) / top))
        .collect();
    let m_fact = factorial(prec, m);
    let s3 = powi(&x, 2 * m as i32 + 1) * cv.lambda(cv.weight / 2)
        / (Float::with_val(prec, m_fact.square_ref()) * 2u32 * top);
    let normalizer = factorial(prec, 2 * m)
        * powi(&Float::with_val(prec, x.recip_ref()), 2 * m as i32 + 1)
        * top;
    Ok(QfEvaluator {
        m,
        level: cv.level,
        ratios,
        s3,
        normalizer,
        x,
        prec,
    })
}

impl QfEvaluator {
    pub fn normalizer(&self) -> &Float {
        &self.normalizer
    }

    pub fn eval(&self, z: &Complex) -> QfValue {
        let prec = self.prec;
        let w = z.recip().scale(&self.x);
        let zm = z.powi(self.m as i64);
        // w^j/j! for j < m, weighted by the L-value ratios
        let mut term = Complex::one(prec);
        let mut s1_inner = Complex::zero(prec);
        let mut q_inner = Complex::zero(prec);
        for j in 0..self.m {
            if j > 0 {
                term = term.mul(&w).scale(&Float::with_val(prec, Float::with_val(prec, j).recip()));
            }
            let r = &self.ratios[j as usize];
            q_inner = q_inner.add(&term.scale(r));
            if j > 0 {
                s1_inner = s1_inner.add(&term.scale(&Float::with_val(prec, r - 1u32)));
            }
        }
        // Σ_{j≥m} w^j/j! until terms fall below the working precision
        let cutoff = Float::with_val(prec, Float::with_val(prec, 1) >> (prec + 8));
        let mut tail = Complex::zero(prec);
        let mut j = self.m;
        loop {
            term = term.mul(&w).scale(&Float::with_val(prec, Float::with_val(prec, j).recip()));
            tail = tail.add(&term);
            j += 1;
            if term.abs() < cutoff || j > 100_000 {
                break;
            }
        }
        let main = zm.mul(&w.exp());
        let s1 = zm.mul(&s1_inner);
        let s2 = zm.mul(&tail).neg();
        let s3 = Complex::real(self.s3.clone());
        let q = zm.mul(&q_inner).add(&s3);
        QfValue { q, main, s1, s2, s3 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight4_cv() -> CriticalValues {
        // the weight-4 level-8 L-values at 2 and 3, Λ(1) set by the functional equation
        let prec = 128;
        let l2 = crate::lfunction::l_to_lambda(&float(prec, 0.6900311), 2, 8, prec);
        let l3 = crate::lfunction::l_to_lambda(&float(prec, 0.8746953), 3, 8, prec);
        CriticalValues::from_lambda(4, 8, Sign::Plus, vec![l3.clone(), l2, l3], 0.0, Default::default())
    }

    #[test]
    fn weight4_pf_shape() {
        let cv = weight4_cv();
        let pf = build_pf(&cv);
        assert_eq!(pf.coefficients.len(), 2);
        assert_eq!(pf.coefficients[0], *cv.lambda(2));
        assert_eq!(pf.coefficients[1], *cv.lambda(3));
    }

    #[test]
    fn weight6_pf_shape() {
        let cv = CriticalValues::from_lambda_f64(6, 5, Sign::Plus, &[5.0, 4.0, 3.0, 4.0, 5.0]);
        let pf = build_pf(&cv);
        let got: Vec<f64> = pf.coefficients.iter().map(|c| c.to_f64()).collect();
        assert_eq!(got, vec![3.0 * 3.0, 4.0 * 4.0, 5.0]);
    }

    #[test]
    fn odd_sign_has_no_constant_term() {
        let cv = CriticalValues::from_lambda_f64(6, 5, Sign::Minus, &[-5.0, -4.0, 0.0, 4.0, 5.0]);
        assert!(build_pf(&cv).coefficients[0].is_zero());
    }

    #[test]
    fn zero_values_give_zero_polynomial() {
        let cv = CriticalValues::from_lambda_f64(8, 3, Sign::Plus, &[0.0; 7]);
        let rf = build_rf(&cv);
        assert!(rf.is_zero());
        let pf = build_pf(&cv);
        let r = check_half_range_identity(&rf, &pf, &circle_samples(128, 13), 1e-30).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn both_constructions_agree() {
        let rf = build_rf(&weight4_cv());
        assert!(rf.route_discrepancy < 1e-30, "{}", rf.route_discrepancy);
        let cv = CriticalValues::from_lambda_f64(10, 12, Sign::Plus, &[9.0, 7.0, 5.0, 3.0, 2.0, 3.0, 5.0, 7.0, 9.0]);
        assert!(build_rf(&cv).route_discrepancy < 1e-30);
    }

    #[test]
    fn weight4_identities() {
        let cv = weight4_cv();
        let rf = build_rf(&cv);
        let pf = build_pf(&cv);
        let unit = cv.budget.rounding_unit();
        let one = circle_samples(128, 1);
        assert!(check_half_range_identity(&rf, &pf, &one, unit).unwrap().max_residual < 1e-12);
        let samples = circle_samples(128, 5);
        check_half_range_identity(&rf, &pf, &samples, unit).unwrap();
        check_fricke_reflection(&rf, &samples, unit).unwrap();
    }

    #[test]
    fn identity_detects_wrong_sign() {
        let cv = weight4_cv();
        let mut rf = build_rf(&cv);
        rf.sign = Sign::Minus;
        let pf = build_pf(&cv);
        let err = check_half_range_identity(&rf, &pf, &circle_samples(128, 5), 1e-30);
        assert!(matches!(err, Err(Error::IdentityFailure { .. })));
    }

    #[test]
    fn qf_requires_weight_six() {
        assert!(matches!(build_qf(&weight4_cv()), Err(Error::Domain(_))));
    }

    #[test]
    fn qf_main_term_at_one() {
        let cv = CriticalValues::from_lambda_f64(8, 3, Sign::Plus, &[9.0, 7.0, 5.0, 4.0, 5.0, 7.0, 9.0]);
        let qf = build_qf(&cv).unwrap();
        let v = qf.eval(&Complex::one(128));
        let rest = v.q.sub(&v.s1).sub(&v.s2).sub(&v.s3);
        let expected = (2.0 * std::f64::consts::PI / 3f64.sqrt()).exp();
        assert!((rest.re.to_f64() - expected).abs() < 1e-12 * expected);
        assert!(rest.im.to_f64().abs() < 1e-25);
        assert!(rest.sub(&v.main).abs().to_f64() < 1e-25);
    }

    #[test]
    fn qf_reproduces_pf() {
        let cv = CriticalValues::from_lambda_f64(8, 3, Sign::Plus, &[9.0, 7.0, 5.0, 4.0, 5.0, 7.0, 9.0]);
        let qf = build_qf(&cv).unwrap();
        let pf = build_pf(&cv);
        for z in circle_samples(128, 9) {
            let lhs = pf.eval(&z);
            let rhs = qf.eval(&z).q.scale(qf.normalizer());
            assert!(lhs.sub(&rhs).abs().to_f64() < 1e-28 * lhs.abs().to_f64().max(1.0));
        }
    }
}
