//! Sufficient conditions for all zeros to lie on the circle, each with its
//! numeric margin.

use rug::Float;

use crate::error::Result;
use crate::lfunction::CriticalValues;
use crate::mp::{factorial, float, pi, powi};
use crate::periodpoly::{build_qf, circle_samples};
use crate::qexpansion::Sign;
use crate::special::{binomial_f, zeta};

/// One inequality `lhs < rhs` (or `≤`), with `margin = rhs - lhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

impl Criterion {
    fn strict(name: impl Into<String>, lhs: &Float, rhs: &Float) -> Self {
        let margin = Float::with_val(lhs.prec(), rhs - lhs).to_f64();
        Self {
            name: name.into(),
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            margin,
            holds: margin > 0.0,
        }
    }

    fn weak(name: impl Into<String>, lhs: &Float, rhs: &Float, tol: f64) -> Self {
        let mut c = Self::strict(name, lhs, rhs);
        c.holds = c.margin >= -tol;
        c
    }
}

/// The alternating central sum (`ε = +1` only), and for weight 6 the two
/// inequalities between `Λ(3), Λ(4), Λ(5)`.
pub fn central_inequalities(cv: &CriticalValues) -> Vec<Criterion> {
    let mut out = Vec::new();
    if cv.sign != Sign::Plus {
        return out;
    }
    let prec = cv.prec();
    let m = cv.m();
    let k = cv.weight;
    let mut sum = binomial_f(prec, 2 * m, m) * cv.lambda(k / 2) / 2u32;
    if m % 2 == 1 {
        sum = -sum;
    }
    for j in 0..m {
        let term = binomial_f(prec, 2 * m, 2 * m - j) * cv.lambda(k - 1 - j);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    out.push(Criterion::strict("alternating central sum > 0", &Float::new(prec), &sum));
    if k == 6 {
        let (l3, l4, l5) = (cv.lambda(3), cv.lambda(4), cv.lambda(5));
        let lhs = Float::with_val(prec, l4 * 4u32);
        let rhs = Float::with_val(prec, l5 + Float::with_val(prec, l3 * 3u32));
        out.push(Criterion::strict("Λ(5) + 3Λ(3) > 4Λ(4)", &lhs, &rhs));
        let lhs = Float::with_val(prec, l3 * l5) * 3u32;
        let rhs = Float::with_val(prec, l5.square_ref())
            + Float::with_val(prec, l4.square_ref()) * 2u32;
        let scale = l5.to_f64().abs().max(l4.to_f64().abs()).max(l3.to_f64().abs());
        out.push(Criterion::weak(
            "Λ(5)² + 2Λ(4)² >= 3Λ(3)Λ(5)",
            &lhs,
            &rhs,
            6.0 * scale * cv.error_bound,
        ));
    }
    out
}

/// `(2π/(k/2-j-1))² ζ(j+½)⁴/ζ(j+3/2)⁴` maximized over `1 ≤ j ≤ k/2-2`.
/// `None` when the range is empty (`k = 4`).
pub fn szego_level_threshold(k: u32, prec: u32) -> Option<Float> {
    let half = k / 2;
    if half < 3 {
        return None;
    }
    let two_pi = Float::with_val(prec, pi(prec) * 2u32);
    (1..=half - 2)
        .map(|j| {
            let a = Float::with_val(prec, &two_pi / (half - j - 1));
            let z1 = zeta(&float(prec, j as f64 + 0.5));
            let z2 = zeta(&float(prec, j as f64 + 1.5));
            let r = Float::with_val(prec, z1 / z2);
            Float::with_val(prec, a.square_ref()) * powi(&r, 4)
        })
        .max_by(|a, b| a.partial_cmp(b).unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelBound {
    pub threshold: f64,
    /// Least integer level the bound certifies.
    pub least_level: u64,
    pub level: u64,
    pub holds: bool,
}

pub fn level_bound(k: u32, level: u64, prec: u32) -> Option<LevelBound> {
    szego_level_threshold(k, prec).map(|t| {
        let least_level = t.clone().ceil().to_f64() as u64;
        LevelBound {
            threshold: t.to_f64(),
            least_level,
            level,
            holds: level >= least_level,
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SzegoReport {
    /// `binom(2m,m)Λ(k/2) ≤ 2 binom(2m,m+1)Λ(k/2+1)`.
    pub central: Criterion,
    /// `binom(2m,m+j)Λ(k/2+j) ≤ binom(2m,m+j+1)Λ(k/2+j+1)` for `j = 1..m-1`.
    pub monotone: Vec<Criterion>,
    pub level: Option<LevelBound>,
}

impl SzegoReport {
    pub fn coefficients_monotone(&self) -> bool {
        self.central.holds && self.monotone.iter().all(|c| c.holds)
    }
}

pub fn szego_criteria(cv: &CriticalValues) -> SzegoReport {
    let prec = cv.prec();
    let m = cv.m();
    let half = cv.weight / 2;
    let p = |j: u32| binomial_f(prec, 2 * m, m + j) * cv.lambda(half + j);
    let tol = |j: u32| 2.0 * binomial_f(prec, 2 * m, m + j).to_f64() * cv.error_bound;
    let central = Criterion::weak(
        format!("binom({},{m})Λ({half}) <= 2 binom({},{})Λ({})", 2 * m, 2 * m, m + 1, half + 1),
        &p(0),
        &(p(1) * 2u32),
        2.0 * tol(0),
    );
    let monotone = (1..m)
        .map(|j| {
            Criterion::weak(
                format!(
                    "binom({},{})Λ({}) <= binom({},{})Λ({})",
                    2 * m,
                    m + j,
                    half + j,
                    2 * m,
                    m + j + 1,
                    half + j + 1
                ),
                &p(j),
                &p(j + 1),
                tol(j),
            )
        })
        .collect();
    SzegoReport {
        central,
        monotone,
        level: level_bound(cv.weight, cv.level, prec),
    }
}

/// `x = 2π/√N` at the given precision.
fn phase_rate(level: u64, prec: u32) -> Float {
    let sqrt_n = Float::with_val(prec, level).sqrt();
    Float::with_val(prec, pi(prec) * 2u32) / sqrt_n
}

/// `(16/5) 2^{-m} (e^{2x} - 1) + c/(m-1)! x^{m-1}`.
fn tail_shape(m: u32, level: u64, c: f64, prec: u32) -> Float {
    let x = phase_rate(level, prec);
    let first = Float::with_val(prec, Float::with_val(prec, &x * 2u32).exp() - 1u32) * 16u32
        / 5u32
        / Float::with_val(prec, Float::u_pow_u(2, m));
    let second = powi(&x, m as i32 - 1) * c / factorial(prec, m - 1);
    first + second
}

/// Pointwise bound on `|S_1 + S_2|` over the unit circle.
pub fn s12_bound(m: u32, level: u64) -> f64 {
    tail_shape(m, level, 17.0 / 4.0, 128).to_f64()
}

/// Pointwise bound on `|S_1| + |S_2| + |S_3|`, valid for `m ≥ 7`.
pub fn total_s_bound(m: u32, level: u64) -> f64 {
    tail_shape(m, level, 33.0 / 4.0, 128).to_f64()
}

/// `(16/5) 2^{-m}(e^{4π/√N} - 1) + (33/4)/(m-1)! (2π/√N)^{m-1} < e^{-2π/√N}`.
pub fn large_weight_criterion(m: u32, level: u64) -> Criterion {
    let prec = 128;
    let lhs = tail_shape(m, level, 33.0 / 4.0, prec);
    let rhs = Float::with_val(prec, -phase_rate(level, prec)).exp();
    Criterion::strict(format!("tail bound < exp(-2π/√N) at m={m}, N={level}"), &lhs, &rhs)
}

/// Least `N ≥ 1` at which [`large_weight_criterion`] holds for the given `m`.
/// The left side decreases and the right side increases in `N`, so the
/// criterion then holds for every larger level.
pub fn least_level_for(m: u32) -> u64 {
    if large_weight_criterion(m, 1).holds {
        return 1;
    }
    let mut hi = 2u64;
    while !large_weight_criterion(m, hi).holds {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if large_weight_criterion(m, mid).holds {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The weights `m` tabulated alongside the large-weight criterion.
pub const TABLE_WEIGHTS: [u32; 12] = [29, 21, 18, 16, 14, 13, 12, 11, 10, 9, 8, 7];

/// `(m, least level)` for each tabulated `m`.
pub fn least_level_table() -> Vec<(u32, u64)> {
    TABLE_WEIGHTS.iter().map(|&m| (m, least_level_for(m))).collect()
}

/// Sampled sizes of the correction terms of `Q_f` on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionReport {
    pub samples: usize,
    pub max_s12: f64,
    pub s12_bound: f64,
    pub max_s123: f64,
    pub max_abs_sum: f64,
    /// Present for `m ≥ 7`.
    pub abs_sum_bound: Option<f64>,
    /// `e^{-2π/√N}`.
    pub main_term_floor: f64,
    /// `max |S_1+S_2+S_3| < e^{-2π/√N}` on the samples.
    pub dominated: bool,
}

impl CorrectionReport {
    pub fn bounds_hold(&self) -> bool {
        self.max_s12 <= self.s12_bound
            && self.abs_sum_bound.map_or(true, |b| self.max_abs_sum <= b)
    }
}

/// Evaluate `S_1, S_2, S_3` at `samples` circle points (`m ≥ 2`).
pub fn correction_terms(cv: &CriticalValues, samples: usize) -> Result<CorrectionReport> {
    let qf = build_qf(cv)?;
    let m = cv.m();
    let mut max_s12: f64 = 0.0;
    let mut max_s123: f64 = 0.0;
    let mut max_abs_sum: f64 = 0.0;
    for z in circle_samples(cv.prec(), samples) {
        let v = qf.eval(&z);
        let s12 = v.s1.add(&v.s2);
        max_s12 = max_s12.max(s12.abs().to_f64());
        max_s123 = max_s123.max(s12.add(&v.s3).abs().to_f64());
        let abs_sum = v.s1.abs().to_f64() + v.s2.abs().to_f64() + v.s3.abs().to_f64();
        max_abs_sum = max_abs_sum.max(abs_sum);
    }
    let floor = (-2.0 * std::f64::consts::PI / (cv.level as f64).sqrt()).exp();
    Ok(CorrectionReport {
        samples,
        max_s12,
        s12_bound: s12_bound(m, cv.level),
        max_s123,
        max_abs_sum,
        abs_sum_bound: (m >= 7).then(|| total_s_bound(m, cv.level)),
        main_term_floor: floor,
        dominated: max_s123 < floor,
    })
}

/// Every criterion applicable to one form.
#[derive(Clone, Debug, PartialEq)]
pub struct CriteriaReport {
    pub central: Vec<Criterion>,
    pub szego: SzegoReport,
    /// Present for `m ≥ 2`.
    pub large_weight: Option<Criterion>,
    /// Present for `m ≥ 2`.
    pub corrections: Option<CorrectionReport>,
}

pub fn evaluate_criteria(cv: &CriticalValues) -> Result<CriteriaReport> {
    let m = cv.m();
    let corrections = if m >= 2 {
        Some(correction_terms(cv, (64 * m as usize).max(256))?)
    } else {
        None
    };
    Ok(CriteriaReport {
        central: central_inequalities(cv),
        szego: szego_criteria(cv),
        large_weight: (m >= 2).then(|| large_weight_criterion(m, cv.level)),
        corrections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_thresholds() {
        let got: Vec<u64> = [8, 10, 12, 14]
            .iter()
            .map(|&k| level_bound(k, 1, 128).unwrap().least_level)
            .collect();
        assert_eq!(got, vec![142, 64, 45, 42]);
        assert!(level_bound(4, 1, 128).is_none());
    }

    #[test]
    fn large_weight_endpoints() {
        assert!(large_weight_criterion(29, 1).holds);
        assert!(!large_weight_criterion(28, 1).holds);
        assert!(large_weight_criterion(7, 28).holds);
    }

    #[test]
    fn weight4_central_sum() {
        let cv = CriticalValues::from_lambda_f64(4, 8, Sign::Plus, &[0.16, 0.14, 0.16]);
        let c = central_inequalities(&cv);
        assert_eq!(c.len(), 1);
        assert!((c[0].margin - 0.02).abs() < 1e-15 && c[0].holds);
    }

    #[test]
    fn weight6_negative_control() {
        let cv = CriticalValues::from_lambda_f64(6, 5, Sign::Plus, &[5.0, 4.0, 1.0, 100.0, 5.0]);
        let c = central_inequalities(&cv);
        assert_eq!(c.len(), 3);
        assert!(!c[1].holds);
        assert!(c[1].margin < 0.0);
    }

    #[test]
    fn odd_sign_skips_central() {
        let cv = CriticalValues::from_lambda_f64(6, 5, Sign::Minus, &[-5.0, -4.0, 0.0, 4.0, 5.0]);
        assert!(central_inequalities(&cv).is_empty());
    }

    #[test]
    fn weight4_has_no_monotone_rows() {
        let cv = CriticalValues::from_lambda_f64(4, 8, Sign::Plus, &[0.16, 0.14, 0.16]);
        let r = szego_criteria(&cv);
        assert!(r.monotone.is_empty());
        assert!(r.level.is_none());
    }
}
