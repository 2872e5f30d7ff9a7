//! The real trigonometric polynomial `u(θ)` obtained from `P_f` on the unit
//! circle, and sign-change counting over a period.

use std::f64::consts::PI;

use rug::Float;

use crate::mp::float;
use crate::periodpoly::PPoly;
use crate::qexpansion::Sign;

/// `u(θ) = P_f(e^{iθ}) + P_f(e^{-iθ})` for `ε = +1`, and
/// `(P_f(e^{iθ}) - P_f(e^{-iθ}))/i` for `ε = -1`.
#[derive(Clone, Debug)]
pub struct TrigPolynomial {
    pub sign: Sign,
    /// `p_0, …, p_m`; `p_0` is unused in the sine form.
    pub coefficients: Vec<Float>,
}

pub fn trig_polynomial(pf: &PPoly, sign: Sign) -> TrigPolynomial {
    TrigPolynomial {
        sign,
        coefficients: pf.coefficients.clone(),
    }
}

impl TrigPolynomial {
    pub fn m(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.coefficients[0].prec()
    }

    /// Coefficients of `u/2`: constant then `cos jθ` (or `sin jθ`) for `j = 1..m`.
    /// The constant is zero in the sine form.
    pub fn half_coefficients(&self) -> Vec<Float> {
        let mut out = self.coefficients.clone();
        if self.sign == Sign::Minus {
            out[0] = Float::new(self.prec());
        }
        out
    }

    pub fn eval(&self, theta: &Float) -> Float {
        let prec = self.prec();
        let mut acc = match self.sign {
            Sign::Plus => self.coefficients[0].clone(),
            Sign::Minus => Float::new(prec),
        };
        for (j, p) in self.coefficients.iter().enumerate().skip(1) {
            let arg = Float::with_val(prec, theta * j as u32);
            let t = match self.sign {
                Sign::Plus => arg.cos(),
                Sign::Minus => arg.sin(),
            };
            acc += t * p;
        }
        acc * 2u32
    }

    /// `2 Σ |p_j|`, a bound on `|u|`.
    pub fn magnitude(&self) -> f64 {
        2.0 * self.coefficients.iter().map(|c| c.to_f64().abs()).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignChangeReport {
    pub count: usize,
    /// Bracketing intervals in `[0, 2π)` after refinement, in increasing order.
    /// An interval straddling `0` is reported with `lo > hi`.
    pub intervals: Vec<(f64, f64)>,
    pub grid_points: usize,
    /// Some grid value was within tolerance of zero without a sign change
    /// next to it, so a tangential zero may have been missed.
    pub indeterminate: bool,
}

impl SignChangeReport {
    /// Interval midpoints in `[0, 2π)`.
    pub fn zeros(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .map(|&(lo, hi)| {
                let hi = if hi < lo { hi + 2.0 * PI } else { hi };
                (0.5 * (lo + hi)).rem_euclid(2.0 * PI)
            })
            .collect()
    }

    pub fn zeros_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.zeros().into_iter().filter(|&t| t >= lo && t < hi).collect()
    }
}

pub const REFINE_WIDTH: f64 = 1e-12;

/// Sign changes of `u` over one period.
///
/// The grid has `max(64m, 256)` points offset by half a step, so exact zeros
/// at `0` and `π` (forced in the sine form) fall strictly inside cells.
pub fn count_sign_changes(u: &TrigPolynomial) -> SignChangeReport {
    let prec = u.prec();
    let m = u.m().max(1);
    let n = (64 * m).max(256);
    let two_pi = Float::with_val(prec, crate::mp::pi(prec) * 2u32);
    let step = Float::with_val(prec, &two_pi / n as u32);
    let angle = |i: usize| Float::with_val(prec, &step * (i as f64 + 0.5));
    let values: Vec<Float> = (0..n).map(|i| u.eval(&angle(i))).collect();
    let zero_tol = u.magnitude() * 2f64.powi(-(prec as i32) / 2);

    let mut intervals = Vec::new();
    let mut near_zero_unbracketed = false;
    let mut changes = vec![false; n];
    for i in 0..n {
        let j = (i + 1) % n;
        if values[i].is_sign_negative() != values[j].is_sign_negative()
            && !(values[i].is_zero() && values[j].is_zero())
        {
            changes[i] = true;
        }
    }
    for i in 0..n {
        let prev = (i + n - 1) % n;
        if values[i].to_f64().abs() <= zero_tol && !changes[i] && !changes[prev] {
            near_zero_unbracketed = true;
        }
        if changes[i] {
            let lo = angle(i);
            let hi = if i + 1 == n {
                Float::with_val(prec, angle(0) + &two_pi)
            } else {
                angle(i + 1)
            };
            let (a, b) = refine(u, lo, hi, &values[i]);
            let wrap = |x: f64| x.rem_euclid(2.0 * PI);
            intervals.push((wrap(a), wrap(b)));
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    SignChangeReport {
        count: intervals.len(),
        intervals,
        grid_points: n,
        indeterminate: near_zero_unbracketed,
    }
}

fn refine(u: &TrigPolynomial, mut lo: Float, mut hi: Float, u_lo: &Float) -> (f64, f64) {
    let lo_negative = u_lo.is_sign_negative();
    let width = float(lo.prec(), REFINE_WIDTH);
    while Float::with_val(lo.prec(), &hi - &lo) > width {
        let mid = Float::with_val(lo.prec(), &lo + &hi) / 2u32;
        let v = u.eval(&mid);
        if v.is_zero() {
            return (mid.to_f64(), mid.to_f64());
        }
        if v.is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo.to_f64(), hi.to_f64())
}

/// `((ℓ-½)π/(m+½), (ℓ+½)π/(m+½))` for `ℓ = 1..m`.
pub fn szego_intervals(m: usize) -> Vec<(f64, f64)> {
    let h = m as f64 + 0.5;
    (1..=m)
        .map(|l| ((l as f64 - 0.5) * PI / h, (l as f64 + 0.5) * PI / h))
        .collect()
}

/// True when each interval contains exactly one of `zeros` and no zero lies
/// outside the union.
pub fn one_zero_per_interval(zeros: &[f64], intervals: &[(f64, f64)]) -> bool {
    let inside = |t: f64, &(a, b): &(f64, f64)| t > a && t < b;
    intervals
        .iter()
        .all(|iv| zeros.iter().filter(|&&t| inside(t, iv)).count() == 1)
        && zeros.iter().all(|&t| intervals.iter().any(|iv| inside(t, iv)))
}
