//! Completed L-function values at the critical integers.
//!
//! `Λ(f,s) = N^{s/2} ∫_0^∞ f(iy) y^{s-1} dy` is split at `y = t/√N` and the
//! lower piece is folded onto the upper one with the Fricke involution
//! `f(i/(Ny)) = ε N^{k/2} y^k f(iy)`. Each piece integrates termwise to an
//! incomplete gamma value, giving
//!
//! ```text
//! Λ(f,s) = Σ_n a(n) [ c_n^s Γ(s, x_n t) + ε c_n^{k-s} Γ(k-s, x_n / t) ],
//! c_n = √N / (2πn),  x_n = 2πn / √N.
//! ```
//!
//! The primary evaluation uses `t = 1`. Because that sum satisfies the
//! functional equation term by term, consistency is measured against a second
//! evaluation at `t = 9/8`, which only agrees when `ε` and the coefficients
//! are right.

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{factorial, float, pi, powi, PrecisionBudget};
use crate::qexpansion::{QExpansion, Sign};
use crate::special::{incomplete_gamma_int, zeta};

/// Split parameter of the independent consistency evaluation.
const CHECK_SPLIT: f64 = 9.0 / 8.0;

/// `Λ(f,1..k-1)` and `L(f,1..k-1)` for one newform.
#[derive(Clone, Debug)]
pub struct CriticalValues {
    pub weight: u32,
    pub level: u64,
    pub sign: Sign,
    /// `lambda[s-1] = Λ(f,s)`.
    pub lambda: Vec<Float>,
    /// `lvals[s-1] = L(f,s)`.
    pub lvals: Vec<Float>,
    /// Number of coefficients used.
    pub truncation: usize,
    /// Absolute error bound on every `Λ(f,s)`.
    pub error_bound: f64,
    /// `max_s |Λ(f,s) - ε Λ(f,k-s)|` between the two split evaluations.
    pub fe_residual: f64,
    pub budget: PrecisionBudget,
}

impl CriticalValues {
    /// Wrap given `Λ` values (for example synthetic test vectors), deriving
    /// the L-values by the defining conversion.
    pub fn from_lambda(
        weight: u32,
        level: u64,
        sign: Sign,
        lambda: Vec<Float>,
        error_bound: f64,
        budget: PrecisionBudget,
    ) -> Self {
        assert_eq!(lambda.len() as u32, weight - 1, "need Λ(f,1..k-1)");
        let lvals = (1..weight)
            .map(|s| lambda_to_l(&lambda[s as usize - 1], s, level, budget.bits))
            .collect();
        let fe_residual = fe_residual_of(&lambda, sign);
        Self {
            weight,
            level,
            sign,
            lambda,
            lvals,
            truncation: 0,
            error_bound,
            fe_residual,
            budget,
        }
    }

    pub fn from_lambda_f64(weight: u32, level: u64, sign: Sign, lambda: &[f64]) -> Self {
        let budget = PrecisionBudget::default();
        let lambda = lambda.iter().map(|&v| float(budget.bits, v)).collect();
        Self::from_lambda(weight, level, sign, lambda, 0.0, budget)
    }

    pub fn prec(&self) -> u32 {
        self.budget.bits
    }

    pub fn m(&self) -> u32 {
        (self.weight - 2) / 2
    }

    /// `Λ(f,s)` for `1 ≤ s ≤ k-1`.
    pub fn lambda(&self, s: u32) -> &Float {
        &self.lambda[s as usize - 1]
    }

    /// `L(f,s)` for `1 ≤ s ≤ k-1`.
    pub fn l_value(&self, s: u32) -> &Float {
        &self.lvals[s as usize - 1]
    }

    /// Absolute error bound on `L(f,s)` implied by [`Self::error_bound`].
    pub fn l_error_bound(&self, s: u32) -> f64 {
        let scale = lambda_to_l(&float(64, 1.0), s, self.level, 64).to_f64();
        self.error_bound * scale
    }

    /// Largest `|Λ(f,s)|`.
    pub fn scale(&self) -> f64 {
        self.lambda
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// `(√N/2π)^s`.
fn sqrt_n_over_two_pi(level: u64, prec: u32) -> Float {
    let sqrt_n = Float::with_val(prec, level).sqrt();
    sqrt_n / (pi(prec) * 2u32)
}

/// `L(f,s) = Λ(f,s) (2π/√N)^s / Γ(s)`.
pub fn lambda_to_l(lambda: &Float, s: u32, level: u64, prec: u32) -> Float {
    let c = sqrt_n_over_two_pi(level, prec);
    let denom = powi(&c, s as i32) * factorial(prec, s - 1);
    Float::with_val(prec, lambda / denom)
}

/// `Λ(f,s) = (√N/2π)^s Γ(s) L(f,s)`.
pub fn l_to_lambda(l: &Float, s: u32, level: u64, prec: u32) -> Float {
    let c = sqrt_n_over_two_pi(level, prec);
    Float::with_val(prec, l * powi(&c, s as i32)) * factorial(prec, s - 1)
}

fn fe_residual_of(lambda: &[Float], sign: Sign) -> f64 {
    let k = lambda.len() + 1;
    (1..k)
        .map(|s| {
            let a = &lambda[s - 1];
            let b = &lambda[k - s - 1];
            let d = if sign == Sign::Plus {
                Float::with_val(a.prec(), a - b)
            } else {
                Float::with_val(a.prec(), a + b)
            };
            d.to_f64().abs()
        })
        .fold(0.0, f64::max)
}

/// `ln Γ̄(s,x)` with `Γ(s,x) ≤ e^{-x} (x+s-1)^{s-1}` for integer `s ≥ 1`.
fn ln_gamma_envelope(s: u32, x: f64) -> f64 {
    -x + (s as f64 - 1.0) * (x + s as f64 - 1.0).ln()
}

/// Bound on the truncation error `Σ_{n>M} |a(n)| |kernel_n|` maximized over
/// the critical integers and over both split points.
///
/// Uses `|a(n)| ≤ d(n) n^{(k-1)/2} ≤ n^{(k+1)/2}`.
pub fn tail_bound(k: u32, level: u64, m: usize) -> f64 {
    let sqrt_n = (level as f64).sqrt();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    for &t in &[1.0, CHECK_SPLIT] {
        for s in 1..k {
            let mut sum = 0.0f64;
            let mut n = m + 1;
            loop {
                let nf = n as f64;
                let x = two_pi * nf / sqrt_n;
                let ln_c = -(x.ln());
                let ln_coeff = 0.5 * (k as f64 + 1.0) * nf.ln();
                let up = ln_coeff + s as f64 * ln_c + ln_gamma_envelope(s, x * t);
                let down = ln_coeff + (k - s) as f64 * ln_c + ln_gamma_envelope(k - s, x / t);
                let term = up.exp() + down.exp();
                sum += term;
                // the kernel decays like e^{-x/t}; stop once far past the peak
                if n > m + 8 && term <= sum * 1e-18 {
                    break;
                }
                if n > m + 1_000_000 {
                    break;
                }
                n += 1;
            }
            worst = worst.max(sum);
        }
    }
    worst
}

/// Lower bound on `Λ(f,k-1)`, from `L(f,k-1) ≥ (ζ(2σ)/ζ(σ))²` with
/// `σ = (k-1)/2` in the normalized Euler product.
pub fn lambda_lower_bound(k: u32, level: u64) -> f64 {
    let prec = 64;
    let sigma = float(prec, (k as f64 - 1.0) / 2.0);
    let two_sigma = Float::with_val(prec, &sigma * 2u32);
    let ratio = zeta(&two_sigma) / zeta(&sigma);
    let l_low = Float::with_val(prec, ratio.square_ref());
    l_to_lambda(&l_low, k - 1, level, prec).to_f64()
}

/// Absolute tail budget: a tenth of `ε_rel` times the lower bound on `|Λ|`.
pub fn truncation_target(k: u32, level: u64, budget: &PrecisionBudget) -> f64 {
    0.1 * budget.target_rel_err * lambda_lower_bound(k, level)
}

/// Smallest truncation whose tail bound meets [`truncation_target`].
pub fn choose_truncation(k: u32, level: u64, budget: &PrecisionBudget) -> usize {
    let target = truncation_target(k, level, budget);
    // exponential search then bisection; the bound is decreasing in M
    let mut hi = 1usize;
    while tail_bound(k, level, hi) >= target {
        hi *= 2;
        if hi > 1 << 24 {
            return hi;
        }
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return hi;
    }
    // invariant: tail(lo) ≥ target > tail(hi)
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail_bound(k, level, mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Per-coefficient kernels for all critical integers at one split point.
struct Kernels {
    /// `up[s-1] = Σ a(n) c_n^s Γ(s, x_n t)`
    up: Vec<Float>,
    /// `down[s-1] = Σ a(n) c_n^s Γ(s, x_n / t)`
    down: Vec<Float>,
    abs_sum: f64,
}

fn kernels(q: &QExpansion, k: u32, level: u64, m: usize, t: f64, prec: u32) -> Kernels {
    let sqrt_n = Float::with_val(prec, level).sqrt();
    let two_pi = pi(prec) * 2u32;
    let t_f = float(prec, t);
    let per_n: Vec<(Vec<Float>, Vec<Float>, f64)> = (1..=m)
        .into_par_iter()
        .map(|n| {
            let a = Float::with_val(prec, q.a(n));
            let x = Float::with_val(prec, &two_pi * n as u32) / &sqrt_n;
            let c = Float::with_val(prec, x.recip_ref());
            let x_up = Float::with_val(prec, &x * &t_f);
            let x_down = Float::with_val(prec, &x / &t_f);
            let mut up = Vec::with_capacity(k as usize - 1);
            let mut down = Vec::with_capacity(k as usize - 1);
            let mut abs = 0.0;
            let mut c_pow = Float::with_val(prec, 1);
            for s in 1..k {
                c_pow *= &c;
                let u = Float::with_val(prec, &a * &c_pow) * incomplete_gamma_int(s, &x_up);
                let d = Float::with_val(prec, &a * &c_pow) * incomplete_gamma_int(s, &x_down);
                abs += u.to_f64().abs() + d.to_f64().abs();
                up.push(u);
                down.push(d);
            }
            (up, down, abs)
        })
        .collect();
    let mut up = vec![Float::new(prec); k as usize - 1];
    let mut down = vec![Float::new(prec); k as usize - 1];
    let mut abs_sum = 0.0;
    for (u, d, a) in per_n {
        for i in 0..(k as usize - 1) {
            up[i] += &u[i];
            down[i] += &d[i];
        }
        abs_sum += a;
    }
    Kernels { up, down, abs_sum }
}

fn combine(kern: &Kernels, k: u32, sign: Sign) -> Vec<Float> {
    (1..k)
        .map(|s| {
            let up = &kern.up[s as usize - 1];
            let down = &kern.down[(k - s) as usize - 1];
            match sign {
                Sign::Plus => Float::with_val(up.prec(), up + down),
                Sign::Minus => Float::with_val(up.prec(), up - down),
            }
        })
        .collect()
}

/// Critical values using the truncation chosen by [`choose_truncation`].
pub fn lambda_values(
    q: &QExpansion,
    weight: u32,
    level: u64,
    sign: Sign,
    budget: &PrecisionBudget,
) -> Result<CriticalValues> {
    budget.validate()?;
    let m = choose_truncation(weight, level, budget);
    lambda_values_with_truncation(q, weight, level, sign, budget, m)
}

/// Critical values using exactly `m` coefficients.
pub fn lambda_values_with_truncation(
    q: &QExpansion,
    weight: u32,
    level: u64,
    sign: Sign,
    budget: &PrecisionBudget,
    m: usize,
) -> Result<CriticalValues> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::InvalidSpec(format!("weight {weight} is not even and ≥ 4")));
    }
    if q.len() < m {
        return Err(Error::TruncationTooShort {
            required: m,
            available: q.len(),
        });
    }
    let prec = budget.bits;
    let (primary, check) = rayon::join(
        || kernels(q, weight, level, m, 1.0, prec),
        || kernels(q, weight, level, m, CHECK_SPLIT, prec),
    );
    let lambda = combine(&primary, weight, sign);
    let lambda_check = combine(&check, weight, sign);

    let rounding = budget.rounding_unit() * primary.abs_sum.max(check.abs_sum);
    let error_bound = 2.0 * (tail_bound(weight, level, m) + rounding);

    let eps = sign.value();
    let fe_residual = (1..weight)
        .map(|s| {
            let a = &lambda[s as usize - 1];
            let b = &lambda_check[(weight - s) as usize - 1];
            Float::with_val(prec, a - Float::with_val(prec, b * eps))
                .to_f64()
                .abs()
        })
        .fold(0.0, f64::max);
    if fe_residual > error_bound {
        return Err(Error::Inconsistency(format!(
            "functional-equation residual {fe_residual:e} exceeds error bound {error_bound:e} \
             (wrong sign or bad coefficients)"
        )));
    }

    let lvals = (1..weight)
        .map(|s| lambda_to_l(&lambda[s as usize - 1], s, level, prec))
        .collect();
    Ok(CriticalValues {
        weight,
        level,
        sign,
        lambda,
        lvals,
        truncation: m,
        error_bound,
        fe_residual,
        budget: *budget,
    })
}

/// Evidence collected while determining `ε`.
#[derive(Clone, Debug)]
pub struct SignDetection {
    pub sign: Sign,
    /// Split-point discrepancy `max_s |Λ_{t=1}(s) - Λ_{t=9/8}(s)|` assuming `ε = +1`.
    pub residual_plus: f64,
    /// Same, assuming `ε = -1`.
    pub residual_minus: f64,
    /// `g(1/(N y₀)) / (N^{k/2} y₀^k g(y₀))` with `g(y) = Σ a(n) e^{-2πny}`.
    pub involution_ratio: f64,
}

/// Determine `ε` numerically.
///
/// The split-point test evaluates `Λ` with both candidate signs at two split
/// points; only the true sign makes them agree. The Fricke involution of
/// `g(y) = f(iy)` at `y₀ = 2/√N` gives an independent estimate that must round
/// to the same sign.
pub fn detect_sign(
    q: &QExpansion,
    weight: u32,
    level: u64,
    budget: &PrecisionBudget,
) -> Result<SignDetection> {
    budget.validate()?;
    let prec = budget.bits;
    let m = choose_truncation(weight, level, budget);
    if q.len() < m {
        return Err(Error::TruncationTooShort {
            required: m,
            available: q.len(),
        });
    }
    let (primary, check) = rayon::join(
        || kernels(q, weight, level, m, 1.0, prec),
        || kernels(q, weight, level, m, CHECK_SPLIT, prec),
    );
    let discrepancy = |sign: Sign| {
        let a = combine(&primary, weight, sign);
        let b = combine(&check, weight, sign);
        a.iter()
            .zip(&b)
            .map(|(x, y)| Float::with_val(prec, x - y).to_f64().abs())
            .fold(0.0, f64::max)
    };
    let residual_plus = discrepancy(Sign::Plus);
    let residual_minus = discrepancy(Sign::Minus);
    let tolerance = 2.0
        * (tail_bound(weight, level, m)
            + budget.rounding_unit() * primary.abs_sum.max(check.abs_sum));

    let (sign, good, bad) = if residual_plus <= residual_minus {
        (Sign::Plus, residual_plus, residual_minus)
    } else {
        (Sign::Minus, residual_minus, residual_plus)
    };
    if good > tolerance || bad < 1e3 * good.max(tolerance * 1e-3) || bad <= tolerance {
        return Err(Error::AmbiguousSign {
            plus: residual_plus,
            minus: residual_minus,
        });
    }

    let involution_ratio = involution_ratio(q, weight, level, budget)?;
    if (involution_ratio - sign.value() as f64).abs() > 1e-6 {
        return Err(Error::Inconsistency(format!(
            "split-point test gives ε = {sign} but the involution ratio is {involution_ratio}"
        )));
    }
    Ok(SignDetection {
        sign,
        residual_plus,
        residual_minus,
        involution_ratio,
    })
}

/// `g(y) = Σ_{n≤M} a(n) e^{-2πny}`.
fn theta_sum(q: &QExpansion, y: &Float, m: usize) -> Float {
    let prec = y.prec();
    let r = Float::with_val(prec, -(pi(prec) * 2u32) * y).exp();
    let mut rn = Float::with_val(prec, 1);
    let mut acc = Float::new(prec);
    for n in 1..=m {
        rn *= &r;
        acc += Float::with_val(prec, q.a(n) * &rn);
    }
    acc
}

/// Coefficients needed by the involution cross-check of [`detect_sign`].
pub fn involution_terms(k: u32, level: u64, budget: &PrecisionBudget) -> usize {
    // terms decay like n^{(k+1)/2} e^{-πn/√N} at y1
    let rate = std::f64::consts::PI / (level as f64).sqrt();
    let mut needed = 1usize;
    let mut tail = f64::INFINITY;
    while tail > 1e-12 * budget.target_rel_err.max(1e-30) {
        needed += 1;
        let nf = needed as f64;
        // geometric tail past `needed` once ratio < 1
        let term = (0.5 * (k as f64 + 1.0) * nf.ln() - rate * nf).exp();
        let ratio = ((nf + 1.0) / nf).powf(0.5 * (k as f64 + 1.0)) * (-rate).exp();
        tail = if ratio < 1.0 { term / (1.0 - ratio) } else { f64::INFINITY };
        if needed > 1 << 22 {
            break;
        }
    }
    needed
}

/// Coefficients needed for sign detection and critical values together.
pub fn required_terms(k: u32, level: u64, budget: &PrecisionBudget) -> usize {
    choose_truncation(k, level, budget).max(involution_terms(k, level, budget))
}

fn involution_ratio(q: &QExpansion, k: u32, level: u64, budget: &PrecisionBudget) -> Result<f64> {
    let prec = budget.bits;
    let sqrt_n = Float::with_val(prec, level).sqrt();
    let y0 = Float::with_val(prec, 2u32 / &sqrt_n);
    let y1 = Float::with_val(prec, Float::with_val(prec, &sqrt_n * 2u32).recip());
    let needed = involution_terms(k, level, budget);
    if q.len() < needed {
        return Err(Error::TruncationTooShort {
            required: needed,
            available: q.len(),
        });
    }
    let g0 = theta_sum(q, &y0, needed);
    let g1 = theta_sum(q, &y1, needed);
    let scale = Float::with_val(prec, &sqrt_n * &y0);
    // N^{k/2} y0^k = (√N y0)^k
    let denom = powi(&scale, k as i32) * g0;
    Ok(Float::with_val(prec, g1 / denom).to_f64())
}

/// One inequality in a chain, `lower ≤ upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLink {
    pub description: String,
    pub lower: f64,
    pub upper: f64,
    /// `upper - lower`.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub links: Vec<ChainLink>,
    pub tolerance: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

fn link(description: String, lower: &Float, upper: &Float, tolerance: f64) -> ChainLink {
    let margin = Float::with_val(lower.prec(), upper - lower).to_f64();
    ChainLink {
        description,
        lower: lower.to_f64(),
        upper: upper.to_f64(),
        margin,
        holds: margin >= -tolerance,
    }
}

/// Check `0 ≤ Λ(k/2) ≤ Λ(k/2+1) ≤ … ≤ Λ(k-1)`; for `ε = -1` also
/// `Λ(k/2) = 0` and `Λ(k/2+1) ≤ Λ(k/2+2)/2 ≤ Λ(k/2+3)/3 ≤ …`.
pub fn check_monotonicity(cv: &CriticalValues) -> MonotonicityReport {
    let tol = cv.error_bound;
    let prec = cv.prec();
    let half = cv.weight / 2;
    let zero = Float::new(prec);
    let mut links = vec![link(format!("0 <= Λ({half})"), &zero, cv.lambda(half), tol)];
    for s in half..(cv.weight - 1) {
        links.push(link(
            format!("Λ({s}) <= Λ({})", s + 1),
            cv.lambda(s),
            cv.lambda(s + 1),
            tol,
        ));
    }
    if cv.sign == Sign::Minus {
        let central = cv.lambda(half).to_f64();
        links.push(ChainLink {
            description: format!("Λ({half}) = 0"),
            lower: central,
            upper: 0.0,
            margin: -central.abs(),
            holds: central.abs() <= tol,
        });
        for j in 1..cv.m() {
            let lower = Float::with_val(prec, cv.lambda(half + j) / j);
            let upper = Float::with_val(prec, cv.lambda(half + j + 1) / (j + 1));
            links.push(link(
                format!("Λ({})/{j} <= Λ({})/{}", half + j, half + j + 1, j + 1),
                &lower,
                &upper,
                tol,
            ));
        }
    }
    MonotonicityReport {
        links,
        tolerance: tol,
    }
}

/// `L((k+1)/2 + a) / L((k+1)/2 + b)` against `ζ(1+a)² / ζ(1+b)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub s_a: u32,
    pub s_b: u32,
    pub ratio: f64,
    pub bound: f64,
    /// `bound - ratio`.
    pub margin: f64,
    pub holds: bool,
}

fn critical_argument(k: u32, shift: f64) -> Result<u32> {
    let s = (k as f64 + 1.0) / 2.0 + shift;
    let rounded = s.round();
    if (s - rounded).abs() > 1e-9 || rounded < 1.0 || rounded > (k - 1) as f64 {
        return Err(Error::Range(format!(
            "(k+1)/2 + {shift} = {s} is not a computed critical integer in 1..={}",
            k - 1
        )));
    }
    Ok(rounded as u32)
}

/// Compare an L-value ratio in the region of absolute convergence with the
/// zeta-ratio bound. Requires `0 < a ≤ b` (equality gives ratio 1 ≤ 1).
pub fn check_ratio_bound(cv: &CriticalValues, a: f64, b: f64) -> Result<RatioReport> {
    if !(a > 0.0 && a <= b) {
        return Err(Error::Range(format!("need 0 < a <= b, got a = {a}, b = {b}")));
    }
    let s_a = critical_argument(cv.weight, a)?;
    let s_b = critical_argument(cv.weight, b)?;
    let prec = cv.prec();
    let ratio = Float::with_val(prec, cv.l_value(s_a) / cv.l_value(s_b));
    let za = zeta(&float(prec, 1.0 + a));
    let zb = zeta(&float(prec, 1.0 + b));
    let bound = Float::with_val(prec, za.square_ref()) / Float::with_val(prec, zb.square_ref());
    let ratio_f = ratio.to_f64();
    let bound_f = bound.to_f64();
    let rel_err = cv.l_error_bound(s_a) / cv.l_value(s_a).to_f64().abs()
        + cv.l_error_bound(s_b) / cv.l_value(s_b).to_f64().abs();
    let tol = ratio_f.abs() * rel_err + 1e-30;
    let margin = Float::with_val(prec, &bound - &ratio).to_f64();
    Ok(RatioReport {
        s_a,
        s_b,
        ratio: ratio_f,
        bound: bound_f,
        margin,
        holds: margin >= -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpansion::{expand_eta_quotient, EtaQuotient};

    fn weight4_level8(m: usize) -> QExpansion {
        expand_eta_quotient(&"2^4 4^4".parse::<EtaQuotient>().unwrap(), m).unwrap()
    }

    #[test]
    fn truncation_for_level_one_weight_twelve() {
        let m = choose_truncation(12, 1, &PrecisionBudget::default());
        assert!((5..=90).contains(&m), "{m}");
        // loose budgets may use a single term only if its tail passes
        let loose = PrecisionBudget::new(0.5, 128, 16).unwrap();
        let m1 = choose_truncation(12, 1, &loose);
        let target = truncation_target(12, 1, &loose);
        assert!(tail_bound(12, 1, m1) < target);
        if m1 > 1 {
            assert!(tail_bound(12, 1, m1 - 1) >= target);
        }
    }

    #[test]
    fn truncation_weight_four_level_eight_is_tight_enough() {
        let m = choose_truncation(4, 8, &PrecisionBudget::default());
        let mf = m as f64;
        let envelope = (-2.0 * std::f64::consts::PI * mf / 8f64.sqrt()).exp() * mf.powf(2.5);
        assert!(envelope < 1e-17, "M = {m}, envelope {envelope:e}");
        let target = truncation_target(4, 8, &PrecisionBudget::default());
        assert!(tail_bound(4, 8, m - 1) >= target);
    }

    #[test]
    fn weight_four_l_values() {
        let q = weight4_level8(200);
        let cv = lambda_values(&q, 4, 8, Sign::Plus, &PrecisionBudget::default()).unwrap();
        let expected = [0.3545006, 0.6900311, 0.8746953];
        for (s, e) in (1..=3).zip(expected) {
            assert!((cv.l_value(s).to_f64() - e).abs() < 5e-7, "L({s})");
        }
        assert!(cv.fe_residual <= cv.error_bound);
    }

    #[test]
    fn conversion_is_exact_at_working_precision() {
        let q = weight4_level8(200);
        let cv = lambda_values(&q, 4, 8, Sign::Plus, &PrecisionBudget::default()).unwrap();
        for s in 1..4 {
            let back = l_to_lambda(cv.l_value(s), s, 8, cv.prec());
            let rel = Float::with_val(cv.prec(), &back - cv.lambda(s)).abs() / cv.lambda(s);
            assert!(rel < 1e-35);
        }
    }

    #[test]
    fn wrong_sign_is_inconsistent() {
        let q = weight4_level8(200);
        let err = lambda_values(&q, 4, 8, Sign::Minus, &PrecisionBudget::default()).unwrap_err();
        assert!(matches!(err, Error::Inconsistency(_)), "{err}");
    }

    #[test]
    fn short_expansion_names_required_truncation() {
        let q = weight4_level8(5);
        match lambda_values(&q, 4, 8, Sign::Plus, &PrecisionBudget::default()) {
            Err(Error::TruncationTooShort { required, available }) => {
                assert_eq!(available, 5);
                assert!(required > 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_plus_sign() {
        let q = weight4_level8(400);
        let d = detect_sign(&q, 4, 8, &PrecisionBudget::default()).unwrap();
        assert_eq!(d.sign, Sign::Plus);
        assert!(d.residual_minus > 1e3 * d.residual_plus);
        let delta = expand_eta_quotient(&"1^24".parse::<EtaQuotient>().unwrap(), 200).unwrap();
        assert_eq!(
            detect_sign(&delta, 12, 1, &PrecisionBudget::default()).unwrap().sign,
            Sign::Plus
        );
    }

    #[test]
    fn monotonicity_on_weight_four() {
        let q = weight4_level8(200);
        let cv = lambda_values(&q, 4, 8, Sign::Plus, &PrecisionBudget::default()).unwrap();
        let report = check_monotonicity(&cv);
        assert!(report.passed());
        assert!(report.links[1].margin > 0.0);
    }

    #[test]
    fn monotonicity_of_zero_vector() {
        let cv = CriticalValues::from_lambda_f64(6, 5, Sign::Plus, &[0.0; 5]);
        let report = check_monotonicity(&cv);
        assert!(report.passed());
        assert!(report.links.iter().all(|l| l.margin == 0.0));
    }

    #[test]
    fn odd_sign_chain_flags_violation() {
        // Λ(4)=0, Λ(5)=1, Λ(6)=1.5 violates Λ(5) ≤ Λ(6)/2
        let cv = CriticalValues::from_lambda_f64(8, 3, Sign::Minus, &[-3.0, -1.5, -1.0, 0.0, 1.0, 1.5, 3.0]);
        let report = check_monotonicity(&cv);
        assert!(!report.passed());
        let bad: Vec<_> = report.links.iter().filter(|l| !l.holds).collect();
        assert_eq!(bad.len(), 1);
        assert!(bad[0].description.contains("/1"));
    }

    #[test]
    fn ratio_bound_equality_and_range() {
        let cv = CriticalValues::from_lambda_f64(10, 12, Sign::Plus, &[1.0; 9]);
        let r = check_ratio_bound(&cv, 2.5, 2.5).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!(r.holds && r.margin.abs() < 1e-30);
        assert!(matches!(check_ratio_bound(&cv, 0.3, 1.0), Err(Error::Range(_))));
        assert!(matches!(check_ratio_bound(&cv, 0.5, 4.5), Err(Error::Range(_))));
    }

    #[test]
    fn ratio_bound_negative_control() {
        // L(8)/L(9) = 2 exceeds ζ(3.5)²/ζ(4.5)² ≈ 1.11
        let mut lambda = vec![1.0; 9];
        let level = 12;
        let prec = 128;
        let l8 = l_to_lambda(&float(prec, 2.0), 8, level, prec).to_f64();
        let l9 = l_to_lambda(&float(prec, 1.0), 9, level, prec).to_f64();
        lambda[7] = l8;
        lambda[8] = l9;
        let cv = CriticalValues::from_lambda_f64(10, level, Sign::Plus, &lambda);
        let r = check_ratio_bound(&cv, 2.5, 3.5).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-12);
        assert!(!r.holds);
    }
}
