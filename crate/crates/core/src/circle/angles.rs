//! Predicted root angles from the phase equation
//! `mθ - (2π/√N) sin θ = target` and their matching against computed roots.

use std::f64::consts::{PI, TAU};

use rug::Float;

use crate::error::{Error, Result};
use crate::lfunction::CriticalValues;
use crate::mp::Complex;
use crate::qexpansion::Sign;

/// Default constant in the angular error bound `C/(2^k √N)`.
pub const ANGLE_CONSTANT: f64 = 1e9;
/// Tighter sanity threshold on matched residuals, in radians.
pub const EMPIRICAL_ANGLE_TOL: f64 = 0.1;

fn phase(m: f64, x: f64, t: f64) -> f64 {
    m * t - x * t.sin()
}

/// Solve `phase(θ) = target` on `[a, b)` where the phase is monotone.
fn solve_monotone(m: f64, x: f64, a: f64, b: f64, target: f64) -> Option<f64> {
    let (fa, fb) = (phase(m, x, a) - target, phase(m, x, b) - target);
    if fa == 0.0 {
        return Some(a);
    }
    if fa.signum() == fb.signum() || fb == 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = phase(m, x, mid) - target;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `θ_ℓ` for `ℓ = 0..2m-1` with targets `π/2 + ℓπ` (`ε = +1`) or `ℓπ`
/// (`ε = -1`), each required to be the unique solution in `[0, 2π)`.
///
/// For `m = 1`, `ε = -1` the zeros are exactly `θ = 0, π`; `m = 1`, `ε = +1`
/// depends on the L-values and is handled by [`weight4_angles`].
pub fn predict_angles(m: u32, level: u64, sign: Sign) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Domain("need m >= 1".into()));
    }
    if m == 1 {
        return match sign {
            Sign::Minus => Ok(vec![0.0, PI]),
            Sign::Plus => Err(Error::Domain(
                "weight-4 angles with ε = +1 depend on Λ(2)/Λ(3)".into(),
            )),
        };
    }
    let mf = m as f64;
    let x = TAU / (level as f64).sqrt();
    // the phase has derivative m - x cos θ; split at its zeros
    let mut breaks = vec![0.0];
    if x > mf {
        let c = (mf / x).acos();
        breaks.push(c);
        breaks.push(TAU - c);
    }
    breaks.push(TAU);
    let offset = match sign {
        Sign::Plus => PI / 2.0,
        Sign::Minus => 0.0,
    };
    (0..2 * m as usize)
        .map(|l| {
            let target = offset + l as f64 * PI;
            let sols: Vec<f64> = breaks
                .windows(2)
                .filter_map(|w| solve_monotone(mf, x, w[0], w[1], target))
                .collect();
            if sols.len() == 1 {
                Ok(sols[0])
            } else {
                Err(Error::AngleAmbiguity {
                    index: l,
                    solutions: sols.len(),
                })
            }
        })
        .collect()
}

/// Exact weight-4 angles: `cos θ = -Λ(2)/Λ(3)` for `ε = +1`, `θ = 0, π` for `ε = -1`.
pub fn weight4_angles(cv: &CriticalValues) -> Result<Vec<f64>> {
    if cv.weight != 4 {
        return Err(Error::Domain(format!("weight {} is not 4", cv.weight)));
    }
    match cv.sign {
        Sign::Minus => Ok(vec![0.0, PI]),
        Sign::Plus => {
            let c = -Float::with_val(cv.prec(), cv.lambda(2) / cv.lambda(3)).to_f64();
            if !(-1.0..=1.0).contains(&c) {
                return Err(Error::Domain(format!("-Λ(2)/Λ(3) = {c} is not a cosine")));
            }
            let t = c.acos();
            Ok(vec![t, TAU - t])
        }
    }
}

/// Angles for any weight: exact for weight 4, phase-equation solutions otherwise.
pub fn angles_for(cv: &CriticalValues) -> Result<Vec<f64>> {
    if cv.weight == 4 {
        weight4_angles(cv)
    } else {
        predict_angles(cv.m(), cv.level, cv.sign)
    }
}

/// `θ = arg(i√N ρ)` in `[0, 2π)`.
pub fn root_angle(root: &Complex, level: u64) -> f64 {
    let prec = root.prec();
    let scaled = root
        .mul(&Complex::i(prec))
        .scale(&Float::with_val(prec, level).sqrt());
    scaled.arg().to_f64().rem_euclid(TAU)
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleMatch {
    /// `(root index, angle index, residual)` for every pair.
    pub pairs: Vec<(usize, usize, f64)>,
    pub max_residual: f64,
    /// `C/(2^k √N)`.
    pub bound: f64,
    pub empirical_tol: f64,
    pub within_bound: bool,
    pub within_empirical: bool,
}

/// Greedy nearest matching of `arg(i√N ρ)` to the predicted angles.
pub fn match_roots_to_angles(
    roots: &[Complex],
    level: u64,
    weight: u32,
    angles: &[f64],
    constant: f64,
) -> Result<AngleMatch> {
    if roots.len() != angles.len() {
        return Err(Error::Matching(format!(
            "{} roots against {} predicted angles",
            roots.len(),
            angles.len()
        )));
    }
    let root_angles: Vec<f64> = roots.iter().map(|r| root_angle(r, level)).collect();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &a) in root_angles.iter().enumerate() {
        for (j, &t) in angles.iter().enumerate() {
            candidates.push((circular_distance(a, t), i, j));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut root_used = vec![false; roots.len()];
    let mut angle_used = vec![false; angles.len()];
    let mut pairs = Vec::with_capacity(roots.len());
    for (d, i, j) in candidates {
        if !root_used[i] && !angle_used[j] {
            root_used[i] = true;
            angle_used[j] = true;
            pairs.push((i, j, d));
        }
    }
    if pairs.len() != roots.len() {
        return Err(Error::Matching("matching is not a bijection".into()));
    }
    pairs.sort_by_key(|p| p.1);
    let max_residual = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    let bound = constant / (2f64.powi(weight as i32) * (level as f64).sqrt());
    Ok(AngleMatch {
        pairs,
        max_residual,
        bound,
        empirical_tol: EMPIRICAL_ANGLE_TOL,
        within_bound: max_residual <= bound,
        within_empirical: max_residual <= EMPIRICAL_ANGLE_TOL,
    })
}
