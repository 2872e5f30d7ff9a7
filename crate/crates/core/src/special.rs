//! Special functions at working precision: the upper incomplete gamma function
//! at positive integer order, the Riemann zeta function on the real axis, and
//! exact binomial coefficients.

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::mp::factorial;

/// Upper incomplete gamma `Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt` for integer `s ≥ 1`.
///
/// Uses the closed form `(s-1)! e^{-x} Σ_{j<s} x^j / j!`. All terms are
/// non-negative; they are summed smallest first and scaled once at the end.
pub fn incomplete_gamma_int(s: u32, x: &Float) -> Float {
    assert!(s >= 1, "incomplete_gamma_int requires s >= 1");
    assert!(!x.is_sign_negative() || x.is_zero(), "incomplete_gamma_int requires x >= 0");
    let prec = x.prec();
    let mut terms = Vec::with_capacity(s as usize);
    let mut term = Float::with_val(prec, 1);
    terms.push(term.clone());
    for j in 1..s {
        term *= x;
        term /= j;
        terms.push(term.clone());
    }
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut sum = Float::with_val(prec, 0);
    for t in &terms {
        sum += t;
    }
    let scale = factorial(prec, s - 1) * Float::with_val(prec, (-x.clone()).exp());
    sum * scale
}

/// Riemann zeta for real `s > 0`, `s ≠ 1`, by Borwein's acceleration of the
/// alternating (eta) series.
pub fn zeta(s: &Float) -> Float {
    let prec = s.prec();
    assert!(*s > 0 && *s != 1, "zeta is implemented for real s > 0, s != 1");
    let work = prec + 64;
    // error ~ 3 (3 + sqrt 8)^{-n}
    let n = ((work as f64) * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as u32 + 4;
    let s_w = Float::with_val(work, s);

    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut acc = Float::with_val(work, 0);
    for i in 0..=n {
        let num = Integer::from(Integer::factorial(n + i - 1)) * Integer::from(Integer::u_pow_u(4, i));
        let den = Integer::from(Integer::factorial(n - i)) * Integer::from(Integer::factorial(2 * i));
        let term = Float::with_val(work, &num) / Float::with_val(work, &den) * n;
        acc += term;
        d.push(acc.clone());
    }
    let dn = d[n as usize].clone();

    let mut sum = Float::with_val(work, 0);
    for k in 0..n {
        let kp1 = Float::with_val(work, k + 1);
        let denom = kp1.pow(&s_w);
        let diff = Float::with_val(work, &d[k as usize] - &dn);
        let term = diff / denom;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let two_pow = Float::with_val(work, 2).pow(Float::with_val(work, 1 - s_w.clone()));
    let factor = Float::with_val(work, 1 - two_pow) * dn;
    let result = -sum / factor;
    Float::with_val(prec, result)
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

pub fn binomial_f(prec: u32, n: u32, k: u32) -> Float {
    Float::with_val(prec, &binomial(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::float;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn incomplete_gamma_at_zero_is_factorial() {
        let zero = Float::new(128);
        assert_eq!(incomplete_gamma_int(1, &zero).to_f64(), 1.0);
        assert_eq!(incomplete_gamma_int(2, &zero).to_f64(), 1.0);
        assert_eq!(incomplete_gamma_int(5, &zero).to_f64(), 24.0);
    }

    #[test]
    fn incomplete_gamma_three_one_is_five_over_e() {
        let g = incomplete_gamma_int(3, &float(128, 1.0));
        let five_over_e = Float::with_val(128, 5) / Float::with_val(128, 1).exp();
        let diff = Float::with_val(128, &g - &five_over_e).abs();
        assert!(diff < 1e-36, "{}", diff);
        assert!(close(&g, 1.8393972058572117, 1e-15));
    }

    #[test]
    fn incomplete_gamma_agrees_with_mpfr() {
        for s in 1..30u32 {
            for &x in &[0.1, 1.0, 3.7, 12.5, 40.0] {
                let xf = float(128, x);
                let ours = incomplete_gamma_int(s, &xf);
                let theirs = Float::with_val(128, Float::with_val(128, s).gamma_inc_ref(&xf));
                let rel = Float::with_val(128, &ours - &theirs).abs() / &theirs;
                assert!(rel < 1e-33, "s={s} x={x} rel={rel}");
            }
        }
    }

    #[test]
    fn zeta_matches_mpfr() {
        for &s in &[1.5, 2.0, 2.5, 3.0, 4.5, 7.5, 20.0, 0.5] {
            let sf = float(128, s);
            let ours = zeta(&sf);
            let theirs = Float::with_val(128, sf.zeta_ref());
            let rel = Float::with_val(128, &ours - &theirs).abs() / theirs.abs();
            assert!(rel < 1e-35, "s={s} rel={rel}");
        }
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta(&float(200, 2.0));
        let pi = crate::mp::pi(200);
        let expected = Float::with_val(200, pi.square_ref()) / 6u32;
        assert!(Float::with_val(200, &z - &expected).abs() < 1e-55);
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(70, 35).to_string(), "112186277816662845432");
    }
}
