//! Young ratio of centered Gaussians on `R`, in closed form.
//!
//! With `γ_s(x) = exp(-x²/(2s²))`: `‖γ_s‖_q = (s √(2π/q))^{1/q}` and
//! `γ_{s1} * γ_{s2} = √(2π) s1 s2 / S · γ_S`, `S² = s1² + s2²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::YoungExponents;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianFit {
    pub ratio: f64,
    pub s1: f64,
    pub s2: f64,
}

fn ln_norm(s: f64, q: f64) -> f64 {
    (s.ln() + 0.5 * (LN_2PI - q.ln())) / q
}

/// `ln` of the Young ratio at widths `(s1, s2)`.
fn ln_ratio(ex: &YoungExponents, s1: f64, s2: f64) -> f64 {
    let (p1, p2, p) = (ex.p1.value(), ex.p2.value(), ex.p.value());
    let big = s1.hypot(s2);
    let ln_peak = 0.5 * LN_2PI + s1.ln() + s2.ln() - big.ln();
    ln_peak + ln_norm(big, p) - ln_norm(s1, p1) - ln_norm(s2, p2)
}

/// Young ratio of the pair `(γ_{s1}, γ_{s2})`.
pub fn gaussian_ratio(ex: &YoungExponents, s1: f64, s2: f64) -> Result<f64> {
    if !ex.is_interior() {
        return Err(Error::Domain(format!("Gaussian ratio needs an interior triple, got {ex}")));
    }
    if !(s1 > 0.0 && s2 > 0.0) {
        return Err(Error::Domain(format!("widths must be positive, got ({s1}, {s2})")));
    }
    Ok(ln_ratio(ex, s1, s2).exp())
}

/// Maximizes the Gaussian ratio over `ln(s2/s1) ∈ [lo, hi]` with `s1 = 1`
/// by golden-section search. Dilations do not change the ratio, so this is
/// the full two-width problem.
pub fn gaussian_ansatz(ex: &YoungExponents, log_width_ratio: (f64, f64)) -> Result<GaussianFit> {
    if !ex.is_interior() {
        return Err(Error::Domain(format!("Gaussian ansatz needs an interior triple, got {ex}")));
    }
    let (mut a, mut b) = log_width_ratio;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("bad search interval ({a}, {b})")));
    }
    let f = |u: f64| ln_ratio(ex, 1.0, u.exp());
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let u = 0.5 * (a + b);
    Ok(GaussianFit { ratio: f(u).exp(), s1: 1.0, s2: u.exp() })
}

/// Default search interval for [`gaussian_ansatz`].
pub const DEFAULT_LOG_WIDTH_RANGE: (f64, f64) = (-8.0, 8.0);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::beckner_y_rn;

    #[test]
    fn matches_beckner() {
        for (a, b) in [("4/3", "4/3"), ("3/2", "3/2"), ("5/4", "10/7"), ("6/5", "2")] {
            let ex = YoungExponents::parse(a, b).unwrap();
            let fit = gaussian_ansatz(&ex, DEFAULT_LOG_WIDTH_RANGE).unwrap();
            assert!((fit.ratio - beckner_y_rn(&ex, 1)).abs() < 1e-12, "{a},{b}");
        }
        let ex = YoungExponents::parse("4/3", "4/3").unwrap();
        let fit = gaussian_ansatz(&ex, DEFAULT_LOG_WIDTH_RANGE).unwrap();
        assert!((fit.s2 / fit.s1 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn dilation_invariance() {
        let ex = YoungExponents::parse("5/4", "10/7").unwrap();
        for c in [0.01, 0.5, 3.0, 250.0] {
            let a = gaussian_ratio(&ex, 0.7, 1.9).unwrap();
            let b = gaussian_ratio(&ex, 0.7 * c, 1.9 * c).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_rejected() {
        let ex = YoungExponents::parse("2", "2").unwrap();
        assert!(gaussian_ansatz(&ex, DEFAULT_LOG_WIDTH_RANGE).is_err());
    }
}
