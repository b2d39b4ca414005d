//! Closed-form values and upper bounds for `Y(p1, p2; G)`.

use crate::catalog::{ExactValueRule, LieGroupDescriptor};
use crate::error::{Error, Result};
use crate::exponents::{Exponent, YoungExponents};

fn ln_beckner_b(p: Exponent) -> f64 {
    if p.is_one() || p.is_infinite() {
        return 0.0;
    }
    let q = p.conjugate();
    let (pv, qv) = (p.value(), q.value());
    pv.ln() / pv - qv.ln() / qv
}

/// Beckner's `B(p) = p^{1/p} / p'^{1/p'}`, equal to 1 at `p ∈ {1, ∞}`.
pub fn beckner_b(p: Exponent) -> f64 {
    ln_beckner_b(p).exp()
}

/// `Y(p1, p2; R^n) = (B(p1) B(p2) / B(p))^{n/2}`.
pub fn beckner_y_rn(ex: &YoungExponents, n: u32) -> f64 {
    if ex.is_boundary() || n == 0 {
        return 1.0;
    }
    let s = ln_beckner_b(ex.p1) + ln_beckner_b(ex.p2) - ln_beckner_b(ex.p);
    (0.5 * n as f64 * s).exp()
}

/// Same as [`beckner_y_rn`] starting from the pair `(p1, p2)`.
pub fn beckner_y_rn_pair(p1: Exponent, p2: Exponent, n: u32) -> Result<f64> {
    Ok(beckner_y_rn(&YoungExponents::new(p1, p2)?, n))
}

/// `Some(1)` on the boundary triples, where the constant is 1 on every group.
pub fn boundary_value(ex: &YoungExponents) -> Option<f64> {
    ex.is_boundary().then_some(1.0)
}

/// `Y(p1, p2; R)^{dim G - r(G)}` for a group in class A.
pub fn corollary_bound(g: &LieGroupDescriptor, ex: &YoungExponents) -> Result<f64> {
    if !g.flags.in_class_a {
        return Err(Error::NotClassA(g.name.clone()));
    }
    let k = g.dim.saturating_sub(g.r);
    if k == 0 {
        return Ok(1.0);
    }
    Ok(beckner_y_rn(ex, 1).powi(k as i32))
}

/// Upper bound for an extension from bounds on the normal subgroup and the quotient.
pub fn product_bound(y_sub: f64, y_quot: f64) -> f64 {
    y_sub * y_quot
}

/// Exact value where one is known: compact groups (1), `R^n` (Beckner) and
/// simply connected solvable or connected nilpotent groups, where
/// `Y(G) = Y(R)^{dim G - r(G)}`.
pub fn nielsen_exact(g: &LieGroupDescriptor, ex: &YoungExponents) -> Option<f64> {
    match g.exact_value_rule {
        ExactValueRule::None => None,
        ExactValueRule::CompactOne => Some(1.0),
        ExactValueRule::NielsenPower | ExactValueRule::BecknerRn => {
            let k = g.dim.saturating_sub(g.r);
            Some(beckner_y_rn(ex, 1).powi(k as i32))
        }
    }
}

/// `d = -ln y`, additive under [`product_bound`].
pub fn neg_log_constant(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::Domain(format!("-ln(y) needs 0 < y <= 1, got {y}")));
    }
    Ok(0.0 - y.ln())
}
