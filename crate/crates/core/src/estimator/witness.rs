//! Pairs with ratio 1 when `1/p1 + 1/p2 = 1`.
//!
//! From a bump `φ ≥ 0` with `∫φ = 1`, take `φ1 = φ^{1/p1}` and
//! `φ2(g) = (φ(g^{-1}) / Δ(g))^{1/p2}`. Both have unit norm and
//! `φ1 * (φ2 Δ^{1/p1'})(e) = ∫φ = 1`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{pow_ratio, ratio_f64, YoungExponents};
use crate::groups::{AffinePoint, GroupFunction, GroupModel, Structure};

#[derive(Clone, Debug)]
pub struct Witness {
    pub phi1: GroupFunction,
    pub phi2: GroupFunction,
    /// `ψ(e) / (‖φ1‖_{p1} ‖φ2‖_{p2})`.
    pub ratio: f64,
    pub value_at_identity: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WitnessSummary {
    pub ratio: f64,
    pub value_at_identity: f64,
}

impl Witness {
    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary { ratio: self.ratio, value_at_identity: self.value_at_identity }
    }
}

/// Width of the Gaussian bump used on continuum models.
const BUMP_WIDTH: f64 = 0.3;

pub fn boundary_witness(model: &Arc<GroupModel>, ex: &YoungExponents) -> Result<Witness> {
    if !ex.p.is_infinite() {
        return Err(Error::Domain(format!("the witness needs 1/p1 + 1/p2 = 1, got {ex}")));
    }
    let r1 = ex.p1.reciprocal();
    let r2 = ex.p2.reciprocal();
    let w = model.haar();
    let n = model.len();
    match model.structure() {
        Structure::Table(_) | Structure::RealLine(_) => {
            let raw: Vec<f64> = match model.structure() {
                Structure::Table(_) => (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect(),
                _ => (0..n)
                    .map(|i| {
                        let x = model.coords(i);
                        (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * BUMP_WIDTH * BUMP_WIDTH)).exp()
                    })
                    .collect(),
            };
            let mass: f64 = raw.iter().zip(w).map(|(a, b)| a * b).sum();
            let phi = GroupFunction::new(model.clone(), raw.iter().map(|v| v / mass).collect())?;
            // Δ ≡ 1 on these models
            let phi1 = phi.map(|v| pow_ratio(v, r1));
            let phi2 = phi.reflect()?.map(|v| pow_ratio(v, r2));
            let at_e = match model.structure() {
                Structure::Table(t) => (0..n).map(|g| w[g] * phi1.values()[g] * phi2.values()[t.inv(g)]).sum::<f64>(),
                // knot at 0 of the piecewise-linear convolution
                _ => {
                    let psi = crate::convolution::twisted_convolve(&phi1, &phi2, ex)?;
                    let k = psi.raw();
                    k[k.len() / 2]
                }
            };
            finish(phi1, phi2, ex, at_e)
        }
        Structure::Affine(g) => {
            let s2 = 2.0 * BUMP_WIDTH * BUMP_WIDTH;
            let bump = |p: AffinePoint| (-(p.t * p.t + p.b * p.b) / s2).exp();
            let mass: f64 = (0..n).map(|k| w[k] * bump(g.point(k))).sum();
            let phi = |p: AffinePoint| bump(p) / mass;
            let alpha = ratio_f64(ex.twist());
            let f2 = |p: AffinePoint| pow_ratio(phi(p.inv()) / p.delta(), r2);
            let v1: Vec<f64> = (0..n).map(|k| pow_ratio(phi(g.point(k)), r1)).collect();
            let v2: Vec<f64> = (0..n).map(|k| f2(g.point(k))).collect();
            let at_e: f64 = (0..n)
                .map(|k| {
                    let p = g.point(k);
                    let q = p.inv();
                    w[k] * v1[k] * f2(q) * q.delta().powf(alpha)
                })
                .sum();
            finish(GroupFunction::new(model.clone(), v1)?, GroupFunction::new(model.clone(), v2)?, ex, at_e)
        }
    }
}

fn finish(phi1: GroupFunction, phi2: GroupFunction, ex: &YoungExponents, at_e: f64) -> Result<Witness> {
    let denom = phi1.lp_norm(ex.p1) * phi2.lp_norm(ex.p2);
    if denom == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(Witness { ratio: at_e / denom, value_at_identity: at_e, phi1, phi2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_finite_groups() {
        for m in [GroupModel::cyclic(6).unwrap(), GroupModel::affine_fq(5).unwrap()] {
            let m = m.into_arc();
            for (a, b) in [("2", "2"), ("3", "3/2"), ("1", "inf")] {
                let w = boundary_witness(&m, &YoungExponents::parse(a, b).unwrap()).unwrap();
                assert!((w.ratio - 1.0).abs() < 1e-14, "{a},{b}: {}", w.ratio);
            }
        }
    }

    #[test]
    fn real_line_and_affine() {
        let ex = YoungExponents::parse("2", "2").unwrap();
        let m = GroupModel::make_real_line(0.05, 3.0).unwrap().into_arc();
        let w = boundary_witness(&m, &ex).unwrap();
        assert!((w.ratio - 1.0).abs() < 1e-12);
        let m = GroupModel::make_affine_group(0.05, 0.05, 2.0, 3.0).unwrap().into_arc();
        let w = boundary_witness(&m, &ex).unwrap();
        assert!(w.ratio >= 1.0 - 1e-3, "{}", w.ratio);
    }

    #[test]
    fn interior_rejected() {
        let m = GroupModel::cyclic(6).unwrap().into_arc();
        assert!(boundary_witness(&m, &YoungExponents::parse("4/3", "4/3").unwrap()).is_err());
    }
}
