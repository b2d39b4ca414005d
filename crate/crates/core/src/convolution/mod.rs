//! The twisted convolution `φ1 * (φ2 Δ^{1/p1'})`, `L^p` norms against Haar
//! weights, the Young ratio and the inversion transform identity.

pub mod affine_kernel;
pub mod piecewise;
pub mod quadrature;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{pow_ratio, ratio_f64, Exponent, Rational, YoungExponents};
use crate::groups::{AffineGrid, AffinePoint, FiniteTable, GroupFunction, GroupModel, Structure};
use affine_kernel::{direct_convolve, AffineOutputGrid};
use piecewise::{bl_integral_pow, knots_1d, knots_2d, pl_integral_pow};

/// Output sub-sampling of affine convolutions (points per input spacing).
pub const AFFINE_OUTPUT_SUB: usize = 2;

/// Largest affine carrier the direct cell-pair sum accepts.
pub const AFFINE_DIRECT_LIMIT: usize = 4000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "representation", rename_all = "snake_case")]
pub enum ConvolutionValues {
    /// Values on the input carrier with its Haar weights.
    Carrier { values: Vec<f64>, weights: Vec<f64> },
    /// Knots at `origin + m h`.
    PiecewiseLinear { origin: f64, h: f64, knots: Vec<f64> },
    /// `side × side` knots at `origin + (m1, m2) h`, row-major.
    PiecewiseBilinear { origin: f64, h: f64, side: usize, knots: Vec<f64> },
    /// Point samples `(ln a, b)` with Haar cell weights.
    Sampled { points: Vec<[f64; 2]>, values: Vec<f64>, weights: Vec<f64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvolutionResult {
    pub values: ConvolutionValues,
    /// Share of `∫|ψ|` carried outside the input window.
    pub truncation_mass: f64,
}

impl ConvolutionResult {
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        match &self.values {
            ConvolutionValues::Carrier { values, weights } | ConvolutionValues::Sampled { values, weights, .. } => {
                crate::groups::function::weighted_lp_norm(values, weights, p)
            }
            ConvolutionValues::PiecewiseLinear { h, knots, .. } => pl_norm(knots, p, |s| pl_integral_pow(knots, *h, s)),
            ConvolutionValues::PiecewiseBilinear { h, side, knots, .. } => {
                pl_norm(knots, p, |s| bl_integral_pow(knots, *side, *h, s))
            }
        }
    }

    /// Raw value array (carrier values, knots or samples).
    pub fn raw(&self) -> &[f64] {
        match &self.values {
            ConvolutionValues::Carrier { values, .. } | ConvolutionValues::Sampled { values, .. } => values,
            ConvolutionValues::PiecewiseLinear { knots, .. } | ConvolutionValues::PiecewiseBilinear { knots, .. } => knots,
        }
    }
}

fn pl_norm(knots: &[f64], p: Exponent, integral: impl Fn(f64) -> f64) -> f64 {
    match p {
        // piecewise-linear functions peak at knots
        Exponent::Infinite => knots.iter().fold(0.0, |m, v| m.max(v.abs())),
        _ => {
            let pv = p.value();
            integral(pv).powf(1.0 / pv)
        }
    }
}

fn check_same(f: &GroupFunction, g: &GroupFunction) -> Result<()> {
    if f.model().same_as(g.model()) {
        Ok(())
    } else {
        Err(Error::ModelMismatch)
    }
}

/// `ψ(g') = Σ_g w(g) a(g) b(g^{-1} g') Δ(g^{-1} g')^α` on a table model.
pub(crate) fn table_convolve(t: &FiniteTable, w: &[f64], delta: &[f64], a: &[f64], b: &[f64], alpha: Rational) -> Vec<f64> {
    let n = t.len();
    let bt: Vec<f64> = b.iter().zip(delta).map(|(b, d)| b * pow_ratio(*d, alpha)).collect();
    let mut out = vec![0.0; n];
    for g in 0..n {
        let c = w[g] * a[g];
        if c == 0.0 {
            continue;
        }
        for (h, &bh) in bt.iter().enumerate() {
            out[t.mul(g, h)] += c * bh;
        }
    }
    out
}

fn pl_truncation(knots: &[f64], dim: usize, side: usize) -> f64 {
    // knots -2L + m h; the input window |x| <= L is m in [N/2, 3N/2]
    let n = (side - 1) / 2;
    let inside = |m: usize| m >= n / 2 && m <= n + n / 2;
    let (mut tot, mut out) = (0.0, 0.0);
    for (k, v) in knots.iter().enumerate() {
        let a = v.abs();
        tot += a;
        let ok = match dim {
            1 => inside(k),
            _ => inside(k / side) && inside(k % side),
        };
        if !ok {
            out += a;
        }
    }
    if tot == 0.0 {
        0.0
    } else {
        out / tot
    }
}

/// Twisted convolution. Real-line step functions convolve exactly into
/// piecewise-linear (bilinear) functions; affine step functions are
/// evaluated exactly at [`AffineOutputGrid`] points.
pub fn twisted_convolve(phi1: &GroupFunction, phi2: &GroupFunction, ex: &YoungExponents) -> Result<ConvolutionResult> {
    check_same(phi1, phi2)?;
    let m = phi1.model();
    let alpha = ex.twist();
    let (a, b) = (phi1.values(), phi2.values());
    Ok(match m.structure() {
        Structure::Table(t) => ConvolutionResult {
            values: ConvolutionValues::Carrier {
                values: table_convolve(t, m.haar(), m.delta(), a, b, alpha),
                weights: m.haar().to_vec(),
            },
            truncation_mass: 0.0,
        },
        Structure::RealLine(g) if g.dim == 1 => {
            let knots = knots_1d(a, b, g.h);
            let truncation_mass = pl_truncation(&knots, 1, knots.len());
            ConvolutionResult {
                values: ConvolutionValues::PiecewiseLinear { origin: -2.0 * g.half_width, h: g.h, knots },
                truncation_mass,
            }
        }
        Structure::RealLine(g) => {
            let knots = knots_2d(a, b, g.cells, g.h);
            let side = 2 * g.cells + 1;
            let truncation_mass = pl_truncation(&knots, 2, side);
            ConvolutionResult {
                values: ConvolutionValues::PiecewiseBilinear { origin: -2.0 * g.half_width, h: g.h, side, knots },
                truncation_mass,
            }
        }
        Structure::Affine(g) => affine_convolve(g, a, b, ratio_f64(alpha))?,
    })
}

fn affine_convolve(g: &AffineGrid, a: &[f64], b: &[f64], alpha: f64) -> Result<ConvolutionResult> {
    if g.len() > AFFINE_DIRECT_LIMIT {
        return Err(Error::Domain(format!(
            "affine grid with {} nodes exceeds the direct convolution limit {AFFINE_DIRECT_LIMIT}",
            g.len()
        )));
    }
    let out = AffineOutputGrid::new(g, AFFINE_OUTPUT_SUB);
    let values = direct_convolve(g, &out, a, b, alpha);
    let weights = out.weights();
    let mut points = Vec::with_capacity(out.len());
    let (mut tot, mut outside) = (0.0, 0.0);
    for r in 0..out.nt {
        for s in 0..out.nb {
            let p = out.point(r, s);
            points.push([p.t, p.b]);
            let v = values[r * out.nb + s].abs() * weights[r * out.nb + s];
            tot += v;
            if p.t.abs() > g.t_half + 0.5 * g.ht || p.b.abs() > g.b_half + 0.5 * g.hb {
                outside += v;
            }
        }
    }
    Ok(ConvolutionResult {
        values: ConvolutionValues::Sampled { points, values, weights },
        truncation_mass: if tot > 0.0 { outside / tot } else { 0.0 },
    })
}

/// Norm of a function or convolution result.
pub fn lp_norm(phi: &GroupFunction, p: Exponent) -> f64 {
    phi.lp_norm(p)
}

/// `‖φ1 * (φ2 Δ^{1/p1'})‖_p / (‖φ1‖_{p1} ‖φ2‖_{p2})`.
pub fn young_ratio(phi1: &GroupFunction, phi2: &GroupFunction, ex: &YoungExponents) -> Result<f64> {
    check_same(phi1, phi2)?;
    let (n1, n2) = (phi1.lp_norm(ex.p1), phi2.lp_norm(ex.p2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    // precondition to unit norms so large inputs cannot overflow
    let f1 = phi1.scaled(1.0 / n1);
    let f2 = phi2.scaled(1.0 / n2);
    Ok(twisted_convolve(&f1, &f2, ex)?.lp_norm(ex.p))
}

/// The pair `(φ2(·^{-1}) Δ^{-1/p2}, φ1(·^{-1}) Δ^{-1/p1})`, which has the
/// same norms and the same Young ratio for the swapped exponents.
pub fn swap_pair(phi1: &GroupFunction, phi2: &GroupFunction, ex: &YoungExponents) -> Result<(GroupFunction, GroupFunction)> {
    check_same(phi1, phi2)?;
    let m = phi1.model();
    let d = m.delta();
    let (r1, r2) = (phi1.reflect()?, phi2.reflect()?);
    let e1 = ex.p1.reciprocal();
    let e2 = ex.p2.reciprocal();
    let f1: Vec<f64> = r2.values().iter().zip(d).map(|(v, d)| v * pow_ratio(1.0 / d, e2)).collect();
    let f2: Vec<f64> = r1.values().iter().zip(d).map(|(v, d)| v * pow_ratio(1.0 / d, e1)).collect();
    Ok((GroupFunction::new(m.clone(), f1)?, GroupFunction::new(m.clone(), f2)?))
}

/// Evaluation points used by the affine transform check.
pub fn affine_probe_points() -> Vec<AffinePoint> {
    let mut v = Vec::new();
    for a in 0..9 {
        for b in 0..9 {
            v.push(AffinePoint { t: -0.6 + 0.15 * a as f64, b: -0.8 + 0.2 * b as f64 });
        }
    }
    v
}

/// Both sides of
/// `φ1 * (φ2 Δ^{1/p1'})(g') = [φ2(·^{-1}) Δ^{-1/p2}] * [φ1(·^{-1}) Δ^{-1/p}](g'^{-1}) Δ(g')^{-1/p}`
/// at every carrier point (finite and real-line models) or at
/// [`affine_probe_points`] (affine grid, by quadrature). Returns
/// `max |lhs - rhs| / max |lhs|`.
pub fn transform_identity_check(phi1: &GroupFunction, phi2: &GroupFunction, ex: &YoungExponents) -> Result<f64> {
    check_same(phi1, phi2)?;
    let m = phi1.model();
    let (lhs, rhs) = match m.structure() {
        Structure::Table(t) => {
            let d = m.delta();
            let n = t.len();
            let lhs = table_convolve(t, m.haar(), d, phi1.values(), phi2.values(), ex.twist());
            let ip = ex.p.reciprocal();
            let ip2 = ex.p2.reciprocal();
            let a: Vec<f64> = (0..n).map(|y| phi2.values()[t.inv(y)] * pow_ratio(1.0 / d[y], ip2)).collect();
            let b: Vec<f64> = (0..n).map(|z| phi1.values()[t.inv(z)] * pow_ratio(1.0 / d[z], ip)).collect();
            let conv = table_convolve(t, m.haar(), d, &a, &b, Rational::from_integer(0));
            let rhs = (0..n).map(|g| conv[t.inv(g)] * pow_ratio(1.0 / d[g], ip)).collect();
            (lhs, rhs)
        }
        Structure::RealLine(_) => {
            let lhs = twisted_convolve(phi1, phi2, ex)?;
            let rhs = twisted_convolve(&phi2.reflect()?, &phi1.reflect()?, &ex.swapped())?;
            // knots are symmetric about 0; evaluating at -x reverses them
            let l = lhs.raw().to_vec();
            let mut r = rhs.raw().to_vec();
            r.reverse();
            (l, r)
        }
        Structure::Affine(g) => affine_transform_sides(m, g, phi1, phi2, ex),
    };
    let scale = lhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let diff = lhs.iter().zip(&rhs).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    Ok(diff / scale)
}

fn affine_transform_sides(
    m: &GroupModel,
    g: &AffineGrid,
    phi1: &GroupFunction,
    phi2: &GroupFunction,
    ex: &YoungExponents,
) -> (Vec<f64>, Vec<f64>) {
    let w = m.haar();
    let alpha = ratio_f64(ex.twist());
    let ip = ex.p.reciprocal_f64();
    let ip2 = ex.p2.reciprocal_f64();
    let (v1, v2) = (phi1.values(), phi2.values());
    let n = g.len();
    // F2(y) = φ2(y^{-1}) Δ(y)^{-1/p2} at the nodes
    let f2: Vec<f64> = (0..n)
        .map(|y| {
            let p = g.point(y);
            g.interpolate(v2, p.inv()) * (p.t * ip2).exp()
        })
        .collect();
    affine_probe_points()
        .par_iter()
        .map(|&gp| {
            let mut l = 0.0;
            for (k, &a) in v1.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let q = g.point(k).left_div(&gp);
                l += w[k] * a * g.interpolate(v2, q) * (-alpha * q.t).exp();
            }
            let x = gp.inv();
            let mut r = 0.0;
            for (k, &a) in f2.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                // F1(z) = φ1(z^{-1}) Δ(z)^{-1/p} with z = y^{-1} x
                let z = g.point(k).left_div(&x);
                r += w[k] * a * g.interpolate(v1, z.inv()) * (z.t * ip).exp();
            }
            (l, r * (gp.t * ip).exp())
        })
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn ex(a: &str, b: &str) -> YoungExponents {
        YoungExponents::parse(a, b).unwrap()
    }

    #[test]
    fn constants_on_cyclic_group() {
        let m = GroupModel::cyclic(8).unwrap().into_arc();
        let c = GroupFunction::constant(m, 1.0);
        let r = young_ratio(&c, &c, &ex("4/3", "4/3")).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        let psi = twisted_convolve(&c, &c, &ex("4/3", "4/3")).unwrap();
        assert!(psi.raw().iter().all(|&v| (v - 8.0).abs() < 1e-12));
        assert_eq!(psi.truncation_mass, 0.0);
    }

    #[test]
    fn point_mass_is_identity() {
        let m = GroupModel::affine_fq(5).unwrap().into_arc();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = GroupFunction::random_nonnegative(m.clone(), &mut rng);
        let e = GroupFunction::point_mass(m, 0);
        let psi = twisted_convolve(&e, &f, &ex("3/2", "6/5")).unwrap();
        assert_eq!(psi.raw(), f.values());
    }

    #[test]
    fn boxes_make_a_hat() {
        let m = GroupModel::make_real_line(0.5, 2.0).unwrap().into_arc();
        let f = GroupFunction::point_mass(m, 4);
        let psi = twisted_convolve(&f, &f, &ex("4/3", "4/3")).unwrap();
        let k = psi.raw();
        assert_eq!(k.iter().cloned().fold(0.0, f64::max), 0.5);
        assert_eq!(k.iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn zero_input_is_an_error() {
        let m = GroupModel::cyclic(4).unwrap().into_arc();
        let z = GroupFunction::zeros(m.clone());
        let c = GroupFunction::constant(m, 1.0);
        assert!(matches!(young_ratio(&z, &c, &ex("4/3", "4/3")), Err(Error::ZeroFunction)));
        let other = GroupFunction::constant(GroupModel::cyclic(5).unwrap().into_arc(), 1.0);
        assert!(matches!(young_ratio(&c, &other, &ex("4/3", "4/3")), Err(Error::ModelMismatch)));
    }

    #[test]
    fn boundary_saturation_with_point_mass() {
        let m = GroupModel::affine_fq(3).unwrap().into_arc();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = GroupFunction::random_nonnegative(m.clone(), &mut rng);
        for q in ["1", "3/2", "4", "inf"] {
            let e = ex("1", q);
            let d = GroupFunction::point_mass(m.clone(), 3);
            assert!((young_ratio(&d, &f, &e).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_identity_finite_and_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [GroupModel::affine_fq(5).unwrap(), GroupModel::make_real_line(0.25, 2.0).unwrap()] {
            let m = Arc::new(m);
            let f1 = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            let f2 = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            let r = transform_identity_check(&f1, &f2, &ex("5/4", "10/7")).unwrap();
            assert!(r <= 1e-12, "{r}");
            let (g1, g2) = swap_pair(&f1, &f2, &ex("5/4", "10/7")).unwrap();
            let a = young_ratio(&f1, &f2, &ex("5/4", "10/7")).unwrap();
            let b = young_ratio(&g1, &g2, &ex("10/7", "5/4")).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_step_convolution_respects_young() {
        let m = GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.5).unwrap().into_arc();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f1 = GroupFunction::random_nonnegative(m.clone(), &mut rng);
        let f2 = GroupFunction::random_nonnegative(m, &mut rng);
        for e in [ex("4/3", "4/3"), ex("3/2", "6/5")] {
            let r = young_ratio(&f1, &f2, &e).unwrap();
            assert!(r > 0.1 && r < 1.0, "{r}");
        }
    }

    #[test]
    fn pl_evaluation_agrees_with_knots() {
        let k = [0.0, 1.0, 3.0, 0.0];
        assert_eq!(piecewise::pl_eval(&k, -1.0, 0.5, -0.25), 2.0);
        assert_eq!(piecewise::pl_eval(&k, -1.0, 0.5, 5.0), 0.0);
    }
}
