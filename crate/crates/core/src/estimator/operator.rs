//! Bilinear convolution operators in the form the estimator iterates on.

use crate::convolution::affine_kernel::AffineStencil;
use crate::convolution::piecewise::{
    bl_dual, bl_integral_pow, knots_1d, knots_1d_adjoint, knots_2d, knots_2d_adjoint, pl_dual, pl_integral_pow,
};
use crate::convolution::AFFINE_OUTPUT_SUB;
use crate::exponents::{pow_ratio, ratio_f64, YoungExponents};
use crate::groups::{FiniteTable, GroupModel, Structure};

/// `(f1, f2) ↦ ψ = f1 * (f2 Δ^α)` together with the pieces of the gradient of
/// `(1/p) ∫ |ψ|^p`.
pub trait ConvolutionOperator: Sync {
    /// Haar mass of each input cell (both arguments live on the same carrier).
    fn input_weights(&self) -> &[f64];
    fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64>;
    /// `∫ |ψ|^p`.
    fn integral_pow(&self, psi: &[f64], p: f64) -> f64;
    /// `∂/∂ψ (1/p) ∫ |ψ|^p`.
    fn dual(&self, psi: &[f64], p: f64) -> Vec<f64>;
    /// `∂/∂f1 ⟨v, ψ(f1, f2)⟩`.
    fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64>;
    /// `∂/∂f2 ⟨v, ψ(f1, f2)⟩`.
    fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64>;
}

pub struct TableOperator<'a> {
    table: &'a FiniteTable,
    weights: &'a [f64],
    twist: Vec<f64>,
}

impl ConvolutionOperator for TableOperator<'_> {
    fn input_weights(&self) -> &[f64] {
        self.weights
    }

    fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64> {
        let n = self.table.len();
        let mut out = vec![0.0; n];
        for g in 0..n {
            let c = self.weights[g] * f1[g];
            if c == 0.0 {
                continue;
            }
            for h in 0..n {
                out[self.table.mul(g, h)] += c * f2[h] * self.twist[h];
            }
        }
        out
    }

    fn integral_pow(&self, psi: &[f64], p: f64) -> f64 {
        psi.iter().zip(self.weights).map(|(v, w)| w * v.abs().powf(p)).sum()
    }

    fn dual(&self, psi: &[f64], p: f64) -> Vec<f64> {
        psi.iter().zip(self.weights).map(|(v, w)| w * v.abs().powf(p - 1.0) * v.signum()).collect()
    }

    fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.table.len();
        (0..n).map(|g| self.weights[g] * (0..n).map(|h| v[self.table.mul(g, h)] * f2[h] * self.twist[h]).sum::<f64>()).collect()
    }

    fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.table.len();
        (0..n).map(|h| self.twist[h] * (0..n).map(|g| v[self.table.mul(g, h)] * self.weights[g] * f1[g]).sum::<f64>()).collect()
    }
}

pub struct LineOperator<'a> {
    weights: &'a [f64],
    h: f64,
}

impl ConvolutionOperator for LineOperator<'_> {
    fn input_weights(&self) -> &[f64] {
        self.weights
    }

    fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64> {
        knots_1d(f1, f2, self.h)
    }

    fn integral_pow(&self, psi: &[f64], p: f64) -> f64 {
        pl_integral_pow(psi, self.h, p)
    }

    fn dual(&self, psi: &[f64], p: f64) -> Vec<f64> {
        pl_dual(psi, self.h, p)
    }

    fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64> {
        knots_1d_adjoint(v, f2, self.h)
    }

    fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64> {
        // convolution on R is commutative
        knots_1d_adjoint(v, f1, self.h)
    }
}

pub struct PlaneOperator<'a> {
    weights: &'a [f64],
    h: f64,
    n: usize,
}

impl ConvolutionOperator for PlaneOperator<'_> {
    fn input_weights(&self) -> &[f64] {
        self.weights
    }

    fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64> {
        knots_2d(f1, f2, self.n, self.h)
    }

    fn integral_pow(&self, psi: &[f64], p: f64) -> f64 {
        bl_integral_pow(psi, 2 * self.n + 1, self.h, p)
    }

    fn dual(&self, psi: &[f64], p: f64) -> Vec<f64> {
        bl_dual(psi, 2 * self.n + 1, self.h, p)
    }

    fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64> {
        knots_2d_adjoint(v, f2, self.n, self.h)
    }

    fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64> {
        knots_2d_adjoint(v, f1, self.n, self.h)
    }
}

pub struct AffineOperator<'a> {
    weights: &'a [f64],
    stencil: AffineStencil,
    out_weights: Vec<f64>,
}

impl ConvolutionOperator for AffineOperator<'_> {
    fn input_weights(&self) -> &[f64] {
        self.weights
    }

    fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64> {
        self.stencil.apply(f1, f2)
    }

    fn integral_pow(&self, psi: &[f64], p: f64) -> f64 {
        psi.iter().zip(&self.out_weights).map(|(v, w)| w * v.abs().powf(p)).sum()
    }

    fn dual(&self, psi: &[f64], p: f64) -> Vec<f64> {
        psi.iter().zip(&self.out_weights).map(|(v, w)| w * v.abs().powf(p - 1.0) * v.signum()).collect()
    }

    fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64> {
        self.stencil.grad_first(f2, v)
    }

    fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64> {
        self.stencil.grad_second(f1, v)
    }
}

/// Operator for `model` at the twist of `ex`.
pub fn operator_for<'a>(model: &'a GroupModel, ex: &YoungExponents) -> Box<dyn ConvolutionOperator + 'a> {
    let alpha = ex.twist();
    match model.structure() {
        Structure::Table(t) => Box::new(TableOperator {
            table: t,
            weights: model.haar(),
            twist: model.delta().iter().map(|d| pow_ratio(*d, alpha)).collect(),
        }),
        Structure::RealLine(g) if g.dim == 1 => Box::new(LineOperator { weights: model.haar(), h: g.h }),
        Structure::RealLine(g) => Box::new(PlaneOperator { weights: model.haar(), h: g.h, n: g.cells }),
        Structure::Affine(g) => {
            let stencil = AffineStencil::new(g, ratio_f64(alpha), AFFINE_OUTPUT_SUB);
            let out_weights = stencil.out.weights();
            Box::new(AffineOperator { weights: model.haar(), stencil, out_weights })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::twisted_convolve;
    use crate::groups::GroupFunction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn operators_agree_with_convolution_module() {
        let ex = YoungExponents::parse("4/3", "3/2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let models = [
            GroupModel::affine_fq(5).unwrap(),
            GroupModel::torus(16).unwrap(),
            GroupModel::make_real_line(0.25, 2.0).unwrap(),
            GroupModel::make_real_plane(0.5, 2.0).unwrap(),
            GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.0).unwrap(),
        ];
        for m in models {
            let m = m.into_arc();
            let f1 = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            let f2 = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            let op = operator_for(&m, &ex);
            let psi = op.apply(f1.values(), f2.values());
            let direct = twisted_convolve(&f1, &f2, &ex).unwrap();
            let p = ex.p.value();
            let a = op.integral_pow(&psi, p).powf(1.0 / p);
            let b = direct.lp_norm(ex.p);
            assert!((a - b).abs() < 1e-12 * b, "{}: {a} vs {b}", m.label());

            // adjoint identities
            let v = op.dual(&psi, p);
            let lhs: f64 = psi.iter().zip(&v).map(|(x, y)| x * y).sum();
            let g1 = op.grad_first(f2.values(), &v);
            let g2 = op.grad_second(f1.values(), &v);
            let r1: f64 = g1.iter().zip(f1.values()).map(|(x, y)| x * y).sum();
            let r2: f64 = g2.iter().zip(f2.values()).map(|(x, y)| x * y).sum();
            assert!((lhs - r1).abs() < 1e-10 * lhs, "{}", m.label());
            assert!((lhs - r2).abs() < 1e-10 * lhs, "{}", m.label());
            // dual pairs with ψ to give ∫|ψ|^p
            assert!((lhs - op.integral_pow(&psi, p)).abs() < 1e-10 * lhs);
        }
    }
}
