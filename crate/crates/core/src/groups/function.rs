//! Real-valued functions on a model's carrier.

use std::sync::Arc;

use rand::Rng;

use super::{GroupModel, Structure};
use crate::error::{Error, Result};
use crate::exponents::Exponent;

/// Values per carrier point. On real-line grids these are step functions,
/// on the affine grid node samples.
#[derive(Clone, Debug)]
pub struct GroupFunction {
    model: Arc<GroupModel>,
    values: Vec<f64>,
}

impl GroupFunction {
    pub fn new(model: Arc<GroupModel>, values: Vec<f64>) -> Result<Self> {
        if values.len() != model.len() {
            return Err(Error::InvalidModel(format!("{} values for a carrier of {}", values.len(), model.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("value at carrier index {i}")));
        }
        Ok(GroupFunction { model, values })
    }

    pub fn zeros(model: Arc<GroupModel>) -> Self {
        let n = model.len();
        GroupFunction { model, values: vec![0.0; n] }
    }

    pub fn constant(model: Arc<GroupModel>, c: f64) -> Self {
        let n = model.len();
        GroupFunction { model, values: vec![c; n] }
    }

    /// Unit value at one carrier index.
    pub fn point_mass(model: Arc<GroupModel>, idx: usize) -> Self {
        let mut f = Self::zeros(model);
        f.values[idx] = 1.0;
        f
    }

    /// Samples `f` at [`GroupModel::coords`].
    pub fn from_fn(model: Arc<GroupModel>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..model.len()).map(|i| f(&model.coords(i))).collect();
        GroupFunction { model, values }
    }

    /// Independent uniform values in `[0, 1)`.
    pub fn random_nonnegative(model: Arc<GroupModel>, rng: &mut impl Rng) -> Self {
        let values = (0..model.len()).map(|_| rng.gen::<f64>()).collect();
        GroupFunction { model, values }
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn integral(&self) -> f64 {
        self.model.haar().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// `(Σ w |φ|^p)^{1/p}`, or `max |φ|` for `p = ∞`.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        weighted_lp_norm(&self.values, self.model.haar(), p)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GroupFunction { model: self.model.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// `g ↦ φ(g^{-1})` on models closed under inversion.
    pub fn reflect(&self) -> Result<Self> {
        let m = &self.model;
        let mut out = vec![0.0; self.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let j =
                m.inverse_index(i).ok_or_else(|| Error::InvalidModel(format!("{} is not closed under inversion", m.label())))?;
            *slot = self.values[j];
        }
        Ok(GroupFunction { model: m.clone(), values: out })
    }

    /// Value at a point given in model coordinates: exact on finite
    /// carriers, cell lookup on real-line grids, bilinear on the affine grid.
    /// Points outside the window give 0.
    pub fn eval_at(&self, x: &[f64]) -> f64 {
        match self.model.structure() {
            Structure::Table(_) => {
                let i = x[0] as usize;
                self.values.get(i).copied().unwrap_or(0.0)
            }
            Structure::RealLine(g) => g.locate(x).map_or(0.0, |i| self.values[i]),
            Structure::Affine(g) => g.interpolate(&self.values, super::AffinePoint { t: x[0], b: x[1] }),
        }
    }
}

pub(crate) fn weighted_lp_norm(values: &[f64], weights: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinite => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        _ if p.is_one() => values.iter().zip(weights).map(|(v, w)| w * v.abs()).sum(),
        _ => {
            let pv = p.value();
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            let s: f64 = values.iter().zip(weights).map(|(v, w)| w * (v.abs() / scale).powf(pv)).sum();
            scale * s.powf(1.0 / pv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn counting_norms() {
        let m = GroupModel::cyclic(10).unwrap().into_arc();
        let mut v = vec![0.0; 10];
        for x in v.iter_mut().take(4) {
            *x = 1.0;
        }
        let f = GroupFunction::new(m.clone(), v).unwrap();
        assert!((f.lp_norm(Exponent::integer(2).unwrap()) - 2.0).abs() < 1e-15);
        assert_eq!(f.lp_norm(Exponent::INFINITY), 1.0);
        assert_eq!(f.lp_norm(Exponent::one()), 4.0);
        assert!(GroupFunction::new(m.clone(), vec![0.0; 3]).is_err());
        assert!(GroupFunction::new(m, vec![f64::NAN; 10]).is_err());
    }

    #[test]
    fn reflect_on_real_line() {
        let m = GroupModel::make_real_line(0.5, 2.0).unwrap().into_arc();
        let f = GroupFunction::from_fn(m.clone(), |x| x[0]);
        let r = f.reflect().unwrap();
        for (a, b) in f.values().iter().zip(r.values()) {
            assert_eq!(*a, -b);
        }
        let aff = GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.0).unwrap().into_arc();
        assert!(GroupFunction::zeros(aff).reflect().is_err());
    }

    proptest! {
        #[test]
        fn norm_is_homogeneous(seed in 0u64..1000, c in -5.0f64..5.0, pn in 1i64..7, pd in 1i64..4) {
            prop_assume!(pn >= pd);
            let p = Exponent::new(pn, pd).unwrap();
            let m = GroupModel::make_real_line(0.25, 2.0).unwrap().into_arc();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = GroupFunction::random_nonnegative(m, &mut rng);
            let lhs = f.scaled(c).lp_norm(p);
            let rhs = c.abs() * f.lp_norm(p);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }
    }

    #[test]
    fn scaling_by_minus_three() {
        let m = GroupModel::affine_fq(5).unwrap().into_arc();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = GroupFunction::random_nonnegative(m, &mut rng);
        let p = Exponent::new(3, 2).unwrap();
        assert!((f.scaled(-3.0).lp_norm(p) - 3.0 * f.lp_norm(p)).abs() < 1e-13);
    }
}
