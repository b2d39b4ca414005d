//! Node grids on the affine group `Aff+(R) = {(a, b) : a > 0}` in the
//! coordinates `t = ln a`, `b`.
//!
//! Product `(a1, b1)(a2, b2) = (a1 a2, a1 b2 + b1)`, left Haar measure
//! `da db / a^2 = e^{-t} dt db`, modular function `Δ(a, b) = 1/a = e^{-t}`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePoint {
    pub t: f64,
    pub b: f64,
}

impl AffinePoint {
    pub const IDENTITY: AffinePoint = AffinePoint { t: 0.0, b: 0.0 };

    pub fn from_ab(a: f64, b: f64) -> Self {
        AffinePoint { t: a.ln(), b }
    }

    pub fn a(&self) -> f64 {
        self.t.exp()
    }

    pub fn mul(&self, o: &AffinePoint) -> AffinePoint {
        AffinePoint { t: self.t + o.t, b: self.t.exp() * o.b + self.b }
    }

    pub fn inv(&self) -> AffinePoint {
        AffinePoint { t: -self.t, b: -self.b * (-self.t).exp() }
    }

    /// `g^{-1} g'` without forming the inverse.
    pub fn left_div(&self, o: &AffinePoint) -> AffinePoint {
        AffinePoint { t: o.t - self.t, b: (o.b - self.b) * (-self.t).exp() }
    }

    pub fn delta(&self) -> f64 {
        (-self.t).exp()
    }
}

/// Nodes `t_i = -T + i h_t`, `b_j = -B + j h_b`; node `(i, j)` stands for
/// the cell `[t_i ± h_t/2] × [b_j ± h_b/2]`, whose exact Haar mass is
/// `2 h_b e^{-t_i} sinh(h_t / 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineGrid {
    pub ht: f64,
    pub hb: f64,
    pub t_half: f64,
    pub b_half: f64,
    pub nt: usize,
    pub nb: usize,
}

fn steps(half: f64, h: f64, what: &str) -> Result<usize> {
    if !(h > 0.0 && h.is_finite() && half > 0.0 && half.is_finite()) {
        return Err(Error::InvalidModel(format!("{what}: spacing {h} and half-width {half} must be positive")));
    }
    let k = 2.0 * half / h;
    let r = k.round();
    if (k - r).abs() > 1e-9 * k.max(1.0) || r < 2.0 {
        return Err(Error::InvalidModel(format!("{what}: half-width {half} is not a multiple of {h} (need at least 2 steps)")));
    }
    Ok(r as usize + 1)
}

impl AffineGrid {
    pub fn new(ht: f64, hb: f64, t_half: f64, b_half: f64) -> Result<Self> {
        let nt = steps(t_half, ht, "log a grid")?;
        let nb = steps(b_half, hb, "b grid")?;
        Ok(AffineGrid { ht, hb, t_half, b_half, nt, nb })
    }

    pub fn len(&self) -> usize {
        self.nt * self.nb
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn t(&self, i: usize) -> f64 {
        -self.t_half + i as f64 * self.ht
    }

    #[inline]
    pub fn b(&self, j: usize) -> f64 {
        -self.b_half + j as f64 * self.hb
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nb + j
    }

    pub fn point(&self, idx: usize) -> AffinePoint {
        AffinePoint { t: self.t(idx / self.nb), b: self.b(idx % self.nb) }
    }

    pub fn identity(&self) -> usize {
        self.index(self.nt / 2, self.nb / 2)
    }

    pub fn row_mass(&self, i: usize) -> f64 {
        2.0 * self.hb * (-self.t(i)).exp() * (0.5 * self.ht).sinh()
    }

    /// Bilinear interpolation of node values at `g`; zero outside the node hull.
    pub fn interpolate(&self, values: &[f64], g: AffinePoint) -> f64 {
        let u = (g.t + self.t_half) / self.ht;
        let v = (g.b + self.b_half) / self.hb;
        let (nt, nb) = (self.nt as f64, self.nb as f64);
        if !(u >= 0.0 && u <= nt - 1.0 && v >= 0.0 && v <= nb - 1.0) {
            return 0.0;
        }
        let i = (u.floor() as usize).min(self.nt - 2);
        let j = (v.floor() as usize).min(self.nb - 2);
        let (fu, fv) = (u - i as f64, v - j as f64);
        let at = |i: usize, j: usize| values[self.index(i, j)];
        (1.0 - fu) * ((1.0 - fv) * at(i, j) + fv * at(i, j + 1)) + fu * ((1.0 - fv) * at(i + 1, j) + fv * at(i + 1, j + 1))
    }

    /// Node whose cell contains `g`.
    pub fn locate(&self, g: AffinePoint) -> Option<usize> {
        let u = ((g.t + self.t_half) / self.ht + 0.5).floor();
        let v = ((g.b + self.b_half) / self.hb + 0.5).floor();
        if u < 0.0 || v < 0.0 || u >= self.nt as f64 || v >= self.nb as f64 {
            return None;
        }
        Some(self.index(u as usize, v as usize))
    }
}
