//! Cell grids on `R` and `R^2`.

use crate::error::{Error, Result};

/// Cells of width `h` tiling `[-L, L]^dim`, centered at `-L + (i + 1/2) h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLineGrid {
    pub dim: usize,
    pub h: f64,
    pub half_width: f64,
    pub cells: usize,
}

impl RealLineGrid {
    pub fn new(dim: usize, h: f64, half_width: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidModel(format!("real-line grids have dimension 1 or 2, got {dim}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidModel(format!("cell width must be positive, got {h}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidModel(format!("window half-width must be positive, got {half_width}")));
        }
        let k = half_width / h;
        let r = k.round();
        if (k - r).abs() > 1e-9 * k.max(1.0) || r < 1.0 {
            return Err(Error::InvalidModel(format!("L = {half_width} is not a multiple of h = {h}")));
        }
        Ok(RealLineGrid { dim, h, half_width, cells: 2 * r as usize })
    }

    pub fn len(&self) -> usize {
        self.cells.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.h
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        match self.dim {
            1 => vec![self.center(idx)],
            _ => vec![self.center(idx / self.cells), self.center(idx % self.cells)],
        }
    }

    pub fn cell_mass(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Cell containing `x`, or `None` when `x` leaves the window.
    pub fn locate_axis(&self, x: f64) -> Option<usize> {
        let u = (x + self.half_width) / self.h;
        if !(0.0..self.cells as f64).contains(&u) {
            return None;
        }
        Some((u.floor() as usize).min(self.cells - 1))
    }

    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        match self.dim {
            1 => self.locate_axis(x[0]),
            _ => Some(self.locate_axis(x[0])? * self.cells + self.locate_axis(x[1])?),
        }
    }

    /// Index of the cell `-x` lies in.
    pub fn reflect(&self, idx: usize) -> usize {
        let n = self.cells;
        match self.dim {
            1 => n - 1 - idx,
            _ => (n - 1 - idx / n) * n + (n - 1 - idx % n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = RealLineGrid::new(1, 0.5, 2.0).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.center(0), -1.75);
        assert_eq!(RealLineGrid::new(1, 0.05, 8.0).unwrap().len(), 320);
        assert_eq!(RealLineGrid::new(2, 0.25, 1.0).unwrap().len(), 64);
        assert!(RealLineGrid::new(1, 0.0, 2.0).is_err());
        assert!(RealLineGrid::new(1, 0.5, -2.0).is_err());
        assert!(RealLineGrid::new(1, 0.3, 1.0).is_err());
    }

    #[test]
    fn locate_and_reflect() {
        let g = RealLineGrid::new(1, 0.5, 2.0).unwrap();
        assert_eq!(g.locate(&[-2.0]), Some(0));
        assert_eq!(g.locate(&[1.99]), Some(7));
        assert_eq!(g.locate(&[2.0]), None);
        for i in 0..8 {
            assert_eq!(g.reflect(i), g.locate(&[-g.center(i)]).unwrap());
        }
        let g2 = RealLineGrid::new(2, 0.5, 1.0).unwrap();
        for i in 0..g2.len() {
            let c = g2.coords(i);
            assert_eq!(g2.reflect(i), g2.locate(&[-c[0], -c[1]]).unwrap());
        }
    }
}
