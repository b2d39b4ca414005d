//! Exact twisted convolution of step functions on the affine grid.
//!
//! For cells `c1 = [τ1, τ2] × [β1, β2]`, `c2 = [σ1, σ2] × [γ1, γ2]` and an
//! output point `g' = (t', b')`,
//!
//! ```text
//! K(c1, c2; g') = ∫_{c1 ∩ g' c2^{-1}} e^{-t} e^{-α (t' - t)} dt db
//!              = ∫_I e^{-t} e^{-α (t' - t)} L(t) dt,
//! ```
//!
//! where `I = [τ1, τ2] ∩ [t' - σ2, t' - σ1]` and
//! `L(t) = |[β1, β2] ∩ [b' - e^t γ2, b' - e^t γ1]|`. Between the breakpoints
//! `e^t ∈ {(b' - β)/γ}` the length is `A + B e^t`, so each piece integrates
//! in closed form.
//!
//! Shifting `c1` and `g'` together in `b` leaves `K` unchanged, which is what
//! [`AffineStencil`] exploits.

use rayon::prelude::*;

use crate::groups::{AffineGrid, AffinePoint};

/// `∫_a^b e^{k t} dt`.
#[inline]
pub(crate) fn int_exp(k: f64, a: f64, b: f64) -> f64 {
    if k == 0.0 {
        return b - a;
    }
    (k * a).exp() * (k * (b - a)).exp_m1() / k
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellBox {
    pub t0: f64,
    pub t1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl CellBox {
    pub fn of_node(grid: &AffineGrid, i: usize, j: usize) -> Self {
        let (t, b) = (grid.t(i), grid.b(j));
        CellBox { t0: t - 0.5 * grid.ht, t1: t + 0.5 * grid.ht, b0: b - 0.5 * grid.hb, b1: b + 0.5 * grid.hb }
    }
}

/// `K(c1, c2; g')` with twist exponent `alpha = 1/p1'`.
pub fn cell_kernel(c1: &CellBox, c2: &CellBox, g: AffinePoint, alpha: f64) -> f64 {
    let lo = c1.t0.max(g.t - c2.t1);
    let hi = c1.t1.min(g.t - c2.t0);
    if hi <= lo {
        return 0.0;
    }
    let (b1, b2, g1, g2) = (c1.b0, c1.b1, c2.b0, c2.b1);
    let bp = g.b;
    let mut cuts = [lo, hi, f64::NAN, f64::NAN, f64::NAN, f64::NAN];
    let mut nc = 2;
    for (num, den) in [(bp - b2, g1), (bp - b1, g2), (bp - b2, g2), (bp - b1, g1)] {
        if den != 0.0 {
            let u = num / den;
            if u > 0.0 {
                let t = u.ln();
                if t > lo && t < hi {
                    cuts[nc] = t;
                    nc += 1;
                }
            }
        }
    }
    let cuts = &mut cuts[..nc];
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        if tb <= ta {
            continue;
        }
        let um = (0.5 * (ta + tb)).exp();
        // upper end min(β2, b' - u γ1), lower end max(β1, b' - u γ2), as A + B u
        let (ua, ub) = if b2 <= bp - um * g1 { (b2, 0.0) } else { (bp, -g1) };
        let (la, lb) = if b1 >= bp - um * g2 { (b1, 0.0) } else { (bp, -g2) };
        let (a, b) = (ua - la, ub - lb);
        if a + b * um <= 0.0 {
            continue;
        }
        total += a * int_exp(alpha - 1.0, ta, tb) + b * int_exp(alpha, ta, tb);
    }
    (-alpha * g.t).exp() * total
}

/// Output sample points for convolutions on an [`AffineGrid`]: spacing
/// `h / sub`, covering the full support of a convolution of two grid cells.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineOutputGrid {
    pub sub: usize,
    pub t_origin: f64,
    pub dt: f64,
    pub nt: usize,
    pub b_origin: f64,
    pub db: f64,
    /// Offset (in output steps) of `b_origin` relative to `-B`.
    pub q_min: i64,
    pub nb: usize,
}

impl AffineOutputGrid {
    pub fn new(grid: &AffineGrid, sub: usize) -> Self {
        let sub = sub.max(1);
        let dt = grid.ht / sub as f64;
        let db = grid.hb / sub as f64;
        let t_origin = -2.0 * grid.t_half - grid.ht;
        let nt = (2 * (grid.nt + 1) - 2) * sub + 1;
        // b' = b + e^t b2 with |b|, |b2| <= B + hb/2, t <= T + ht/2
        let bmax = grid.b_half + 0.5 * grid.hb;
        let reach = bmax + (grid.t_half + 0.5 * grid.ht).exp() * bmax;
        let q_min = ((-reach + grid.b_half) / db).floor() as i64 - 1;
        let q_max = ((reach + grid.b_half) / db).ceil() as i64 + 1;
        AffineOutputGrid {
            sub,
            t_origin,
            dt,
            nt,
            b_origin: -grid.b_half + q_min as f64 * db,
            db,
            q_min,
            nb: (q_max - q_min + 1) as usize,
        }
    }

    pub fn len(&self) -> usize {
        self.nt * self.nb
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn point(&self, r: usize, s: usize) -> AffinePoint {
        AffinePoint { t: self.t_origin + r as f64 * self.dt, b: self.b_origin + s as f64 * self.db }
    }

    /// Haar mass of the output cell around `(r, s)`.
    pub fn weight(&self, r: usize) -> f64 {
        let t = self.t_origin + r as f64 * self.dt;
        2.0 * self.db * (-t).exp() * (0.5 * self.dt).sinh()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.nt).flat_map(|r| std::iter::repeat_n(self.weight(r), self.nb)).collect()
    }

    fn r_range(&self, t_lo: f64, t_hi: f64) -> (usize, usize) {
        let a = ((t_lo - self.t_origin) / self.dt).ceil().max(0.0) as usize;
        let b = (((t_hi - self.t_origin) / self.dt).floor() as usize).min(self.nt - 1);
        (a, b)
    }
}

/// Nonzero `K` values indexed by input cells, output row and `b`-offset.
#[derive(Clone, Debug)]
pub struct AffineStencil {
    pub out: AffineOutputGrid,
    nb_in: usize,
    entries: Vec<Entry>,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    i: u32,
    k: u32,
    m: u32,
    r: u32,
    /// output column is `sub * j + d` for input column `j`
    d: i32,
    w: f64,
}

/// Candidate `b'` bounds (relative) for cells `c1` in row `i`, `c2`.
fn b_reach(c1: &CellBox, c2: &CellBox) -> (f64, f64) {
    let (e0, e1) = (c1.t0.exp(), c1.t1.exp());
    let lo = c1.b0 + (e0 * c2.b0).min(e1 * c2.b0);
    let hi = c1.b1 + (e0 * c2.b1).max(e1 * c2.b1);
    (lo, hi)
}

impl AffineStencil {
    pub fn new(grid: &AffineGrid, alpha: f64, sub: usize) -> Self {
        let out = AffineOutputGrid::new(grid, sub);
        let sub = out.sub as i64;
        let (nt, nb) = (grid.nt, grid.nb);
        let cells: Vec<(usize, usize, usize)> =
            (0..nt).flat_map(|i| (0..nt).flat_map(move |k| (0..nb).map(move |m| (i, k, m)))).collect();
        let entries: Vec<Entry> = cells
            .par_iter()
            .flat_map_iter(|&(i, k, m)| {
                let c1 = CellBox::of_node(grid, i, 0);
                let c2 = CellBox::of_node(grid, k, m);
                let (r0, r1) = out.r_range(c1.t0 + c2.t0, c1.t1 + c2.t1);
                let (blo, bhi) = b_reach(&c1, &c2);
                // output column q (absolute) has b' = -B + (q + q_min) db; input column 0
                let d0 = ((blo + grid.b_half) / out.db).floor() as i64;
                let d1 = ((bhi + grid.b_half) / out.db).ceil() as i64;
                let mut v = Vec::new();
                for r in r0..=r1 {
                    for d in d0..=d1 {
                        let g = AffinePoint { t: out.t_origin + r as f64 * out.dt, b: -grid.b_half + d as f64 * out.db };
                        let w = cell_kernel(&c1, &c2, g, alpha);
                        if w > 0.0 {
                            v.push(Entry { i: i as u32, k: k as u32, m: m as u32, r: r as u32, d: (d - out.q_min) as i32, w });
                        }
                    }
                }
                v.into_iter()
            })
            .collect();
        debug_assert!(entries.iter().all(|e| e.d >= 0 && (e.d as i64 + sub * (nb as i64 - 1)) < out.nb as i64));
        AffineStencil { out, nb_in: nb, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    fn col(&self, e: &Entry, j: usize) -> usize {
        e.r as usize * self.out.nb + e.d as usize + self.out.sub * j
    }

    /// `ψ` at the output points.
    pub fn apply(&self, f1: &[f64], f2: &[f64]) -> Vec<f64> {
        let nb = self.nb_in;
        let mut psi = vec![0.0; self.out.len()];
        for e in &self.entries {
            let c = f2[e.k as usize * nb + e.m as usize] * e.w;
            if c == 0.0 {
                continue;
            }
            let row = &f1[e.i as usize * nb..(e.i as usize + 1) * nb];
            let base = self.col(e, 0);
            for (j, &a) in row.iter().enumerate() {
                psi[base + self.out.sub * j] += a * c;
            }
        }
        psi
    }

    /// `∂/∂f1 Σ v ψ`.
    pub fn grad_first(&self, f2: &[f64], v: &[f64]) -> Vec<f64> {
        let nb = self.nb_in;
        let mut g = vec![0.0; f2.len()];
        for e in &self.entries {
            let c = f2[e.k as usize * nb + e.m as usize] * e.w;
            if c == 0.0 {
                continue;
            }
            let base = self.col(e, 0);
            let row = &mut g[e.i as usize * nb..(e.i as usize + 1) * nb];
            for (j, gj) in row.iter_mut().enumerate() {
                *gj += v[base + self.out.sub * j] * c;
            }
        }
        g
    }

    /// `∂/∂f2 Σ v ψ`.
    pub fn grad_second(&self, f1: &[f64], v: &[f64]) -> Vec<f64> {
        let nb = self.nb_in;
        let mut g = vec![0.0; f1.len()];
        for e in &self.entries {
            let base = self.col(e, 0);
            let row = &f1[e.i as usize * nb..(e.i as usize + 1) * nb];
            let mut s = 0.0;
            for (j, &a) in row.iter().enumerate() {
                s += a * v[base + self.out.sub * j];
            }
            g[e.k as usize * nb + e.m as usize] += s * e.w;
        }
        g
    }
}

/// `ψ` at the output points by a direct sum over cell pairs, without the
/// translation stencil.
pub fn direct_convolve(grid: &AffineGrid, out: &AffineOutputGrid, f1: &[f64], f2: &[f64], alpha: f64) -> Vec<f64> {
    let n = grid.len();
    let nb = grid.nb;
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = Vec::new();
            if f1[a] == 0.0 {
                return acc;
            }
            let c1 = CellBox::of_node(grid, a / nb, a % nb);
            for (b, &v2) in f2.iter().enumerate() {
                if v2 == 0.0 {
                    continue;
                }
                let c2 = CellBox::of_node(grid, b / nb, b % nb);
                let (r0, r1) = out.r_range(c1.t0 + c2.t0, c1.t1 + c2.t1);
                let (blo, bhi) = b_reach(&c1, &c2);
                let s0 = ((blo - out.b_origin) / out.db).floor().max(0.0) as usize;
                let s1 = (((bhi - out.b_origin) / out.db).ceil() as usize).min(out.nb - 1);
                for r in r0..=r1 {
                    for s in s0..=s1 {
                        let w = cell_kernel(&c1, &c2, out.point(r, s), alpha);
                        if w > 0.0 {
                            acc.push((r * out.nb + s, f1[a] * v2 * w));
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut psi = vec![0.0; out.len()];
    for row in rows {
        for (k, x) in row {
            psi[k] += x;
        }
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint oracle for `K` with an `n × n` subdivision of `c1`.
    fn kernel_oracle(c1: &CellBox, c2: &CellBox, g: AffinePoint, alpha: f64, n: usize) -> f64 {
        let (dt, db) = ((c1.t1 - c1.t0) / n as f64, (c1.b1 - c1.b0) / n as f64);
        let mut s = 0.0;
        for a in 0..n {
            let t = c1.t0 + (a as f64 + 0.5) * dt;
            for b in 0..n {
                let x = AffinePoint { t, b: c1.b0 + (b as f64 + 0.5) * db };
                let q = x.left_div(&g);
                if q.t >= c2.t0 && q.t < c2.t1 && q.b >= c2.b0 && q.b < c2.b1 {
                    s += (-t).exp() * (-alpha * q.t).exp() * dt * db;
                }
            }
        }
        s
    }

    #[test]
    fn int_exp_limits() {
        assert_eq!(int_exp(0.0, 1.0, 3.0), 2.0);
        assert!((int_exp(1.0, 0.0, 1.0) - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!((int_exp(1e-12, 0.0, 1.0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn kernel_matches_oracle() {
        let c1 = CellBox { t0: -0.2, t1: 0.3, b0: -0.4, b1: 0.1 };
        let c2 = CellBox { t0: 0.1, t1: 0.6, b0: -0.3, b1: 0.4 };
        for &(t, b) in &[(0.3, 0.0), (0.5, -0.3), (0.2, 0.4), (0.8, 0.2), (0.05, -0.6)] {
            for alpha in [0.0, 0.25, 0.5] {
                let g = AffinePoint { t, b };
                let k = cell_kernel(&c1, &c2, g, alpha);
                let o = kernel_oracle(&c1, &c2, g, alpha, 1200);
                assert!((k - o).abs() < 2e-4 * (k.abs() + 1e-3), "({t}, {b}, {alpha}): {k} vs {o}");
            }
        }
        let far = AffinePoint { t: 3.0, b: 0.0 };
        assert_eq!(cell_kernel(&c1, &c2, far, 0.25), 0.0);
    }

    #[test]
    fn kernel_total_mass_is_product_of_masses() {
        // ∫ K(c1, c2; g') dg' Δ(g')^{...}: with α = 0, ∫ψ = ∫φ1 ∫φ2
        let grid = AffineGrid::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let out = AffineOutputGrid::new(&grid, 4);
        let c1 = CellBox::of_node(&grid, 1, 2);
        let c2 = CellBox::of_node(&grid, 3, 1);
        let w = out.weights();
        let mut s = 0.0;
        for r in 0..out.nt {
            for q in 0..out.nb {
                s += w[r * out.nb + q] * cell_kernel(&c1, &c2, out.point(r, q), 0.0);
            }
        }
        let m1 = grid.row_mass(1);
        let m2 = grid.row_mass(3);
        assert!((s - m1 * m2).abs() < 2e-2 * m1 * m2, "{s} vs {}", m1 * m2);
    }

    #[test]
    fn stencil_matches_direct_sum() {
        let grid = AffineGrid::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let n = grid.len();
        let f1: Vec<f64> = (0..n).map(|k| 1.0 + (k as f64 * 0.37).sin()).collect();
        let f2: Vec<f64> = (0..n).map(|k| 1.0 + (k as f64 * 0.91).cos()).collect();
        for sub in [1, 2] {
            let st = AffineStencil::new(&grid, 0.25, sub);
            let a = st.apply(&f1, &f2);
            let b = direct_convolve(&grid, &st.out, &f1, &f2, 0.25);
            let scale = a.iter().cloned().fold(0.0, f64::max);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12 * scale);
            }
            let v: Vec<f64> = (0..a.len()).map(|k| (k as f64 * 0.13).sin()).collect();
            let lhs: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
            let g1 = st.grad_first(&f2, &v);
            let g2 = st.grad_second(&f1, &v);
            let r1: f64 = g1.iter().zip(&f1).map(|(x, y)| x * y).sum();
            let r2: f64 = g2.iter().zip(&f2).map(|(x, y)| x * y).sum();
            assert!((lhs - r1).abs() < 1e-10 * lhs.abs().max(1.0));
            assert!((lhs - r2).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }
}
