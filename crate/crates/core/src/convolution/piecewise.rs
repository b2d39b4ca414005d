//! Exact convolution of step functions on `R` and `R^2`, and `L^p` norms of
//! the resulting piecewise-linear (bilinear) functions.
//!
//! Two boxes of width `h` centered at `x_i`, `x_j` convolve to a hat of base
//! `2h` and peak `h` centered at `x_i + x_j`. With cells `x_i = -L + (i+1/2)h`
//! the convolution of step functions is piecewise linear with knots
//! `-2L + m h`, `m = 0..=2N`, and knot values `h Σ_{i+j=m-1} a_i b_j`.

use std::sync::OnceLock;

use super::quadrature::gauss_legendre;

pub(crate) const GAUSS_1D: usize = 8;
pub(crate) const GAUSS_2D: usize = 4;

pub(crate) fn rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R4: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        GAUSS_1D => R8.get_or_init(|| gauss_legendre(GAUSS_1D)),
        GAUSS_2D => R4.get_or_init(|| gauss_legendre(GAUSS_2D)),
        _ => unreachable!("only the 4- and 8-point rules are cached"),
    }
}

/// Knot values of `a * b` for step functions with `n` cells of width `h`.
pub fn knots_1d(a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; 2 * n + 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            c[i + j + 1] += ai * bj;
        }
    }
    c.iter_mut().for_each(|x| *x *= h);
    c
}

/// Adjoint of [`knots_1d`] in its first argument: `g_i = h Σ_m v_m b_{m-1-i}`.
pub fn knots_1d_adjoint(v: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let n = b.len();
    let mut g = vec![0.0; n];
    for (i, gi) in g.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, &bj) in b.iter().enumerate() {
            s += v[i + j + 1] * bj;
        }
        *gi = h * s;
    }
    g
}

/// `∫ |ψ|^p` for the piecewise-linear `ψ` with knot spacing `h`.
pub fn pl_integral_pow(c: &[f64], h: f64, p: f64) -> f64 {
    let (x, w) = rule(GAUSS_1D);
    let mut s = 0.0;
    for k in c.windows(2) {
        let (l, r) = (k[0], k[1]);
        if l == 0.0 && r == 0.0 {
            continue;
        }
        for (xq, wq) in x.iter().zip(w) {
            s += wq * ((1.0 - xq) * l + xq * r).abs().powf(p);
        }
    }
    h * s
}

/// `v_m = ∂/∂c_m (1/p) ∫ |ψ|^p`.
pub fn pl_dual(c: &[f64], h: f64, p: f64) -> Vec<f64> {
    let (x, w) = rule(GAUSS_1D);
    let mut v = vec![0.0; c.len()];
    for m in 0..c.len() - 1 {
        let (l, r) = (c[m], c[m + 1]);
        if l == 0.0 && r == 0.0 {
            continue;
        }
        for (xq, wq) in x.iter().zip(w) {
            let y = (1.0 - xq) * l + xq * r;
            let g = h * wq * y.abs().powf(p - 1.0) * y.signum();
            v[m] += g * (1.0 - xq);
            v[m + 1] += g * xq;
        }
    }
    v
}

/// Knot values of `a * b` on `R^2`; inputs are `n × n` row-major, output
/// `(2n+1) × (2n+1)`.
pub fn knots_2d(a: &[f64], b: &[f64], n: usize, h: f64) -> Vec<f64> {
    let k = 2 * n + 1;
    let mut c = vec![0.0; k * k];
    for i1 in 0..n {
        for i2 in 0..n {
            let ai = a[i1 * n + i2];
            if ai == 0.0 {
                continue;
            }
            for j1 in 0..n {
                let row = (i1 + j1 + 1) * k + i2 + 1;
                let brow = &b[j1 * n..(j1 + 1) * n];
                for (j2, &bj) in brow.iter().enumerate() {
                    c[row + j2] += ai * bj;
                }
            }
        }
    }
    let h2 = h * h;
    c.iter_mut().for_each(|x| *x *= h2);
    c
}

pub fn knots_2d_adjoint(v: &[f64], b: &[f64], n: usize, h: f64) -> Vec<f64> {
    let k = 2 * n + 1;
    let mut g = vec![0.0; n * n];
    for i1 in 0..n {
        for i2 in 0..n {
            let mut s = 0.0;
            for j1 in 0..n {
                let row = (i1 + j1 + 1) * k + i2 + 1;
                let brow = &b[j1 * n..(j1 + 1) * n];
                for (j2, &bj) in brow.iter().enumerate() {
                    s += v[row + j2] * bj;
                }
            }
            g[i1 * n + i2] = h * h * s;
        }
    }
    g
}

fn bilinear_cells(c: &[f64], k: usize, mut f: impl FnMut(usize, usize, [f64; 4])) {
    for r in 0..k - 1 {
        for s in 0..k - 1 {
            let q = [c[r * k + s], c[r * k + s + 1], c[(r + 1) * k + s], c[(r + 1) * k + s + 1]];
            if q.iter().all(|&x| x == 0.0) {
                continue;
            }
            f(r, s, q);
        }
    }
}

/// `∫ |ψ|^p` for the piecewise-bilinear `ψ` on a `k × k` knot grid.
pub fn bl_integral_pow(c: &[f64], k: usize, h: f64, p: f64) -> f64 {
    let (x, w) = rule(GAUSS_2D);
    let mut s = 0.0;
    bilinear_cells(c, k, |_, _, q| {
        for (xa, wa) in x.iter().zip(w) {
            let lo = (1.0 - xa) * q[0] + xa * q[2];
            let hi = (1.0 - xa) * q[1] + xa * q[3];
            for (xb, wb) in x.iter().zip(w) {
                s += wa * wb * ((1.0 - xb) * lo + xb * hi).abs().powf(p);
            }
        }
    });
    h * h * s
}

pub fn bl_dual(c: &[f64], k: usize, h: f64, p: f64) -> Vec<f64> {
    let (x, w) = rule(GAUSS_2D);
    let mut v = vec![0.0; c.len()];
    bilinear_cells(c, k, |r, s, q| {
        for (xa, wa) in x.iter().zip(w) {
            for (xb, wb) in x.iter().zip(w) {
                let basis = [(1.0 - xa) * (1.0 - xb), (1.0 - xa) * xb, xa * (1.0 - xb), xa * xb];
                let y: f64 = basis.iter().zip(&q).map(|(b, q)| b * q).sum();
                let g = h * h * wa * wb * y.abs().powf(p - 1.0) * y.signum();
                v[r * k + s] += g * basis[0];
                v[r * k + s + 1] += g * basis[1];
                v[(r + 1) * k + s] += g * basis[2];
                v[(r + 1) * k + s + 1] += g * basis[3];
            }
        }
    });
    v
}

/// Linear interpolation of knot values at `x`; zero outside.
pub fn pl_eval(c: &[f64], origin: f64, h: f64, x: f64) -> f64 {
    let u = (x - origin) / h;
    if !(u >= 0.0 && u <= (c.len() - 1) as f64) {
        return 0.0;
    }
    let m = (u.floor() as usize).min(c.len() - 2);
    let f = u - m as f64;
    (1.0 - f) * c[m] + f * c[m + 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_convolution_is_a_hat() {
        // two unit-width indicators centered at 0.5 -> hat on [0, 2] with peak 1
        let a = [0.0, 0.0, 1.0, 0.0];
        let c = knots_1d(&a, &a, 1.0);
        // knots at -4, -3, ..., 4
        assert_eq!(c, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let h = 0.25;
        let a = [0.0, 1.0, 0.0];
        let c = knots_1d(&a, &a, h);
        assert_eq!(c.iter().cloned().fold(0.0, f64::max), h);
        assert_eq!(c.iter().filter(|&&x| x != 0.0).count(), 1);
    }

    #[test]
    fn hat_l2_norm() {
        // base 2, peak 1
        let c = [0.0, 1.0, 0.0];
        let n = pl_integral_pow(&c, 1.0, 2.0).sqrt();
        assert!((n - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        // p = 3: ∫ = 2 / 4
        assert!((pl_integral_pow(&c, 1.0, 3.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn adjoints_match() {
        let a: Vec<f64> = (0..7).map(|i| (i as f64 * 0.7).sin().abs()).collect();
        let b: Vec<f64> = (0..7).map(|i| (i as f64 * 1.3).cos().abs()).collect();
        let v: Vec<f64> = (0..15).map(|i| (i as f64 * 0.4).sin()).collect();
        let c = knots_1d(&a, &b, 0.3);
        let lhs: f64 = c.iter().zip(&v).map(|(x, y)| x * y).sum();
        let g = knots_1d_adjoint(&v, &b, 0.3);
        let rhs: f64 = g.iter().zip(&a).map(|(x, y)| x * y).sum();
        assert!((lhs - rhs).abs() < 1e-13);

        let n = 4;
        let a: Vec<f64> = (0..n * n).map(|i| (i as f64 * 0.7).sin().abs()).collect();
        let b: Vec<f64> = (0..n * n).map(|i| (i as f64 * 1.3).cos().abs()).collect();
        let v: Vec<f64> = (0..81).map(|i| (i as f64 * 0.4).sin()).collect();
        let c = knots_2d(&a, &b, n, 0.5);
        let lhs: f64 = c.iter().zip(&v).map(|(x, y)| x * y).sum();
        let g = knots_2d_adjoint(&v, &b, n, 0.5);
        let rhs: f64 = g.iter().zip(&a).map(|(x, y)| x * y).sum();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn duals_are_gradients() {
        let c = vec![0.0, 0.3, 1.2, 0.7, 0.1, 0.0];
        let (h, p) = (0.4, 2.5);
        let v = pl_dual(&c, h, p);
        for m in 1..5 {
            let mut cp = c.clone();
            let eps = 1e-6;
            cp[m] += eps;
            let fd = (pl_integral_pow(&cp, h, p) - pl_integral_pow(&c, h, p)) / (eps * p);
            assert!((fd - v[m]).abs() < 1e-5, "{m}: {fd} vs {}", v[m]);
        }
        let k = 3;
        let c = vec![0.0, 0.2, 0.0, 0.5, 1.0, 0.3, 0.0, 0.4, 0.1];
        let v = bl_dual(&c, k, h, p);
        let mut cp = c.clone();
        cp[4] += 1e-6;
        let fd = (bl_integral_pow(&cp, k, h, p) - bl_integral_pow(&c, k, h, p)) / (1e-6 * p);
        assert!((fd - v[4]).abs() < 1e-5);
    }

    #[test]
    fn bilinear_tent_norm() {
        // tensor of two hats: ∫ = (2/3)^2 for p = 2
        let c = vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!((bl_integral_pow(&c, 3, 1.0, 2.0) - 4.0 / 9.0).abs() < 1e-12);
    }
}
