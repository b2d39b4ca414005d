//! Finite group tables.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated multiplication table: `mul[i * n + j]` is the index of `i·j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[serde(default)]
    name: Option<String>,
    table: Vec<Vec<usize>>,
}

impl FiniteTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range in row {i}")));
                }
                mul.push(x as u32);
            }
        }
        Self::from_flat(n, mul)
    }

    fn from_flat(n: usize, mul: Vec<u32>) -> Result<Self> {
        let at = |i: usize, j: usize| mul[i * n + j] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inv = vec![0u32; n];
        for (x, slot) in inv.iter_mut().enumerate() {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
            *slot = y as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteTable { n, mul, inv, identity })
    }

    /// `Z/n` with `k ↦ k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("Z/0".into()));
        }
        let mul = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
        let inv = (0..n).map(|i| ((n - i) % n) as u32).collect();
        Ok(FiniteTable { n, mul, inv, identity: 0 })
    }

    /// `Aff(F_q) = {x ↦ ax + b}` for prime `q`, indexed by `(a - 1)·q + b`,
    /// so the identity is index 0.
    pub fn affine_fq(q: usize) -> Result<Self> {
        if q < 2 || (2..q).any(|d| q.is_multiple_of(d)) {
            return Err(Error::InvalidTable(format!("Aff(F_q) needs prime q, got {q}")));
        }
        let n = q * (q - 1);
        let idx = |a: usize, b: usize| (a - 1) * q + b;
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        let a_inv = |a: usize| (1..q).find(|&x| (a * x) % q == 1).unwrap();
        for a1 in 1..q {
            for b1 in 0..q {
                let i = idx(a1, b1);
                let ai = a_inv(a1);
                inv[i] = idx(ai, (q - (ai * b1) % q) % q) as u32;
                for a2 in 1..q {
                    for b2 in 0..q {
                        mul[i * n + idx(a2, b2)] = idx((a1 * a2) % q, (a1 * b2 + b1) % q) as u32;
                    }
                }
            }
        }
        Ok(FiniteTable { n, mul, inv, identity: 0 })
    }

    /// Direct product, `(i, j) ↦ i·|H| + j`.
    pub fn product(g: &FiniteTable, h: &FiniteTable) -> Self {
        let n = g.n * h.n;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a, b) = (x / h.n, x % h.n);
            for y in 0..n {
                let (c, d) = (y / h.n, y % h.n);
                mul.push((g.mul(a, c) * h.n + h.mul(b, d)) as u32);
            }
        }
        let inv = (0..n).map(|x| (g.inv(x / h.n) * h.n + h.inv(x % h.n)) as u32).collect();
        FiniteTable { n, mul, inv, identity: g.identity * h.n + h.identity }
    }

    /// Reads `{"name": ..., "table": [[...], ...]}`.
    pub fn load(path: impl AsRef<Path>) -> Result<(Option<String>, Self)> {
        let f: TableFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Ok((f.name, Self::from_rows(&f.table)?))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.n + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.mul(i, j)).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_affine_orders() {
        let z6 = FiniteTable::cyclic(6).unwrap();
        assert_eq!(z6.len(), 6);
        assert!(z6.is_abelian());
        assert_eq!(FiniteTable::from_rows(&z6.rows()).unwrap(), z6);

        let a3 = FiniteTable::affine_fq(3).unwrap();
        assert_eq!(a3.len(), 6);
        assert!(!a3.is_abelian());
        assert_eq!(FiniteTable::from_rows(&a3.rows()).unwrap(), a3);
        let a5 = FiniteTable::affine_fq(5).unwrap();
        assert_eq!(a5.len(), 20);
        for i in 0..20 {
            assert_eq!(a5.mul(i, a5.inv(i)), 0);
        }
        assert!(FiniteTable::affine_fq(4).is_err());
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(FiniteTable::from_rows(&[]).is_err());
        assert!(FiniteTable::from_rows(&[vec![0, 1], vec![1]]).is_err());
        assert!(FiniteTable::from_rows(&[vec![0, 1], vec![1, 1]]).is_err());
        // identity 0, but 1·1 = 1 leaves 1 without an inverse
        assert!(FiniteTable::from_rows(&[vec![0, 1, 2], vec![1, 1, 1], vec![2, 1, 2]]).is_err());
        // a loop with identity and inverses that is not associative
        let rows = vec![vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
        assert!(FiniteTable::from_rows(&rows).is_err());
    }

    #[test]
    fn product_table() {
        let z2 = FiniteTable::cyclic(2).unwrap();
        let a3 = FiniteTable::affine_fq(3).unwrap();
        let p = FiniteTable::product(&z2, &a3);
        assert_eq!(p.len(), 12);
        assert_eq!(FiniteTable::from_rows(&p.rows()).unwrap(), p);
    }
}
