//! Discretized locally compact groups with left Haar weights and modular
//! function.

mod affine;
mod finite;
pub(crate) mod function;
mod real_line;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use affine::{AffineGrid, AffinePoint};
pub use finite::FiniteTable;
pub use function::GroupFunction;
pub use real_line::RealLineGrid;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Finite,
    RealLineSteps,
    TorusGrid,
    AffineGrid,
    Product,
}

#[derive(Clone, Debug)]
pub enum Structure {
    Table(FiniteTable),
    RealLine(RealLineGrid),
    Affine(AffineGrid),
}

/// Carrier points with product, inverse, Haar weight and `Δ` per point.
/// Immutable once built; share it behind an `Arc`.
#[derive(Clone, Debug)]
pub struct GroupModel {
    kind: ModelKind,
    label: String,
    catalog_name: Option<String>,
    structure: Structure,
    haar: Vec<f64>,
    delta: Vec<f64>,
}

impl GroupModel {
    fn from_table(kind: ModelKind, label: String, catalog_name: Option<String>, table: FiniteTable, weight: f64) -> Self {
        let n = table.len();
        GroupModel { kind, label, catalog_name, structure: Structure::Table(table), haar: vec![weight; n], delta: vec![1.0; n] }
    }

    /// Counting measure, `Δ ≡ 1`.
    pub fn make_finite_group(table: FiniteTable, label: impl Into<String>) -> Self {
        Self::from_table(ModelKind::Finite, label.into(), None, table, 1.0)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Ok(Self::make_finite_group(FiniteTable::cyclic(n)?, format!("Zmod:{n}")))
    }

    pub fn affine_fq(q: usize) -> Result<Self> {
        Ok(Self::make_finite_group(FiniteTable::affine_fq(q)?, format!("AffF:{q}")))
    }

    pub fn from_rows(rows: &[Vec<usize>], label: impl Into<String>) -> Result<Self> {
        Ok(Self::make_finite_group(FiniteTable::from_rows(rows)?, label))
    }

    /// Direct product of two table-backed models; weights multiply.
    pub fn product(a: &GroupModel, b: &GroupModel) -> Result<Self> {
        let (Structure::Table(ta), Structure::Table(tb)) = (&a.structure, &b.structure) else {
            return Err(Error::InvalidModel("products are only built from finite or torus models".into()));
        };
        let table = FiniteTable::product(ta, tb);
        let haar = a.haar.iter().flat_map(|wa| b.haar.iter().map(move |wb| wa * wb)).collect();
        let n = table.len();
        Ok(GroupModel {
            kind: ModelKind::Product,
            label: format!("{}x{}", a.label, b.label),
            catalog_name: None,
            structure: Structure::Table(table),
            haar,
            delta: vec![1.0; n],
        })
    }

    /// `R/Z` sampled at `k/n`, Haar weight `1/n`.
    pub fn torus(n: usize) -> Result<Self> {
        Ok(Self::from_table(
            ModelKind::TorusGrid,
            format!("Torus:{n}"),
            Some("R/Z".into()),
            FiniteTable::cyclic(n)?,
            1.0 / n as f64,
        ))
    }

    /// Step functions on `[-L, L]` with cells of width `h`.
    pub fn make_real_line(h: f64, half_width: f64) -> Result<Self> {
        Self::real_grid(1, h, half_width)
    }

    pub fn make_real_plane(h: f64, half_width: f64) -> Result<Self> {
        Self::real_grid(2, h, half_width)
    }

    fn real_grid(dim: usize, h: f64, half_width: f64) -> Result<Self> {
        let grid = RealLineGrid::new(dim, h, half_width)?;
        let n = grid.len();
        let (label, name) = match dim {
            1 => (format!("Rline:h={h},L={half_width}"), "R"),
            _ => (format!("R2:h={h},L={half_width}"), "R2"),
        };
        Ok(GroupModel {
            kind: ModelKind::RealLineSteps,
            label,
            catalog_name: Some(name.into()),
            haar: vec![grid.cell_mass(); n],
            delta: vec![1.0; n],
            structure: Structure::RealLine(grid),
        })
    }

    /// Node grid on `Aff+(R)` over `|ln a| <= T`, `|b| <= B`.
    pub fn make_affine_group(ht: f64, hb: f64, t_half: f64, b_half: f64) -> Result<Self> {
        let grid = AffineGrid::new(ht, hb, t_half, b_half)?;
        let mut haar = Vec::with_capacity(grid.len());
        let mut delta = Vec::with_capacity(grid.len());
        for i in 0..grid.nt {
            let m = grid.row_mass(i);
            let d = (-grid.t(i)).exp();
            for _ in 0..grid.nb {
                haar.push(m);
                delta.push(d);
            }
        }
        Ok(GroupModel {
            kind: ModelKind::AffineGrid,
            label: format!("Affine:ht={ht},hb={hb},T={t_half},B={b_half}"),
            catalog_name: Some("Aff+".into()),
            structure: Structure::Affine(grid),
            haar,
            delta,
        })
    }

    /// Parses `Zmod:8`, `AffF:5`, `Torus:64`, `Rline:h=0.05,L=8`,
    /// `R2:h=0.25,L=3`, `Affine:ht=0.25,hb=0.25,T=1.5,B=2` or `Table:path.json`.
    pub fn from_selector(sel: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidModel(format!("{sel}: {m}"));
        let (head, rest) = sel.split_once(':').ok_or_else(|| bad("expected KIND:PARAMS"))?;
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("expected a positive integer"));
        let params = |keys: &[&str]| -> Result<Vec<f64>> {
            let mut out = vec![f64::NAN; keys.len()];
            for kv in rest.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                let pos = keys.iter().position(|x| *x == k.trim()).ok_or_else(|| bad(&format!("unknown key {k}")))?;
                out[pos] = v.trim().parse().map_err(|_| bad(&format!("bad number {v}")))?;
            }
            if out.iter().any(|x| x.is_nan()) {
                return Err(bad(&format!("need keys {}", keys.join(","))));
            }
            Ok(out)
        };
        match head.trim() {
            "Zmod" => Self::cyclic(int(rest)?),
            "AffF" => Self::affine_fq(int(rest)?),
            "Torus" => Self::torus(int(rest)?),
            "Rline" => {
                let v = params(&["h", "L"])?;
                Self::make_real_line(v[0], v[1])
            }
            "R2" => {
                let v = params(&["h", "L"])?;
                Self::make_real_plane(v[0], v[1])
            }
            "Affine" => {
                let v = params(&["ht", "hb", "T", "B"])?;
                Self::make_affine_group(v[0], v[1], v[2], v[3])
            }
            "Table" => {
                let (name, table) = FiniteTable::load(rest)?;
                Ok(Self::make_finite_group(table, name.unwrap_or_else(|| sel.to_string())))
            }
            _ => Err(bad("unknown model kind")),
        }
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Catalog entry this model discretizes, if any.
    pub fn catalog_name(&self) -> Option<&str> {
        self.catalog_name.as_deref()
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn table(&self) -> Option<&FiniteTable> {
        match &self.structure {
            Structure::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn real_grid_ref(&self) -> Option<&RealLineGrid> {
        match &self.structure {
            Structure::RealLine(g) => Some(g),
            _ => None,
        }
    }

    pub fn affine_grid(&self) -> Option<&AffineGrid> {
        match &self.structure {
            Structure::Affine(g) => Some(g),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.haar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.haar.is_empty()
    }

    pub fn haar(&self) -> &[f64] {
        &self.haar
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn total_mass(&self) -> f64 {
        self.haar.iter().sum()
    }

    pub fn is_unimodular(&self) -> bool {
        !matches!(self.structure, Structure::Affine(_))
    }

    /// On real-line grids this is the cell `[0, h)`.
    pub fn identity(&self) -> usize {
        match &self.structure {
            Structure::Table(t) => t.identity(),
            Structure::RealLine(g) => match g.dim {
                1 => g.cells / 2,
                _ => (g.cells / 2) * g.cells + g.cells / 2,
            },
            Structure::Affine(g) => g.identity(),
        }
    }

    /// Finite and torus models expose the element index; continuum models
    /// their coordinates (`x`, `(x, y)` or `(ln a, b)`).
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        match &self.structure {
            Structure::Table(_) => vec![idx as f64],
            Structure::RealLine(g) => g.coords(idx),
            Structure::Affine(g) => {
                let p = g.point(idx);
                vec![p.t, p.b]
            }
        }
    }

    /// Carrier index of `g^{-1}` when inversion maps the carrier onto itself.
    pub fn inverse_index(&self, idx: usize) -> Option<usize> {
        match &self.structure {
            Structure::Table(t) => Some(t.inv(idx)),
            Structure::RealLine(g) => Some(g.reflect(idx)),
            Structure::Affine(_) => None,
        }
    }

    pub fn is_inversion_closed(&self) -> bool {
        !matches!(self.structure, Structure::Affine(_))
    }

    pub fn same_as(&self, other: &GroupModel) -> bool {
        std::ptr::eq(self, other) || (self.label == other.label && self.kind == other.kind && self.len() == other.len())
    }
}

/// `|∫φ(g^{-1}) dg - ∫φ(g)/Δ(g) dg| / ∫|φ| dg`, with `0` for `φ ≡ 0`.
pub fn check_modular_identity(phi: &GroupFunction) -> f64 {
    let m = phi.model();
    let w = m.haar();
    let d = m.delta();
    let v = phi.values();
    let norm: f64 = w.iter().zip(v).map(|(w, x)| w * x.abs()).sum();
    if norm == 0.0 {
        return 0.0;
    }
    let rhs: f64 = (0..v.len()).map(|i| w[i] * v[i] / d[i]).sum();
    let lhs: f64 = match m.structure() {
        Structure::Affine(g) => (0..v.len()).map(|i| w[i] * g.interpolate(v, g.point(i).inv())).sum(),
        _ => (0..v.len()).map(|i| w[i] * v[m.inverse_index(i).expect("closed under inversion")]).sum(),
    };
    (lhs - rhs).abs() / norm
}

/// `|∫φ(g0 g) dg - ∫φ(g) dg| / ∫|φ| dg` for a left translation by `g0`,
/// given in the model's coordinates.
pub fn left_translation_residual(phi: &GroupFunction, g0: &[f64]) -> f64 {
    let m = phi.model();
    let w = m.haar();
    let v = phi.values();
    let norm: f64 = w.iter().zip(v).map(|(w, x)| w * x.abs()).sum();
    if norm == 0.0 {
        return 0.0;
    }
    let base: f64 = w.iter().zip(v).map(|(w, x)| w * x).sum();
    let shifted: f64 = (0..v.len())
        .map(|i| {
            let x = m.coords(i);
            let y = match m.structure() {
                Structure::Table(t) => vec![t.mul(g0[0] as usize, i) as f64],
                Structure::RealLine(_) => x.iter().zip(g0).map(|(a, b)| a + b).collect(),
                Structure::Affine(_) => {
                    let p = AffinePoint { t: g0[0], b: g0[1] }.mul(&AffinePoint { t: x[0], b: x[1] });
                    vec![p.t, p.b]
                }
            };
            w[i] * phi.eval_at(&y)
        })
        .sum();
    (shifted - base).abs() / norm
}
