//! Closed subgroup pairs `H ⊂ G`, the functions `ρ` and `δ`, right cosets
//! `X = H\G` with a concrete measure, and checks of the quotient integral
//! formula `∫_X ∫_H φ(hg) dh δ(g) dḡ = ∫_G φ(g) dg`.
//!
//! Finite pairs are exact. On the affine grid two coordinate subgroups are
//! supported: translations `{(1, β)}` and dilations `{(e^s, 0)}`.

use std::sync::Arc;

use serde::Serialize;

use crate::convolution::affine_probe_points;
use crate::error::{Error, Result};
use crate::groups::{AffineGrid, AffinePoint, FiniteTable, GroupFunction, GroupModel, Structure};

/// Relative tolerance for the invariants enforced at construction.
pub const PAIR_TOLERANCE: f64 = 1e-12;

/// Factor applied to `δ` by [`SubgroupPair::with_corrupted_delta`] in the
/// negative controls.
pub const CORRUPTION_FACTOR: f64 = 1.1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupSpec {
    /// Carrier indices of a finite subgroup.
    Elements(Vec<usize>),
    Whole,
    Trivial,
    /// `{(1, β)} ≅ R` inside `Aff+(R)`.
    AffineTranslations,
    /// `{(e^s, 0)} ≅ R_{>0}` inside `Aff+(R)`.
    AffineDilations,
}

impl SubgroupSpec {
    /// `{x ↦ x + b}` in `Aff(F_q)` under the `(a - 1)·q + b` indexing.
    pub fn affine_fq_translations(q: usize) -> Self {
        SubgroupSpec::Elements((0..q).collect())
    }

    /// `{x ↦ a x}` in `Aff(F_q)`.
    pub fn affine_fq_dilations(q: usize) -> Self {
        SubgroupSpec::Elements((0..q - 1).map(|a| a * q).collect())
    }

    /// `whole`, `trivial`, `translations`, `dilations` or a comma-separated
    /// index list such as `0,3`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "whole" | "G" => Ok(SubgroupSpec::Whole),
            "trivial" | "e" => Ok(SubgroupSpec::Trivial),
            "translations" => Ok(SubgroupSpec::AffineTranslations),
            "dilations" => Ok(SubgroupSpec::AffineDilations),
            list => list
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::NotSubgroup(format!("cannot parse `{s}`"))))
                .collect::<Result<Vec<_>>>()
                .map(SubgroupSpec::Elements),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SubgroupSpec::Elements(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", items.join(","))
            }
            SubgroupSpec::Whole => "G".into(),
            SubgroupSpec::Trivial => "{e}".into(),
            SubgroupSpec::AffineTranslations => "translations".into(),
            SubgroupSpec::AffineDilations => "dilations".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FiniteCosets {
    /// Sorted subgroup elements.
    pub members: Vec<usize>,
    /// Sorted cosets; the first element is the representative.
    pub cosets: Vec<Vec<usize>>,
    pub coset_of: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coordinate {
    Translations,
    Dilations,
}

#[derive(Clone, Debug)]
enum Fibers {
    Finite(FiniteCosets),
    Affine { which: Coordinate, reps: Vec<AffinePoint> },
}

/// `G` with a closed subgroup `H`, right cosets and their representatives,
/// `δ` and `ρ` per carrier point, and the coset measure.
#[derive(Clone, Debug)]
pub struct SubgroupPair {
    model: Arc<GroupModel>,
    spec: SubgroupSpec,
    fibers: Fibers,
    delta: Vec<f64>,
    rho: Vec<f64>,
    coset_measure: Vec<f64>,
    corrupted: bool,
}

fn finite_members(t: &FiniteTable, spec: &SubgroupSpec) -> Result<Vec<usize>> {
    let n = t.len();
    let mut members = match spec {
        SubgroupSpec::Whole => (0..n).collect(),
        SubgroupSpec::Trivial => vec![t.identity()],
        SubgroupSpec::Elements(v) => v.clone(),
        _ => return Err(Error::NotSubgroup(format!("{} needs an affine grid model", spec.label()))),
    };
    members.sort_unstable();
    members.dedup();
    if let Some(&x) = members.iter().find(|&&x| x >= n) {
        return Err(Error::NotSubgroup(format!("index {x} outside a group of order {n}")));
    }
    let mut inside = vec![false; n];
    for &x in &members {
        inside[x] = true;
    }
    if !inside[t.identity()] {
        return Err(Error::NotSubgroup(format!("{} does not contain the identity", spec.label())));
    }
    for &a in &members {
        if !inside[t.inv(a)] {
            return Err(Error::NotSubgroup(format!("{} is missing the inverse of {a}", spec.label())));
        }
        for &b in &members {
            if !inside[t.mul(a, b)] {
                return Err(Error::NotSubgroup(format!("{} is not closed: {a}·{b} = {}", spec.label(), t.mul(a, b))));
            }
        }
    }
    Ok(members)
}

fn finite_cosets(t: &FiniteTable, members: Vec<usize>) -> FiniteCosets {
    let n = t.len();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let mut c: Vec<usize> = members.iter().map(|&h| t.mul(h, g)).collect();
        c.sort_unstable();
        for &y in &c {
            coset_of[y] = cosets.len();
        }
        cosets.push(c);
    }
    FiniteCosets { members, cosets, coset_of }
}

/// Order-independent sum: equal multisets give bit-identical results.
pub(crate) fn sorted_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn reference_bump(g: &AffineGrid) -> impl Fn(AffinePoint) -> f64 {
    let s = 0.2 * g.t_half.min(g.b_half);
    move |p: AffinePoint| (-(p.t * p.t + p.b * p.b) / (2.0 * s * s)).exp()
}

impl SubgroupPair {
    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn label(&self) -> String {
        format!("{} > {}", self.model.label(), self.spec.label())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.fibers, Fibers::Finite(_))
    }

    pub fn is_corrupted(&self) -> bool {
        self.corrupted
    }

    pub fn coset_count(&self) -> usize {
        match &self.fibers {
            Fibers::Finite(f) => f.cosets.len(),
            Fibers::Affine { reps, .. } => reps.len(),
        }
    }

    pub fn coset_measure(&self) -> &[f64] {
        &self.coset_measure
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Representatives in model coordinates.
    pub fn representatives(&self) -> Vec<Vec<f64>> {
        match &self.fibers {
            Fibers::Finite(f) => f.cosets.iter().map(|c| vec![c[0] as f64]).collect(),
            Fibers::Affine { reps, .. } => reps.iter().map(|p| vec![p.t, p.b]).collect(),
        }
    }

    /// Subgroup elements (finite pairs only).
    pub fn subgroup_elements(&self) -> Option<&[usize]> {
        match &self.fibers {
            Fibers::Finite(f) => Some(&f.members),
            _ => None,
        }
    }

    /// Coset containing carrier index `g` (finite pairs only).
    pub fn coset_of(&self, g: usize) -> Option<usize> {
        match &self.fibers {
            Fibers::Finite(f) => f.coset_of.get(g).copied(),
            _ => None,
        }
    }

    /// Cosets as sorted index lists (finite pairs only).
    pub fn cosets(&self) -> Option<&[Vec<usize>]> {
        match &self.fibers {
            Fibers::Finite(f) => Some(&f.cosets),
            _ => None,
        }
    }

    pub(crate) fn finite(&self) -> Option<(&FiniteTable, &FiniteCosets)> {
        match (&self.fibers, self.model.table()) {
            (Fibers::Finite(f), Some(t)) => Some((t, f)),
            _ => None,
        }
    }

    fn affine(&self) -> (&AffineGrid, Coordinate) {
        match (&self.fibers, self.model.affine_grid()) {
            (Fibers::Affine { which, .. }, Some(g)) => (g, *which),
            _ => unreachable!("affine fibers on an affine model"),
        }
    }

    /// `δ` at an arbitrary affine point, corruption included.
    pub fn delta_at(&self, p: AffinePoint) -> f64 {
        let base = match &self.fibers {
            Fibers::Affine { which: Coordinate::Translations, .. } => (-p.t).exp(),
            _ => 1.0,
        };
        if self.corrupted && p.b > 0.0 {
            base * CORRUPTION_FACTOR
        } else {
            base
        }
    }

    pub fn rho_at(&self, p: AffinePoint) -> f64 {
        match &self.fibers {
            Fibers::Affine { which: Coordinate::Dilations, .. } => p.t.exp(),
            _ => 1.0,
        }
    }

    /// Modular function of `H`. Every supported subgroup is unimodular.
    pub fn subgroup_modular(&self) -> f64 {
        1.0
    }

    /// `∫_H φ(h g) dh` at a representative.
    pub fn fiber_integral(&self, phi: &GroupFunction, x: usize) -> f64 {
        match &self.fibers {
            Fibers::Finite(f) => f.cosets[x].iter().map(|&y| phi.values()[y]).sum(),
            Fibers::Affine { reps, .. } => self.affine_fiber(phi, reps[x]),
        }
    }

    fn affine_fiber(&self, phi: &GroupFunction, g: AffinePoint) -> f64 {
        let (grid, which) = self.affine();
        let v = phi.values();
        match which {
            Coordinate::Translations => {
                (0..grid.nb).map(|j| grid.interpolate(v, AffinePoint { t: g.t, b: g.b + grid.b(j) })).sum::<f64>() * grid.hb
            }
            Coordinate::Dilations => {
                (0..grid.nt)
                    .map(|i| {
                        let s = grid.t(i);
                        grid.interpolate(v, AffinePoint { t: s, b: 0.0 }.mul(&g))
                    })
                    .sum::<f64>()
                    * grid.ht
            }
        }
    }

    /// `δ` at the representative of coset `x`.
    pub fn delta_rep(&self, x: usize) -> f64 {
        match &self.fibers {
            Fibers::Finite(f) => self.delta[f.cosets[x][0]],
            Fibers::Affine { reps, .. } => self.delta_at(reps[x]),
        }
    }

    /// Copy with `δ` scaled by [`CORRUPTION_FACTOR`] at odd non-identity
    /// indices (finite) or where `b > 0` (affine). Coset measures are kept.
    pub fn with_corrupted_delta(&self) -> Self {
        let mut out = self.clone();
        out.corrupted = true;
        let e = self.model.identity();
        for (i, d) in out.delta.iter_mut().enumerate() {
            let hit = match &self.fibers {
                Fibers::Finite(_) => i % 2 == 1 && i != e,
                Fibers::Affine { .. } => self.model.coords(i)[1] > 0.0,
            };
            if hit {
                *d *= CORRUPTION_FACTOR;
            }
        }
        out
    }

    /// Invariants of `δ` and `ρ` (see [`PairInvariants`]).
    pub fn invariants(&self) -> PairInvariants {
        let mut r = PairInvariants::default();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        match self.finite() {
            Some((t, f)) => {
                let e = t.identity();
                let big = self.model.delta();
                r.delta_identity = rel(self.delta[e], 1.0);
                r.rho_identity = rel(self.rho[e], 1.0);
                for &h in &f.members {
                    r.delta_restriction = r.delta_restriction.max(rel(self.delta[h], self.subgroup_modular()));
                    for g in 0..t.len() {
                        let lhs = self.delta[t.mul(h, g)];
                        r.delta_distribute = r.delta_distribute.max(rel(lhs, self.subgroup_modular() * self.delta[g]));
                        let lhs = self.rho[t.mul(g, h)];
                        r.rho_property = r.rho_property.max(rel(lhs, self.subgroup_modular() * self.rho[g] / big[h]));
                    }
                }
            }
            None => {
                let (_, which) = self.affine();
                let e = AffinePoint::IDENTITY;
                r.delta_identity = rel(self.delta_at(e), 1.0);
                r.rho_identity = rel(self.rho_at(e), 1.0);
                for s in [-0.7, 0.3, 1.1] {
                    let h = match which {
                        Coordinate::Translations => AffinePoint { t: 0.0, b: s },
                        Coordinate::Dilations => AffinePoint { t: s, b: 0.0 },
                    };
                    r.delta_restriction = r.delta_restriction.max(rel(self.delta_at(h), self.subgroup_modular()));
                    for g in affine_probe_points() {
                        let lhs = self.delta_at(h.mul(&g));
                        r.delta_distribute = r.delta_distribute.max(rel(lhs, self.subgroup_modular() * self.delta_at(g)));
                        let lhs = self.rho_at(g.mul(&h));
                        r.rho_property = r.rho_property.max(rel(lhs, self.subgroup_modular() * self.rho_at(g) / h.delta()));
                    }
                }
            }
        }
        r
    }
}

/// Worst relative residuals of the defining properties of `δ` and `ρ`:
/// `δ(e) = ρ(e) = 1`, `δ|_H = Δ_H`, `δ(hg) = Δ_H(h) δ(g)` and
/// `ρ(gh) = Δ_H(h) ρ(g) / Δ(h)`.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct PairInvariants {
    pub delta_identity: f64,
    pub rho_identity: f64,
    pub delta_restriction: f64,
    pub delta_distribute: f64,
    pub rho_property: f64,
}

impl PairInvariants {
    pub fn max(&self) -> f64 {
        [self.delta_identity, self.rho_identity, self.delta_restriction, self.delta_distribute, self.rho_property]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Builds cosets, `ρ`, `δ(g) = 1 / (Δ(g^{-1}) ρ(g^{-1}))` and the coset
/// measure. Finite coset masses come from the constant function one on each
/// coset; affine ones from a fixed Gaussian bump.
pub fn build_subgroup_pair(model: &Arc<GroupModel>, spec: SubgroupSpec) -> Result<SubgroupPair> {
    let pair = match model.structure() {
        Structure::Table(t) => {
            let members = finite_members(t, &spec)?;
            let f = finite_cosets(t, members);
            let big = model.delta();
            // Δ|_H = Δ_H = 1 on finite groups, so ρ ≡ 1 solves the ρ relation
            let rho = vec![1.0; t.len()];
            let delta: Vec<f64> = (0..t.len()).map(|g| 1.0 / (big[t.inv(g)] * rho[t.inv(g)])).collect();
            let w = model.haar();
            let coset_measure =
                f.cosets.iter().map(|c| c.iter().map(|&y| w[y]).sum::<f64>() / (f.members.len() as f64 * delta[c[0]])).collect();
            SubgroupPair { model: model.clone(), spec, fibers: Fibers::Finite(f), delta, rho, coset_measure, corrupted: false }
        }
        Structure::Affine(grid) => {
            let which = match spec {
                SubgroupSpec::AffineTranslations => Coordinate::Translations,
                SubgroupSpec::AffineDilations => Coordinate::Dilations,
                _ => return Err(Error::NotSubgroup(format!("{} is not a coordinate subgroup of Aff+(R)", spec.label()))),
            };
            let (reps, step) = match which {
                // Hg = {(t, *)}: one coset per log a row
                Coordinate::Translations => ((0..grid.nt).map(|i| AffinePoint { t: grid.t(i), b: 0.0 }).collect(), grid.ht),
                // Hg = {(t', b') : b' e^{-t'} = b e^{-t}}: section (1, v)
                Coordinate::Dilations => {
                    let k = (grid.b_half * grid.t_half.exp() / grid.hb).ceil() as i64;
                    ((-k..=k).map(|m| AffinePoint { t: 0.0, b: m as f64 * grid.hb }).collect(), grid.hb)
                }
            };
            let n = grid.len();
            let mut pair = SubgroupPair {
                model: model.clone(),
                spec,
                fibers: Fibers::Affine { which, reps },
                delta: Vec::with_capacity(n),
                rho: Vec::with_capacity(n),
                coset_measure: Vec::new(),
                corrupted: false,
            };
            for i in 0..n {
                let g = grid.point(i);
                let gi = g.inv();
                pair.rho.push(pair.rho_at(g));
                pair.delta.push(1.0 / (gi.delta() * pair.rho_at(gi)));
            }
            let bump = GroupFunction::from_fn(model.clone(), {
                let f = reference_bump(grid);
                move |x| f(AffinePoint { t: x[0], b: x[1] })
            });
            let k = pair.coset_count();
            let base: f64 = (0..k).map(|x| step * pair.fiber_integral(&bump, x) * pair.delta_rep(x)).sum();
            let c = bump.integral() / base;
            pair.coset_measure = vec![c * step; k];
            pair
        }
        Structure::RealLine(_) => return Err(Error::InvalidModel("subgroup pairs need a finite or affine model".into())),
    };
    let inv = pair.invariants();
    if !inv.passed(PAIR_TOLERANCE) {
        return Err(Error::InvalidModel(format!("{}: δ/ρ invariants fail ({:.3e})", pair.label(), inv.max())));
    }
    Ok(pair)
}

/// `|∫_X ∫_H φ(hg) dh δ(g) dḡ - ∫_G φ| / ∫_G |φ|`.
pub fn weil_decompose_check(pair: &SubgroupPair, phi: &GroupFunction) -> Result<f64> {
    if !phi.model().same_as(pair.model()) {
        return Err(Error::ModelMismatch);
    }
    let scale: f64 = phi.abs().integral();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let lhs: f64 = (0..pair.coset_count()).map(|x| pair.coset_measure[x] * pair.fiber_integral(phi, x) * pair.delta_rep(x)).sum();
    Ok((lhs - phi.integral()).abs() / scale)
}

/// Compares `A(g) = ∫_H φ(hg) dh δ(g)` with `A(h'g)` over all
/// representatives; returns `max |A(h'g) - A(g)| / max |A(g)|`. `h'` is a
/// carrier index (finite) or `β` / `s` for translations / dilations.
pub fn left_invariance_check(pair: &SubgroupPair, phi: &GroupFunction, h_prime: f64) -> Result<f64> {
    if !phi.model().same_as(pair.model()) {
        return Err(Error::ModelMismatch);
    }
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    match pair.finite() {
        Some((t, f)) => {
            let hp = h_prime as usize;
            if h_prime < 0.0 || h_prime.fract() != 0.0 || f.members.binary_search(&hp).is_err() {
                return Err(Error::NotSubgroup(format!("{h_prime} is not an element of {}", pair.spec.label())));
            }
            let v = phi.values();
            for c in &f.cosets {
                let g = c[0];
                let moved = t.mul(hp, g);
                let a = sorted_sum(f.members.iter().map(|&h| v[t.mul(h, g)]).collect()) * pair.delta[g];
                let b = sorted_sum(f.members.iter().map(|&h| v[t.mul(h, moved)]).collect()) * pair.delta[moved];
                worst = worst.max((b - a).abs());
                scale = scale.max(a.abs());
            }
        }
        None => {
            let (_, which) = pair.affine();
            let hp = match which {
                Coordinate::Translations => AffinePoint { t: 0.0, b: h_prime },
                Coordinate::Dilations => AffinePoint { t: h_prime, b: 0.0 },
            };
            let Fibers::Affine { reps, .. } = &pair.fibers else { unreachable!() };
            for &g in reps {
                let moved = hp.mul(&g);
                let a = pair.affine_fiber(phi, g) * pair.delta_at(g);
                let b = pair.affine_fiber(phi, moved) * pair.delta_at(moved);
                worst = worst.max((b - a).abs());
                scale = scale.max(a.abs());
            }
        }
    }
    Ok(if scale == 0.0 { 0.0 } else { worst / scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(model: GroupModel, spec: SubgroupSpec) -> SubgroupPair {
        build_subgroup_pair(&model.into_arc(), spec).unwrap()
    }

    #[test]
    fn cyclic_six_over_two() {
        let p = pair(GroupModel::cyclic(6).unwrap(), SubgroupSpec::Elements(vec![0, 3]));
        assert_eq!(p.coset_count(), 3);
        assert_eq!(p.representatives(), vec![vec![0.0], vec![1.0], vec![2.0]]);
        assert!(p.delta().iter().all(|&d| d == 1.0));
        assert!(p.coset_measure().iter().all(|&m| m == 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let phi = GroupFunction::random_nonnegative(p.model().clone(), &mut rng);
            assert!(weil_decompose_check(&p, &phi).unwrap() <= 1e-12);
            assert_eq!(left_invariance_check(&p, &phi, 3.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn affine_fq_subgroups() {
        let m = GroupModel::affine_fq(5).unwrap().into_arc();
        let tr = build_subgroup_pair(&m, SubgroupSpec::affine_fq_translations(5)).unwrap();
        let di = build_subgroup_pair(&m, SubgroupSpec::affine_fq_dilations(5)).unwrap();
        assert_eq!((tr.coset_count(), di.coset_count()), (4, 5));
        let reps = |p: &SubgroupPair| p.representatives().iter().map(|r| r[0] as usize).collect::<Vec<_>>();
        assert_eq!(reps(&tr), vec![0, 5, 10, 15]);
        assert_eq!(reps(&di), vec![0, 1, 2, 3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let phi = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            assert!(weil_decompose_check(&tr, &phi).unwrap() <= 1e-12);
            assert!(weil_decompose_check(&di, &phi).unwrap() <= 1e-12);
            assert_eq!(left_invariance_check(&di, &phi, 10.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_non_subgroups() {
        let m = GroupModel::cyclic(6).unwrap().into_arc();
        for bad in [vec![0, 1], vec![3], vec![0, 2], vec![0, 9]] {
            assert!(matches!(build_subgroup_pair(&m, SubgroupSpec::Elements(bad)), Err(Error::NotSubgroup(_))));
        }
        assert!(build_subgroup_pair(&m, SubgroupSpec::AffineTranslations).is_err());
        let a = GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.0).unwrap().into_arc();
        assert!(build_subgroup_pair(&a, SubgroupSpec::Elements(vec![0])).is_err());
        let p = build_subgroup_pair(&m, SubgroupSpec::Elements(vec![0, 3])).unwrap();
        let phi = GroupFunction::constant(m, 1.0);
        assert!(left_invariance_check(&p, &phi, 2.0).is_err());
    }

    #[test]
    fn whole_and_trivial() {
        let m = GroupModel::affine_fq(3).unwrap().into_arc();
        let whole = build_subgroup_pair(&m, SubgroupSpec::Whole).unwrap();
        let triv = build_subgroup_pair(&m, SubgroupSpec::Trivial).unwrap();
        assert_eq!((whole.coset_count(), triv.coset_count()), (1, 6));
        let phi = GroupFunction::from_fn(m.clone(), |x| x[0] * x[0] + 0.5);
        assert_eq!(whole.fiber_integral(&phi, 0), phi.integral());
        assert!(weil_decompose_check(&whole, &phi).unwrap() < 1e-15);
        assert!(weil_decompose_check(&triv, &phi).unwrap() < 1e-15);
        assert!(triv.delta().iter().all(|&d| d == 1.0));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(SubgroupSpec::parse("0, 3").unwrap(), SubgroupSpec::Elements(vec![0, 3]));
        assert_eq!(SubgroupSpec::parse("translations").unwrap(), SubgroupSpec::AffineTranslations);
        assert!(SubgroupSpec::parse("x").is_err());
    }

    #[test]
    fn corrupted_delta_is_detected() {
        let p = pair(GroupModel::cyclic(6).unwrap(), SubgroupSpec::Elements(vec![0, 3]));
        let bad = p.with_corrupted_delta();
        assert!(!bad.invariants().passed(PAIR_TOLERANCE));
        let phi = GroupFunction::constant(p.model().clone(), 1.0);
        assert!(left_invariance_check(&bad, &phi, 3.0).unwrap() > 0.05);
        assert!(weil_decompose_check(&bad, &phi).unwrap() > 0.01);
    }

    fn bump(m: &Arc<GroupModel>) -> GroupFunction {
        GroupFunction::from_fn(m.clone(), |x| (-((x[0] - 0.1).powi(2) / 0.18 + (x[1] + 0.2).powi(2) / 0.5)).exp())
    }

    #[test]
    fn affine_translations() {
        let m = GroupModel::make_affine_group(0.05, 0.05, 2.0, 4.0).unwrap().into_arc();
        let p = build_subgroup_pair(&m, SubgroupSpec::AffineTranslations).unwrap();
        assert_eq!(p.coset_count(), m.affine_grid().unwrap().nt);
        let phi = bump(&m);
        assert!(weil_decompose_check(&p, &phi).unwrap() < 1e-12);
        assert!(left_invariance_check(&p, &phi, 0.5).unwrap() < 1e-3);
        assert!(left_invariance_check(&p, &phi, 0.33).unwrap() < 1e-3);
        let bad = p.with_corrupted_delta();
        assert!(left_invariance_check(&bad, &phi, 0.5).unwrap() > 0.05);
        let inv = p.invariants();
        assert!(inv.passed(1e-12), "{inv:?}");
        assert!(!bad.invariants().passed(1e-12));
    }

    #[test]
    fn affine_dilations() {
        let m = GroupModel::make_affine_group(0.05, 0.05, 2.0, 4.0).unwrap().into_arc();
        let p = build_subgroup_pair(&m, SubgroupSpec::AffineDilations).unwrap();
        assert!(p.delta().iter().all(|&d| (d - 1.0).abs() < 1e-12));
        let phi = bump(&m);
        let r = weil_decompose_check(&p, &phi).unwrap();
        assert!(r < 1e-3, "{r}");
        let r = left_invariance_check(&p, &phi, 0.3).unwrap();
        assert!(r < 1e-2, "{r}");
    }
}
