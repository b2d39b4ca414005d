//! Replay of the subgroup argument behind `Y(p1, p2; G) <= Y(p1, p2; H)` on
//! finite pairs: the fiber functionals `S`, `T`, `U`, the kernel `F`, their
//! integral identities and every inequality of the chain.

use serde::Serialize;

use crate::convolution::{table_convolve, twisted_convolve};
use crate::error::{Error, Result};
use crate::exponents::YoungExponents;
use crate::groups::{FiniteTable, GroupFunction};
use crate::quotient::{sorted_sum, FiniteCosets, SubgroupPair};

/// Relative tolerance of every identity and inequality in the chain.
pub const CHAIN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
struct Powers {
    p1: f64,
    p2: f64,
    p: f64,
    p1c: f64,
    p2c: f64,
}

/// Everything the chain needs, on unit-norm inputs. `T`, `U` are row-major
/// `|X| × |X|`; `F` is indexed `[(x · |H| + h') · |X| + x']`.
#[derive(Clone, Debug)]
pub struct ProofObjects {
    pub pair: SubgroupPair,
    pub exponents: YoungExponents,
    pub phi1: GroupFunction,
    pub phi2: GroupFunction,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub f: Vec<f64>,
    /// Largest change of `S`, `T`, `U` when every coset is represented by
    /// its largest element instead of its smallest.
    pub representative_residual: f64,
    powers: Powers,
}

struct Ctx<'a> {
    table: &'a FiniteTable,
    cos: &'a FiniteCosets,
    delta: &'a [f64],
    big_delta: &'a [f64],
    a: &'a [f64],
    b: &'a [f64],
    pw: Powers,
}

impl Ctx<'_> {
    fn s_fun(&self, g: usize) -> f64 {
        sorted_sum(self.cos.members.iter().map(|&h| self.a[self.table.mul(h, g)].powf(self.pw.p1)).collect()) * self.delta[g]
    }

    fn t_fun(&self, g: usize, gp: usize) -> f64 {
        let gi = self.table.inv(g);
        let terms = self.cos.members.iter().map(|&h| self.b[self.table.mul(gi, self.table.mul(h, gp))].powf(self.pw.p2));
        sorted_sum(terms.collect()) * self.delta[gp]
    }

    /// `u(g, h, g')^{p1'}`.
    fn u_pow(&self, g: usize, h: usize, gp: usize) -> f64 {
        let z = self.table.mul(self.table.inv(g), self.table.mul(h, gp));
        self.b[z].powf(self.pw.p2) * self.big_delta[z] * self.delta[g] / self.delta[h]
    }

    fn u_fun(&self, g: usize, gp: usize) -> f64 {
        sorted_sum(self.cos.members.iter().map(|&h| self.u_pow(g, h, gp)).collect())
    }

    fn small_s(&self, h: usize, g: usize) -> f64 {
        self.a[self.table.mul(h, g)] * self.delta[g].powf(1.0 / self.pw.p1)
    }

    fn small_t(&self, g: usize, gp: usize) -> f64 {
        let z = self.table.mul(self.table.inv(g), gp);
        (self.b[z].powf(self.pw.p2) * self.delta[gp]).powf(1.0 / self.pw.p)
    }

    fn small_u(&self, g: usize, h: usize, gp: usize) -> f64 {
        self.u_pow(g, h, gp).powf(1.0 / self.pw.p1c)
    }

    fn f_fun(&self, g: usize, hp: usize, gp: usize) -> f64 {
        let t = self.table;
        let hpi = t.inv(hp);
        self.cos
            .members
            .iter()
            .map(|&h| {
                let k = t.mul(t.inv(h), hp);
                self.small_s(h, g)
                    * self.small_t(t.mul(hpi, t.mul(h, g)), gp)
                    * self.small_u(g, k, gp)
                    * self.delta[k].powf(1.0 / self.pw.p1c)
            })
            .sum()
    }
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

impl ProofObjects {
    pub fn coset_count(&self) -> usize {
        self.s.len()
    }

    pub fn subgroup_order(&self) -> usize {
        self.f.len() / (self.s.len() * self.s.len())
    }

    fn ctx(&self) -> Ctx<'_> {
        let (table, cos) = self.pair.finite().expect("finite pair");
        Ctx {
            table,
            cos,
            delta: self.pair.delta(),
            big_delta: self.pair.model().delta(),
            a: self.phi1.values(),
            b: self.phi2.values(),
            pw: self.powers,
        }
    }

    fn f_at(&self, x: usize, hp: usize, xp: usize) -> f64 {
        let k = self.coset_count();
        self.f[(x * self.subgroup_order() + hp) * k + xp]
    }

    /// `∫_X F(g, h', g') dḡ` for each `(h', x')`, indexed `[h' · |X| + x']`.
    fn f_contracted(&self) -> Vec<f64> {
        let (k, m) = (self.coset_count(), self.subgroup_order());
        let mu = self.pair.coset_measure();
        let mut out = vec![0.0; m * k];
        for hp in 0..m {
            for xp in 0..k {
                out[hp * k + xp] = (0..k).map(|x| mu[x] * self.f_at(x, hp, xp)).sum();
            }
        }
        out
    }
}

/// Normalizes `φ1`, `φ2` to unit norm and tabulates `S`, `T`, `U`, `F`.
pub fn build_proof_objects(
    pair: &SubgroupPair,
    ex: &YoungExponents,
    phi1: &GroupFunction,
    phi2: &GroupFunction,
) -> Result<ProofObjects> {
    if !ex.is_interior() {
        return Err(Error::Domain("the proof chain needs an interior triple".into()));
    }
    let (table, cos) = pair.finite().ok_or_else(|| Error::InvalidModel("the proof chain runs on finite pairs".into()))?;
    for phi in [phi1, phi2] {
        if !phi.model().same_as(pair.model()) {
            return Err(Error::ModelMismatch);
        }
        if phi.values().iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("the proof chain takes nonnegative functions".into()));
        }
    }
    let n1 = phi1.lp_norm(ex.p1);
    let n2 = phi2.lp_norm(ex.p2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let phi1 = phi1.scaled(1.0 / n1);
    let phi2 = phi2.scaled(1.0 / n2);
    let powers = Powers {
        p1: ex.p1.value(),
        p2: ex.p2.value(),
        p: ex.p.value(),
        p1c: ex.p1.conjugate().value(),
        p2c: ex.p2.conjugate().value(),
    };
    let ctx =
        Ctx { table, cos, delta: pair.delta(), big_delta: pair.model().delta(), a: phi1.values(), b: phi2.values(), pw: powers };
    let k = cos.cosets.len();
    let m = cos.members.len();
    let first: Vec<usize> = cos.cosets.iter().map(|c| c[0]).collect();
    let last: Vec<usize> = cos.cosets.iter().map(|c| *c.last().unwrap()).collect();
    let tab = |reps: &[usize]| {
        let s: Vec<f64> = reps.iter().map(|&g| ctx.s_fun(g)).collect();
        let mut t = Vec::with_capacity(k * k);
        let mut u = Vec::with_capacity(k * k);
        for &g in reps {
            for &gp in reps {
                t.push(ctx.t_fun(g, gp));
                u.push(ctx.u_fun(g, gp));
            }
        }
        (s, t, u)
    };
    let (s, t, u) = tab(&first);
    let (s2, t2, u2) = tab(&last);
    let representative_residual = max_rel_diff(&s, &s2).max(max_rel_diff(&t, &t2)).max(max_rel_diff(&u, &u2));
    let mut f = Vec::with_capacity(k * m * k);
    for &g in &first {
        for &hp in &cos.members {
            for &gp in &first {
                f.push(ctx.f_fun(g, hp, gp));
            }
        }
    }
    let check = |name: &str, v: &[f64]| match v.iter().position(|x| !x.is_finite() || *x < 0.0) {
        Some(i) => Err(Error::NonFinite(format!("{name}[{i}] = {}", v[i]))),
        None => Ok(()),
    };
    check("S", &s)?;
    check("T", &t)?;
    check("U", &u)?;
    check("F", &f)?;
    Ok(ProofObjects { pair: pair.clone(), exponents: *ex, phi1, phi2, s, t, u, f, representative_residual, powers })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Relative violation: `|lhs - rhs|` for equalities, `lhs - rhs` for
    /// inequalities, over `max(1, |rhs|)`.
    pub residual: f64,
    pub passed: bool,
}

impl CheckRow {
    fn equality(name: &str, lhs: f64, rhs: f64) -> Self {
        let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
        CheckRow { name: name.into(), lhs, rhs, residual, passed: residual <= CHAIN_TOLERANCE }
    }

    fn inequality(name: &str, lhs: f64, rhs: f64) -> Self {
        let residual = (lhs - rhs) / rhs.abs().max(1.0);
        CheckRow { name: name.into(), lhs, rhs, residual, passed: residual <= CHAIN_TOLERANCE }
    }

    /// Keeps the worst of several instances of the same step.
    fn worst(rows: impl IntoIterator<Item = CheckRow>) -> CheckRow {
        rows.into_iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).expect("at least one instance")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<CheckRow>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.rows.iter().find(|r| !r.passed).map(|r| r.name.as_str())
    }
}

/// The equalities: `∫_X S = ‖φ1‖^{p1}`, `∫_X T(ḡ, ·) = ‖φ2‖^{p2}`,
/// `∫_X U(·, ḡ') = ‖φ2‖^{p2}`, the fiber form of the convolution, the
/// resulting `L^p` decomposition, and representative independence.
pub fn identity_checks(po: &ProofObjects) -> Result<IdentityReport> {
    let k = po.coset_count();
    let m = po.subgroup_order();
    let mu = po.pair.coset_measure();
    let ctx = po.ctx();
    let pw = po.powers;
    let mut rows = Vec::new();

    let int_s: f64 = (0..k).map(|x| mu[x] * po.s[x]).sum();
    rows.push(CheckRow::equality("S_integral", int_s, 1.0));
    rows.push(CheckRow::worst((0..k).map(|x| {
        let v: f64 = (0..k).map(|xp| mu[xp] * po.t[x * k + xp]).sum();
        CheckRow::equality("T_integral", v, 1.0)
    })));
    rows.push(CheckRow::worst((0..k).map(|xp| {
        let v: f64 = (0..k).map(|x| mu[x] * po.u[x * k + xp]).sum();
        CheckRow::equality("U_integral", v, 1.0)
    })));

    let model = po.pair.model();
    let psi = table_convolve(ctx.table, model.haar(), model.delta(), ctx.a, ctx.b, po.exponents.twist());
    let scale = psi.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let fc = po.f_contracted();
    let reps: Vec<usize> = ctx.cos.cosets.iter().map(|c| c[0]).collect();
    let mut worst = CheckRow::equality("convolution_fiber_form", 0.0, 0.0);
    for (hi, &hp) in ctx.cos.members.iter().enumerate() {
        for (xp, &gp) in reps.iter().enumerate() {
            let direct = psi[ctx.table.mul(hp, gp)];
            let fiber = fc[hi * k + xp] / ctx.delta[gp].powf(1.0 / pw.p);
            let r = (direct - fiber).abs() / scale;
            if r > worst.residual || (hi, xp) == (0, 0) {
                worst = CheckRow {
                    name: "convolution_fiber_form".into(),
                    lhs: direct,
                    rhs: fiber,
                    residual: r,
                    passed: r <= CHAIN_TOLERANCE,
                };
            }
        }
    }
    rows.push(worst);

    let w = model.haar();
    let norm_pp: f64 = psi.iter().zip(w).map(|(v, w)| w * v.abs().powf(pw.p)).sum();
    let decomposed: f64 = (0..k).map(|xp| mu[xp] * (0..m).map(|hp| fc[hp * k + xp].powf(pw.p)).sum::<f64>()).sum();
    rows.push(CheckRow::equality("lp_norm_decomposition", decomposed, norm_pp));

    let rr = po.representative_residual;
    rows.push(CheckRow {
        name: "representative_independence".into(),
        lhs: rr,
        rhs: 0.0,
        residual: rr,
        passed: rr <= CHAIN_TOLERANCE,
    });
    Ok(IdentityReport { rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderEval {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative up to roundoff.
    pub residual: f64,
}

/// Multi-factor Hölder inequality on a finite measure space:
/// `(∫ Π_j f_j^{a_j})^c <= Π_i (∫ Π_j f_j^{q_ij})^{c_i}` with
/// `c = Σ c_i`, `a_j = Σ_i q_ij c_i / c`.
pub fn generalized_holder(factors: &[&[f64]], measure: &[f64], rows: &[Vec<f64>], weights: &[f64]) -> Result<HolderEval> {
    let l = factors.len();
    if l == 0 || rows.len() != weights.len() || rows.is_empty() {
        return Err(Error::Domain("need at least one factor and one weight per exponent row".into()));
    }
    if rows.iter().any(|r| r.len() != l) || factors.iter().any(|f| f.len() != measure.len()) {
        return Err(Error::Domain("inconsistent Hölder dimensions".into()));
    }
    if weights.iter().any(|&c| c.is_nan() || c <= 0.0) || rows.iter().flatten().any(|&q| q.is_nan() || q < 0.0) {
        return Err(Error::Domain("Hölder weights must be positive and exponents nonnegative".into()));
    }
    let c: f64 = weights.iter().sum();
    let a: Vec<f64> = (0..l).map(|j| rows.iter().zip(weights).map(|(r, ci)| r[j] * ci).sum::<f64>() / c).collect();
    let integral = |e: &[f64]| -> f64 {
        (0..measure.len()).map(|n| measure[n] * (0..l).map(|j| factors[j][n].powf(e[j])).product::<f64>()).sum()
    };
    let lhs = integral(&a).powf(c);
    let rhs = rows.iter().zip(weights).map(|(r, ci)| integral(r).powf(*ci)).product();
    Ok(HolderEval { lhs, rhs, residual: rhs - lhs })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub pair: String,
    pub exponents: YoungExponents,
    pub subgroup_constant: f64,
    pub steps: Vec<CheckRow>,
    pub first_failure: Option<String>,
    /// `‖φ1 * (φ2 Δ^{1/p1'})‖_p` for the unit-norm inputs.
    pub convolution_norm: f64,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Evaluates each step of the chain in order: Minkowski, Young on `H`,
/// Hölder on `H`, Hölder on `X`, their combination, the contraction
/// `∫∫ S T = 1`, the conclusion, and the direct convolution norm against
/// `yH`.
pub fn chain_check(po: &ProofObjects, y_sub: f64) -> Result<ChainReport> {
    let k = po.coset_count();
    let m = po.subgroup_order();
    let mu = po.pair.coset_measure();
    let ctx = po.ctx();
    let pw = po.powers;
    let fc = po.f_contracted();
    let reps: Vec<usize> = ctx.cos.cosets.iter().map(|c| c[0]).collect();
    let ones = vec![1.0; m];
    let mut steps = Vec::new();

    // (∫_H F(g, h', g')^p dh')^{1/p}, indexed [x · |X| + x']
    let fnorm: Vec<f64> =
        (0..k * k).map(|i| (0..m).map(|hp| po.f_at(i / k, hp, i % k).powf(pw.p)).sum::<f64>().powf(1.0 / pw.p)).collect();

    steps.push(CheckRow::worst((0..k).map(|xp| {
        let lhs: f64 = (0..m).map(|hp| fc[hp * k + xp].powf(pw.p)).sum();
        let rhs = (0..k).map(|x| mu[x] * fnorm[x * k + xp]).sum::<f64>().powf(pw.p);
        CheckRow::inequality("minkowski", lhs, rhs)
    })));

    let mut young = Vec::new();
    let mut holder_h = Vec::new();
    for (x, &g) in reps.iter().enumerate() {
        for (xp, &gp) in reps.iter().enumerate() {
            // h ↦ t(h^{-1} g, g') and h ↦ u(g, h, g') on H
            let tv: Vec<f64> = ctx.cos.members.iter().map(|&h| ctx.small_t(ctx.table.mul(ctx.table.inv(h), g), gp)).collect();
            let uv: Vec<f64> = ctx.cos.members.iter().map(|&h| ctx.small_u(g, h, gp)).collect();
            let tu: f64 = tv.iter().zip(&uv).map(|(t, u)| (t * u).powf(pw.p2)).sum::<f64>().powf(1.0 / pw.p2);
            let rhs = y_sub * po.s[x].powf(1.0 / pw.p1) * tu;
            young.push(CheckRow::inequality("young_on_subgroup", fnorm[x * k + xp], rhs));
            let h = generalized_holder(&[&tv, &uv], &ones, &[vec![pw.p, 0.0], vec![0.0, pw.p1c]], &[1.0 / pw.p, 1.0 / pw.p1c])?;
            holder_h.push(CheckRow::inequality("holder_on_subgroup", h.lhs, h.rhs));
            let product_rhs = po.t[x * k + xp].powf(1.0 / pw.p) * po.u[x * k + xp].powf(1.0 / pw.p1c);
            holder_h.push(CheckRow::inequality("holder_on_subgroup", tu, product_rhs));
        }
    }
    steps.push(CheckRow::worst(young));
    steps.push(CheckRow::worst(holder_h));

    let mut holder_x = Vec::new();
    let mut combined = Vec::new();
    let mut st_total = 0.0;
    let mut conclusion = 0.0;
    for xp in 0..k {
        let tcol: Vec<f64> = (0..k).map(|x| po.t[x * k + xp]).collect();
        let ucol: Vec<f64> = (0..k).map(|x| po.u[x * k + xp]).collect();
        let rows = [vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]];
        let h = generalized_holder(&[&po.s, &tcol, &ucol], mu, &rows, &[1.0, pw.p / pw.p2c, pw.p / pw.p1c])?;
        holder_x.push(CheckRow::inequality("holder_on_quotient", h.lhs, h.rhs));
        let st: f64 = (0..k).map(|x| mu[x] * po.s[x] * tcol[x]).sum();
        // unit norms turn the Hölder bound into ∫ S T
        holder_x.push(CheckRow::inequality("holder_on_quotient", h.lhs, st));
        let lhs: f64 = (0..m).map(|hp| fc[hp * k + xp].powf(pw.p)).sum();
        combined.push(CheckRow::inequality("subgroup_bound", lhs, y_sub.powf(pw.p) * st));
        st_total += mu[xp] * st;
        conclusion += mu[xp] * lhs;
    }
    steps.push(CheckRow::worst(holder_x));
    steps.push(CheckRow::worst(combined));
    steps.push(CheckRow::equality("contraction", st_total, 1.0));
    steps.push(CheckRow::inequality("conclusion", conclusion, y_sub.powf(pw.p)));

    let psi = twisted_convolve(&po.phi1, &po.phi2, &po.exponents)?;
    let norm = psi.lp_norm(po.exponents.p);
    steps.push(CheckRow::equality("direct_norm_matches", conclusion, norm.powf(pw.p)));
    steps.push(CheckRow::inequality("end_to_end", norm, y_sub));

    let first_failure = steps.iter().find(|r| !r.passed).map(|r| r.name.clone());
    Ok(ChainReport {
        pair: po.pair.label(),
        exponents: po.exponents,
        subgroup_constant: y_sub,
        steps,
        first_failure,
        convolution_norm: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupModel;
    use crate::quotient::{build_subgroup_pair, SubgroupSpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn triples() -> Vec<YoungExponents> {
        [("4/3", "4/3"), ("3/2", "3/2"), ("5/4", "10/7")].iter().map(|(a, b)| YoungExponents::parse(a, b).unwrap()).collect()
    }

    fn random_pair(m: &Arc<crate::groups::GroupModel>, seed: u64) -> (GroupFunction, GroupFunction) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (GroupFunction::random_nonnegative(m.clone(), &mut rng), GroupFunction::random_nonnegative(m.clone(), &mut rng))
    }

    #[test]
    fn cyclic_chain() {
        let m = GroupModel::cyclic(6).unwrap().into_arc();
        let pair = build_subgroup_pair(&m, SubgroupSpec::Elements(vec![0, 3])).unwrap();
        for ex in triples() {
            for seed in 0..20 {
                let (a, b) = random_pair(&m, seed);
                let po = build_proof_objects(&pair, &ex, &a, &b).unwrap();
                assert_eq!(po.representative_residual, 0.0);
                let ids = identity_checks(&po).unwrap();
                assert!(ids.passed(), "{ids:?}");
                let chain = chain_check(&po, 1.0).unwrap();
                assert!(chain.passed(), "{chain:?}");
            }
        }
    }

    #[test]
    fn trivial_and_whole_subgroups() {
        let m = GroupModel::affine_fq(3).unwrap().into_arc();
        let ex = YoungExponents::parse("4/3", "4/3").unwrap();
        let (a, b) = random_pair(&m, 7);
        let triv = build_subgroup_pair(&m, SubgroupSpec::Trivial).unwrap();
        let po = build_proof_objects(&triv, &ex, &a, &b).unwrap();
        for g in 0..6 {
            assert!((po.s[g] - po.phi1.values()[g].powf(4.0 / 3.0)).abs() < 1e-15);
        }
        let whole = build_subgroup_pair(&m, SubgroupSpec::Whole).unwrap();
        let po = build_proof_objects(&whole, &ex, &a, &b).unwrap();
        assert_eq!(po.coset_count(), 1);
        assert!((po.s[0] - 1.0).abs() < 1e-12);
        assert!(chain_check(&po, 1.0).unwrap().passed());
    }

    #[test]
    fn constants_give_counting_identities() {
        let m = GroupModel::cyclic(6).unwrap().into_arc();
        let pair = build_subgroup_pair(&m, SubgroupSpec::Elements(vec![0, 2, 4])).unwrap();
        let ex = YoungExponents::parse("3/2", "3/2").unwrap();
        let one = GroupFunction::constant(m, 1.0);
        let po = build_proof_objects(&pair, &ex, &one, &one).unwrap();
        // unit-norm constants are 6^{-2/3}; each fiber has 3 points
        let c = 6f64.powf(-2.0 / 3.0);
        assert!(po.s.iter().all(|&s| (s - 3.0 * c.powf(1.5)).abs() < 1e-14));
        assert!(identity_checks(&po).unwrap().passed());
    }

    #[test]
    fn corrupted_delta_fails() {
        let m = GroupModel::affine_fq(5).unwrap().into_arc();
        let pair = build_subgroup_pair(&m, SubgroupSpec::affine_fq_dilations(5)).unwrap().with_corrupted_delta();
        let ex = YoungExponents::parse("4/3", "4/3").unwrap();
        let (a, b) = random_pair(&m, 3);
        let po = build_proof_objects(&pair, &ex, &a, &b).unwrap();
        let ids = identity_checks(&po).unwrap();
        assert!(!ids.passed());
        assert!(po.representative_residual > 0.0);
    }

    #[test]
    fn rejects_boundary_and_continuum() {
        let m = GroupModel::cyclic(4).unwrap().into_arc();
        let pair = build_subgroup_pair(&m, SubgroupSpec::Elements(vec![0, 2])).unwrap();
        let one = GroupFunction::constant(m, 1.0);
        let ex = YoungExponents::parse("2", "2").unwrap();
        assert!(build_proof_objects(&pair, &ex, &one, &one).is_err());
        let a = GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.0).unwrap().into_arc();
        let ap = build_subgroup_pair(&a, SubgroupSpec::AffineTranslations).unwrap();
        let f = GroupFunction::constant(a, 1.0);
        assert!(build_proof_objects(&ap, &YoungExponents::parse("4/3", "4/3").unwrap(), &f, &f).is_err());
    }

    #[test]
    fn holder_edge_cases() {
        let f = [0.3, 1.2, 0.7];
        let w = [1.0, 2.0, 0.5];
        let one = generalized_holder(&[&f], &w, &[vec![2.0]], &[0.5]).unwrap();
        assert!((one.lhs - one.rhs).abs() < 1e-15);
        assert!(generalized_holder(&[&f], &w, &[vec![2.0, 1.0]], &[0.5]).is_err());
        assert!(generalized_holder(&[&f], &w, &[vec![2.0]], &[0.5, 0.5]).is_err());
        assert!(generalized_holder(&[&f], &w, &[vec![2.0]], &[0.0]).is_err());
    }

    proptest! {
        #[test]
        fn two_factor_holder(v in proptest::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..12), p in 1.05f64..6.0) {
            let a: Vec<f64> = v.iter().map(|x| x.0).collect();
            let b: Vec<f64> = v.iter().map(|x| x.1).collect();
            let w = vec![1.0; a.len()];
            let q = p / (p - 1.0);
            let h = generalized_holder(&[&a, &b], &w, &[vec![p, 0.0], vec![0.0, q]], &[1.0 / p, 1.0 / q]).unwrap();
            prop_assert!(h.residual >= -1e-12 * h.rhs.max(1.0));
        }
    }
}
