//! The property battery behind `verify`: modular and transform identities,
//! quotient formula checks, the proof chain, the subgroup audit, boundary
//! witnesses and catalog consistency.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{catalog_consistency_check, reference_triples, Catalog};
use crate::constants::beckner_y_rn;
use crate::convolution::{transform_identity_check, young_ratio};
use crate::error::Result;
use crate::estimator::{boundary_witness, monotonicity_audit, AuditPair, EstimatorConfig};
use crate::exponents::{Exponent, YoungExponents};
use crate::groups::{check_modular_identity, GroupFunction, GroupModel};
use crate::proof::{build_proof_objects, chain_check, identity_checks, CheckRow};
use crate::quotient::{
    build_subgroup_pair, left_invariance_check, weil_decompose_check, SubgroupPair, SubgroupSpec, PAIR_TOLERANCE,
};

/// Finite-model identities must hold to this.
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Quadrature checks on the affine grid.
pub const QUADRATURE_TOLERANCE: f64 = 1e-3;
/// Slack of estimates above subgroup constants in the audit.
pub const AUDIT_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Random instances per finite pair and triple in the proof chain, and
    /// random functions per finite quotient check.
    pub seeds: u64,
    pub corrupt_delta: bool,
    /// Run only the proof chain.
    pub proof_chain_only: bool,
    /// Include the estimator-based subgroup audit.
    pub audit: bool,
    pub audit_config: EstimatorConfig,
    /// Spacing of the fine affine grid (`|ln a| <= 3`, `|b| <= 6`).
    pub fine_h: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seeds: 100,
            corrupt_delta: false,
            proof_chain_only: false,
            audit: true,
            audit_config: EstimatorConfig { restarts: 4, max_iters: 200, ..Default::default() },
            fine_h: 0.02,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub target: String,
    pub value: f64,
    /// Pass when `value <= threshold` (or `>=` for lower targets).
    pub threshold: f64,
    pub lower_is_better: bool,
    pub passed: bool,
}

impl VerifyCheck {
    fn at_most(name: &str, target: impl Into<String>, value: f64, threshold: f64) -> Self {
        VerifyCheck {
            name: name.into(),
            target: target.into(),
            value,
            threshold,
            lower_is_better: true,
            passed: value <= threshold,
        }
    }

    fn at_least(name: &str, target: impl Into<String>, value: f64, threshold: f64) -> Self {
        VerifyCheck {
            name: name.into(),
            target: target.into(),
            value,
            threshold,
            lower_is_better: false,
            passed: value >= threshold,
        }
    }
}

/// Worst residual of one proof step over all seeds of a pair and triple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofStepRow {
    pub pair: String,
    pub exponents: YoungExponents,
    pub step: String,
    pub worst_residual: f64,
    pub instances: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<VerifyCheck>,
    pub proof_chain: Vec<ProofStepRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    /// Name of the first failing check, in battery order.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(c) = self.checks.iter().find(|c| !c.passed) {
            return Some(format!("{} [{}]", c.name, c.target));
        }
        self.proof_chain.iter().find(|r| !r.passed).map(|r| format!("proof_chain:{} [{} {}]", r.step, r.pair, r.exponents))
    }
}

/// `Z/6 ⊃ {0,3}`, `Aff(F5) ⊃ translations`, `Aff(F5) ⊃ dilations`.
pub fn finite_pairs(corrupt: bool) -> Result<Vec<SubgroupPair>> {
    let z6 = GroupModel::cyclic(6)?.into_arc();
    let a5 = GroupModel::affine_fq(5)?.into_arc();
    let pairs = vec![
        build_subgroup_pair(&z6, SubgroupSpec::Elements(vec![0, 3]))?,
        build_subgroup_pair(&a5, SubgroupSpec::affine_fq_translations(5))?,
        build_subgroup_pair(&a5, SubgroupSpec::affine_fq_dilations(5))?,
    ];
    Ok(if corrupt { pairs.iter().map(|p| p.with_corrupted_delta()).collect() } else { pairs })
}

/// The interior triples used throughout: `(4/3, 4/3)`, `(3/2, 3/2)`,
/// `(5/4, 10/7)`.
pub fn battery_triples() -> Vec<YoungExponents> {
    reference_triples().into_iter().take(3).collect()
}

fn random_function(m: &Arc<GroupModel>, seed: u64) -> GroupFunction {
    GroupFunction::random_nonnegative(m.clone(), &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Smooth bump `exp(-((t - t0)^2 + (b - b0)^2) / (2 s^2))` on the affine grid.
pub fn affine_bump(m: &Arc<GroupModel>, t0: f64, b0: f64, s: f64) -> GroupFunction {
    GroupFunction::from_fn(m.clone(), |x| (-((x[0] - t0).powi(2) + (x[1] - b0).powi(2)) / (2.0 * s * s)).exp())
}

/// Proof chain on every finite pair and triple, `seeds` random pairs each.
pub fn proof_chain_trials(pairs: &[SubgroupPair], triples: &[YoungExponents], seeds: u64) -> Result<Vec<ProofStepRow>> {
    let mut out = Vec::new();
    for pair in pairs {
        for ex in triples {
            let runs: Vec<Vec<CheckRow>> = (0..seeds)
                .into_par_iter()
                .map(|seed| -> Result<Vec<CheckRow>> {
                    let m = pair.model();
                    let a = random_function(m, 2 * seed);
                    let b = random_function(m, 2 * seed + 1);
                    let po = build_proof_objects(pair, ex, &a, &b)?;
                    let mut rows = identity_checks(&po)?.rows;
                    rows.extend(chain_check(&po, 1.0)?.steps);
                    Ok(rows)
                })
                .collect::<Result<_>>()?;
            let Some(first) = runs.first() else { continue };
            for (i, row) in first.iter().enumerate() {
                let worst = runs.iter().map(|r| r[i].residual).fold(f64::NEG_INFINITY, f64::max);
                out.push(ProofStepRow {
                    pair: pair.label(),
                    exponents: *ex,
                    step: row.name.clone(),
                    worst_residual: worst,
                    instances: runs.len(),
                    passed: runs.iter().all(|r| r[i].passed),
                });
            }
        }
    }
    Ok(out)
}

fn quotient_checks(opts: &VerifyOptions, checks: &mut Vec<VerifyCheck>) -> Result<()> {
    let pairs = finite_pairs(opts.corrupt_delta)?;
    for pair in &pairs {
        let inv = pair.invariants();
        checks.push(VerifyCheck::at_most("pair_invariants", pair.label(), inv.max(), PAIR_TOLERANCE));
        let worst = (0..opts.seeds.max(1))
            .map(|s| weil_decompose_check(pair, &random_function(pair.model(), 1000 + s)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(VerifyCheck::at_most("weil_decompose", pair.label(), worst, EXACT_TOLERANCE));
        let members = pair.subgroup_elements().unwrap_or(&[]);
        let phi = random_function(pair.model(), 7);
        let mut worst = 0.0f64;
        for &h in members {
            worst = worst.max(left_invariance_check(pair, &phi, h as f64)?);
        }
        checks.push(VerifyCheck::at_most("left_invariance", pair.label(), worst, EXACT_TOLERANCE));
    }

    let fine = GroupModel::make_affine_group(opts.fine_h, opts.fine_h, 3.0, 6.0)?.into_arc();
    let mut tr = build_subgroup_pair(&fine, SubgroupSpec::AffineTranslations)?;
    if opts.corrupt_delta {
        tr = tr.with_corrupted_delta();
    }
    let bump = affine_bump(&fine, 0.1, -0.2, 0.4);
    checks.push(VerifyCheck::at_most("pair_invariants", tr.label(), tr.invariants().max(), PAIR_TOLERANCE));
    checks.push(VerifyCheck::at_most("weil_decompose", tr.label(), weil_decompose_check(&tr, &bump)?, QUADRATURE_TOLERANCE));
    checks.push(VerifyCheck::at_most(
        "left_invariance",
        tr.label(),
        left_invariance_check(&tr, &bump, 0.5)?,
        QUADRATURE_TOLERANCE,
    ));
    Ok(())
}

fn identity_battery(opts: &VerifyOptions, checks: &mut Vec<VerifyCheck>) -> Result<()> {
    let finite = [GroupModel::cyclic(6)?.into_arc(), GroupModel::cyclic(8)?.into_arc(), GroupModel::affine_fq(5)?.into_arc()];
    for m in &finite {
        let worst = (0..10).map(|s| check_modular_identity(&random_function(m, s))).fold(0.0, f64::max);
        checks.push(VerifyCheck::at_most("modular_identity", m.label(), worst, EXACT_TOLERANCE));
        let mut worst = 0.0f64;
        for (i, ex) in battery_triples().iter().enumerate() {
            let a = random_function(m, 100 + 2 * i as u64);
            let b = random_function(m, 101 + 2 * i as u64);
            worst = worst.max(transform_identity_check(&a, &b, ex)?);
        }
        checks.push(VerifyCheck::at_most("transform_identity", m.label(), worst, EXACT_TOLERANCE));
    }
    let fine = GroupModel::make_affine_group(opts.fine_h, opts.fine_h, 3.0, 6.0)?.into_arc();
    let bump = affine_bump(&fine, 0.1, -0.2, 0.3);
    checks.push(VerifyCheck::at_most("modular_identity", fine.label(), check_modular_identity(&bump), QUADRATURE_TOLERANCE));
    let other = affine_bump(&fine, -0.15, 0.25, 0.35);
    let ex = YoungExponents::parse("4/3", "4/3")?;
    checks.push(VerifyCheck::at_most(
        "transform_identity",
        fine.label(),
        transform_identity_check(&bump, &other, &ex)?,
        QUADRATURE_TOLERANCE,
    ));
    Ok(())
}

fn witness_checks(checks: &mut Vec<VerifyCheck>) -> Result<()> {
    let ex = YoungExponents::parse("2", "2")?;
    let ex2 = YoungExponents::parse("3/2", "3")?;
    for m in [GroupModel::cyclic(6)?.into_arc(), GroupModel::affine_fq(5)?.into_arc()] {
        for e in [ex, ex2] {
            let w = boundary_witness(&m, &e)?;
            checks.push(VerifyCheck::at_most(
                "boundary_witness",
                format!("{} {e}", m.label()),
                (w.ratio - 1.0).abs(),
                EXACT_TOLERANCE,
            ));
        }
    }
    let aff = GroupModel::make_affine_group(0.05, 0.05, 2.0, 3.0)?.into_arc();
    let w = boundary_witness(&aff, &ex)?;
    checks.push(VerifyCheck::at_least("boundary_witness", format!("{} {ex}", aff.label()), w.ratio, 1.0 - QUADRATURE_TOLERANCE));
    Ok(())
}

/// Pairs of the subgroup audit: the coarse affine grid against `R` and
/// against its own exact value, the plane against `R` (and at least
/// `0.97·Y(R^2)`), and `Z/8` against the trivial group.
pub fn audit_pairs(cfg: &EstimatorConfig) -> Result<Vec<AuditPair>> {
    let aff = GroupModel::make_affine_group(0.25, 0.25, 1.5, 2.0)?.into_arc();
    let plane = GroupModel::make_real_plane(0.25, 3.0)?.into_arc();
    let y2 = beckner_y_rn(&YoungExponents::parse("4/3", "4/3")?, 2);
    let pair = |model: &Arc<GroupModel>, sub: &str, tol: f64, lo: Option<(f64, f64)>| AuditPair {
        model: model.clone(),
        subgroup: sub.into(),
        tol,
        min_fraction_of: lo,
        config: cfg.clone(),
    };
    Ok(vec![
        pair(&aff, "R", AUDIT_TOLERANCE, None),
        pair(&aff, "Aff+", AUDIT_TOLERANCE, None),
        pair(&plane, "R", AUDIT_TOLERANCE, Some((0.97, y2))),
        pair(&GroupModel::cyclic(8)?.into_arc(), "trivial", 1e-9, None),
    ])
}

/// Runs the battery.
pub fn run_battery(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    if !opts.proof_chain_only {
        identity_battery(opts, &mut checks)?;
        quotient_checks(opts, &mut checks)?;
        witness_checks(&mut checks)?;
        let cat = catalog_consistency_check(&Catalog::shipped());
        checks.push(VerifyCheck::at_most("catalog_consistency", "shipped", cat.violations.len() as f64, 0.0));
        let draws = classical_young_draws(200, 11)?;
        checks.push(VerifyCheck::at_most("classical_young", format!("{} draws", draws.draws), draws.max_ratio, 1.0 + 1e-9));
        if opts.audit {
            let ex = YoungExponents::parse("4/3", "4/3")?;
            for row in monotonicity_audit(&audit_pairs(&opts.audit_config)?, &ex)?.rows {
                let target = format!("{} vs {} ({})", row.group, row.subgroup, row.reference_source);
                checks.push(VerifyCheck::at_most("subgroup_audit", target.clone(), row.estimate, row.reference + row.tol));
                if let Some(lo) = row.lower_target {
                    checks.push(VerifyCheck::at_least("subgroup_audit_floor", target, row.estimate, lo));
                }
            }
        }
    }
    let proof_chain = proof_chain_trials(&finite_pairs(opts.corrupt_delta)?, &battery_triples(), opts.seeds)?;
    Ok(VerifyReport { options: opts.clone(), checks, proof_chain })
}

#[derive(Clone, Debug, Serialize)]
pub struct DrawSummary {
    pub draws: usize,
    pub max_ratio: f64,
    pub worst: String,
}

const DRAW_EXPONENTS: [&str; 9] = ["1", "6/5", "5/4", "4/3", "3/2", "2", "3", "4", "inf"];

/// Young ratios of random nonnegative pairs on random small models and
/// random admissible triples (boundary ones included).
pub fn classical_young_draws(count: usize, seed: u64) -> Result<DrawSummary> {
    let models: Vec<Arc<GroupModel>> = vec![
        GroupModel::cyclic(2)?.into_arc(),
        GroupModel::cyclic(7)?.into_arc(),
        GroupModel::cyclic(12)?.into_arc(),
        GroupModel::affine_fq(3)?.into_arc(),
        GroupModel::affine_fq(5)?.into_arc(),
        GroupModel::product(&GroupModel::cyclic(2)?, &GroupModel::affine_fq(3)?)?.into_arc(),
        GroupModel::torus(16)?.into_arc(),
        GroupModel::make_real_line(0.25, 2.0)?.into_arc(),
        GroupModel::make_real_plane(0.5, 1.5)?.into_arc(),
        GroupModel::make_affine_group(0.5, 0.5, 1.0, 1.5)?.into_arc(),
    ];
    let exps: Vec<Exponent> = DRAW_EXPONENTS.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let results: Vec<(f64, String)> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(f64, String)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let m = models.choose(&mut rng).expect("nonempty");
            let ex = loop {
                let (a, b) = (*exps.choose(&mut rng).unwrap(), *exps.choose(&mut rng).unwrap());
                if let Ok(ex) = YoungExponents::new(a, b) {
                    break ex;
                }
            };
            let sparse = rng.gen_bool(0.3);
            let draw = |rng: &mut ChaCha8Rng| loop {
                let v: Vec<f64> =
                    (0..m.len()).map(|_| if sparse && rng.gen_bool(0.7) { 0.0 } else { rng.gen::<f64>() }).collect();
                if v.iter().any(|&x| x > 0.0) {
                    break GroupFunction::new(m.clone(), v);
                }
            };
            let a = draw(&mut rng)?;
            let b = draw(&mut rng)?;
            Ok((young_ratio(&a, &b, &ex)?, format!("{} {ex}", m.label())))
        })
        .collect::<Result<_>>()?;
    let (max_ratio, worst) = results.into_iter().fold((0.0, String::new()), |acc, r| if r.0 > acc.0 { r } else { acc });
    Ok(DrawSummary { draws: count, max_ratio, worst })
}
