//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines are printed on success as well.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use haar_young::catalog::{catalog_consistency_check, Catalog};
use haar_young::constants::{beckner_y_rn, boundary_value};
use haar_young::convolution::transform_identity_check;
use haar_young::estimator::{
    boundary_witness, estimate, gaussian_ansatz, monotonicity_audit, refinement_study, EstimatorConfig, DEFAULT_LOG_WIDTH_RANGE,
};
use haar_young::exponents::YoungExponents;
use haar_young::groups::{GroupFunction, GroupModel};
use haar_young::quotient::{build_subgroup_pair, weil_decompose_check, SubgroupSpec};
use haar_young::report::exact_report;
use haar_young::verify::{
    affine_bump, audit_pairs, battery_triples, classical_young_draws, finite_pairs, proof_chain_trials, VerifyOptions,
};
use haar_young::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn ex(a: &str, b: &str) -> YoungExponents {
    YoungExponents::parse(a, b).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn c1() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for e in [ex("4/3", "4/3"), ex("3/2", "3/2"), ex("5/4", "10/7")] {
        let t = Instant::now();
        let fit = gaussian_ansatz(&e, DEFAULT_LOG_WIDTH_RANGE)?;
        let dt = t.elapsed();
        let y = beckner_y_rn(&e, 1);
        let err = (fit.ratio - y).abs();
        passed &= err <= 1e-6 && dt < Duration::from_secs(1);
        parts.push(format!("{e}: ansatz {:.10} closed form {y:.10} err {err:.1e} in {}", fit.ratio, secs(dt)));
    }
    Ok(Outcome { passed, detail: parts.join("; ") })
}

fn c2() -> Result<Outcome> {
    let t = Instant::now();
    let d = classical_young_draws(1000, 2024)?;
    let dt = t.elapsed();
    Ok(Outcome {
        passed: d.max_ratio <= 1.0 + 1e-9 && dt < Duration::from_secs(30),
        detail: format!("{} draws, max ratio {:.12} ({}) in {}", d.draws, d.max_ratio, d.worst, secs(dt)),
    })
}

fn c3() -> Result<Outcome> {
    let t = Instant::now();
    let cfg = EstimatorConfig::default();
    let mut worst = 0.0f64;
    for m in [GroupModel::cyclic(8)?.into_arc(), GroupModel::affine_fq(5)?.into_arc()] {
        for e in battery_triples() {
            worst = worst.max((estimate(&m, &e, &cfg)?.lower_bound - 1.0).abs());
        }
    }
    let dt = t.elapsed();
    Ok(Outcome {
        passed: worst <= 1e-6 && dt < Duration::from_secs(10),
        detail: format!("Z/8 and Aff(F5), 3 triples: max |estimate - 1| = {worst:.2e} in {}", secs(dt)),
    })
}

fn c4() -> Result<Outcome> {
    let boundary = [ex("1", "3"), ex("5/2", "1"), ex("3/2", "3"), ex("4", "4/3"), ex("1", "1"), ex("2", "2")];
    let values_ok = boundary.iter().all(|e| boundary_value(e) == Some(1.0)) && boundary_value(&ex("4/3", "4/3")).is_none();
    let mut finite_worst = 0.0f64;
    for m in [GroupModel::cyclic(6)?.into_arc(), GroupModel::cyclic(8)?.into_arc(), GroupModel::affine_fq(5)?.into_arc()] {
        for e in [ex("2", "2"), ex("3/2", "3"), ex("4", "4/3")] {
            finite_worst = finite_worst.max((boundary_witness(&m, &e)?.ratio - 1.0).abs());
        }
    }
    let aff = GroupModel::make_affine_group(0.05, 0.05, 2.0, 3.0)?.into_arc();
    let aff_ratio = boundary_witness(&aff, &ex("2", "2"))?.ratio;
    Ok(Outcome {
        passed: values_ok && finite_worst <= 1e-12 && aff_ratio >= 1.0 - 1e-3,
        detail: format!(
            "boundary values {}; finite witnesses max |ratio - 1| = {finite_worst:.1e}; affine grid witness ratio {aff_ratio:.6}",
            if values_ok { "all 1" } else { "wrong" }
        ),
    })
}

fn c5() -> Result<Outcome> {
    let t = Instant::now();
    let e = ex("4/3", "4/3");
    let cfg = EstimatorConfig { restarts: 4, max_iters: 300, ..Default::default() };
    let r = refinement_study(&e, &[(0.2, 4.0), (0.1, 6.0), (0.05, 8.0)], &cfg)?;
    let dt = t.elapsed();
    let values: Vec<f64> = r.levels.iter().map(|l| l.lower_bound).collect();
    let last = *values.last().unwrap();
    let cap = 0.87742 + 1e-3;
    let passed = r.nondecreasing
        && (0.86..=cap).contains(&last)
        && values.iter().all(|&v| v <= r.beckner + 1e-3)
        && dt < Duration::from_secs(300);
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    Ok(Outcome { passed, detail: format!("levels [{}] vs Beckner {:.6} in {}", shown.join(", "), r.beckner, secs(dt)) })
}

fn c6() -> Result<Outcome> {
    let t = Instant::now();
    let e = ex("4/3", "4/3");
    let report = monotonicity_audit(&audit_pairs(&VerifyOptions::default().audit_config)?, &e)?;
    let dt = t.elapsed();
    let parts: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{} vs {}: {:.6} <= {:.6}", r.group, r.subgroup, r.estimate, r.reference + r.tol))
        .collect();
    Ok(Outcome {
        passed: report.passed() && dt < Duration::from_secs(600),
        detail: format!("{} in {}", parts.join("; "), secs(dt)),
    })
}

fn c7() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for pair in finite_pairs(false)? {
        let mut worst = 0.0f64;
        for seed in 0..100 {
            let phi = GroupFunction::random_nonnegative(pair.model().clone(), &mut ChaCha8Rng::seed_from_u64(seed));
            worst = worst.max(weil_decompose_check(&pair, &phi)?);
        }
        passed &= worst <= 1e-12;
        parts.push(format!("{}: {worst:.1e}", pair.label()));
    }
    let fine = GroupModel::make_affine_group(0.02, 0.02, 3.0, 6.0)?.into_arc();
    let tr = build_subgroup_pair(&fine, SubgroupSpec::AffineTranslations)?;
    let mut worst = 0.0f64;
    for (t0, b0, s) in [(0.1, -0.2, 0.4), (-0.3, 0.5, 0.3), (0.0, 0.0, 0.5)] {
        worst = worst.max(weil_decompose_check(&tr, &affine_bump(&fine, t0, b0, s))?);
    }
    passed &= worst <= 1e-3;
    parts.push(format!("affine grid h=0.02 > translations: {worst:.1e}"));
    Ok(Outcome { passed, detail: parts.join("; ") })
}

fn c8() -> Result<Outcome> {
    let t = Instant::now();
    let rows = proof_chain_trials(&finite_pairs(false)?, &battery_triples(), 100)?;
    let failing = rows.iter().filter(|r| !r.passed).count();
    let worst = rows.iter().map(|r| r.worst_residual).fold(f64::NEG_INFINITY, f64::max);
    let bad = proof_chain_trials(&finite_pairs(true)?, &battery_triples(), 100)?;
    let caught = bad.iter().filter(|r| !r.passed).count();
    Ok(Outcome {
        passed: failing == 0 && caught > 0,
        detail: format!(
            "{} step rows x 100 seeds, {failing} failing, worst residual {worst:.1e}; corrupted delta fails {caught} rows; {}",
            rows.len(),
            secs(t.elapsed())
        ),
    })
}

fn c9() -> Result<Outcome> {
    let mut finite_worst = 0.0f64;
    for m in [GroupModel::cyclic(6)?.into_arc(), GroupModel::cyclic(8)?.into_arc(), GroupModel::affine_fq(5)?.into_arc()] {
        for (i, e) in battery_triples().iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let a = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            let b = GroupFunction::random_nonnegative(m.clone(), &mut rng);
            finite_worst = finite_worst.max(transform_identity_check(&a, &b, e)?);
        }
    }
    let fine = GroupModel::make_affine_group(0.02, 0.02, 3.0, 6.0)?.into_arc();
    let affine =
        transform_identity_check(&affine_bump(&fine, 0.1, -0.2, 0.3), &affine_bump(&fine, -0.15, 0.25, 0.35), &ex("4/3", "4/3"))?;
    let cfg = EstimatorConfig { restarts: 4, max_iters: 300, ..Default::default() };
    let mut sym = 0.0f64;
    for m in [GroupModel::cyclic(8)?.into_arc(), GroupModel::make_real_line(0.1, 4.0)?.into_arc()] {
        let a = estimate(&m, &ex("5/4", "10/7"), &cfg)?.lower_bound;
        let b = estimate(&m, &ex("10/7", "5/4"), &cfg)?.lower_bound;
        sym = sym.max((a - b).abs());
    }
    Ok(Outcome {
        passed: finite_worst <= 1e-12 && affine <= 1e-3 && sym <= 2.0 * cfg.tol,
        detail: format!("finite residual {finite_worst:.1e}; affine grid {affine:.1e}; estimator asymmetry {sym:.1e}"),
    })
}

fn c10() -> Result<Outcome> {
    let cat = Catalog::shipped();
    let report = catalog_consistency_check(&cat);
    let e = ex("4/3", "4/3");
    let sl2 = exact_report(&cat, "SL2R", &e)?.corollary_bound.unwrap_or(f64::NAN);
    let y2 = beckner_y_rn(&e, 1).powi(2);
    Ok(Outcome {
        passed: report.violations.is_empty() && (sl2 - y2).abs() <= 1e-12,
        detail: format!(
            "{} entries, {} links, {} bound checks, {} violations; SL2(R) bound {sl2:.10} = Y(R)^2 {y2:.10}",
            report.entries,
            report.links_checked,
            report.bound_checks,
            report.violations.len()
        ),
    })
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Beckner closed form vs Gaussian optimizer", c1),
        ("classical Young on random draws", c2),
        ("compact saturation", c3),
        ("boundary cases", c4),
        ("real-line convergence", c5),
        ("subgroup monotonicity audit", c6),
        ("Weil formula", c7),
        ("proof chain", c8),
        ("transform identity and estimator symmetry", c9),
        ("catalog consistency", c10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (passed, detail) = match f() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if passed { "PASS" } else { "FAIL" });
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria fail");
        ExitCode::FAILURE
    }
}
