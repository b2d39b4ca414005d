//! Estimates on a group against the constant of a closed subgroup.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{estimate, EstimatorConfig};
use crate::catalog::Catalog;
use crate::constants::{corollary_bound, nielsen_exact};
use crate::error::Result;
use crate::exponents::YoungExponents;
use crate::groups::GroupModel;

/// A group model and a subgroup named in the catalog. The estimate on the
/// group must not exceed the subgroup's constant plus `tol`; `min_ratio`
/// optionally asks for the estimate to reach `min_ratio · reference`.
#[derive(Clone, Debug)]
pub struct AuditPair {
    pub model: Arc<GroupModel>,
    pub subgroup: String,
    pub tol: f64,
    pub min_fraction_of: Option<(f64, f64)>,
    pub config: EstimatorConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditRow {
    pub group: String,
    pub subgroup: String,
    pub estimate: f64,
    pub reference: f64,
    pub reference_source: String,
    pub tol: f64,
    pub lower_target: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub exponents: YoungExponents,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Exact value of the named group when known, else its upper bound.
pub fn subgroup_reference(name: &str, ex: &YoungExponents) -> Result<(f64, String)> {
    let cat = Catalog::shipped();
    let d = cat.get(name)?;
    if let Some(y) = nielsen_exact(d, ex) {
        return Ok((y, format!("exact:{name}")));
    }
    Ok((corollary_bound(d, ex)?, format!("corollary:{name}")))
}

pub fn monotonicity_audit(pairs: &[AuditPair], ex: &YoungExponents) -> Result<AuditReport> {
    let mut rows = Vec::new();
    for pair in pairs {
        let (reference, source) = subgroup_reference(&pair.subgroup, ex)?;
        let rep = estimate(&pair.model, ex, &pair.config)?;
        let lower_target = pair.min_fraction_of.map(|(frac, of)| frac * of);
        let pass = rep.lower_bound <= reference + pair.tol && lower_target.is_none_or(|t| rep.lower_bound >= t);
        rows.push(AuditRow {
            group: pair.model.label().to_string(),
            subgroup: pair.subgroup.clone(),
            estimate: rep.lower_bound,
            reference,
            reference_source: source,
            tol: pair.tol,
            lower_target,
            pass,
        });
    }
    Ok(AuditReport { exponents: *ex, rows })
}
