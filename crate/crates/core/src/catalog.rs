//! Catalog of connected Lie groups with their dimension and the dimension
//! `r` of a maximal compact subgroup.
//!
//! `r` values and class-A membership are stored data, not derived. A link
//! `(H, Q)` records a decomposition with `dim G = dim H + dim Q` and
//! `r(G) = r(H) + r(Q)`: a normal subgroup with its quotient, or an
//! Iwasawa-type factorisation `G = K·(AN)` (`relation = "iwasawa"`).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{corollary_bound, nielsen_exact};
use crate::error::{Error, Result};
use crate::exponents::YoungExponents;

const SHIPPED: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFlags {
    pub solvable: bool,
    pub nilpotent: bool,
    pub simply_connected: bool,
    pub unimodular: bool,
    pub compact: bool,
    /// Connected with finite center of the semisimple part. Not verified.
    #[serde(rename = "in_class_A")]
    pub in_class_a: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactValueRule {
    #[default]
    None,
    CompactOne,
    NielsenPower,
    BecknerRn,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkRelation {
    #[default]
    Normal,
    Iwasawa,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub normal_subgroup: String,
    pub quotient: String,
    #[serde(default)]
    pub relation: LinkRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieGroupDescriptor {
    pub name: String,
    pub dim: u32,
    pub r: u32,
    pub flags: GroupFlags,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<Link>,
    #[serde(default)]
    pub exact_value_rule: ExactValueRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog {
    pub entries: Vec<LieGroupDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub group: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub entries: usize,
    pub links_checked: usize,
    pub bound_checks: usize,
    pub violations: Vec<Violation>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Catalog {
    pub fn shipped() -> Self {
        Self::from_json(SHIPPED).expect("shipped catalog parses")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, name: &str) -> Result<&LieGroupDescriptor> {
        self.entries.iter().find(|d| d.name == name).ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|d| d.name.as_str())
    }
}

/// Triples used when checking bound ordering across the catalog.
pub fn reference_triples() -> Vec<YoungExponents> {
    [("4/3", "4/3"), ("3/2", "3/2"), ("5/4", "10/7"), ("6/5", "3/2")]
        .iter()
        .map(|(a, b)| YoungExponents::parse(a, b).expect("reference triple"))
        .collect()
}

/// Structural checks on every entry and link, plus `exact <= corollary bound <= 1`
/// at the [`reference_triples`]. Unresolved names are reported, not fatal.
pub fn catalog_consistency_check(catalog: &Catalog) -> ConsistencyReport {
    let mut rep = ConsistencyReport { entries: catalog.entries.len(), ..Default::default() };
    let mut v = |group: &str, check: &'static str, detail: String| {
        rep.violations.push(Violation { group: group.to_string(), check, detail });
    };
    let by_name: BTreeMap<&str, &LieGroupDescriptor> = catalog.entries.iter().map(|d| (d.name.as_str(), d)).collect();
    let mut seen = BTreeSet::new();
    let triples = reference_triples();
    let mut links_checked = 0;
    let mut bound_checks = 0;

    for d in &catalog.entries {
        if !seen.insert(d.name.as_str()) {
            v(&d.name, "unique_name", "duplicate entry".into());
        }
        if d.r > d.dim {
            v(&d.name, "r_le_dim", format!("r = {} > dim = {}", d.r, d.dim));
        }
        if d.flags.compact && d.r != d.dim {
            v(&d.name, "compact_r_eq_dim", format!("compact but r = {} != dim = {}", d.r, d.dim));
        }
        if d.flags.nilpotent && !d.flags.solvable {
            v(&d.name, "nilpotent_solvable", "nilpotent but not solvable".into());
        }
        if (d.flags.compact || d.flags.nilpotent) && !d.flags.unimodular {
            v(&d.name, "unimodular", "compact or nilpotent groups are unimodular".into());
        }
        if d.exact_value_rule == ExactValueRule::CompactOne && d.r != d.dim {
            v(&d.name, "exact_rule", "compact_one rule on a non-compact dimension".into());
        }

        for link in &d.links {
            links_checked += 1;
            let (Some(h), Some(q)) = (by_name.get(link.normal_subgroup.as_str()), by_name.get(link.quotient.as_str())) else {
                v(&d.name, "link_resolves", format!("unresolved link ({}, {})", link.normal_subgroup, link.quotient));
                continue;
            };
            if h.dim + q.dim != d.dim {
                v(&d.name, "dim_additive", format!("{} + {} != {}", h.dim, q.dim, d.dim));
            }
            if h.r + q.r != d.r {
                v(&d.name, "r_additive", format!("r: {} + {} != {}", h.r, q.r, d.r));
            }
        }

        if !d.flags.in_class_a {
            continue;
        }
        for t in &triples {
            bound_checks += 1;
            let bound = match corollary_bound(d, t) {
                Ok(b) => b,
                Err(e) => {
                    v(&d.name, "corollary_bound", e.to_string());
                    continue;
                }
            };
            if !(bound > 0.0 && bound <= 1.0) {
                v(&d.name, "bound_in_unit_interval", format!("{bound} at {t}"));
            }
            if let Some(exact) = nielsen_exact(d, t) {
                if exact > bound + 1e-12 {
                    v(&d.name, "exact_le_bound", format!("{exact} > {bound} at {t}"));
                }
            }
        }
    }
    rep.links_checked = links_checked;
    rep.bound_checks = bound_checks;
    rep
}
