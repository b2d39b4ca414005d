//! Output formats: pretty JSON, RFC 4180 CSV with a header row, and aligned
//! text tables built from the same rows as the CSV.

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, ConsistencyReport};
use crate::constants::{beckner_b, beckner_y_rn, boundary_value, corollary_bound, neg_log_constant, nielsen_exact};
use crate::error::{Error, Result};
use crate::estimator::EstimateReport;
use crate::exponents::YoungExponents;
use crate::verify::VerifyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Domain(format!("unknown format `{s}` (json, csv, text)"))),
        }
    }
}

/// Closed-form values for one triple and one catalog group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactReport {
    pub group: String,
    pub dim: u32,
    pub r: u32,
    pub exponents: YoungExponents,
    /// `[B(p1), B(p2), B(p)]`.
    pub beckner_b: [f64; 3],
    /// `Y(p1, p2; R)`.
    pub y_real_line: f64,
    pub boundary_value: Option<f64>,
    pub corollary_bound: Option<f64>,
    /// Why the corollary bound does not apply, if it does not.
    pub corollary_note: Option<String>,
    pub exact_value: Option<f64>,
    pub neg_log_y_real_line: f64,
    pub neg_log_corollary_bound: Option<f64>,
    pub neg_log_exact_value: Option<f64>,
}

impl ExactReport {
    /// The exact value when known, otherwise the corollary bound.
    pub fn headline(&self) -> Option<f64> {
        self.boundary_value.or(self.exact_value).or(self.corollary_bound)
    }
}

pub fn exact_report(catalog: &Catalog, group: &str, ex: &YoungExponents) -> Result<ExactReport> {
    let d = catalog.get(group)?;
    let (corollary, note) = match corollary_bound(d, ex) {
        Ok(y) => (Some(y), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let exact = nielsen_exact(d, ex);
    let y1 = beckner_y_rn(ex, 1);
    Ok(ExactReport {
        group: d.name.clone(),
        dim: d.dim,
        r: d.r,
        exponents: *ex,
        beckner_b: [beckner_b(ex.p1), beckner_b(ex.p2), beckner_b(ex.p)],
        y_real_line: y1,
        boundary_value: boundary_value(ex),
        corollary_bound: corollary,
        corollary_note: note,
        exact_value: exact,
        neg_log_y_real_line: neg_log_constant(y1)?,
        neg_log_corollary_bound: corollary.map(neg_log_constant).transpose()?,
        neg_log_exact_value: exact.map(neg_log_constant).transpose()?,
    })
}

/// A flat table view shared by the CSV and text renderings.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

/// Same digits as the JSON output.
fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float serializes")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Tabular for ExactReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["quantity", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let ex = &self.exponents;
        let mut v = vec![
            vec!["group".into(), self.group.clone()],
            vec!["dim".into(), self.dim.to_string()],
            vec!["r".into(), self.r.to_string()],
            vec!["p1".into(), ex.p1.to_string()],
            vec!["p2".into(), ex.p2.to_string()],
            vec!["p".into(), ex.p.to_string()],
            vec!["beckner_b_p1".into(), num(self.beckner_b[0])],
            vec!["beckner_b_p2".into(), num(self.beckner_b[1])],
            vec!["beckner_b_p".into(), num(self.beckner_b[2])],
            vec!["y_real_line".into(), num(self.y_real_line)],
            vec!["neg_log_y_real_line".into(), num(self.neg_log_y_real_line)],
            vec!["boundary_value".into(), opt(self.boundary_value)],
            vec!["corollary_bound".into(), opt(self.corollary_bound)],
            vec!["neg_log_corollary_bound".into(), opt(self.neg_log_corollary_bound)],
            vec!["exact_value".into(), opt(self.exact_value)],
            vec!["neg_log_exact_value".into(), opt(self.neg_log_exact_value)],
        ];
        if let Some(n) = &self.corollary_note {
            v.push(vec!["corollary_note".into(), n.clone()]);
        }
        v
    }
}

impl Tabular for EstimateReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "group",
            "p1",
            "p2",
            "p",
            "restart",
            "final_ratio",
            "iterations",
            "converged",
            "reinitializations",
            "warm_start",
            "best",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let ex = &self.exponents;
        self.restarts
            .iter()
            .map(|r| {
                vec![
                    self.group.clone(),
                    ex.p1.to_string(),
                    ex.p2.to_string(),
                    ex.p.to_string(),
                    r.index.to_string(),
                    num(r.final_ratio),
                    r.iterations.to_string(),
                    r.converged.to_string(),
                    r.reinitializations.to_string(),
                    r.warm_start.to_string(),
                    (r.index == self.best_restart).to_string(),
                ]
            })
            .collect()
    }
}

impl Tabular for VerifyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["section", "name", "target", "value", "threshold", "passed"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                let cmp = if c.lower_is_better { "<=" } else { ">=" };
                vec![
                    "check".into(),
                    c.name.clone(),
                    c.target.clone(),
                    num(c.value),
                    format!("{cmp} {}", num(c.threshold)),
                    c.passed.to_string(),
                ]
            })
            .collect();
        for r in &self.proof_chain {
            v.push(vec![
                "proof_chain".into(),
                r.step.clone(),
                format!("{} {} x{}", r.pair, r.exponents, r.instances),
                num(r.worst_residual),
                format!("<= {}", num(crate::proof::CHAIN_TOLERANCE)),
                r.passed.to_string(),
            ]);
        }
        v
    }
}

impl Tabular for ConsistencyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["group", "check", "detail"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.violations.iter().map(|v| vec![v.group.clone(), v.check.to_string(), v.detail.clone()]).collect()
    }
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(t: &dyn Tabular) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(t.header())?;
    for row in t.rows() {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_text(t: &dyn Tabular) -> String {
    let header: Vec<String> = t.header().iter().map(|s| s.to_string()).collect();
    let rows = t.rows();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = line(&header);
    out.push('\n');
    for r in &rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

/// Renders `v` in `format`.
pub fn render<T: Serialize + Tabular>(v: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(v),
        Format::Csv => to_csv(v),
        Format::Text => Ok(to_text(v)),
    }
}

/// A saved report of any kind, recognized by its fields.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SavedReport {
    Estimate(Box<EstimateReport>),
    Verify(Box<VerifyReport>),
    Exact(Box<ExactReport>),
}

impl SavedReport {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match self {
            SavedReport::Estimate(r) => render(r.as_ref(), format),
            SavedReport::Verify(r) => render(r.as_ref(), format),
            SavedReport::Exact(r) => render(r.as_ref(), format),
        }
    }
}
