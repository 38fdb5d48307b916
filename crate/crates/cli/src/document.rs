//! The report envelope shared by every command, and its JSON/CSV renderings.

use cube_mu::bounds::ConjectureRecord;
use cube_mu::quartic::{BoundSet, MuEstimate};
use cube_mu::report::{BoundReport, Check, Severity};
use cube_mu::sphere::SphereTableRow;
use cube_mu::verify::SuiteReport;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub config: ConfigEcho,
    pub results: Payload,
    /// Sorted, deduplicated provenance tags of every check in `results`.
    pub provenance: Vec<String>,
}

/// The flags that can influence output. `--threads` is deliberately absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub format: String,
    pub seed: u64,
    pub starts: usize,
    pub iters: usize,
    pub tol: f64,
    pub dense_cap: u32,
    pub exact_limit: usize,
    /// Command arguments, in the order given on the command line.
    pub args: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    Analysis(Box<Analysis>),
    SphereTable(SphereTable),
    Scan(Vec<ConjectureRecord>),
    Verify(SuiteReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub n: u32,
    pub size: usize,
    #[serde(with = "cube_mu::rational::big_int")]
    pub energy: BigInt,
    #[serde(with = "cube_mu::rational")]
    pub energy_ratio: BigRational,
    pub multiplicity_bound: u64,
    pub mu_lower: MuEstimate,
    pub mu_upper: BoundSet,
    pub hereditary: Hereditary,
    pub uncertainty: Option<Uncertainty>,
    pub reports: Vec<BoundReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hereditary {
    /// Elements of the best subset, as set-file bitstrings.
    pub best: Vec<String>,
    #[serde(with = "cube_mu::rational::big_int")]
    pub energy: BigInt,
    #[serde(with = "cube_mu::rational")]
    pub ratio: BigRational,
    pub exact: bool,
}

/// Support sizes of the function synthesized from the `mu_lower` certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uncertainty {
    pub support: usize,
    pub spectrum_support: usize,
    pub product: u128,
    pub cube_size: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereTable {
    pub n: u32,
    pub k: u32,
    #[serde(flatten)]
    pub rows: TableRows,
    pub footer: Footer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "values", content = "rows", rename_all = "lowercase")]
pub enum TableRows {
    Exact(Vec<SphereTableRow>),
    Float(Vec<FloatRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatRow {
    pub t: u32,
    pub s_t: f64,
    pub ratio_to_prev: Option<f64>,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footer {
    #[serde(with = "cube_mu::rational")]
    pub r: BigRational,
    pub r_float: f64,
    pub t1: f64,
    pub argmax: Option<u32>,
    pub psi: Option<f64>,
    pub psi_bound: Option<f64>,
}

impl ReportDocument {
    pub fn new(command: &str, config: ConfigEcho, results: Payload) -> Self {
        let provenance = results
            .checks()
            .map(|c| c.provenance.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            config,
            results,
            provenance,
        }
    }

    /// False when any hard check in the payload failed.
    pub fn passed(&self) -> bool {
        match &self.results {
            Payload::Verify(s) => s.passed,
            _ => self
                .results
                .checks()
                .all(|c| c.passed || c.severity == Severity::Soft),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        // the analysis layout mixes a field table with a check table
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        match &self.results {
            Payload::Analysis(a) => {
                w.write_record(["field", "value"])?;
                let fields = [
                    ("n", a.n.to_string()),
                    ("size", a.size.to_string()),
                    ("energy", a.energy.to_string()),
                    ("energy_ratio", cube_mu::rational::to_string(&a.energy_ratio)),
                    ("multiplicity_bound", a.multiplicity_bound.to_string()),
                    ("mu_lower", a.mu_lower.value.to_string()),
                    ("mu_lower_converged", a.mu_lower.converged.to_string()),
                    ("mu_upper", a.mu_upper.best.to_string()),
                    ("hereditary_ratio", cube_mu::rational::to_string(&a.hereditary.ratio)),
                    ("hereditary_size", a.hereditary.best.len().to_string()),
                    ("hereditary_exact", a.hereditary.exact.to_string()),
                ];
                for (k, v) in fields {
                    w.write_record([k, v.as_str()])?;
                }
                if let Some(u) = &a.uncertainty {
                    w.write_record(["support", &u.support.to_string()])?;
                    w.write_record(["spectrum_support", &u.spectrum_support.to_string()])?;
                }
                w.write_record([""; 2])?;
                write_checks(&mut w, &a.reports)?;
            }
            Payload::Verify(s) => write_checks(&mut w, &s.reports)?,
            Payload::Scan(records) => {
                w.write_record(["n", "k", "mu_est", "energy_ratio", "gap", "upper_gap", "status"])?;
                for r in records {
                    let status = serde_json::to_value(r.status)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default();
                    w.write_record([
                        r.n.to_string(),
                        r.k.to_string(),
                        r.mu_est.to_string(),
                        cube_mu::rational::to_string(&r.energy_ratio),
                        r.gap.to_string(),
                        r.upper_gap.to_string(),
                        status,
                    ])?;
                }
            }
            Payload::SphereTable(t) => {
                w.write_record(["kind", "t", "s_t", "ratio_to_prev", "cumulative"])?;
                match &t.rows {
                    TableRows::Exact(rows) => {
                        for r in rows {
                            w.write_record([
                                "row".to_string(),
                                r.t.to_string(),
                                cube_mu::rational::to_string(&r.s_t),
                                r.ratio_to_prev.as_ref().map(cube_mu::rational::to_string).unwrap_or_default(),
                                cube_mu::rational::to_string(&r.cumulative),
                            ])?;
                        }
                    }
                    TableRows::Float(rows) => {
                        for r in rows {
                            w.write_record([
                                "row".to_string(),
                                r.t.to_string(),
                                r.s_t.to_string(),
                                r.ratio_to_prev.map(|x| x.to_string()).unwrap_or_default(),
                                r.cumulative.to_string(),
                            ])?;
                        }
                    }
                }
                let f = &t.footer;
                let opt = |x: Option<String>| x.unwrap_or_default();
                let footer = [
                    ("r", cube_mu::rational::to_string(&f.r)),
                    ("r_float", f.r_float.to_string()),
                    ("t1", f.t1.to_string()),
                    ("argmax", opt(f.argmax.map(|x| x.to_string()))),
                    ("psi", opt(f.psi.map(|x| x.to_string()))),
                    ("psi_bound", opt(f.psi_bound.map(|x| x.to_string()))),
                ];
                // footer rows reuse the columns as (kind, name, value)
                for (name, value) in footer {
                    w.write_record(["footer", name, value.as_str(), "", ""])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn write_checks(w: &mut csv::Writer<Vec<u8>>, reports: &[BoundReport]) -> csv::Result<()> {
    w.write_record([
        "subject", "check", "lhs", "relation", "rhs", "passed", "severity", "provenance",
    ])?;
    for r in reports {
        for c in &r.checks {
            let Check {
                name,
                lhs,
                relation,
                rhs,
                passed,
                severity,
                provenance,
                ..
            } = c;
            let severity = match severity {
                Severity::Hard => "hard",
                Severity::Soft => "soft",
            };
            w.write_record([
                r.subject.as_str(),
                name,
                &lhs.to_string(),
                relation.symbol(),
                &rhs.to_string(),
                if *passed { "true" } else { "false" },
                severity,
                provenance,
            ])?;
        }
    }
    Ok(())
}

impl Payload {
    fn checks(&self) -> Box<dyn Iterator<Item = &Check> + '_> {
        let reports: &[BoundReport] = match self {
            Payload::Analysis(a) => &a.reports,
            Payload::Verify(s) => &s.reports,
            _ => &[],
        };
        Box::new(reports.iter().flat_map(|r| r.checks.iter()))
    }
}
