//! Structured inequality reports.
//!
//! A [`BoundReport`] is a list of named checks `lhs <relation> rhs`. Hard checks
//! decide `overall`; soft checks are diagnostics and never flip it.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Exact(#[serde(with = "crate::rational")] BigRational),
    Integer(#[serde(with = "crate::rational::big_int")] BigInt),
    Float(f64),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational::to_f64(r),
            Value::Integer(i) => rational::to_f64(&BigRational::from_integer(i.clone())),
            Value::Float(x) => *x,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => f.write_str(&rational::to_string(r)),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<BigRational> for Value {
    fn from(r: BigRational) -> Self {
        Value::Exact(r)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Integer(BigInt::from(v))
            }
        }
    )*};
}
int_value!(u32, u64, usize, u128, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "~=")]
    Approx,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
            Relation::Approx => "~=",
        }
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Eq | Relation::Approx => ord == Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hard,
    Soft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: Value,
    pub relation: Relation,
    pub rhs: Value,
    /// Relative slack applied to float comparisons, if any.
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub severity: Severity,
    /// Stable tag naming the claim the check instantiates.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub subject: String,
    pub applicable: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub overall: bool,
}

impl BoundReport {
    pub fn new(subject: impl Into<String>) -> Self {
        BoundReport {
            subject: subject.into(),
            applicable: true,
            checks: Vec::new(),
            notes: Vec::new(),
            overall: true,
        }
    }

    /// A report whose precondition did not hold; it carries no checks.
    pub fn not_applicable(subject: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = BoundReport::new(subject);
        r.applicable = false;
        r.notes.push(why.into());
        r
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn push(&mut self, check: Check) -> bool {
        let passed = check.passed;
        if check.severity == Severity::Hard && !passed {
            self.overall = false;
        }
        self.checks.push(check);
        passed
    }

    /// Exact comparison of two rationals.
    pub fn exact(
        &mut self,
        name: &str,
        lhs: BigRational,
        relation: Relation,
        rhs: BigRational,
        provenance: &str,
    ) -> bool {
        let passed = relation.holds(lhs.cmp(&rhs));
        self.push(Check {
            name: name.into(),
            lhs: Value::Exact(lhs),
            relation,
            rhs: Value::Exact(rhs),
            tolerance: None,
            passed,
            severity: Severity::Hard,
            provenance: provenance.into(),
        })
    }

    /// Exact comparison of two integers.
    pub fn integer(
        &mut self,
        name: &str,
        lhs: impl Into<BigInt>,
        relation: Relation,
        rhs: impl Into<BigInt>,
        provenance: &str,
    ) -> bool {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let passed = relation.holds(lhs.cmp(&rhs));
        self.push(Check {
            name: name.into(),
            lhs: Value::Integer(lhs),
            relation,
            rhs: Value::Integer(rhs),
            tolerance: None,
            passed,
            severity: Severity::Hard,
            provenance: provenance.into(),
        })
    }

    /// Hard float comparison with a relative slack `tol` (absolute near zero).
    pub fn float(
        &mut self,
        name: &str,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: f64,
        provenance: &str,
    ) -> bool {
        let check = float_check(name, lhs, relation, rhs, tol, Severity::Hard, provenance);
        self.push(check)
    }

    /// Report-only float comparison.
    pub fn soft(
        &mut self,
        name: &str,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: f64,
        provenance: &str,
    ) -> bool {
        let check = float_check(name, lhs, relation, rhs, tol, Severity::Soft, provenance);
        self.push(check)
    }

    /// Hard boolean predicate, recorded as `value = 1`.
    pub fn predicate(&mut self, name: &str, ok: bool, provenance: &str) -> bool {
        self.push(Check {
            name: name.into(),
            lhs: Value::from(ok as u32),
            relation: Relation::Eq,
            rhs: Value::from(1u32),
            tolerance: None,
            passed: ok,
            severity: Severity::Hard,
            provenance: provenance.into(),
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| c.severity == Severity::Hard && !c.passed)
    }

    pub fn hard_count(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.severity == Severity::Hard)
            .count()
    }

    /// Appends the checks of `other`, prefixing names with its subject.
    pub fn absorb(&mut self, other: BoundReport) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.subject, c.name);
            self.push(c);
        }
        for n in other.notes {
            self.notes.push(format!("{}: {}", other.subject, n));
        }
    }
}

fn float_check(
    name: &str,
    lhs: f64,
    relation: Relation,
    rhs: f64,
    tol: f64,
    severity: Severity,
    provenance: &str,
) -> Check {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let slack = tol * scale;
    let passed = if lhs.is_nan() || rhs.is_nan() {
        false
    } else {
        match relation {
            Relation::Le => lhs <= rhs + slack,
            Relation::Lt => lhs < rhs + slack,
            Relation::Ge => lhs + slack >= rhs,
            Relation::Gt => lhs + slack > rhs,
            Relation::Eq | Relation::Approx => (lhs - rhs).abs() <= slack,
        }
    };
    Check {
        name: name.into(),
        lhs: Value::Float(lhs),
        relation,
        rhs: Value::Float(rhs),
        tolerance: Some(tol),
        passed,
        severity,
        provenance: provenance.into(),
    }
}
