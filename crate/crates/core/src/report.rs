//! Verification reports.
//!
//! Every identity is checked by building both sides as atomic measures on a
//! finite product space ("cells") and comparing them cell by cell. Agreement
//! on every cell is the same as agreement for every nonnegative test function,
//! since all measures involved are atomic. The residual of an exact check is
//! the L1 distance between the two sides, so `Pass` holds iff it is exactly 0.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    PreconditionFailed,
}

/// A report value: exact for the finite backend, floating point for quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(#[serde(with = "rational::serde_str")] Rational),
    Real(f64),
}

impl Value {
    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Real(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational::to_f64(r),
            Value::Real(x) => *x,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}", rational::format_rational(r)),
            Value::Real(x) => write!(f, "{x:e}"),
        }
    }
}

/// Structured locator of the first failing term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Named indices, e.g. `{"g": 3, "s": 1, "omega": 0}`.
    pub locator: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Value>,
    pub detail: String,
}

impl Witness {
    pub fn new(locator: &[(&str, usize)], detail: impl Into<String>) -> Self {
        Witness {
            locator: locator.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs: None,
            rhs: None,
            detail: detail.into(),
        }
    }

    pub fn with_values(mut self, lhs: Value, rhs: Value) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Compares two exact scalars.
    pub fn exact(name: impl Into<String>, lhs: Rational, rhs: Rational) -> Self {
        let mut t = Tally::new();
        t.compare(&[], &lhs, &rhs);
        t.finish(name)
    }

    /// Compares two atomic measures on the same cell space.
    pub fn from_cells<const N: usize>(
        name: impl Into<String>,
        lhs: &Cells<N>,
        rhs: &Cells<N>,
        labels: [&str; N],
    ) -> Self {
        let mut t = Tally::new();
        let mut keys: Vec<&[usize; N]> = lhs.0.keys().chain(rhs.0.keys()).collect();
        keys.sort();
        keys.dedup();
        let z = Rational::zero();
        for k in keys {
            let l = lhs.0.get(k).unwrap_or(&z);
            let r = rhs.0.get(k).unwrap_or(&z);
            let loc: Vec<(&str, usize)> = labels.iter().copied().zip(k.iter().copied()).collect();
            t.compare(&loc, l, r);
        }
        t.finish(name)
    }

    /// A floating-point comparison. `residual` is compared against `tolerance`
    /// according to `mode`.
    pub fn real(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        residual: f64,
        tolerance: f64,
        mode: Threshold,
    ) -> Self {
        let ok = match mode {
            Threshold::AtMost => residual <= tolerance,
            Threshold::AtLeast => residual >= tolerance,
        };
        CheckReport {
            check_name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: Value::Real(lhs),
            rhs: Value::Real(rhs),
            residual: Value::Real(residual),
            tolerance: Some(tolerance),
            witness: None,
            instance_digest: None,
            seed: None,
            notes: Vec::new(),
        }
    }

    /// A check whose preconditions do not hold. The identity is not evaluated
    /// as a verdict; the witness locates the violated precondition.
    pub fn precondition_failed(name: impl Into<String>, witness: Witness) -> Self {
        CheckReport {
            check_name: name.into(),
            status: Status::PreconditionFailed,
            lhs: Value::Exact(Rational::zero()),
            rhs: Value::Exact(Rational::zero()),
            residual: Value::Exact(Rational::zero()),
            tolerance: None,
            witness: Some(witness),
            instance_digest: None,
            seed: None,
            notes: Vec::new(),
        }
    }

    /// Turns a failed precondition report into a precondition failure of `name`.
    /// Returns `None` when `pre` passed.
    pub fn gate(name: &str, pre: &CheckReport) -> Option<CheckReport> {
        if pre.is_pass() {
            return None;
        }
        let w = pre.witness.clone().unwrap_or_else(|| Witness::new(&[], ""));
        let detail = format!("{}: {}", pre.check_name, w.detail);
        let mut r = CheckReport::precondition_failed(name, Witness { detail, ..w });
        r.notes.push(format!("precondition {} did not hold", pre.check_name));
        Some(r)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.check_name = name.into();
        self
    }

    /// One-line human-readable summary.
    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::PreconditionFailed => "PRECONDITION-FAILED",
        };
        let mut line = format!(
            "{status:<19} {:<40} lhs={} rhs={} residual={}",
            self.check_name, self.lhs, self.rhs, self.residual
        );
        if let Some(w) = &self.witness {
            let loc: Vec<String> = w.locator.iter().map(|(k, v)| format!("{k}={v}")).collect();
            line.push_str(&format!(" witness[{}] {}", loc.join(","), w.detail));
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Pass iff residual <= tolerance.
    AtMost,
    /// Pass iff residual >= tolerance (discrimination checks).
    AtLeast,
}

/// Sparse atomic measure on `usize^N`. Zero cells are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Cells<const N: usize>(pub BTreeMap<[usize; N], Rational>);

impl<const N: usize> Cells<N> {
    pub fn new() -> Self {
        Cells(BTreeMap::new())
    }

    pub fn add(&mut self, key: [usize; N], v: Rational) {
        if v.is_zero() {
            return;
        }
        let e = self.0.entry(key).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    pub fn get(&self, key: &[usize; N]) -> Rational {
        self.0.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.0.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Accumulates term-wise comparisons into a report.
#[derive(Debug, Default)]
pub struct Tally {
    lhs: Rational,
    rhs: Rational,
    residual: Rational,
    witness: Option<Witness>,
    failures: usize,
}

impl Tally {
    pub fn new() -> Self {
        Tally {
            lhs: Rational::zero(),
            rhs: Rational::zero(),
            residual: Rational::zero(),
            witness: None,
            failures: 0,
        }
    }

    pub fn compare(&mut self, locator: &[(&str, usize)], lhs: &Rational, rhs: &Rational) {
        self.lhs += lhs;
        self.rhs += rhs;
        if lhs != rhs {
            self.residual += (lhs - rhs).abs();
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(
                    Witness::new(locator, "sides differ")
                        .with_values(Value::Exact(lhs.clone()), Value::Exact(rhs.clone())),
                );
            }
        }
    }

    /// Records a failed boolean condition (e.g. a support constraint).
    pub fn violation(&mut self, locator: &[(&str, usize)], amount: Rational, detail: &str) {
        self.residual += amount.abs();
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(Witness::new(locator, detail));
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn finish(self, name: impl Into<String>) -> CheckReport {
        let status = if self.failures == 0 { Status::Pass } else { Status::Fail };
        CheckReport {
            check_name: name.into(),
            status,
            lhs: Value::Exact(self.lhs),
            rhs: Value::Exact(self.rhs),
            residual: Value::Exact(self.residual),
            tolerance: None,
            witness: self.witness,
            instance_digest: None,
            seed: None,
            notes: Vec::new(),
        }
    }
}

/// True iff every report passes.
pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::is_pass)
}

/// Deterministic report order: by check name, then instance digest.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| {
        a.check_name
            .cmp(&b.check_name)
            .then_with(|| a.instance_digest.cmp(&b.instance_digest))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn cells_drop_zero_entries() {
        let mut c = Cells::<2>::new();
        c.add([0, 1], int(2));
        c.add([0, 1], int(-2));
        c.add([1, 1], int(0));
        assert!(c.is_empty());
    }

    #[test]
    fn from_cells_reports_first_difference() {
        let mut l = Cells::<2>::new();
        let mut r = Cells::<2>::new();
        l.add([0, 0], int(1));
        r.add([0, 0], int(1));
        l.add([2, 1], frac(1, 2));
        r.add([1, 3], frac(1, 2));
        let rep = CheckReport::from_cells("x", &l, &r, ["s", "t"]);
        assert_eq!(rep.status, Status::Fail);
        assert_eq!(rep.residual, Value::Exact(int(1)));
        let w = rep.witness.unwrap();
        assert_eq!(w.locator["s"], 1);
        assert_eq!(w.locator["t"], 3);
    }

    #[test]
    fn equal_cells_pass_with_zero_residual() {
        let mut l = Cells::<1>::new();
        l.add([4], frac(3, 7));
        let rep = CheckReport::from_cells("x", &l, &l.clone(), ["s"]);
        assert!(rep.is_pass());
        assert_eq!(rep.residual, Value::Exact(int(0)));
    }

    #[test]
    fn report_json_uses_strings_for_exact_values() {
        let rep = CheckReport::exact("x", frac(1, 3), frac(1, 3));
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["lhs"], "1/3");
        assert_eq!(js["status"], "pass");
        let back: CheckReport = serde_json::from_value(js).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn gate_passes_through_and_blocks() {
        let ok = CheckReport::exact("pre", int(1), int(1));
        assert!(CheckReport::gate("main", &ok).is_none());
        let bad = CheckReport::exact("pre", int(1), int(2));
        let g = CheckReport::gate("main", &bad).unwrap();
        assert_eq!(g.status, Status::PreconditionFailed);
        assert!(g.witness.is_some());
    }
}
