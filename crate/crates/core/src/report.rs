//! Check records and suite reports.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::quad::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    /// Counts towards the verdict.
    Check,
    /// A printed value or sign adjudicated against computation; never fails a run.
    Erratum,
    /// Reported for context; never fails a run.
    Informational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceKind {
    Abs,
    Rel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub kind: ToleranceKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub category: Category,
    pub computed: Value,
    /// A value, or the string `"property"` for invariants measured as a worst-case residual.
    pub expected: Value,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: Option<Tolerance>,
    pub pass: bool,
    /// False when a quadrature ran out of budget.
    pub converged: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Check {
    fn scored(name: &str, computed: Value, expected: Value, abs_err: f64, rel_err: f64, tol: Tolerance) -> Self {
        let err = match tol.kind {
            ToleranceKind::Abs => abs_err,
            ToleranceKind::Rel => rel_err,
        };
        Self {
            name: name.to_owned(),
            category: Category::Check,
            computed,
            expected,
            abs_err: finite(abs_err),
            rel_err: finite(rel_err),
            tolerance: Some(tol),
            pass: err <= tol.value,
            converged: true,
            notes: String::new(),
        }
    }

    /// `|computed − expected| ≤ tol·|expected|`.
    pub fn rel(name: &str, computed: f64, expected: f64, tol: f64) -> Self {
        let abs = (computed - expected).abs();
        let tol = Tolerance {
            kind: ToleranceKind::Rel,
            value: tol,
        };
        Self::scored(name, json!(computed), json!(expected), abs, abs / expected.abs(), tol)
    }

    /// `|computed − expected| ≤ tol`.
    pub fn abs(name: &str, computed: f64, expected: f64, tol: f64) -> Self {
        let abs = (computed - expected).abs();
        let tol = Tolerance {
            kind: ToleranceKind::Abs,
            value: tol,
        };
        Self::scored(name, json!(computed), json!(expected), abs, abs / expected.abs(), tol)
    }

    /// An invariant measured by its worst residual over a sample, which must not exceed `tol`.
    pub fn property(name: &str, worst: f64, tol: f64) -> Self {
        let tol = Tolerance {
            kind: ToleranceKind::Abs,
            value: tol,
        };
        let mut c = Self::scored(name, json!(worst), json!("property"), worst, f64::NAN, tol);
        // NaN residuals must not slip through as "not greater than".
        c.pass &= worst.is_finite();
        c
    }

    /// Exact equality of serialised values.
    pub fn exact(name: &str, computed: Value, expected: Value) -> Self {
        let pass = computed == expected;
        Self {
            name: name.to_owned(),
            category: Category::Check,
            computed,
            expected,
            abs_err: None,
            rel_err: None,
            tolerance: Some(Tolerance {
                kind: ToleranceKind::Abs,
                value: 0.0,
            }),
            pass,
            converged: true,
            notes: String::new(),
        }
    }

    /// Adjudicates a printed value: `pass` records whether the computation sides
    /// with `verified` rather than `printed`.
    pub fn erratum(name: &str, computed: Value, printed: Value, verified: Value, agrees_with_verified: bool) -> Self {
        Self {
            name: name.to_owned(),
            category: Category::Erratum,
            computed,
            expected: json!({ "printed": printed, "verified": verified }),
            abs_err: None,
            rel_err: None,
            tolerance: None,
            pass: agrees_with_verified,
            converged: true,
            notes: String::new(),
        }
    }

    pub fn informational(name: &str, computed: Value) -> Self {
        Self {
            name: name.to_owned(),
            category: Category::Informational,
            computed,
            expected: Value::Null,
            abs_err: None,
            rel_err: None,
            tolerance: None,
            pass: true,
            converged: true,
            notes: String::new(),
        }
    }

    /// A check whose computation raised `err`.
    pub fn failed(name: &str, err: &Error) -> Self {
        Self {
            name: name.to_owned(),
            category: Category::Check,
            computed: Value::Null,
            expected: Value::Null,
            abs_err: None,
            rel_err: None,
            tolerance: None,
            pass: false,
            converged: !err.is_nonconvergence(),
            notes: err.to_string(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn with_category(mut self, category: Category) -> Self {
        self.category = category;
        self
    }

    /// Whether this check makes the run fail.
    pub fn fails_run(&self) -> bool {
        self.category == Category::Check && !self.pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NonConvergence,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::NonConvergence => 3,
        }
    }
}

/// The outcome of a suite. Contains no timings, so identical inputs give
/// byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub spec: QuadratureSpec,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn verdict(&self) -> Verdict {
        let failing = self.checks.iter().filter(|c| c.fails_run());
        let mut verdict = Verdict::Pass;
        for c in failing {
            if !c.converged {
                return Verdict::NonConvergence;
            }
            verdict = Verdict::Fail;
        }
        verdict
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are JSON-representable")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One row per check. Structured values are written as compact JSON.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> crate::Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        };
        let opt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "suite", "name", "category", "status", "computed", "expected", "abs_err", "rel_err", "tolerance_kind",
            "tolerance", "pass", "converged", "notes",
        ])
        .map_err(io)?;
        for c in &self.checks {
            let (kind, tol) = match c.tolerance {
                Some(t) => (if t.kind == ToleranceKind::Abs { "abs" } else { "rel" }, t.value.to_string()),
                None => ("", String::new()),
            };
            let category = match c.category {
                Category::Check => "check",
                Category::Erratum => "erratum",
                Category::Informational => "informational",
            };
            w.write_record([
                self.suite.as_str(),
                &c.name,
                category,
                status(c),
                &cell(&c.computed),
                &cell(&c.expected),
                &opt(c.abs_err),
                &opt(c.rel_err),
                kind,
                &tol,
                if c.pass { "true" } else { "false" },
                if c.converged { "true" } else { "false" },
                &c.notes,
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

fn status(c: &Check) -> &'static str {
    match (c.category, c.pass) {
        (Category::Check, true) => "PASS",
        (Category::Check, false) if !c.converged => "NCONV",
        (Category::Check, false) => "FAIL",
        (Category::Erratum, _) => "ERRATUM",
        (Category::Informational, _) => "INFO",
    }
}

fn short(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map(|x| format!("{x:.6e}")).unwrap_or_else(|| n.to_string()),
        Value::Null => "-".into(),
        other => {
            let s = other.to_string();
            if s.chars().count() > 48 {
                format!("{}…", s.chars().take(47).collect::<String>())
            } else {
                s
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let err = match c.tolerance.map(|t| t.kind) {
                Some(ToleranceKind::Rel) => c.rel_err.map(|e| format!("rel {e:.1e}")),
                Some(ToleranceKind::Abs) => c.abs_err.map(|e| format!("abs {e:.1e}")),
                None => None,
            }
            .unwrap_or_default();
            let tol = match c.tolerance {
                Some(t) if t.value == 0.0 => "exact".to_owned(),
                Some(t) => format!("≤ {:.0e}", t.value),
                None => String::new(),
            };
            write!(f, "{:<8}{:<34} {:<16} {:<13}{:<8}", status(c), c.name, short(&c.computed), err, tol)?;
            if !c.notes.is_empty() {
                write!(f, "  {}", c.notes)?;
            }
            writeln!(f)?;
        }
        let counted = self.checks.iter().filter(|c| c.category == Category::Check).count();
        let failed = self.checks.iter().filter(|c| c.fails_run()).count();
        write!(f, "{} of {counted} checks passed", counted - failed)
    }
}
