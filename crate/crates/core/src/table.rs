//! Kernel tables over parameter grids, written as CSV.
//!
//! A grid is a `;`-separated list of axes, each `name=start:stop:count` or
//! `name=v1,v2,…`; axes not mentioned stay at 0. The empty string is the
//! empty grid.
//!
//! ```
//! use qhsiegel::table::{Grid, TableKind};
//!
//! let grid: Grid = "x=0.5:2:4;t=-2:2:5;lambda=0".parse().unwrap();
//! assert_eq!(grid.points(TableKind::Heis).unwrap().len(), 20);
//! ```

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens;
use crate::quad::QuadratureSpec;
use crate::quat::Quaternion;
use crate::siegel::{boundary_point, SiegelPoint};
use crate::szego::{szego_kernel, SzegoConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `K_λ(x, t)` on `Q`.
    Klambda,
    /// The one-dimensional-centre kernel `K(x, t)` with scalar `t`, `λ`.
    Heis,
    /// `S(q, 0)` at `q = (x, |x|² + u + i·t)`.
    Szego,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "klambda" => Ok(Self::Klambda),
            "heis" => Ok(Self::Heis),
            "szego" => Ok(Self::Szego),
            _ => Err(Error::Domain(format!("unknown table {s:?}; expected klambda, heis or szego"))),
        }
    }
}

impl TableKind {
    /// Input columns in output order.
    pub fn axes(self) -> &'static [&'static str] {
        match self {
            Self::Klambda => &["x0", "x1", "x2", "x3", "t1", "t2", "t3", "l1", "l2", "l3"],
            Self::Heis => &["x0", "x1", "x2", "x3", "t", "lambda"],
            Self::Szego => &["x0", "x1", "x2", "x3", "t1", "t2", "t3", "u"],
        }
    }

    fn canonical(self, name: &str) -> Option<usize> {
        let name = match (self, name) {
            (_, "x") => "x0",
            (Self::Klambda | Self::Szego, "t") => "t1",
            (Self::Klambda, "lambda") => "l1",
            _ => name,
        };
        self.axes().iter().position(|a| *a == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Domain(format!("not a number: {s:?}")))
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, spec) = s
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("axis {s:?} is not of the form name=values")))?;
        let parts: Vec<&str> = spec.split(':').collect();
        let values = match parts.as_slice() {
            [start, stop, count] => {
                let (a, b) = (number(start)?, number(stop)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad point count {count:?}")))?;
                match n {
                    0 => vec![],
                    1 => vec![a],
                    _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
                }
            }
            [list] => list.split(',').map(number).collect::<Result<_>>()?,
            _ => return Err(Error::Domain(format!("axis {s:?}: use start:stop:count or a comma list"))),
        };
        Ok(Axis {
            name: name.trim().to_owned(),
            values,
        })
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .split(';')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        Ok(Grid { axes })
    }
}

impl Grid {
    /// All grid points as full input rows for `kind`, last axis fastest.
    pub fn points(&self, kind: TableKind) -> Result<Vec<Vec<f64>>> {
        if self.axes.is_empty() {
            return Ok(vec![]);
        }
        let mut per_axis: Vec<Vec<f64>> = vec![vec![0.0]; kind.axes().len()];
        let mut seen = vec![false; per_axis.len()];
        for axis in &self.axes {
            let i = kind
                .canonical(&axis.name)
                .ok_or_else(|| Error::Domain(format!("unknown axis {:?}; expected one of {}", axis.name, kind.axes().join(", "))))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("axis {:?} given twice", axis.name)));
            }
            per_axis[i] = axis.values.clone();
        }
        let mut rows = vec![vec![]];
        for values in &per_axis {
            rows = rows
                .into_iter()
                .flat_map(|row: Vec<f64>| {
                    values.iter().map(move |&v| {
                        let mut r = row.clone();
                        r.push(v);
                        r
                    })
                })
                .collect();
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Value { value: Quaternion, error: f64 },
    Skipped(String),
    NonConverged(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TableSummary {
    pub rows: usize,
    pub skipped: usize,
    pub nonconverged: usize,
}

fn reason(e: Error) -> Outcome {
    match e {
        e if e.is_nonconvergence() => Outcome::NonConverged(e.to_string()),
        Error::Domain(msg) => Outcome::Skipped(msg),
        e => Outcome::Skipped(e.to_string()),
    }
}

fn evaluate(kind: TableKind, r: &[f64], spec: &QuadratureSpec) -> Outcome {
    let x = [r[0], r[1], r[2], r[3]];
    let result = match kind {
        TableKind::Klambda => greens::k_lambda(&x, [r[4], r[5], r[6]], [r[7], r[8], r[9]], spec).map(|e| (e.value, e.error)),
        TableKind::Heis => {
            let (t, lambda) = (r[4], r[5]);
            if lambda.abs() < 2.0 {
                greens::heis_k_quadrature(&x, t, lambda, spec).map(|e| (e.value, e.error))
            } else {
                greens::heis_k_closed(&x, t, lambda).map(|v| (v, 0.0))
            }
        }
        TableKind::Szego => {
            let u = r[7];
            if u < 0.0 {
                Err(Error::Domain(format!("u = {u} lies below the boundary")))
            } else {
                let q = boundary_point(Quaternion::from_array(x), [r[4], r[5], r[6]]).lift(u);
                szego_kernel(&q, &SiegelPoint::ORIGIN, &SzegoConstants::default()).map(|v| (v, 0.0))
            }
        }
    };
    match result {
        Ok((value, error)) => Outcome::Value { value, error },
        Err(e) => reason(e),
    }
}

/// Shortest round-trip form, in scientific notation away from unit scale.
fn cell(x: f64) -> String {
    let x = x + 0.0; // no "-0"
    if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// Evaluates `kind` on every grid point, in parallel, and writes one CSV row per point.
pub fn emit_table<W: Write>(kind: TableKind, grid: &Grid, spec: &QuadratureSpec, out: W) -> Result<TableSummary> {
    spec.validate()?;
    let points = grid.points(kind)?;
    let outcomes: Vec<Outcome> = points.par_iter().map(|r| evaluate(kind, r, spec)).collect();
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = kind.axes().to_vec();
    header.extend(["value_t", "value_i1", "value_i2", "value_i3", "error", "status", "reason"]);
    w.write_record(&header).map_err(io)?;
    let mut summary = TableSummary {
        rows: points.len(),
        ..Default::default()
    };
    for (inputs, outcome) in points.iter().zip(&outcomes) {
        let mut record: Vec<String> = inputs.iter().map(|&x| cell(x)).collect();
        match outcome {
            Outcome::Value { value, error } => {
                record.extend(value.to_array().iter().map(|&x| cell(x)));
                record.extend([cell(*error), "ok".into(), String::new()]);
            }
            Outcome::Skipped(why) | Outcome::NonConverged(why) => {
                let status = if matches!(outcome, Outcome::Skipped(_)) {
                    summary.skipped += 1;
                    "skipped"
                } else {
                    summary.nonconverged += 1;
                    "nonconverged"
                };
                record.extend(std::iter::repeat_n(String::new(), 5));
                record.extend([status.to_owned(), why.clone()]);
            }
        }
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        let g: Grid = "x=0.5:2:4; t=-1,0,1".parse().unwrap();
        assert_eq!(g.axes[0].values, [0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.axes[1].values, [-1.0, 0.0, 1.0]);
        assert!("x".parse::<Grid>().is_err());
        assert!("x=1:2".parse::<Grid>().is_err());
        assert!("q=1".parse::<Grid>().unwrap().points(TableKind::Heis).is_err());
        assert!("x=1;x0=2".parse::<Grid>().unwrap().points(TableKind::Heis).is_err());
        assert!("".parse::<Grid>().unwrap().points(TableKind::Heis).unwrap().is_empty());
    }
}
