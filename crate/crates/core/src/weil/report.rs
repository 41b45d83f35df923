use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use super::{haran_prime, w_p, w_p_contour, w_r, RealForm, CONTOUR_ABSCISSA};
use crate::error::{Error, Result};
use crate::special::Place;
use crate::testfn::TestFunction;

/// How a local term was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Direct,
    Contour,
    Finite,
    Series,
    Pf,
    Convolution,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Contour => "contour",
            Method::Finite => "finite",
            Method::Series => "series",
            Method::Pf => "pf",
            Method::Convolution => "convolution",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Method::Direct,
            Method::Contour,
            Method::Finite,
            Method::Series,
            Method::Pf,
            Method::Convolution,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }

    /// Methods that exist at a place, admissible or not.
    pub fn at(place: Place) -> &'static [Method] {
        match place {
            Place::Real => &[
                Method::Finite,
                Method::Series,
                Method::Pf,
                Method::Contour,
                Method::Convolution,
            ],
            Place::Prime(_) => &[Method::Direct, Method::Contour, Method::Convolution],
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub enum MethodValue {
    Value(Complex64),
    Inadmissible(String),
}

/// `W_ν(g)` by every method of the place.
#[derive(Debug, Clone)]
pub struct PlaceTermReport {
    pub place: Place,
    pub values: Vec<(Method, MethodValue)>,
}

impl PlaceTermReport {
    /// Largest pairwise distance among the admissible values.
    pub fn spread(&self) -> f64 {
        let vals: Vec<Complex64> = self.admissible().map(|(_, v)| v).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in vals.iter().enumerate() {
            for b in &vals[i + 1..] {
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    pub fn admissible(&self) -> impl Iterator<Item = (Method, Complex64)> + '_ {
        self.values.iter().filter_map(|(m, v)| match v {
            MethodValue::Value(c) => Some((*m, *c)),
            MethodValue::Inadmissible(_) => None,
        })
    }

    pub fn value(&self, method: Method) -> Option<Complex64> {
        self.admissible().find(|(m, _)| *m == method).map(|(_, v)| v)
    }

    /// One row per method plus a spread row; the status is `breach` when the
    /// spread exceeds `tolerance`.
    pub fn rows(&self, tolerance: f64) -> Vec<CsvRow> {
        let quantity = format!("W_{}", self.place);
        let spread = self.spread();
        let status = if spread <= tolerance { "ok" } else { "breach" };
        let mut rows: Vec<CsvRow> = self
            .values
            .iter()
            .map(|(m, v)| match v {
                MethodValue::Value(c) => CsvRow::value(&quantity, m.name(), *c, tolerance, status),
                MethodValue::Inadmissible(why) => CsvRow {
                    quantity: quantity.clone(),
                    method: m.name().into(),
                    value: None,
                    tolerance,
                    status: format!("inadmissible: {why}"),
                },
            })
            .collect();
        rows.push(CsvRow::value(
            &quantity,
            "spread",
            Complex64::new(spread, 0.0),
            tolerance,
            status,
        ));
        rows
    }
}

/// Evaluate the chosen methods (all methods of the place when `methods` is empty).
pub fn place_term_report(g: &TestFunction, place: Place, methods: &[Method]) -> Result<PlaceTermReport> {
    let wanted = if methods.is_empty() { Method::at(place) } else { methods };
    let mut values = Vec::new();
    for &method in wanted {
        let outcome = match (place, method) {
            (Place::Real, Method::Finite) => w_r(g, RealForm::Finite),
            (Place::Real, Method::Series) => w_r(g, RealForm::Series),
            (Place::Real, Method::Pf) => w_r(g, RealForm::Pf),
            (Place::Real, Method::Contour) => w_r(g, RealForm::Contour),
            (Place::Real, Method::Convolution) => w_r(g, RealForm::Convolution),
            (Place::Prime(p), Method::Direct) => Ok(w_p(g, p)),
            (Place::Prime(p), Method::Contour) => w_p_contour(g, p, CONTOUR_ABSCISSA),
            (Place::Prime(p), Method::Convolution) => Ok(haran_prime(g, p, 0)),
            (place, method) => Err(Error::InvalidArgument(format!(
                "method {method} does not exist at place {place}"
            ))),
        };
        let value = match outcome {
            Ok(v) => MethodValue::Value(v),
            Err(e @ Error::Inadmissible { .. }) => MethodValue::Inadmissible(e.to_string()),
            Err(e) => return Err(e),
        };
        values.push((method, value));
    }
    Ok(PlaceTermReport { place, values })
}

/// A line of the `quantity,method,value_re,value_im,tolerance,status` table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub quantity: String,
    pub method: String,
    pub value: Option<Complex64>,
    pub tolerance: f64,
    pub status: String,
}

impl CsvRow {
    pub const HEADER: &'static str = "quantity,method,value_re,value_im,tolerance,status";

    pub fn value(quantity: &str, method: &str, value: Complex64, tolerance: f64, status: &str) -> Self {
        Self {
            quantity: quantity.into(),
            method: method.into(),
            value: Some(value),
            tolerance,
            status: status.into(),
        }
    }

    pub fn write_all<W: Write>(rows: &[CsvRow], mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::HEADER)?;
        for row in rows {
            writeln!(out, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Display for CsvRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = match self.value {
            Some(v) => (format!("{:.14e}", v.re), format!("{:.14e}", v.im)),
            None => (String::new(), String::new()),
        };
        // statuses never contain quotes; commas inside them are quoted
        let status = if self.status.contains(',') {
            format!("\"{}\"", self.status)
        } else {
            self.status.clone()
        };
        write!(
            f,
            "{},{},{re},{im},{:e},{status}",
            self.quantity, self.method, self.tolerance
        )
    }
}
