use std::io::{BufRead, Write};

use super::zero_count;
use crate::error::{Error, Result};

const MAGIC: &str = "# zeta-zeros v1";

/// Ascending ordinates `γ` of zeros `1/2 + iγ` with `0 < γ ≤ t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    t_max: f64,
    accuracy: f64,
}

impl ZeroTable {
    /// A table whose entries are strictly ascending and lie in `(0, t_max]`.
    pub fn new(ordinates: Vec<f64>, t_max: f64, accuracy: f64) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
        }
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0 && g <= t_max) {
                return Err(Error::InvalidArgument(format!(
                    "ordinate {g} lies outside (0, {t_max}]"
                )));
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::Monotonicity { line: i + 2, value: g });
            }
        }
        Ok(Self {
            ordinates,
            t_max,
            accuracy,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// The sub-table of ordinates `≤ t`; counts stay certified only when
    /// `t` is not within the accuracy of an ordinate.
    pub fn truncate(&self, t: f64) -> Result<Self> {
        let t = t.min(self.t_max);
        let kept = self.ordinates.iter().copied().filter(|&g| g <= t).collect();
        Self::new(kept, t, self.accuracy)
    }

    /// Check the entry count against the zero-counting formula at `t_max`.
    pub fn certify(&self) -> Result<()> {
        let expected = zero_count(self.t_max)
            .map_err(|e| Error::Certification(e.to_string()))?;
        if expected != self.ordinates.len() {
            return Err(Error::Certification(format!(
                "{} entries but N({}) = {expected}",
                self.ordinates.len(),
                self.t_max
            )));
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "{MAGIC} t_max={} accuracy={} count={}",
            self.t_max,
            self.accuracy,
            self.ordinates.len()
        )?;
        for g in &self.ordinates {
            writeln!(out, "{g:.12}")?;
        }
        Ok(())
    }

    /// Parse a table without certifying it.
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().transpose()?.ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (t_max, accuracy, count) = parse_header(&header)?;
        let mut ordinates = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let g: f64 = text.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("expected an ordinate, got `{text}`"),
            })?;
            if let Some(&prev) = ordinates.last() {
                if g <= prev {
                    return Err(Error::Monotonicity { line: line_no, value: g });
                }
            }
            ordinates.push(g);
        }
        if ordinates.len() != count {
            return Err(Error::Parse {
                line: 1,
                message: format!("header declares {count} ordinates, found {}", ordinates.len()),
            });
        }
        Self::new(ordinates, t_max, accuracy)
    }

    /// Parse and certify.
    pub fn import<R: BufRead>(input: R) -> Result<Self> {
        let table = Self::read(input)?;
        table.certify()?;
        Ok(table)
    }
}

fn parse_header(header: &str) -> Result<(f64, f64, usize)> {
    let bad = |message: String| Error::Parse { line: 1, message };
    let rest = header
        .strip_prefix(MAGIC)
        .ok_or_else(|| bad(format!("missing `{MAGIC}` header")))?;
    let (mut t_max, mut accuracy, mut count) = (None, None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad(format!("malformed header field `{field}`")))?;
        let number = || value.parse::<f64>().map_err(|_| bad(format!("bad value in `{field}`")));
        match key {
            "t_max" => t_max = Some(number()?),
            "accuracy" => accuracy = Some(number()?),
            "count" => {
                count = Some(value.parse::<usize>().map_err(|_| bad(format!("bad value in `{field}`")))?)
            }
            _ => return Err(bad(format!("unknown header field `{key}`"))),
        }
    }
    match (t_max, accuracy, count) {
        (Some(t), Some(a), Some(c)) => Ok((t, a, c)),
        _ => Err(bad("header needs t_max, accuracy and count".into())),
    }
}
