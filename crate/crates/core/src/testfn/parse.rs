use num_complex::Complex64;

use super::TestFunction;
use crate::error::{Error, Result};

fn malformed(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: message.into(),
    }
}

/// Split on `+` separators, keeping exponent signs such as `1e+3` intact.
fn split_terms(literal: &str) -> Vec<&str> {
    let bytes = literal.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        let exponent = i > 0 && matches!(bytes[i - 1], b'e' | b'E');
        if b == b'+' && !exponent {
            out.push(&literal[start..i]);
            start = i + 1;
        }
    }
    out.push(&literal[start..]);
    out
}

fn parse_number(key: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| malformed(format!("`{key}` expects a number, got `{text}`")))?;
    if !v.is_finite() {
        return Err(malformed(format!("`{key}` must be finite")));
    }
    Ok(v)
}

fn parse_bump(fields: &str) -> Result<TestFunction> {
    let (mut mu, mut sigma, mut amp) = (None, None, 1.0);
    for pair in fields.split(',') {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| malformed(format!("expected key=value, got `{pair}`")))?;
        match key.trim() {
            "mu" => mu = Some(parse_number("mu", value)?),
            "sigma" => sigma = Some(parse_number("sigma", value)?),
            "amp" => amp = parse_number("amp", value)?,
            other => return Err(malformed(format!("unknown bump parameter `{other}`"))),
        }
    }
    let mu = mu.ok_or_else(|| malformed("bump needs mu"))?;
    let sigma = sigma.ok_or_else(|| malformed("bump needs sigma"))?;
    if sigma <= 0.0 {
        return Err(malformed("sigma must be positive"));
    }
    TestFunction::bump(Complex64::new(amp, 0.0), mu, sigma)
}

/// Parse `bump:mu=<f>,sigma=<f>[,amp=<f>][+...]` or `step:X=<f>`.
///
/// Terms after the first may omit the `bump:` prefix.
pub fn parse_literal(literal: &str) -> Result<TestFunction> {
    let literal = literal.trim();
    if let Some(rest) = literal.strip_prefix("step:") {
        let (key, value) = rest
            .split_once('=')
            .ok_or_else(|| malformed("step expects X=<f>"))?;
        if key.trim() != "X" {
            return Err(malformed(format!("unknown step parameter `{}`", key.trim())));
        }
        let x = parse_number("X", value)?;
        if x <= 1.0 {
            return Err(malformed("step cutoff X must exceed 1"));
        }
        return TestFunction::step(x);
    }
    let Some(body) = literal.strip_prefix("bump:") else {
        return Err(malformed(format!("unknown test-function literal `{literal}`")));
    };
    let mut total = TestFunction::zero();
    for term in split_terms(body) {
        let fields = term.trim();
        let fields = fields.strip_prefix("bump:").unwrap_or(fields);
        if fields.is_empty() {
            return Err(malformed("empty bump term"));
        }
        total = total.add(&parse_bump(fields)?)?;
    }
    Ok(total)
}
