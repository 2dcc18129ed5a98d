//! Text formats for series and polynomials.
//!
//! Line formats: one exact rational per line (`7`, `-3/4`), lowest order
//! first, optionally preceded by a version header. Lines starting with `#`
//! are comments; blank lines are ignored.
//!
//! ```text
//! # zerodyn-series v1
//! 1
//! 1
//! 1/2
//! ```
//!
//! Inline polynomials use the shorthand `x^3+6x-1/2`; a rational coefficient
//! directly before `x` multiplies it (`1/2x^2` is `x^2/2`).

use rug::Rational;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::PowerSeries;

pub const SERIES_HEADER: &str = "# zerodyn-series v1";
pub const POLY_HEADER: &str = "# zerodyn-poly v1";
pub const FORMAT_VERSION: &str = "v1";

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("`{t}` is not a rational: {e}")))
}

fn parse_lines(text: &str, kind: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("zerodyn-") {
                let mut parts = rest.split_whitespace();
                let found_kind = parts.next().unwrap_or("");
                let version = parts.next().unwrap_or("");
                if found_kind != kind {
                    return Err(Error::Parse(format!("expected a {kind} file, found {found_kind}")));
                }
                if version != FORMAT_VERSION {
                    return Err(Error::Parse(format!("unsupported {kind} format version `{version}`")));
                }
            }
            continue;
        }
        out.push(parse_rational(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

pub fn parse_series_lines(text: &str) -> Result<PowerSeries> {
    let coeffs = parse_lines(text, "series")?;
    if coeffs.is_empty() {
        return Err(Error::Parse("series file has no coefficients".into()));
    }
    PowerSeries::new(coeffs)
}

pub fn write_series_lines(s: &PowerSeries) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for c in s.coeffs() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_poly_lines(text: &str) -> Result<Poly> {
    Ok(Poly::new(parse_lines(text, "poly")?))
}

pub fn write_poly_lines(p: &Poly) -> String {
    let mut out = String::from(POLY_HEADER);
    out.push('\n');
    for c in p.coeffs() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_poly_inline(s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let chars: Vec<char> = compact.chars().collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for i in 1..chars.len() {
        if (chars[i] == '+' || chars[i] == '-') && !matches!(chars[i - 1], '^' | '/' | '*' | '(') {
            terms.push(chars[start..i].iter().collect::<String>());
            start = i;
        }
    }
    terms.push(chars[start..].iter().collect::<String>());

    let mut coeffs: Vec<Rational> = Vec::new();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{s}`")));
        }
        let (coef, power) = match body.find('x') {
            Some(pos) => {
                let coef_str = body[..pos].trim_end_matches('*');
                let coef_str = coef_str
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .unwrap_or(coef_str);
                let coef = if coef_str.is_empty() {
                    Rational::from(1)
                } else {
                    parse_rational(coef_str)?
                };
                let rest = &body[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else {
                    let e = rest
                        .strip_prefix('^')
                        .ok_or_else(|| Error::Parse(format!("unexpected `{rest}` after x")))?;
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?
                };
                (coef, power)
            }
            None => (parse_rational(body)?, 0),
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::new());
        }
        if neg {
            coeffs[power] -= coef;
        } else {
            coeffs[power] += coef;
        }
    }
    Ok(Poly::new(coeffs))
}
