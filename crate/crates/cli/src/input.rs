use std::fs;
use std::path::Path;

use zerodyn::limits::ml_partial;
use zerodyn::text::{parse_poly_inline, parse_poly_lines, parse_rational, parse_series_lines};
use zerodyn::{Error, Poly, PowerSeries, Result};

/// A `--series` argument before its truncation order is known.
#[derive(Clone, Debug)]
pub enum SeriesSpec {
    TruncatedExp(usize),
    MittagLeffler { p: usize, order: usize },
    /// A polynomial is its own series; it is padded with exact zeros to
    /// whatever order a command needs.
    Polynomial(Poly),
    Stored(PowerSeries),
}

impl SeriesSpec {
    pub fn parse(arg: &str) -> Result<SeriesSpec> {
        if let Some(k) = arg.strip_prefix("truncated-exp:") {
            return Ok(SeriesSpec::TruncatedExp(parse_count(k)?));
        }
        if let Some(rest) = arg.strip_prefix("mittag-leffler:") {
            let (p, k) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected mittag-leffler:p:K, got `{arg}`")))?;
            let p = parse_count(p)?;
            if p == 0 {
                return Err(Error::Parse("mittag-leffler index p must be positive".into()));
            }
            return Ok(SeriesSpec::MittagLeffler {
                p,
                order: parse_count(k)?,
            });
        }
        if let Some(body) = arg.strip_prefix("poly:") {
            return Ok(SeriesSpec::Polynomial(parse_poly_inline(body)?));
        }
        let text = read(arg)?;
        Ok(SeriesSpec::Stored(parse_series_lines(&text)?))
    }

    /// Materializes the series, padding polynomial presets to at least
    /// `order` (and always one past their degree).
    pub fn resolve(&self, order: usize) -> Result<PowerSeries> {
        match self {
            SeriesSpec::TruncatedExp(k) => Ok(PowerSeries::truncated_exp(*k)),
            SeriesSpec::MittagLeffler { p, order: k } => Ok(ml_partial(*p, *k)),
            SeriesSpec::Polynomial(poly) => {
                if poly.is_zero() {
                    return Err(Error::AllZeroSeries);
                }
                let deg = poly.degree().unwrap_or(0);
                Ok(PowerSeries::polynomial(poly.coeffs(), order.max(deg + 1)))
            }
            SeriesSpec::Stored(s) => Ok(s.clone()),
        }
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("`{s}` is not a nonnegative integer")))
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(Path::new(path)).map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))
}

/// `--poly` accepts inline notation or, with an `@` prefix, a file.
pub fn parse_poly(arg: &str) -> Result<Poly> {
    match arg.strip_prefix('@') {
        Some(path) => parse_poly_lines(&read(path)?),
        None => parse_poly_inline(arg),
    }
}

pub fn parse_q(arg: &str) -> Result<rug::Rational> {
    parse_rational(arg)
}

/// Reads `1,2,5`, `10:1000` or `10:1000:10` (inclusive ranges).
pub fn parse_m_list(arg: &str) -> Result<Vec<usize>> {
    let arg = arg.trim();
    if arg.contains(':') {
        let parts: Vec<&str> = arg.split(':').collect();
        let (start, end, step) = match parts.as_slice() {
            [a, b] => (parse_count(a)?, parse_count(b)?, 1),
            [a, b, s] => (parse_count(a)?, parse_count(b)?, parse_count(s)?),
            _ => return Err(Error::Parse(format!("bad range `{arg}`"))),
        };
        if step == 0 || start > end {
            return Err(Error::Parse(format!("bad range `{arg}`")));
        }
        return Ok((start..=end).step_by(step).collect());
    }
    arg.split(',').map(parse_count).collect()
}
