//! Iterates `φ(D)^m f` of formal-power-series differential operators acting on
//! polynomials, with exact arithmetic for the iterates themselves and
//! certified root finding for watching their zeros move.
//!
//! Exact quantities are [`rug::Rational`]; floating quantities are
//! [`rug::Complex`] / [`rug::Float`] at a caller-chosen precision
//! (256 bits unless configured otherwise).

pub mod construct;
pub mod cpoly;
pub mod dynamics;
mod error;
pub mod limits;
pub mod poly;
pub mod roots;
pub mod series;
pub mod text;
mod util;

pub use cpoly::CPoly;
pub use error::{Error, Result};
pub use poly::{Poly, PolyValue};
pub use roots::{RootConfig, RootSet, ZeroCount};
pub use series::{OperatorClass, OperatorForm, PowerSeries};

/// Working precision used when no other is configured.
pub const DEFAULT_PRECISION: u32 = 256;

pub use util::{binomial, factorial, rational_string};
