//! Dense univariate polynomials over the rationals and the action of `φ(D)`
//! on them. The affine changes of variable behind the rescaled iterates are
//! here as well.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::series::{OperatorClass, PowerSeries};
use crate::util::{exact_root, falling, serde_rational_vec};

/// Exact polynomial; index `k` holds the coefficient of `x^k`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is
/// the empty vector and has no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `M^d(x) = x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Rational::new(); d + 1];
        coeffs[d] = Rational::from(1);
        Poly { coeffs }
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![Rational::from(-a), Rational::from(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&Rational::from(lc.recip_ref())),
            None => Poly::zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u32))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        if n >= self.coeffs.len() {
            return Poly::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(n)
                .map(|(k, c)| Rational::from(c * falling(k, n)))
                .collect(),
        )
    }

    /// `x^s · self`.
    pub fn shift_up(&self, s: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::new(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::constant(Rational::from(1));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `(Δ_c f)(x) = f(cx)`.
    pub fn dilate(&self, c: &Rational) -> Result<Self> {
        if *c == 0 {
            return Err(Error::ZeroDilation);
        }
        let mut pow = Rational::from(1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = Rational::from(a * &pow);
                pow *= c;
                v
            })
            .collect();
        Ok(Self::new(coeffs))
    }

    /// `(T^c f)(x) = f(x + c)` by repeated synthetic division.
    pub fn translate(&self, c: &Rational) -> Self {
        let mut a = self.coeffs.clone();
        if *c == 0 || a.len() < 2 {
            return Self::new(a);
        }
        let n = a.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let t = Rational::from(&a[j + 1] * c);
                a[j] += t;
            }
        }
        Self::new(a)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = Rational::from(divisor.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dd] * &lc_inv);
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = Rational::from(&c * d);
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scales by a positive rational so that the coefficients are coprime
    /// integers. The sign of every coefficient is preserved.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut lcm = rug::Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        let ints: Vec<rug::Integer> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * rug::Integer::from(&lcm / c.denom()))
            .collect();
        let mut g = rug::Integer::new();
        for i in &ints {
            g.gcd_mut(i);
        }
        Poly::new(ints.into_iter().map(|i| Rational::from(i / &g)).collect())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Max-abs coefficient norm `‖f‖_∞`.
    pub fn sup_norm(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| Rational::from(c.abs_ref()))
            .max()
            .unwrap_or_default()
    }

    pub fn to_cpoly(&self, prec: u32) -> CPoly {
        CPoly::new(
            self.coeffs.iter().map(|c| Complex::with_val(prec, c)).collect(),
            prec,
        )
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }
}

/// Writes polynomials as `x^3+6x-2`, highest degree first. Non-integer
/// coefficients are written as `1/2x^2`, read as `(1/2)·x^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if k == 0 || mag != 1 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `φ(D)f = Σ_{n ≤ deg f} α_n f^(n)`.
///
/// Only the coefficients of `φ` through `deg f` take part, so the series
/// must be known that far.
pub fn apply_operator(phi: &PowerSeries, f: &Poly) -> Result<Poly> {
    let Some(d) = f.degree() else {
        return Ok(Poly::zero());
    };
    phi.require(d)?;
    let alpha = phi.coeffs();
    // coefficient k of the result: Σ_n α_n · (k+n)!/k! · f_{k+n}
    let coeffs = (0..=d)
        .map(|k| {
            let mut acc = Rational::new();
            for (n, (a, c)) in alpha.iter().zip(&f.coeffs[k..]).enumerate() {
                if *a == 0 || *c == 0 {
                    continue;
                }
                acc += Rational::from(a * c) * falling(k + n, n);
            }
            acc
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// `φ(D)^m f` by `m` successive applications.
pub fn iterate_operator(phi: &PowerSeries, f: &Poly, m: usize) -> Result<Poly> {
    if let Some(d) = f.degree() {
        phi.require(d)?;
    }
    let mut g = f.clone();
    for _ in 0..m {
        g = apply_operator(phi, &g)?;
    }
    Ok(g)
}

/// All iterates `φ(D)^m f` for `m = 0..=m_max`, computed in one pass.
pub fn iterate_trajectory(phi: &PowerSeries, f: &Poly, m_max: usize) -> Result<Vec<Poly>> {
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(f.clone());
    for m in 1..=m_max {
        let next = apply_operator(phi, &out[m - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// A polynomial that is exact whenever the computation allowed it.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyValue {
    Exact(Poly),
    Float(CPoly),
}

impl PolyValue {
    pub fn to_cpoly(&self, prec: u32) -> CPoly {
        match self {
            PolyValue::Exact(p) => p.to_cpoly(prec),
            PolyValue::Float(c) => c.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Poly> {
        match self {
            PolyValue::Exact(p) => Some(p),
            PolyValue::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, PolyValue::Exact(_))
    }
}

/// `f_m(x) = m^{-d/p} (φ(D)^m f)(m^{1/p} x − mα)`.
pub fn rescale_iterate(
    cls: &OperatorClass,
    phi: &PowerSeries,
    f: &Poly,
    m: usize,
    prec: u32,
) -> Result<PolyValue> {
    let (p, alpha, _) = cls.general().ok_or(Error::NotGeneralForm)?;
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NonMonicInput),
    };
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let iterate = iterate_operator(phi, f, m)?;
    Ok(rescale_known_iterate(&iterate, p, alpha, d, m, prec))
}

/// The rescaling step alone, for an already computed `φ(D)^m f` of degree `d`.
pub fn rescale_known_iterate(
    iterate: &Poly,
    p: usize,
    alpha: &Rational,
    d: usize,
    m: usize,
    prec: u32,
) -> PolyValue {
    let shift = Rational::from(alpha * m as u64);
    let shifted = iterate.translate(&-shift);
    // coefficient k picks up m^{(k-d)/p}; exact when every needed power of
    // m has a rational p-th root
    let m_q = Rational::from(m as u64);
    let mut exact = Vec::with_capacity(shifted.coeffs.len());
    for (k, c) in shifted.coeffs.iter().enumerate() {
        if *c == 0 {
            exact.push(Rational::new());
            continue;
        }
        let pow = Rational::from((&m_q).pow((d - k) as i32));
        match exact_root(&pow, p as u32) {
            Some(r) => exact.push(Rational::from(c / &r)),
            None => break,
        }
    }
    if exact.len() == shifted.coeffs.len() {
        return PolyValue::Exact(Poly::new(exact));
    }
    let root = Float::with_val(prec, m as u64).root(p as u32);
    let coeffs = shifted
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let scale = Float::with_val(prec, (&root).pow(k as i32 - d as i32));
            Complex::with_val(prec, Float::with_val(prec, c) * scale)
        })
        .collect();
    PolyValue::Float(CPoly::new(coeffs, prec))
}
