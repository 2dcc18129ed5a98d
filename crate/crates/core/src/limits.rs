//! Limit polynomials `exp(βD^p)x^d` and the classical families behind them:
//! Hermite polynomials and Jensen polynomials of the Mittag-Leffler
//! functions `E_p(x) = Σ x^k/(pk)!`.

use rug::{Complex, Rational};

use crate::cpoly::CPoly;
use crate::poly::Poly;
use crate::series::PowerSeries;
use crate::util::{binomial, factorial};

/// `exp(βD^p)x^d = Σ_{k ≤ d/p} d! β^k / (k! (d−pk)!) · x^{d−pk}`, exact.
pub fn exp_dp_monomial(beta: &Rational, p: usize, d: usize) -> Poly {
    assert!(p >= 1, "p must be positive");
    let mut coeffs = vec![Rational::new(); d + 1];
    let d_fact = factorial(d);
    let mut beta_pow = Rational::from(1);
    for k in 0..=(d / p) {
        let denom = factorial(k) * factorial(d - p * k);
        coeffs[d - p * k] = &beta_pow * Rational::from((d_fact.clone(), denom));
        beta_pow *= beta;
    }
    Poly::new(coeffs)
}

/// Same sum with a floating (possibly complex) `β`.
pub fn exp_dp_monomial_complex(beta: &Complex, p: usize, d: usize) -> CPoly {
    assert!(p >= 1, "p must be positive");
    let prec = beta.prec().0;
    let mut coeffs = vec![Complex::new(prec); d + 1];
    let d_fact = factorial(d);
    let mut beta_pow = Complex::with_val(prec, 1);
    for k in 0..=(d / p) {
        let w = Rational::from((d_fact.clone(), factorial(k) * factorial(d - p * k)));
        coeffs[d - p * k] = Complex::with_val(prec, &beta_pow * &w);
        beta_pow *= beta;
    }
    CPoly::new(coeffs, prec)
}

/// Physicists' Hermite polynomial `H_d`.
pub fn hermite(d: usize) -> Poly {
    let mut coeffs = vec![Rational::new(); d + 1];
    let d_fact = factorial(d);
    for k in 0..=(d / 2) {
        let mut c = d_fact.clone() / (factorial(k) * factorial(d - 2 * k));
        c <<= (d - 2 * k) as u32;
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[d - 2 * k] = Rational::from(c);
    }
    Poly::new(coeffs)
}

/// `E_p` through `x^order`.
pub fn ml_partial(p: usize, order: usize) -> PowerSeries {
    let coeffs = (0..=order)
        .map(|k| Rational::from((1, factorial(p * k))))
        .collect();
    PowerSeries::new(coeffs).expect("order + 1 coefficients")
}

/// `J_{(p,q)}(x) = Σ_{k ≤ q} q! x^k / ((q−k)! (pk)!)`.
pub fn jensen_ml(p: usize, q: usize) -> Poly {
    let q_fact = factorial(q);
    Poly::new(
        (0..=q)
            .map(|k| Rational::from((q_fact.clone(), factorial(q - k) * factorial(p * k))))
            .collect(),
    )
}

/// The `q`-th Jensen polynomial `Σ C(q,k) φ^(k)(0) x^k` of an arbitrary
/// series. All zeros are real only when the series is Laguerre-Pólya, which
/// a truncation cannot certify.
pub fn jensen(phi: &PowerSeries, q: usize) -> crate::Result<Poly> {
    phi.truncate(q)?;
    Ok(Poly::new(
        (0..=q)
            .map(|k| Rational::from(&phi.coeffs()[k] * (binomial(q, k) * factorial(k))))
            .collect(),
    ))
}
