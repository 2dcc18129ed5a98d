//! Truncated formal power series with exact rational Taylor coefficients.
//! Operators are classified here, and the Laguerre-Pólya obstruction test
//! lives here too.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{self, RootConfig};
use crate::util::{factorial, serde_rational, serde_rational_vec};

/// `φ(x) = Σ α_n x^n` known through `x^truncation_order`.
///
/// Index `n` of the coefficient vector holds the Taylor coefficient
/// `α_n = φ^(n)(0) / n!`, never the derivative itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeries {
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Builds a series from its Taylor coefficients. The truncation order is
    /// `coeffs.len() - 1`; an empty list is rejected.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// The polynomial `Σ c_n x^n` viewed as a series, zero-padded through
    /// `order`. Padding is exact here: a polynomial has no further terms.
    pub fn polynomial(coeffs: &[Rational], order: usize) -> Self {
        let len = (order + 1).max(coeffs.len());
        let mut v: Vec<Rational> = coeffs.to_vec();
        v.resize(len, Rational::new());
        PowerSeries { coeffs: v }
    }

    pub fn polynomial_i64(coeffs: &[i64], order: usize) -> Self {
        let v: Vec<Rational> = coeffs.iter().map(|&c| Rational::from(c)).collect();
        Self::polynomial(&v, order)
    }

    /// `e^x` through `x^order`.
    pub fn truncated_exp(order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|n| Rational::from((1, factorial(n))))
            .collect();
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::from(1);
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Taylor coefficient `α_n`, or `None` beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    /// `φ^(n)(0) = n!·α_n`.
    pub fn derivative_at_zero(&self, n: usize) -> Option<Rational> {
        self.coeffs.get(n).map(|a| Rational::from(a * factorial(n)))
    }

    pub fn is_all_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Restriction to order `order`; fails when the series is too short.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.require(order)?;
        Ok(PowerSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub(crate) fn require(&self, order: usize) -> Result<()> {
        if self.truncation_order() < order {
            return Err(Error::TruncationTooShort {
                needed: order,
                available: self.truncation_order(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }

    /// `φ(x/c)`: coefficient `n` divided by `c^n`.
    pub fn compose_scale(&self, c: &Rational) -> Result<Self> {
        if *c == 0 {
            return Err(Error::ZeroDilation);
        }
        let inv = Rational::from(c.recip_ref());
        let mut pow = Rational::from(1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = Rational::from(a * &pow);
                pow *= &inv;
                v
            })
            .collect();
        Ok(PowerSeries { coeffs })
    }

    /// `φ^m` truncated at `order`.
    pub fn power(&self, m: usize, order: usize) -> Result<Self> {
        self.require(order)?;
        let mut acc = PowerSeries::one(order);
        let mut base = self.truncate(order)?;
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                acc = truncated_product(&acc, &base, order)?;
            }
            e >>= 1;
            if e > 0 {
                base = truncated_product(&base, &base, order)?;
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum OperatorForm {
    /// `φ = x^μ ψ` with `ψ(0) ≠ 0`, `μ ≥ 1`.
    ZeroConstant { mu: usize },
    /// `φ` agrees with `c·e^{γx}` through the stored truncation. This says
    /// nothing about coefficients beyond it.
    PureExponentialUpToTruncation {
        #[serde(with = "serde_rational")]
        c: Rational,
        #[serde(with = "serde_rational")]
        gamma: Rational,
    },
    General {
        p: usize,
        #[serde(with = "serde_rational")]
        alpha: Rational,
        #[serde(with = "serde_rational")]
        beta: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorClass {
    #[serde(flatten)]
    pub form: OperatorForm,
    /// The input scaled so that `φ(0) = 1`; absent when `φ(0) = 0`.
    pub normalized_from: Option<PowerSeries>,
}

impl OperatorClass {
    /// `(p, α, β)` when the class is general.
    pub fn general(&self) -> Option<(usize, &Rational, &Rational)> {
        match &self.form {
            OperatorForm::General { p, alpha, beta } => Some((*p, alpha, beta)),
            _ => None,
        }
    }
}

pub fn normalize(phi: &PowerSeries) -> Result<PowerSeries> {
    let c0 = &phi.coeffs[0];
    if *c0 == 0 {
        return Err(Error::ZeroConstantTerm);
    }
    let inv = Rational::from(c0.recip_ref());
    Ok(phi.scale(&inv))
}

/// Splits `φ = x^μ ψ` with `ψ(0) ≠ 0`.
pub fn factor_out_zero(phi: &PowerSeries) -> Result<(usize, PowerSeries)> {
    let mu = phi
        .coeffs
        .iter()
        .position(|c| *c != 0)
        .ok_or(Error::AllZeroSeries)?;
    let psi = PowerSeries {
        coeffs: phi.coeffs[mu..].to_vec(),
    };
    Ok((mu, psi))
}

pub fn classify(phi: &PowerSeries) -> Result<OperatorClass> {
    let (mu, _) = factor_out_zero(phi)?;
    if mu > 0 {
        return Ok(OperatorClass {
            form: OperatorForm::ZeroConstant { mu },
            normalized_from: None,
        });
    }
    let normalized = normalize(phi)?;
    let alpha = normalized
        .coeff(1)
        .cloned()
        .unwrap_or_else(Rational::new);
    let mut alpha_pow = alpha.clone();
    for n in 2..=normalized.truncation_order() {
        alpha_pow *= &alpha;
        // φ^(n)(0) = n!·α_n against φ'(0)^n
        let nth = normalized.derivative_at_zero(n).expect("n within truncation");
        if nth != alpha_pow {
            let beta = Rational::from(&nth - &alpha_pow) / factorial(n);
            return Ok(OperatorClass {
                form: OperatorForm::General { p: n, alpha, beta },
                normalized_from: Some(normalized),
            });
        }
    }
    Ok(OperatorClass {
        form: OperatorForm::PureExponentialUpToTruncation {
            c: phi.coeffs[0].clone(),
            gamma: alpha,
        },
        normalized_from: Some(normalized),
    })
}

/// `φ''(0)φ(0) − φ'(0)^2`, exact.
pub fn turan_expression(phi: &PowerSeries) -> Result<Rational> {
    phi.require(2)?;
    let d0 = phi.coeffs[0].clone();
    let d1 = phi.coeffs[1].clone();
    let d2 = Rational::from(&phi.coeffs[2] * 2u32);
    Ok(d2 * d0 - Rational::from(d1.square_ref()))
}

/// Cauchy product of two series, truncated at `order`.
pub fn truncated_product(phi: &PowerSeries, psi: &PowerSeries, order: usize) -> Result<PowerSeries> {
    phi.require(order)?;
    psi.require(order)?;
    let mut coeffs = vec![Rational::new(); order + 1];
    for (i, a) in phi.coeffs[..=order].iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in psi.coeffs[..=order - i].iter().enumerate() {
            coeffs[i + j] += Rational::from(a * b);
        }
    }
    Ok(PowerSeries { coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LpVerdict {
    /// `Z_C(φ(D)x^d) > 0` first happens at `d = witness`.
    CertifiedNotLP { witness: usize },
    NoObstructionUpTo { d_max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpTestResult {
    #[serde(flatten)]
    pub verdict: LpVerdict,
    /// Power of `x` stripped from `φ` before testing.
    pub mu: usize,
    /// `(d, Z_C(φ(D)x^d))` for every scanned degree.
    pub trace: Vec<(usize, usize)>,
    /// Every scanned degree above the first witness is again a witness.
    pub witnesses_monotone: bool,
}

/// Scans `Z_C(φ(D)x^d)` for `d = 1..=d_max` with exact real-root counting.
/// A positive count certifies that `φ` is not a Laguerre-Pólya function.
pub fn polya_lp_test(phi: &PowerSeries, d_max: usize) -> Result<LpTestResult> {
    if d_max == 0 {
        return Err(Error::InvalidInput("d_max must be at least 1".into()));
    }
    let (mu, psi) = factor_out_zero(phi)?;
    psi.require(d_max)?;
    let cfg = RootConfig::default();
    let mut trace = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let g = crate::poly::apply_operator(&psi, &Poly::monomial(d))?;
        let count = roots::count_nonreal(&g, &cfg)?;
        trace.push((d, count.nonreal_count));
    }
    let first = trace.iter().find(|(_, z)| *z > 0).map(|(d, _)| *d);
    let witnesses_monotone = match first {
        Some(d0) => trace.iter().filter(|(d, _)| *d >= d0).all(|(_, z)| *z > 0),
        None => true,
    };
    let verdict = match first {
        Some(witness) => LpVerdict::CertifiedNotLP { witness },
        None => LpVerdict::NoObstructionUpTo { d_max },
    };
    Ok(LpTestResult {
        verdict,
        mu,
        trace,
        witnesses_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn series(c: &[i64]) -> PowerSeries {
        PowerSeries::from_i64s(c).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&series(&[2, 2])).unwrap(), series(&[1, 1]));
        assert_eq!(normalize(&series(&[1, 1, 1])).unwrap(), series(&[1, 1, 1]));
        assert_eq!(normalize(&series(&[3])).unwrap(), series(&[1]));
        assert_eq!(normalize(&series(&[0, 1])), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn factor_out_zero_examples() {
        assert_eq!(factor_out_zero(&series(&[0, 0, 1, 1])).unwrap(), (2, series(&[1, 1])));
        assert_eq!(factor_out_zero(&series(&[1, 1])).unwrap(), (0, series(&[1, 1])));
        assert_eq!(factor_out_zero(&series(&[0, 0, 0, 0, 0, 1])).unwrap(), (5, series(&[1])));
        assert_eq!(factor_out_zero(&series(&[0, 0])), Err(Error::AllZeroSeries));
        // ψ keeps truncation order − μ
        let (_, psi) = factor_out_zero(&series(&[0, 0, 1, 1, 0])).unwrap();
        assert_eq!(psi.truncation_order(), 2);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&series(&[1, 1, 1])).unwrap();
        assert_eq!(c.general(), Some((2, &q(1, 1), &q(1, 2))));

        let phi = PowerSeries::new(vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(0, 1)]).unwrap();
        let c = classify(&phi).unwrap();
        assert_eq!(c.general(), Some((4, &q(1, 1), &q(-1, 24))));

        for order in [1, 2, 7, 15] {
            let c = classify(&PowerSeries::truncated_exp(order)).unwrap();
            assert_eq!(
                c.form,
                OperatorForm::PureExponentialUpToTruncation { c: q(1, 1), gamma: q(1, 1) }
            );
        }

        let c = classify(&series(&[0, 0, 3])).unwrap();
        assert_eq!(c.form, OperatorForm::ZeroConstant { mu: 2 });
        assert!(c.normalized_from.is_none());
        assert_eq!(classify(&series(&[0])), Err(Error::AllZeroSeries));
    }

    #[test]
    fn classify_scaled_exponential() {
        // 3·e^{2x}
        let coeffs = (0..6)
            .map(|n| Rational::from(3 * (1i64 << n)) / factorial(n))
            .collect();
        let c = classify(&PowerSeries::new(coeffs).unwrap()).unwrap();
        assert_eq!(
            c.form,
            OperatorForm::PureExponentialUpToTruncation { c: q(3, 1), gamma: q(2, 1) }
        );
    }

    #[test]
    fn turan_examples() {
        assert_eq!(turan_expression(&series(&[1, 1, -1])).unwrap(), -3);
        assert_eq!(turan_expression(&series(&[1, 1, 1])).unwrap(), 1);
        assert_eq!(turan_expression(&PowerSeries::truncated_exp(5)).unwrap(), 0);
        assert_eq!(
            turan_expression(&series(&[1, 1])),
            Err(Error::TruncationTooShort { needed: 2, available: 1 })
        );
    }

    #[test]
    fn truncated_product_examples() {
        let p = truncated_product(&series(&[1, 1, 0]), &series(&[1, -1, 0]), 2).unwrap();
        assert_eq!(p, series(&[1, 0, -1]));
        let p = truncated_product(&series(&[1, 1]), &series(&[1, 1]), 1).unwrap();
        assert_eq!(p, series(&[1, 2]));
        assert!(truncated_product(&series(&[1, 1]), &series(&[1]), 1).is_err());
    }

    #[test]
    fn truncated_product_of_ml_partials_matches_convolution() {
        // E_2 = Σ x^k/(2k)!, squared through order 4, against a direct
        // double sum over index pairs.
        let e2 = crate::limits::ml_partial(2, 4);
        let prod = truncated_product(&e2, &e2, 4).unwrap();
        for n in 0..=4usize {
            let mut expect = Rational::new();
            for i in 0..=n {
                expect += Rational::from((1, factorial(2 * i) * factorial(2 * (n - i))));
            }
            assert_eq!(prod.coeffs()[n], expect, "coefficient {n}");
        }
        assert_eq!(prod.coeffs()[2], q(2, 24) + q(1, 4));
    }

    #[test]
    fn lp_test_examples() {
        let r = polya_lp_test(&PowerSeries::polynomial_i64(&[1, 1, 1], 5), 5).unwrap();
        assert_eq!(r.verdict, LpVerdict::CertifiedNotLP { witness: 2 });
        assert!(r.witnesses_monotone);

        let r = polya_lp_test(&PowerSeries::polynomial_i64(&[1, 1], 8), 8).unwrap();
        assert_eq!(r.verdict, LpVerdict::NoObstructionUpTo { d_max: 8 });

        let r = polya_lp_test(&PowerSeries::polynomial_i64(&[1, 0, -1], 6), 6).unwrap();
        assert_eq!(r.verdict, LpVerdict::NoObstructionUpTo { d_max: 6 });

        assert!(matches!(
            polya_lp_test(&series(&[1, 1, 1]), 5),
            Err(Error::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn lp_test_strips_power_of_x() {
        let r = polya_lp_test(&PowerSeries::polynomial_i64(&[0, 1, 1, 1], 8), 5).unwrap();
        assert_eq!(r.mu, 1);
        assert_eq!(r.verdict, LpVerdict::CertifiedNotLP { witness: 2 });
    }

    fn small_series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 3..7).prop_map(|v| {
            PowerSeries::new(v.into_iter().map(|(n, d)| q(n, d)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn classify_invariant_under_scaling(phi in small_series(), c in (-5i64..=5, 1i64..=3)) {
            prop_assume!(c.0 != 0 && phi.coeffs()[0] != 0);
            let scaled = phi.scale(&q(c.0, c.1));
            let a = classify(&normalize(&scaled).unwrap()).unwrap();
            let b = classify(&phi).unwrap();
            prop_assert_eq!(a.form, b.form);
        }

        #[test]
        fn general_form_reconstructs_pth_derivative(phi in small_series()) {
            prop_assume!(phi.coeffs()[0] != 0);
            let c = classify(&phi).unwrap();
            if let Some((p, alpha, beta)) = c.general() {
                let norm = c.normalized_from.as_ref().unwrap();
                let lhs = Rational::from(beta * factorial(p)) + Rational::from(alpha.pow(p as i32));
                prop_assert_eq!(lhs, norm.derivative_at_zero(p).unwrap());
                prop_assert!(*beta != 0);
            }
        }

        #[test]
        fn turan_sign_matches_classification(phi in small_series()) {
            prop_assume!(phi.coeffs()[0] != 0);
            let t = turan_expression(&phi).unwrap();
            let c = classify(&phi).unwrap();
            if t < 0 {
                let (p, _, beta) = c.general().unwrap();
                prop_assert!(p == 2 && *beta < 0);
            } else if let Some((p, _, beta)) = c.general() {
                prop_assert!((p == 2 && *beta > 0) || p >= 3);
            }
        }

        #[test]
        fn factor_out_zero_roundtrip(mu in 0usize..4, phi in small_series()) {
            prop_assume!(phi.coeffs()[0] != 0);
            let mut shifted = vec![Rational::new(); mu];
            shifted.extend(phi.coeffs().iter().cloned());
            let original = PowerSeries::new(shifted).unwrap();
            let (m, psi) = factor_out_zero(&original).unwrap();
            prop_assert_eq!(m, mu);
            let mut rebuilt = vec![Rational::new(); m];
            rebuilt.extend(psi.coeffs().iter().cloned());
            prop_assert_eq!(rebuilt, original.coeffs().to_vec());
        }
    }
}
