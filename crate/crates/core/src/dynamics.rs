//! Experiments on the zeros of `φ(D)^m f` as `m` grows.
//!
//! The onset scan looks for the iteration count after which the zeros are
//! all real and simple (or stay partly nonreal). The convergence and
//! attractor experiments follow the rescaled iterates `f_m` toward
//! `exp(βD^p)x^d` and its star-shaped zero set.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::exp_dp_monomial;
use crate::poly::{apply_operator, rescale_known_iterate, Poly, PolyValue};
use crate::roots::{self, RootConfig, RootRecord};
use crate::series::{classify, turan_expression, OperatorClass, OperatorForm, PowerSeries};
use crate::util::{cabs, exact_root, factorial, falling, serde_complex, serde_rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnsetMode {
    /// Negative Turán expression: zeros eventually all real and simple.
    AllRealSimple,
    /// Nonnegative Turán expression: nonreal zeros eventually persist.
    PersistentNonreal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "m", rename_all = "snake_case")]
pub enum Onset {
    Found(usize),
    NotFoundWithin(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnsetStep {
    pub m: usize,
    pub nonreal_count: usize,
    pub all_real_simple: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnsetReport {
    pub mode: OnsetMode,
    pub m0: Onset,
    #[serde(with = "serde_rational")]
    pub turan: Rational,
    pub class: OperatorClass,
    pub trace: Vec<OnsetStep>,
}

/// Scans `m = 1..=m_max` and reports the least `m0` from which the
/// regime's predicate holds through `m_max`.
pub fn onset_scan(phi: &PowerSeries, f: &Poly, m_max: usize, cfg: &RootConfig) -> Result<OnsetReport> {
    let d = f.degree().filter(|&d| d >= 1).ok_or_else(|| {
        Error::InvalidInput("onset scans need a nonconstant polynomial".into())
    })?;
    if phi.coeffs()[0] == 0 {
        return Err(Error::ZeroConstantTerm);
    }
    phi.require(d)?;
    let turan = turan_expression(phi)?;
    let class = classify(phi)?;
    if matches!(class.form, OperatorForm::PureExponentialUpToTruncation { .. }) {
        return Err(Error::PureExponential);
    }
    let mode = if turan < 0 {
        OnsetMode::AllRealSimple
    } else {
        OnsetMode::PersistentNonreal
    };

    let mut trace = Vec::with_capacity(m_max);
    let mut g = f.clone();
    for m in 1..=m_max {
        g = apply_operator(phi, &g)?;
        let count = roots::count_nonreal(&g, cfg)?;
        let simple = count.nonreal_count == 0 && roots::all_real_simple(&g, cfg)?;
        trace.push(OnsetStep {
            m,
            nonreal_count: count.nonreal_count,
            all_real_simple: simple,
        });
    }
    let holds = |s: &OnsetStep| match mode {
        OnsetMode::AllRealSimple => s.all_real_simple,
        OnsetMode::PersistentNonreal => s.nonreal_count > 0,
    };
    let tail = trace.iter().rev().take_while(|s| holds(s)).count();
    let m0 = if tail == 0 {
        Onset::NotFoundWithin(m_max)
    } else {
        Onset::Found(m_max - tail + 1)
    };
    Ok(OnsetReport {
        mode,
        m0,
        turan,
        class,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSample {
    pub m: usize,
    /// `‖f_m − exp(βD^p)x^d‖_∞`.
    pub sup_norm_error: f64,
    /// The same error when `f_m` could be computed exactly.
    #[serde(with = "opt_rational")]
    pub exact_error: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub p: usize,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    pub degree: usize,
    pub samples: Vec<ConvergenceSample>,
    /// Least-squares slope of `log error` against `log m`, over the samples
    /// with nonzero error.
    pub fitted_slope: Option<f64>,
    /// Every sampled error is exactly zero.
    pub exact_convergence: bool,
    pub limit_poly: Poly,
}

impl ConvergenceReport {
    /// Fits `C = max error·m^{1/p}` on the first half of the samples and
    /// checks `error ≤ C·m^{−1/p}` on the second half.
    pub fn rate_bound_validates(&self) -> bool {
        let half = self.samples.len() / 2;
        if half == 0 {
            return true;
        }
        let exponent = 1.0 / self.p as f64;
        let c = self.samples[..half]
            .iter()
            .map(|s| s.sup_norm_error * (s.m as f64).powf(exponent))
            .fold(0.0, f64::max);
        self.samples[half..]
            .iter()
            .all(|s| s.sup_norm_error <= c * (s.m as f64).powf(-exponent) * (1.0 + 1e-12))
    }
}

mod opt_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse::<Rational>().map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn general_parts(phi: &PowerSeries) -> Result<(OperatorClass, usize, Rational, Rational)> {
    let cls = classify(phi)?;
    let (p, alpha, beta) = cls.general().ok_or(Error::NotGeneralForm)?;
    let (alpha, beta) = (alpha.clone(), beta.clone());
    Ok((cls, p, alpha, beta))
}

fn monic_degree(f: &Poly) -> Result<usize> {
    match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => Ok(d),
        _ => Err(Error::NonMonicInput),
    }
}

fn sorted_ms(m_list: &[usize]) -> Result<Vec<usize>> {
    let mut ms: Vec<usize> = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    if ms.first() == Some(&0) {
        return Err(Error::InvalidInput("iteration counts must be positive".into()));
    }
    Ok(ms)
}

/// Least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Iterates `φ(D)` once per unit of `m` and hands every requested iterate to
/// `visit`.
fn for_each_iterate(
    phi: &PowerSeries,
    f: &Poly,
    ms: &[usize],
    mut visit: impl FnMut(usize, &Poly) -> Result<()>,
) -> Result<()> {
    let mut g = f.clone();
    let mut at = 0;
    for &m in ms {
        while at < m {
            g = apply_operator(phi, &g)?;
            at += 1;
        }
        visit(m, &g)?;
    }
    Ok(())
}

pub fn convergence_experiment(
    phi: &PowerSeries,
    f: &Poly,
    m_list: &[usize],
    prec: u32,
) -> Result<ConvergenceReport> {
    let (_, p, alpha, beta) = general_parts(phi)?;
    let d = monic_degree(f)?;
    let ms = sorted_ms(m_list)?;
    let limit = exp_dp_monomial(&beta, p, d);
    let limit_float = limit.to_cpoly(prec);
    let mut samples = Vec::with_capacity(ms.len());
    for_each_iterate(phi, f, &ms, |m, g| {
        let sample = match rescale_known_iterate(g, p, &alpha, d, m, prec) {
            PolyValue::Exact(fm) => {
                let e = (&fm - &limit).sup_norm();
                ConvergenceSample {
                    m,
                    sup_norm_error: e.to_f64(),
                    exact_error: Some(e),
                }
            }
            PolyValue::Float(fm) => ConvergenceSample {
                m,
                sup_norm_error: fm.sub(&limit_float).sup_norm().to_f64(),
                exact_error: None,
            },
        };
        samples.push(sample);
        Ok(())
    })?;
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.sup_norm_error > 0.0)
        .map(|s| ((s.m as f64).ln(), s.sup_norm_error.ln()))
        .collect();
    let exact_convergence = samples
        .iter()
        .all(|s| s.exact_error.as_ref().is_some_and(|e| *e == 0));
    Ok(ConvergenceReport {
        p,
        alpha,
        beta,
        degree: d,
        fitted_slope: ols_slope(&points),
        exact_convergence,
        samples,
        limit_poly: limit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub value: f64,
    #[serde(with = "opt_rational")]
    pub exact: Option<Rational>,
}

/// Executable surrogate for `‖exp(−m^{1−1/p}αD) φ(m^{−1/p}D)^m − exp(βD^p)‖_d`:
/// both operators are applied to `x^j`, `j ≤ d`, and the largest coefficient
/// max-norm of the difference is returned.
pub fn operator_discrepancy(
    cls: &OperatorClass,
    phi: &PowerSeries,
    d: usize,
    m: usize,
    prec: u32,
) -> Result<Discrepancy> {
    let (p, alpha, beta) = cls.general().ok_or(Error::NotGeneralForm)?;
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    phi.require(d)?;
    let normalized = match &cls.normalized_from {
        Some(n) => n.truncate(d)?,
        None => return Err(Error::NotGeneralForm),
    };
    // exp(−m^{1−1/p}αx)·φ(m^{−1/p}x)^m has coefficient n equal to
    // m^{−n/p}·[exp(−mαx)·φ(x)^m]_n
    let powered = normalized.power(m, d)?;
    let shift = -Rational::from(alpha * m as u64);
    let mut exp_coeffs = Vec::with_capacity(d + 1);
    let mut pow = Rational::from(1);
    for n in 0..=d {
        exp_coeffs.push(Rational::from(&pow / factorial(n)));
        pow *= &shift;
    }
    let exp_shift = PowerSeries::new(exp_coeffs)?;
    let reduced = crate::series::truncated_product(&exp_shift, &powered, d)?;

    let target = |n: usize| -> Rational {
        if n.is_multiple_of(p) {
            let k = n / p;
            Rational::from(beta.pow(k as i32)) / factorial(k)
        } else {
            Rational::new()
        }
    };

    let m_q = Rational::from(m as u64);
    let mut exact_diffs: Vec<Rational> = Vec::with_capacity(d + 1);
    for (n, r) in reduced.coeffs().iter().enumerate() {
        let scaled = if *r == 0 {
            Some(Rational::new())
        } else {
            exact_root(&Rational::from((&m_q).pow(n as i32)), p as u32).map(|s| Rational::from(r / &s))
        };
        match scaled {
            Some(a) => exact_diffs.push(a - target(n)),
            None => break,
        }
    }
    if exact_diffs.len() == d + 1 {
        let mut best = Rational::new();
        for j in 0..=d {
            for (n, diff) in exact_diffs.iter().enumerate().take(j + 1) {
                let v = Rational::from(diff.abs_ref()) * falling(j, n);
                if v > best {
                    best = v;
                }
            }
        }
        return Ok(Discrepancy {
            value: best.to_f64(),
            exact: Some(best),
        });
    }

    let root = Float::with_val(prec, m as u64).root(p as u32);
    let diffs: Vec<Float> = reduced
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, r)| {
            let a = Float::with_val(prec, r) / Float::with_val(prec, (&root).pow(n as u32));
            a - target(n)
        })
        .collect();
    let mut best = Float::new(prec);
    for j in 0..=d {
        for (n, diff) in diffs.iter().enumerate().take(j + 1) {
            let v = Float::with_val(prec, diff.abs_ref()) * falling(j, n);
            if v > best {
                best = v;
            }
        }
    }
    Ok(Discrepancy {
        value: best.to_f64(),
        exact: None,
    })
}

/// Distance from `z` to the star `S_p`, the union of the closed rays from
/// the origin through the `p`-th roots of unity.
pub fn star_distance(z: &Complex, p: usize) -> f64 {
    let prec = z.prec().0;
    let modulus = cabs(z);
    let mut best = Float::with_val(prec, f64::INFINITY);
    for k in 0..p {
        let theta = Float::with_val(prec, Constant::Pi) * (2 * k) as u32 / p as u32;
        let (s, c) = theta.sin_cos(Float::new(prec));
        let along = Float::with_val(prec, z.real() * &c) + Float::with_val(prec, z.imag() * &s);
        let dist = if along <= 0 {
            modulus.clone()
        } else {
            let across = Float::with_val(prec, z.imag() * &c) - Float::with_val(prec, z.real() * &s);
            across.abs()
        };
        if dist < best {
            best = dist;
        }
    }
    best.to_f64()
}

/// Principal `p`-th root: argument in `(−π/p, π/p]`.
pub fn principal_root(z: &Complex, p: usize) -> Complex {
    let prec = z.prec().0;
    if z.is_zero() {
        return Complex::new(prec);
    }
    let modulus = cabs(z).root(p as u32);
    let arg = Float::with_val(prec, z.arg_ref()) / p as u32;
    let (s, c) = arg.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c * &modulus, s * &modulus))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorStep {
    pub m: usize,
    /// Largest distance from a pulled-back zero `w`, divided by `γ`, to `S_p`.
    pub max_scaled_star_distance: f64,
    /// Largest distance from a pulled-back zero to `γ·Z(exp(−D^p)x^d)`.
    pub containment_epsilon_needed: f64,
    pub contained: bool,
    /// Each limit zero `b` attracts exactly `m(b)` pulled-back zeros within `ε`.
    pub multiplicity_match: bool,
    /// Present when `d ≡ 0` or `1 (mod p)`: all zeros of `φ(D)^m f` simple.
    pub all_simple: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorReport {
    pub p: usize,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    pub degree: usize,
    #[serde(with = "serde_complex")]
    pub gamma: Complex,
    pub epsilon: f64,
    /// Zeros of `exp(βD^p)x^d = γ^d·(exp(−D^p)x^d)(x/γ)`.
    pub limit_zeros: Vec<RootRecord>,
    pub steps: Vec<AttractorStep>,
}

pub fn attractor_experiment(
    phi: &PowerSeries,
    f: &Poly,
    m_list: &[usize],
    epsilon: f64,
    cfg: &RootConfig,
) -> Result<AttractorReport> {
    let (_, p, alpha, beta) = general_parts(phi)?;
    let d = monic_degree(f)?;
    let ms = sorted_ms(m_list)?;
    let prec = cfg.precision_bits;
    let gamma = principal_root(&Complex::with_val(prec, &Rational::from(-&beta)), p);

    let base = exp_dp_monomial(&Rational::from(-1), p, d);
    let base_roots = roots::find_roots_exact(&base, cfg)?;
    let targets: Vec<(Complex, usize)> = base_roots
        .roots
        .iter()
        .map(|r| (Complex::with_val(prec, &r.location * &gamma), r.multiplicity))
        .collect();
    let limit_zeros = targets
        .iter()
        .map(|(z, k)| RootRecord {
            re: z.real().to_f64(),
            im: z.imag().to_f64(),
            multiplicity: *k,
            residual: 0.0,
        })
        .collect();
    let check_simple = d % p <= 1;
    let alpha_f = Float::with_val(prec, &alpha);

    let mut steps = Vec::with_capacity(ms.len());
    for_each_iterate(phi, f, &ms, |m, g| {
        let rs = roots::find_roots_exact(g, cfg)?;
        let scale = Float::with_val(prec, m as u64).root(p as u32);
        let shift = Float::with_val(prec, &alpha_f * m as u64);
        let mut needed = Float::new(prec);
        let mut star = 0.0f64;
        let mut attracted = vec![0usize; targets.len()];
        for r in &rs.roots {
            let w = Complex::with_val(prec, &r.location + &shift) / &scale;
            let mut nearest = Float::with_val(prec, f64::INFINITY);
            for (i, (t, _)) in targets.iter().enumerate() {
                let dist = cabs(&Complex::with_val(prec, &w - t));
                if dist < epsilon {
                    attracted[i] += r.multiplicity;
                }
                if dist < nearest {
                    nearest = dist;
                }
            }
            if nearest > needed {
                needed = nearest;
            }
            star = star.max(star_distance(&Complex::with_val(prec, &w / &gamma), p));
        }
        let multiplicity_match = targets.iter().zip(&attracted).all(|((_, k), a)| k == a);
        let needed = needed.to_f64();
        steps.push(AttractorStep {
            m,
            max_scaled_star_distance: star,
            containment_epsilon_needed: needed,
            contained: needed < epsilon,
            multiplicity_match,
            all_simple: check_simple.then(|| rs.roots.iter().all(|r| r.multiplicity == 1)),
        });
        Ok(())
    })?;
    Ok(AttractorReport {
        p,
        alpha,
        beta,
        degree: d,
        gamma,
        epsilon,
        limit_zeros,
        steps,
    })
}

/// `e^{2πi/p}`.
pub fn unit_root(p: usize, prec: u32) -> Complex {
    let theta = Float::with_val(prec, Constant::Pi) * 2u32 / p as u32;
    let (s, c) = theta.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}
