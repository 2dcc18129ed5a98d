//! Complex root finding with residual certificates, plus exact real-root
//! counting with Sturm chains for the nonreal-zero count `Z_C`.
//!
//! Rational inputs of moderate degree go through an exact square-free
//! decomposition first, so multiplicities are exact and the floating
//! iteration only ever sees simple roots. Floating inputs rely on cluster
//! merging instead.

use std::cmp::Ordering;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::util::{cabs, czero};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    pub precision_bits: u32,
    /// Relative realness tolerance: `r` is real iff `|Im r| ≤ tol·(1 + |r|)`.
    pub real_tolerance: f64,
    /// Iteration budget for the simultaneous iteration; `0` picks one from
    /// the degree.
    pub max_iterations: usize,
    /// Exact paths (square-free decomposition, Sturm chains) are used up to
    /// this degree.
    pub exact_degree_limit: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            precision_bits: crate::DEFAULT_PRECISION,
            real_tolerance: 1e-9,
            max_iterations: 0,
            exact_degree_limit: 64,
        }
    }
}

impl RootConfig {
    pub fn with_precision(precision_bits: u32) -> Self {
        RootConfig {
            precision_bits,
            ..Self::default()
        }
    }

    /// Roots closer than this (relative to `1 + |r|`) are one multiple root.
    pub fn cluster_radius(&self) -> f64 {
        2f64.powi(-(self.precision_bits as i32) / 4)
    }

    /// Largest accepted residual.
    pub fn certification_threshold(&self) -> f64 {
        2f64.powi(-(self.precision_bits as i32) / 2)
    }

    fn budget(&self, n: usize) -> usize {
        if self.max_iterations > 0 {
            self.max_iterations
        } else {
            200 + 20 * n
        }
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub location: Complex,
    pub multiplicity: usize,
    /// `|f(r)| / (‖f‖_∞ · max(1,|r|)^deg)`.
    pub residual: f64,
}

impl Root {
    pub fn re(&self) -> f64 {
        self.location.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.location.imag().to_f64()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let im = Float::with_val(53, self.location.imag().abs_ref());
        let modulus = cabs(&self.location).to_f64();
        im.to_f64() <= tol * (1.0 + modulus)
    }
}

/// Tabular form of a root: one row per distinct root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub source_degree: usize,
    pub precision_bits: u32,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Root locations repeated by multiplicity.
    pub fn expanded(&self) -> Vec<Complex> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location.clone(), r.multiplicity))
            .collect()
    }

    pub fn records(&self) -> Vec<RootRecord> {
        self.roots
            .iter()
            .map(|r| RootRecord {
                re: r.re(),
                im: r.im(),
                multiplicity: r.multiplicity,
                residual: r.residual,
            })
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn zero_count(&self, tol: f64) -> ZeroCount {
        let real_count = self
            .roots
            .iter()
            .filter(|r| r.is_real(tol))
            .map(|r| r.multiplicity)
            .sum();
        let total = self.total_multiplicity();
        ZeroCount {
            total,
            real_count,
            nonreal_count: total - real_count,
            method: CountMethod::Floating,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMethod {
    Exact,
    Floating,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub total: usize,
    pub real_count: usize,
    pub nonreal_count: usize,
    pub method: CountMethod,
}

/// Result of a disk query; boundary ties are already included in `inside`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCount {
    pub inside: usize,
    pub boundary_ties: usize,
}

/// Finds all roots of a floating polynomial at its own precision.
pub fn find_roots(f: &CPoly, cfg: &RootConfig) -> Result<RootSet> {
    let deg = check_degree(f.degree())?;
    let prec = f.prec();
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = CPoly::new(f.coeffs()[zeros..].to_vec(), prec);
    let approx = aberth(&reduced, cfg)?;
    let mut roots = cluster(approx, cfg);
    for r in roots.iter_mut().filter(|r| r.multiplicity == 1) {
        polish(&reduced, &mut r.location);
    }
    if zeros > 0 {
        roots.push(Root {
            location: czero(prec),
            multiplicity: zeros,
            residual: 0.0,
        });
    }
    finish(f, roots, deg, cfg)
}

/// Finds all roots of an exact polynomial. Up to the exact degree limit the
/// polynomial is split into square-free factors first, so every reported
/// multiplicity is exact.
pub fn find_roots_exact(f: &Poly, cfg: &RootConfig) -> Result<RootSet> {
    let deg = check_degree(f.degree())?;
    let prec = cfg.precision_bits;
    if deg > cfg.exact_degree_limit {
        log::warn!("degree {deg} exceeds the exact limit; multiplicities come from clustering");
        return find_roots(&f.to_cpoly(prec), cfg);
    }
    let mut roots = Vec::new();
    for (factor, mult) in square_free_decomposition(f) {
        let zeros = factor.coeffs().iter().take_while(|c| **c == 0).count();
        if zeros > 0 {
            roots.push(Root {
                location: czero(prec),
                multiplicity: mult,
                residual: 0.0,
            });
        }
        let reduced = Poly::new(factor.coeffs()[zeros..].to_vec());
        if reduced.degree().unwrap_or(0) == 0 {
            continue;
        }
        let cp = reduced.to_cpoly(prec);
        for mut z in aberth(&cp, cfg)? {
            polish(&cp, &mut z);
            roots.push(Root {
                location: z,
                multiplicity: mult,
                residual: 0.0,
            });
        }
    }
    finish(&f.to_cpoly(prec), roots, deg, cfg)
}

fn check_degree(deg: Option<usize>) -> Result<usize> {
    match deg {
        None => Err(Error::InvalidInput("the zero polynomial has no finite root set".into())),
        Some(0) => Err(Error::DegreeZero),
        Some(d) => Ok(d),
    }
}

fn finish(f: &CPoly, mut roots: Vec<Root>, deg: usize, cfg: &RootConfig) -> Result<RootSet> {
    let norm = f.sup_norm();
    for r in roots.iter_mut() {
        r.residual = residual(f, &norm, &r.location, deg);
    }
    roots.sort_by(|a, b| cmp_complex(&a.location, &b.location));
    let rs = RootSet {
        roots,
        source_degree: deg,
        precision_bits: f.prec(),
    };
    debug_assert_eq!(rs.total_multiplicity(), deg);
    let worst = rs.max_residual();
    if worst > cfg.certification_threshold() {
        return Err(Error::NoConvergence {
            iterations: cfg.budget(deg),
            worst_residual: worst,
        });
    }
    Ok(rs)
}

fn residual(f: &CPoly, norm: &Float, z: &Complex, deg: usize) -> f64 {
    let v = cabs(&f.eval(z));
    if v.is_zero() {
        return 0.0;
    }
    let mut scale = cabs(z);
    if scale < 1 {
        scale = Float::with_val(f.prec(), 1);
    }
    let denom = Float::with_val(f.prec(), (&scale).pow(deg as u32)) * norm;
    Float::with_val(f.prec(), v / denom).to_f64()
}

fn cmp_complex(a: &Complex, b: &Complex) -> Ordering {
    a.real()
        .partial_cmp(b.real())
        .unwrap_or(Ordering::Equal)
        .then(a.imag().partial_cmp(b.imag()).unwrap_or(Ordering::Equal))
}

/// Starting points from the Newton polygon of `log|a_k|`: each edge of the
/// upper convex hull contributes a circle whose radius is the edge slope.
fn initial_guesses(f: &CPoly) -> Vec<Complex> {
    let prec = f.prec();
    let n = f.degree().unwrap_or(0);
    let pts: Vec<(usize, f64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, cabs(c).ln().to_f64()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let ((i, li), (j, lj)) = (w[0], w[1]);
        let count = j - i;
        let radius = Float::with_val(prec, (li - lj) / count as f64).exp();
        for t in 0..count {
            let angle: Float = Float::with_val(prec, &two_pi * (t as f64 / count as f64 + i as f64 / n as f64)) + 0.7;
            let (s, c) = angle.sin_cos(Float::new(prec));
            out.push(Complex::with_val(prec, (c * &radius, s * &radius)));
        }
    }
    out
}

/// Simultaneous Aberth-Ehrlich iteration, Gauss-Seidel style. The input
/// must have a nonzero constant term.
fn aberth(f: &CPoly, cfg: &RootConfig) -> Result<Vec<Complex>> {
    let prec = f.prec();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let c = f.coeffs();
        return Ok(vec![-Complex::with_val(prec, &c[0] / &c[1])]);
    }
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let stop = Float::with_val(prec, &eps * (4 * (n + 1)) as u32);
    let mut z = initial_guesses(f);
    let mut done = vec![false; n];
    let budget = cfg.budget(n);
    for _ in 0..budget {
        let mut active = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (fv, dfv, mag) = f.eval_with_derivative(&z[i]);
            if cabs(&fv) <= Float::with_val(prec, &mag * &stop) {
                done[i] = true;
                continue;
            }
            active = true;
            if dfv.is_zero() {
                let nudge = Complex::with_val(prec, (1.0 + 1e-3, 1e-3));
                z[i] *= nudge;
                continue;
            }
            let ratio = Complex::with_val(prec, &fv / &dfv);
            let mut s = czero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff = Complex::with_val(prec, &z[i] - zj);
                if !diff.is_zero() {
                    s += diff.recip();
                }
            }
            let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &ratio * &s));
            let step = if denom.is_zero() {
                ratio
            } else {
                Complex::with_val(prec, &ratio / &denom)
            };
            if cabs(&step) <= Float::with_val(prec, cabs(&z[i]) * &stop) {
                done[i] = true;
            }
            z[i] -= step;
        }
        if !active {
            return Ok(z);
        }
    }
    let norm = f.sup_norm();
    let worst = z
        .iter()
        .map(|zi| residual(f, &norm, zi, n))
        .fold(0.0, f64::max);
    if worst <= cfg.certification_threshold() {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: budget,
        worst_residual: worst,
    })
}

fn polish(f: &CPoly, z: &mut Complex) {
    let prec = f.prec();
    let mut best = cabs(&f.eval(z));
    for _ in 0..3 {
        if best.is_zero() {
            return;
        }
        let (fv, dfv, _) = f.eval_with_derivative(z);
        if dfv.is_zero() {
            return;
        }
        let cand = Complex::with_val(prec, &*z - Complex::with_val(prec, &fv / &dfv));
        let val = cabs(&f.eval(&cand));
        if val < best {
            best = val;
            *z = cand;
        } else {
            return;
        }
    }
}

/// Merges approximations within the cluster radius into multiple roots
/// located at the cluster centroid.
fn cluster(approx: Vec<Complex>, cfg: &RootConfig) -> Vec<Root> {
    let n = approx.len();
    let prec = cfg.precision_bits.max(approx.first().map_or(53, |z| z.prec().0));
    let radius = cfg.cluster_radius();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = cabs(&Complex::with_val(prec, &approx[i] - &approx[j])).to_f64();
            let scale = 1.0 + cabs(&approx[i]).to_f64().max(cabs(&approx[j]).to_f64());
            if d <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
        .into_iter()
        .map(|g| {
            let mut sum = czero(prec);
            for &i in &g {
                sum += &approx[i];
            }
            sum /= g.len() as u32;
            Root {
                location: sum,
                multiplicity: g.len(),
                residual: 0.0,
            }
        })
        .collect()
}

/// Yun's square-free decomposition: `f = c·Π g_i^i` with each `g_i` monic
/// and square-free. Returns the nonconstant `(g_i, i)`.
pub fn square_free_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Number of distinct real roots of a square-free polynomial.
pub fn sturm_distinct_real_roots(g: &Poly) -> usize {
    let Some(deg) = g.degree() else { return 0 };
    if deg == 0 {
        return 0;
    }
    let mut chain = vec![g.primitive(), g.derivative().primitive()];
    loop {
        let n = chain.len();
        if chain[n - 1].degree().unwrap_or(0) == 0 {
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push((-&r).primitive());
    }
    let sign_at = |p: &Poly, neg_inf: bool| -> i32 {
        let lc = p.leading().map_or(0, |c| c.cmp0() as i32);
        let deg = p.degree().unwrap_or(0);
        if neg_inf && deg % 2 == 1 {
            -lc
        } else {
            lc
        }
    };
    let variations = |neg_inf: bool| -> usize {
        let signs: Vec<i32> = chain
            .iter()
            .map(|p| sign_at(p, neg_inf))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(true) - variations(false)
}

/// `Z_C` with real/nonreal split. Rational input up to the exact degree
/// limit is counted with Sturm chains; no tolerance is involved.
pub fn count_nonreal(f: &Poly, cfg: &RootConfig) -> Result<ZeroCount> {
    let Some(deg) = f.degree() else {
        return Err(Error::InvalidInput("the zero polynomial has infinitely many zeros".into()));
    };
    if deg > cfg.exact_degree_limit {
        log::warn!("degree {deg} exceeds the exact limit; counting with floating roots");
        return Ok(find_roots(&f.to_cpoly(cfg.precision_bits), cfg)?.zero_count(cfg.real_tolerance));
    }
    let real_count = square_free_decomposition(f)
        .iter()
        .map(|(g, i)| i * sturm_distinct_real_roots(g))
        .sum();
    Ok(ZeroCount {
        total: deg,
        real_count,
        nonreal_count: deg - real_count,
        method: CountMethod::Exact,
    })
}

pub fn count_nonreal_float(f: &CPoly, cfg: &RootConfig) -> Result<ZeroCount> {
    if f.degree() == Some(0) {
        return Ok(ZeroCount {
            total: 0,
            real_count: 0,
            nonreal_count: 0,
            method: CountMethod::Floating,
        });
    }
    Ok(find_roots(f, cfg)?.zero_count(cfg.real_tolerance))
}

/// All zeros real and simple. Nonzero constants qualify vacuously.
pub fn all_real_simple(f: &Poly, cfg: &RootConfig) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Err(Error::InvalidInput("the zero polynomial has infinitely many zeros".into()));
    };
    if deg == 0 {
        return Ok(true);
    }
    if deg > cfg.exact_degree_limit {
        return all_real_simple_float(&f.to_cpoly(cfg.precision_bits), cfg);
    }
    if f.gcd(&f.derivative()).degree() != Some(0) {
        return Ok(false);
    }
    Ok(sturm_distinct_real_roots(f) == deg)
}

/// Floating version. Every root must be real and no two roots may sit within
/// the cluster radius of each other.
pub fn all_real_simple_float(f: &CPoly, cfg: &RootConfig) -> Result<bool> {
    if f.degree() == Some(0) {
        return Ok(true);
    }
    let rs = find_roots(f, cfg)?;
    if rs.roots.iter().any(|r| r.multiplicity > 1 || !r.is_real(cfg.real_tolerance)) {
        return Ok(false);
    }
    Ok(min_relative_gap(&rs) > cfg.cluster_radius())
}

/// Smallest `|r_i − r_j| / (1 + max(|r_i|,|r_j|))` over distinct roots.
pub fn min_relative_gap(rs: &RootSet) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in rs.roots.iter().enumerate() {
        for b in &rs.roots[i + 1..] {
            let d = cabs(&Complex::with_val(rs.precision_bits, &a.location - &b.location)).to_f64();
            let s = 1.0 + cabs(&a.location).to_f64().max(cabs(&b.location).to_f64());
            best = best.min(d / s);
        }
    }
    best
}

/// Roots (with multiplicity) strictly inside the open disk. A root within
/// the cluster radius of the boundary counts as inside and as a tie.
pub fn disk_membership(rs: &RootSet, center: &Complex, radius: f64) -> DiskCount {
    let prec = rs.precision_bits;
    let tol_rel = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 4));
    let mut out = DiskCount::default();
    for r in &rs.roots {
        let d = cabs(&Complex::with_val(prec, &r.location - center));
        let tol = Float::with_val(prec, cabs(&r.location) + 1u32) * &tol_rel;
        if d < Float::with_val(prec, &tol + radius) {
            out.inside += r.multiplicity;
            if d >= Float::with_val(prec, radius - &tol) {
                out.boundary_ties += r.multiplicity;
            }
        }
    }
    out
}

pub fn roots_in_disk(rs: &RootSet, center: &Complex, radius: f64) -> usize {
    disk_membership(rs, center, radius).inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::Rational;

    fn cfg() -> RootConfig {
        RootConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(256, (re, im))
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        cabs(&Complex::with_val(256, a - b)).to_f64() < tol
    }

    #[test]
    fn quadratic_roots() {
        let rs = find_roots_exact(&Poly::from_i64s(&[2, 2, 1]), &cfg()).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!(close(&rs.roots[0].location, &c(-1.0, -1.0), 1e-60));
        assert!(close(&rs.roots[1].location, &c(-1.0, 1.0), 1e-60));
        assert!(rs.roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn cube_root_of_six() {
        let rs = find_roots_exact(&Poly::from_i64s(&[-6, 0, 0, 1]), &cfg()).unwrap();
        let r = Float::with_val(256, 6).cbrt();
        let two_pi_3 = Float::with_val(256, Constant::Pi) * 2u32 / 3u32;
        let expect = [
            Complex::with_val(256, (Float::with_val(256, &r * two_pi_3.clone().cos()), -Float::with_val(256, &r * two_pi_3.clone().sin()))),
            Complex::with_val(256, (Float::with_val(256, &r * two_pi_3.clone().cos()), Float::with_val(256, &r * two_pi_3.clone().sin()))),
            Complex::with_val(256, &r),
        ];
        for e in &expect {
            assert!(rs.roots.iter().any(|x| close(&x.location, e, 1e-60)), "missing {e}");
        }
    }

    #[test]
    fn perfect_cube_exact_and_floating() {
        let f = Poly::from_i64s(&[-1, 3, -3, 1]);
        let rs = find_roots_exact(&f, &cfg()).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!(close(&rs.roots[0].location, &c(1.0, 0.0), 1e-60));

        let rs = find_roots(&f.to_cpoly(256), &cfg()).unwrap();
        assert_eq!(rs.roots.len(), 1, "{:?}", rs.records());
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!(close(&rs.roots[0].location, &c(1.0, 0.0), 1e-20));
    }

    #[test]
    fn degree_errors() {
        assert_eq!(find_roots_exact(&Poly::from_i64s(&[4]), &cfg()).unwrap_err(), Error::DegreeZero);
        assert!(find_roots_exact(&Poly::zero(), &cfg()).is_err());
    }

    #[test]
    fn zero_root_stripping() {
        // x^3 (x^2 - 2)
        let rs = find_roots_exact(&Poly::from_i64s(&[0, 0, 0, -2, 0, 1]), &cfg()).unwrap();
        let zero = rs.roots.iter().find(|r| r.location.is_zero()).unwrap();
        assert_eq!(zero.multiplicity, 3);
        assert_eq!(rs.total_multiplicity(), 5);
        let rs = find_roots(&Poly::from_i64s(&[0, 0, 1, 1]).to_cpoly(256), &cfg()).unwrap();
        assert_eq!(rs.roots.iter().find(|r| r.location.is_zero()).unwrap().multiplicity, 2);
    }

    #[test]
    fn count_examples() {
        let n = count_nonreal(&Poly::from_i64s(&[0, 6, 0, 1]), &cfg()).unwrap();
        assert_eq!((n.total, n.real_count, n.nonreal_count), (3, 1, 2));
        let n = count_nonreal(&Poly::from_i64s(&[12, 0, -12, 0, 1]), &cfg()).unwrap();
        assert_eq!((n.total, n.real_count, n.nonreal_count), (4, 4, 0));
        let m = 7;
        let n = count_nonreal(&Poly::from_i64s(&[m * m - 3 * m, 2 * m, 1]), &cfg()).unwrap();
        assert_eq!((n.real_count, n.nonreal_count), (2, 0));
        assert_eq!(n.method, CountMethod::Exact);
        // multiplicities are counted: (x-1)^2 (x^2+1)^2
        let f = &Poly::from_i64s(&[1, -2, 1]) * &Poly::from_i64s(&[1, 0, 2, 0, 1]);
        let n = count_nonreal(&f, &cfg()).unwrap();
        assert_eq!((n.total, n.real_count, n.nonreal_count), (6, 2, 4));
    }

    #[test]
    fn floating_count_examples() {
        let n = count_nonreal_float(&Poly::from_i64s(&[0, 6, 0, 1]).to_cpoly(256), &cfg()).unwrap();
        assert_eq!((n.real_count, n.nonreal_count), (1, 2));
        assert_eq!(n.method, CountMethod::Floating);
    }

    #[test]
    fn all_real_simple_examples() {
        assert!(all_real_simple(&Poly::from_i64s(&[-1, 0, 1]), &cfg()).unwrap());
        assert!(!all_real_simple(&Poly::from_i64s(&[0, 0, 1]), &cfg()).unwrap());
        assert!(!all_real_simple(&Poly::from_i64s(&[1, 0, 1]), &cfg()).unwrap());
        assert!(all_real_simple_float(&Poly::from_i64s(&[-1, 0, 1]).to_cpoly(256), &cfg()).unwrap());
        assert!(!all_real_simple_float(&Poly::from_i64s(&[0, 0, 1]).to_cpoly(256), &cfg()).unwrap());
        assert!(!all_real_simple_float(&Poly::from_i64s(&[1, 0, 1]).to_cpoly(256), &cfg()).unwrap());
    }

    #[test]
    fn disk_examples() {
        let rs = find_roots_exact(&Poly::from_i64s(&[2, 2, 1]), &cfg()).unwrap();
        assert_eq!(roots_in_disk(&rs, &c(-1.0, 1.0), 0.5), 1);
        assert_eq!(roots_in_disk(&rs, &c(0.0, 0.0), 10.0), 2);
        assert_eq!(roots_in_disk(&rs, &c(5.0, 0.0), 0.1), 0);
        // boundary: -1+i sits exactly on the circle |z - (-1)| = 1
        let dc = disk_membership(&rs, &c(-1.0, 0.0), 1.0);
        assert_eq!(dc, DiskCount { inside: 2, boundary_ties: 2 });
    }

    #[test]
    fn widely_separated_scales() {
        // (x+1)^2 (x + 1000)^3 (x^2 + 1e-6)
        let f = &(&Poly::from_i64s(&[1, 1]).pow(2) * &Poly::from_i64s(&[1000, 1]).pow(3))
            * &Poly::new(vec![Rational::from((1, 1_000_000)), Rational::new(), Rational::from(1)]);
        let rs = find_roots_exact(&f, &cfg()).unwrap();
        assert_eq!(rs.total_multiplicity(), 7);
        let n = count_nonreal(&f, &cfg()).unwrap();
        assert_eq!(n.nonreal_count, 2);
        assert_eq!(rs.zero_count(1e-9).nonreal_count, 2);
    }

    #[test]
    fn root_records_serialize() {
        let rs = find_roots_exact(&Poly::from_i64s(&[2, 2, 1]), &cfg()).unwrap();
        let rec = rs.records();
        assert_eq!(rec.len(), 2);
        assert_eq!(rec[0].multiplicity, 1);
        assert!((rec[1].im - 1.0).abs() < 1e-15);
    }

    fn rat_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-8i64..=8, 1i64..=3), 2..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect()))
            .prop_filter("nonconstant", |p| p.degree().unwrap_or(0) >= 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exact_and_floating_real_counts_agree(f in rat_poly(12)) {
            let exact = count_nonreal(&f, &cfg()).unwrap();
            let float = count_nonreal_float(&f.to_cpoly(256), &cfg()).unwrap();
            prop_assert_eq!(exact.real_count, float.real_count);
        }

        #[test]
        fn nonreal_count_is_even(f in rat_poly(12)) {
            prop_assert_eq!(count_nonreal(&f, &cfg()).unwrap().nonreal_count % 2, 0);
        }

        #[test]
        fn rolle_monotonicity(f in rat_poly(12)) {
            prop_assume!(f.degree().unwrap() >= 2);
            let a = count_nonreal(&f, &cfg()).unwrap().nonreal_count;
            let b = count_nonreal(&f.derivative(), &cfg()).unwrap().nonreal_count;
            prop_assert!(b <= a);
        }

        #[test]
        fn conjugate_symmetry(f in rat_poly(10)) {
            let rs = find_roots(&f.to_cpoly(256), &cfg()).unwrap();
            for r in &rs.roots {
                let conj = Complex::with_val(256, r.location.conj_ref());
                let tol = 1e-15 * (1.0 + cabs(&r.location).to_f64());
                let partner = rs.roots.iter().find(|s| close(&s.location, &conj, tol));
                prop_assert!(partner.is_some_and(|s| s.multiplicity == r.multiplicity));
            }
        }

        #[test]
        fn multiplicities_sum_to_degree(f in rat_poly(10)) {
            let rs = find_roots_exact(&f, &cfg()).unwrap();
            prop_assert_eq!(rs.total_multiplicity(), f.degree().unwrap());
        }
    }
}
