//! Finite stages of the counterexample product
//! `f_N = Π_{k≤N} (1 + γ(k)x)^{d(k)}`.
//!
//! Stage `k` contributes `g_k = γ(k)^{d(k)}·T^{1/γ(k)}M^{d(k)}`, so the
//! iterates `φ(D)^m g_k` have their zeros at `a − 1/γ(k)` for each zero `a`
//! of `φ(D)^m M^{d(k)}`. Shrinking `γ(k)` pushes those zeros far to the left,
//! where the earlier stages barely disturb them. The search for `γ(k)` is a
//! halving loop that stops at the first value where every target disk still
//! holds a zero, and `verify_counterexample` rechecks the whole plan from
//! scratch.
//!
//! A factor `x^μ` of `φ` is stripped first and the construction runs on the
//! cofactor `ψ`; `μ` is kept in the plan.

use rug::{Complex, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{apply_operator, iterate_operator, Poly};
use crate::roots::{self, RootConfig, RootRecord, RootSet};
use crate::series::{factor_out_zero, PowerSeries};
use crate::util::{cabs, serde_complex, serde_rational, serde_rational_vec};

pub const DEFAULT_MAX_HALVINGS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub m: usize,
    pub k: usize,
    /// Chosen upper-half-plane zero `a(m,k)` of `ψ(D)^m x^{d(k)}`.
    #[serde(with = "serde_complex")]
    pub a: Complex,
    /// `Im a(m,k) / 2`.
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub mu: usize,
    pub degrees: Vec<usize>,
    /// `γ(1), …` for the stages fixed so far; may be shorter than `degrees`.
    #[serde(with = "serde_rational_vec")]
    pub gammas: Vec<Rational>,
    pub targets: Vec<Target>,
    pub coefficient_bound_ok: Vec<bool>,
}

impl StagePlan {
    pub fn new(mu: usize, degrees: Vec<usize>, targets: Vec<Target>) -> Self {
        StagePlan {
            mu,
            degrees,
            gammas: Vec::new(),
            targets,
            coefficient_bound_ok: Vec::new(),
        }
    }

    pub fn fixed_stages(&self) -> usize {
        self.gammas.len()
    }

    pub fn target(&self, m: usize, k: usize) -> Option<&Target> {
        self.targets.iter().find(|t| t.m == m && t.k == k)
    }

    /// Keeps only stages `1..=n`.
    pub fn truncate(&self, n: usize) -> StagePlan {
        StagePlan {
            mu: self.mu,
            degrees: self.degrees.iter().take(n).copied().collect(),
            gammas: self.gammas.iter().take(n).cloned().collect(),
            targets: self.targets.iter().filter(|t| t.k <= n).cloned().collect(),
            coefficient_bound_ok: self.coefficient_bound_ok.iter().take(n).copied().collect(),
        }
    }

    /// Center and radius of the disk `D(a(m,k) − 1/γ(k); r(m,k))`.
    fn disk(&self, m: usize, k: usize, prec: u32) -> Result<(Complex, f64)> {
        let t = self
            .target(m, k)
            .ok_or_else(|| Error::InvalidInput(format!("plan has no target for m = {m}, k = {k}")))?;
        let gamma = self
            .gammas
            .get(k - 1)
            .ok_or_else(|| Error::InvalidInput(format!("stage {k} has no gamma")))?;
        let shift = Rational::from(gamma.recip_ref());
        Ok((Complex::with_val(prec, &t.a - shift), t.radius))
    }
}

fn cofactor(phi: &PowerSeries) -> Result<(usize, PowerSeries)> {
    factor_out_zero(phi)
}

/// Least increasing degrees `d(1) < … < d(count)` with
/// `Z_C(ψ(D)^m x^{d(m)}) > 0`.
pub fn find_degree_witnesses(phi: &PowerSeries, count: usize, d_cap: usize, cfg: &RootConfig) -> Result<Vec<usize>> {
    let (_, psi) = cofactor(phi)?;
    let mut degrees = Vec::with_capacity(count);
    let mut prev = 0;
    for m in 1..=count {
        let mut found = None;
        for d in prev + 1..=d_cap {
            let g = iterate_operator(&psi, &Poly::monomial(d), m)?;
            if roots::count_nonreal(&g, cfg)?.nonreal_count > 0 {
                found = Some(d);
                break;
            }
        }
        let d = found.ok_or(Error::WitnessNotFound { m, d_cap })?;
        degrees.push(d);
        prev = d;
    }
    Ok(degrees)
}

/// Upper-half-plane zero with the largest imaginary part; ties go to the
/// smallest real part.
fn top_zero(rs: &RootSet, cfg: &RootConfig) -> Option<Complex> {
    let tie = cfg.cluster_radius();
    let mut best: Option<&Complex> = None;
    for r in rs.roots.iter().filter(|r| !r.is_real(cfg.real_tolerance) && r.im() > 0.0) {
        let z = &r.location;
        best = match best {
            None => Some(z),
            Some(b) => {
                let (zi, bi) = (z.imag().to_f64(), b.imag().to_f64());
                if (zi - bi).abs() <= tie * (1.0 + bi.abs()) {
                    if z.real() < b.real() {
                        Some(z)
                    } else {
                        Some(b)
                    }
                } else if zi > bi {
                    Some(z)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.cloned()
}

pub fn pick_targets(phi: &PowerSeries, degrees: &[usize], cfg: &RootConfig) -> Result<Vec<Target>> {
    let (_, psi) = cofactor(phi)?;
    let mut targets = Vec::new();
    for (idx, &d) in degrees.iter().enumerate() {
        let k = idx + 1;
        let mut g = Poly::monomial(d);
        for m in 1..=k {
            g = apply_operator(&psi, &g)?;
            let rs = roots::find_roots_exact(&g, cfg)?;
            let a = top_zero(&rs, cfg).ok_or(Error::NoNonrealZero { m, degree: d })?;
            let radius = a.imag().to_f64() / 2.0;
            targets.push(Target { m, k, a, radius });
        }
    }
    Ok(targets)
}

pub fn build_partial_product(plan: &StagePlan, n: usize) -> Result<Poly> {
    if n > plan.gammas.len() || n > plan.degrees.len() {
        return Err(Error::InvalidInput(format!(
            "only {} stages are fixed, {n} requested",
            plan.gammas.len()
        )));
    }
    let mut f = Poly::constant(Rational::from(1));
    for (gamma, &d) in plan.gammas.iter().zip(&plan.degrees).take(n) {
        let factor = Poly::new(vec![Rational::from(1), gamma.clone()]);
        f = &f * &factor.pow(d);
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskWitness {
    pub m: usize,
    pub k: usize,
    #[serde(with = "serde_complex")]
    pub center: Complex,
    pub radius: f64,
    pub zeros_inside: usize,
    pub boundary_ties: usize,
    pub witness: Option<RootRecord>,
}

/// Where the disk checks for one `m` failed first, if anywhere.
enum DiskFailure {
    Overlap(usize, usize),
    OnAxis(usize),
    Empty(usize),
}

fn check_disks(
    plan: &StagePlan,
    m: usize,
    upto: usize,
    rs: &RootSet,
    prec: u32,
    strict: bool,
) -> Result<(Vec<DiskWitness>, Option<DiskFailure>)> {
    let disks: Vec<(usize, Complex, f64)> = (m..=upto)
        .map(|k| plan.disk(m, k, prec).map(|(c, r)| (k, c, r)))
        .collect::<Result<_>>()?;
    for (i, (ki, ci, ri)) in disks.iter().enumerate() {
        for (kj, cj, rj) in &disks[i + 1..] {
            let dist = cabs(&Complex::with_val(prec, ci - cj)).to_f64();
            if dist <= ri + rj {
                return Ok((Vec::new(), Some(DiskFailure::Overlap(*ki, *kj))));
            }
        }
    }
    let mut witnesses = Vec::with_capacity(disks.len());
    for (k, center, radius) in disks {
        if center.imag().to_f64().abs() <= radius || radius.is_nan() || radius <= 0.0 {
            return Ok((witnesses, Some(DiskFailure::OnAxis(k))));
        }
        let count = roots::disk_membership(rs, &center, radius);
        let usable = if strict {
            count.inside - count.boundary_ties
        } else {
            count.inside
        };
        let witness = rs
            .roots
            .iter()
            .filter(|r| cabs(&Complex::with_val(prec, &r.location - &center)).to_f64() < radius)
            .map(|r| RootRecord {
                re: r.re(),
                im: r.im(),
                multiplicity: r.multiplicity,
                residual: r.residual,
            })
            .next();
        witnesses.push(DiskWitness {
            m,
            k,
            center,
            radius,
            zeros_inside: count.inside,
            boundary_ties: count.boundary_ties,
            witness,
        });
        if usable == 0 {
            return Ok((witnesses, Some(DiskFailure::Empty(k))));
        }
    }
    Ok((witnesses, None))
}

/// Checks that each `ψ(D)^m f_k`, `m ≤ k`, keeps a zero in every disk of
/// stages `m..=k`, with the disks disjoint and off the real axis.
fn persistence_holds(psi: &PowerSeries, plan: &StagePlan, k: usize, cfg: &RootConfig) -> Result<bool> {
    let f = build_partial_product(plan, k)?;
    let mut g = f;
    for m in 1..=k {
        g = apply_operator(psi, &g)?;
        let rs = roots::find_roots_exact(&g, cfg)?;
        let (_, failure) = check_disks(plan, m, k, &rs, cfg.precision_bits, false)?;
        if failure.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First `γ` in `gamma0, gamma0/2, …` (at most `max_halvings` halvings)
/// that keeps every target disk populated once stage `k` is appended.
pub fn choose_gamma(
    phi: &PowerSeries,
    plan: &StagePlan,
    k: usize,
    gamma0: &Rational,
    max_halvings: usize,
    cfg: &RootConfig,
) -> Result<Rational> {
    if *gamma0 <= 0 {
        return Err(Error::InvalidInput("gamma0 must be positive".into()));
    }
    if k == 0 || k > plan.degrees.len() || plan.gammas.len() != k - 1 {
        return Err(Error::InvalidInput(format!(
            "stage {k} needs exactly {} fixed stages, plan has {}",
            k.saturating_sub(1),
            plan.gammas.len()
        )));
    }
    let (_, psi) = cofactor(phi)?;
    let mut trial = plan.clone();
    let mut gamma = gamma0.clone();
    for _ in 0..=max_halvings {
        trial.gammas.truncate(k - 1);
        trial.gammas.push(gamma.clone());
        if persistence_holds(&psi, &trial, k, cfg)? {
            return Ok(gamma);
        }
        gamma /= 2u32;
    }
    Err(Error::GammaSearchExhausted { stage: k, max_halvings })
}

/// Appends `γ(k)` and records whether `f_k` has positive coefficients.
pub fn fix_stage(plan: &mut StagePlan, gamma: Rational) -> Result<()> {
    if plan.gammas.len() >= plan.degrees.len() {
        return Err(Error::InvalidInput("every stage is already fixed".into()));
    }
    plan.gammas.push(gamma);
    let f = build_partial_product(plan, plan.gammas.len())?;
    plan.coefficient_bound_ok.push(f.coeffs().iter().all(|c| *c > 0));
    Ok(())
}

/// Runs the whole pipeline for `n` stages.
pub fn construct(
    phi: &PowerSeries,
    n: usize,
    gamma0: &Rational,
    d_cap: usize,
    max_halvings: usize,
    cfg: &RootConfig,
) -> Result<StagePlan> {
    let (mu, _) = cofactor(phi)?;
    let degrees = find_degree_witnesses(phi, n, d_cap, cfg)?;
    let targets = pick_targets(phi, &degrees, cfg)?;
    let mut plan = StagePlan::new(mu, degrees, targets);
    resume(phi, &mut plan, gamma0, max_halvings, cfg)?;
    Ok(plan)
}

/// Fixes the remaining stages of a partially built plan.
pub fn resume(
    phi: &PowerSeries,
    plan: &mut StagePlan,
    gamma0: &Rational,
    max_halvings: usize,
    cfg: &RootConfig,
) -> Result<()> {
    for k in plan.gammas.len() + 1..=plan.degrees.len() {
        let gamma = choose_gamma(phi, plan, k, gamma0, max_halvings, cfg)?;
        log::info!("stage {k}: gamma = {gamma}");
        fix_stage(plan, gamma)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonrealTotal {
    pub m: usize,
    pub degree: usize,
    pub nonreal_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub plan: StagePlan,
    pub n: usize,
    pub m_checked: usize,
    pub disks: Vec<DiskWitness>,
    pub nonreal_totals: Vec<NonrealTotal>,
    pub f_n: Poly,
    #[serde(with = "serde_rational")]
    pub derivative_at_zero: Rational,
}

fn fail(msg: String) -> Error {
    Error::VerificationFailed(msg)
}

/// Recomputes every target and every disk population for `m = 1..=m_count`
/// without reusing anything from the search.
pub fn verify_counterexample(
    phi: &PowerSeries,
    plan: &StagePlan,
    n: usize,
    m_count: usize,
    cfg: &RootConfig,
) -> Result<CounterexampleReport> {
    if m_count > n {
        return Err(Error::InvalidInput(format!("M = {m_count} exceeds N = {n}")));
    }
    if n > plan.gammas.len() || n > plan.degrees.len() {
        return Err(Error::InvalidInput(format!("plan fixes {} stages, N = {n}", plan.gammas.len())));
    }
    let prec = cfg.precision_bits;
    let plan = plan.truncate(n);
    let (mu, psi) = cofactor(phi)?;
    if mu != plan.mu {
        return Err(fail(format!("plan records mu = {}, operator has mu = {mu}", plan.mu)));
    }
    if plan.degrees.windows(2).any(|w| w[0] >= w[1]) || plan.degrees.first() == Some(&0) {
        return Err(fail("degrees are not strictly increasing positive integers".into()));
    }
    if let Some(k) = plan.gammas.iter().position(|g| *g <= 0) {
        return Err(fail(format!("gamma({}) is not positive", k + 1)));
    }

    let fresh = pick_targets(phi, &plan.degrees, cfg)?;
    for t in &fresh {
        let stored = plan
            .target(t.m, t.k)
            .ok_or_else(|| fail(format!("missing target a({}, {})", t.m, t.k)))?;
        let gap = cabs(&Complex::with_val(prec, &stored.a - &t.a)).to_f64();
        if gap > cfg.cluster_radius() * (1.0 + cabs(&t.a).to_f64()) {
            return Err(fail(format!("target a({}, {}) does not match the recomputed zero", t.m, t.k)));
        }
        if stored.radius.is_nan() || stored.radius <= 0.0 || (stored.radius - t.radius).abs() > 1e-12 * (1.0 + t.radius) {
            return Err(fail(format!("radius r({}, {}) is not Im a / 2", t.m, t.k)));
        }
    }

    let f_n = build_partial_product(&plan, n)?;
    if let Some(k) = f_n.coeffs().iter().position(|c| *c <= 0) {
        return Err(fail(format!("coefficient {k} of f_N is not positive")));
    }
    let derivative_at_zero = f_n.coeff(1);
    let expected: Rational = plan
        .gammas
        .iter()
        .zip(&plan.degrees)
        .map(|(g, &d)| Rational::from(g * d as u64))
        .sum();
    if derivative_at_zero != expected {
        return Err(fail("f_N'(0) differs from the sum of d(k)·gamma(k)".into()));
    }

    let mut disks = Vec::new();
    let mut nonreal_totals = Vec::new();
    let mut g = f_n.clone();
    for m in 1..=m_count {
        g = apply_operator(&psi, &g)?;
        let rs = roots::find_roots_exact(&g, cfg)?;
        let (found, failure) = check_disks(&plan, m, n, &rs, prec, true)?;
        match failure {
            Some(DiskFailure::Overlap(a, b)) => {
                return Err(fail(format!("disjointness: disks k = {a} and k = {b} overlap at m = {m}")))
            }
            Some(DiskFailure::OnAxis(k)) => {
                return Err(fail(format!("disk k = {k} meets the real axis at m = {m}")))
            }
            Some(DiskFailure::Empty(k)) => {
                return Err(fail(format!("no zero strictly inside disk k = {k} at m = {m}")))
            }
            None => {}
        }
        disks.extend(found);
        let count = roots::count_nonreal(&g, cfg)?;
        if count.nonreal_count < n - m + 1 {
            return Err(fail(format!(
                "only {} nonreal zeros at m = {m}, expected at least {}",
                count.nonreal_count,
                n - m + 1
            )));
        }
        nonreal_totals.push(NonrealTotal {
            m,
            degree: count.total,
            nonreal_count: count.nonreal_count,
        });
    }

    Ok(CounterexampleReport {
        plan,
        n,
        m_checked: m_count,
        disks,
        nonreal_totals,
        f_n,
        derivative_at_zero,
    })
}
