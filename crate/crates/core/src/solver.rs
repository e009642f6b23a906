//! Single-jump recovery: annihilating polynomials on consecutive or
//! decimated moment samples, their roots, the N-th root branch choice, and
//! the Vandermonde solve for the magnitudes.

use crate::error::{Error, Result};
use crate::real::{cabs, carg, cis, cis_multiple, cscale, i_pow, wrap_angle_r, Real};
use crate::spectrum::{FourierSpectrum, MomentSequence};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

/// Largest reconstruction order the solver supports.
pub const MAX_ORDER: usize = 16;

const MAX_ITERATIONS: usize = 500;
/// Fixed irrational angular offset for the initial Aberth guesses.
const START_ANGLE: f64 = 0.707_106_781_186_547_5;
const ROOT_RESIDUAL_TOL: f64 = 1e-11;
const TIE_TOL: f64 = 1e-14;
const AMBIGUITY_TOL: f64 = 1e-12;
const VANDERMONDE_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Integer polynomial families
// ---------------------------------------------------------------------------

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coefficients of `s_i^d(w) = Σ_j (-1)^j C(d+1,j) (j+1)^i w^{d+1-j}`,
/// descending powers of `w`.
pub fn s_poly(i: u32, d: usize) -> Result<Vec<BigInt>> {
    if d > MAX_ORDER {
        return Err(Error::UnsupportedOrder(d));
    }
    Ok((0..=d + 1)
        .map(|j| {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            sign * binomial(d + 1, j) * BigInt::from(j + 1).pow(i)
        })
        .collect())
}

/// `Σ_j (-1)^j C(d+1,j) (j+1)^ℓ`, which vanishes exactly for `ℓ <= d`.
pub fn annihilation_sum(d: usize, l: u32) -> BigInt {
    (0..=d + 1)
        .map(|j| {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            sign * binomial(d + 1, j) * BigInt::from(j + 1).pow(l)
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Sample plans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanKind {
    /// `M-d-1, ..., M` (stride 1).
    Consecutive,
    /// `N, 2N, ..., (d+2)N` with `N = floor(M/(d+2))`.
    Decimated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub kind: PlanKind,
    pub d: usize,
    pub max_index: usize,
    pub stride: usize,
    pub indices: Vec<usize>,
}

impl SamplePlan {
    pub fn new(kind: PlanKind, d: usize, max_index: usize) -> Result<Self> {
        match kind {
            PlanKind::Decimated => Self::decimated(d, max_index),
            PlanKind::Consecutive => Self::consecutive(d, max_index),
        }
    }

    pub fn decimated(d: usize, max_index: usize) -> Result<Self> {
        let n = max_index / (d + 2);
        if n < 1 {
            return Err(Error::Plan(format!(
                "M = {max_index} is too small for a decimated plan of order {d}"
            )));
        }
        Ok(SamplePlan {
            kind: PlanKind::Decimated,
            d,
            max_index,
            stride: n,
            indices: (1..=d + 2).map(|j| j * n).collect(),
        })
    }

    pub fn consecutive(d: usize, max_index: usize) -> Result<Self> {
        if max_index < d + 2 {
            return Err(Error::Plan(format!(
                "M = {max_index} is too small for a consecutive plan of order {d}"
            )));
        }
        Ok(SamplePlan {
            kind: PlanKind::Consecutive,
            d,
            max_index,
            stride: 1,
            indices: (max_index - d - 1..=max_index).collect(),
        })
    }

    pub fn base_index(&self) -> usize {
        self.indices[0]
    }
}

// ---------------------------------------------------------------------------
// Annihilating polynomial and roots
// ---------------------------------------------------------------------------

/// `q(u) = Σ_j (-1)^j C(d+1,j) m̃_{base+j·stride} u^{d+1-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorPoly<R = f64> {
    /// Descending powers of `u`.
    pub coeffs: Vec<Complex<R>>,
    pub stride: usize,
    pub base_index: usize,
}

impl<R: Real> AnnihilatorPoly<R> {
    pub fn from_coefficients(coeffs: Vec<Complex<R>>, stride: usize, base_index: usize) -> Self {
        AnnihilatorPoly {
            coeffs,
            stride,
            base_index,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, u: &Complex<R>) -> Complex<R> {
        horner(&self.coeffs, u)
    }

    /// `Σ |c_j| |u|^{deg-j}`, the natural size of `q(u)`.
    pub fn scale_at(&self, u: &Complex<R>) -> f64 {
        let r = cabs(u).to_f64();
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| acc * r + cabs(c).to_f64())
    }
}

fn horner<R: Real>(c: &[Complex<R>], u: &Complex<R>) -> Complex<R> {
    let mut acc = Complex::new(R::zero(), R::zero());
    for a in c {
        acc = acc * u.clone() + a.clone();
    }
    acc
}

fn horner_with_derivative<R: Real>(c: &[Complex<R>], u: &Complex<R>) -> (Complex<R>, Complex<R>) {
    let zero = Complex::new(R::zero(), R::zero());
    let mut p = zero.clone();
    let mut dp = zero;
    for a in c {
        dp = dp * u.clone() + p.clone();
        p = p * u.clone() + a.clone();
    }
    (p, dp)
}

pub fn build_annihilator<R: Real>(
    moments: &MomentSequence<R>,
    plan: &SamplePlan,
) -> Result<AnnihilatorPoly<R>> {
    let d = plan.d;
    if moments.order() != d {
        return Err(Error::Plan(format!(
            "moments weighted for order {}, plan has order {d}",
            moments.order()
        )));
    }
    let mut coeffs = Vec::with_capacity(d + 2);
    for (j, &k) in plan.indices.iter().enumerate() {
        let m = moments
            .at(k)
            .ok_or_else(|| Error::Plan(format!("moment at index {k} not supplied")))?;
        let c = binomial(d + 1, j).to_i64().expect("small binomial");
        let signed = if j % 2 == 0 { c } else { -c };
        coeffs.push(cscale(m, &R::from_i64(signed)));
    }
    Ok(AnnihilatorPoly {
        coeffs,
        stride: plan.stride,
        base_index: plan.base_index(),
    })
}

/// Roots with their relative residuals `|q(r)| / scale(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<R = f64> {
    pub roots: Vec<Complex<R>>,
    pub relative_residuals: Vec<f64>,
    pub iterations: usize,
}

impl<R: Real> RootSet<R> {
    /// Smallest pairwise distance (infinite for a single root).
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                gap = gap.min(cabs(&(self.roots[i].clone() - self.roots[j].clone())).to_f64());
            }
        }
        gap
    }
}

/// All roots by Aberth–Ehrlich iteration followed by Newton polish.
pub fn find_roots<R: Real>(poly: &AnnihilatorPoly<R>) -> Result<RootSet<R>> {
    let n = poly.degree();
    let c = &poly.coeffs;
    let max_coeff = c.iter().map(|a| cabs(a).to_f64()).fold(0.0, f64::max);
    let lead_abs = cabs(&c[0]).to_f64();
    if n == 0 || !(lead_abs > 1e-13 * max_coeff) {
        return Err(Error::DegeneratePolynomial);
    }
    let monic: Vec<Complex<R>> = c.iter().map(|a| a.clone() / c[0].clone()).collect();
    let relres = |z: &Complex<R>| cabs(&poly.eval(z)).to_f64() / poly.scale_at(z).max(f64::MIN_POSITIVE);

    if n == 1 {
        let root = -monic[1].clone();
        let res = relres(&root);
        return Ok(RootSet {
            roots: vec![root],
            relative_residuals: vec![res],
            iterations: 0,
        });
    }

    let eps = R::epsilon();
    let radius = monic[1..]
        .iter()
        .map(|a| cabs(a).to_f64())
        .fold(1.0, f64::max)
        .powf(1.0 / n as f64);
    let mut z: Vec<Complex<R>> = (0..n)
        .map(|i| {
            let theta = START_ANGLE + std::f64::consts::TAU * i as f64 / n as f64;
            cscale(&cis(&R::from_f64(theta)), &R::from_f64(radius))
        })
        .collect();

    let step_tol = eps.clone() * R::from_i64(16);
    let res_tol = eps.to_f64() * (4 * n + 16) as f64;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut small_steps = true;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(&monic, &z[i]);
            if cabs(&p) == R::zero() {
                continue;
            }
            let mut repulsion = Complex::new(R::zero(), R::zero());
            for j in 0..n {
                if j != i {
                    let diff = z[i].clone() - z[j].clone();
                    if cabs(&diff) > R::zero() {
                        repulsion = repulsion + Complex::new(R::one(), R::zero()) / diff;
                    }
                }
            }
            let ratio = p / dp;
            let denom = Complex::new(R::one(), R::zero()) - ratio.clone() * repulsion;
            let w = if cabs(&denom) > R::zero() { ratio / denom } else { ratio };
            if cabs(&w) > step_tol.clone() * cabs(&z[i]) {
                small_steps = false;
            }
            z[i] = z[i].clone() - w;
        }
        if small_steps || z.iter().all(|r| relres(r) <= res_tol) {
            converged = true;
            break;
        }
    }
    if !converged {
        let worst = z.iter().map(&relres).fold(0.0, f64::max);
        return Err(Error::RootFinder { residual: worst });
    }

    for r in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner_with_derivative(&monic, r);
            if cabs(&dp) == R::zero() {
                break;
            }
            let cand = r.clone() - p / dp;
            if relres(&cand) <= relres(r) {
                *r = cand;
            } else {
                break;
            }
        }
    }

    let residuals: Vec<f64> = z.iter().map(&relres).collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if !(worst <= ROOT_RESIDUAL_TOL) {
        return Err(Error::RootFinder { residual: worst });
    }
    Ok(RootSet {
        roots: z,
        relative_residuals: residuals,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSelection {
    /// The root nearest the unit circle.
    #[default]
    ClosestToCircle,
    /// Circular mean of all root directions (experimental).
    AngleAverage,
}

pub fn select_root<R: Real>(roots: &[Complex<R>], mode: RootSelection) -> Complex<R> {
    assert!(!roots.is_empty(), "select_root needs at least one root");
    match mode {
        RootSelection::ClosestToCircle => {
            let mut best = 0;
            let dist = |r: &Complex<R>| (cabs(r) - R::one()).abs().to_f64();
            for i in 1..roots.len() {
                let (di, db) = (dist(&roots[i]), dist(&roots[best]));
                let tie = (di - db).abs() <= TIE_TOL;
                let closer_angle =
                    carg(&roots[i]).abs().to_f64() < carg(&roots[best]).abs().to_f64();
                if (!tie && di < db) || (tie && closer_angle) {
                    best = i;
                }
            }
            roots[best].clone()
        }
        RootSelection::AngleAverage => {
            let mut acc = Complex::new(R::zero(), R::zero());
            for r in roots {
                let m = cabs(r);
                if m > R::zero() {
                    acc = acc + r.clone() / Complex::new(m, R::zero());
                }
            }
            let m = cabs(&acc);
            acc / Complex::new(m, R::zero())
        }
    }
}

/// The branch `ξ = -arg(z)/N + 2πn/N` nearest to the prior, in `[-π, π)`.
pub fn disambiguate_nth_root<R: Real>(z: &Complex<R>, n: usize, xi_prior: &R) -> Result<R> {
    if n < 1 {
        return Err(Error::Plan("N must be positive".into()));
    }
    let nr = R::from_i64(n as i64);
    let base = -carg(z) / nr.clone();
    let step = R::two_pi() / nr;
    let center = ((xi_prior.to_f64() - base.to_f64()) / step.to_f64()).round() as i64;
    let mut cands: Vec<(f64, R)> = (center - 1..=center + 1)
        .map(|j| {
            let c = wrap_angle_r(&(base.clone() + step.clone() * R::from_i64(j)));
            let dist = wrap_angle_r(&(c.clone() - xi_prior.clone())).abs().to_f64();
            (dist, c)
        })
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    if n > 1 && (cands[1].0 - cands[0].0).abs() <= AMBIGUITY_TOL {
        let (a, b) = (cands[0].1.to_f64(), cands[1].1.to_f64());
        if (a - b).abs() > AMBIGUITY_TOL {
            return Err(Error::Ambiguity {
                prior: xi_prior.to_f64(),
            });
        }
    }
    Ok(cands.swap_remove(0).1)
}

// ---------------------------------------------------------------------------
// Magnitudes
// ---------------------------------------------------------------------------

/// Exact inverse of the Vandermonde matrix `V_1^d[j][ℓ] = (j+1)^ℓ`.
#[derive(Debug)]
pub struct VandermondeInverse {
    pub d: usize,
    /// Row `ℓ`, column `j`, as reduced `(numerator, denominator)` pairs.
    pub entries: Vec<Vec<(i128, i128)>>,
}

fn exact_inverse(d: usize) -> VandermondeInverse {
    let n = d + 1;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|l| BigRational::from_integer(BigInt::from(j + 1).pow(l as u32)))
                .collect();
            row.extend((0..n).map(|c| {
                if c == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Vandermonde on distinct nodes is invertible");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    let entries = a
        .iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|q| {
                    let num = q.numer().to_i128().expect("entry fits i128");
                    let den = q.denom().to_i128().expect("entry fits i128");
                    debug_assert!(q.denom().is_positive());
                    (num, den)
                })
                .collect()
        })
        .collect();
    VandermondeInverse { d, entries }
}

/// Cached exact inverse for order `d`; built once per order.
pub fn vandermonde_inverse(d: usize) -> Result<Arc<VandermondeInverse>> {
    static CACHE: [OnceLock<Arc<VandermondeInverse>>; MAX_ORDER + 1] =
        [const { OnceLock::new() }; MAX_ORDER + 1];
    if d > MAX_ORDER {
        return Err(Error::UnsupportedOrder(d));
    }
    Ok(CACHE[d].get_or_init(|| Arc::new(exact_inverse(d))).clone())
}

/// `α` (weighted, `m_k ≈ ω^k Σ_p α_p k^p`) and `a` (jump magnitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct Magnitudes<R = f64> {
    pub alpha: Vec<Complex<R>>,
    pub a: Vec<Complex<R>>,
    /// Relative residual of the normalized Vandermonde solve.
    pub residual: f64,
}

/// Solves `V α = [m̃_k ω̃^{-k}]` on the first `d+1` plan indices.
pub fn solve_magnitudes<R: Real>(
    moments: &MomentSequence<R>,
    omega_est: &Complex<R>,
    plan: &SamplePlan,
) -> Result<Magnitudes<R>> {
    let d = plan.d;
    if plan.indices.len() < d + 1 {
        return Err(Error::Plan("plan has fewer than d+1 indices".into()));
    }
    if (cabs(omega_est).to_f64() - 1.0).abs() > 1e-10 {
        return Err(Error::Validation("ω̃ must lie on the unit circle".into()));
    }
    let theta = carg(omega_est);
    let mut rhs = Vec::with_capacity(d + 1);
    for &k in &plan.indices[..d + 1] {
        let m = moments
            .at(k)
            .ok_or_else(|| Error::Plan(format!("moment at index {k} not supplied")))?;
        let phase = cis_multiple(&(-theta.clone()), k as i64);
        rhs.push(m.clone() * phase);
    }
    let inv = vandermonde_inverse(d)?;
    let zero = Complex::new(R::zero(), R::zero());

    // Nodes k_j = c + s(j+1): solve on the integer nodes 1..d+1 in the
    // variable t = (k - c)/s, then expand back to powers of k.
    let beta: Vec<Complex<R>> = inv
        .entries
        .iter()
        .map(|row| {
            row.iter().zip(&rhs).fold(zero.clone(), |acc, (&(p, q), r)| {
                acc + cscale(r, &R::from_ratio(p, q))
            })
        })
        .collect();

    let scale = rhs.iter().map(|r| cabs(r).to_f64()).fold(0.0, f64::max);
    let mut worst = 0.0_f64;
    for (j, r) in rhs.iter().enumerate() {
        let node = R::from_i64(j as i64 + 1);
        let back = horner(&beta.iter().rev().cloned().collect::<Vec<_>>(), &Complex::new(node, R::zero()));
        worst = worst.max(cabs(&(back - r.clone())).to_f64());
    }
    let residual = if scale > 0.0 { worst / scale } else { worst };
    if !(residual <= VANDERMONDE_TOL) {
        return Err(Error::IllConditioned { residual });
    }

    let s = R::from_i64(plan.stride as i64);
    let shift = plan.base_index() as i64 - plan.stride as i64;
    let alpha: Vec<Complex<R>> = if shift == 0 {
        let mut pw = R::one();
        beta.iter()
            .map(|b| {
                let out = cscale(b, &(R::one() / pw.clone()));
                pw = pw.clone() * s.clone();
                out
            })
            .collect()
    } else {
        // P(k) = Σ_i β_i s^{-i} (k - c)^i
        let neg_c = R::from_i64(-shift);
        let mut alpha = vec![zero.clone(); d + 1];
        let mut s_pow = R::one();
        for (i, b) in beta.iter().enumerate() {
            let bi = cscale(b, &(R::one() / s_pow.clone()));
            let mut c_pow = R::one();
            for l in (0..=i).rev() {
                let coef = R::from_i64(binomial(i, l).to_i64().expect("small binomial")) * c_pow.clone();
                alpha[l] = alpha[l].clone() + cscale(&bi, &coef);
                c_pow = c_pow * neg_c.clone();
            }
            s_pow = s_pow * s.clone();
        }
        alpha
    };

    // α_p = i^p a_{d-p}
    let mut a = vec![zero; d + 1];
    for (p, al) in alpha.iter().enumerate() {
        a[d - p] = al.clone() * i_pow::<R>((4 - p % 4) % 4);
    }
    Ok(Magnitudes { alpha, a, residual })
}

// ---------------------------------------------------------------------------
// Single-jump pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RecoveryOptions {
    pub root_selection: RootSelection,
    /// `B*`: estimates with `|ã_0| < B*/2` are flagged weak.
    pub weak_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpEstimate<R = f64> {
    pub xi: R,
    /// `ã_0..ã_d`.
    pub magnitudes: Vec<Complex<R>>,
    pub alpha: Vec<Complex<R>>,
    /// Selected annihilator root `z̃ ≈ ω^stride`.
    pub root: Complex<R>,
    /// `|q(z̃)|`.
    pub root_residual: f64,
    /// Smallest pairwise distance between annihilator roots.
    pub condition_note: f64,
    pub vandermonde_residual: f64,
    pub plan: SamplePlan,
    pub weak_jump: bool,
}

impl<R: Real> JumpEstimate<R> {
    pub fn order(&self) -> usize {
        self.magnitudes.len() - 1
    }
}

pub fn recover_single_jump<R: Real>(
    spec: &FourierSpectrum<R>,
    d: usize,
    xi_prior: &R,
    plan_kind: PlanKind,
) -> Result<JumpEstimate<R>> {
    recover_with(spec, d, xi_prior, plan_kind, spec.max_index(), &RecoveryOptions::default())
}

/// Consecutive-sample recovery at order `d1` using indices up to `M`; the
/// root is `ω` itself.
pub fn half_order_recover<R: Real>(
    spec: &FourierSpectrum<R>,
    d1: usize,
    max_index: usize,
) -> Result<JumpEstimate<R>> {
    recover_with(
        spec,
        d1,
        &R::zero(),
        PlanKind::Consecutive,
        max_index,
        &RecoveryOptions::default(),
    )
}

/// The full single-jump pipeline with explicit options; samples indices up
/// to `max_index <= spec.M`.
pub fn recover_with<R: Real>(
    spec: &FourierSpectrum<R>,
    d: usize,
    xi_prior: &R,
    plan_kind: PlanKind,
    max_index: usize,
    opts: &RecoveryOptions,
) -> Result<JumpEstimate<R>> {
    if d > MAX_ORDER {
        return Err(Error::UnsupportedOrder(d));
    }
    if max_index > spec.max_index() {
        return Err(Error::Range {
            index: max_index as i64,
            max: spec.max_index(),
        });
    }
    let plan = SamplePlan::new(plan_kind, d, max_index)?;
    let moments = spec.weight_moments(d, &plan.indices)?;
    let poly = build_annihilator(&moments, &plan)?;
    let roots = find_roots(&poly)?;
    let z = select_root(&roots.roots, opts.root_selection);
    let xi = disambiguate_nth_root(&z, plan.stride, xi_prior)?;
    let omega = cis(&(-xi.clone()));
    let mags = solve_magnitudes(&moments, &omega, &plan)?;
    let weak_jump = opts
        .weak_threshold
        .is_some_and(|b| cabs(&mags.a[0]).to_f64() < b / 2.0);
    Ok(JumpEstimate {
        xi,
        magnitudes: mags.a,
        alpha: mags.alpha,
        root_residual: cabs(&poly.eval(&z)).to_f64(),
        root: z,
        condition_note: roots.min_gap(),
        vandermonde_residual: mags.residual,
        plan,
        weak_jump,
    })
}

/// `{"xi", "a", "residual"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpEstimateFile {
    pub xi: f64,
    pub a: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_imag: Option<Vec<f64>>,
    pub residual: f64,
}

impl<R: Real> From<&JumpEstimate<R>> for JumpEstimateFile {
    fn from(e: &JumpEstimate<R>) -> Self {
        let imag: Vec<f64> = e.magnitudes.iter().map(|a| a.im.to_f64()).collect();
        JumpEstimateFile {
            xi: e.xi.to_f64(),
            a: e.magnitudes.iter().map(|a| a.re.to_f64()).collect(),
            a_imag: imag.iter().any(|&v: &f64| v != 0.0).then_some(imag),
            residual: e.root_residual,
        }
    }
}
