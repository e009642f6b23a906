//! Crude jump detection by order-0 Prony and isolation of single jumps by
//! multiplication with a smooth bump in the Fourier domain.

use crate::error::{Error, Result};
use crate::model::{circular_distance, single_jump_coeff, trapezoid_coefficients, Jump, JumpModel};
use crate::solver::{find_roots, AnnihilatorPoly};
use crate::spectrum::{moment_weight, product_spectrum, FourierSpectrum};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative singular-value cutoff for the Hankel rank.
const RANK_TOL: f64 = 1e-10;
/// Truncation allowance for the stored bump spectrum.
const BUMP_TAIL_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Order-0 Prony
// ---------------------------------------------------------------------------

/// A detected exponential `A e^{-ikξ}` in the first-order moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PronyNode {
    pub xi: f64,
    pub amplitude: Complex64,
    /// Modulus of the Prony root (1 for a clean jump).
    pub modulus: f64,
}

/// Default least-squares tail length.
pub fn default_tail(k: usize) -> usize {
    (2 * k + 1).max(4 * k)
}

/// Approximate jump locations (ascending) from the top `tail` coefficients.
pub fn prony_order0(spec: &FourierSpectrum<f64>, k: usize, tail: usize) -> Result<Vec<f64>> {
    Ok(prony_order0_nodes(spec, k, tail)?
        .iter()
        .map(|n| n.xi)
        .collect())
}

/// As [`prony_order0`], with the fitted amplitudes and root moduli.
pub fn prony_order0_nodes(
    spec: &FourierSpectrum<f64>,
    k: usize,
    tail: usize,
) -> Result<Vec<PronyNode>> {
    let m = spec.max_index();
    if k < 1 {
        return Err(Error::Validation("K must be at least 1".into()));
    }
    if tail < 2 * k + 1 || tail > m {
        return Err(Error::Validation(format!(
            "tail {tail} must lie in [2K+1, M] = [{}, {m}]",
            2 * k + 1
        )));
    }
    let k0 = m - tail + 1;
    let mom: Vec<Complex64> = (k0..=m)
        .map(|i| moment_weight::<f64>(i, 0) * spec.coeff(i as i64))
        .collect();
    let rows = tail - k;
    let h = DMatrix::from_fn(rows, k, |r, c| mom[r + c]);
    let rhs = DVector::from_fn(rows, |r, _| -mom[r + k]);
    let svd = h.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank = if smax <= 1e-300 {
        0
    } else {
        svd.singular_values
            .iter()
            .filter(|&&s| s > RANK_TOL * smax)
            .count()
    };
    if rank < k {
        return Err(Error::Detection { rank, expected: k });
    }
    let p = svd
        .solve(&rhs, RANK_TOL * smax)
        .map_err(|e| Error::Measurement(e.to_string()))?;

    // u^K + p_{K-1} u^{K-1} + ... + p_0
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    coeffs.extend((0..k).rev().map(|i| p[i]));
    let roots = find_roots(&AnnihilatorPoly::from_coefficients(coeffs, 1, k0))?;

    let xis: Vec<f64> = roots.roots.iter().map(|u| crate::model::wrap_angle(-u.arg())).collect();
    let w = DMatrix::from_fn(tail, k, |r, j| {
        Complex64::from_polar(1.0, -((k0 + r) as f64) * xis[j])
    });
    let y = DVector::from_fn(tail, |r, _| mom[r]);
    let amps = w
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Measurement(e.to_string()))?;
    let mut nodes: Vec<PronyNode> = (0..k)
        .map(|j| PronyNode {
            xi: xis[j],
            amplitude: amps[j],
            modulus: roots.roots[j].norm(),
        })
        .collect();
    nodes.sort_by(|a, b| a.xi.total_cmp(&b.xi));
    Ok(nodes)
}

// ---------------------------------------------------------------------------
// Bumps
// ---------------------------------------------------------------------------

fn mollifier_tail(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// The smoothed step `e(t)/(e(t)+e(1-t))`: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let a = mollifier_tail(t);
    let b = mollifier_tail(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// A `C^∞` bump: 1 within `J/3` of the center, 0 beyond `J`.
#[derive(Debug, Clone)]
pub struct BumpSpec {
    pub center: f64,
    pub half_width: f64,
    /// Stored for `|k| <= 2M` so products read every index they need.
    pub spectrum: FourierSpectrum<f64>,
}

pub const PLATEAU_FRACTION: f64 = 1.0 / 3.0;

fn bump_value(center: f64, half_width: f64, x: f64) -> f64 {
    let r = circular_distance(x, center);
    smooth_step((half_width - r) / (half_width * (1.0 - PLATEAU_FRACTION)))
}

impl BumpSpec {
    /// Closed-form time-domain value.
    pub fn eval(&self, x: f64) -> f64 {
        bump_value(self.center, self.half_width, x)
    }

    /// `max_{k in [lo, hi]} |c_k(h)| k^p`.
    pub fn scaled_decay(&self, p: i32, lo: usize, hi: usize) -> f64 {
        (lo.max(1)..=hi.min(self.spectrum.max_index()))
            .map(|k| self.spectrum.coeff(k as i64).norm() * (k as f64).powi(p))
            .fold(0.0, f64::max)
    }
}

pub fn make_bump(center: f64, half_width: f64, max_index: usize) -> Result<BumpSpec> {
    if !(half_width > 0.0 && half_width <= FRAC_PI_2 + 1e-15) {
        return Err(Error::Validation(format!(
            "bump half-width {half_width} outside (0, π/2]"
        )));
    }
    if max_index < 32 {
        return Err(Error::Validation("bump construction needs M >= 32".into()));
    }
    if !(center >= -PI && center <= PI) {
        return Err(Error::Validation(format!("bump center {center} outside [-π, π]")));
    }
    let f = move |x: f64| bump_value(center, half_width, x);
    let points = 16 * max_index;
    let stored = 2 * max_index;
    let all = trapezoid_coefficients(&f, points, points / 2 - 1);
    let mid = (points / 2 - 1) as i64;
    let tail: f64 = (stored as i64 + 1..=mid)
        .map(|k| all[(mid + k) as usize].norm() + all[(mid - k) as usize].norm())
        .sum();
    if tail > BUMP_TAIL_TOL {
        return Err(Error::Resolution {
            half_width,
            max_index,
            tail,
        });
    }
    let spectrum = FourierSpectrum::from_fn(stored, true, |k| {
        let c = all[(mid + k) as usize];
        Complex64::new(c.re, if k == 0 { 0.0 } else { c.im })
    });
    Ok(BumpSpec {
        center,
        half_width,
        spectrum,
    })
}

// ---------------------------------------------------------------------------
// Localization
// ---------------------------------------------------------------------------

/// Spectrum of `f·h` over the full range of `f`.
pub fn localize_jump(spec: &FourierSpectrum<f64>, bump: &BumpSpec) -> Result<FourierSpectrum<f64>> {
    product_spectrum(spec, &bump.spectrum, spec.max_index())
}

/// Spectrum of `Φ̃_j + h·(f - Σ_i Φ̃_i)`: the bump acts only on what the
/// current singular estimate does not explain, so the localization error
/// shrinks with the estimate error.
pub fn relocalize(
    spec: &FourierSpectrum<f64>,
    bump: &BumpSpec,
    estimate: &JumpModel,
    own: &Jump,
) -> Result<FourierSpectrum<f64>> {
    let m = spec.max_index();
    let residual = spec.sub(&estimate.spectrum(m));
    let local = product_spectrum(&residual, &bump.spectrum, m)?;
    let real = local.real_valued() && own.magnitudes.iter().all(|a| a.im == 0.0);
    Ok(FourierSpectrum::from_fn(m, real, |k| {
        let base = *local.coeff(k);
        if k == 0 {
            base
        } else {
            base + single_jump_coeff(&own.xi, &own.magnitudes, k)
        }
    }))
}

/// `max_k k·|m̃_k - m_k|` over `k in [lo, hi]` against a one-jump model:
/// the empirical noise level `R*` of the single-jump fit.
pub fn single_jump_noise_level(
    spec: &FourierSpectrum<f64>,
    jump: &Jump,
    lo: usize,
    hi: usize,
) -> f64 {
    let d = jump.magnitudes.len() - 1;
    (lo.max(1)..=hi.min(spec.max_index()))
        .map(|k| {
            let w = moment_weight::<f64>(k, d);
            let got = w * spec.coeff(k as i64);
            let want = w * single_jump_coeff(&jump.xi, &jump.magnitudes, k as i64);
            (got - want).norm() * k as f64
        })
        .fold(0.0, f64::max)
}
