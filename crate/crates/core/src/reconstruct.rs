//! Multi-jump reconstruction and evaluation of the final approximant.

use crate::error::{Error, Result};
use crate::localize::{
    default_tail, localize_jump, make_bump, prony_order0_nodes, relocalize, BumpSpec,
};
use crate::model::{circular_distance, AprioriBounds, Jump, JumpFile, JumpModel, ModelFile, Side};
use crate::solver::{
    half_order_recover, recover_with, JumpEstimate, JumpEstimateFile, PlanKind, RecoveryOptions,
    RootSelection,
};
use crate::spectrum::{FourierSpectrum, SpectrumFile};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Prony nodes whose root modulus strays further than this from 1 are not
/// counted as jumps.
const MODULUS_SLACK: f64 = 0.25;
/// Relative size of the fixed-point defect at which refinement stops.
const NEWTON_TOL: f64 = 1e-15;
/// Finite-difference steps for the refinement Jacobian.
const XI_STEP: f64 = 1e-7;
const MAG_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub bounds: AprioriBounds,
    pub plan_kind: PlanKind,
    /// Order of the consecutive refinement stage, at most `floor(d/2)`.
    pub half_order: usize,
    pub exclusion_radius: f64,
    /// Newton steps of the corrected localization for `K >= 2`.
    pub refinement_sweeps: usize,
    #[serde(default)]
    pub root_selection: RootSelection,
    /// User-supplied locations that replace the Prony stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    /// Use `priors` as-is, skipping the half-order refinement.
    #[serde(default)]
    pub trust_priors: bool,
}

impl ReconstructionConfig {
    pub fn new(d: usize, k: usize, bounds: AprioriBounds) -> Self {
        ReconstructionConfig {
            d,
            k,
            bounds,
            plan_kind: PlanKind::Decimated,
            half_order: d / 2,
            exclusion_radius: bounds.j / 4.0,
            refinement_sweeps: 8,
            root_selection: RootSelection::ClosestToCircle,
            priors: None,
            trust_priors: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Validation("K must be at least 1".into()));
        }
        self.bounds.validate(self.k)?;
        if self.half_order > self.d / 2 {
            return Err(Error::Validation(format!(
                "half order {} exceeds floor(d/2) = {}",
                self.half_order,
                self.d / 2
            )));
        }
        if !(self.exclusion_radius > 0.0 && self.exclusion_radius < self.bounds.j / 2.0) {
            return Err(Error::Validation(
                "exclusion radius must lie in (0, J/2)".into(),
            ));
        }
        if let Some(p) = &self.priors {
            if p.len() != self.k {
                return Err(Error::Validation(format!(
                    "{} priors supplied for K = {}",
                    p.len(),
                    self.k
                )));
            }
        }
        if self.trust_priors && self.priors.is_none() {
            return Err(Error::Validation("trust_priors set without priors".into()));
        }
        Ok(())
    }

    /// Bump half-width: the separation, capped at π/2.
    pub fn bump_half_width(&self) -> f64 {
        self.bounds.j.min(FRAC_PI_2)
    }
}

/// `f̃ = Σ_{|k|<=M} c_k(Ψ̃) e^{ikx} + Φ̃(x)`.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub estimate: JumpModel,
    /// `c_k(f) - c_k(Φ̃)`.
    pub corrected_spectrum: FourierSpectrum<f64>,
    pub source_m: usize,
    /// Per-jump diagnostics from the final full-order solve.
    pub jumps: Vec<JumpEstimate<f64>>,
    /// Locations after the detection stage.
    pub detected: Vec<f64>,
    /// Locations after the half-order refinement.
    pub refined: Vec<f64>,
}

fn model_from_estimates(
    d: usize,
    ests: &[JumpEstimate<f64>],
    real: bool,
) -> Result<JumpModel> {
    let jumps = ests
        .iter()
        .map(|e| Jump {
            xi: e.xi,
            magnitudes: e
                .magnitudes
                .iter()
                .map(|a| if real { Complex64::new(a.re, 0.0) } else { *a })
                .collect(),
        })
        .collect();
    JumpModel::from_unsorted(d, jumps)
}

/// Detection, localization, half-order refinement, full-order recovery and
/// assembly of the corrected spectrum.
pub fn full_reconstruct(
    spec: &FourierSpectrum<f64>,
    config: &ReconstructionConfig,
) -> Result<Approximant> {
    config.validate()?;
    let m = spec.max_index();
    let d = config.d;
    let k = config.k;
    let opts = RecoveryOptions {
        root_selection: config.root_selection,
        weak_threshold: Some(config.bounds.b),
    };

    let detected = match &config.priors {
        Some(p) => p.iter().map(|&x| crate::model::wrap_angle(x)).collect(),
        None => detect(spec, k, config.bounds.b)?,
    };

    // Pass 0: plain bump localization. The product is trusted only on the
    // lower half of the index range, where the bump spectrum has decayed.
    let half_width = config.bump_half_width();
    let mut bumps: Vec<BumpSpec> = Vec::new();
    let mut refined = Vec::with_capacity(k);
    let mut ests = Vec::with_capacity(k);
    for &prior in &detected {
        let (local, m_loc) = if k == 1 {
            (spec.clone(), m)
        } else {
            let bump = make_bump(prior, half_width, m)?;
            let local = localize_jump(spec, &bump)?;
            bumps.push(bump);
            (local, m / 2)
        };
        let half = if config.trust_priors {
            prior
        } else {
            half_order_recover(&local, config.half_order, m_loc)?.xi
        };
        refined.push(half);
        ests.push(recover_with(&local, d, &half, config.plan_kind, m_loc, &opts)?);
    }

    // Corrected localization over the full range: the bump only sees the
    // part of f the current singular estimate leaves unexplained. The
    // estimate is the fixed point of that map, found by Newton steps.
    if k > 1 && config.refinement_sweeps > 0 {
        let refine = Refinement {
            spec,
            bumps: &bumps,
            d,
            real: spec.real_valued(),
            kind: config.plan_kind,
            opts: &opts,
        };
        ests = refine.solve(ests, config.refinement_sweeps)?;
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| ests[a].xi.total_cmp(&ests[b].xi));
    let ests: Vec<JumpEstimate<f64>> = order.iter().map(|&i| ests[i].clone()).collect();
    let estimate = model_from_estimates(d, &ests, spec.real_valued())?;
    let corrected_spectrum = spec.sub(&estimate.spectrum(m));
    Ok(Approximant {
        estimate,
        corrected_spectrum,
        source_m: m,
        jumps: ests,
        detected,
        refined,
    })
}

/// One application of the corrected localization and single-jump recovery,
/// viewed as a map on the packed parameters `(ξ_j, a_{0,j}, ..., a_{d,j})`.
struct Refinement<'a> {
    spec: &'a FourierSpectrum<f64>,
    bumps: &'a [BumpSpec],
    d: usize,
    real: bool,
    kind: PlanKind,
    opts: &'a RecoveryOptions,
}

impl Refinement<'_> {
    fn width(&self) -> usize {
        1 + (self.d + 1) * if self.real { 1 } else { 2 }
    }

    fn pack(&self, ests: &[JumpEstimate<f64>]) -> Vec<f64> {
        let mut out = Vec::with_capacity(ests.len() * self.width());
        for e in ests {
            out.push(e.xi);
            for a in &e.magnitudes {
                out.push(a.re);
                if !self.real {
                    out.push(a.im);
                }
            }
        }
        out
    }

    fn unpack(&self, theta: &[f64]) -> Vec<Jump> {
        theta
            .chunks(self.width())
            .map(|c| {
                let magnitudes = if self.real {
                    c[1..].iter().map(|&re| Complex64::new(re, 0.0)).collect()
                } else {
                    c[1..].chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
                };
                Jump {
                    xi: crate::model::wrap_angle(c[0]),
                    magnitudes,
                }
            })
            .collect()
    }

    fn apply(&self, theta: &[f64]) -> Result<Vec<JumpEstimate<f64>>> {
        let jumps = self.unpack(theta);
        let current = JumpModel::from_unsorted(self.d, jumps.clone())?;
        let m = self.spec.max_index();
        jumps
            .iter()
            .zip(self.bumps)
            .map(|(own, bump)| {
                let local = relocalize(self.spec, bump, &current, own)?;
                recover_with(&local, self.d, &own.xi, self.kind, m, self.opts)
            })
            .collect()
    }

    /// `F(θ) - θ`, with location differences taken on the circle.
    fn defect(&self, theta: &[f64]) -> Result<(Vec<f64>, Vec<JumpEstimate<f64>>)> {
        let ests = self.apply(theta)?;
        let mut g: Vec<f64> = self.pack(&ests).iter().zip(theta).map(|(a, b)| a - b).collect();
        for i in (0..g.len()).step_by(self.width()) {
            g[i] = crate::model::wrap_angle(g[i]);
        }
        Ok((g, ests))
    }

    fn solve(&self, start: Vec<JumpEstimate<f64>>, max_steps: usize) -> Result<Vec<JumpEstimate<f64>>> {
        let norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut theta = self.pack(&start);
        let (mut g, mut ests) = self.defect(&theta)?;
        let n = theta.len();
        for _ in 0..max_steps {
            let scale = norm(&theta).max(1.0);
            if norm(&g) <= NEWTON_TOL * scale {
                break;
            }
            let mut jac = DMatrix::<f64>::zeros(n, n);
            let mut ok = true;
            for col in 0..n {
                let h = if col % self.width() == 0 {
                    XI_STEP
                } else {
                    MAG_STEP * theta[col].abs().max(1.0)
                };
                let mut probe = theta.clone();
                probe[col] += h;
                match self.defect(&probe) {
                    Ok((gp, _)) => {
                        for row in 0..n {
                            jac[(row, col)] = (gp[row] - g[row]) / h;
                        }
                    }
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            let rhs = DVector::from_iterator(n, g.iter().map(|x| -x));
            let Some(step) = jac.lu().solve(&rhs) else { break };
            let next: Vec<f64> = theta.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
            match self.defect(&next) {
                Ok((gn, en)) if norm(&gn) < norm(&g) => {
                    theta = next;
                    g = gn;
                    ests = en;
                }
                _ => break,
            }
        }
        Ok(ests)
    }
}

/// Order-0 Prony with the strong-jump count check against `K`.
fn detect(spec: &FourierSpectrum<f64>, k: usize, b: f64) -> Result<Vec<f64>> {
    let nodes = match prony_order0_nodes(spec, k, default_tail(k).min(spec.max_index())) {
        Ok(n) => n,
        Err(Error::Detection { rank, .. }) => {
            return Err(Error::Model {
                detected: rank,
                expected: k,
            })
        }
        Err(e) => return Err(e),
    };
    let strong: Vec<f64> = nodes
        .iter()
        .filter(|n| n.amplitude.norm() >= b / 2.0 && (n.modulus - 1.0).abs() <= MODULUS_SLACK)
        .map(|n| n.xi)
        .collect();
    if strong.len() != k {
        return Err(Error::Model {
            detected: strong.len(),
            expected: k,
        });
    }
    Ok(strong)
}

impl Approximant {
    /// `f̃(x)`; at a recovered jump a side must be given.
    pub fn eval(&self, x: f64, side: Option<Side>) -> Result<f64> {
        let smooth = self.corrected_spectrum.eval_partial_sum(x).re;
        Ok(smooth + self.estimate.phi_eval(x, side)?)
    }
}

pub fn eval_approximant(appr: &Approximant, x: f64) -> Result<f64> {
    appr.eval(x, None)
}

/// `max |f̃(x) - f(x)|` over a uniform grid on `[-π, π)` with `radius`
/// neighborhoods of the true jumps removed.
pub fn jump_free_error(
    appr: &Approximant,
    truth: &dyn Fn(f64) -> f64,
    true_jumps: &[f64],
    radius: f64,
    grid: usize,
) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Validation("radius must be positive".into()));
    }
    let mut worst: Option<f64> = None;
    for i in 0..grid {
        let x = -PI + TAU * i as f64 / grid as f64;
        if true_jumps.iter().any(|&xi| circular_distance(x, xi) < radius) {
            continue;
        }
        let err = (appr.eval(x, Some(Side::Right))? - truth(x)).abs();
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    worst.ok_or_else(|| Error::Measurement("grid is empty after exclusion".into()))
}

pub const DEFAULT_GRID: usize = 2048;

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(rename = "M")]
    pub m: usize,
    pub config: ReconstructionConfig,
}

/// Model fields, the corrected spectrum, provenance and per-jump estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproximantFile {
    pub d: usize,
    pub jumps: Vec<JumpFile>,
    pub spectrum: SpectrumFile,
    pub provenance: Provenance,
    pub estimates: Vec<JumpEstimateFile>,
}

impl ApproximantFile {
    pub fn new(appr: &Approximant, config: &ReconstructionConfig) -> Self {
        let model = ModelFile::from_model(&appr.estimate, None);
        ApproximantFile {
            d: model.d,
            jumps: model.jumps,
            spectrum: SpectrumFile::from(&appr.corrected_spectrum),
            provenance: Provenance {
                m: appr.source_m,
                config: config.clone(),
            },
            estimates: appr.jumps.iter().map(JumpEstimateFile::from).collect(),
        }
    }

    pub fn to_approximant(&self) -> Result<Approximant> {
        let estimate = ModelFile {
            d: self.d,
            jumps: self.jumps.clone(),
            smooth: None,
        }
        .to_model()?;
        let corrected_spectrum = FourierSpectrum::try_from(self.spectrum.clone())?;
        Ok(Approximant {
            source_m: corrected_spectrum.max_index(),
            estimate,
            corrected_spectrum,
            jumps: Vec::new(),
            detected: Vec::new(),
            refined: Vec::new(),
        })
    }
}
