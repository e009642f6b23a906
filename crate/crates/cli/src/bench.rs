//! Convergence sweeps: one recovery per (method, M), log-log slope fits and
//! the CSV report.

use crate::{CliError, Precision, Result};
use fourier_jumps::model::{synth_spectrum, ModelFile, Side, SmoothPart};
use fourier_jumps::real::{cabs, from_c64, wrap_angle_r, Real};
use fourier_jumps::reconstruct::{full_reconstruct, jump_free_error, DEFAULT_GRID};
use fourier_jumps::solver::{half_order_recover, recover_with, RecoveryOptions};
use fourier_jumps::{
    Approximant, AprioriBounds, FourierSpectrum, Jump, JumpEstimate, JumpModel, PlanKind,
    ReconstructionConfig,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Errors below `FLOOR_FACTOR · ε` are treated as precision-limited and left
/// out of slope fits.
pub const FLOOR_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Half-order consecutive prior, then decimated recovery at order `d`.
    #[serde(rename = "full-decimated", alias = "full")]
    FullDecimated,
    /// Consecutive recovery at order `floor(d/2)`.
    #[serde(rename = "half-order", alias = "by2011")]
    HalfOrder,
    /// Consecutive recovery at order `d`.
    #[serde(rename = "eckhoff-original", alias = "eckhoff")]
    EckhoffOriginal,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::FullDecimated => "full-decimated",
            Method::HalfOrder => "half-order",
            Method::EckhoffOriginal => "eckhoff-original",
        }
    }

    pub fn order(self, d: usize) -> usize {
        match self {
            Method::HalfOrder => d / 2,
            _ => d,
        }
    }
}

/// Coefficient perturbation `ε_k = level · u_k · k^{-decay}` with `|u_k| <= 1`
/// drawn from the benchmark seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub level: f64,
    /// Defaults to `d + 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    /// Data model; its `smooth` entry selects the catalog smooth part.
    pub model: ModelFile,
    pub methods: Vec<Method>,
    #[serde(rename = "M")]
    pub m_values: Vec<usize>,
    /// Recovery order; defaults to the model order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<AprioriBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusion_radius: Option<f64>,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(CliError::Usage("benchmark lists no methods".into()));
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(CliError::Usage("benchmark lists a method twice".into()));
        }
        if self.m_values.len() < 3 {
            return Err(CliError::Usage("slope fits need at least 3 M values".into()));
        }
        if self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage("M values must be strictly increasing".into()));
        }
        let (lo, hi) = (self.m_values[0], *self.m_values.last().unwrap());
        if (hi as f64) < 10.0 * lo as f64 {
            return Err(CliError::Usage("M values must span at least one decade".into()));
        }
        if let Some(p) = &self.perturbation {
            if !(p.level >= 0.0 && p.level.is_finite()) {
                return Err(CliError::Usage("perturbation level must be finite and >= 0".into()));
            }
        }
        if let Some(p) = &self.precision {
            p.parse::<Precision>().map_err(CliError::Usage)?;
        }
        Ok(())
    }

    /// Default bounds: separation 2 for one jump, otherwise the minimum
    /// separation; `A` above `Σ|a|`; `B` the smallest `|a_0|`.
    fn effective_bounds(&self, model: &JumpModel) -> AprioriBounds {
        if let Some(b) = self.bounds {
            return b;
        }
        let j = if model.count() <= 1 {
            2.0
        } else {
            model.min_separation().min(TAU / model.count() as f64)
        };
        let b = model
            .jumps()
            .iter()
            .map(|j| j.magnitudes[0].norm())
            .fold(f64::INFINITY, f64::min);
        AprioriBounds {
            j,
            a: 2.0 * model.magnitude_sum() + 1.0,
            b: if b.is_finite() { b } else { 1.0 },
            r: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub m: usize,
    pub err_xi: f64,
    /// `|Δa_ℓ|` for `ℓ = 0..=d`; NaN above the method's order.
    pub err_a: Vec<f64>,
    pub err_sup: f64,
    /// `log|Δξ| / log M`.
    pub ratio: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSummary {
    pub method: Method,
    pub err_xi: f64,
    pub err_a: Vec<f64>,
    pub err_sup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub order: usize,
    pub precision: Precision,
    pub rows: Vec<BenchRow>,
    pub slopes: Vec<SlopeSummary>,
}

/// Least-squares slope of `log y` against `log x`; NaN with fewer than two
/// points.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return f64::NAN;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:e}")
    }
}

impl ConvergenceReport {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["method".to_string(), "M".into(), "err_xi".into()];
        h.extend((0..=self.order).map(|l| format!("err_a_{l}")));
        h.extend(["err_sup".into(), "ratio_logerr_logM".into(), "note".into()]);
        h
    }

    pub fn slopes_for(&self, method: Method) -> Option<&SlopeSummary> {
        self.slopes.iter().find(|s| s.method == method)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header())?;
        for r in &self.rows {
            let mut rec = vec![r.method.label().to_string(), r.m.to_string(), fmt_num(r.err_xi)];
            rec.extend(r.err_a.iter().map(|&v| fmt_num(v)));
            rec.extend([fmt_num(r.err_sup), fmt_num(r.ratio), r.note.clone()]);
            w.write_record(rec)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        let mut out = String::from_utf8(bytes).expect("csv output is UTF-8");
        for s in &self.slopes {
            out.push_str(&format!("# slope method={} err_xi={:.4}", s.method.label(), s.err_xi));
            for (l, v) in s.err_a.iter().enumerate() {
                out.push_str(&format!(" err_a_{l}={v:.4}"));
            }
            out.push_str(&format!(" err_sup={:.4}\n", s.err_sup));
        }
        Ok(out)
    }
}

struct Outcome {
    err_xi: f64,
    err_a: Vec<f64>,
    estimate: JumpModel,
}

fn jump_errors<R: Real>(truth: &Jump, est: &JumpEstimate<R>, order: usize, d: usize) -> (f64, Vec<f64>) {
    let dxi = wrap_angle_r(&(est.xi.clone() - R::from_f64(truth.xi))).abs().to_f64();
    let mut err_a = vec![f64::NAN; d + 1];
    for (l, slot) in err_a.iter_mut().enumerate().take(order + 1) {
        let want = truth.magnitudes.get(l).copied().unwrap_or_default();
        *slot = cabs(&(est.magnitudes[l].clone() - from_c64::<R>(&want))).to_f64();
    }
    (dxi, err_a)
}

fn estimate_to_model<R: Real>(est: &JumpEstimate<R>, real: bool) -> fourier_jumps::Result<JumpModel> {
    let mags = est
        .magnitudes
        .iter()
        .map(|a| Complex64::new(a.re.to_f64(), if real { 0.0 } else { a.im.to_f64() }))
        .collect();
    JumpModel::new(est.order(), vec![Jump { xi: est.xi.to_f64(), magnitudes: mags }])
}

fn single_jump_method<R: Real>(
    spec: &FourierSpectrum<R>,
    method: Method,
    d: usize,
) -> fourier_jumps::Result<JumpEstimate<R>> {
    let m = spec.max_index();
    let opts = RecoveryOptions::default();
    match method {
        Method::FullDecimated => {
            let prior = half_order_recover(spec, d / 2, m)?;
            recover_with(spec, d, &prior.xi, PlanKind::Decimated, m, &opts)
        }
        Method::HalfOrder => half_order_recover(spec, d / 2, m),
        Method::EckhoffOriginal => recover_with(spec, d, &R::zero(), PlanKind::Consecutive, m, &opts),
    }
}

fn single_outcome<R: Real>(
    spec: &FourierSpectrum<R>,
    truth: &JumpModel,
    method: Method,
    d: usize,
) -> fourier_jumps::Result<Outcome> {
    let est = single_jump_method(spec, method, d)?;
    let (err_xi, err_a) = jump_errors(&truth.jumps()[0], &est, method.order(d), d);
    Ok(Outcome {
        err_xi,
        err_a,
        estimate: estimate_to_model(&est, spec.real_valued())?,
    })
}

fn multi_outcome(
    spec: &FourierSpectrum<f64>,
    truth: &JumpModel,
    d: usize,
    bounds: AprioriBounds,
    radius: f64,
) -> fourier_jumps::Result<Outcome> {
    let mut config = ReconstructionConfig::new(d, truth.count(), bounds);
    config.exclusion_radius = radius;
    let appr = full_reconstruct(spec, &config)?;
    let mut err_xi: f64 = 0.0;
    let mut err_a = vec![0.0f64; d + 1];
    for (t, e) in truth.jumps().iter().zip(&appr.jumps) {
        let (x, a) = jump_errors(t, e, d, d);
        err_xi = err_xi.max(x);
        for (slot, v) in err_a.iter_mut().zip(a) {
            *slot = slot.max(v);
        }
    }
    Ok(Outcome {
        err_xi,
        err_a,
        estimate: appr.estimate,
    })
}

/// Seeded perturbation `ε_k` for `0 < |k| <= count`, mirrored for real data;
/// entry `count + k` holds `ε_k`.
fn draw_noise(p: &Perturbation, d: usize, count: usize, real: bool, seed: u64) -> Vec<Complex64> {
    let decay = p.decay.unwrap_or((d + 2) as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |k: usize| {
        let r: f64 = rng.gen::<f64>().sqrt();
        let theta: f64 = TAU * rng.gen::<f64>();
        Complex64::from_polar(p.level * r * (k as f64).powf(-decay), theta)
    };
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * count + 1];
    for k in 1..=count {
        out[count + k] = draw(k);
        if real {
            out[count - k] = out[count + k].conj();
        }
    }
    if !real {
        for k in 1..=count {
            out[count - k] = draw(k);
        }
    }
    out
}

fn grid_point(i: usize) -> f64 {
    -PI + TAU * i as f64 / DEFAULT_GRID as f64
}

pub fn run_benchmark(spec: &BenchmarkSpec, seed: u64, precision: Precision) -> Result<ConvergenceReport> {
    spec.validate()?;
    let truth = spec.model.to_model()?;
    truth.validate_genuine()?;
    let d = spec.order.unwrap_or(truth.order());
    let smooth: Option<SmoothPart> = match &spec.model.smooth {
        Some(s) => Some(s.build()?),
        None => None,
    };
    let bounds = spec.effective_bounds(&truth);
    let radius = spec.exclusion_radius.unwrap_or(bounds.j / 4.0);
    let m_max = *spec.m_values.last().unwrap();
    let real = truth.is_real();

    let reach = 4 * m_max;
    let noise = match &spec.perturbation {
        Some(p) => draw_noise(p, d, reach, real, seed),
        None => Vec::new(),
    };
    let base = synth_spectrum(&truth, smooth.as_ref(), m_max)?;
    let data = FourierSpectrum::from_fn(m_max, real, |k| {
        let extra = noise
            .get((reach as i64 + k) as usize)
            .copied()
            .unwrap_or_default();
        base.coeff(k) + extra
    });

    // f on the evaluation grid, including the perturbation beyond M.
    let truth_grid: Vec<f64> = (0..DEFAULT_GRID)
        .map(|i| {
            let x = grid_point(i);
            let phi = truth.phi_eval(x, Some(Side::Right)).unwrap_or(f64::NAN);
            let psi = smooth.as_ref().map_or(0.0, |s| s.eval(x));
            let eps: f64 = noise
                .iter()
                .enumerate()
                .map(|(i, c)| (c * Complex64::from_polar(1.0, (i as f64 - reach as f64) * x)).re)
                .sum();
            phi + psi + eps
        })
        .collect();
    let truth_at = |x: f64| {
        let i = ((x + PI) / TAU * DEFAULT_GRID as f64).round() as usize;
        truth_grid[i.min(DEFAULT_GRID - 1)]
    };

    precision.activate()?;
    #[cfg(feature = "extended")]
    let big_data = match precision {
        Precision::Extended(_) if truth.count() == 1 => Some(big_spectrum(&truth, &base, &data)),
        _ => None,
    };

    let jobs: Vec<(Method, usize)> = spec
        .methods
        .iter()
        .flat_map(|&meth| spec.m_values.iter().map(move |&m| (meth, m)))
        .collect();
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|&(method, m)| {
            let local = data.truncate(m)?;
            let outcome = match precision {
                Precision::Double if truth.count() == 1 => single_outcome(&local, &truth, method, d),
                Precision::Double => match method {
                    Method::FullDecimated => multi_outcome(&local, &truth, d, bounds, radius),
                    _ => Err(fourier_jumps::Error::Validation(
                        "consecutive baselines need a single-jump model".into(),
                    )),
                },
                #[cfg(feature = "extended")]
                Precision::Extended(_) => match &big_data {
                    Some(b) => single_outcome(&b.truncate(m)?, &truth, method, d),
                    None => Err(fourier_jumps::Error::Validation(
                        "extended-precision benchmarks need a single-jump model".into(),
                    )),
                },
                #[cfg(not(feature = "extended"))]
                Precision::Extended(_) => unreachable!("rejected by activate"),
            };
            Ok(match outcome {
                Ok(o) => {
                    let appr = Approximant {
                        corrected_spectrum: local.sub(&o.estimate.spectrum(m)),
                        estimate: o.estimate,
                        source_m: m,
                        jumps: Vec::new(),
                        detected: Vec::new(),
                        refined: Vec::new(),
                    };
                    let err_sup = jump_free_error(&appr, &truth_at, &truth.locations(), radius, DEFAULT_GRID)
                        .unwrap_or(f64::NAN);
                    BenchRow {
                        method,
                        m,
                        ratio: o.err_xi.ln() / (m as f64).ln(),
                        err_xi: o.err_xi,
                        err_a: o.err_a,
                        err_sup,
                        note: String::new(),
                    }
                }
                Err(e) => BenchRow {
                    method,
                    m,
                    err_xi: f64::NAN,
                    err_a: vec![f64::NAN; d + 1],
                    err_sup: f64::NAN,
                    ratio: f64::NAN,
                    note: format!("failed: {e}"),
                },
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize(rows, d, precision, spec))
}

#[cfg(feature = "extended")]
fn big_spectrum(
    truth: &JumpModel,
    base: &FourierSpectrum<f64>,
    data: &FourierSpectrum<f64>,
) -> FourierSpectrum<fourier_jumps::real::Big> {
    use fourier_jumps::model::single_jump_coeff;
    use fourier_jumps::real::Big;
    // The singular part exactly at the working precision; the smooth part and
    // perturbation as the double-precision remainder.
    let jump = &truth.jumps()[0];
    let xi = Big::from_f64(jump.xi);
    let mags: Vec<num_complex::Complex<Big>> = jump.magnitudes.iter().map(from_c64).collect();
    let phi = truth.spectrum(base.max_index());
    FourierSpectrum::from_fn(data.max_index(), data.real_valued(), |k| {
        let singular = if k == 0 {
            num_complex::Complex::new(Big::from_f64(0.0), Big::from_f64(0.0))
        } else {
            single_jump_coeff(&xi, &mags, k)
        };
        singular + from_c64::<Big>(&(data.coeff(k) - phi.coeff(k)))
    })
}

fn floor_for(precision: Precision) -> f64 {
    match precision {
        Precision::Double => FLOOR_FACTOR * f64::EPSILON,
        #[cfg(feature = "extended")]
        Precision::Extended(_) => FLOOR_FACTOR * fourier_jumps::real::Big::epsilon().to_f64(),
        #[cfg(not(feature = "extended"))]
        Precision::Extended(_) => FLOOR_FACTOR * f64::EPSILON,
    }
}

fn summarize(mut rows: Vec<BenchRow>, d: usize, precision: Precision, spec: &BenchmarkSpec) -> ConvergenceReport {
    let floor = floor_for(precision);
    for r in &mut rows {
        let mut floored = Vec::new();
        if r.err_xi.is_finite() && r.err_xi < floor {
            floored.push("err_xi".to_string());
        }
        for (l, v) in r.err_a.iter().enumerate() {
            if v.is_finite() && *v < floor {
                floored.push(format!("err_a_{l}"));
            }
        }
        if r.err_sup.is_finite() && r.err_sup < FLOOR_FACTOR * f64::EPSILON {
            floored.push("err_sup".into());
        }
        if !floored.is_empty() {
            let tag = format!("floor:{}", floored.join(";"));
            r.note = if r.note.is_empty() { tag } else { format!("{} {tag}", r.note) };
        }
    }
    let fit = |method: Method, get: &dyn Fn(&BenchRow) -> f64, min: f64| {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.m as f64, get(r)))
            .filter(|&(_, v)| v.is_finite() && v >= min)
            .collect();
        fit_slope(&pts)
    };
    let slopes = spec
        .methods
        .iter()
        .map(|&method| SlopeSummary {
            method,
            err_xi: fit(method, &|r| r.err_xi, floor),
            err_a: (0..=d).map(|l| fit(method, &|r| r.err_a[l], floor)).collect(),
            err_sup: fit(method, &|r| r.err_sup, FLOOR_FACTOR * f64::EPSILON),
        })
        .collect();
    ConvergenceReport {
        order: d,
        precision,
        rows,
        slopes,
    }
}
