//! Forward model: the Bernoulli jump basis, the singular part Φ and its
//! spectrum, smooth parts Ψ, synthesis, and the indistinguishable pair used
//! to demonstrate the accuracy ceiling.

use crate::error::{Error, Result};
use crate::real::{cis_multiple, cscale, Real};
use crate::spectrum::FourierSpectrum;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock};

/// Highest Bernoulli polynomial degree in the coefficient table.
pub const MAX_BERNOULLI: usize = 32;

// ---------------------------------------------------------------------------
// Angles
// ---------------------------------------------------------------------------

/// Maps an angle to `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y >= PI {
        y - TAU
    } else {
        y
    }
}

/// Distance on the circle of circumference 2π.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

// ---------------------------------------------------------------------------
// Bernoulli polynomials
// ---------------------------------------------------------------------------

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial_big(m + 1, k)) * bk;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Exact coefficients of `B_n(x)`, descending powers of `x`.
pub fn bernoulli_poly_exact(n: usize) -> Vec<BigRational> {
    let b = bernoulli_numbers(n);
    (0..=n)
        .map(|j| BigRational::from_integer(binomial_big(n, j)) * &b[j])
        .collect()
}

fn bernoulli_table() -> &'static Vec<Vec<f64>> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_BERNOULLI)
            .map(|n| {
                bernoulli_poly_exact(n)
                    .iter()
                    .map(|r| r.to_f64().expect("finite coefficient"))
                    .collect()
            })
            .collect()
    })
}

/// `B_n(x)` by Horner's scheme on the exact-rational table.
pub fn bernoulli_poly(n: usize, x: f64) -> Result<f64> {
    if n > MAX_BERNOULLI {
        return Err(Error::UnsupportedOrder(n));
    }
    Ok(bernoulli_table()[n].iter().fold(0.0, |acc, &c| acc * x + c))
}

/// One-sided limit selector at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `V_n(x; ξ) = -(2π)^n/(n+1)! · B_{n+1}(((x-ξ) mod 2π)/2π)`.
///
/// At `x ≡ ξ` the right limit is returned unless `Side::Left` is given.
pub fn vn_eval_sided(n: usize, x: f64, xi: f64, side: Side) -> Result<f64> {
    if n + 1 > MAX_BERNOULLI {
        return Err(Error::UnsupportedOrder(n));
    }
    let off = (x - xi).rem_euclid(TAU);
    let t = if off == 0.0 && side == Side::Left {
        1.0
    } else {
        off / TAU
    };
    let b = bernoulli_poly(n + 1, t)?;
    Ok(-TAU.powi(n as i32) / factorial(n + 1) * b)
}

pub fn vn_eval(n: usize, x: f64, xi: f64) -> Result<f64> {
    vn_eval_sided(n, x, xi, Side::Right)
}

// ---------------------------------------------------------------------------
// Jump models
// ---------------------------------------------------------------------------

/// One discontinuity: location and the jumps `a_0..a_d` of `f^{(ℓ)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub xi: f64,
    pub magnitudes: Vec<Complex64>,
}

impl Jump {
    pub fn real(xi: f64, a: &[f64]) -> Self {
        Jump {
            xi,
            magnitudes: a.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// The singular part Φ of order `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpModel {
    order: usize,
    jumps: Vec<Jump>,
}

impl JumpModel {
    /// Checks lengths and ordering; `a_0 != 0` is checked by
    /// [`JumpModel::validate_genuine`].
    pub fn new(order: usize, jumps: Vec<Jump>) -> Result<Self> {
        if order + 1 > MAX_BERNOULLI {
            return Err(Error::UnsupportedOrder(order));
        }
        for (i, j) in jumps.iter().enumerate() {
            if !(j.xi >= -PI && j.xi < PI) {
                return Err(Error::Validation(format!(
                    "jump {i} location {} outside [-π, π)",
                    j.xi
                )));
            }
            if j.magnitudes.len() != order + 1 {
                return Err(Error::Validation(format!(
                    "jump {i} has {} magnitudes, order {order} needs {}",
                    j.magnitudes.len(),
                    order + 1
                )));
            }
            if j.magnitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
                return Err(Error::Validation(format!("jump {i} has non-finite magnitudes")));
            }
        }
        if jumps.windows(2).any(|w| w[0].xi >= w[1].xi) {
            return Err(Error::Validation(
                "jump locations must be strictly increasing".into(),
            ));
        }
        Ok(JumpModel { order, jumps })
    }

    pub fn single(xi: f64, a: &[f64]) -> Result<Self> {
        JumpModel::new(a.len().saturating_sub(1), vec![Jump::real(xi, a)])
    }

    pub fn empty(order: usize) -> Self {
        JumpModel {
            order,
            jumps: Vec::new(),
        }
    }

    /// Sorts by location before validating.
    pub fn from_unsorted(order: usize, mut jumps: Vec<Jump>) -> Result<Self> {
        jumps.sort_by(|a, b| a.xi.total_cmp(&b.xi));
        JumpModel::new(order, jumps)
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }
    pub fn count(&self) -> usize {
        self.jumps.len()
    }

    pub fn locations(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.xi).collect()
    }

    pub fn is_real(&self) -> bool {
        self.jumps
            .iter()
            .all(|j| j.magnitudes.iter().all(|a| a.im == 0.0))
    }

    /// Every jump has a genuine lowest-order discontinuity.
    pub fn validate_genuine(&self) -> Result<()> {
        for (i, j) in self.jumps.iter().enumerate() {
            if j.magnitudes[0].norm() == 0.0 {
                return Err(Error::Validation(format!("jump {i} has a_0 = 0")));
            }
        }
        Ok(())
    }

    /// Smallest circular distance between distinct jumps (`2π` for K <= 1).
    pub fn min_separation(&self) -> f64 {
        let k = self.jumps.len();
        if k < 2 {
            return TAU;
        }
        (0..k)
            .map(|i| circular_distance(self.jumps[i].xi, self.jumps[(i + 1) % k].xi))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn magnitude_sum(&self) -> f64 {
        self.jumps
            .iter()
            .flat_map(|j| j.magnitudes.iter())
            .map(|a| a.norm())
            .sum()
    }

    /// Same magnitudes, every order above `order` dropped or zero-padded.
    pub fn with_order(&self, order: usize) -> JumpModel {
        let jumps = self
            .jumps
            .iter()
            .map(|j| {
                let mut m = j.magnitudes.clone();
                m.resize(order + 1, Complex64::new(0.0, 0.0));
                Jump { xi: j.xi, magnitudes: m }
            })
            .collect();
        JumpModel { order, jumps }
    }

    /// Real-valued `Φ(x)`; complex magnitudes contribute their real part.
    pub fn phi_eval(&self, x: f64, side: Option<Side>) -> Result<f64> {
        Ok(self.phi_eval_complex(x, side)?.re)
    }

    pub fn phi_eval_complex(&self, x: f64, side: Option<Side>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in &self.jumps {
            let at_jump = (x - j.xi).rem_euclid(TAU) == 0.0;
            let s = match (at_jump, side) {
                (true, None) => return Err(Error::AmbiguousPoint { x }),
                (true, Some(s)) => s,
                (false, _) => Side::Right,
            };
            for (l, a) in j.magnitudes.iter().enumerate() {
                acc += a * vn_eval_sided(l, x, j.xi, s)?;
            }
        }
        Ok(acc)
    }

    /// `c_k(Φ)`; zero at `k = 0` by the zero-mean convention of the basis.
    pub fn fourier_coeff(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.jumps
            .iter()
            .map(|j| single_jump_coeff(&j.xi, &j.magnitudes, k))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// `c_k(Φ)` for `|k| <= M` as a spectrum.
    pub fn spectrum(&self, max_index: usize) -> FourierSpectrum<f64> {
        FourierSpectrum::from_fn(max_index, self.is_real(), |k| self.fourier_coeff(k))
    }
}

/// `c_k` of one jump: `(1/2π) e^{-ikξ} Σ_ℓ a_ℓ (ik)^{-ℓ-1}`, `k != 0`.
pub fn single_jump_coeff<R: Real>(xi: &R, magnitudes: &[Complex<R>], k: i64) -> Complex<R> {
    debug_assert!(k != 0);
    let kr = R::from_i64(k);
    // (ik)^{-1} = -i/k
    let inv_ik = Complex::new(R::zero(), -(R::one() / kr.clone()));
    let mut pow = inv_ik.clone();
    let mut sum = Complex::new(R::zero(), R::zero());
    for a in magnitudes {
        sum = sum + a.clone() * pow.clone();
        pow = pow * inv_ik.clone();
    }
    let phase = cis_multiple(&(-xi.clone()), k);
    cscale(&(phase * sum), &(R::one() / R::two_pi()))
}

// ---------------------------------------------------------------------------
// A-priori bounds
// ---------------------------------------------------------------------------

/// Separation `J`, magnitude bounds `B <= |a_0|`, `Σ|a| <= A`, and the
/// smooth-part decay constant `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AprioriBounds {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl AprioriBounds {
    pub fn validate(&self, k: usize) -> Result<()> {
        if !(self.j > 0.0) {
            return Err(Error::Bounds("J must be positive".into()));
        }
        if !(self.b > 0.0) {
            return Err(Error::Bounds("B must be positive".into()));
        }
        if self.b > self.a {
            return Err(Error::Bounds("B must not exceed A".into()));
        }
        if !(self.r >= 0.0) {
            return Err(Error::Bounds("R must be non-negative".into()));
        }
        if k > 0 && self.j > TAU / k as f64 + 1e-12 {
            return Err(Error::Bounds(format!("J = {} exceeds 2π/K", self.j)));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smooth parts
// ---------------------------------------------------------------------------

/// Built-in smooth parts, tagged by `name` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum SmoothSpec {
    Zero,
    /// `amplitude · sin(frequency · x)`.
    Sin {
        #[serde(default = "one_f64")]
        amplitude: f64,
        #[serde(default = "one_i64")]
        frequency: i64,
    },
    /// `amplitude · (exp(sin(x - shift)) - I_0(1))`.
    Expsin {
        #[serde(default = "one_f64")]
        amplitude: f64,
        #[serde(default)]
        shift: f64,
    },
    /// `Σ_i w_i V_p(x; η_i)`: a periodic spline in `C^{p-1}` with
    /// coefficients decaying like `k^{-p-1}`.
    PolyBlend {
        #[serde(default = "three")]
        order: usize,
        #[serde(default = "blend_nodes")]
        nodes: Vec<f64>,
        #[serde(default = "blend_weights")]
        weights: Vec<f64>,
    },
}

fn one_f64() -> f64 {
    1.0
}
fn one_i64() -> i64 {
    1
}
fn three() -> usize {
    3
}
fn blend_nodes() -> Vec<f64> {
    vec![-2.1, 1.9]
}
fn blend_weights() -> Vec<f64> {
    vec![0.8, -0.6]
}

impl SmoothSpec {
    /// Catalog entry with default parameters.
    pub fn by_name(name: &str) -> Result<SmoothSpec> {
        let v = serde_json::json!({ "name": name });
        serde_json::from_value(v).map_err(|_| {
            Error::Validation(format!(
                "unknown smooth part '{name}' (expected zero, sin, expsin, poly-blend)"
            ))
        })
    }

    pub fn build(&self) -> Result<SmoothPart> {
        SmoothPart::from_spec(self)
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ExactCoeff = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

/// A real periodic smooth function with an optional closed-form spectrum.
#[derive(Clone)]
pub struct SmoothPart {
    evaluator: Evaluator,
    exact: Option<ExactCoeff>,
    coeff_bound: Option<f64>,
    label: String,
}

impl std::fmt::Debug for SmoothPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothPart")
            .field("label", &self.label)
            .field("coeff_bound", &self.coeff_bound)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// Maximum tolerated change between the 4M- and 8M-point trapezoid rules,
/// relative to the largest coefficient.
pub const QUADRATURE_TOL: f64 = 1e-11;

/// `I_0(1)`, the mean of `exp(sin x)`.
pub fn bessel_i0_one() -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..30 {
        term *= 0.25 / (m as f64 * m as f64);
        sum += term;
    }
    sum
}

impl SmoothPart {
    /// A user-supplied smooth function; coefficients come from quadrature.
    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        coeff_bound: Option<f64>,
    ) -> Self {
        SmoothPart {
            evaluator: Arc::new(f),
            exact: None,
            coeff_bound,
            label: label.into(),
        }
    }

    pub fn from_spec(spec: &SmoothSpec) -> Result<Self> {
        Ok(match spec.clone() {
            SmoothSpec::Zero => SmoothPart {
                evaluator: Arc::new(|_| 0.0),
                exact: Some(Arc::new(|_| Complex64::new(0.0, 0.0))),
                coeff_bound: Some(0.0),
                label: "zero".into(),
            },
            SmoothSpec::Sin {
                amplitude,
                frequency,
            } => {
                if frequency == 0 {
                    return Err(Error::Validation("sin frequency must be nonzero".into()));
                }
                SmoothPart {
                    evaluator: Arc::new(move |x| amplitude * (frequency as f64 * x).sin()),
                    exact: Some(Arc::new(move |k| {
                        if k == frequency {
                            Complex64::new(0.0, -amplitude / 2.0)
                        } else if k == -frequency {
                            Complex64::new(0.0, amplitude / 2.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })),
                    coeff_bound: None,
                    label: "sin".into(),
                }
            }
            SmoothSpec::Expsin { amplitude, shift } => {
                let mean = bessel_i0_one();
                SmoothPart {
                    evaluator: Arc::new(move |x| amplitude * ((x - shift).sin().exp() - mean)),
                    exact: None,
                    coeff_bound: None,
                    label: "expsin".into(),
                }
            }
            SmoothSpec::PolyBlend {
                order,
                nodes,
                weights,
            } => {
                if order < 1 || order + 1 > MAX_BERNOULLI {
                    return Err(Error::UnsupportedOrder(order));
                }
                if nodes.len() != weights.len() {
                    return Err(Error::Validation(
                        "poly-blend nodes and weights differ in length".into(),
                    ));
                }
                let terms: Vec<Jump> = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&eta, &w)| {
                        let mut a = vec![0.0; order + 1];
                        a[order] = w;
                        Jump::real(wrap_angle(eta), &a)
                    })
                    .collect();
                let model = JumpModel::from_unsorted(order, terms)?;
                let bound = weights.iter().map(|w| w.abs()).sum::<f64>() / TAU;
                let eval_model = model.clone();
                SmoothPart {
                    evaluator: Arc::new(move |x| {
                        eval_model.phi_eval(x, Some(Side::Right)).unwrap_or(f64::NAN)
                    }),
                    exact: Some(Arc::new(move |k| model.fourier_coeff(k))),
                    coeff_bound: Some(bound),
                    label: "poly-blend".into(),
                }
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn coeff_bound(&self) -> Option<f64> {
        self.coeff_bound
    }

    pub fn has_exact_coefficients(&self) -> bool {
        self.exact.is_some()
    }

    /// `c_k(Ψ)` for `k = -M..=M`.
    pub fn coefficients(&self, max_index: usize) -> Result<Vec<Complex64>> {
        let m = max_index as i64;
        if let Some(exact) = &self.exact {
            return Ok((-m..=m).map(|k| exact(k)).collect());
        }
        let fine = trapezoid_coefficients(&*self.evaluator, 8 * max_index, max_index);
        let coarse = trapezoid_coefficients(&*self.evaluator, 4 * max_index, max_index);
        let scale = fine.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let tail = fine
            .iter()
            .zip(&coarse)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if tail > QUADRATURE_TOL * scale.max(1.0) {
            return Err(Error::Synthesis { tail });
        }
        Ok(fine)
    }

    /// `max_{1<=k<=M} |c_k| k^{d+2}`, an empirical decay constant.
    pub fn fitted_bound(&self, d: usize, max_index: usize) -> Result<f64> {
        let c = self.coefficients(max_index)?;
        let m = max_index as i64;
        Ok((1..=m)
            .map(|k| c[(k + m) as usize].norm() * (k as f64).powi(d as i32 + 2))
            .fold(0.0, f64::max))
    }
}

/// Periodic trapezoid rule on `points` nodes over `[-π, π)`, returning
/// `c_k` for `k = -M..=M`.
pub fn trapezoid_coefficients(
    f: &(dyn Fn(f64) -> f64 + Send + Sync),
    points: usize,
    max_index: usize,
) -> Vec<Complex64> {
    let p = points.max(2 * max_index + 1);
    let mut buf: Vec<Complex64> = (0..p)
        .map(|i| Complex64::new(f(-PI + TAU * i as f64 / p as f64), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(p).process(&mut buf);
    let m = max_index as i64;
    (-m..=m)
        .map(|k| {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[k.rem_euclid(p as i64) as usize] * (sign / p as f64)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

/// `c_k(Φ) + c_k(Ψ)` for `|k| <= M`.
pub fn synth_spectrum(
    model: &JumpModel,
    smooth: Option<&SmoothPart>,
    max_index: usize,
) -> Result<FourierSpectrum<f64>> {
    let need = (model.order() + 2) * model.count();
    if max_index < need.max(1) {
        return Err(Error::Validation(format!(
            "M = {max_index} is below (d+2)K = {need}"
        )));
    }
    let psi = match smooth {
        Some(s) => Some(s.coefficients(max_index)?),
        None => None,
    };
    let m = max_index as i64;
    Ok(FourierSpectrum::from_fn(max_index, model.is_real(), |k| {
        let mut c = model.fourier_coeff(k);
        if let Some(p) = &psi {
            c += p[(k + m) as usize];
        }
        c
    }))
}

// ---------------------------------------------------------------------------
// Accuracy ceiling
// ---------------------------------------------------------------------------

/// Two spectra that agree on `|k| <= M` but come from functions whose jumps
/// differ by `delta`.
#[derive(Debug, Clone)]
pub struct AdversarialPair {
    pub g: FourierSpectrum<f64>,
    pub h: FourierSpectrum<f64>,
    pub delta: f64,
    /// Φ with every jump moved by `delta`.
    pub shifted: JumpModel,
    /// `b_k = c_k(Φ) - c_k(Φ_M)`, the smooth correction added to `h`.
    pub correction: FourierSpectrum<f64>,
    /// `max_{|k|<=M} |c_k(g) - c_k(h)|`.
    pub max_discrepancy: f64,
    /// `max_{1<=k<=M} |b_k| k^{d+2}`.
    pub max_scaled_correction: f64,
}

pub fn adversarial_pair(
    model: &JumpModel,
    max_index: usize,
    bounds: &AprioriBounds,
) -> Result<AdversarialPair> {
    let total = model.magnitude_sum();
    if !(total < bounds.a) {
        return Err(Error::Bounds(format!(
            "Σ|a| = {total} is not below A = {}",
            bounds.a
        )));
    }
    if !(bounds.r > 0.0) {
        return Err(Error::Bounds("R must be positive".into()));
    }
    if max_index < 1 {
        return Err(Error::Validation("M must be at least 1".into()));
    }
    let d = model.order();
    let delta = TAU * bounds.r / bounds.a * (max_index as f64).powi(-(d as i32) - 2);
    let shifted_jumps = model
        .jumps()
        .iter()
        .map(|j| Jump {
            xi: wrap_angle(j.xi + delta),
            magnitudes: j.magnitudes.clone(),
        })
        .collect();
    let shifted = JumpModel::from_unsorted(d, shifted_jumps)?;
    let g = model.spectrum(max_index);
    let base = shifted.spectrum(max_index);
    let real = g.real_valued() && base.real_valued();

    // h_k = c_k(Φ_M) + b_k; b_k is nudged until the sum reproduces c_k(Φ)
    // bit for bit, so no algorithm reading the coefficients can tell them apart.
    let correction = FourierSpectrum::from_fn(max_index, real, |k| {
        let target = *g.coeff(k);
        let start = *base.coeff(k);
        let mut b = target - start;
        for _ in 0..8 {
            let s = start + b;
            if s == target {
                break;
            }
            b += target - s;
        }
        b
    });
    let h = FourierSpectrum::from_fn(max_index, real, |k| *base.coeff(k) + *correction.coeff(k));

    let max_discrepancy = g
        .coeffs()
        .iter()
        .zip(h.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let max_scaled_correction = (1..=max_index as i64)
        .map(|k| correction.coeff(k).norm() * (k as f64).powi(d as i32 + 2))
        .fold(0.0, f64::max);
    Ok(AdversarialPair {
        g,
        h,
        delta,
        shifted,
        correction,
        max_discrepancy,
        max_scaled_correction,
    })
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpFile {
    pub xi: f64,
    pub a: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_imag: Option<Vec<f64>>,
}

/// `{"d", "jumps": [{"xi", "a"}], "smooth"?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub d: usize,
    pub jumps: Vec<JumpFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<SmoothSpec>,
}

impl ModelFile {
    pub fn from_model(model: &JumpModel, smooth: Option<SmoothSpec>) -> Self {
        ModelFile {
            d: model.order(),
            jumps: model
                .jumps()
                .iter()
                .map(|j| {
                    let imag: Vec<f64> = j.magnitudes.iter().map(|a| a.im).collect();
                    JumpFile {
                        xi: j.xi,
                        a: j.magnitudes.iter().map(|a| a.re).collect(),
                        a_imag: imag.iter().any(|&v| v != 0.0).then_some(imag),
                    }
                })
                .collect(),
            smooth,
        }
    }

    pub fn to_model(&self) -> Result<JumpModel> {
        let jumps = self
            .jumps
            .iter()
            .map(|j| {
                let magnitudes = match &j.a_imag {
                    Some(im) if im.len() == j.a.len() => j
                        .a
                        .iter()
                        .zip(im)
                        .map(|(&re, &im)| Complex64::new(re, im))
                        .collect(),
                    Some(_) => {
                        return Err(Error::Validation("a_imag length differs from a".into()))
                    }
                    None => j.a.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
                };
                Ok(Jump { xi: j.xi, magnitudes })
            })
            .collect::<Result<Vec<_>>>()?;
        JumpModel::new(self.d, jumps)
    }
}
