//! Fourier-coefficient container and the spectral arithmetic built on it.

use crate::error::{Error, Result};
use crate::real::{cscale, Real};
use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

/// Coefficients `c_k` for `|k| <= M`, stored for the full signed range.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum<R = f64> {
    max_index: usize,
    coeffs: Vec<Complex<R>>,
    real_valued: bool,
}

/// Relative tolerance for the conjugate-symmetry invariant.
pub const SYMMETRY_TOL: f64 = 1e-14;

impl<R: Real> FourierSpectrum<R> {
    /// `coeffs` lists `k = -M..=M` in order.
    pub fn new(max_index: usize, coeffs: Vec<Complex<R>>, real_valued: bool) -> Result<Self> {
        if max_index < 1 {
            return Err(Error::Validation("spectrum needs M >= 1".into()));
        }
        if coeffs.len() != 2 * max_index + 1 {
            return Err(Error::Validation(format!(
                "expected {} coefficients for M = {max_index}, got {}",
                2 * max_index + 1,
                coeffs.len()
            )));
        }
        let spec = FourierSpectrum {
            max_index,
            coeffs,
            real_valued,
        };
        if real_valued {
            spec.check_symmetry()?;
        }
        Ok(spec)
    }

    /// Builds a spectrum from a closure over `k`. For real-valued spectra the
    /// closure is only queried for `k >= 0` and the rest is mirrored.
    pub fn from_fn(
        max_index: usize,
        real_valued: bool,
        mut f: impl FnMut(i64) -> Complex<R>,
    ) -> Self {
        let m = max_index as i64;
        let coeffs = if real_valued {
            let half: Vec<Complex<R>> = (0..=m)
                .map(|k| {
                    let c = f(k);
                    if k == 0 {
                        Complex::new(c.re, R::zero())
                    } else {
                        c
                    }
                })
                .collect();
            let mut out = Vec::with_capacity(2 * max_index + 1);
            out.extend(half[1..].iter().rev().map(|c| c.conj()));
            out.extend(half);
            out
        } else {
            (-m..=m).map(f).collect()
        };
        FourierSpectrum {
            max_index,
            coeffs,
            real_valued,
        }
    }

    pub fn zeros(max_index: usize) -> Self {
        Self::from_fn(max_index, true, |_| Complex::new(R::zero(), R::zero()))
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn real_valued(&self) -> bool {
        self.real_valued
    }

    /// Coefficients for `k = -M..=M`.
    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    /// `c_k`; panics when `|k| > M`.
    pub fn coeff(&self, k: i64) -> &Complex<R> {
        &self.coeffs[(k + self.max_index as i64) as usize]
    }

    pub fn get(&self, k: i64) -> Option<&Complex<R>> {
        if k.unsigned_abs() as usize > self.max_index {
            None
        } else {
            Some(self.coeff(k))
        }
    }

    fn check_symmetry(&self) -> Result<()> {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.re.to_f64().abs().max(c.im.to_f64().abs()))
            .fold(0.0, f64::max);
        for k in 0..=self.max_index as i64 {
            let a = self.coeff(k);
            let b = self.coeff(-k).conj();
            let diff = (a.re.to_f64() - b.re.to_f64())
                .abs()
                .max((a.im.to_f64() - b.im.to_f64()).abs());
            if diff > SYMMETRY_TOL * scale {
                return Err(Error::Validation(format!(
                    "real-valued spectrum violates conjugate symmetry at k = {k}"
                )));
            }
        }
        Ok(())
    }

    /// Keeps `|k| <= out_m`.
    pub fn truncate(&self, out_m: usize) -> Result<Self> {
        if out_m < 1 || out_m > self.max_index {
            return Err(Error::Range {
                index: out_m as i64,
                max: self.max_index,
            });
        }
        let off = self.max_index - out_m;
        Ok(FourierSpectrum {
            max_index: out_m,
            coeffs: self.coeffs[off..off + 2 * out_m + 1].to_vec(),
            real_valued: self.real_valued,
        })
    }

    /// `m_k = 2π (ik)^{d+1} c_k` at each requested index.
    pub fn weight_moments(&self, d: usize, indices: &[usize]) -> Result<MomentSequence<R>> {
        let mut moments = Vec::with_capacity(indices.len());
        for &k in indices {
            if k < 1 || k > self.max_index {
                return Err(Error::Range {
                    index: k as i64,
                    max: self.max_index,
                });
            }
            moments.push(moment_weight::<R>(k, d) * self.coeff(k as i64).clone());
        }
        MomentSequence::new(d, indices.to_vec(), moments, 0.0)
    }

    /// Termwise difference over the common range `|k| <= min(M_a, M_b)`.
    pub fn sub(&self, other: &Self) -> Self {
        let m = self.max_index.min(other.max_index);
        let real = self.real_valued && other.real_valued;
        FourierSpectrum::from_fn(m, real, |k| {
            self.coeff(k).clone() - other.coeff(k).clone()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.max_index.min(other.max_index);
        let real = self.real_valued && other.real_valued;
        FourierSpectrum::from_fn(m, real, |k| {
            self.coeff(k).clone() + other.coeff(k).clone()
        })
    }

    pub fn to_f64(&self) -> FourierSpectrum<f64> {
        FourierSpectrum {
            max_index: self.max_index,
            coeffs: self.coeffs.iter().map(crate::real::to_c64).collect(),
            real_valued: self.real_valued,
        }
    }
}

/// `2π (ik)^{d+1}`.
pub fn moment_weight<R: Real>(k: usize, d: usize) -> Complex<R> {
    let kr = R::from_i64(k as i64);
    let mut mag = R::two_pi();
    for _ in 0..=d {
        mag = mag * kr.clone();
    }
    cscale(&crate::real::i_pow::<R>(d + 1), &mag)
}

impl FourierSpectrum<f64> {
    /// Lifts a double-precision spectrum to another scalar type.
    pub fn to_real<R: Real>(&self) -> FourierSpectrum<R> {
        FourierSpectrum {
            max_index: self.max_index,
            coeffs: self.coeffs.iter().map(crate::real::from_c64).collect(),
            real_valued: self.real_valued,
        }
    }

    /// `Σ_{|k|<=M} c_k e^{ikx}`; the imaginary part is dropped for real spectra.
    pub fn eval_partial_sum(&self, x: f64) -> Complex64 {
        let m = self.max_index as i64;
        if self.real_valued {
            let mut acc = self.coeff(0).re;
            for k in 1..=m {
                let (s, c) = (k as f64 * x).sin_cos();
                let ck = self.coeff(k);
                acc += 2.0 * (ck.re * c - ck.im * s);
            }
            Complex64::new(acc, 0.0)
        } else {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in -m..=m {
                let (s, c) = (k as f64 * x).sin_cos();
                acc += self.coeff(k) * Complex64::new(c, s);
            }
            acc
        }
    }

    pub fn to_json(&self) -> String {
        let file = SpectrumFile {
            m: self.max_index,
            real_valued: self.real_valued,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string(&file).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpectrumFile =
            serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        file.try_into()
    }
}

/// On-disk layout: `{"M", "real_valued", "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFile {
    #[serde(rename = "M")]
    pub m: usize,
    pub real_valued: bool,
    pub coeffs: Vec<[f64; 2]>,
}

impl TryFrom<SpectrumFile> for FourierSpectrum<f64> {
    type Error = Error;
    fn try_from(f: SpectrumFile) -> Result<Self> {
        let coeffs = f.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        FourierSpectrum::new(f.m, coeffs, f.real_valued)
    }
}

impl From<&FourierSpectrum<f64>> for SpectrumFile {
    fn from(s: &FourierSpectrum<f64>) -> Self {
        SpectrumFile {
            m: s.max_index,
            real_valued: s.real_valued,
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Coefficients of the product `a·b` for `|k| <= out_m`, summing every
/// `n` for which both `c_n(a)` and `c_{k-n}(b)` are stored.
pub fn product_spectrum(
    a: &FourierSpectrum<f64>,
    b: &FourierSpectrum<f64>,
    out_m: usize,
) -> Result<FourierSpectrum<f64>> {
    if out_m < 1 || out_m > a.max_index {
        return Err(Error::Range {
            index: out_m as i64,
            max: a.max_index,
        });
    }
    let ma = a.max_index as i64;
    let mb = b.max_index as i64;
    let real = a.real_valued && b.real_valued;
    Ok(FourierSpectrum::from_fn(out_m, real, |k| {
        let lo = (-ma).max(k - mb);
        let hi = ma.min(k + mb);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in lo..=hi {
            acc += a.coeff(n) * b.coeff(k - n);
        }
        acc
    }))
}

/// Weighted moments `m̃_k` on an index set, with the noise level `R*`
/// (`|m̃_k - m_k| <= R*/k`) when known.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<R = f64> {
    order: usize,
    indices: Vec<usize>,
    moments: Vec<Complex<R>>,
    noise_bound: f64,
}

impl<R: Real> MomentSequence<R> {
    pub fn new(
        order: usize,
        indices: Vec<usize>,
        moments: Vec<Complex<R>>,
        noise_bound: f64,
    ) -> Result<Self> {
        if indices.len() != moments.len() {
            return Err(Error::Validation(
                "moment indices and values differ in length".into(),
            ));
        }
        if indices.first().is_some_and(|&k| k == 0) {
            return Err(Error::Validation("k = 0 is not a moment index".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "moment indices must be strictly increasing".into(),
            ));
        }
        if !(noise_bound >= 0.0) {
            return Err(Error::Validation("noise bound must be non-negative".into()));
        }
        Ok(MomentSequence {
            order,
            indices,
            moments,
            noise_bound,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
    pub fn moments(&self) -> &[Complex<R>] {
        &self.moments
    }
    pub fn noise_bound(&self) -> f64 {
        self.noise_bound
    }

    pub fn with_noise_bound(mut self, r: f64) -> Self {
        self.noise_bound = r;
        self
    }

    /// The moment at index `k`, if sampled.
    pub fn at(&self, k: usize) -> Option<&Complex<R>> {
        self.indices
            .binary_search(&k)
            .ok()
            .map(|i| &self.moments[i])
    }
}
