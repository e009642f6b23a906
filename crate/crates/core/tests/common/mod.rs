#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss-Legendre quadrature of a complex integrand on [a, b].
pub fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let rule = gauss_legendre(12);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for &(x, w) in &rule {
            acc += f(lo + 0.5 * h * (x + 1.0)) * (0.5 * h * w);
        }
    }
    acc
}

/// `(1/2π) ∫ g(t) e^{-ikt} dt` over [-π, π], splitting at the given breaks.
pub fn fourier_quadrature(g: &dyn Fn(f64) -> f64, k: i64, breaks: &[f64], panels: usize) -> Complex64 {
    let mut cuts = vec![-PI];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|b| b.abs() < PI).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(PI);
    let integrand = |t: f64| Complex64::from_polar(g(t), -(k as f64) * t);
    cuts.windows(2)
        .map(|w| integrate(&integrand, w[0], w[1], panels))
        .sum::<Complex64>()
        / (2.0 * PI)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Adds `level·k^{-decay}·e^{iθ_k}` with seeded random phases to every
/// `k >= 1`, mirrored so the data stay real.
pub fn perturb(
    spec: &fourier_jumps::FourierSpectrum<f64>,
    level: f64,
    decay: f64,
    seed: u64,
) -> fourier_jumps::FourierSpectrum<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..=spec.max_index()).map(|_| rng.gen_range(-PI..PI)).collect();
    fourier_jumps::FourierSpectrum::from_fn(spec.max_index(), true, |k| {
        let c = *spec.coeff(k);
        if k == 0 {
            c
        } else {
            c + Complex64::from_polar(level * (k as f64).powf(-decay), phases[k as usize])
        }
    })
}

/// Least-squares slope of `ln err` against `ln m`.
pub fn loglog_slope(ms: &[usize], errs: &[f64]) -> f64 {
    let x: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let y: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>()
}

/// `e^{-ikξ}` from a Veltkamp/Dekker split product, so the phase carries no
/// `ulp(kξ)` rounding.
pub fn phase(k: f64, xi: f64) -> Complex64 {
    let split = |x: f64| {
        let t = 134217729.0 * x;
        let hi = t - (t - x);
        (hi, x - hi)
    };
    let p = k * xi;
    let ((kh, kl), (xh, xl)) = (split(k), split(xi));
    let e = ((kh * xh - p) + kh * xl + kl * xh) + kl * xl;
    let base = Complex64::from_polar(1.0, -p);
    base - base * Complex64::new(0.0, e)
}
