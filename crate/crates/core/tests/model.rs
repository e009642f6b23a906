mod common;

use common::{fourier_quadrature, gauss_legendre};
use fourier_jumps::model::{
    adversarial_pair, bernoulli_poly, synth_spectrum, vn_eval, vn_eval_sided, Jump, JumpModel,
    ModelFile, Side, SmoothPart, SmoothSpec,
};
use fourier_jumps::{full_reconstruct, AprioriBounds, Error, ReconstructionConfig};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

/// Bernoulli numbers from `Σ_{k<n+1} C(n+1,k) B_k = 0`, then
/// `B_n(x) = Σ C(n,k) B_k x^{n-k}`.
fn bernoulli_oracle(n: usize, x: f64) -> f64 {
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let mut b = vec![1.0];
    for m in 1..=n {
        let s: f64 = (0..m).map(|k| binom(m + 1, k) * b[k]).sum();
        b.push(-s / (m + 1) as f64);
    }
    (0..=n).map(|k| binom(n, k) * b[k] * x.powi((n - k) as i32)).sum()
}

#[test]
fn bernoulli_examples() {
    assert_eq!(bernoulli_poly(0, 0.37).unwrap(), 1.0);
    assert_eq!(bernoulli_poly(1, 0.0).unwrap(), -0.5);
    assert!((bernoulli_poly(2, 0.0).unwrap() - bernoulli_oracle(2, 0.0)).abs() < 1e-15);
    assert!((bernoulli_oracle(2, 0.0) - 1.0 / 6.0).abs() < 1e-15);
    for n in 0..=10 {
        for x in [0.0, 0.1, 0.5, 0.93] {
            assert!((bernoulli_poly(n, x).unwrap() - bernoulli_oracle(n, x)).abs() < 1e-12);
        }
    }
    assert!(matches!(bernoulli_poly(33, 0.5), Err(Error::UnsupportedOrder(_))));
}

#[test]
fn vn_examples() {
    let xi = 0.4;
    assert_eq!(vn_eval_sided(0, xi, xi, Side::Right).unwrap(), 0.5);
    assert_eq!(vn_eval_sided(0, xi, xi, Side::Left).unwrap(), -0.5);
    assert!(vn_eval(0, xi - PI, xi).unwrap().abs() < 1e-15);
    assert!((vn_eval(1, PI, 0.0).unwrap() - PI / 12.0).abs() < 1e-14);
}

fn right(model: &JumpModel, x: f64) -> f64 {
    model.phi_eval(x, Some(Side::Right)).unwrap()
}

#[test]
fn phi_jumps_match_finite_differences() {
    let zero = JumpModel::new(1, vec![Jump::real(0.2, &[0.0, 0.0])]).unwrap();
    assert!((-20..20).all(|i| zero.phi_eval(0.15 * i as f64 + 0.01, None).unwrap() == 0.0));

    let unit = JumpModel::single(-0.3, &[1.0]).unwrap();
    let left = unit.phi_eval(-0.3, Some(Side::Left)).unwrap();
    assert!((right(&unit, -0.3) - left - 1.0).abs() < 1e-15);

    let m = JumpModel::single(0.7, &[1.0, -0.5, 0.3]).unwrap();
    let h = 1e-4;
    let f = |x: f64| right(&m, x);
    let xi = 0.7;
    let second_right = (f(xi) - 2.0 * f(xi + h) + f(xi + 2.0 * h)) / (h * h);
    let g = |x: f64| m.phi_eval(x, Some(Side::Left)).unwrap();
    let second_left = (g(xi) - 2.0 * g(xi - h) + g(xi - 2.0 * h)) / (h * h);
    assert!((second_right - second_left - 0.3).abs() < 1e-3);
    let first_right = (-3.0 * f(xi) + 4.0 * f(xi + h) - f(xi + 2.0 * h)) / (2.0 * h);
    let first_left = (3.0 * g(xi) - 4.0 * g(xi - h) + g(xi - 2.0 * h)) / (2.0 * h);
    assert!((first_right - first_left + 0.5).abs() < 1e-3);
}

#[test]
fn coefficients_match_quadrature() {
    let unit = JumpModel::single(0.0, &[1.0]).unwrap();
    assert!((unit.fourier_coeff(1) - Complex64::new(0.0, -1.0 / TAU)).norm() < 1e-16);
    assert_eq!(unit.fourier_coeff(0), Complex64::new(0.0, 0.0));

    let m = JumpModel::single(1.0, &[2.0, 3.0]).unwrap();
    let f = |t: f64| m.phi_eval(t, Some(Side::Right)).unwrap();
    for k in [1i64, 5, -5, 12] {
        let want = fourier_quadrature(&f, k, &[1.0], 64);
        assert!((m.fourier_coeff(k) - want).norm() < 1e-10, "k = {k}");
    }
}

#[test]
fn synthesis_examples() {
    let m = JumpModel::new(1, vec![Jump::real(-1.0, &[1.0, 0.2]), Jump::real(2.0, &[-0.5, 0.1])]).unwrap();
    let s = synth_spectrum(&m, None, 40).unwrap();
    assert!((-40..=40).all(|k| *s.coeff(k) == m.fourier_coeff(k) || k == 0));

    let sin = SmoothSpec::by_name("sin").unwrap().build().unwrap();
    let s = synth_spectrum(&JumpModel::empty(0), Some(&sin), 16).unwrap();
    assert!((s.coeff(1) - Complex64::new(0.0, -0.5)).norm() < 1e-12);
    assert!((s.coeff(-1) - Complex64::new(0.0, 0.5)).norm() < 1e-12);
    assert!((-16..=16).filter(|k: &i64| k.abs() != 1).all(|k| s.coeff(k).norm() < 1e-12));
}

#[test]
fn expsin_decays_faster_than_required() {
    let m = JumpModel::new(2, vec![
        Jump::real(-1.3, &[1.0, -0.5, 0.3]),
        Jump::real(0.7, &[-0.8, 0.4, 0.25]),
    ])
    .unwrap();
    let psi = SmoothSpec::by_name("expsin").unwrap().build().unwrap();
    let with = synth_spectrum(&m, Some(&psi), 64).unwrap();
    let pts: Vec<(f64, f64)> = (2..=20)
        .map(|k| (k as f64, (with.coeff(k) - m.fourier_coeff(k)).norm()))
        .filter(|&(_, c)| c > 1e-15)
        .map(|(k, c)| (k.ln(), c.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let r = psi.fitted_bound(2, 64).unwrap();
    println!("expsin fitted R = {r:.4e}, decay exponent {slope:.2}");
    assert!(slope <= -4.0 + 0.2);
    assert!((1..=64).all(|k| (with.coeff(k) - m.fourier_coeff(k)).norm() <= r * (k as f64).powi(-4) * (1.0 + 1e-12)));
}

#[test]
fn rough_custom_part_fails_synthesis() {
    let kink = SmoothPart::custom("abs-sin", |x: f64| x.sin().abs(), None);
    assert!(matches!(
        synth_spectrum(&JumpModel::empty(0), Some(&kink), 32),
        Err(Error::Synthesis { .. })
    ));
}

#[test]
fn adversarial_examples() {
    let model = JumpModel::single(0.5, &[1.0, 0.5]).unwrap();
    let bounds = AprioriBounds { j: 1.0, a: 2.0, b: 0.5, r: 1.0 };
    let pair = adversarial_pair(&model, 100, &bounds).unwrap();
    assert!((pair.delta - PI * 1e-6).abs() < 1e-18);
    assert!(pair.max_discrepancy <= 1e-13);
    assert!(pair.max_scaled_correction < bounds.r);
    let shifted = pair.shifted.jumps()[0].xi - model.jumps()[0].xi;
    assert!((shifted - pair.delta).abs() < 1e-15);

    let config = ReconstructionConfig::new(1, 1, bounds);
    let a = full_reconstruct(&pair.g, &config).unwrap();
    let b = full_reconstruct(&pair.h, &config).unwrap();
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.corrected_spectrum.coeffs(), b.corrected_spectrum.coeffs());

    let tight = AprioriBounds { a: 1.5, ..bounds };
    assert!(matches!(adversarial_pair(&model, 100, &tight), Err(Error::Bounds(_))));
}

#[test]
fn model_file_round_trip() {
    let m = JumpModel::new(1, vec![Jump::real(-2.0, &[1.0, 0.25]), Jump::real(1.0, &[0.5, -1.0])]).unwrap();
    let text = serde_json::to_string(&ModelFile::from_model(&m, Some(SmoothSpec::by_name("expsin").unwrap()))).unwrap();
    let back: ModelFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_model().unwrap(), m);
    assert!(matches!(back.smooth, Some(SmoothSpec::Expsin { .. })));
}

fn arb_model(max_jumps: usize, max_order: usize) -> impl Strategy<Value = JumpModel> {
    (0..=max_order, 1..=max_jumps).prop_flat_map(|(d, k)| {
        (
            Just(d),
            prop::collection::vec(0.0f64..1.0, k),
            prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d + 1), k),
        )
            .prop_map(|(d, offs, mags)| {
                // Spread the jumps over equal sectors so they stay separated.
                let k = offs.len();
                let jumps = offs
                    .iter()
                    .zip(&mags)
                    .enumerate()
                    .map(|(j, (o, a))| Jump::real(-PI + TAU * (j as f64 + 0.1 + 0.8 * o) / k as f64, a))
                    .collect();
                JumpModel::new(d, jumps).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn phi_has_zero_mean(m in arb_model(3, 4)) {
        let rule = gauss_legendre(8);
        let mut cuts = vec![-PI];
        cuts.extend(m.locations());
        cuts.push(PI);
        let mut mean = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            for &(x, wt) in &rule {
                let t = a + 0.5 * (b - a) * (x + 1.0);
                mean += 0.5 * (b - a) * wt * m.phi_eval(t, Some(Side::Right)).unwrap();
            }
        }
        prop_assert!((mean / TAU).abs() <= 1e-10);
    }

    #[test]
    fn coefficients_decay_like_one_over_k(m in arb_model(3, 4), k in 10i64..5000) {
        let total: f64 = m.jumps().iter().flat_map(|j| j.magnitudes.iter()).map(|a| a.norm()).sum();
        prop_assert!(m.fourier_coeff(k).norm() * k as f64 <= total);
        prop_assert!(m.fourier_coeff(-k).norm() * k as f64 <= total);
    }

    #[test]
    fn coefficients_are_additive(m in arb_model(4, 3), k in 1i64..400, split in 1usize..4) {
        let jumps = m.jumps();
        let cut = split.min(jumps.len());
        let a = JumpModel::new(m.order(), jumps[..cut].to_vec()).unwrap();
        let b = JumpModel::new(m.order(), jumps[cut..].to_vec()).unwrap();
        let whole = m.fourier_coeff(k);
        let parts = a.fourier_coeff(k) + b.fourier_coeff(k);
        prop_assert!((whole - parts).norm() <= 1e-14 * whole.norm().max(1e-300) * 4.0);
    }

    #[test]
    fn bernoulli_difference_identity(n in 1usize..14, x in 0.0f64..1.0) {
        // B_n(x+1) - B_n(x) = n x^{n-1}, with B_n(x+1) from the oracle.
        let lhs = bernoulli_oracle(n, x + 1.0) - bernoulli_poly(n, x).unwrap();
        let rhs = n as f64 * x.powi(n as i32 - 1);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }
}
