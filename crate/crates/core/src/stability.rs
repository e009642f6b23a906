//! Closed-form perturbation bounds for Prony-type systems and the constants
//! used to compare them with the decimated solver.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// A polynomial Prony system `m_k = Σ_j z_j^k Σ_{ℓ<ℓ_j} a_{ℓ,j} k^ℓ`
/// sampled on `t, t+σ, ..., t+(R-1)σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PronyConfig {
    pub multiplicities: Vec<usize>,
    pub t: usize,
    pub sigma: usize,
    /// `min_{i≠j} |z_i^σ - z_j^σ|`; 1 for a single node.
    pub node_gap: f64,
    pub eps: f64,
}

impl PronyConfig {
    pub fn single(multiplicity: usize, sigma: usize, eps: f64) -> Self {
        PronyConfig {
            multiplicities: vec![multiplicity],
            t: sigma,
            sigma,
            node_gap: 1.0,
            eps,
        }
    }

    pub fn nodes(&self) -> usize {
        self.multiplicities.len()
    }

    /// Total unknowns `R = Σ ℓ_j + K`.
    pub fn unknowns(&self) -> usize {
        self.multiplicities.iter().sum::<usize>() + self.nodes()
    }

    pub fn sampling_set(&self) -> Vec<usize> {
        (0..self.unknowns()).map(|i| self.t + i * self.sigma).collect()
    }
}

/// `(2/ℓ_j!) (2/δ_σ)^R ε / (|a_{ℓ_j-1,j}| σ^{ℓ_j})`.
pub fn node_perturbation_bound(cfg: &PronyConfig, j: usize, a_lead: f64) -> Result<f64> {
    let l = *cfg
        .multiplicities
        .get(j)
        .ok_or_else(|| Error::Validation(format!("node {j} out of range")))?;
    if !(cfg.node_gap > 0.0) {
        return Err(Error::DegenerateNodes);
    }
    if cfg.node_gap > 2.0 {
        return Err(Error::Validation("node gap cannot exceed 2".into()));
    }
    if !(a_lead > 0.0) {
        return Err(Error::Validation("leading magnitude must be positive".into()));
    }
    if cfg.sigma < 1 {
        return Err(Error::Validation("σ must be positive".into()));
    }
    let r = cfg.unknowns() as i32;
    Ok(2.0 / factorial(l) * (2.0 / cfg.node_gap).powi(r) * cfg.eps
        / (a_lead * (cfg.sigma as f64).powi(l as i32)))
}

/// `2^{d+2}(d+2)/(d+1)!`.
pub fn decimated_constant(d: usize) -> f64 {
    2f64.powi(d as i32 + 2) * (d + 2) as f64 / factorial(d + 1)
}

pub fn decimated_constant_exact(d: usize) -> BigRational {
    BigRational::new(
        BigInt::from(2).pow(d as u32 + 2) * BigInt::from(d + 2),
        factorial_big(d + 1),
    )
}

/// `2^{d+2}(d+2)/(d+1)! · (R*/B*) · N^{-d-2}`, `N = floor(M/(d+2))`.
pub fn decimated_node_bound(d: usize, max_index: usize, r_star: f64, b_star: f64) -> Result<f64> {
    let n = max_index / (d + 2);
    if n < 1 {
        return Err(Error::Range {
            index: max_index as i64,
            max: d + 2,
        });
    }
    if !(b_star > 0.0) {
        return Err(Error::Validation("B* must be positive".into()));
    }
    Ok(decimated_constant(d) * r_star / b_star * (n as f64).powi(-(d as i32) - 2))
}

/// The general bound evaluated at the decimated single-jump parameters
/// (`ℓ = d+1`, `σ = N`, `δ_σ = 1`, `ε = R*/M`, `a_lead = B*`).
pub fn decimated_node_bound_via_prony(
    d: usize,
    max_index: usize,
    r_star: f64,
    b_star: f64,
) -> Result<f64> {
    let n = max_index / (d + 2);
    let cfg = PronyConfig::single(d + 1, n.max(1), r_star / max_index as f64);
    node_perturbation_bound(&cfg, 0, b_star)
}

/// `3^{d+1}/(d+1)!`.
pub fn c9_bound(d: usize) -> f64 {
    3f64.powi(d as i32 + 1) / factorial(d + 1)
}

pub fn c9_bound_exact(d: usize) -> BigRational {
    BigRational::new(BigInt::from(3).pow(d as u32 + 1), factorial_big(d + 1))
}

/// `(3/2)^{d+1} / (2(d+2))`.
pub fn method_gap_factor(d: usize) -> f64 {
    1.5f64.powi(d as i32 + 1) / (2.0 * (d + 2) as f64)
}

pub fn method_gap_factor_exact(d: usize) -> BigRational {
    BigRational::new(
        BigInt::from(3).pow(d as u32 + 1),
        BigInt::from(2).pow(d as u32 + 1) * BigInt::from(2 * (d + 2)),
    )
}

/// `d_used - 2 d_true - 2`.
pub fn misspec_exponent(d_used: usize, d_true: usize) -> Result<i64> {
    if d_true > d_used {
        return Err(Error::Validation("d_true must not exceed d_used".into()));
    }
    Ok(d_used as i64 - 2 * d_true as i64 - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingKind {
    /// The top `(d+2)K` consecutive indices.
    S1,
    /// Multiples of `floor(M/((d+2)K))`.
    S2,
}

pub fn sampling_set(kind: SamplingKind, max_index: usize, d: usize, k: usize) -> Result<Vec<usize>> {
    let len = (d + 2) * k;
    if k < 1 || max_index < len {
        return Err(Error::Range {
            index: max_index as i64,
            max: len,
        });
    }
    Ok(match kind {
        SamplingKind::S1 => (max_index - len + 1..=max_index).collect(),
        SamplingKind::S2 => {
            let step = max_index / len;
            (1..=len).map(|i| i * step).collect()
        }
    })
}
