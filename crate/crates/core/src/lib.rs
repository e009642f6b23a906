//! Reconstruction of piecewise-smooth periodic functions from finitely many
//! Fourier coefficients.
//!
//! A function with `K` jumps is split as `f = Φ + Ψ`, where Φ is a piecewise
//! polynomial built from periodic Bernoulli kernels and Ψ is smooth. The jump
//! locations and the jumps of `f, f', ..., f^{(d)}` are recovered from
//! decimated samples of the weighted moments `2π(ik)^{d+1} c_k`, which gives
//! location errors of order `M^{-d-2}`. Subtracting the recovered Φ̃ from the
//! data leaves a rapidly converging Fourier series for Ψ.
//!
//! ```
//! use fourier_jumps::model::{synth_spectrum, AprioriBounds, JumpModel};
//! use fourier_jumps::reconstruct::{full_reconstruct, ReconstructionConfig};
//!
//! let truth = JumpModel::single(0.7, &[1.0, -0.5, 0.3]).unwrap();
//! let spec = synth_spectrum(&truth, None, 128).unwrap();
//! let bounds = AprioriBounds { j: 1.0, a: 3.0, b: 0.5, r: 1.0 };
//! let appr = full_reconstruct(&spec, &ReconstructionConfig::new(2, 1, bounds)).unwrap();
//! assert!((appr.estimate.jumps()[0].xi - 0.7).abs() < 1e-9);
//! ```

pub mod error;
pub mod localize;
pub mod model;
pub mod real;
pub mod reconstruct;
pub mod solver;
pub mod spectrum;
pub mod stability;

pub use error::{Error, ErrorClass, Result};
pub use model::{AprioriBounds, Jump, JumpModel, SmoothPart, SmoothSpec};
pub use reconstruct::{full_reconstruct, Approximant, ReconstructionConfig};
pub use solver::{JumpEstimate, PlanKind};
pub use spectrum::{FourierSpectrum, MomentSequence};
