//! L(s; f) near the critical point.
//!
//! Two independent routes are carried. The smoothed `|L|²` formula ([`afe`])
//! is what the moment computations consume; the completed function
//! ([`complete`]) gives L itself with its phase and is what zero counting uses.

mod afe;
mod complete;
mod harmonic;
mod sym2;
mod weights;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use afe::{afe_modulus_sq, AfeTable, AfeValue};
pub use complete::{
    completed_lambda, hardy_z, l_complex, l_complex_split, l_euler, CompletedValue, EulerValue,
    LValue,
};
pub use harmonic::{
    harmonic_weights, petersson_norm, HarmonicFit, PairResidual, FIT_PAIRS, HOLDOUT_PAIRS,
    MAX_CONDITION,
};
pub use sym2::{rho_table, sym2_l1, sym2_l1_with, w_trunc, Smoothing, Sym2Value};
pub use weights::{afe_weight, AfeKernel, AfeWeightParams, WeightKind};

/// s = 1/2 + σ + it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub sigma: f64,
    pub t: f64,
}

impl CriticalPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        CriticalPoint { sigma, t }
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(0.5 + self.sigma, self.t)
    }
}

/// i^k for even k.
pub(crate) fn root_number(k: u32) -> f64 {
    if k % 4 == 0 {
        1.0
    } else {
        -1.0
    }
}
