//! |L(1/2+σ+it; f)|² = Σ_d d^{−1−2σ} Σ_m λ(m)τ_it(m) m^{−1/2−σ}
//! (W(md²) + (4π²md²)^{2σ} W̃(md²)).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::weights::{AfeKernel, AfeWeightParams, WeightKind, IMAG_TOL};
use super::CriticalPoint;
use crate::eigenforms::Eigenform;
use crate::error::{Error, Result};
use crate::sums::tau_it_table;

/// Terms whose combined weight is below this fraction of its value at ξ = 1
/// are dropped.
const CUTOFF: f64 = 1e-17;
/// Largest admissible truncation point md².
const XI_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AfeValue {
    /// |L|², the real part of the sum.
    pub value: f64,
    /// Imaginary part of the sum; zero up to rounding.
    pub imag_residue: f64,
    /// Largest md² kept.
    pub truncation: u64,
    pub tail_estimate: f64,
}

/// Combined weights V(ξ) = W(ξ) + (4π²ξ)^{2σ}W̃(ξ) for ξ ≤ truncation, shared
/// by every form of one weight.
#[derive(Debug, Clone)]
pub struct AfeTable {
    pub k: u32,
    pub point: CriticalPoint,
    pub truncation: u64,
    pub nodes: usize,
    v: Vec<Complex64>,
    tau: Vec<f64>,
    scale: f64,
}

impl AfeTable {
    pub fn new(k: u32, point: CriticalPoint) -> Result<Self> {
        Self::with_params(AfeWeightParams::new(k, point.sigma, point.t))
    }

    pub fn with_params(params: AfeWeightParams) -> Result<Self> {
        if !(params.sigma > 0.0) {
            return Err(Error::domain(format!(
                "the |L|^2 formula needs sigma > 0, got {}",
                params.sigma
            )));
        }
        let kernel = AfeKernel::new(params)?;
        let two_sigma = 2.0 * params.sigma;
        let combined = |xi: f64| {
            kernel.eval(WeightKind::W, xi)
                + kernel.eval(WeightKind::WTilde, xi) * (4.0 * PI * PI * xi).powf(two_sigma)
        };
        let scale = combined(1.0).norm();
        let small = |xi: u64| combined(xi as f64).norm() < CUTOFF * scale;
        // The weights are flat, then fall off monotonically: bracket and bisect.
        let mut hi = 2u64;
        while !small(hi) {
            hi *= 2;
            if hi > XI_BUDGET {
                return Err(Error::Resource(format!(
                    "|L|^2 truncation beyond {XI_BUDGET} for k={}",
                    params.k
                )));
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if small(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let truncation = hi;
        let mut v = Vec::with_capacity(truncation as usize + 1);
        v.push(Complex64::new(0.0, 0.0));
        for xi in 1..=truncation {
            v.push(combined(xi as f64));
        }
        Ok(AfeTable {
            k: params.k,
            point: CriticalPoint::new(params.sigma, params.t),
            truncation,
            nodes: kernel.nodes(),
            v,
            tau: tau_it_table(params.t, truncation as usize),
            scale,
        })
    }

    /// τ_it(m) m^{−1/2−σ} V(md²): the weight of λ(m) in the d-th inner sum,
    /// without the d^{−1−2σ} factor. Real part only.
    pub fn coefficient(&self, m: u64, d: u64) -> f64 {
        let xi = m * d * d;
        if m == 0 || xi > self.truncation {
            return 0.0;
        }
        self.tau[m as usize] * (m as f64).powf(-0.5 - self.point.sigma) * self.v[xi as usize].re
    }

    /// The sum for one form of this weight.
    pub fn eval(&self, f: &Eigenform) -> Result<AfeValue> {
        if f.k != self.k {
            return Err(Error::domain(format!(
                "table built for weight {}, form has weight {}",
                self.k, f.k
            )));
        }
        let n = self.truncation;
        if f.n_max < n {
            return Err(Error::MissingEigenvalue(
                crate::arith::primes_up_to(n)
                    .into_iter()
                    .find(|&p| p > f.n_max)
                    .unwrap_or(n),
            ));
        }
        let lam = f.lambda_table();
        let sg = self.point.sigma;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut d = 1u64;
        while d * d <= n {
            let d2 = d * d;
            let mut inner = Complex64::new(0.0, 0.0);
            for m in 1..=n / d2 {
                let c = lam[m as usize] * self.tau[m as usize] * (m as f64).powf(-0.5 - sg);
                inner += self.v[(m * d2) as usize] * c;
            }
            acc += inner * (d as f64).powf(-1.0 - 2.0 * sg);
            d += 1;
        }
        let nf = n as f64;
        Ok(AfeValue {
            value: acc.re,
            imag_residue: acc.im,
            truncation: n,
            tail_estimate: CUTOFF * self.scale * nf.sqrt() * nf.ln().powi(2),
        })
    }
}

/// |L(1/2+σ+it; f)|² through the smoothed formula; σ > 0.
pub fn afe_modulus_sq(f: &Eigenform, point: CriticalPoint) -> Result<AfeValue> {
    let value = AfeTable::new(f.k, point)?.eval(f)?;
    if value.imag_residue.abs() > IMAG_TOL * value.value.abs().max(1.0) {
        return Err(Error::Accuracy {
            achieved: value.imag_residue.abs(),
            target: IMAG_TOL,
        });
    }
    Ok(value)
}
