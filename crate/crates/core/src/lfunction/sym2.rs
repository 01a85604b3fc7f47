//! L(s, sym² f) = ζ(2s) Σ λ(n²) n^{−s} = Σ ρ(n) n^{−s} at s = 1, and the
//! truncations w_f(x) = Σ ρ(n)/n.
//!
//! The value at 1 comes from the balanced approximate functional equation of
//! the degree-three function Λ₂(s) = γ₂(s)L₂(s) = Λ₂(1−s), with
//! γ₂(s) = π^{−(s+1)/2}Γ((s+1)/2)(2π)^{−(s+k−1)}Γ(s+k−1):
//!
//! L₂(1) = Σ ρ(n)/n V₁(n) + (γ₂(0)/γ₂(1)) Σ ρ(n) V₀(n),  γ₂(0)/γ₂(1) = 2π²/(k−1),
//!
//! where V_a(y) = (1/2πi)∫_{(2)} γ₂(a+w)/γ₂(a) y^{−w} G(w) dw/w for an even G
//! with G(0) = 1. Changing G changes the split between the two sums but not
//! the total, which is the self-check.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::eigenforms::{prime_power, Eigenform};
use crate::error::{Error, Result};
use crate::specials::ln_gamma;

const CONTOUR: f64 = 2.0;
const STEP: f64 = 0.2;
const NEGLIGIBLE: f64 = 1e-19;
const TERM_CUTOFF: f64 = 1e-18;

/// The even factor G in the weight integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    /// G(w) = 1.
    Plain,
    /// G(w) = e^{(w/4)²}. A steeper Gaussian would make the weights decay
    /// only like exp(−(log y)²/4).
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sym2Value {
    pub value: f64,
    /// Number of coefficients ρ(n) used.
    pub terms: u64,
    /// Size of the first omitted term times the number kept.
    pub tail_estimate: f64,
    pub smoothing: Smoothing,
}

fn ln_gamma2(k: u32, s: Complex64) -> Complex64 {
    let half = (s + 1.0) / 2.0;
    -half * PI.ln() + ln_gamma(half) - (s + (k as f64 - 1.0)) * (2.0 * PI).ln()
        + ln_gamma(s + (k as f64 - 1.0))
}

/// Contour nodes of V_a: pairs (w_j, γ₂(a+w_j)/γ₂(a)·G(w_j)/w_j).
fn weight_nodes(k: u32, a: f64, smoothing: Smoothing) -> Result<Vec<(Complex64, Complex64)>> {
    let base = ln_gamma2(k, Complex64::new(a, 0.0));
    let node = |y: f64| {
        let w = Complex64::new(CONTOUR, y);
        let g = match smoothing {
            Smoothing::Plain => Complex64::new(1.0, 0.0),
            Smoothing::Gaussian => (w * w / 16.0).exp(),
        };
        (w, (ln_gamma2(k, w + a) - base).exp() * g / w)
    };
    let mut out = vec![node(0.0)];
    let peak0 = out[0].1.norm();
    let mut peak = peak0;
    for j in 1..20_000 {
        let y = j as f64 * STEP;
        let (p, m) = (node(y), node(-y));
        let size = p.1.norm().max(m.1.norm());
        peak = peak.max(size);
        out.push(p);
        out.push(m);
        if j > 20 && size < NEGLIGIBLE * peak {
            return Ok(out);
        }
    }
    Err(Error::Accuracy {
        achieved: out.last().map(|n| n.1.norm()).unwrap_or(0.0) / peak,
        target: NEGLIGIBLE,
    })
}

fn eval_weight(nodes: &[(Complex64, Complex64)], y: f64) -> f64 {
    let ly = y.ln();
    let acc: Complex64 = nodes.iter().map(|(w, g)| g * (-w * ly).exp()).sum();
    acc.re * STEP / (2.0 * PI)
}

/// ρ(n) for n ≤ len (entry 0 unused), from ρ(p^e) = Σ_{j ≤ e/2} λ(p^{2(e−2j)}).
pub fn rho_table(f: &Eigenform, len: u64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; len as usize + 1];
    for n in 1..=len {
        let mut acc = 1.0;
        for (p, e) in arith::factorize(n) {
            let lp = f.lambda_p(p)?;
            let mut local = 0.0;
            for j in 0..=e / 2 {
                local += prime_power(lp, 2 * (e - 2 * j));
            }
            acc *= local;
        }
        out[n as usize] = acc;
    }
    Ok(out)
}

/// L(1, sym² f) with G(w) = 1.
pub fn sym2_l1(f: &Eigenform) -> Result<Sym2Value> {
    sym2_l1_with(f, Smoothing::Plain)
}

pub fn sym2_l1_with(f: &Eigenform, smoothing: Smoothing) -> Result<Sym2Value> {
    let k = f.k;
    let v1 = weight_nodes(k, 1.0, smoothing)?;
    let v0 = weight_nodes(k, 0.0, smoothing)?;
    let dual = 2.0 * PI * PI / (k as f64 - 1.0);
    let mut weights = Vec::new();
    let mut n = 1u64;
    let last;
    loop {
        let y = n as f64;
        let a = eval_weight(&v1, y) / y;
        let b = eval_weight(&v0, y) * dual;
        weights.push((a, b));
        let size = a.abs().max(b.abs());
        if n > 4 && size < TERM_CUTOFF {
            last = size;
            break;
        }
        n += 1;
        if n > 1_000_000 {
            return Err(Error::Resource("sym^2 series did not decay".into()));
        }
    }
    let rho = rho_table(f, n)?;
    let value = weights
        .iter()
        .enumerate()
        .map(|(i, (a, b))| rho[i + 1] * (a + b))
        .sum();
    Ok(Sym2Value {
        value,
        terms: n,
        tail_estimate: last * n as f64,
        smoothing,
    })
}

/// w_f(x) = Σ_{ℓ²d < x} λ(d²)/(ℓ²d) = Σ_{n < x} ρ(n)/n. The n = 1 term is
/// always kept, so w_f(1) = 1.
pub fn w_trunc(f: &Eigenform, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::domain(format!("w_trunc needs x >= 1, got {x}")));
    }
    let top = (x.ceil() as u64 - 1).max(1);
    let rho = rho_table(f, top)?;
    Ok((1..=top).map(|n| rho[n as usize] / n as f64).sum())
}
