//! L(s; f) from the completed function Λ(s) = (2π)^{−s}Γ(s+(k−1)/2)L(s),
//! Λ(s) = i^k Λ(1−s).
//!
//! Splitting the Mellin integral of f(iy) at y = A and folding the lower part
//! with the modular relation gives, with κ = (k−1)/2,
//!
//! L(s) = Σ λ(n) n^{−s} Q(s+κ, 2πnA)
//!      + i^k (2π)^{2s−1} Γ(1−s+κ)/Γ(s+κ) Σ λ(n) n^{s−1} Q(1−s+κ, 2πn/A),
//!
//! Q the regularised upper incomplete gamma. Every A > 0 gives the same value;
//! comparing two splits is the functional-equation check.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::root_number;
use crate::arith;
use crate::eigenforms::Eigenform;
use crate::error::{Error, Result};
use crate::specials::{ln_gamma, regularized_gamma_q};

/// Split used by [`l_complex`].
const DEFAULT_SPLIT: f64 = 1.0;
/// Split used on both sides of the functional-equation check.
const CHECK_SPLIT: f64 = 1.2;
const TERM_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LValue {
    pub value: Complex64,
    /// Number of Dirichlet coefficients used.
    pub terms: u64,
    pub error_estimate: f64,
}

/// L(s; f) with the split at y = `split`.
pub fn l_complex_split(f: &Eigenform, s: Complex64, split: f64) -> Result<LValue> {
    if !(split > 0.0) {
        return Err(Error::domain("split point must be positive"));
    }
    let kappa = (f.k as f64 - 1.0) / 2.0;
    let a1 = s + kappa;
    let a2 = Complex64::new(1.0, 0.0) - s + kappa;
    if a1.re <= 0.0 || a2.re <= 0.0 {
        return Err(Error::domain(format!(
            "s = {s} is outside the range -(k-1)/2 < Re s < (k+1)/2"
        )));
    }
    let two_pi = 2.0 * PI;
    let pref = (s * (2.0 * two_pi.ln()) - two_pi.ln() + ln_gamma(a2) - ln_gamma(a1)).exp()
        * root_number(f.k);
    let lam = f.lambda_table();
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut n = 1u64;
    loop {
        if n > f.n_max {
            return Err(Error::MissingEigenvalue(
                arith::primes_up_to(n + 200)
                    .into_iter()
                    .find(|&p| p > f.n_max)
                    .unwrap_or(n),
            ));
        }
        let nf = n as f64;
        let ln_n = nf.ln();
        let l = lam[n as usize];
        let t1 = (-s * ln_n).exp() * regularized_gamma_q(a1, two_pi * nf * split);
        let t2 = ((s - 1.0) * ln_n).exp() * regularized_gamma_q(a2, two_pi * nf / split) * pref;
        first += t1 * l;
        second += t2 * l;
        let size = t1.norm().max(t2.norm());
        peak = peak.max(size);
        // Past x = 2πn·min(A, 1/A) > Re a both incomplete gammas decay
        // geometrically.
        let x_min = two_pi * nf * split.min(1.0 / split);
        if x_min > a1.re.max(a2.re) + 1.0 && size < TERM_CUTOFF * peak {
            break;
        }
        n += 1;
    }
    Ok(LValue {
        value: first + second,
        terms: n,
        error_estimate: peak * 1e-15 * (n as f64).sqrt(),
    })
}

/// L(s; f) through the completed function, split at y = 1.
pub fn l_complex(f: &Eigenform, s: Complex64) -> Result<LValue> {
    l_complex_split(f, s, DEFAULT_SPLIT)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompletedValue {
    pub s: Complex64,
    /// Λ(s).
    pub lambda: Complex64,
    /// i^k Λ(1−s), computed from the opposite split.
    pub reflected: Complex64,
    pub residual: f64,
    pub relative_residual: f64,
}

fn completion_log(k: u32, s: Complex64) -> Complex64 {
    let kappa = (k as f64 - 1.0) / 2.0;
    -s * (2.0 * PI).ln() + ln_gamma(s + kappa)
}

/// Λ(s; f) = (2π)^{−s}Γ(s+(k−1)/2)L(s; f) for −1 ≤ Re s ≤ 2, with the
/// functional-equation residual |Λ(s) − i^kΛ(1−s)|. The Γ factor is carried in
/// log space.
pub fn completed_lambda(f: &Eigenform, s: Complex64) -> Result<CompletedValue> {
    if !(-1.0..=2.0).contains(&s.re) {
        return Err(Error::domain(format!(
            "completed_lambda needs -1 <= Re s <= 2, got {s}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let direct = l_complex_split(f, s, CHECK_SPLIT)?.value;
    let mirror = l_complex_split(f, one - s, CHECK_SPLIT)?.value;
    let lambda = completion_log(f.k, s).exp() * direct;
    let reflected = completion_log(f.k, one - s).exp() * mirror * root_number(f.k);
    let residual = (lambda - reflected).norm();
    Ok(CompletedValue {
        s,
        lambda,
        reflected,
        residual,
        relative_residual: residual / lambda.norm().max(f64::MIN_POSITIVE),
    })
}

/// Hardy's function on the critical line: e^{−iπk/4}(2π)^{−it}Γ(k/2+it)/|Γ(k/2+it)| · L(1/2+it),
/// real because Λ(1/2+it) = i^k conj Λ(1/2+it).
pub fn hardy_z(f: &Eigenform, t: f64) -> Result<f64> {
    let s = Complex64::new(0.5, t);
    let l = l_complex(f, s)?.value;
    let theta = -t * (2.0 * PI).ln() + ln_gamma(Complex64::new(f.k as f64 / 2.0, t)).im
        - PI * f.k as f64 / 4.0;
    Ok((Complex64::from_polar(1.0, theta) * l).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerValue {
    pub value: Complex64,
    pub p_max: u64,
    /// Σ_{p > p_max} 2p^{−Re s}, by the prime number theorem.
    pub tail_estimate: f64,
}

/// The truncated Euler product Π_{p ≤ p_max}(1 − λ(p)p^{−s} + p^{−2s})^{−1}, Re s > 1.
pub fn l_euler(f: &Eigenform, s: Complex64, p_max: u64) -> Result<EulerValue> {
    if s.re <= 1.0 {
        return Err(Error::domain(format!(
            "the Euler product needs Re s > 1, got {s}"
        )));
    }
    if p_max > f.n_max {
        return Err(Error::MissingEigenvalue(
            arith::primes_up_to(p_max)
                .into_iter()
                .find(|&p| p > f.n_max)
                .unwrap_or(p_max),
        ));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for p in arith::primes_up_to(p_max) {
        let x = (-s * (p as f64).ln()).exp();
        acc /= 1.0 - x * f.lambda_p(p)? + x * x;
    }
    let pm = p_max.max(2) as f64;
    Ok(EulerValue {
        value: acc,
        p_max,
        tail_estimate: 2.0 * pm.powf(1.0 - s.re) / ((s.re - 1.0) * pm.ln()),
    })
}
