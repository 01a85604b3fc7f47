use num_complex::Complex64;

use super::gamma::BERNOULLI_2J;
use crate::error::{Error, Result};

/// Riemann ζ(s) by Euler–Maclaurin summation with twenty Bernoulli
/// corrections. Intended for Re s > -1 and |Im s| ≤ 10³.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Pole {
            function: "zeta",
            at: "s = 1".into(),
        });
    }
    let n = (30.0 + s.norm()).ceil() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..n {
        acc += (-s * (j as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    acc += n_pow * nf / (s - 1.0) + n_pow * 0.5;
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j-2) · N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_pow / nf;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = rising * npow * (b / fact);
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        let m = 2.0 * (j + 1) as f64;
        rising *= (s + (m - 1.0)) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= nf * nf;
    }
    Ok(acc)
}
