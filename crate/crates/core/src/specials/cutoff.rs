use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quad;

fn psi(y: f64) -> f64 {
    if y > 0.0 {
        (-1.0 / y).exp()
    } else {
        0.0
    }
}

/// Smooth partition of unity: 1 on (0, 1/2], 0 on [2, ∞),
/// H(x) + H(1/x) = 1. In u = log₂ x it is ψ(1−u)/(ψ(1+u)+ψ(1−u)) with
/// ψ(y) = e^{−1/y}.
pub fn cutoff_h(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let u = x.log2();
    let a = psi(1.0 - u);
    let b = psi(1.0 + u);
    a / (a + b)
}

/// Mellin transform Ĥ(s) = ∫₀^∞ H(x) x^{s−1} dx, continued to s ≠ 0 as
/// 1/s + 2 log 2 ∫₀¹ H(2^u) sinh(u s log 2) du.
pub fn mellin_h(s: Complex64) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Err(Error::Pole {
            function: "mellin_h",
            at: "s = 0".into(),
        });
    }
    let panels = 6 + (s.norm() / 3.0).ceil() as usize;
    let integral = quad::gl_composite_c(
        |u| (s * (u * LN_2)).sinh() * cutoff_h(2f64.powf(u)),
        0.0,
        1.0,
        panels,
    );
    Ok(s.inv() + integral * (2.0 * LN_2))
}

/// (1/2πi)∮ Ĥ(s) ds over a circle of the given radius about 0.
pub fn mellin_h_residue(radius: f64) -> Complex64 {
    let n = 128;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let th = 2.0 * PI * j as f64 / n as f64;
        let z = Complex64::from_polar(radius, th);
        // ds = i z dθ
        acc += mellin_h(z).expect("off the pole") * z;
    }
    acc / n as f64
}
