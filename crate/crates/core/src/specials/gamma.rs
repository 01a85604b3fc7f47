use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// B_2, B_4, …, B_40.
pub const BERNOULLI_2J: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

const STIRLING_MIN: f64 = 15.0;

fn stirling(z: Complex64) -> Complex64 {
    let mut acc = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut pow = zi;
    for (j, b) in BERNOULLI_2J.iter().take(12).enumerate() {
        let n = 2.0 * (j + 1) as f64;
        acc += pow * (b / (n * (n - 1.0)));
        pow *= zi2;
    }
    acc
}

/// Principal branch of log Γ(z): continuous off the negative real axis and
/// satisfying log Γ(z+1) = log Γ(z) + log z.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection; the imaginary part is only defined modulo 2π here.
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// log |Γ(x)| for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// Γ(z+Δ)/Γ(z) through exp(Δ log z + Δ²/2z). The relative error is of order
/// |Δ|/|z|, so this is a scaling tool, not a precise evaluator; use
/// [`gamma_ratio_exact`] when digits matter.
pub fn gamma_ratio(z: Complex64, delta: Complex64) -> Result<Complex64> {
    if z.re < 10.0 || delta.norm() >= z.re.sqrt() {
        return Err(Error::domain(format!(
            "gamma_ratio needs Re z >= 10 and |delta| < sqrt(Re z); got z={z}, delta={delta}"
        )));
    }
    if delta == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((delta * z.ln() + delta * delta / (2.0 * z)).exp())
}

/// Γ(z+Δ)/Γ(z) from log Γ.
pub fn gamma_ratio_exact(z: Complex64, delta: Complex64) -> Complex64 {
    (ln_gamma(z + delta) - ln_gamma(z)).exp()
}

/// Regularised upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a) for complex `a`
/// with Re a > 0 and real x > 0.
pub fn regularized_gamma_q(a: Complex64, x: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if x <= 0.0 {
        return one;
    }
    let lx = x.ln();
    if x < a.re + 1.0 {
        // P(a, x) series.
        let mut term = one / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.norm() < sum.norm() * 1e-17 {
                break;
            }
        }
        let p = (a * lx - x - ln_gamma(a)).exp() * sum;
        one - p
    } else {
        // Modified Lentz on the continued fraction for Γ(a, x).
        let tiny = 1e-300;
        let mut b = Complex64::new(x + 1.0, 0.0) - a;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - a);
            b += 2.0;
            d = an * d + b;
            if d.norm() < tiny {
                d = Complex64::new(tiny, 0.0);
            }
            c = b + an / c;
            if c.norm() < tiny {
                c = Complex64::new(tiny, 0.0);
            }
            d = one / d;
            let del = d * c;
            h *= del;
            if (del - one).norm() < 1e-16 {
                break;
            }
        }
        (a * lx - x - ln_gamma(a)).exp() * h
    }
}
