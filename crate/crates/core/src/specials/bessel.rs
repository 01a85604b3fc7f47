use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::quad;

/// Which evaluator produced a Bessel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    Series,
    Recurrence,
    Integral,
    Asymptotic,
    /// `t = 0` in `J⁺`, evaluated as the limit `-2π Y₀`.
    Limit,
}

const HANKEL_MIN_X: f64 = 25.0;

fn use_hankel(nu_sq: f64, x: f64) -> bool {
    x >= HANKEL_MIN_X && x >= nu_sq
}

/// Hankel's large-argument expansion: returns (P, Q) so that
/// J_ν = sqrt(2/πx)(P cos χ − Q sin χ), Y_ν = sqrt(2/πx)(P sin χ + Q cos χ),
/// χ = x − (ν/2 + 1/4)π. `mu` is 4ν².
fn hankel_pq(mu: Complex64, x: f64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for j in 1..200 {
        let odd = (2 * j - 1) as f64;
        term *= (mu - odd * odd) / (j as f64 * 8.0 * x);
        let mag = term.norm();
        if mag > last && j > 2 {
            break;
        }
        last = mag;
        // a_j with sign (-1)^{⌊j/2⌋}
        match j % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if mag < 1e-17 * p.norm().max(q.norm()).max(1.0) {
            break;
        }
    }
    (p, q)
}

fn hankel_j(nu: Complex64, x: f64) -> Complex64 {
    let (p, q) = hankel_pq(nu * nu * 4.0, x);
    let chi = Complex64::new(x, 0.0) - (nu * 0.5 + 0.25) * PI;
    (p * chi.cos() - q * chi.sin()) * (2.0 / (PI * x)).sqrt()
}

fn hankel_y(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(Complex64::new(4.0 * nu * nu, 0.0), x);
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p.re * chi.sin() + q.re * chi.cos())
}

/// Ascending series for J_ν with complex order; reliable for moderate x.
pub fn bessel_j_complex(nu: Complex64, x: f64) -> Complex64 {
    if use_hankel(nu.norm_sqr(), x) {
        return hankel_j(nu, x);
    }
    let h = 0.5 * x;
    let lead = (nu * h.ln() - ln_gamma(nu + 1.0)).exp();
    let z = -h * h;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..500 {
        term *= z / (j as f64 * (nu + j as f64));
        sum += term;
        if term.norm() < 1e-17 * sum.norm() && j as f64 > h {
            break;
        }
    }
    lead * sum
}

pub(super) fn taylor_int(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let h = 0.5 * x;
    let log_lead = nf * h.ln() - super::gamma::ln_gamma_real(nf + 1.0);
    let z = -h * h;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..2000 {
        term *= z / (j as f64 * (nf + j as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    log_lead.exp() * sum
}

fn miller_int(n: u32, x: f64) -> f64 {
    let big = (n as f64).max(x);
    let mut m = (big + 20.0 + 15.0 * big.cbrt()).ceil() as u64;
    if m % 2 == 1 {
        m += 1;
    }
    let two_over_x = 2.0 / x;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut target = 0.0;
    for k in (1..=m).rev() {
        let jm1 = k as f64 * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        let order = k - 1;
        if j.abs() > 1e200 {
            j *= 1e-200;
            jp1 *= 1e-200;
            norm *= 1e-200;
            target *= 1e-200;
        }
        if order == n as u64 {
            target = j;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    target / norm
}

/// Integer-order J_n(x) for x > 0.
pub fn bessel_j_int(n: i64, x: f64) -> f64 {
    let sign = if n < 0 && n % 2 != 0 { -1.0 } else { 1.0 };
    let m = n.unsigned_abs() as u32;
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let mf = m as f64;
    let v = if x * x < 4.0 * (mf + 1.0) || x < mf / 10.0 {
        taylor_int(m, x)
    } else if use_hankel(mf * mf, x) {
        hankel_j(Complex64::new(mf, 0.0), x).re
    } else {
        miller_int(m, x)
    };
    sign * v
}

fn integral_j_real(nu: f64, x: f64) -> f64 {
    let panels = (x / 2.0).ceil() as usize + 8;
    let a = quad::gl_composite(|th| (nu * th - x * th.sin()).cos(), 0.0, PI, panels) / PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-300 {
        return a;
    }
    let upper = ((60.0 + 5.0 * nu.abs() * 6.0) / x).asinh() + 1.0;
    let b = quad::gl_composite(|u| (-x * u.sinh() - nu * u).exp(), 0.0, upper, 16);
    a - s / PI * b
}

fn integral_y_real(nu: f64, x: f64) -> f64 {
    let panels = (x / 2.0).ceil() as usize + 8;
    let a = quad::gl_composite(|th| (x * th.sin() - nu * th).sin(), 0.0, PI, panels) / PI;
    let c = (nu * PI).cos();
    let (b, _) = quad::adaptive(
        |u| ((nu * u).exp() + (-nu * u).exp() * c) * (-x * u.sinh()).exp(),
        0.0,
        ((80.0 + 5.0 * nu.abs() * 10.0) / x).asinh() + 2.0,
        1e-14,
    );
    a - b / PI
}

/// J_ν(x) for integer orders up to 10⁴ in magnitude or real orders |ν| ≤ 5.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("bessel_j needs x > 0, got {x}")));
    }
    if nu.fract() == 0.0 && nu.abs() <= 1e4 {
        return Ok(bessel_j_int(nu as i64, x));
    }
    if nu.abs() > 5.0 {
        return Err(Error::domain(format!(
            "bessel_j: non-integer order {nu} outside |nu| <= 5"
        )));
    }
    Ok(if x <= 8.0 {
        bessel_j_complex(Complex64::new(nu, 0.0), x).re
    } else if x <= 40.0 {
        integral_j_real(nu, x)
    } else {
        hankel_j(Complex64::new(nu, 0.0), x).re
    })
}

/// Y_ν(x) for real |ν| ≤ 5.
pub fn bessel_y(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || nu.abs() > 5.0 {
        return Err(Error::domain(format!(
            "bessel_y: unsupported (nu={nu}, x={x})"
        )));
    }
    if x > 40.0 {
        return Ok(hankel_y(nu, x));
    }
    let s = (nu * PI).sin();
    if x <= 8.0 && s.abs() > 1e-3 {
        let jp = bessel_j_complex(Complex64::new(nu, 0.0), x).re;
        let jm = bessel_j_complex(Complex64::new(-nu, 0.0), x).re;
        return Ok((jp * (nu * PI).cos() - jm) / s);
    }
    Ok(integral_y_real(nu, x))
}

/// ∫₀^∞ e^{-x(cosh u - 1)} φ(u) du by the trapezoid rule, with the integrand
/// assumed even and analytic in u.
fn cosh_kernel<F: Fn(f64) -> f64>(x: f64, grow: f64, phi: F) -> f64 {
    let h = (0.5 / x.sqrt()).min(0.05);
    let mut acc = 0.5 * phi(0.0);
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        let e = -x * (u.cosh() - 1.0);
        if e + grow * u < -45.0 && x * u.sinh() > grow {
            break;
        }
        acc += e.exp() * phi(u);
        k += 1;
    }
    acc * h
}

/// K_ν(x) for real order, from ∫₀^∞ e^{-x cosh u} cosh(νu) du.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("bessel_k needs x > 0, got {x}")));
    }
    Ok((-x).exp() * cosh_kernel(x, nu.abs(), |u| (nu * u).cosh()))
}

/// K⁺_{2it}(x) = 4 cosh(πt) K_{2it}(x).
pub fn bessel_k_plus(t: f64, x: f64) -> f64 {
    let k = (-x).exp() * cosh_kernel(x, 0.0, |u| (2.0 * t * u).cos());
    4.0 * (PI * t).cosh() * k
}

const J_PLUS_SERIES_MAX: f64 = 14.0;

/// J⁺_{2it}(x) = −π/sin(πν/2) · (J_ν(x) − J_{−ν}(x)) at ν = 2it, which is
/// real. Returns the value and the evaluator used; `t = 0` gives the limit
/// `−2π Y₀(x)`.
pub fn bessel_j_plus(t: f64, x: f64) -> (f64, BesselMethod) {
    if t == 0.0 {
        let y0 = bessel_y(0.0, x).unwrap_or(f64::NAN);
        return (-2.0 * PI * y0, BesselMethod::Limit);
    }
    if x < J_PLUS_SERIES_MAX {
        let j = bessel_j_complex(Complex64::new(0.0, 2.0 * t), x);
        (-2.0 * PI * j.im / (PI * t).sinh(), BesselMethod::Series)
    } else if x < 30.0 + 4.0 * t * t {
        (bessel_j_plus_integral(t, x), BesselMethod::Integral)
    } else {
        let (p, q) = hankel_pq(Complex64::new(-16.0 * t * t, 0.0), x);
        let a = x - 0.25 * PI;
        let v = -(8.0 * PI / x).sqrt() * (p.re * a.sin() + q.re * a.cos());
        (v, BesselMethod::Asymptotic)
    }
}

/// Independent integral form of J⁺_{2it}(x):
/// −(2/sinh πt)∫₀^π sinh(2tθ) sin(x sin θ) dθ + 4 cosh(πt)∫₀^∞ e^{−x sinh u} cos(2tu) du.
pub fn bessel_j_plus_integral(t: f64, x: f64) -> f64 {
    let panels = (x / 3.0).ceil() as usize + 8;
    let a = quad::gl_composite(
        |th| (2.0 * t * th).sinh() * (x * th.sin()).sin(),
        0.0,
        PI,
        panels,
    );
    let upper = (60.0 / x).asinh() + 1.0;
    let (b, _) = quad::adaptive(
        |u| (-x * u.sinh()).exp() * (2.0 * t * u).cos(),
        0.0,
        upper,
        1e-15,
    );
    -2.0 / (PI * t).sinh() * a + 4.0 * (PI * t).cosh() * b
}

/// ∫₀^A |J_k(x)| dx with panels of unit width so that sign changes are
/// resolved by the adaptive rule.
pub fn avg_abs_j(k: u32, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let kf = k as f64;
    // Below k/10 the integrand is under e^{-k}; one panel suffices there.
    let quiet = (kf / 10.0).min(a);
    let (mut total, _) = quad::adaptive(|x| bessel_j_int(k as i64, x).abs(), 0.0, quiet, 1e-14);
    let mut lo = quiet;
    while lo < a {
        let hi = (lo + 1.0).min(a);
        let (v, _) = quad::adaptive(|x| bessel_j_int(k as i64, x).abs(), lo, hi, 1e-11);
        total += v;
        lo = hi;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Abramowitz–Stegun tables.
        assert!((bessel_j_int(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j_int(1, 10.0) - 0.043_472_746_168_861_6).abs() < 1e-14);
        assert!((bessel_j_int(5, 30.0) + 0.143_240_295_512_077_06).abs() < 1e-13);
        assert!((bessel_j_int(10, 10.0) - 0.207_486_106_633_358_9).abs() < 1e-14);
        assert!((bessel_j_int(11, 4.0 * PI) - 0.291_337_967_938_965_94).abs() < 1e-13);
        assert!((bessel_k(0.0, 1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-14);
        assert!((bessel_y(0.0, 1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-13);
        assert!((bessel_y(1.0, 50.0).unwrap() + 0.056_795_668_562_014_78).abs() < 1e-12);
    }

    #[test]
    fn dispatch_boundaries_are_continuous() {
        for &n in &[3i64, 11, 40, 100] {
            let nf = n as f64;
            let b = 2.0 * (nf + 1.0).sqrt();
            let lo = taylor_int(n as u32, b);
            let hi = miller_int(n as u32, b);
            assert!((lo - hi).abs() <= 1e-10 * lo.abs(), "n={n}");
            let h = nf * nf + 30.0;
            let a = miller_int(n as u32, h);
            let c = hankel_j(Complex64::new(nf, 0.0), h).re;
            assert!((a - c).abs() <= 1e-10, "n={n}");
        }
    }

    #[test]
    fn real_order_regimes_agree() {
        for &nu in &[1.0 / 3.0, -2.5, 4.2] {
            for &x in &[8.0, 40.0] {
                let a = bessel_j_complex(Complex64::new(nu, 0.0), x).re;
                let b = integral_j_real(nu, x);
                assert!((a - b).abs() < 1e-10, "nu={nu} x={x}: {a} {b}");
            }
            let a = integral_y_real(nu, 40.0);
            let b = hankel_y(nu, 40.0);
            assert!((a - b).abs() < 1e-11, "Y nu={nu}");
        }
    }

    #[test]
    fn half_integer_closed_form() {
        for &x in &[0.5, 3.0, 12.0, 55.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - exact).abs() < 1e-12);
            let ky = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((bessel_k(0.5, x).unwrap() - ky).abs() < 1e-12 * ky);
        }
    }

    #[test]
    fn j_plus_series_vs_integral() {
        for &t in &[0.3, 0.7, 2.0] {
            for &x in &[0.5, 5.0, 13.9, 14.1, 40.0, 150.0] {
                let (a, _) = bessel_j_plus(t, x);
                let b = bessel_j_plus_integral(t, x);
                assert!(
                    (a - b).abs() < 1e-9 * (1.0 + b.abs()),
                    "t={t} x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn j_plus_limit_is_minus_two_pi_y0() {
        let (v, m) = bessel_j_plus(0.0, 3.0);
        assert_eq!(m, BesselMethod::Limit);
        let (near, _) = bessel_j_plus(1e-6, 3.0);
        assert!((v - near).abs() < 1e-8);
    }

    #[test]
    fn k_plus_examples() {
        assert!((bessel_k_plus(0.0, 1.0) - 4.0 * 0.421_024_438_240_708_3).abs() < 1e-13);
        let r = bessel_k_plus(0.7, 50.0) / bessel_k_plus(0.7, 40.0);
        let lead = (-10.0f64).exp() * (40.0f64 / 50.0).sqrt();
        assert!((r / lead - 1.0).abs() < 0.05);
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        assert!(bessel_j(7.5, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
    }
}
