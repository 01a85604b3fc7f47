//! Kloosterman and Ramanujan sums, the divisor function τ_ν, and the Petersson
//! and Voronoi two-sided checks.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::arith;
use crate::eigenforms::EigenformTable;
use crate::error::{Error, Result};
use crate::specials::{bessel_j_int, bessel_j_plus, bessel_k_plus, ln_gamma_real, zeta};

type KloostermanCache = RwLock<HashMap<(u64, u64, u64), f64>>;

fn kloosterman_cache() -> &'static KloostermanCache {
    static CACHE: OnceLock<KloostermanCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn kloosterman_direct(m: u64, n: u64, c: u64) -> f64 {
    let mut acc = 0.0;
    for a in 0..c {
        if arith::gcd(a, c) != 1 {
            continue;
        }
        let abar = arith::modinv(a, c).unwrap_or(0);
        let r = ((a as u128 * m as u128 + abar as u128 * n as u128) % c as u128) as f64;
        acc += (2.0 * PI * r / c as f64).cos();
    }
    acc
}

/// S(m, n; c) = Σ_{a mod c, (a,c)=1} e((am + ān)/c).
pub fn kloosterman(m: u64, n: u64, c: u64) -> f64 {
    assert!(c >= 1, "modulus must be positive");
    let key = (m % c, n % c, c);
    if let Some(v) = kloosterman_cache()
        .read()
        .ok()
        .and_then(|g| g.get(&key).copied())
    {
        return v;
    }
    let v = kloosterman_direct(key.0, key.1, c);
    if let Ok(mut g) = kloosterman_cache().write() {
        g.insert(key, v);
    }
    v
}

/// Ramanujan sum S(0, a; c) = Σ_{d | (a, c)} d μ(c/d).
pub fn ramanujan(a: u64, c: u64) -> i64 {
    let g = arith::gcd(a, c);
    arith::divisors(g)
        .into_iter()
        .map(|d| d as i64 * arith::mobius(c / d))
        .sum()
}

/// τ_ν(n) = Σ_{n₁n₂ = n} (n₁/n₂)^ν.
pub fn tau_nu(nu: Complex64, n: u64) -> Complex64 {
    let nf = n as f64;
    arith::divisors(n)
        .into_iter()
        .map(|d| (nu * (d as f64 * d as f64 / nf).ln()).exp())
        .sum()
}

/// τ_{it}(n) for all n ≤ len (entry 0 unused); real because τ_ν = τ_{−ν}.
pub fn tau_it_table(t: f64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len + 1];
    for d in 1..=len {
        let mut m = d;
        let mut e = 1;
        while m <= len {
            // divisor pair (d, e) with d·e = m contributes (d/e)^{it}
            out[m] += (t * (d as f64 / e as f64).ln()).cos();
            m += d;
            e += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoSided<T> {
    pub lhs: T,
    pub rhs: T,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tail_bound: f64,
}

impl TwoSided<f64> {
    fn new(lhs: f64, rhs: f64, tail_bound: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        TwoSided {
            lhs,
            rhs,
            abs_err,
            rel_err: abs_err / lhs.abs().max(f64::MIN_POSITIVE),
            tail_bound,
        }
    }
}

/// Right side of the Petersson formula truncated at `c_max`, with a bound on
/// the omitted c-tail from |S| ≤ c and |J_{k−1}(x)| ≤ (x/2)^{k−1} e^{x/2}/Γ(k−1).
pub fn petersson_rhs(k: u32, m: u64, n: u64, c_max: u64) -> (f64, f64) {
    let sign = if k % 4 == 0 { 1.0 } else { -1.0 };
    let root = ((m * n) as f64).sqrt();
    let mut acc = 0.0;
    for c in 1..=c_max {
        let x = 4.0 * PI * root / c as f64;
        acc += kloosterman(m, n, c) / c as f64 * bessel_j_int(k as i64 - 1, x);
    }
    let delta = if m == n { 1.0 } else { 0.0 };
    let lg = ln_gamma_real(k as f64 - 1.0);
    let bound_term = |c: f64| {
        let x = 4.0 * PI * root / c;
        ((k as f64 - 1.0) * (x / 2.0).ln() + x / 2.0 - lg).exp()
    };
    let mut tail = 0.0;
    let first = c_max + 1;
    for c in first..first + 10_000 {
        tail += bound_term(c as f64);
    }
    // Σ_{c > first+10⁴} c^{1−k}·const by comparison with an integral.
    let last = (first + 10_000) as f64;
    tail += bound_term(last) * last / (k as f64 - 2.0).max(1.0);
    (delta + 2.0 * PI * sign * acc, 2.0 * PI * tail)
}

/// Σ^h_f λ_f(m)λ_f(n) against δ_{m=n} + 2π i^k Σ_{c ≤ c_max} S(m,n;c)/c J_{k−1}(4π√(mn)/c).
pub fn petersson_check(
    table: &EigenformTable,
    m: u64,
    n: u64,
    c_max: u64,
) -> Result<TwoSided<f64>> {
    let weights = table.weights()?;
    let mut lhs = 0.0;
    for (f, w) in table.forms.iter().zip(&weights) {
        lhs += w * f.lambda(m)? * f.lambda(n)?;
    }
    let (rhs, tail) = petersson_rhs(table.k, m, n, c_max);
    Ok(TwoSided::new(lhs, rhs, tail))
}

/// The smooth bump exp(−1/(1−y²)) on [x0, x1], y the affine image in (−1, 1).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bump {
    pub x0: f64,
    pub x1: f64,
}

impl Bump {
    pub fn eval(&self, x: f64) -> f64 {
        let y = (2.0 * x - (self.x0 + self.x1)) / (self.x1 - self.x0);
        if y.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - y * y)).exp()
        }
    }

    /// ∫ g(x) φ(√x) dx as ∫ 2u g(u²) φ(u) du by the trapezoid rule, resolved
    /// for oscillation of angular frequency `omega` in u.
    fn integrate_sqrt<F: FnMut(f64) -> Complex64>(&self, omega: f64, mut phi: F) -> Complex64 {
        let (u0, u1) = (self.x0.sqrt(), self.x1.sqrt());
        let h = PI / (omega + 100.0);
        let steps = ((u1 - u0) / h).ceil() as usize;
        let h = (u1 - u0) / steps as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..steps {
            let u = u0 + j as f64 * h;
            acc += phi(u) * (2.0 * u * self.eval(u * u));
        }
        acc * h
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VoronoiReport {
    pub a: u64,
    pub c: u64,
    pub t: f64,
    pub n_max: u64,
    pub lhs: Complex64,
    pub main: Complex64,
    pub j_dual: Complex64,
    pub k_dual: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// n_max times the largest dual term in the upper half of the range.
    pub tail_estimate: f64,
    /// Number of dual terms for which the K⁺ integral was above e^{−25}.
    pub k_terms: u64,
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Both sides of Voronoi summation for Σ τ_{it}(m) e(am/c) g(m).
pub fn voronoi_check(g: &Bump, a: u64, c: u64, t: f64, n_max: u64) -> Result<VoronoiReport> {
    if t == 0.0 {
        return Err(Error::domain(
            "t = 0 is not covered by the J+ normalisation; use t != 0",
        ));
    }
    if c == 0 || arith::gcd(a, c) != 1 {
        return Err(Error::domain(format!(
            "need c >= 1 and (a, c) = 1; got a={a}, c={c}"
        )));
    }
    if !(g.x0 > 0.0 && g.x1 > g.x0) {
        return Err(Error::domain("bump support must lie in (0, inf)"));
    }
    let cf = c as f64;
    let ai = a % c;
    let d = arith::modinv(ai, c).unwrap_or(0);
    let lo = g.x0.ceil() as u64;
    let hi = g.x1.floor() as u64;
    let tau = tau_it_table(t, hi.max(n_max) as usize);
    let mut lhs = Complex64::new(0.0, 0.0);
    for m in lo.max(1)..=hi {
        lhs += e((ai * m % c) as f64 / cf) * (tau[m as usize] * g.eval(m as f64));
    }

    let ln_c = cf.ln();
    let i_pos = g.integrate_sqrt(2.0 * t.abs() / g.x0.sqrt(), |u| {
        Complex64::from_polar(1.0, 2.0 * t * u.ln())
    });
    let i_neg = i_pos.conj();
    let z_minus = zeta(Complex64::new(1.0, -2.0 * t))?;
    let z_plus = zeta(Complex64::new(1.0, 2.0 * t))?;
    let main = (Complex64::new(-1.0, 2.0 * t) * ln_c).exp() * z_minus * i_neg
        + (Complex64::new(-1.0, -2.0 * t) * ln_c).exp() * z_plus * i_pos;

    let mut j_dual = Complex64::new(0.0, 0.0);
    let mut k_dual = Complex64::new(0.0, 0.0);
    let mut tail_max = 0.0f64;
    let mut k_terms = 0;
    let k_cut = (-25.0f64).exp();
    for n in 1..=n_max {
        let scale = 4.0 * PI * (n as f64).sqrt() / cf;
        let ji = g
            .integrate_sqrt(scale, |u| {
                Complex64::new(bessel_j_plus(t, scale * u).0, 0.0)
            })
            .re;
        let phase = (d * (n % c)) % c;
        let tn = tau[n as usize];
        let term_j = e(-(phase as f64) / cf) * (tn * ji / cf);
        j_dual += term_j;
        let mut term_mag = term_j.norm();
        if (-scale * g.x0.sqrt()).exp() > k_cut * 1e-3 {
            let ki = g
                .integrate_sqrt(scale, |u| Complex64::new(bessel_k_plus(t, scale * u), 0.0))
                .re;
            if ki.abs() > k_cut {
                k_terms += 1;
            }
            let term_k = e(phase as f64 / cf) * (tn * ki / cf);
            k_dual += term_k;
            term_mag += term_k.norm();
        }
        if 2 * n > n_max {
            tail_max = tail_max.max(term_mag);
        }
    }
    let rhs = main + j_dual + k_dual;
    let abs_err = (lhs - rhs).norm();
    Ok(VoronoiReport {
        a,
        c,
        t,
        n_max,
        lhs,
        main,
        j_dual,
        k_dual,
        rhs,
        abs_err,
        rel_err: abs_err / lhs.norm(),
        tail_estimate: tail_max * n_max as f64,
        k_terms,
    })
}

/// Σ_{c ≤ X} S(0, ℓ; c) c^{−w} and the same times Σ_{d ≤ X} d^{−w}; the
/// limits are ℓ^{−ν}τ_ν(ℓ)/ζ(w) and ℓ^{−ν}τ_ν(ℓ) with w = 1 + 2ν.
pub fn ramanujan_dirichlet(ell: u64, w: Complex64, x: u64) -> (Complex64, Complex64) {
    let mut single = Complex64::new(0.0, 0.0);
    let mut zeta_part = Complex64::new(0.0, 0.0);
    for c in 1..=x {
        let cw = (-w * (c as f64).ln()).exp();
        single += cw * ramanujan(ell, c) as f64;
        zeta_part += cw;
    }
    (single, single * zeta_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kloosterman_examples() {
        assert!((kloosterman(1, 1, 1) - 1.0).abs() < 1e-15);
        assert!((kloosterman(0, 3, 5) + 1.0).abs() < 1e-12);
        assert!((kloosterman(0, 5, 5) - 4.0).abs() < 1e-12);
        // S(1,1;5) = 2cos(2π·2/5)+2cos(2π·0)... computed by hand: a=1..4, ā = 1,3,2,4
        let by_hand: f64 = [(1, 1), (2, 3), (3, 2), (4, 4)]
            .iter()
            .map(|&(a, b)| (2.0 * PI * (a + b) as f64 / 5.0).cos())
            .sum();
        assert!((kloosterman(1, 1, 5) - by_hand).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_closed_form_matches_enumeration() {
        for c in 1..=100u64 {
            for a in 0..=50u64 {
                let direct = kloosterman_direct(0, a % c, c);
                assert!(
                    (direct - ramanujan(a, c) as f64).abs() < 1e-9,
                    "a={a} c={c}"
                );
            }
        }
    }

    #[test]
    fn tau_examples() {
        let one = tau_nu(Complex64::new(0.3, 0.7), 1);
        assert!((one - 1.0).norm() < 1e-15);
        assert!((tau_nu(Complex64::new(0.0, 0.0), 6).re - 4.0).abs() < 1e-15);
        let v = tau_nu(Complex64::new(0.5, 0.0), 2).re;
        assert!((v - (2f64.sqrt() + 1.0 / 2f64.sqrt())).abs() < 1e-15);
        assert!((v - 2.121_320_343_559_642).abs() < 1e-12);
        let table = tau_it_table(0.4, 60);
        for n in 1..=60u64 {
            let direct = tau_nu(Complex64::new(0.0, 0.4), n);
            assert!((direct.re - table[n as usize]).abs() < 1e-12);
            assert!(direct.im.abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_collapse() {
        let nu = Complex64::new(0.2 + 0.4, 0.0);
        let w = 1.0 + 2.0 * nu;
        for ell in [1u64, 2, 6] {
            let (single, double) = ramanujan_dirichlet(ell, w, 10_000);
            let target = (-nu * (ell as f64).ln()).exp() * tau_nu(nu, ell);
            let z = zeta(w).unwrap();
            assert!((single - target / z).norm() < 1e-4, "ell={ell}");
            assert!((double - target).norm() < 1e-4, "ell={ell}");
        }
    }

    #[test]
    fn petersson_rhs_without_c_terms() {
        let (v, tail) = petersson_rhs(40, 1, 1, 0);
        assert_eq!(v, 1.0);
        assert!(tail < (-20.0f64).exp());
    }

    proptest! {
        #[test]
        fn kloosterman_symmetric(m in 0u64..200, n in 0u64..200, c in 1u64..120) {
            let a = kloosterman(m, n, c);
            let b = kloosterman(n, m, c);
            prop_assert!((a - b).abs() < 1e-9);
            prop_assert!(a.abs() <= c as f64 + 1e-9);
        }

        #[test]
        fn tau_is_even_in_nu(re in -1.0f64..1.0, im in -3.0f64..3.0, n in 1u64..500) {
            let nu = Complex64::new(re, im);
            prop_assert!((tau_nu(nu, n) - tau_nu(-nu, n)).norm() < 1e-9 * tau_nu(nu, n).norm().max(1.0));
        }
    }
}
