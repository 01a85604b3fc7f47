use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::modp::{self, Crt, Sparse};
use crate::error::{Error, Result};

/// Exact integer q-expansion of a cusp form: `coeffs[n-1] = a(n)` for
/// n = 1..=len.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: u32,
    pub coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// a(n) for 1 ≤ n ≤ len.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n - 1]
    }

    pub fn coeff_f64(&self, n: usize) -> f64 {
        self.coeffs[n - 1].to_f64().unwrap_or(f64::NAN)
    }
}

/// dim S_k for level one.
pub fn dim_cusp_forms(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// dim S_k counted as the number of monomials E₄^a E₆^b of weight k − 12.
pub fn dim_cusp_forms_by_monomials(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    let w = k - 12;
    let mut count = 0;
    let mut b = 0;
    while 6 * b <= w {
        if (w - 6 * b) % 4 == 0 {
            count += 1;
        }
        b += 1;
    }
    count
}

fn sigma_table(n: usize, power: u32, m: u64) -> Vec<u64> {
    let mut s = vec![0u64; n + 1];
    for d in 1..=n {
        let dp = {
            let mut acc = 1u128;
            for _ in 0..power {
                acc = acc * d as u128 % m as u128;
            }
            acc as u64
        };
        let mut j = d;
        while j <= n {
            s[j] = (s[j] + dp) % m;
            j += d;
        }
    }
    s
}

fn eisenstein(n: usize, power: u32, scale: i64, m: u64) -> Vec<u64> {
    let sig = sigma_table(n, power, m);
    let c = modp::reduce_i64(scale, m);
    let mut e: Vec<u64> = sig
        .iter()
        .map(|&v| (v as u128 * c as u128 % m as u128) as u64)
        .collect();
    e[0] = 1;
    e
}

/// ∏(1 − qⁿ)³ = Σ_m (−1)^m (2m+1) q^{m(m+1)/2} (Jacobi), truncated.
fn euler_cubed(n: usize, m: u64) -> Sparse {
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let e = j * (j + 1) / 2;
        if e > n {
            break;
        }
        let c = if j % 2 == 0 {
            (2 * j + 1) as i64
        } else {
            -((2 * j + 1) as i64)
        };
        out.push((e, modp::reduce_i64(c, m)));
        j += 1;
    }
    out
}

/// Exponents (a, b) with 4a + 6b = w and b ∈ {0, 1}.
fn e4_e6_exponents(w: u32) -> (u32, u32) {
    if w % 4 == 0 {
        (w / 4, 0)
    } else {
        ((w - 6) / 4, 1)
    }
}

/// Echelonised basis modulo one prime: `out[j][n]` for j = 0..dim, n = 0..=len.
fn echelon_mod(k: u32, len: usize, m: u64) -> Vec<Vec<u64>> {
    let d = dim_cusp_forms(k);
    let e4 = eisenstein(len, 3, 240, m);
    let e6 = eisenstein(len, 5, -504, m);
    let p3 = euler_cubed(len, m);
    let mut e4_pows: Vec<Vec<u64>> = vec![{
        let mut one = vec![0u64; len + 1];
        one[0] = 1;
        one
    }];
    let mut gens = Vec::with_capacity(d);
    for j in 1..=d as u32 {
        let (a, b) = e4_e6_exponents(k - 12 * j);
        while e4_pows.len() <= a as usize {
            let next = modp::mul_full(e4_pows.last().unwrap(), &e4, len + 1, m);
            e4_pows.push(next);
        }
        let mut g = e4_pows[a as usize].clone();
        if b == 1 {
            g = modp::mul_full(&g, &e6, len + 1, m);
        }
        for _ in 0..8 * j {
            g = modp::mul_sparse(&g, &p3, m);
        }
        let shift = j as usize;
        let mut shifted = vec![0u64; len + 1];
        shifted[shift..].copy_from_slice(&g[..len + 1 - shift]);
        gens.push(shifted);
    }
    // Row reduce so that basis j has a(n) = δ_{n, j+1} for n ≤ d.
    for j in (0..d).rev() {
        for i in (j + 1)..d {
            let c = gens[j][i + 1];
            if c == 0 {
                continue;
            }
            let (lo, hi) = gens.split_at_mut(i);
            let row = &mut lo[j];
            let piv = &hi[0];
            for n in 0..=len {
                let sub = (c as u128 * piv[n] as u128 % m as u128) as u64;
                row[n] = (row[n] + m - sub) % m;
            }
        }
    }
    gens
}

fn prime_estimate(k: u32, len: usize) -> usize {
    let bits =
        (k as f64 - 1.0) * ((len + 1) as f64).log2() + 24.0 * dim_cusp_forms(k) as f64 + 64.0;
    (bits / 49.0).ceil() as usize + 1
}

/// Victor Miller's echelon basis of S_k to length `len`, with exact integer
/// coefficients. Returns an empty list when S_k = 0.
pub fn miller_basis(k: u32, len: usize) -> Result<Vec<QExpansion>> {
    if k % 2 == 1 || k < 4 {
        return Err(Error::domain(format!(
            "weight {k} must be even and at least 4"
        )));
    }
    let d = dim_cusp_forms(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    if len < d + 1 && len < 2 {
        return Err(Error::domain(format!("length {len} too short for dim {d}")));
    }
    let mut r = prime_estimate(k, len);
    loop {
        let primes = modp::word_primes(r + 1);
        let residues: Vec<Vec<Vec<u64>>> = primes.iter().map(|&p| echelon_mod(k, len, p)).collect();
        let crt = Crt::new(&primes);
        let mut basis = Vec::with_capacity(d);
        let mut stable = true;
        let mut buf = vec![0u64; r + 1];
        'forms: for j in 0..d {
            let mut coeffs = Vec::with_capacity(len);
            for n in 1..=len {
                for (slot, res) in buf.iter_mut().zip(&residues) {
                    *slot = res[j][n];
                }
                let full = crt.reconstruct(&buf, r + 1);
                let fewer = crt.reconstruct(&buf, r);
                if full != fewer {
                    stable = false;
                    break 'forms;
                }
                coeffs.push(full);
            }
            basis.push(QExpansion { weight: k, coeffs });
        }
        if stable {
            return Ok(basis);
        }
        r *= 2;
    }
}

/// Δ = q∏(1−qⁿ)²⁴ by direct expansion of the product, used as an oracle.
pub fn delta_by_product(len: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); len + 1];
    series[0] = BigInt::from(1);
    for n in 1..=len {
        for _ in 0..24 {
            for i in (n..=len).rev() {
                let t = series[i - n].clone();
                series[i] -= t;
            }
        }
    }
    // multiply by q
    let mut out = vec![BigInt::zero(); len];
    out[..len].clone_from_slice(&series[..len]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramanujan_delta() {
        let b = miller_basis(12, 5).unwrap();
        assert_eq!(b.len(), 1);
        let v: Vec<i64> = b[0].coeffs.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, -24, 252, -1472, 4830]);
    }

    #[test]
    fn product_oracle_agrees_to_length_60() {
        let b = miller_basis(12, 60).unwrap();
        assert_eq!(b[0].coeffs, delta_by_product(60));
    }

    #[test]
    fn empty_and_echelon() {
        assert!(miller_basis(10, 3).unwrap().is_empty());
        assert!(miller_basis(7, 3).is_err());
        let b = miller_basis(24, 3).unwrap();
        assert_eq!(b.len(), 2);
        for (j, f) in b.iter().enumerate() {
            for n in 1..=2 {
                let want = if n == j + 1 { 1 } else { 0 };
                assert_eq!(f.coeff(n).to_i64().unwrap(), want);
            }
        }
    }

    #[test]
    fn dimensions_agree_with_monomial_count() {
        for k in (12..=60).step_by(2) {
            assert_eq!(dim_cusp_forms(k), dim_cusp_forms_by_monomials(k), "k={k}");
        }
    }

    #[test]
    fn weight_16_is_delta_times_e4() {
        // τ₁₆(2) = 216, τ₁₆(3) = -3348
        let b = miller_basis(16, 3).unwrap();
        assert_eq!(b[0].coeff(2).to_i64(), Some(216));
        assert_eq!(b[0].coeff(3).to_i64(), Some(-3348));
    }
}
