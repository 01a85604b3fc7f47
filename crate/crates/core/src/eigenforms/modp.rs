//! Power series modulo word-sized primes, and Chinese remaindering back to
//! exact integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Primes just below 2⁵⁰: products fit in u64·u64 < 2¹⁰⁰, so a length-N
/// convolution can accumulate in u128 without intermediate reduction.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 50) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

/// Reduce a signed integer into [0, m).
pub fn reduce_i64(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

/// Truncated product of two series (index 0 = constant term).
pub fn mul_full(a: &[u64], b: &[u64], len: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc: u128 = 0;
        let lo = n.saturating_sub(b.len() - 1);
        for i in lo..=n.min(a.len() - 1) {
            acc += a[i] as u128 * b[n - i] as u128;
        }
        *slot = (acc % m as u128) as u64;
    }
    out
}

/// Sparse series: (exponent, coefficient mod m).
pub type Sparse = Vec<(usize, u64)>;

pub fn mul_sparse(a: &[u64], s: &Sparse, m: u64) -> Vec<u64> {
    let len = a.len();
    let mut out = vec![0u64; len];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc: u128 = 0;
        for &(e, c) in s {
            if e > n {
                break;
            }
            acc += a[n - e] as u128 * c as u128;
        }
        *slot = (acc % m as u128) as u64;
    }
    out
}

/// Incremental Chinese remaindering (Garner) to a signed integer in the
/// symmetric range.
pub struct Crt {
    primes: Vec<u64>,
    /// prefix products ∏_{i<j} p_i
    prefix: Vec<BigInt>,
    /// inverse of prefix[j] mod p_j
    inv_prefix: Vec<u64>,
}

impl Crt {
    pub fn new(primes: &[u64]) -> Self {
        let mut prefix = Vec::with_capacity(primes.len() + 1);
        let mut inv_prefix = Vec::with_capacity(primes.len());
        let mut acc = BigInt::one();
        for &p in primes {
            let r = (&acc % BigInt::from(p))
                .to_u64_digits()
                .1
                .first()
                .copied()
                .unwrap_or(0);
            inv_prefix.push(inv_mod(r, p));
            prefix.push(acc.clone());
            acc *= p;
        }
        prefix.push(acc);
        Crt {
            primes: primes.to_vec(),
            prefix,
            inv_prefix,
        }
    }

    /// Reconstruct from residues using the first `use_primes` moduli.
    pub fn reconstruct(&self, residues: &[u64], use_primes: usize) -> BigInt {
        let mut x = BigInt::zero();
        for j in 0..use_primes {
            let p = self.primes[j];
            let xr = (&x % BigInt::from(p))
                .to_u64_digits()
                .1
                .first()
                .copied()
                .unwrap_or(0);
            let diff = (residues[j] + p - xr % p) % p;
            let t = mulmod(diff, self.inv_prefix[j], p);
            x += &self.prefix[j] * t;
        }
        let modulus = &self.prefix[use_primes];
        if &x * 2 > *modulus {
            x - modulus
        } else {
            x
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        for p in word_primes(4) {
            assert!(is_prime_u64(p));
            assert!(p < 1 << 50);
        }
        assert!(!is_prime_u64(1 << 50));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn crt_round_trip() {
        let primes = word_primes(4);
        let crt = Crt::new(&primes);
        let v: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let res: Vec<u64> = primes
            .iter()
            .map(|&p| {
                let r = &v % BigInt::from(p);
                let r = if r < BigInt::zero() { r + p } else { r };
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        assert_eq!(crt.reconstruct(&res, 4), v);
    }
}
