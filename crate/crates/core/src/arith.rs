//! Elementary arithmetic: sieves, factorisation, Möbius, modular inverses.

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as (p, exponent) pairs in increasing p.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Möbius function for all of 0..=n (index 0 unused).
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[0] = 0;
    let mut is_comp = vec![false; n + 1];
    for p in 2..=n {
        if is_comp[p] {
            continue;
        }
        let mut j = p;
        while j <= n {
            if j > p {
                is_comp[j] = true;
            }
            mu[j] = -mu[j];
            j += p;
        }
        let pp = p.saturating_mul(p);
        let mut j = pp;
        while j <= n {
            mu[j] = 0;
            j += pp;
        }
    }
    mu
}

/// Smallest prime factor of every n ≤ len (entries 0 and 1 are 0 and 1).
pub fn smallest_prime_factors(len: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = (0..=len as u32).collect();
    let mut p = 2;
    while p * p <= len {
        if spf[p] == p as u32 {
            let mut m = p * p;
            while m <= len {
                if spf[m] == m as u32 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        p += 1;
    }
    spf
}

/// Factorisation from a smallest-prime-factor table.
pub fn factorize_with(spf: &[u32], mut n: usize) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_cubefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e <= 2)
}

/// Product of the distinct primes dividing `n`.
pub fn squarefree_kernel(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, _)| p).product()
}

/// Sorted divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn num_divisors(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn modinv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(squarefree_kernel(72), 6);
        assert_eq!(modinv(3, 7), Some(5));
        assert_eq!(modinv(2, 4), None);
    }

    #[test]
    fn mobius_table_matches_factorisation() {
        let t = mobius_table(500);
        for n in 1..=500u64 {
            assert_eq!(t[n as usize] as i64, mobius(n), "n={n}");
        }
    }

    #[test]
    fn sieve_factorisation_matches_trial_division() {
        let spf = smallest_prime_factors(3000);
        for n in 2..=3000u64 {
            assert_eq!(factorize_with(&spf, n as usize), factorize(n), "n={n}");
        }
    }
}
