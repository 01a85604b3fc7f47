use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::fixed::{big_to_f64_scaled, Ctx, Fixed};
use serde::{Deserialize, Serialize};

use super::qexp::{dim_cusp_forms, miller_basis, QExpansion};
use crate::arith;
use crate::error::{Error, Result};

/// Default cap on the expansion length.
pub const DEFAULT_LENGTH_BUDGET: u64 = 100_000;

/// Minimum separation of normalised T₂ eigenvalues.
pub const EIGENVALUE_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    Computed,
    Cache,
}

/// A normalised Hecke eigenform: λ(1) = 1, prime eigenvalues λ(p) = a(p)/p^{(k−1)/2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenform {
    pub k: u32,
    pub index: usize,
    pub n_max: u64,
    /// λ(n) for n = 0..=n_max (entry 0 unused).
    lambda: Vec<f64>,
    pub precision_digits: u32,
    /// Harmonic weight w_f, once fitted.
    pub harmonic_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenformTable {
    pub k: u32,
    pub forms: Vec<Eigenform>,
    pub n_max: u64,
    pub source: TableSource,
}

impl Eigenform {
    /// Build from prime eigenvalues; λ(n) for composite n ≤ n_max follows from
    /// the Hecke relations.
    pub fn from_primes(
        k: u32,
        index: usize,
        n_max: u64,
        primes: &[(u64, f64)],
        precision_digits: u32,
    ) -> Result<Self> {
        let mut lp = vec![f64::NAN; n_max as usize + 1];
        for &(p, v) in primes {
            if p <= n_max {
                lp[p as usize] = v;
            }
        }
        for p in arith::primes_up_to(n_max) {
            if lp[p as usize].is_nan() {
                return Err(Error::MissingEigenvalue(p));
            }
        }
        let lambda = multiplicative_table(n_max as usize, &lp);
        Ok(Eigenform {
            k,
            index,
            n_max,
            lambda,
            precision_digits,
            harmonic_weight: None,
        })
    }

    /// λ(p) for a stored prime.
    pub fn lambda_p(&self, p: u64) -> Result<f64> {
        if p > self.n_max {
            return Err(Error::MissingEigenvalue(p));
        }
        Ok(self.lambda[p as usize])
    }

    /// All stored prime eigenvalues in increasing p.
    pub fn prime_eigenvalues(&self) -> Vec<(u64, f64)> {
        arith::primes_up_to(self.n_max)
            .into_iter()
            .map(|p| (p, self.lambda[p as usize]))
            .collect()
    }

    /// λ(n) from multiplicativity and λ(p^{r+1}) = λ(p)λ(p^r) − λ(p^{r−1}).
    pub fn lambda(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::domain("lambda(0) is undefined"));
        }
        if n <= self.n_max {
            return Ok(self.lambda[n as usize]);
        }
        let mut acc = 1.0;
        for (p, e) in arith::factorize(n) {
            acc *= prime_power(self.lambda_p(p)?, e);
        }
        Ok(acc)
    }

    /// Dense slice λ(0..=n_max), entry 0 unused.
    pub fn lambda_table(&self) -> &[f64] {
        &self.lambda
    }
}

/// λ(p^e) from λ(p) by the three-term recursion.
pub fn prime_power(lp: f64, e: u32) -> f64 {
    let (mut prev, mut cur) = (1.0, lp);
    if e == 0 {
        return 1.0;
    }
    for _ in 1..e {
        let next = lp * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn multiplicative_table(n: usize, lp: &[f64]) -> Vec<f64> {
    // smallest prime factor sieve
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let mut out = vec![0.0; n + 1];
    if n >= 1 {
        out[1] = 1.0;
    }
    for m in 2..=n {
        let p = spf[m];
        let mut rest = m;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        out[m] = out[rest] * prime_power(lp[p], e);
    }
    out
}

/// T₂ matrix on the echelon basis: column j holds the first `d` coefficients
/// of T₂ f_j, with (T₂ f)(n) = a(2n) + 2^{k−1} a(n/2).
fn t2_matrix(basis: &[QExpansion], k: u32) -> DMatrix<f64> {
    let d = basis.len();
    let two_pow = BigInt::from(2).pow(k - 1);
    DMatrix::from_fn(d, d, |i, j| {
        let n = i + 1;
        let mut v = basis[j].coeff(2 * n).clone();
        if n % 2 == 0 {
            v += &two_pow * basis[j].coeff(n / 2);
        }
        v.to_f64().unwrap_or(f64::NAN)
    })
}

fn eigen_pairs(m: &DMatrix<f64>) -> Result<Vec<(f64, Vec<f64>)>> {
    let d = m.nrows();
    if d == 1 {
        return Ok(vec![(m[(0, 0)], vec![1.0])]);
    }
    let eig = m.clone().complex_eigenvalues();
    let mut out = Vec::with_capacity(d);
    for z in eig.iter() {
        if z.im.abs() > 1e-6 * z.re.abs().max(1.0) {
            return Err(Error::domain(
                "T2 has a non-real eigenvalue; basis is corrupt",
            ));
        }
        let lam = z.re;
        // Solve (M − λI)c = 0 with c₀ = 1: rows give Σ_{j≥1}(M−λI)_{ij}c_j = −(M−λI)_{i0}.
        let shifted = m - DMatrix::identity(d, d) * lam;
        let a = shifted.columns(1, d - 1).into_owned();
        let b = -shifted.column(0).into_owned();
        let svd = a.svd(true, true);
        let sol = svd
            .solve(&b, 1e-300)
            .map_err(|e| Error::domain(format!("eigenvector solve failed: {e}")))?;
        let mut c = vec![1.0];
        c.extend(sol.iter().copied());
        out.push((lam, c));
    }
    Ok(out)
}

fn check_gaps(eigenvalues: &[f64], k: u32) -> Result<()> {
    let scale2 = 2f64.powf((k as f64 - 1.0) / 2.0);
    for w in eigenvalues.windows(2) {
        let gap = (w[1] - w[0]) / scale2;
        if gap < EIGENVALUE_GAP_TOL {
            return Err(Error::DegenerateSpectrum { gap });
        }
    }
    Ok(())
}

/// Eigenvectors (normalised so the first entry is 1) in increasing
/// eigenvalue order, as fixed-point numbers in `ctx`.
fn sorted_eigenvectors(
    basis: &[QExpansion],
    k: u32,
    precision: Precision,
) -> Result<(Ctx, Vec<Vec<Fixed>>)> {
    match precision {
        Precision::Double => {
            let m = t2_matrix(basis, k);
            let mut pairs = eigen_pairs(&m)?;
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            check_gaps(&pairs.iter().map(|p| p.0).collect::<Vec<_>>(), k)?;
            let ctx = Ctx { bits: 64 };
            let vecs = pairs
                .iter()
                .map(|(_, c)| c.iter().map(|&v| ctx.from_f64(v)).collect())
                .collect();
            Ok((ctx, vecs))
        }
        Precision::Extended { bits } => {
            let m = t2_matrix_exact(basis, k);
            let max_bits = m.iter().flatten().map(|v| v.bits()).max().unwrap_or(1) as u32;
            let ctx = Ctx {
                bits: bits.max(64) + 2 * max_bits,
            };
            let poly = charpoly(&m);
            let bound = BigInt::from(2) * BigInt::from(2).pow(k / 2) + 1;
            let roots = real_roots(&ctx, &poly, &bound, m.len())?;
            check_gaps(&roots.iter().map(|r| ctx.to_f64(r)).collect::<Vec<_>>(), k)?;
            let vecs = roots
                .iter()
                .map(|r| null_vector(&ctx, &m, r))
                .collect::<Result<Vec<_>>>()?;
            Ok((ctx, vecs))
        }
    }
}

fn t2_matrix_exact(basis: &[QExpansion], k: u32) -> Vec<Vec<BigInt>> {
    let d = basis.len();
    let two_pow = BigInt::from(2).pow(k - 1);
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let n = i + 1;
                    let mut v = basis[j].coeff(2 * n).clone();
                    if n % 2 == 0 {
                        v += &two_pow * basis[j].coeff(n / 2);
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial det(xI − M) by Faddeev–LeVerrier; coefficients
/// in increasing degree, exact.
fn charpoly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let matmul = |a: &[Vec<BigInt>], b: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| &a[i][l] * &b[l][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for step in 1..=n {
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - step + 1];
        }
        mk = next;
        let am = matmul(m, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - step] = -tr / BigInt::from(step as u64);
    }
    coeffs
}

fn poly_eval(ctx: &Ctx, poly: &[BigInt], x: &Fixed) -> Fixed {
    let mut acc = Fixed::zero();
    for c in poly.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), &ctx.from_int(c));
    }
    acc
}

/// All `count` real roots of `poly` in (−bound, bound), by sign changes on a
/// grid followed by bisection to the full working precision.
fn real_roots(ctx: &Ctx, poly: &[BigInt], bound: &BigInt, count: usize) -> Result<Vec<Fixed>> {
    let lo = ctx.from_int(&-bound.clone());
    let width = ctx.from_int(&(bound * 2));
    let mut grid = 64 * count;
    while grid <= 1 << 20 {
        let step = Fixed {
            m: &width.m / BigInt::from(grid as u64),
        };
        let mut brackets = Vec::new();
        let mut x0 = lo.clone();
        let mut f0 = poly_eval(ctx, poly, &x0);
        for _ in 0..grid {
            let x1 = ctx.add(&x0, &step);
            let f1 = poly_eval(ctx, poly, &x1);
            if f0.sign() != f1.sign() || f1.m.is_zero() {
                brackets.push((x0.clone(), x1.clone(), f0.sign()));
            }
            x0 = x1;
            f0 = f1;
        }
        if brackets.len() == count {
            return Ok(brackets
                .into_iter()
                .map(|(mut a, mut b, sa)| {
                    while (&b.m - &a.m) > BigInt::one() {
                        let mid = Fixed {
                            m: (&a.m + &b.m) >> 1u32,
                        };
                        let fm = poly_eval(ctx, poly, &mid);
                        if fm.m.is_zero() {
                            return mid;
                        }
                        if fm.sign() == sa {
                            a = mid;
                        } else {
                            b = mid;
                        }
                    }
                    a
                })
                .collect());
        }
        grid *= 4;
    }
    Err(Error::DegenerateSpectrum { gap: 0.0 })
}

/// Solve (M − λI)c = 0 with c₀ = 1 by fixed-point elimination with partial
/// pivoting on the columns 1..d.
fn null_vector(ctx: &Ctx, m: &[Vec<BigInt>], lam: &Fixed) -> Result<Vec<Fixed>> {
    let d = m.len();
    if d == 1 {
        return Ok(vec![ctx.from_int(&BigInt::one())]);
    }
    // rows: [A_{i1} .. A_{i,d-1} | −A_{i0}]
    let mut rows: Vec<Vec<Fixed>> = (0..d)
        .map(|i| {
            let mut r: Vec<Fixed> = (1..d)
                .map(|j| {
                    let v = ctx.from_int(&m[i][j]);
                    if i == j {
                        ctx.sub(&v, lam)
                    } else {
                        v
                    }
                })
                .collect();
            let a0 = ctx.from_int(&m[i][0]);
            let a0 = if i == 0 { ctx.sub(&a0, lam) } else { a0 };
            r.push(Fixed { m: -a0.m });
            r
        })
        .collect();
    let n = d - 1;
    for col in 0..n {
        let piv = (col..d)
            .max_by(|&a, &b| rows[a][col].abs_cmp(&rows[b][col]))
            .unwrap();
        rows.swap(col, piv);
        if rows[col][col].m.is_zero() {
            return Err(Error::domain("singular eigenvector system"));
        }
        for r in (col + 1)..d {
            let f = ctx.div(&rows[r][col], &rows[col][col]);
            for c in col..=n {
                let t = ctx.mul(&f, &rows[col][c]);
                rows[r][c] = ctx.sub(&rows[r][c], &t);
            }
        }
    }
    let mut x = vec![Fixed::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rows[i][n].clone();
        for j in (i + 1)..n {
            acc = ctx.sub(&acc, &ctx.mul(&rows[i][j], &x[j]));
        }
        x[i] = ctx.div(&acc, &rows[i][i]);
    }
    let mut out = vec![ctx.from_int(&BigInt::one())];
    out.extend(x);
    Ok(out)
}

/// Linear algebra precision for the T₂ diagonalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    /// nalgebra in f64; adequate while dim S_k ≤ 2.
    Double,
    /// Exact characteristic polynomial, fixed-point roots and eigenvectors
    /// with at least `bits` fractional bits.
    Extended { bits: u32 },
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Extended { bits: 256 }
    }
}

fn combine(ctx: &Ctx, c: &[Fixed], basis: &[QExpansion], n: usize) -> f64 {
    let mut acc = BigInt::zero();
    for (cj, f) in c.iter().zip(basis) {
        acc += &cj.m * f.coeff(n);
    }
    big_to_f64_scaled(&acc, ctx.bits)
}

/// Normalised coefficients a_f(n)/n^{(k−1)/2} for every n ≤ len, read
/// directly from the q-expansion of each eigenform (no Hecke relations
/// applied). Row order matches [`hecke_eigenforms`].
pub fn direct_normalized_coefficients(
    k: u32,
    len: usize,
    precision: Precision,
) -> Result<Vec<Vec<f64>>> {
    let d = dim_cusp_forms(k);
    if d == 0 {
        return Err(Error::NoCuspForms(k));
    }
    let basis = miller_basis(k, len.max(2 * d))?;
    let (ctx, vecs) = sorted_eigenvectors(&basis, k, precision)?;
    let half = (k as f64 - 1.0) / 2.0;
    Ok(vecs
        .iter()
        .map(|c| {
            (1..=len)
                .map(|n| combine(&ctx, c, &basis, n) / (n as f64).powf(half))
                .collect()
        })
        .collect())
}

/// Build H_k: diagonalise T₂ on the Miller basis, normalise each eigenvector to
/// a(1) = 1 and read λ(p) for every prime p ≤ n_max from its q-expansion.
/// Forms are ordered by increasing λ(2).
pub fn hecke_eigenforms(k: u32, n_max: u64) -> Result<EigenformTable> {
    hecke_eigenforms_with(k, n_max, &EigenOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub precision: Precision,
    /// Largest admissible q-expansion length.
    pub length_budget: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            precision: Precision::default(),
            length_budget: DEFAULT_LENGTH_BUDGET,
        }
    }
}

pub fn hecke_eigenforms_with(k: u32, n_max: u64, opts: &EigenOptions) -> Result<EigenformTable> {
    let budget = opts.length_budget;
    if k % 2 == 1 || k < 12 {
        return Err(Error::NoCuspForms(k));
    }
    if n_max < 2 {
        return Err(Error::domain("n_max must be at least 2"));
    }
    let d = dim_cusp_forms(k);
    if d == 0 {
        return Err(Error::NoCuspForms(k));
    }
    let len = n_max.max(2 * d as u64);
    if len > budget {
        return Err(Error::Resource(format!(
            "expansion length {len} exceeds budget {budget}"
        )));
    }
    let basis = miller_basis(k, len as usize)?;
    let (ctx, vecs) = sorted_eigenvectors(&basis, k, opts.precision)?;
    let digits = match opts.precision {
        Precision::Double => 15,
        Precision::Extended { .. } => 17,
    };
    let primes = arith::primes_up_to(n_max);
    let half = (k as f64 - 1.0) / 2.0;
    let mut forms = Vec::with_capacity(d);
    for (index, c) in vecs.iter().enumerate() {
        let lp: Vec<(u64, f64)> = primes
            .iter()
            .map(|&p| {
                (
                    p,
                    combine(&ctx, c, &basis, p as usize) / (p as f64).powf(half),
                )
            })
            .collect();
        forms.push(Eigenform::from_primes(k, index, n_max, &lp, digits)?);
    }
    Ok(EigenformTable {
        k,
        forms,
        n_max,
        source: TableSource::Computed,
    })
}

impl EigenformTable {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn has_weights(&self) -> bool {
        self.forms.iter().all(|f| f.harmonic_weight.is_some())
    }

    pub fn weights(&self) -> Result<Vec<f64>> {
        self.forms
            .iter()
            .map(|f| {
                f.harmonic_weight
                    .ok_or_else(|| Error::Dependency("harmonic weights not fitted".into()))
            })
            .collect()
    }
}
