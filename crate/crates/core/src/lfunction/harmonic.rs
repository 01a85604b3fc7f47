//! Harmonic weights w_f = Γ(k−1)/((4π)^{k−1}⟨f, f⟩).
//!
//! The production route fits w_f to the Petersson identities
//! Σ_f w_f λ_f(m)λ_f(n) = δ_{m,n} + 2π i^k Σ_c S(m,n;c)/c J_{k−1}(4π√(mn)/c)
//! over a fixed set of pairs and validates on disjoint ones. The Petersson
//! norm by quadrature over the fundamental domain is kept as an independent
//! route.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigenforms::{Eigenform, EigenformTable};
use crate::error::{Error, Result};
use crate::quad;
use crate::specials::{ln_gamma_real, regularized_gamma_q};
use crate::sums::petersson_rhs;
use num_complex::Complex64;

pub const FIT_PAIRS: [(u64, u64); 8] = [
    (1, 3),
    (2, 2),
    (1, 5),
    (3, 3),
    (2, 5),
    (1, 6),
    (3, 4),
    (5, 5),
];
pub const HOLDOUT_PAIRS: [(u64, u64); 4] = [(1, 1), (1, 2), (2, 3), (1, 4)];
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairResidual {
    pub m: u64,
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicFit {
    pub k: u32,
    pub c_max: u64,
    pub weights: Vec<f64>,
    pub condition: f64,
    pub fit_pairs: Vec<(u64, u64)>,
    pub fit_residual: f64,
    pub holdout: Vec<PairResidual>,
    pub max_holdout_residual: f64,
}

/// Fit pairs, extended for large dimensions so that there are at least twice
/// as many equations as unknowns.
fn fit_pairs(dim: usize) -> Vec<(u64, u64)> {
    let mut pairs = FIT_PAIRS.to_vec();
    let mut m = 1;
    let mut n = 7;
    while pairs.len() < 2 * dim {
        if !HOLDOUT_PAIRS.contains(&(m, n)) && !pairs.contains(&(m, n)) {
            pairs.push((m, n));
        }
        m += 1;
        if m > n {
            n += 1;
            m = 1;
        }
    }
    pairs
}

fn products(table: &EigenformTable, m: u64, n: u64) -> Result<Vec<f64>> {
    table
        .forms
        .iter()
        .map(|f| Ok(f.lambda(m)? * f.lambda(n)?))
        .collect()
}

/// Fit the harmonic weights of every form in the table and store them.
pub fn harmonic_weights(table: &mut EigenformTable, c_max: u64) -> Result<HarmonicFit> {
    let dim = table.dim();
    if dim == 0 {
        return Err(Error::NoCuspForms(table.k));
    }
    let pairs = fit_pairs(dim);
    let mut a = DMatrix::zeros(pairs.len(), dim);
    let mut b = DVector::zeros(pairs.len());
    for (row, &(m, n)) in pairs.iter().enumerate() {
        for (col, v) in products(table, m, n)?.into_iter().enumerate() {
            a[(row, col)] = v;
        }
        b[row] = petersson_rhs(table.k, m, n, c_max).0;
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { cond: condition });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|_| Error::IllConditioned { cond: condition })?;
    let fit_residual = (&a * &x - &b).amax();
    let weights: Vec<f64> = x.iter().copied().collect();

    let mut holdout = Vec::new();
    for &(m, n) in &HOLDOUT_PAIRS {
        let lhs: f64 = products(table, m, n)?
            .iter()
            .zip(&weights)
            .map(|(p, w)| p * w)
            .sum();
        let rhs = petersson_rhs(table.k, m, n, c_max).0;
        holdout.push(PairResidual {
            m,
            n,
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        });
    }
    let max_holdout_residual = holdout.iter().map(|r| r.residual).fold(0.0, f64::max);
    for (f, w) in table.forms.iter_mut().zip(&weights) {
        f.harmonic_weight = Some(*w);
    }
    Ok(HarmonicFit {
        k: table.k,
        c_max,
        weights,
        condition,
        fit_pairs: pairs,
        fit_residual,
        holdout,
        max_holdout_residual,
    })
}

/// ⟨f, f⟩ = ∫_F |f(z)|² y^k dμ over the standard fundamental domain, f with
/// coefficients λ(n)n^{(k−1)/2}.
///
/// Above y = 1 the x-integral is exact by orthogonality and leaves incomplete
/// gamma functions; the remaining piece {0 ≤ |x| ≤ 1/2, √(1−x²) ≤ y ≤ 1} is
/// done by Gauss–Legendre in both variables.
pub fn petersson_norm(f: &Eigenform) -> Result<f64> {
    let k = f.k as f64;
    let kappa = (k - 1.0) / 2.0;
    let terms = 40 + f.k as u64;
    let lam: Vec<f64> = (1..=terms).map(|n| f.lambda(n)).collect::<Result<_>>()?;
    // Everything is measured in units of Γ(k−1)(4π)^{1−k}.
    let ln_unit = ln_gamma_real(k - 1.0) + (1.0 - k) * (4.0 * PI).ln();

    let mut upper = 0.0;
    for (i, l) in lam.iter().enumerate() {
        let n = (i + 1) as f64;
        upper += l * l * regularized_gamma_q(Complex64::new(k - 1.0, 0.0), 4.0 * PI * n).re;
    }

    // |f|² y^{k−2} = |Σ λ(n) e(nx) exp(κ ln n + (k/2 − 1) ln y − 2πny)|².
    let integrand = |x: f64, y: f64| {
        let ly = y.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, l) in lam.iter().enumerate() {
            let n = (i + 1) as f64;
            let mag =
                (kappa * n.ln() + (k / 2.0 - 1.0) * ly - 2.0 * PI * n * y - ln_unit / 2.0).exp();
            acc += Complex64::from_polar(l * mag, 2.0 * PI * n * x);
        }
        acc.norm_sqr()
    };
    let lower = 2.0
        * quad::gl_composite(
            |x| {
                let y0 = (1.0 - x * x).sqrt();
                quad::gl_composite(|y| integrand(x, y), y0, 1.0, 2)
            },
            0.0,
            0.5,
            4,
        );
    Ok((ln_unit.exp()) * (upper + lower))
}
