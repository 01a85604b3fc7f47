//! The harmonic twisted second moment Σ^h_f λ_f(ℓ)|L(1/2+σ+it; f)|² against
//! its four main terms
//!
//! ζ(1+2σ)τ_it(ℓ)/ℓ^{1/2+σ} + ζ(1−2σ)(k/4π)^{−4σ}τ_it(ℓ)/ℓ^{1/2−σ}
//! + i^k ζ(1+2it)(k/4π)^{−2σ+2it}τ_σ(ℓ)/ℓ^{1/2+it} + (conjugate of the third),
//!
//! with error envelope ℓ^{1+σ}k^{−1/2−2σ}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith;
use crate::eigenforms::{hecke_eigenforms, EigenformTable};
use crate::error::{Error, Result};
use crate::lfunction::{harmonic_weights, AfeTable, CriticalPoint};
use crate::specials::zeta;
use crate::sums::{petersson_rhs, tau_nu};

const REALITY_TOL: f64 = 1e-8;

fn check_args(ell: u64, point: CriticalPoint) -> Result<()> {
    if ell == 0 || !arith::is_squarefree(ell) {
        return Err(Error::domain(format!("ell must be squarefree, got {ell}")));
    }
    if point.t == 0.0 {
        return Err(Error::domain("the twisted moment needs t != 0"));
    }
    if !(point.sigma > 0.0) {
        return Err(Error::domain(format!(
            "the twisted moment needs sigma > 0, got {}",
            point.sigma
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalMoment {
    pub value: f64,
    pub imag_residue: f64,
    /// Largest md² in the |L|² sums.
    pub truncation: u64,
}

/// Σ^h_f λ_f(ℓ)|L(1/2+σ+it; f)|² over the table, forms in table order.
pub fn twisted_moment_empirical(
    table: &EigenformTable,
    ell: u64,
    point: CriticalPoint,
) -> Result<EmpiricalMoment> {
    check_args(ell, point)?;
    let weights = table.weights()?;
    let afe = AfeTable::new(table.k, point)?;
    let mut value = 0.0;
    let mut imag = 0.0;
    for (f, w) in table.forms.iter().zip(&weights) {
        let l2 = afe.eval(f)?;
        let twist = f.lambda(ell)?;
        value += w * twist * l2.value;
        imag += w * twist * l2.imag_residue;
    }
    if imag.abs() > REALITY_TOL * value.abs().max(1.0) {
        return Err(Error::Accuracy {
            achieved: imag.abs(),
            target: REALITY_TOL,
        });
    }
    Ok(EmpiricalMoment {
        value,
        imag_residue: imag,
        truncation: afe.truncation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTerms {
    pub terms: [Complex64; 4],
    pub sum: Complex64,
    pub envelope: f64,
}

/// The four main terms, their sum and the envelope ℓ^{1+σ}k^{−1/2−2σ}.
pub fn twisted_moment_main(k: u32, ell: u64, point: CriticalPoint) -> Result<MainTerms> {
    check_args(ell, point)?;
    let (sg, t) = (point.sigma, point.t);
    let kf = k as f64;
    let lf = ell as f64;
    let q = kf / (4.0 * PI);
    let sign = if k % 4 == 0 { 1.0 } else { -1.0 };
    let tau_t = tau_nu(Complex64::new(0.0, t), ell).re;
    let tau_s = tau_nu(Complex64::new(sg, 0.0), ell).re;
    let z = |re: f64, im: f64| zeta(Complex64::new(re, im));
    let t1 = z(1.0 + 2.0 * sg, 0.0)? * tau_t * lf.powf(-0.5 - sg);
    let t2 = z(1.0 - 2.0 * sg, 0.0)? * q.powf(-4.0 * sg) * tau_t * lf.powf(-0.5 + sg);
    let t3 = z(1.0, 2.0 * t)?
        * (Complex64::new(-2.0 * sg, 2.0 * t) * q.ln()).exp()
        * tau_s
        * (Complex64::new(-0.5, -t) * lf.ln()).exp()
        * sign;
    // The fourth term is the third with t → −t, written out rather than conjugated.
    let t4 = z(1.0, -2.0 * t)?
        * (Complex64::new(-2.0 * sg, -2.0 * t) * q.ln()).exp()
        * tau_s
        * (Complex64::new(-0.5, t) * lf.ln()).exp()
        * sign;
    let terms = [t1, t2, t3, t4];
    Ok(MainTerms {
        terms,
        sum: terms.iter().sum(),
        envelope: lf.powf(1.0 + sg) * kf.powf(-0.5 - 2.0 * sg),
    })
}

/// Empirical moment rebuilt from the trace formula: the |L|² sum with
/// Σ^h λ(ℓ)λ(m) replaced by the Petersson right side at c_max. Also returns the
/// diagonal (δ_{ℓ,m}) part alone and the total size of the Kloosterman part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSplit {
    pub total: f64,
    pub diagonal: f64,
    pub off_diagonal_magnitude: f64,
}

pub fn trace_formula_moment(
    k: u32,
    ell: u64,
    point: CriticalPoint,
    c_max: u64,
) -> Result<TraceSplit> {
    check_args(ell, point)?;
    let afe = AfeTable::new(k, point)?;
    let sg = point.sigma;
    let n = afe.truncation;
    let mut total = 0.0;
    let mut diagonal = 0.0;
    let mut off = 0.0;
    let mut d = 1u64;
    while d * d <= n {
        let dd = (d as f64).powf(-1.0 - 2.0 * sg);
        for m in 1..=n / (d * d) {
            let coef = afe.coefficient(m, d) * dd;
            let rhs = petersson_rhs(k, ell, m, c_max).0;
            let delta = if m == ell { 1.0 } else { 0.0 };
            total += coef * rhs;
            diagonal += coef * delta;
            off += (coef * (rhs - delta)).abs();
        }
        d += 1;
    }
    Ok(TraceSplit {
        total,
        diagonal,
        off_diagonal_magnitude: off,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub k: u32,
    pub ell: u64,
    pub sigma: f64,
    pub t: f64,
    pub lhs: f64,
    pub lhs_imag: f64,
    pub main_terms: [Complex64; 4],
    pub main_sum: f64,
    pub main_imag: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
    /// Whether ℓ < k^{1/3}, the range in which the main terms are claimed.
    pub ell_in_range: bool,
    pub c_max: u64,
    pub truncation: u64,
}

/// Empirical moment and main terms for one fitted table.
pub fn moment_report(
    table: &EigenformTable,
    ell: u64,
    point: CriticalPoint,
    c_max: u64,
) -> Result<MomentReport> {
    let emp = twisted_moment_empirical(table, ell, point)?;
    let main = twisted_moment_main(table.k, ell, point)?;
    let residual = (emp.value - main.sum.re).abs();
    Ok(MomentReport {
        k: table.k,
        ell,
        sigma: point.sigma,
        t: point.t,
        lhs: emp.value,
        lhs_imag: emp.imag_residue,
        main_terms: main.terms,
        main_sum: main.sum.re,
        main_imag: main.sum.im,
        residual,
        envelope: main.envelope,
        ratio: residual / main.envelope,
        ell_in_range: (ell as f64) < (table.k as f64).cbrt(),
        c_max,
        truncation: emp.truncation,
    })
}

/// A table for weight k long enough for the |L|² sums at `point`, with fitted
/// harmonic weights.
pub fn prepared_table(k: u32, point: CriticalPoint, c_max: u64) -> Result<EigenformTable> {
    let afe = AfeTable::new(k, point)?;
    let mut table = hecke_eigenforms(k, afe.truncation.max(16))?;
    harmonic_weights(&mut table, c_max)?;
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: u32,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualScan {
    pub ell: u64,
    pub sigma: f64,
    pub t: f64,
    pub rows: Vec<ScanRow>,
    /// Largest ratio over the scan: the constant C with residual ≤ C·envelope.
    pub fitted_constant: f64,
    /// Largest ratio among the smaller half of the weights.
    pub constant_from_low_weights: f64,
    /// residual at the largest weight below residual at the smallest.
    pub last_below_first: bool,
    /// Number of consecutive pairs where the residual increased.
    pub increases: usize,
}

/// Summary of per-weight reports sharing (ℓ, σ, t), in the given order.
pub fn summarize_scan(reports: &[MomentReport]) -> Result<ResidualScan> {
    let first = reports
        .first()
        .ok_or_else(|| Error::domain("residual scan needs at least one weight"))?;
    let rows: Vec<ScanRow> = reports
        .iter()
        .map(|r| ScanRow {
            k: r.k,
            residual: r.residual,
            envelope: r.envelope,
            ratio: r.ratio,
        })
        .collect();
    let fitted_constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let low = rows.len().div_ceil(2);
    let constant_from_low_weights = rows[..low].iter().map(|r| r.ratio).fold(0.0, f64::max);
    let increases = rows
        .windows(2)
        .filter(|w| w[1].residual > w[0].residual)
        .count();
    let last_below_first = rows.last().map(|l| l.residual).unwrap_or(0.0) < rows[0].residual;
    Ok(ResidualScan {
        ell: first.ell,
        sigma: first.sigma,
        t: first.t,
        rows,
        fitted_constant,
        constant_from_low_weights,
        last_below_first,
        increases,
    })
}

/// Serial scan over weights; each weight gets its own table.
pub fn residual_scan(
    weights: &[u32],
    ell: u64,
    point: CriticalPoint,
    c_max: u64,
) -> Result<ResidualScan> {
    let mut reports = Vec::new();
    for &k in weights {
        let table = prepared_table(k, point, c_max)?;
        reports.push(moment_report(&table, ell, point, c_max)?);
    }
    summarize_scan(&reports)
}
