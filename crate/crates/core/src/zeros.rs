//! Zeros of L(s; f) near the critical line.
//!
//! Three pieces:
//!
//! - the box identity of the argument principle (Selberg's form), which
//!   weights each zero β+iγ of a holomorphic ω in the box by
//!   4H cos(πγ/2H) sinh(π(β−W₀)/2H) and equates the total to three boundary
//!   integrals of log ω;
//! - zero counts for a single form: sign changes of Hardy's Z on the line and
//!   winding numbers of Λ around rectangles;
//! - the family experiment, averaging counts of zeros with Re s > 1/2+σ.
//!
//! A zero exactly at s = 1/2 lies on the line Re s = 1/2 < 1/2+σ and so is
//! never counted in a box to the right of the line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eigenforms::{hecke_eigenforms, Eigenform, EigenformTable};
use crate::error::{Error, Result};
use crate::lfunction::{hardy_z, l_complex, l_complex_split};
use crate::quad;
use crate::specials::ln_gamma;

/// The rectangle W₀ ≤ Re s ≤ W₁, |Im s − center| ≤ H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub w0: f64,
    pub w1: f64,
    pub half_height: f64,
    pub center: f64,
}

impl BoxSpec {
    pub fn new(w0: f64, w1: f64, half_height: f64) -> Self {
        BoxSpec {
            w0,
            w1,
            half_height,
            center: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w0 < self.w1) || !(self.half_height > 0.0) || !self.center.is_finite() {
            return Err(Error::domain(format!("degenerate box {self:?}")));
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.w0 && z.re <= self.w1 && (z.im - self.center).abs() <= self.half_height
    }

    fn grown(&self, by: f64) -> BoxSpec {
        BoxSpec {
            w0: self.w0 - by,
            w1: self.w1 + by,
            half_height: self.half_height + by,
            center: self.center,
        }
    }
}

/// A holomorphic function fed to the box identity.
pub trait Omega {
    fn eval(&self, s: Complex64) -> Result<Complex64>;

    /// Some branch of log ω(s). The right edge is unwrapped from these values,
    /// so any branch will do; the default is the principal one.
    fn log(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.eval(s)?.ln())
    }

    fn log_abs(&self, s: Complex64) -> Result<f64> {
        Ok(self.eval(s)?.norm().ln())
    }

    /// The zeros, when they are known.
    fn zeros(&self) -> Option<&[Complex64]> {
        None
    }
}

/// ω(s) = Π (s − ρ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroProduct {
    pub zeros: Vec<Complex64>,
}

impl Omega for ZeroProduct {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.zeros.iter().map(|r| s - r).product())
    }

    /// Σ log(s − ρ): continuous to the right of every zero.
    fn log(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.zeros.iter().map(|r| (s - r).ln()).sum())
    }

    fn log_abs(&self, s: Complex64) -> Result<f64> {
        Ok(self.zeros.iter().map(|r| (s - r).norm().ln()).sum())
    }

    fn zeros(&self) -> Option<&[Complex64]> {
        Some(&self.zeros)
    }
}

/// Any holomorphic function given as a closure, zeros unknown.
pub struct AnalyticOmega<F: Fn(Complex64) -> Result<Complex64>>(pub F);

impl<F: Fn(Complex64) -> Result<Complex64>> Omega for AnalyticOmega<F> {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.0)(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelbergValue {
    /// 4H Σ cos(πγ/2H) sinh(π(β−W₀)/2H) over the zeros in the box, when the
    /// zeros are known.
    pub lhs: Option<f64>,
    /// Sum of the three boundary integrals.
    pub rhs: f64,
    /// ∫ cos(πt/2H) log|ω(W₀+it)| dt.
    pub left: f64,
    /// −Re ∫ cos(π(W₁−W₀+it)/2iH) log ω(W₁+it) dt.
    pub right: f64,
    /// ∫ sinh(π(α−W₀)/2H) log|ω(α+iH)ω(α−iH)| dα.
    pub horizontal: f64,
    pub quad_error: f64,
}

const BOUNDARY_TOL: f64 = 1e-11;
const BOUNDARY_FAIL: f64 = 1e-7;

/// The box identity, both sides.
pub fn selberg_box_functional(omega: &dyn Omega, bx: &BoxSpec) -> Result<SelbergValue> {
    bx.validate()?;
    let h = bx.half_height;
    let c = bx.center;
    let q = PI / (2.0 * h);
    if let Some(zeros) = omega.zeros() {
        // The identity needs ω free of zeros on Re s ≥ W for some W < W₁.
        if let Some(z) = zeros.iter().find(|z| z.re >= bx.w1) {
            return Err(Error::domain(format!(
                "zero {z} lies on or right of the edge Re s = {}",
                bx.w1
            )));
        }
    }
    let lhs = omega.zeros().map(|zeros| {
        zeros
            .iter()
            .filter(|z| bx.contains(**z))
            .map(|z| 4.0 * h * (q * (z.im - c)).cos() * (q * (z.re - bx.w0)).sinh())
            .sum()
    });

    let mut failure: Option<Error> = None;
    let mut log_abs = |s: Complex64| match omega.log_abs(s) {
        Ok(v) if v.is_finite() => v,
        Ok(_) => {
            failure.get_or_insert(boundary_zero(s));
            0.0
        }
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let (left, e_left) = quad::adaptive(
        |t| (q * t).cos() * log_abs(Complex64::new(bx.w0, c + t)),
        -h,
        h,
        BOUNDARY_TOL,
    );
    let (horizontal, e_hor) = quad::adaptive(
        |a| {
            (q * (a - bx.w0)).sinh()
                * (log_abs(Complex64::new(a, c + h)) + log_abs(Complex64::new(a, c - h)))
        },
        bx.w0,
        bx.w1,
        BOUNDARY_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let quad_error = e_left + e_hor;
    if quad_error > BOUNDARY_FAIL {
        return Err(boundary_zero(Complex64::new(bx.w0, c)));
    }
    let right = -right_edge(omega, bx)?;
    Ok(SelbergValue {
        lhs,
        rhs: left + right + horizontal,
        left,
        right,
        horizontal,
        quad_error,
    })
}

fn boundary_zero(s: Complex64) -> Error {
    Error::BoundaryZero { at: format!("{s}") }
}

/// Re ∫ cos(π(W₁−W₀+it)/2iH) log ω(W₁+it) dt with the logarithm unwrapped
/// along the edge. ω has no zeros near this edge, so composite Gauss–Legendre
/// on ordered nodes is enough.
fn right_edge(omega: &dyn Omega, bx: &BoxSpec) -> Result<f64> {
    let h = bx.half_height;
    let q = PI / (2.0 * h);
    let panels = 16 + (2.0 * h / 0.05).ceil() as usize;
    let (x, w) = quad::gauss_legendre(20);
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let width = 2.0 * h / panels as f64;
    let mut prev: Option<f64> = None;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = -h + (p as f64 + 0.5) * width;
        for &i in &order {
            let t = mid + 0.5 * width * x[i];
            let mut lg = omega.log(Complex64::new(bx.w1, bx.center + t))?;
            if let Some(before) = prev {
                lg.im += 2.0 * PI * ((before - lg.im) / (2.0 * PI)).round();
            }
            prev = Some(lg.im);
            let kernel = (Complex64::new(bx.w1 - bx.w0, t) * q / Complex64::i()).cos();
            acc += w[i] * 0.5 * width * (kernel * lg).re;
        }
    }
    Ok(acc)
}

/// Zeros drawn uniformly from a window around the box: real parts in
/// [W₀ − H/2, W₁ − 0.1(W₁ − W₀)], heights within 1.5H of the center. Every
/// zero stays left of W₁, as the identity requires.
pub fn random_zero_configuration(seed: u64, bx: &BoxSpec, count: usize) -> ZeroProduct {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = bx.w0 - 0.5 * bx.half_height;
    let hi = bx.w1 - 0.1 * (bx.w1 - bx.w0);
    let zeros = (0..count)
        .map(|_| {
            Complex64::new(
                rng.random_range(lo..hi),
                bx.center + rng.random_range(-1.5..1.5) * bx.half_height,
            )
        })
        .collect();
    ZeroProduct { zeros }
}

/// log Γ-part of Λ(s) = (2π)^{−s}Γ(s+(k−1)/2)L(s).
fn completion_log(k: u32, s: Complex64) -> Complex64 {
    -s * (2.0 * PI).ln() + ln_gamma(s + (k as f64 - 1.0) / 2.0)
}

/// log Λ(a) − log Λ(b) for nearby a, b, on the branch closest to zero.
fn log_lambda_step(f: &Eigenform, a: Complex64, b: Complex64) -> Result<Complex64> {
    let mut g = completion_log(f.k, a) - completion_log(f.k, b);
    g.im -= 2.0 * PI * (g.im / (2.0 * PI)).round();
    let r = (l_complex(f, a)?.value / l_complex(f, b)?.value).ln();
    Ok(g + r)
}

/// Λ'/Λ by Richardson-extrapolated central differences, halving the step
/// until the two differences agree.
fn log_derivative(f: &Eigenform, s: Complex64) -> Result<Complex64> {
    let mut h = 1e-3;
    let mut last = Complex64::new(f64::NAN, 0.0);
    for _ in 0..6 {
        let d1 = log_lambda_step(f, s + h, s - h)? / (2.0 * h);
        let d2 = log_lambda_step(f, s + h / 2.0, s - h / 2.0)? / h;
        let d = (d2 * 4.0 - d1) / 3.0;
        if (d1 - d2).norm() <= 1e-3 * d.norm().max(1.0) {
            return Ok(d);
        }
        last = d;
        h /= 4.0;
    }
    Ok(last)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Winding {
    /// (1/2πi)∮ Λ'/Λ ds before rounding.
    pub raw: Complex64,
    pub count: u64,
    /// Distance of the raw winding from the integer count.
    pub deviation: f64,
    pub quad_error: f64,
    /// Whether the box was grown by 10⁻⁶ to step off a near-boundary zero.
    pub nudged: bool,
}

const WINDING_TOL: f64 = 1e-3;
const SPIKE: f64 = 1e6;
const NUDGE: f64 = 1e-6;

/// Number of zeros of Λ(s; f) inside the box, by the argument principle.
pub fn box_winding(f: &Eigenform, bx: &BoxSpec) -> Result<Winding> {
    bx.validate()?;
    let (raw, err, spike) = winding_integral(f, bx)?;
    let first = finish_winding(raw, err, false);
    if !spike && first.deviation <= WINDING_TOL {
        return Ok(first);
    }
    let (raw, err, _) = winding_integral(f, &bx.grown(NUDGE))?;
    let second = finish_winding(raw, err, true);
    if second.deviation <= WINDING_TOL {
        Ok(second)
    } else {
        Err(Error::Refinement { winding: raw.re })
    }
}

fn finish_winding(raw: Complex64, quad_error: f64, nudged: bool) -> Winding {
    let count = raw.re.round().max(0.0);
    Winding {
        raw,
        count: count as u64,
        deviation: (raw - count).norm(),
        quad_error,
        nudged,
    }
}

fn winding_integral(f: &Eigenform, bx: &BoxSpec) -> Result<(Complex64, f64, bool)> {
    let (w0, w1) = (bx.w0, bx.w1);
    let (lo, hi) = (bx.center - bx.half_height, bx.center + bx.half_height);
    // Counter-clockwise: bottom, right, top, left. Each edge is s(u) = start + u·dir.
    let edges = [
        (Complex64::new(w0, lo), Complex64::new(1.0, 0.0), w1 - w0),
        (Complex64::new(w1, lo), Complex64::new(0.0, 1.0), hi - lo),
        (Complex64::new(w1, hi), Complex64::new(-1.0, 0.0), w1 - w0),
        (Complex64::new(w0, hi), Complex64::new(0.0, -1.0), hi - lo),
    ];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut peak = 0.0f64;
    let mut failure = None;
    for (start, dir, len) in edges {
        let (v, e) = quad::adaptive_c(
            |u| match log_derivative(f, start + dir * u) {
                Ok(d) => {
                    peak = peak.max(d.norm());
                    d * dir
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            0.0,
            len,
            1e-8,
            1e-7,
        );
        total += v;
        err += e;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((
        total / Complex64::new(0.0, 2.0 * PI),
        err / (2.0 * PI),
        peak > SPIKE,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnLineCount {
    /// Zeros 1/2+it with |t| < T, the central zero included.
    pub count: u64,
    /// Sign changes of Z on (0, T).
    pub positive: u64,
    /// Order of the zero at s = 1/2 (0, 1 or 2).
    pub central: u64,
    /// Grid step at which the count settled.
    pub step: f64,
    /// Counts of positive sign changes at steps 0.05, 0.025, ...
    pub history: Vec<u64>,
}

const BASE_STEP: f64 = 0.05;
const MAX_REFINEMENTS: usize = 8;

fn sign_changes(f: &Eigenform, t_max: f64, step: f64) -> Result<u64> {
    let n = (t_max / step).floor() as usize;
    let mut ts: Vec<f64> = (1..=n)
        .map(|j| j as f64 * step)
        .filter(|&t| t < t_max)
        .collect();
    // Start just off the centre, where Z may vanish identically.
    ts.insert(0, step * 1e-3);
    ts.push(t_max);
    let mut changes = 0;
    let mut prev = 0.0f64;
    for t in ts {
        let z = hardy_z(f, t)?;
        if z != 0.0 {
            if prev != 0.0 && z.signum() != prev.signum() {
                changes += 1;
            }
            prev = z;
        }
    }
    Ok(changes)
}

/// Order of the zero of L at 1/2. An odd order is forced when i^k = −1; an
/// even order shows up as a vanishing central value.
fn central_order(f: &Eigenform) -> Result<u64> {
    if f.k % 4 == 2 {
        return Ok(1);
    }
    let v = l_complex_split(f, Complex64::new(0.5, 0.0), 1.2)?;
    Ok(if v.value.norm() < 1e-10 { 2 } else { 0 })
}

/// Zeros on the critical line with |t| < T, by sign changes of Hardy's Z on
/// a grid halved until two consecutive counts agree. Zeros come in conjugate
/// pairs, so each sign change on (0, T) counts twice.
pub fn count_zeros_on_line(f: &Eigenform, t_max: f64) -> Result<OnLineCount> {
    if !(t_max > 0.0) {
        return Err(Error::domain("the height T must be positive"));
    }
    let central = central_order(f)?;
    let mut step = BASE_STEP.min(t_max / 4.0);
    let mut history = vec![sign_changes(f, t_max, step)?];
    for _ in 0..MAX_REFINEMENTS {
        step /= 2.0;
        let next = sign_changes(f, t_max, step)?;
        history.push(next);
        let n = history.len();
        if history[n - 1] == history[n - 2] {
            return Ok(OnLineCount {
                count: central + 2 * next,
                positive: next,
                central,
                step,
                history,
            });
        }
    }
    Err(Error::Accuracy {
        achieved: step,
        target: BASE_STEP / 2f64.powi(MAX_REFINEMENTS as i32),
    })
}

/// Zeros with Re s > 1/2+σ and |Im s| < T, from the winding of Λ around
/// [1/2+σ, 3/2] × [−T, T].
pub fn count_zeros_box(f: &Eigenform, sigma: f64, t_max: f64) -> Result<Winding> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::domain(format!(
            "sigma must lie in (0, 1), got {sigma}"
        )));
    }
    box_winding(f, &BoxSpec::new(0.5 + sigma, 1.5, t_max))
}

/// All zeros with |Im s| < T, from the winding around [−1/2, 3/2] × [−T, T].
pub fn count_zeros_strip(f: &Eigenform, t_max: f64) -> Result<Winding> {
    box_winding(f, &BoxSpec::new(-0.5, 1.5, t_max))
}

/// 2(Im log Γ(k/2+iT) − T log 2π)/π: the smooth part of the number of zeros
/// with |t| < T.
pub fn smooth_zero_count(k: u32, t_max: f64) -> f64 {
    let theta = ln_gamma(Complex64::new(k as f64 / 2.0, t_max)).im - t_max * (2.0 * PI).ln();
    2.0 * theta / PI
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormZeroCount {
    pub form: usize,
    pub on_line: OnLineCount,
    pub strip: Winding,
    pub right_box: Winding,
    /// strip total − on-line count: zeros off the line in either half.
    pub off_line: i64,
}

pub fn count_form_zeros(
    f: &Eigenform,
    form: usize,
    sigma: f64,
    t_max: f64,
) -> Result<FormZeroCount> {
    let on_line = count_zeros_on_line(f, t_max)?;
    let strip = count_zeros_strip(f, t_max)?;
    let right_box = count_zeros_box(f, sigma, t_max)?;
    Ok(FormZeroCount {
        form,
        off_line: strip.count as i64 - on_line.count as i64,
        on_line,
        strip,
        right_box,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCountReport {
    pub k: u32,
    pub sigma: f64,
    pub t_max: f64,
    pub counts: Vec<FormZeroCount>,
    /// Σ box counts / |H_k|.
    pub family_average: f64,
    pub smooth_count: f64,
    pub max_deviation: f64,
    /// (θ, T k^{−θσ} log k) for nominal θ.
    pub envelope: Vec<(f64, f64)>,
}

pub const NOMINAL_THETAS: [f64; 2] = [0.05, 0.1];

/// Assemble a report from per-form counts in table order.
pub fn zero_count_report(
    k: u32,
    sigma: f64,
    t_max: f64,
    counts: Vec<FormZeroCount>,
) -> Result<ZeroCountReport> {
    if counts.is_empty() {
        return Err(Error::NoCuspForms(k));
    }
    let family_average =
        counts.iter().map(|c| c.right_box.count as f64).sum::<f64>() / counts.len() as f64;
    let max_deviation = counts
        .iter()
        .map(|c| c.strip.deviation.max(c.right_box.deviation))
        .fold(0.0, f64::max);
    let kf = k as f64;
    Ok(ZeroCountReport {
        k,
        sigma,
        t_max,
        counts,
        family_average,
        smooth_count: smooth_zero_count(k, t_max),
        max_deviation,
        envelope: NOMINAL_THETAS
            .iter()
            .map(|&th| (th, t_max * kf.powf(-th * sigma) * kf.ln()))
            .collect(),
    })
}

/// Enough coefficients for the completed-L series on the strip at moderate
/// heights.
pub fn counting_table(k: u32) -> Result<EigenformTable> {
    hecke_eigenforms(k, 300 + 10 * k as u64)
}

/// Sequential family experiment over a list of weights; weights without
/// cusp forms are skipped.
pub fn density_experiment(kset: &[u32], sigma: f64, t_max: f64) -> Result<Vec<ZeroCountReport>> {
    let mut out = Vec::new();
    for &k in kset {
        let table = match counting_table(k) {
            Ok(t) if t.dim() > 0 => t,
            Ok(_) | Err(Error::NoCuspForms(_)) => continue,
            Err(e) => return Err(e),
        };
        let counts = table
            .forms
            .iter()
            .enumerate()
            .map(|(i, f)| count_form_zeros(f, i, sigma, t_max))
            .collect::<Result<Vec<_>>>()?;
        out.push(zero_count_report(k, sigma, t_max, counts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_zero_box() {
        let bx = BoxSpec::new(0.0, 2.0, 1.5);
        let rho = Complex64::new(1.0, 0.0);
        let v = selberg_box_functional(&ZeroProduct { zeros: vec![rho] }, &bx).unwrap();
        let exact = 4.0 * 1.5 * (PI * 1.0 / 3.0).sinh();
        assert!((v.lhs.unwrap() - exact).abs() < 1e-12);
        assert!((v.rhs - exact).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn zero_free_box() {
        let bx = BoxSpec::new(0.0, 2.0, 1.5);
        let v = selberg_box_functional(&AnalyticOmega(|s: Complex64| Ok(s.exp())), &bx).unwrap();
        assert!(v.rhs.abs() < 1e-6, "{v:?}");
        let v = selberg_box_functional(&ZeroProduct { zeros: vec![] }, &bx).unwrap();
        assert_eq!(v.lhs, Some(0.0));
        assert!(v.rhs.abs() < 1e-12);
    }

    #[test]
    fn lhs_is_additive_and_analytic_mode_agrees() {
        let bx = BoxSpec {
            w0: 0.2,
            w1: 1.8,
            half_height: 2.0,
            center: 0.5,
        };
        let a = Complex64::new(0.7, 1.1);
        let b = Complex64::new(1.3, -0.4);
        let one = |z| selberg_box_functional(&ZeroProduct { zeros: vec![z] }, &bx).unwrap();
        let both = selberg_box_functional(&ZeroProduct { zeros: vec![a, b] }, &bx).unwrap();
        assert!((both.lhs.unwrap() - one(a).lhs.unwrap() - one(b).lhs.unwrap()).abs() < 1e-12);
        assert!((both.lhs.unwrap() - both.rhs).abs() < 1e-6);
        let analytic =
            selberg_box_functional(&AnalyticOmega(|s| Ok((s - a) * (s - b))), &bx).unwrap();
        assert!((analytic.rhs - both.rhs).abs() < 1e-8);
    }

    #[test]
    fn zeros_right_of_the_box_are_rejected() {
        let bx = BoxSpec::new(0.0, 1.0, 1.0);
        let z = ZeroProduct {
            zeros: vec![Complex64::new(1.5, 0.0)],
        };
        assert!(matches!(
            selberg_box_functional(&z, &bx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn random_configurations_satisfy_the_identity() {
        let bx = BoxSpec::new(0.0, 2.0, 1.0);
        for seed in 0..5 {
            let z = random_zero_configuration(seed, &bx, 3);
            let v = selberg_box_functional(&z, &bx).unwrap();
            assert!((v.lhs.unwrap() - v.rhs).abs() < 1e-6, "seed {seed}: {v:?}");
        }
    }

    #[test]
    fn first_zero_of_delta() {
        let table = counting_table(12).unwrap();
        let f = &table.forms[0];
        let below = count_zeros_on_line(f, 9.0).unwrap();
        let above = count_zeros_on_line(f, 9.5).unwrap();
        assert_eq!(below.count, 0);
        assert_eq!(above.count, 2);
        let strip = count_zeros_strip(f, 9.5).unwrap();
        assert_eq!(strip.count, 2, "{strip:?}");
        assert!(strip.deviation < 1e-3);
    }

    #[test]
    fn forced_central_zero_is_on_the_line_only() {
        let table = counting_table(18).unwrap();
        let f = &table.forms[0];
        let line = count_zeros_on_line(f, 2.0).unwrap();
        assert_eq!(line.central, 1);
        let strip = count_zeros_strip(f, 2.0).unwrap();
        assert_eq!(strip.count, line.count);
        assert_eq!(count_zeros_box(f, 0.1, 2.0).unwrap().count, 0);
    }
}
