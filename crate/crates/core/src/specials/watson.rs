use std::f64::consts::PI;

use super::bessel::{bessel_j, bessel_k, bessel_y, taylor_int};
use super::gamma::ln_gamma_real;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Taylor,
    BelowTransition,
    Central,
    AboveTransition,
    Oscillatory,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BesselRegime {
    pub regime: Regime,
    /// sqrt(|x²/k² − 1|)
    pub w: f64,
}

pub fn regime_of(k: u32, x: f64) -> BesselRegime {
    let kf = k as f64;
    let w = ((x / kf).powi(2) - 1.0).abs().sqrt();
    let regime = if x < kf / 10.0 {
        Regime::Taylor
    } else if (x - kf).abs() <= kf.cbrt() {
        Regime::Central
    } else if x < kf {
        Regime::BelowTransition
    } else if x > 2.0 * kf {
        Regime::Oscillatory
    } else {
        Regime::AboveTransition
    };
    BesselRegime { regime, w }
}

fn watson_below(kf: f64, w: f64) -> Result<f64> {
    if w < 1e-12 {
        return Ok(central_limit(kf));
    }
    let z = kf * w.powi(3) / 3.0;
    let expo = kf * (w + w.powi(3) / 3.0 - w.atanh());
    Ok(w / (PI * 3f64.sqrt()) * expo.exp() * bessel_k(1.0 / 3.0, z)?)
}

fn watson_above(kf: f64, w: f64) -> Result<f64> {
    if w < 1e-12 {
        return Ok(central_limit(kf));
    }
    let z = kf * w.powi(3) / 3.0;
    let delta = kf * (w - w.powi(3) / 3.0 - w.atan());
    let j = bessel_j(1.0 / 3.0, z)?;
    let y = bessel_y(1.0 / 3.0, z)?;
    let ph = delta + PI / 6.0;
    Ok(w / 3f64.sqrt() * (j * ph.cos() - y * ph.sin()))
}

/// Value of the uniform formulas at x = k.
fn central_limit(kf: f64) -> f64 {
    ln_gamma_real(1.0 / 3.0).exp() * 6f64.cbrt() / (2.0 * PI * 3f64.sqrt() * kf.cbrt())
}

/// Asymptotic J_k(x) tagged with its regime. Below x = k/10 the ascending
/// series is summed; everywhere else Watson's uniform transition formulas are
/// used, which carry a relative error of roughly 0.12/k.
pub fn watson_eval(k: u32, x: f64) -> Result<(f64, BesselRegime)> {
    let kf = k as f64;
    if k < 20 || !(x > 0.0) || x >= 10.0 * kf {
        return Err(Error::domain(format!(
            "watson_eval needs k >= 20 and 0 < x < 10k; got k={k}, x={x}"
        )));
    }
    let r = regime_of(k, x);
    let v = match r.regime {
        Regime::Taylor => taylor_int(k, x),
        _ if x < kf => watson_below(kf, r.w)?,
        _ => watson_above(kf, r.w)?,
    };
    Ok((v, r))
}

/// e^{kw − k atanh w}/sqrt(2πkw), w = sqrt(1 − x²/k²), for x < k.
pub fn just_below(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    let w = (1.0 - (x / kf).powi(2)).sqrt();
    (kf * (w - w.atanh())).exp() / (2.0 * PI * kf * w).sqrt()
}

/// sqrt(2/πkw) cos(kw − k atan w − π/4), w = sqrt(x²/k² − 1), for x > k.
pub fn just_above(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    let w = ((x / kf).powi(2) - 1.0).sqrt();
    (2.0 / (PI * kf * w)).sqrt() * (kf * w - kf * w.atan() - PI / 4.0).cos()
}

/// d/dx (kw − k atan w) = kw/x, for x > k.
pub fn phase_first_derivative(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    kf * ((x / kf).powi(2) - 1.0).sqrt() / x
}

/// d²/dx² (kw − k atan w) = k²/(x²(x² − k²)^{1/2}), for x > k.
pub fn phase_second_derivative(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    kf * kf / (x * x * (x * x - kf * kf).sqrt())
}
