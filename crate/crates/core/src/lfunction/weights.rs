//! The smoothing weights W and W̃ of the |L|² formula, as contour integrals
//! along a vertical line.

use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specials::{ln_gamma, mellin_h};

/// Trapezoid step along the contour. The nearest singularity of the
/// integrand (the pole of Ĥ at 0) sits at distance `contour_abscissa`, so the
/// discretisation error is of order e^{−2π·a/h}.
const STEP: f64 = 0.2;
/// Nodes whose integrand falls below this fraction of the largest are dropped.
const NEGLIGIBLE: f64 = 1e-19;
/// Reality check on the weights.
pub(crate) const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    W,
    WTilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfeWeightParams {
    pub k: u32,
    pub sigma: f64,
    pub t: f64,
    pub contour_abscissa: f64,
    /// Upper bound on the number of contour nodes.
    pub quad_points: usize,
}

impl AfeWeightParams {
    pub fn new(k: u32, sigma: f64, t: f64) -> Self {
        AfeWeightParams {
            k,
            sigma,
            t,
            contour_abscissa: 2.0,
            quad_points: 4001,
        }
    }

    /// W̃ is integrated along Re w = a + 2σ: it is multiplied by (4π²ξ)^{2σ},
    /// and its contour sum only falls off like ξ^{−Re w}.
    pub fn tilde_abscissa(&self) -> f64 {
        self.contour_abscissa + 2.0 * self.sigma.max(0.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.contour_abscissa > 0.0) {
            return Err(Error::domain("contour abscissa must be positive"));
        }
        if !(self.sigma.abs() < 2.0) || !self.t.is_finite() {
            return Err(Error::domain(format!(
                "weights need |sigma| < 2 and finite t; got sigma={}, t={}",
                self.sigma, self.t
            )));
        }
        if self.k < 2 || self.k % 2 != 0 {
            return Err(Error::domain(format!(
                "weight must be even, got {}",
                self.k
            )));
        }
        if self.quad_points < 3 {
            return Err(Error::domain("quad_points must be at least 3"));
        }
        Ok(())
    }
}

/// Ĥ(a + i j h) for j ≥ 0, extended on demand. Ĥ(s̄) = conj Ĥ(s) covers j < 0.
fn mellin_h_nodes(a: f64, count: usize) -> Vec<Complex64> {
    type Grid = Mutex<Vec<(u64, Vec<Complex64>)>>;
    static GRIDS: OnceLock<Grid> = OnceLock::new();
    let grids = GRIDS.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = grids.lock().unwrap_or_else(|e| e.into_inner());
    let key = a.to_bits();
    let idx = match guard.iter().position(|(k, _)| *k == key) {
        Some(i) => i,
        None => {
            // Every σ brings its own W̃ line; keep the cache bounded.
            if guard.len() >= 64 {
                guard.remove(0);
            }
            guard.push((key, Vec::new()));
            guard.len() - 1
        }
    };
    let grid = &mut guard[idx].1;
    while grid.len() < count {
        let s = Complex64::new(a, grid.len() as f64 * STEP);
        grid.push(mellin_h(s).expect("contour avoids the pole"));
    }
    grid[..count].to_vec()
}

/// Precomputed contour data for one (k, σ, t).
#[derive(Debug, Clone)]
pub struct AfeKernel {
    pub params: AfeWeightParams,
    w: Side,
    w_tilde: Side,
}

/// Integrand values G(a+iy_j)Ĥ(a+iy_j) for y_j = j·h, j = −J..=J, on one line.
#[derive(Debug, Clone)]
struct Side {
    abscissa: f64,
    values: Vec<Complex64>,
    half: usize,
}

impl Side {
    fn build<R>(a: f64, max_half: usize, ratio: R) -> Result<Side>
    where
        R: Fn(Complex64) -> Complex64,
    {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut peak = 0.0f64;
        let mut j = 0usize;
        let mut chunk = 64usize;
        loop {
            let hat = mellin_h_nodes(a, (j + chunk).min(max_half + 1));
            let mut converged = false;
            while j < hat.len() {
                let y = j as f64 * STEP;
                let fp = ratio(Complex64::new(a, y)) * hat[j];
                let fm = ratio(Complex64::new(a, -y)) * hat[j].conj();
                let size = fp.norm().max(fm.norm());
                peak = peak.max(size);
                plus.push(fp);
                minus.push(fm);
                j += 1;
                if j > 20 && size < NEGLIGIBLE * peak {
                    converged = true;
                    break;
                }
            }
            if converged {
                break;
            }
            if j > max_half {
                let last = plus.last().map(|p| p.norm()).unwrap_or(0.0);
                return Err(Error::Accuracy {
                    achieved: last / peak.max(f64::MIN_POSITIVE),
                    target: NEGLIGIBLE,
                });
            }
            chunk *= 2;
        }
        let half = plus.len() - 1;
        let mut values = Vec::with_capacity(2 * half + 1);
        values.extend(minus[1..].iter().rev());
        values.extend(plus);
        Ok(Side {
            abscissa: a,
            values,
            half,
        })
    }

    fn eval(&self, lx: f64) -> Complex64 {
        let f = &self.values;
        let base = (-self.abscissa * lx).exp();
        // e^{−i y_j lx} by rotation from the centre outwards.
        let step = Complex64::from_polar(1.0, -STEP * lx);
        let mut acc = f[self.half];
        let mut up = Complex64::new(1.0, 0.0);
        let mut down = Complex64::new(1.0, 0.0);
        for j in 1..=self.half {
            up *= step;
            down *= step.conj();
            acc += f[self.half + j] * up + f[self.half - j] * down;
        }
        acc * base * (STEP / (2.0 * PI))
    }
}

impl AfeKernel {
    pub fn new(params: AfeWeightParams) -> Result<Self> {
        params.validate()?;
        let kh = params.k as f64 / 2.0;
        let (sg, t) = (params.sigma, params.t);
        let zp = Complex64::new(sg + kh, t);
        let zm = Complex64::new(sg + kh, -t);
        let yp = Complex64::new(-sg + kh, t);
        let ym = Complex64::new(-sg + kh, -t);
        let den = ln_gamma(zp) + ln_gamma(zm);
        let max_half = (params.quad_points - 1) / 2;
        let w = Side::build(params.contour_abscissa, max_half, |s| {
            (ln_gamma(zp + s) + ln_gamma(zm + s) - den).exp()
        })?;
        let w_tilde = Side::build(params.tilde_abscissa(), max_half, |s| {
            (ln_gamma(yp + s) + ln_gamma(ym + s) - den).exp()
        })?;
        Ok(AfeKernel { params, w, w_tilde })
    }

    /// Number of contour nodes in use, both lines together.
    pub fn nodes(&self) -> usize {
        self.w.values.len() + self.w_tilde.values.len()
    }

    /// The complex value of the contour integral; its imaginary part is the
    /// reality residue.
    pub fn eval(&self, kind: WeightKind, xi: f64) -> Complex64 {
        let lx = (4.0 * PI * PI * xi).ln();
        match kind {
            WeightKind::W => self.w.eval(lx),
            WeightKind::WTilde => self.w_tilde.eval(lx),
        }
    }

    /// Γ(−σ+k/2+it)Γ(−σ+k/2−it)/(Γ(σ+k/2+it)Γ(σ+k/2−it)), the small-ξ limit of W̃.
    pub fn tilde_plateau(&self) -> f64 {
        let kh = self.params.k as f64 / 2.0;
        let (sg, t) = (self.params.sigma, self.params.t);
        let num = ln_gamma(Complex64::new(kh - sg, t)) + ln_gamma(Complex64::new(kh - sg, -t));
        let den = ln_gamma(Complex64::new(kh + sg, t)) + ln_gamma(Complex64::new(kh + sg, -t));
        (num - den).re.exp()
    }
}

/// W(ξ) or W̃(ξ) for one parameter set. Fails if the imaginary residue
/// exceeds 10⁻⁸.
pub fn afe_weight(kind: WeightKind, params: AfeWeightParams, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain(format!("xi must be positive, got {xi}")));
    }
    let kernel = AfeKernel::new(params)?;
    let v = kernel.eval(kind, xi);
    if v.im.abs() > IMAG_TOL {
        return Err(Error::Accuracy {
            achieved: v.im.abs(),
            target: IMAG_TOL,
        });
    }
    Ok(v.re)
}
