//! Quadrature rules shared by the special-function and verification code.

use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(32))
}

/// Composite 32-point Gauss–Legendre over `panels` equal panels of [a, b].
pub fn gl_composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gl32();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            acc += wi * f(mid + 0.5 * h * xi);
        }
        total += 0.5 * h * acc;
    }
    total
}

/// Complex-valued variant of [`gl_composite`].
pub fn gl_composite_c<F>(mut f: F, a: f64, b: f64, panels: usize) -> num_complex::Complex64
where
    F: FnMut(f64) -> num_complex::Complex64,
{
    let (x, w) = gl32();
    let h = (b - a) / panels as f64;
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            acc += f(mid + 0.5 * h * xi) * *wi;
        }
        total += acc * (0.5 * h);
    }
    total
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += GK_WK[i] * s;
        if i % 2 == 1 {
            g += GK_WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration. Returns the estimate and the
/// summed error estimate of the accepted panels.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut stack = vec![(a, b, 0usize)];
    let (mut total, mut err) = (0.0, 0.0);
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        let share = tol * (hi - lo).abs() / width;
        if e <= share.max(1e-300) || depth >= 40 {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total, err)
}

fn gk15_c<F>(f: &mut F, a: f64, b: f64) -> (num_complex::Complex64, f64)
where
    F: FnMut(f64) -> num_complex::Complex64,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += s * GK_WK[i];
        if i % 2 == 1 {
            g += s * GK_WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// [`adaptive`] for complex integrands; the error is measured in modulus.
/// Panels narrower than `min_width` are accepted as they are.
pub fn adaptive_c<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    min_width: f64,
) -> (num_complex::Complex64, f64)
where
    F: FnMut(f64) -> num_complex::Complex64,
{
    let mut stack = vec![(a, b)];
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi)) = stack.pop() {
        let (v, e) = gk15_c(&mut f, lo, hi);
        let share = tol * (hi - lo).abs() / width;
        if e <= share.max(1e-300) || (hi - lo).abs() < min_width {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    (total, err)
}

/// Tanh–sinh rule on [a, b] for integrands that are smooth inside and flat or
/// mildly singular at the endpoints. `level` halves the step each increment.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, level: u32) -> f64 {
    let h = 2f64.powi(-(level as i32));
    let c = 0.5 * (a + b);
    let r = b - a;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = half_pi * f(c);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let s = half_pi * t.sinh();
        let ch = s.cosh();
        // distance of the node from the nearer endpoint, without cancellation
        let gap = 2.0 / ((2.0 * s).exp() + 1.0);
        let w = half_pi * t.cosh() / (ch * ch);
        if w < 1e-20 || gap < 1e-300 {
            break;
        }
        sum += w * (f(b - 0.5 * r * gap) + f(a + 0.5 * r * gap));
        k += 1;
    }
    sum * h * 0.5 * r
}

/// Trapezoid rule with step `h` over `[-half_width, half_width]`, summing
/// `f` evaluated at `k·h`. Exponentially accurate for analytic integrands that
/// have decayed at the ends.
pub fn trapezoid_symmetric<F>(mut f: F, h: f64, half_width: f64) -> num_complex::Complex64
where
    F: FnMut(f64) -> num_complex::Complex64,
{
    let n = (half_width / h).ceil() as i64;
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for k in -n..=n {
        acc += f(k as f64 * h);
    }
    acc * h
}
