use lfam_core::arith;
use lfam_core::eigenforms::{hecke_eigenforms, Eigenform};
use lfam_core::lfunction::{
    afe_modulus_sq, completed_lambda, hardy_z, harmonic_weights, l_complex, l_complex_split,
    l_euler, sym2_l1, w_trunc, CriticalPoint, HOLDOUT_PAIRS,
};
use lfam_core::specials::cutoff_h;
use lfam_core::Complex64;
use proptest::prelude::*;

/// Σ λ(n) n^{−s} H(n/X), with λ(n) rebuilt from the local factors
/// (1 − λ(p)p^{−s} + p^{−2s})^{−1} alone.
fn smoothed_dirichlet(f: &Eigenform, s: Complex64, x: f64) -> Complex64 {
    let top = (2.0 * x) as u64;
    let mut lam = vec![1.0; top as usize + 1];
    for p in arith::primes_up_to(top) {
        let lp = f.lambda_p(p).unwrap();
        // Local series Σ_e λ(p^e) X^e of 1/(1 − λ(p)X + X²).
        let mut local = vec![1.0, lp];
        let mut q = p * p;
        while q <= top {
            let e = local.len();
            local.push(lp * local[e - 1] - local[e - 2]);
            q *= p;
        }
        let mut pe = p;
        let mut e = 1;
        while pe <= top {
            for m in (pe..=top).step_by(pe as usize) {
                if (m / pe) % p != 0 {
                    lam[m as usize] *= local[e];
                }
            }
            pe *= p;
            e += 1;
        }
    }
    (1..=top)
        .map(|n| (-s * (n as f64).ln()).exp() * (lam[n as usize] * cutoff_h(n as f64 / x)))
        .sum()
}

#[test]
fn afe_matches_the_euler_product() {
    for k in [12u32, 24] {
        let table = hecke_eigenforms(k, 10_000).unwrap();
        let point = CriticalPoint::new(0.8, 0.7);
        for f in &table.forms {
            let afe = afe_modulus_sq(f, point).unwrap().value;
            let oracle = smoothed_dirichlet(f, point.s(), 4000.0).norm_sqr();
            assert!(
                (afe / oracle - 1.0).abs() < 1e-6,
                "k={k}: {afe} vs {oracle}"
            );
        }
    }
}

#[test]
fn raw_euler_product_is_a_coarse_diagnostic() {
    let table = hecke_eigenforms(12, 10_000).unwrap();
    let f = &table.forms[0];
    let s = Complex64::new(1.3, 0.7);
    let e = l_euler(f, s, 10_000).unwrap();
    let l = l_complex(f, s).unwrap().value;
    assert!(
        (e.value - l).norm() < 10.0 * e.tail_estimate.max(1e-6),
        "{e:?} vs {l}"
    );
}

#[test]
fn afe_matches_the_completed_function() {
    for k in [12u32, 24] {
        let table = hecke_eigenforms(k, 2000).unwrap();
        let point = CriticalPoint::new(0.3, 1.0);
        for f in &table.forms {
            let afe = afe_modulus_sq(f, point).unwrap().value;
            let direct = l_complex(f, point.s()).unwrap().value.norm_sqr();
            assert!(
                (afe / direct - 1.0).abs() < 1e-5,
                "k={k}: {afe} vs {direct}"
            );
        }
    }
}

#[test]
fn functional_equation_on_a_strip_grid() {
    for k in [12u32, 16, 18, 24] {
        let table = hecke_eigenforms(k, 1000).unwrap();
        for f in &table.forms {
            for i in 0..4 {
                for j in 0..5 {
                    let s = Complex64::new(-0.25 + 0.5 * i as f64, -6.0 + 3.0 * j as f64);
                    let v = completed_lambda(f, s).unwrap();
                    assert!(v.relative_residual < 1e-6, "k={k} s={s}: {v:?}");
                }
            }
        }
    }
}

#[test]
fn central_values_vanish_when_the_sign_is_negative() {
    for k in (14..=38).step_by(4) {
        let table = match hecke_eigenforms(k, 1000) {
            Ok(t) if t.dim() > 0 => t,
            _ => continue,
        };
        for f in &table.forms {
            let v = l_complex_split(f, Complex64::new(0.5, 0.0), 1.2)
                .unwrap()
                .value;
            assert!(v.norm() < 1e-8, "k={k}: {v}");
            assert!(hardy_z(f, 0.0).unwrap().abs() < 1e-8);
        }
    }
    // Positive sign: the central value of Δ's L-function is not zero.
    let delta = hecke_eigenforms(12, 200).unwrap();
    let v = l_complex_split(&delta.forms[0], Complex64::new(0.5, 0.0), 1.2)
        .unwrap()
        .value;
    assert!(v.norm() > 0.1);
}

#[test]
fn holdout_residuals_across_weights() {
    for k in [12u32, 16, 20, 24, 28, 32] {
        let mut table = hecke_eigenforms(k, 100).unwrap();
        let fit = harmonic_weights(&mut table, 50).unwrap();
        assert_eq!(fit.holdout.len(), HOLDOUT_PAIRS.len());
        assert!(fit.max_holdout_residual <= 1e-8, "k={k}: {fit:?}");
    }
}

#[test]
fn harmonic_weight_is_the_inverse_symmetric_square_value() {
    // w_f L(1, sym² f) = 2π²/(k−1).
    for k in [12u32, 24, 36] {
        let mut table = hecke_eigenforms(k, 500).unwrap();
        harmonic_weights(&mut table, 50).unwrap();
        for f in &table.forms {
            let l2 = sym2_l1(f).unwrap().value;
            let w = f.harmonic_weight.unwrap();
            let target = 2.0 * std::f64::consts::PI.powi(2) / (k as f64 - 1.0);
            assert!((w * l2 / target - 1.0).abs() < 1e-8, "k={k}");
        }
    }
}

#[test]
fn truncated_symmetric_square_converges_slowly_but_surely() {
    let table = hecke_eigenforms(12, 20_000).unwrap();
    let f = &table.forms[0];
    let target = sym2_l1(f).unwrap().value;
    let far = (w_trunc(f, 20_000.0).unwrap() - target).abs();
    let near = (w_trunc(f, 200.0).unwrap() - target).abs();
    assert!(far < 0.05 * target, "{far}");
    assert!(far < near);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn afe_is_real_and_nonnegative(sigma in 0.15f64..1.0, t in -3.0f64..3.0, pick in 0usize..2) {
        let table = hecke_eigenforms(24, 4000).unwrap();
        let f = &table.forms[pick];
        let v = afe_modulus_sq(f, CriticalPoint::new(sigma, t)).unwrap();
        prop_assert!(v.imag_residue.abs() < 1e-8);
        prop_assert!(v.value >= -1e-12);
    }

    #[test]
    fn value_is_independent_of_the_split(re in -0.5f64..1.5, im in -8.0f64..8.0, split in 0.6f64..1.6) {
        let table = hecke_eigenforms(16, 600).unwrap();
        let f = &table.forms[0];
        let s = Complex64::new(re, im);
        let a = l_complex(f, s).unwrap().value;
        let b = l_complex_split(f, s, split).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-3));
    }
}
