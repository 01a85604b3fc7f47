use std::f64::consts::PI;

use lfam_core::arith;
use lfam_core::eigenforms::hecke_eigenforms;
use lfam_core::lfunction::{harmonic_weights, l_complex, sym2_l1, w_trunc, CriticalPoint};
use lfam_core::mollify::{
    cutoff_f, divisor_lemma, inverse_coeffs, laurent_bound, laurent_coefficients, local_factors,
    local_factors_with_cos, mellin_f, mellin_f_quadrature, mellin_f_residue, ml_tail_bound,
    mollified_moment, mollifier_value, Averaging, MollifierSpec,
};
use lfam_core::Complex64;
use proptest::prelude::*;

#[test]
fn harmonic_mollified_moment_falls_with_sigma() {
    let mut table = hecke_eigenforms(24, 200).unwrap();
    harmonic_weights(&mut table, 50).unwrap();
    let spec = MollifierSpec::new(50.0);
    let values: Vec<f64> = [0.1, 0.3, 0.5, 0.8, 1.0]
        .iter()
        .map(|&s| {
            let m = mollified_moment(
                &table,
                &spec,
                CriticalPoint::new(s, 1.0),
                Averaging::Harmonic,
                None,
            )
            .unwrap();
            assert!(m.per_form.iter().all(|v| v.is_finite() && *v >= 0.0));
            m.value
        })
        .collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0], "{values:?}");
    }
    // Mollification pulls the moment toward 1; the plain moment is larger.
    let plain = mollified_moment(
        &table,
        &MollifierSpec::new(1.0),
        CriticalPoint::new(0.1, 1.0),
        Averaging::Harmonic,
        None,
    )
    .unwrap();
    assert!(plain.value > values[0]);
    assert!((values[4] - 1.0).abs() < 0.1);
}

#[test]
fn mollifier_times_l_at_three_halves() {
    let table = hecke_eigenforms(12, 20_000).unwrap();
    let f = &table.forms[0];
    let point = CriticalPoint::new(1.0, 0.0);
    let l = l_complex(f, point.s()).unwrap().value;
    let mut last = f64::INFINITY;
    for m in [10.0, 100.0, 1000.0] {
        let spec = MollifierSpec::new(m);
        let v = mollifier_value(f, &spec, point).unwrap();
        assert!(v.difference < 1e-12);
        let err = (v.value * l - 1.0).norm();
        let bound = ml_tail_bound(&spec, 1.5, 1_000_000).unwrap();
        assert!(err <= bound, "M={m}: {err} vs {bound}");
        assert!(err < last, "M={m}");
        last = err;
    }
}

#[test]
fn truncated_natural_average_tracks_the_exact_one() {
    let mut table = hecke_eigenforms(12, 10_000).unwrap();
    harmonic_weights(&mut table, 50).unwrap();
    let spec = MollifierSpec::new(50.0);
    let point = CriticalPoint::new(0.2, 1.0);
    let exact = mollified_moment(&table, &spec, point, Averaging::NaturalExact, None).unwrap();
    let zeta2 = PI * PI / 6.0;
    // w_f(x) converges with oscillation, so the gap is not monotone in x.
    let mut last = f64::INFINITY;
    for x in [1e2, 1e3, 1e4] {
        let trunc =
            mollified_moment(&table, &spec, point, Averaging::NaturalTruncated, Some(x)).unwrap();
        // Scale of the discrepancy: the w_f(x) tail weighted like the average itself.
        let mut scale = 0.0;
        for (f, v) in table.forms.iter().zip(&trunc.per_form) {
            let gap = (w_trunc(f, x).unwrap() - sym2_l1(f).unwrap().value).abs();
            scale += f.harmonic_weight.unwrap() * gap * v / zeta2;
        }
        scale /= trunc.dimension_factor;
        let diff = (trunc.value / trunc.dimension_factor - exact.value).abs();
        assert!(
            diff <= scale * (1.0 + 1e-9) + 1e-12,
            "x={x}: {diff} vs {scale}"
        );
        last = diff;
    }
    assert!(last < 0.01 * exact.value);
}

#[test]
fn mellin_transform_of_the_cutoff() {
    for m in [10.0, 100.0] {
        let spec = MollifierSpec::new(m);
        for i in 0..30 {
            let s = Complex64::new(-0.5 + 2.5 * i as f64 / 29.0, 0.25 + 0.41 * i as f64);
            let a = mellin_f(&spec, s).unwrap();
            let b = mellin_f_quadrature(&spec, s).unwrap();
            assert!((a - b).norm() <= 1e-8 * a.norm(), "M={m} s={s}");
        }
        assert!((mellin_f_residue(&spec, 0.3).unwrap() - 1.0).norm() < 1e-6);
        assert_eq!(cutoff_f(&spec, m.sqrt()), 1.0);
        assert!(cutoff_f(&spec, m).abs() < 1e-15);
    }
    assert!(mellin_f(&MollifierSpec::new(10.0), Complex64::new(0.0, 0.0)).is_err());
}

#[test]
fn laurent_coefficients_against_the_stated_bound() {
    // The bound with constant one fails already at n = 0; it holds with 24.
    let spec = MollifierSpec::new(100.0);
    let c = laurent_coefficients(&spec, 5, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    for (n, cn) in c.iter().enumerate() {
        worst = worst.max(cn.abs() / laurent_bound(&spec, n).unwrap());
    }
    assert!(worst > 1.0 && worst <= 24.0, "{worst}");
}

#[test]
fn inverse_coefficients_on_cube_free_support() {
    let table = hecke_eigenforms(16, 1000).unwrap();
    let f = &table.forms[0];
    let a = inverse_coeffs(f, 1000).unwrap();
    for n in 1..=1000u64 {
        let fac = arith::factorize(n);
        let expect: f64 = fac
            .iter()
            .map(|&(p, e)| match e {
                1 => -f.lambda_p(p).unwrap(),
                2 => 1.0,
                _ => 0.0,
            })
            .product();
        assert!((a.get(n) - expect).abs() < 1e-14, "n={n}");
    }
}

/// τ_γ(n) for n = m·d² from the prime-power values Σ_j p^{γ(2j−e)}.
fn tau_gamma(fac: &[(u64, u32)], gamma: Complex64) -> Complex64 {
    fac.iter()
        .map(|&(p, e)| {
            let lp = (p as f64).ln();
            (0..=e)
                .map(|j| (gamma * lp * (2.0 * j as f64 - e as f64)).exp())
                .sum::<Complex64>()
        })
        .product()
}

/// Σ_{lo ≤ d ≤ hi} τ_γ(m d²) d^{−s} by brute force.
fn divisor_sum_brute(m: u64, gamma: Complex64, s: f64, lo: u64, hi: u64) -> Complex64 {
    let spf = arith::smallest_prime_factors(hi as usize);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in lo..=hi {
        let mut fac = arith::factorize_with(&spf, d as usize);
        for f in fac.iter_mut() {
            f.1 *= 2;
        }
        for (p, e) in arith::factorize(m) {
            match fac.iter_mut().find(|f| f.0 == p) {
                Some(f) => f.1 += e,
                None => fac.push((p, e)),
            }
        }
        acc += tau_gamma(&fac, gamma) * (d as f64).powf(-s);
    }
    acc
}

#[test]
fn divisor_lemma_against_brute_force() {
    let g = Complex64::new(0.0, 0.3);
    // At s = 3 the brute-force tail beyond 10⁵ is negligible.
    let closed = divisor_lemma(2, 3, g, Complex64::new(3.0, 0.0)).unwrap();
    let brute = divisor_sum_brute(6, g, 3.0, 1, 100_000);
    assert!((closed - brute).norm() < 1e-8, "{closed} vs {brute}");
    // At s = 3/2 the tail decays like D^{−1/2}; the next decade measures it.
    let closed = divisor_lemma(2, 3, g, Complex64::new(1.5, 0.0)).unwrap();
    let head = divisor_sum_brute(6, g, 1.5, 1, 100_000);
    let decade = divisor_sum_brute(6, g, 1.5, 100_001, 1_000_000);
    let r = 10f64.powf(-0.5);
    let tail_estimate = 2.0 * decade.norm() / (1.0 - r);
    assert!(
        (closed - head).norm() <= tail_estimate,
        "{closed} vs {head}"
    );
    assert!((closed - head - decade).norm() < (closed - head).norm());
}

#[test]
fn local_factor_at_two_matches_the_quoted_value() {
    let v = local_factors_with_cos(2, 0.0, 2.0);
    assert!((v.b - 0.135).abs() <= 5e-4, "{v:?}");
    // t = 0 also gives cosine sum 2.
    assert!((local_factors(2, 0.0, 0.0).b - v.b).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_factor_b_is_nonnegative(idx in 0usize..168, sigma in 0.0f64..0.25, t in -10.0f64..10.0) {
        let p = arith::primes_up_to(1000)[idx];
        prop_assert!(local_factors(p, sigma, t).b >= 0.0);
    }

    #[test]
    fn mollifier_is_conjugation_symmetric(sigma in 0.05f64..1.0, t in 0.1f64..5.0, m in 2.0f64..80.0) {
        let table = hecke_eigenforms(20, 100).unwrap();
        let f = &table.forms[0];
        let spec = MollifierSpec::new(m);
        let a = mollifier_value(f, &spec, CriticalPoint::new(sigma, t)).unwrap();
        let b = mollifier_value(f, &spec, CriticalPoint::new(sigma, -t)).unwrap();
        prop_assert!((a.value - b.value.conj()).norm() < 1e-12);
        prop_assert!(a.difference < 1e-12);
    }
}
