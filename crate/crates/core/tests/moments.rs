use lfam_core::lfunction::CriticalPoint;
use lfam_core::moments::{
    moment_report, prepared_table, residual_scan, twisted_moment_empirical, twisted_moment_main,
};
use lfam_core::specials::zeta;
use lfam_core::Complex64;

const WEIGHTS: [u32; 8] = [12, 16, 20, 24, 28, 32, 36, 40];

#[test]
fn residuals_stay_within_one_envelope_constant() {
    let mut improved = 0;
    for ell in [1u64, 2] {
        for sigma in [0.2, 0.25] {
            let scan = residual_scan(&WEIGHTS, ell, CriticalPoint::new(sigma, 1.0), 50).unwrap();
            assert_eq!(scan.rows.len(), WEIGHTS.len());
            // A constant fitted on the lower half of the weights covers the upper half.
            assert!(
                scan.fitted_constant <= 2.0 * scan.constant_from_low_weights,
                "ell={ell} sigma={sigma}: {scan:?}"
            );
            if scan.last_below_first {
                improved += 1;
            }
        }
    }
    assert!(improved >= 3);
}

#[test]
fn large_sigma_is_dominated_by_the_first_term() {
    let point = CriticalPoint::new(0.8, 1.0);
    let table = prepared_table(40, point, 50).unwrap();
    let r = moment_report(&table, 1, point, 50).unwrap();
    let lead = zeta(Complex64::new(2.6, 0.0)).unwrap().re;
    assert!((lead - 1.305).abs() < 1e-3);
    assert!((r.lhs - lead).abs() < 0.05, "{r:?}");
    // The lower-order terms move the prediction toward the empirical value.
    assert!(r.residual < (r.lhs - lead).abs(), "{r:?}");
}

#[test]
fn reports_are_real() {
    let point = CriticalPoint::new(0.2, 1.0);
    let table = prepared_table(12, point, 50).unwrap();
    let emp = twisted_moment_empirical(&table, 2, point).unwrap();
    assert!(emp.imag_residue.abs() <= 1e-8);
    let main = twisted_moment_main(40, 2, point).unwrap();
    assert!(main.sum.im.abs() <= 1e-12);
    assert_eq!(main.terms[2], main.terms[3].conj());
}

#[test]
fn untwisted_moment_uses_unit_divisor_values() {
    let point = CriticalPoint::new(0.3, 1.0);
    let m = twisted_moment_main(24, 1, point).unwrap();
    let first = zeta(Complex64::new(1.6, 0.0)).unwrap();
    assert!((m.terms[0] - first).norm() < 1e-14);
    assert!(twisted_moment_main(24, 1, CriticalPoint::new(0.3, 0.0)).is_err());
}
