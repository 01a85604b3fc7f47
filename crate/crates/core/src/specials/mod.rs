//! Special functions: Γ, ζ, Bessel families, transition-region asymptotics and
//! the smooth cutoff `H`.

mod bessel;
mod cutoff;
mod gamma;
mod watson;
mod zeta;

pub use bessel::{
    avg_abs_j, bessel_j, bessel_j_complex, bessel_j_int, bessel_j_plus, bessel_j_plus_integral,
    bessel_k, bessel_k_plus, bessel_y, BesselMethod,
};
pub use cutoff::{cutoff_h, mellin_h, mellin_h_residue};
pub use gamma::{
    gamma_ratio, gamma_ratio_exact, ln_gamma, ln_gamma_real, regularized_gamma_q, BERNOULLI_2J,
};
pub use watson::{
    just_above, just_below, phase_first_derivative, phase_second_derivative, regime_of,
    watson_eval, BesselRegime, Regime,
};
pub use zeta::zeta;
