//! Level-one Hecke eigenforms and their L-functions near the critical point.
//!
//! The crate is organised bottom-up:
//!
//! - [`specials`]: ζ, Γ-ratios, Bessel functions (integer, real and imaginary
//!   order), Watson's transition-region formulas, and the fixed cutoff `H`.
//! - [`eigenforms`]: exact integer q-expansions and the Hecke eigenbasis `H_k`.
//! - [`sums`]: Kloosterman and Ramanujan sums, `τ_ν`, and the Petersson and
//!   Voronoi two-sided checks.
//! - [`lfunction`]: `L(s; f)` through the smoothed `|L|²` formula and through the
//!   completed function, `L(1, sym² f)`, and harmonic weights.
//! - [`moments`]: the harmonic twisted second moment against its four main terms.
//! - [`mollify`]: the cutoff `F`, inverse coefficients, the mollifier and
//!   mollified moments, and local Euler-factor checks.
//! - [`zeros`]: the box functional of the argument principle, zero counting and
//!   the family zero-density experiment.
//!
//! Nothing in here spawns threads. Callers parallelise over forms, weights or
//! configurations; every reduction inside the crate runs in a fixed order.

pub mod arith;
pub mod eigenforms;
pub mod error;
pub mod lfunction;
pub mod mollify;
pub mod moments;
pub mod quad;
pub mod specials;
pub mod sums;
pub mod zeros;

pub use error::{Error, Result};

pub use eigenforms::{Eigenform, EigenformTable, QExpansion, TableSource};
pub use lfunction::CriticalPoint;
pub use mollify::{Averaging, MollifierSpec};
pub use moments::MomentReport;
pub use num_complex::Complex64;
pub use zeros::{BoxSpec, ZeroCountReport};
