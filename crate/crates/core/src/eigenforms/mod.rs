//! Level-one Hecke eigenforms from exact q-expansions.

mod cache;
mod fixed;
mod hecke;
mod modp;
mod qexp;

pub use cache::{parse_cache, read_cache, render_cache, write_cache, CACHE_VERSION};
pub use hecke::{
    direct_normalized_coefficients, hecke_eigenforms, hecke_eigenforms_with, prime_power,
    EigenOptions, Eigenform, EigenformTable, Precision, TableSource, DEFAULT_LENGTH_BUDGET,
    EIGENVALUE_GAP_TOL,
};
pub use qexp::{
    delta_by_product, dim_cusp_forms, dim_cusp_forms_by_monomials, miller_basis, QExpansion,
};
