use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("weight {0} has no cusp forms")]
    NoCuspForms(u32),

    #[error("missing eigenvalue for prime {0}")]
    MissingEigenvalue(u64),

    #[error("degenerate T_2 spectrum: eigenvalue gap {gap:e} below tolerance")]
    DegenerateSpectrum { gap: f64 },

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("accuracy target missed: achieved {achieved:e}, wanted {target:e}")]
    Accuracy { achieved: f64, target: f64 },

    #[error("ill-conditioned fit (condition number {cond:e}); add more (m, n) pairs")]
    IllConditioned { cond: f64 },

    #[error("missing dependency: {0}")]
    Dependency(String),

    #[error("argument-principle refinement failed: winding {winding} is not an integer")]
    Refinement { winding: f64 },

    #[error("boundary quadrature failed near {at}: a zero sits on or near the box edge; perturb the box")]
    BoundaryZero { at: String },

    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
