//! One function per subcommand. Each returns a JSON-ready report, an
//! optional CSV table and the list of internal checks that failed.

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use lfam_core::eigenforms::Precision;
use lfam_core::lfunction::{
    afe_modulus_sq, harmonic_weights, l_complex, l_euler, AfeTable, HarmonicFit, HOLDOUT_PAIRS,
};
use lfam_core::mollify::{ml_tail_bound, mollified_moment, mollifier_value, MollifiedMoment};
use lfam_core::moments::{moment_report, summarize_scan, ResidualScan};
use lfam_core::sums::{petersson_check, voronoi_check, Bump};
use lfam_core::zeros::{
    count_form_zeros, random_zero_configuration, selberg_box_functional, zero_count_report,
    AnalyticOmega,
};
use lfam_core::{
    Averaging, BoxSpec, Complex64, CriticalPoint, EigenformTable, Error, MollifierSpec,
    MomentReport, Result, ZeroCountReport,
};

use crate::cache::Cache;
use crate::config::{ConfigError, RunConfig};
use crate::output::{Cell, Csv, Failure, Outcome};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    /// 1 for a failed computation, 2 for bad input, 3 for budgets and i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                Error::Domain(_) | Error::Pole { .. } | Error::NoCuspForms(_) => 2,
                Error::Resource(_) | Error::Cache(_) => 3,
                _ => 1,
            },
        }
    }
}

pub struct Ctx {
    pub config: RunConfig,
    pub cache: Cache,
    pool: rayon::ThreadPool,
}

impl Ctx {
    pub fn new(config: RunConfig, cache: Cache) -> std::result::Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| CliError::Io(format!("worker pool: {e}")))?;
        Ok(Ctx {
            config,
            cache,
            pool,
        })
    }

    /// Parallel map that keeps input order; the first error in input order wins.
    fn par_map<T, U, F>(&self, items: &[T], f: F) -> Result<Vec<U>>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Result<U> + Sync + Send,
    {
        let out: Vec<Result<U>> = self.pool.install(|| items.par_iter().map(&f).collect());
        out.into_iter().collect()
    }
}

type CmdResult = std::result::Result<Outcome, CliError>;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute (or load) Hecke eigenvalue tables and store them in the cache.
    Eigen(EigenArgs),
    /// L(1/2+σ+it; f) by the smoothed sum, the completed function or the Euler product.
    Lvalue(LvalueArgs),
    /// Both sides of the Petersson formula with fitted harmonic weights.
    PeterssonCheck(PeterssonArgs),
    /// Both sides of Voronoi summation for a fixed bump.
    VoronoiCheck(VoronoiArgs),
    /// Twisted harmonic second moment against its four main terms.
    Moment(MomentArgs),
    /// Mollified second moment over a σ grid.
    Mollify(MollifyArgs),
    /// Zero counting: the box identity on synthetic data, per-form counts, family densities.
    Zeros(ZerosArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eigen(_) => "eigen",
            Command::Lvalue(_) => "lvalue",
            Command::PeterssonCheck(_) => "petersson-check",
            Command::VoronoiCheck(_) => "voronoi-check",
            Command::Moment(_) => "moment",
            Command::Mollify(_) => "mollify",
            Command::Zeros(_) => "zeros",
        }
    }

    /// Fold command-line grids and budgets into the config.
    pub fn apply(&self, c: &mut RunConfig) {
        fn set<T: Clone>(dst: &mut Vec<T>, src: &[T]) {
            if !src.is_empty() {
                *dst = src.to_vec();
            }
        }
        match self {
            Command::Eigen(a) => {
                set(&mut c.weights, &a.weight);
                if let Some(n) = a.nmax {
                    c.n_max = n;
                }
            }
            Command::Lvalue(a) => {
                set(&mut c.weights, &a.weight);
                set(&mut c.sigmas, &a.sigma);
                set(&mut c.ts, &a.t);
                if let Some(p) = a.p_max {
                    c.p_max = p;
                }
            }
            Command::PeterssonCheck(a) => {
                set(&mut c.weights, &a.weight);
                if let Some(v) = a.c_max {
                    c.c_max = v;
                }
            }
            Command::VoronoiCheck(a) => {
                set(&mut c.ts, &a.t);
                if let Some(n) = a.nmax {
                    c.voronoi_n_max = n;
                }
            }
            Command::Moment(a) => {
                set(&mut c.weights, &a.weight);
                set(&mut c.ells, &a.ell);
                set(&mut c.sigmas, &a.sigma);
                set(&mut c.ts, &a.t);
                if let Some(v) = a.c_max {
                    c.c_max = v;
                }
            }
            Command::Mollify(a) => {
                set(&mut c.weights, &a.weight);
                set(&mut c.sigmas, &a.sigma);
                set(&mut c.ts, &a.t);
                if let Some(m) = a.length {
                    c.length = m;
                }
            }
            Command::Zeros(a) => {
                set(&mut c.weights, &a.weight);
                if let Some(s) = a.sigma {
                    c.sigmas = vec![s];
                }
                if let Some(n) = a.configs {
                    c.synthetic_configs = n;
                }
            }
        }
    }

    pub fn run(&self, ctx: &Ctx) -> CmdResult {
        match self {
            Command::Eigen(a) => eigen(ctx, a),
            Command::Lvalue(a) => lvalue(ctx, a),
            Command::PeterssonCheck(a) => petersson(ctx, a),
            Command::VoronoiCheck(a) => voronoi(ctx, a),
            Command::Moment(_) => moment(ctx),
            Command::Mollify(a) => mollify(ctx, a),
            Command::Zeros(a) => zeros(ctx, a),
        }
    }
}

fn grid(points: &[u32], sigmas: &[f64], ts: &[f64]) -> Vec<(u32, f64, f64)> {
    let mut out = Vec::new();
    for &k in points {
        for &s in sigmas {
            for &t in ts {
                out.push((k, s, t));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    /// Weight(s) k, comma separated.
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// Largest n with λ(n) stored.
    #[arg(long)]
    pub nmax: Option<u64>,
    #[arg(long, value_enum, default_value = "extended")]
    pub precision: PrecisionArg,
}

/// Primes listed per form in the report.
const LISTED_PRIMES: u64 = 97;
const DELIGNE_SLACK: f64 = 1e-9;

#[derive(Serialize)]
struct FormSummary {
    index: usize,
    lambda_2: f64,
    max_abs_lambda_p: f64,
    lambda_p: Vec<(u64, f64)>,
}

#[derive(Serialize)]
struct TableSummary {
    k: u32,
    dim: usize,
    n_max: u64,
    cache_file: String,
    forms: Vec<FormSummary>,
}

fn eigen(ctx: &Ctx, a: &EigenArgs) -> CmdResult {
    let mut cache = ctx.cache.clone();
    if let PrecisionArg::Double = a.precision {
        cache.options.precision = Precision::Double;
    }
    let n = ctx.config.n_max;
    let tables = ctx.par_map(&ctx.config.weights, |&k| cache.table(k, n))?;
    let mut csv = Csv::new(&["k", "form", "p", "lambda_p"]);
    let mut failures = Vec::new();
    let mut report = Vec::new();
    for t in &tables {
        let mut forms = Vec::new();
        for f in &t.forms {
            let primes = f.prime_eigenvalues();
            let max_abs = primes.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max);
            if !(max_abs <= 2.0 + DELIGNE_SLACK) {
                failures.push(Failure::new(
                    "deligne_bound",
                    format!("k={} form={}", t.k, f.index),
                    max_abs,
                    2.0,
                ));
            }
            let listed: Vec<(u64, f64)> = primes
                .into_iter()
                .filter(|&(p, _)| p <= LISTED_PRIMES)
                .collect();
            for &(p, v) in &listed {
                csv.push(vec![t.k.into(), f.index.into(), p.into(), v.into()]);
            }
            forms.push(FormSummary {
                index: f.index,
                lambda_2: f.lambda_p(2)?,
                max_abs_lambda_p: max_abs,
                lambda_p: listed,
            });
        }
        report.push(TableSummary {
            k: t.k,
            dim: t.dim(),
            n_max: t.n_max,
            cache_file: cache.path(t.k, t.n_max).display().to_string(),
            forms,
        });
    }
    Ok(Outcome::new(report, Some(csv), failures))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// |L|² from the smoothed two-sided sum (σ > 0).
    Afe,
    /// L from the completed function with incomplete-gamma weights.
    Complete,
    /// Truncated Euler product (Re s > 1).
    Euler,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Afe => "afe",
            Method::Complete => "complete",
            Method::Euler => "euler",
        }
    }
}

#[derive(Debug, Args)]
pub struct LvalueArgs {
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// Form index in λ(2) order; all forms when omitted.
    #[arg(long)]
    pub form: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value = "complete")]
    pub method: Method,
    /// Prime cutoff for the Euler product.
    #[arg(long)]
    pub p_max: Option<u64>,
}

#[derive(Serialize)]
struct LRow {
    k: u32,
    form: usize,
    sigma: f64,
    t: f64,
    method: Method,
    /// L itself; absent for the smoothed sum, which yields |L|² only.
    value: Option<Complex64>,
    modulus_sq: f64,
    /// Dirichlet terms, largest md², or prime cutoff.
    truncation: u64,
    error_estimate: f64,
}

fn lvalue(ctx: &Ctx, a: &LvalueArgs) -> CmdResult {
    let c = &ctx.config;
    let tuples = grid(&c.weights, &c.sigmas, &c.ts);
    let rows = ctx.par_map(&tuples, |&(k, sigma, t)| {
        let point = CriticalPoint::new(sigma, t);
        let start = match a.method {
            Method::Afe => AfeTable::new(k, point)?.truncation,
            Method::Complete => c.n_max,
            Method::Euler => c.p_max,
        };
        ctx.cache.with_growth(k, start, |table| {
            let picks: Vec<usize> = match a.form {
                Some(i) if i < table.dim() => vec![i],
                Some(i) => {
                    return Err(Error::domain(format!(
                        "form {i} does not exist; weight {k} has {} forms",
                        table.dim()
                    )))
                }
                None => (0..table.dim()).collect(),
            };
            picks
                .into_iter()
                .map(|i| {
                    let f = &table.forms[i];
                    let (value, modulus_sq, truncation, error_estimate) = match a.method {
                        Method::Afe => {
                            let v = afe_modulus_sq(f, point)?;
                            (None, v.value, v.truncation, v.tail_estimate)
                        }
                        Method::Complete => {
                            let v = l_complex(f, point.s())?;
                            (Some(v.value), v.value.norm_sqr(), v.terms, v.error_estimate)
                        }
                        Method::Euler => {
                            let v = l_euler(f, point.s(), c.p_max)?;
                            (Some(v.value), v.value.norm_sqr(), v.p_max, v.tail_estimate)
                        }
                    };
                    Ok(LRow {
                        k,
                        form: i,
                        sigma,
                        t,
                        method: a.method,
                        value,
                        modulus_sq,
                        truncation,
                        error_estimate,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
    })?;
    let rows: Vec<LRow> = rows.into_iter().flatten().collect();
    let mut csv = Csv::new(&[
        "k",
        "form",
        "sigma",
        "t",
        "method",
        "re",
        "im",
        "modulus_sq",
        "truncation",
        "error_estimate",
    ]);
    let mut failures = Vec::new();
    for r in &rows {
        let (re, im): (Cell, Cell) = match r.value {
            Some(v) => (v.re.into(), v.im.into()),
            None => ("".into(), "".into()),
        };
        csv.push(vec![
            r.k.into(),
            r.form.into(),
            r.sigma.into(),
            r.t.into(),
            r.method.as_str().into(),
            re,
            im,
            r.modulus_sq.into(),
            r.truncation.into(),
            r.error_estimate.into(),
        ]);
        if !r.modulus_sq.is_finite() {
            failures.push(Failure::new(
                "finite_value",
                format!("k={} form={} sigma={} t={}", r.k, r.form, r.sigma, r.t),
                r.modulus_sq,
                f64::INFINITY,
            ));
        }
    }
    Ok(Outcome::new(rows, Some(csv), failures))
}

#[derive(Debug, Args)]
pub struct PeterssonArgs {
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// With --n, a single pair; otherwise the held-out pairs.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub c_max: Option<u64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Serialize)]
struct PeterssonInputs {
    k: u32,
    m: u64,
    n: u64,
    c_max: u64,
}

#[derive(Serialize)]
struct TwoSidedRecord<I, V> {
    inputs: I,
    lhs: V,
    rhs: V,
    abs_err: f64,
    rel_err: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct FitSummary {
    k: u32,
    condition: f64,
    fit_residual: f64,
    max_holdout_residual: f64,
}

impl FitSummary {
    fn of(fit: &HarmonicFit) -> Self {
        FitSummary {
            k: fit.k,
            condition: fit.condition,
            fit_residual: fit.fit_residual,
            max_holdout_residual: fit.max_holdout_residual,
        }
    }
}

fn petersson(ctx: &Ctx, a: &PeterssonArgs) -> CmdResult {
    let pairs = match (a.m, a.n) {
        (Some(m), Some(n)) if m > 0 && n > 0 => vec![(m, n)],
        (None, None) => HOLDOUT_PAIRS.to_vec(),
        _ => {
            return Err(CliError::Usage(
                "--m and --n are positive and go together".into(),
            ))
        }
    };
    let c_max = ctx.config.c_max;
    let largest = pairs.iter().map(|&(m, n)| m.max(n)).max().unwrap_or(1);
    let per_weight = ctx.par_map(&ctx.config.weights, |&k| {
        ctx.cache.with_growth(k, largest.max(100), |table| {
            let fit = harmonic_weights(table, c_max)?;
            let records = pairs
                .iter()
                .map(|&(m, n)| {
                    let r = petersson_check(table, m, n, c_max)?;
                    Ok(TwoSidedRecord {
                        inputs: PeterssonInputs { k, m, n, c_max },
                        lhs: r.lhs,
                        rhs: r.rhs,
                        abs_err: r.abs_err,
                        rel_err: r.rel_err,
                        tail_bound: r.tail_bound,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((FitSummary::of(&fit), records))
        })
    })?;
    let mut csv = Csv::new(&[
        "k",
        "m",
        "n",
        "c_max",
        "lhs",
        "rhs",
        "abs_err",
        "rel_err",
        "tail_bound",
    ]);
    let mut failures = Vec::new();
    let mut fits = Vec::new();
    let mut records = Vec::new();
    for (fit, recs) in per_weight {
        fits.push(fit);
        for r in recs {
            let i = &r.inputs;
            csv.push(vec![
                i.k.into(),
                i.m.into(),
                i.n.into(),
                i.c_max.into(),
                r.lhs.into(),
                r.rhs.into(),
                r.abs_err.into(),
                r.rel_err.into(),
                r.tail_bound.into(),
            ]);
            if !(r.abs_err <= a.tol) {
                failures.push(Failure::new(
                    "petersson_identity",
                    format!("k={} m={} n={}", i.k, i.m, i.n),
                    r.abs_err,
                    a.tol,
                ));
            }
            records.push(r);
        }
    }
    #[derive(Serialize)]
    struct Report<R> {
        fits: Vec<FitSummary>,
        records: Vec<R>,
    }
    Ok(Outcome::new(Report { fits, records }, Some(csv), failures))
}

#[derive(Debug, Args)]
pub struct VoronoiArgs {
    /// With --c, a single additive twist a/c; otherwise 1/2, 2/3 and 1/5.
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    /// Dual-sum length.
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Support of the bump.
    #[arg(long, default_value_t = 10.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 100.0)]
    pub x1: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

const DEFAULT_TWISTS: [(u64, u64); 3] = [(1, 2), (2, 3), (1, 5)];

#[derive(Serialize)]
struct VoronoiInputs {
    a: u64,
    c: u64,
    t: f64,
    n_max: u64,
    x0: f64,
    x1: f64,
}

fn voronoi(ctx: &Ctx, a: &VoronoiArgs) -> CmdResult {
    let twists = match (a.a, a.c) {
        (Some(x), Some(c)) => vec![(x, c)],
        (None, None) => DEFAULT_TWISTS.to_vec(),
        _ => return Err(CliError::Usage("--a and --c go together".into())),
    };
    if !(a.x0 > 0.0 && a.x1 > a.x0) {
        return Err(CliError::Usage("the bump needs 0 < x0 < x1".into()));
    }
    let bump = Bump { x0: a.x0, x1: a.x1 };
    let n_max = ctx.config.voronoi_n_max;
    let mut jobs = Vec::new();
    for &(x, c) in &twists {
        for &t in &ctx.config.ts {
            jobs.push((x, c, t));
        }
    }
    let reports = ctx.par_map(&jobs, |&(x, c, t)| voronoi_check(&bump, x, c, t, n_max))?;
    let mut csv = Csv::new(&[
        "a",
        "c",
        "t",
        "n_max",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_err",
        "rel_err",
        "tail_estimate",
    ]);
    let mut failures = Vec::new();
    let mut records = Vec::new();
    for r in reports {
        csv.push(vec![
            r.a.into(),
            r.c.into(),
            r.t.into(),
            r.n_max.into(),
            r.lhs.re.into(),
            r.lhs.im.into(),
            r.rhs.re.into(),
            r.rhs.im.into(),
            r.abs_err.into(),
            r.rel_err.into(),
            r.tail_estimate.into(),
        ]);
        if !(r.rel_err <= a.tol) {
            failures.push(Failure::new(
                "voronoi_identity",
                format!("a={} c={} t={}", r.a, r.c, r.t),
                r.rel_err,
                a.tol,
            ));
        }
        records.push(TwoSidedRecord {
            inputs: VoronoiInputs {
                a: r.a,
                c: r.c,
                t: r.t,
                n_max: r.n_max,
                x0: a.x0,
                x1: a.x1,
            },
            lhs: r.lhs,
            rhs: r.rhs,
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            tail_bound: r.tail_estimate,
        });
    }
    Ok(Outcome::new(records, Some(csv), failures))
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// Twist ℓ.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long)]
    pub c_max: Option<u64>,
}

/// Tolerance on the imaginary part of the empirical moment, relative to max(1, |lhs|).
const REALITY_TOL: f64 = 1e-8;

/// Harmonic table long enough for the |L|² sums at `point`.
fn fitted_table<T>(
    ctx: &Ctx,
    k: u32,
    start: u64,
    mut body: impl FnMut(&EigenformTable) -> Result<T>,
) -> Result<T> {
    let c_max = ctx.config.c_max;
    ctx.cache.with_growth(k, start, |table| {
        harmonic_weights(table, c_max)?;
        body(table)
    })
}

fn moment(ctx: &Ctx) -> CmdResult {
    let c = &ctx.config;
    let tuples = grid(&c.weights, &c.sigmas, &c.ts);
    let per_tuple = ctx.par_map(&tuples, |&(k, sigma, t)| {
        let point = CriticalPoint::new(sigma, t);
        let start = AfeTable::new(k, point)?.truncation.max(16);
        fitted_table(ctx, k, start, |table| {
            c.ells
                .iter()
                .map(|&ell| moment_report(table, ell, point, c.c_max))
                .collect::<Result<Vec<_>>>()
        })
    })?;
    let reports: Vec<MomentReport> = per_tuple.into_iter().flatten().collect();

    let mut header = vec!["k", "ell", "sigma", "t", "lhs"];
    header.extend([
        "mt1re", "mt1im", "mt2re", "mt2im", "mt3re", "mt3im", "mt4re", "mt4im",
    ]);
    header.extend(["residual", "envelope", "ratio"]);
    let mut csv = Csv::new(&header);
    let mut failures = Vec::new();
    for r in &reports {
        let mut row: Vec<Cell> = vec![
            r.k.into(),
            r.ell.into(),
            r.sigma.into(),
            r.t.into(),
            r.lhs.into(),
        ];
        for m in &r.main_terms {
            row.push(m.re.into());
            row.push(m.im.into());
        }
        row.extend([r.residual.into(), r.envelope.into(), r.ratio.into()]);
        csv.push(row);
        let scale = r.lhs.abs().max(1.0);
        if !(r.lhs_imag.abs() <= REALITY_TOL * scale) {
            failures.push(Failure::new(
                "moment_is_real",
                format!("k={} ell={} sigma={} t={}", r.k, r.ell, r.sigma, r.t),
                r.lhs_imag.abs(),
                REALITY_TOL * scale,
            ));
        }
    }

    // One scan per (ℓ, σ, t) cell across the weights, in weight order.
    let mut scans: Vec<ResidualScan> = Vec::new();
    if c.weights.len() >= 2 {
        for &ell in &c.ells {
            for &sigma in &c.sigmas {
                for &t in &c.ts {
                    let cell: Vec<MomentReport> = reports
                        .iter()
                        .filter(|r| r.ell == ell && r.sigma == sigma && r.t == t)
                        .cloned()
                        .collect();
                    scans.push(summarize_scan(&cell)?);
                }
            }
        }
    }
    #[derive(Serialize)]
    struct Report {
        reports: Vec<MomentReport>,
        scans: Vec<ResidualScan>,
    }
    Ok(Outcome::new(Report { reports, scans }, Some(csv), failures))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AveragingArg {
    Harmonic,
    NaturalTruncated,
    NaturalExact,
}

impl AveragingArg {
    fn core(self) -> Averaging {
        match self {
            AveragingArg::Harmonic => Averaging::Harmonic,
            AveragingArg::NaturalTruncated => Averaging::NaturalTruncated,
            AveragingArg::NaturalExact => Averaging::NaturalExact,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            AveragingArg::Harmonic => "harmonic",
            AveragingArg::NaturalTruncated => "natural_truncated",
            AveragingArg::NaturalExact => "natural_exact",
        }
    }
}

#[derive(Debug, Args)]
pub struct MollifyArgs {
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// Mollifier length M.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value = "harmonic")]
    pub averaging: AveragingArg,
    /// Truncation of w_f(x) for the truncated natural average.
    #[arg(long, default_value_t = 1e4)]
    pub x: f64,
}

/// Brute-force range of the |M·L(3/2) − 1| tail bound.
const ML_BRUTE: u64 = 100_000;
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Serialize)]
struct MollifyReport {
    k: u32,
    length: f64,
    averaging: Averaging,
    /// |M·L(3/2) − 1| per form, with the bound it must respect.
    ml_at_three_halves: Vec<f64>,
    ml_tail_bound: f64,
    trend: Vec<MollifiedMoment>,
    sigmas: Vec<f64>,
    ts: Vec<f64>,
}

fn mollify(ctx: &Ctx, a: &MollifyArgs) -> CmdResult {
    let c = &ctx.config;
    let spec = MollifierSpec {
        length: c.length,
        theta: c.theta,
    };
    let averaging = a.averaging.core();
    let x = (a.averaging == AveragingArg::NaturalTruncated).then_some(a.x);
    if let Some(x) = x {
        if !(x >= 1.0 && x.is_finite()) {
            return Err(CliError::Usage("--x must be a finite number >= 1".into()));
        }
    }
    let bound = ml_tail_bound(&spec, 1.5, ML_BRUTE)?;
    let mut points = Vec::new();
    for &t in &c.ts {
        for &s in &c.sigmas {
            points.push(CriticalPoint::new(s, t));
        }
    }
    let start = c.n_max.max(c.length.ceil() as u64);
    let reports = ctx.par_map(&c.weights, |&k| {
        fitted_table(ctx, k, start, |table| {
            let trend = ctx.par_map(&points, |&p| {
                mollified_moment(table, &spec, p, averaging, x)
            })?;
            let at = CriticalPoint::new(1.0, 0.0);
            let ml = table
                .forms
                .iter()
                .map(|f| {
                    let m = mollifier_value(f, &spec, at)?.value;
                    Ok((m * l_complex(f, at.s())?.value - 1.0).norm())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MollifyReport {
                k,
                length: spec.length,
                averaging,
                ml_at_three_halves: ml,
                ml_tail_bound: bound,
                trend,
                sigmas: c.sigmas.clone(),
                ts: c.ts.clone(),
            })
        })
    })?;

    let mut csv = Csv::new(&["k", "sigma", "t", "length", "averaging", "value"]);
    let mut failures = Vec::new();
    for r in &reports {
        for (p, m) in points.iter().zip(&r.trend) {
            csv.push(vec![
                r.k.into(),
                p.sigma.into(),
                p.t.into(),
                r.length.into(),
                a.averaging.as_str().into(),
                m.value.into(),
            ]);
            if !(m.value.is_finite() && m.value >= 0.0) {
                failures.push(Failure::new(
                    "finite_nonnegative",
                    format!("k={} sigma={} t={}", r.k, p.sigma, p.t),
                    m.value,
                    0.0,
                ));
            }
        }
        for (i, e) in r.ml_at_three_halves.iter().enumerate() {
            if !(*e <= bound) {
                failures.push(Failure::new(
                    "ml_tail_bound",
                    format!("k={} form={i}", r.k),
                    *e,
                    bound,
                ));
            }
        }
        if averaging == Averaging::Harmonic {
            // Non-increasing in σ at each t.
            for &t in &c.ts {
                let mut row: Vec<(f64, f64)> = points
                    .iter()
                    .zip(&r.trend)
                    .filter(|(p, _)| p.t == t)
                    .map(|(p, m)| (p.sigma, m.value))
                    .collect();
                row.sort_by(|x, y| x.0.total_cmp(&y.0));
                for w in row.windows(2) {
                    let slack = MONOTONE_SLACK * w[0].1.abs().max(1.0);
                    if w[1].1 > w[0].1 + slack {
                        failures.push(Failure::new(
                            "mollified_moment_non_increasing",
                            format!("k={} t={t} sigma {} -> {}", r.k, w[0].0, w[1].0),
                            w[1].1 - w[0].1,
                            slack,
                        ));
                    }
                }
            }
        }
    }
    Ok(Outcome::new(reports, Some(csv), failures))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZeroMode {
    /// The box identity on random zero configurations.
    SyntheticCheck,
    /// Per-form counts for each weight.
    Count,
    /// Family averages of the box count across weights.
    Density,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, alias = "weights", value_delimiter = ',')]
    pub weight: Vec<u32>,
    /// The box starts at Re s = 1/2 + σ.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Height T.
    #[arg(long = "T", alias = "height", default_value_t = 5.0)]
    pub height: f64,
    #[arg(long, value_enum, default_value = "count")]
    pub mode: ZeroMode,
    /// Number of random configurations in synthetic-check mode.
    #[arg(long)]
    pub configs: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

const WINDING_TOL: f64 = 1e-3;

/// Boxes cycled through by the synthetic check.
fn synthetic_boxes() -> [BoxSpec; 3] {
    [
        BoxSpec::new(0.0, 2.0, 1.5),
        BoxSpec {
            w0: 0.5,
            w1: 1.5,
            half_height: 3.0,
            center: 10.0,
        },
        BoxSpec {
            w0: -1.0,
            w1: 0.6,
            half_height: 0.8,
            center: -2.0,
        },
    ]
}

/// Coefficient length used for counting at weight k.
pub fn counting_length(k: u32) -> u64 {
    300 + 10 * k as u64
}

fn zeros(ctx: &Ctx, a: &ZerosArgs) -> CmdResult {
    match a.mode {
        ZeroMode::SyntheticCheck => synthetic_check(ctx, a),
        ZeroMode::Count | ZeroMode::Density => zero_counts(ctx, a),
    }
}

#[derive(Serialize)]
struct SyntheticRow {
    seed: u64,
    zeros: usize,
    inside: usize,
    lhs: f64,
    rhs: f64,
    abs_err: f64,
}

fn synthetic_check(ctx: &Ctx, a: &ZerosArgs) -> CmdResult {
    let boxes = synthetic_boxes();
    let seeds: Vec<u64> = (0..ctx.config.synthetic_configs as u64)
        .map(|i| ctx.config.seed.wrapping_add(i))
        .collect();
    let rows = ctx.par_map(&seeds, |&seed| {
        let bx = &boxes[(seed % boxes.len() as u64) as usize];
        let z = random_zero_configuration(seed, bx, 1 + (seed % 5) as usize);
        let v = selberg_box_functional(&z, bx)?;
        let lhs = v.lhs.unwrap_or(0.0);
        Ok(SyntheticRow {
            seed,
            zeros: z.zeros.len(),
            inside: z.zeros.iter().filter(|w| bx.contains(**w)).count(),
            lhs,
            rhs: v.rhs,
            abs_err: (lhs - v.rhs).abs(),
        })
    })?;
    // With no zeros at all the left side is an empty sum.
    let free = selberg_box_functional(&AnalyticOmega(|s: Complex64| Ok(s.exp())), &boxes[0])?;
    let mut csv = Csv::new(&["seed", "zeros", "inside", "lhs", "rhs", "abs_err"]);
    let mut failures = Vec::new();
    for r in &rows {
        csv.push(vec![
            r.seed.into(),
            r.zeros.into(),
            r.inside.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.abs_err.into(),
        ]);
        if !(r.abs_err <= a.tol) {
            failures.push(Failure::new(
                "box_identity",
                format!("seed={}", r.seed),
                r.abs_err,
                a.tol,
            ));
        }
    }
    if !(free.rhs.abs() <= a.tol) {
        failures.push(Failure::new(
            "zero_free_box",
            "omega = exp",
            free.rhs.abs(),
            a.tol,
        ));
    }
    #[derive(Serialize)]
    struct Report {
        configurations: Vec<SyntheticRow>,
        max_abs_err: f64,
        zero_free_lhs: f64,
        zero_free_rhs: f64,
    }
    let max_abs_err = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    let report = Report {
        configurations: rows,
        max_abs_err,
        zero_free_lhs: 0.0,
        zero_free_rhs: free.rhs,
    };
    Ok(Outcome::new(report, Some(csv), failures))
}

#[derive(Serialize)]
struct DensityRow {
    k: u32,
    dim: usize,
    family_average: f64,
    smooth_count: f64,
    max_deviation: f64,
    envelope: Vec<(f64, f64)>,
}

fn zero_counts(ctx: &Ctx, a: &ZerosArgs) -> CmdResult {
    let sigma = ctx.config.sigmas[0];
    let t_max = a.height;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(CliError::Usage(format!(
            "--sigma must lie in (0, 1), got {sigma}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "--T must be positive, got {t_max}"
        )));
    }
    let density = a.mode == ZeroMode::Density;
    let tables = ctx.par_map(&ctx.config.weights, |&k| {
        match ctx.cache.table(k, counting_length(k)) {
            Ok(t) => Ok(Some(t)),
            Err(Error::NoCuspForms(_)) if density => Ok(None),
            Err(e) => Err(e),
        }
    })?;
    let skipped: Vec<u32> = ctx
        .config
        .weights
        .iter()
        .zip(&tables)
        .filter(|(_, t)| t.is_none())
        .map(|(k, _)| *k)
        .collect();
    let tables: Vec<EigenformTable> = tables.into_iter().flatten().collect();
    let jobs: Vec<(usize, usize)> = tables
        .iter()
        .enumerate()
        .flat_map(|(i, t)| (0..t.dim()).map(move |j| (i, j)))
        .collect();
    let mut counts = ctx
        .par_map(&jobs, |&(i, j)| {
            count_form_zeros(&tables[i].forms[j], j, sigma, t_max)
        })?
        .into_iter();
    let mut reports: Vec<ZeroCountReport> = Vec::new();
    for t in &tables {
        let these: Vec<_> = counts.by_ref().take(t.dim()).collect();
        reports.push(zero_count_report(t.k, sigma, t_max, these)?);
    }

    let mut csv = Csv::new(&["k", "form", "on_line", "total", "box_count"]);
    let mut failures = Vec::new();
    for r in &reports {
        for c in &r.counts {
            csv.push(vec![
                r.k.into(),
                c.form.into(),
                c.on_line.count.into(),
                c.strip.count.into(),
                c.right_box.count.into(),
            ]);
            if c.off_line < 0 {
                failures.push(Failure::new(
                    "on_line_within_total",
                    format!("k={} form={}", r.k, c.form),
                    c.off_line as f64,
                    0.0,
                ));
            }
        }
        if !(r.max_deviation <= WINDING_TOL) {
            failures.push(Failure::new(
                "integral_winding",
                format!("k={}", r.k),
                r.max_deviation,
                WINDING_TOL,
            ));
        }
    }
    let outcome = if density {
        let rows: Vec<DensityRow> = reports
            .iter()
            .map(|r| DensityRow {
                k: r.k,
                dim: r.counts.len(),
                family_average: r.family_average,
                smooth_count: r.smooth_count,
                max_deviation: r.max_deviation,
                envelope: r.envelope.clone(),
            })
            .collect();
        #[derive(Serialize)]
        struct Summary {
            sigma: f64,
            t_max: f64,
            weights: Vec<DensityRow>,
            skipped_weights: Vec<u32>,
        }
        Outcome::new(
            Summary {
                sigma,
                t_max,
                weights: rows,
                skipped_weights: skipped,
            },
            Some(csv),
            failures,
        )
    } else {
        Outcome::new(reports, Some(csv), failures)
    };
    Ok(outcome)
}
