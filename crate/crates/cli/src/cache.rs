//! On-disk eigenvalue tables keyed by (k, n_max).

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use lfam_core::eigenforms::{
    hecke_eigenforms_with, parse_cache, render_cache, EigenOptions, Precision,
};
use lfam_core::{EigenformTable, Error, Result};

pub const CACHE_ENV: &str = "LFAM_CACHE_DIR";
const DEFAULT_DIR: &str = ".lfam-cache";

/// Flag, then environment, then config file, then `./.lfam-cache`.
pub fn resolve_dir(flag: Option<&Path>, config: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    config
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))
}

#[derive(Debug, Clone)]
pub struct Cache {
    pub dir: PathBuf,
    pub options: EigenOptions,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: PathBuf, length_budget: u64) -> Self {
        Cache {
            dir,
            options: EigenOptions {
                length_budget,
                ..EigenOptions::default()
            },
        }
    }

    pub fn path(&self, k: u32, n_max: u64) -> PathBuf {
        let tag = match self.options.precision {
            Precision::Double => "_double",
            Precision::Extended { .. } => "",
        };
        self.dir.join(format!("k{k}_n{n_max}{tag}.lfam"))
    }

    /// Load the table, or compute and store it. An unreadable or
    /// out-of-version file is regenerated with a notice on stderr.
    pub fn table(&self, k: u32, n_max: u64) -> Result<EigenformTable> {
        let path = self.path(k, n_max);
        if let Ok(text) = std::fs::read_to_string(&path) {
            match parse_cache(&text) {
                Ok(t) if t.k == k && t.n_max == n_max => return Ok(t),
                Ok(_) => eprintln!(
                    "notice: cache file {} holds a different table; regenerating",
                    path.display()
                ),
                Err(e) => eprintln!(
                    "notice: cache file {} unusable ({e}); regenerating",
                    path.display()
                ),
            }
        }
        let table = hecke_eigenforms_with(k, n_max, &self.options)?;
        self.store(&table, &path)?;
        Ok(table)
    }

    /// Write through a temporary file and rename, so concurrent workers never
    /// see a partial table.
    fn store(&self, table: &EigenformTable, path: &Path) -> Result<()> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| Error::Cache(format!("{}: {e}", self.dir.display())))?;
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp{}_{n}", std::process::id()));
        std::fs::write(&tmp, render_cache(table))
            .and_then(|_| std::fs::rename(&tmp, path))
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    /// Run `f` on a table, doubling n_max whenever it asks for an eigenvalue
    /// past the end, up to the length budget.
    pub fn with_growth<T>(
        &self,
        k: u32,
        n_start: u64,
        mut f: impl FnMut(&mut EigenformTable) -> Result<T>,
    ) -> Result<T> {
        let budget = self.options.length_budget;
        let mut n = n_start.max(2);
        loop {
            let mut table = self.table(k, n)?;
            match f(&mut table) {
                Err(Error::MissingEigenvalue(p)) => {
                    let next = (2 * n).max(p);
                    if n >= budget {
                        return Err(Error::Resource(format!(
                            "weight {k} needs lambda({p}), past the length budget {budget}"
                        )));
                    }
                    n = next.min(budget);
                }
                other => return other,
            }
        }
    }
}
