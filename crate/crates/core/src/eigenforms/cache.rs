//! Text cache for eigenvalue tables.
//!
//! Layout: a header line `k,dim,n_max,version`, then one row
//! `form_index,p,lambda_p` per stored eigenvalue, λ printed with 17
//! significant digits. Each form also gets a `form_index,1,1` row so that a
//! reader can confirm the normalisation.

use std::fmt::Write as _;
use std::path::Path;

use super::hecke::{Eigenform, EigenformTable, TableSource};
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;

pub fn render_cache(table: &EigenformTable) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{},{},{},{}",
        table.k,
        table.dim(),
        table.n_max,
        CACHE_VERSION
    );
    for f in &table.forms {
        let _ = writeln!(s, "{},1,{:.16e}", f.index, 1.0);
        for (p, v) in f.prime_eigenvalues() {
            let _ = writeln!(s, "{},{},{:.16e}", f.index, p, v);
        }
    }
    s
}

pub fn write_cache(table: &EigenformTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    }
    std::fs::write(path, render_cache(table)).map_err(|e| Error::Cache(e.to_string()))
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Cache(format!("line {line}: {msg}"))
}

pub fn parse_cache(text: &str) -> Result<EigenformTable> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let h: Vec<&str> = header.split(',').collect();
    if h.len() != 4 {
        return Err(parse_err(1, "header must be k,dim,n_max,version"));
    }
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| parse_err(1, "bad header field"))
    };
    let (k, dim, n_max, version) = (
        num(h[0])? as u32,
        num(h[1])? as usize,
        num(h[2])?,
        num(h[3])?,
    );
    if version != CACHE_VERSION as u64 {
        return Err(Error::Cache(format!(
            "version {version} does not match {CACHE_VERSION}"
        )));
    }
    let mut per_form: Vec<Vec<(u64, f64)>> = vec![Vec::new(); dim];
    let mut unit_seen = vec![false; dim];
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(parse_err(i + 1, "expected form_index,p,lambda_p"));
        }
        let idx: usize = f[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(i + 1, "bad index"))?;
        let p: u64 = f[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(i + 1, "bad prime"))?;
        let v: f64 = f[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(i + 1, "bad value"))?;
        if idx >= dim {
            return Err(parse_err(i + 1, "form index out of range"));
        }
        if p == 1 {
            if v != 1.0 {
                return Err(parse_err(i + 1, "lambda(1) must be 1"));
            }
            unit_seen[idx] = true;
            continue;
        }
        if !(v.abs() <= 2.0) {
            return Err(parse_err(i + 1, "eigenvalue violates |lambda(p)| <= 2"));
        }
        per_form[idx].push((p, v));
    }
    if let Some(j) = unit_seen.iter().position(|s| !s) {
        return Err(Error::Cache(format!("form {j} lacks its lambda(1) row")));
    }
    let forms = per_form
        .iter()
        .enumerate()
        .map(|(j, lp)| Eigenform::from_primes(k, j, n_max, lp, 17))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenformTable {
        k,
        forms,
        n_max,
        source: TableSource::Cache,
    })
}

pub fn read_cache(path: &Path) -> Result<EigenformTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Cache(e.to_string()))?;
    parse_cache(&text)
}
