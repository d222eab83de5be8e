//! Append-only on-disk cache of word counts.
//!
//! One JSON object per line:
//! `{"d":2,"beta":[12,1],"mode":"plus","n":8,"m":0,"count":"256"}`.
//! Counts are decimal strings so no integer width is lost. The file has a
//! single writer; readers tolerate duplicate records (the last one wins,
//! and duplicates always agree).

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::{fill_table, Budget, CountTable};
use crate::spec::{LanguageSpec, Mode};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "POWERFREE_CACHE_DIR";

const FILE_NAME: &str = "counts.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub d: usize,
    pub beta: [u64; 2],
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub count: String,
}

impl CountRecord {
    fn spec(&self) -> Result<LanguageSpec> {
        LanguageSpec::new(self.d, self.beta[0], self.beta[1], self.mode)
    }
}

#[derive(Clone, Debug)]
pub struct CountCache {
    path: PathBuf,
}

/// Per-spec summary for `cache inspect`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheSummary {
    pub spec: LanguageSpec,
    pub records: usize,
    pub max_n: usize,
    pub max_m: usize,
}

impl CountCache {
    /// Cache stored as `counts.jsonl` inside `dir` (created if missing).
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(CountCache {
            path: dir.as_ref().join(FILE_NAME),
        })
    }

    /// Cache directory from [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) => Self::open(dir).map(Some),
            None => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn records(&self) -> Result<Vec<CountRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line)?);
        }
        Ok(out)
    }

    /// Cached counts for `spec`, keyed by `(n, m)`.
    pub fn load(&self, spec: &LanguageSpec) -> Result<BTreeMap<(usize, usize), BigUint>> {
        let mut out = BTreeMap::new();
        for r in self.records()? {
            if r.spec()? != *spec {
                continue;
            }
            let count: BigUint = r
                .count
                .parse()
                .map_err(|_| Error::BadInput(format!("bad cached count {:?}", r.count)))?;
            out.insert((r.n, r.m), count);
        }
        Ok(out)
    }

    /// Appends every entry of `table` not already cached.
    pub fn store(&self, table: &CountTable) -> Result<usize> {
        let known = self.load(table.spec())?;
        let (num, den) = table.spec().beta_parts();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut written = 0;
        for ((n, m), count) in table.entries() {
            if known.contains_key(&(n, m)) {
                continue;
            }
            let rec = CountRecord {
                d: table.spec().d(),
                beta: [num, den],
                mode: table.spec().mode(),
                n,
                m,
                count: count.to_string(),
            };
            writeln!(file, "{}", serde_json::to_string(&rec)?)?;
            written += 1;
        }
        Ok(written)
    }

    pub fn summary(&self) -> Result<Vec<CacheSummary>> {
        let mut by_spec: BTreeMap<(usize, u64, u64, Mode), CacheSummary> = BTreeMap::new();
        for r in self.records()? {
            let spec = r.spec()?;
            let (p, q) = spec.beta_parts();
            let e = by_spec
                .entry((spec.d(), p, q, spec.mode()))
                .or_insert(CacheSummary {
                    spec,
                    records: 0,
                    max_n: 0,
                    max_m: 0,
                });
            e.records += 1;
            e.max_n = e.max_n.max(r.n);
            e.max_m = e.max_m.max(r.m);
        }
        Ok(by_spec.into_values().collect())
    }

    /// Rewrites the file without duplicate records, sorted by key.
    /// Returns the number of records kept.
    pub fn compact(&self) -> Result<usize> {
        let mut unique: BTreeMap<(usize, u64, u64, Mode, usize, usize), CountRecord> =
            BTreeMap::new();
        for r in self.records()? {
            let spec = r.spec()?;
            let (p, q) = spec.beta_parts();
            unique.insert((spec.d(), p, q, spec.mode(), r.n, r.m), r);
        }
        let tmp = self.path.with_extension("jsonl.tmp");
        {
            let mut f = File::create(&tmp)?;
            for r in unique.values() {
                writeln!(f, "{}", serde_json::to_string(r)?)?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(unique.len())
    }
}

/// Like [`count_table`](crate::language::count_table), reusing and
/// extending the cache.
pub fn count_table_cached(
    spec: LanguageSpec,
    n_max: usize,
    m_max: usize,
    budget: Budget,
    cache: &CountCache,
) -> Result<CountTable> {
    let mut table = CountTable::new(spec, n_max, m_max);
    for ((n, m), c) in cache.load(&spec)? {
        if n <= n_max && m <= m_max {
            table.insert(n, m, c);
        }
    }
    match fill_table(table, budget) {
        Ok(t) => {
            cache.store(&t)?;
            Ok(t)
        }
        Err(Error::BudgetExceeded { budget, partial }) => {
            cache.store(&partial)?;
            Err(Error::BudgetExceeded { budget, partial })
        }
        Err(e) => Err(e),
    }
}
