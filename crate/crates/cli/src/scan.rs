//! Resumable prime scan over `3 <= p <= p_max`, `1 <= k <= k_max`.
//!
//! Workers claim primes from a shared counter; the calling thread is the only
//! writer of the checkpoint and merges results by base, so the final record
//! set does not depend on the worker count or on how often the scan was
//! interrupted.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use gw_core::arith::primes_in;
use gw_core::sums::classify_all;
use gw_core::{Classification, CongruenceRecord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParams {
    pub p_max: u64,
    pub k_max: u32,
    pub precision: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub schema_version: u32,
    pub parameters: ScanParams,
    /// Ascending.
    pub completed_bases: Vec<u64>,
    /// Every record of every completed base, ordered by `(base, k)`.
    pub records: Vec<CongruenceRecord>,
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan parameters: {0}")]
    InvalidParams(String),
    #[error("corrupt checkpoint {path}: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },
    #[error("checkpoint {path} was written for {found:?}, refusing to resume with {requested:?}")]
    ParameterMismatch { path: PathBuf, found: ScanParams, requested: ScanParams },
    #[error("checkpoint i/o on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] gw_core::Error),
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Process at most this many of the remaining primes in this run.
    pub stop_after: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    /// All records of completed primes, ordered by `(k, base)`.
    pub records: Vec<CongruenceRecord>,
    pub completed_bases: Vec<u64>,
    pub complete: bool,
}

impl ScanOutcome {
    /// Records that are not `Expected`.
    pub fn anomalies(&self) -> Vec<CongruenceRecord> {
        self.records.iter().filter(|r| r.classification != Classification::Expected).copied().collect()
    }
}

/// Primes covered by a scan; `p = 2` has an empty sum and is skipped.
pub fn scan_primes(p_max: u64) -> Vec<u64> {
    primes_in(3, p_max)
}

impl ScanCheckpoint {
    pub fn load(path: &Path) -> Result<Self, ScanError> {
        let text = fs::read_to_string(path).map_err(|source| ScanError::Io { path: path.into(), source })?;
        let cp: ScanCheckpoint = serde_json::from_str(&text)
            .map_err(|e| ScanError::CorruptCheckpoint { path: path.into(), reason: e.to_string() })?;
        cp.validate().map_err(|reason| ScanError::CorruptCheckpoint { path: path.into(), reason })?;
        Ok(cp)
    }

    fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {}", self.schema_version));
        }
        if !self.completed_bases.windows(2).all(|w| w[0] < w[1]) {
            return Err("completed_bases is not strictly ascending".into());
        }
        let k_max = self.parameters.k_max as usize;
        if self.records.len() != self.completed_bases.len() * k_max {
            return Err("record count does not match completed bases".into());
        }
        let expected = self.completed_bases.iter().flat_map(|&b| (1..=self.parameters.k_max).map(move |k| (b, k)));
        if !self.records.iter().map(|r| (r.base, r.k)).eq(expected) {
            return Err("records do not match completed bases".into());
        }
        Ok(())
    }

    /// Write-to-temp then rename, so readers never see a partial document.
    pub fn store(&self, path: &Path) -> Result<(), ScanError> {
        let io_err = |source| ScanError::Io { path: path.into(), source };
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let text = serde_json::to_string(self).expect("checkpoint serializes");
        fs::write(&tmp, text).map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)
    }
}

fn validate(params: &ScanParams) -> Result<(), ScanError> {
    if params.p_max < 3 {
        return Err(ScanError::InvalidParams("p_max must be at least 3".into()));
    }
    if params.k_max < 1 {
        return Err(ScanError::InvalidParams("k_max must be at least 1".into()));
    }
    if params.precision < 5 {
        return Err(ScanError::InvalidParams(
            "precision must be at least 5 to classify every k".into(),
        ));
    }
    Ok(())
}

pub fn run_scan(params: ScanParams, options: &ScanOptions) -> Result<ScanOutcome, ScanError> {
    validate(&params)?;
    let mut done: BTreeMap<u64, Vec<CongruenceRecord>> = BTreeMap::new();
    if let Some(path) = options.checkpoint.as_deref().filter(|p| p.exists()) {
        let cp = ScanCheckpoint::load(path)?;
        if cp.parameters != params {
            return Err(ScanError::ParameterMismatch { path: path.into(), found: cp.parameters, requested: params });
        }
        for r in cp.records {
            done.entry(r.base).or_default().push(r);
        }
    }

    let mut pending: Vec<u64> = scan_primes(params.p_max).into_iter().filter(|p| !done.contains_key(p)).collect();
    if let Some(n) = options.stop_after {
        pending.truncate(n);
    }
    let jobs = options
        .jobs
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .clamp(1, pending.len().max(1));

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let mut failure: Option<ScanError> = None;

    thread::scope(|s| {
        let (tx, rx) = mpsc::channel::<(u64, gw_core::Result<Vec<CongruenceRecord>>)>();
        for _ in 0..jobs {
            let tx = tx.clone();
            let (next, stop, pending) = (&next, &stop, &pending);
            s.spawn(move || loop {
                if stop.load(Ordering::Acquire) {
                    break;
                }
                let idx = next.fetch_add(1, Ordering::AcqRel);
                let Some(&p) = pending.get(idx) else { break };
                let result = classify_all(p, params.k_max, params.precision);
                if tx.send((p, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        for (p, result) in rx {
            if failure.is_some() {
                continue;
            }
            match result {
                Ok(records) => {
                    done.insert(p, records);
                    if let Some(path) = &options.checkpoint {
                        if let Err(e) = checkpoint_of(params, &done).store(path) {
                            stop.store(true, Ordering::Release);
                            failure = Some(e);
                        }
                    }
                }
                Err(e) => {
                    stop.store(true, Ordering::Release);
                    failure = Some(e.into());
                }
            }
        }
    });

    if let Some(e) = failure {
        return Err(e);
    }
    let completed_bases: Vec<u64> = done.keys().copied().collect();
    let complete = completed_bases.len() == scan_primes(params.p_max).len();
    let mut records: Vec<CongruenceRecord> = done.into_values().flatten().collect();
    records.sort_by_key(|r| (r.k, r.base));
    Ok(ScanOutcome { records, completed_bases, complete })
}

fn checkpoint_of(params: ScanParams, done: &BTreeMap<u64, Vec<CongruenceRecord>>) -> ScanCheckpoint {
    ScanCheckpoint {
        schema_version: SCHEMA_VERSION,
        parameters: params,
        completed_bases: done.keys().copied().collect(),
        records: done.values().flatten().copied().collect(),
    }
}
