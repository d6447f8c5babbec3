//! Exhaustive scan of `(b, n, d)` for monomials without a witness.
//!
//! Work is split into blocks of consecutive `d` inside each `(b, n)` cell.
//! Blocks are processed in parallel and merged in order, so reports do not
//! depend on the thread count or on where a run was interrupted.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{checked_pow, is_prime};
use crate::digits::{digit_sum, digit_sum_table};
use crate::error::{Error, Result};

use super::exceptions::{exceptions_for, ExceptionLabel};
use super::witness::{family_candidates, Bound, MAX_SEARCH_Q};

pub const CHECKPOINT_VERSION: u32 = 1;
pub const DEFAULT_BLOCK: u64 = 1 << 14;
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// Digit-sum tables are built for cells up to this order.
const TABLE_LIMIT: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseFilter {
    /// Odd primes.
    Primes,
    /// Every base `b ≥ 3`.
    All,
    /// An explicit list.
    List(Vec<u64>),
}

impl BaseFilter {
    fn bases(&self, upto: u64) -> Vec<u64> {
        match self {
            BaseFilter::Primes => (3..=upto).filter(|&b| is_prime(b)).collect(),
            BaseFilter::All => (3..=upto).collect(),
            BaseFilter::List(list) => {
                let mut v: Vec<u64> = list.iter().copied().filter(|&b| b >= 3 && b <= upto).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Cells with `b^n ≤ cap` are scanned.
    pub cap: u64,
    pub bases: BaseFilter,
    pub min_n: u32,
    pub max_n: Option<u32>,
    /// Exponents per work unit.
    pub block: u64,
}

impl ScanConfig {
    pub fn new(cap: u64, bases: BaseFilter) -> Self {
        ScanConfig { cap, bases, min_n: 2, max_n: None, block: DEFAULT_BLOCK }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    fn validate(&self) -> Result<()> {
        if self.cap < 3 || self.cap > MAX_SEARCH_Q {
            return Err(Error::InvalidParameter(format!("scan cap {} outside [3, 2^62]", self.cap)));
        }
        if self.block == 0 {
            return Err(Error::InvalidParameter("block size must be positive".into()));
        }
        if self.min_n == 0 {
            return Err(Error::InvalidParameter("min_n must be positive".into()));
        }
        Ok(())
    }

    /// The `(b, n)` cells in scan order.
    pub fn cells(&self) -> Vec<(u64, u32)> {
        let mut upto = 2u64;
        while checked_pow(upto + 1, self.min_n).is_some_and(|q| q <= self.cap) {
            upto += 1;
        }
        let mut cells = Vec::new();
        for b in self.bases.bases(upto) {
            let mut n = self.min_n;
            while checked_pow(b, n).is_some_and(|q| q <= self.cap) && self.max_n.map_or(true, |mx| n <= mx) {
                cells.push((b, n));
                n += 1;
            }
        }
        cells
    }
}

/// One exponent without a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub d: u64,
    pub label: Option<ExceptionLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub b: u64,
    pub n: u32,
    pub q: u64,
    pub prime_base: bool,
    /// Smallest members of the cyclotomic cosets `{d·b^k mod q-1}` visited.
    pub representatives: u64,
    /// Representatives skipped by an exclusion label.
    pub excluded: u64,
    pub witnessed: u64,
    /// Largest first witness over the cell.
    pub max_first_e: u64,
    /// Every exponent (all coset members) without a witness, ascending.
    pub failures: Vec<Failure>,
}

impl CellReport {
    fn empty(b: u64, n: u32) -> Self {
        CellReport {
            b,
            n,
            q: b.pow(n),
            prime_base: is_prime(b),
            representatives: 0,
            excluded: 0,
            witnessed: 0,
            max_first_e: 0,
            failures: Vec::new(),
        }
    }

    fn absorb(&mut self, part: UnitResult) {
        self.representatives += part.representatives;
        self.excluded += part.excluded;
        self.witnessed += part.witnessed;
        self.max_first_e = self.max_first_e.max(part.max_first_e);
        self.failures.extend(part.failures);
        self.failures.sort_by_key(|f| f.d);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub fingerprint: String,
    pub units_total: usize,
    pub units_done: usize,
    pub cells: Vec<CellReport>,
}

impl ScanReport {
    pub fn complete(&self) -> bool {
        self.units_done == self.units_total
    }

    /// All failures as `(b, n, failure)`.
    pub fn failures(&self) -> impl Iterator<Item = (u64, u32, &Failure)> {
        self.cells.iter().flat_map(|c| c.failures.iter().map(move |f| (c.b, c.n, f)))
    }

    /// Failures that carry no label.
    pub fn unlabeled_failures(&self) -> Vec<(u64, u32, u64)> {
        self.failures().filter(|(_, _, f)| f.label.is_none()).map(|(b, n, f)| (b, n, f.d)).collect()
    }
}

/// Resumable scan state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub version: u32,
    pub fingerprint: String,
    pub config: ScanConfig,
    /// Units finished, in scan order.
    pub units_done: usize,
    /// Cell index and next `d` of the first unfinished unit.
    pub cursor: Option<(usize, u64)>,
    /// Cells touched so far, with their accumulated results.
    pub cells: Vec<CellReport>,
    /// SHA-256 over the progress fields.
    pub digest: String,
}

impl ScanCheckpoint {
    fn progress_digest(units_done: usize, cursor: &Option<(usize, u64)>, cells: &[CellReport]) -> String {
        let json = serde_json::to_vec(&(units_done, cursor, cells)).expect("progress serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn load(path: &Path) -> Result<ScanCheckpoint> {
        let text = fs::read_to_string(path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        let ck: ScanCheckpoint =
            serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {}", ck.version)));
        }
        if ck.fingerprint != ck.config.fingerprint() {
            return Err(Error::Checkpoint("config fingerprint mismatch".into()));
        }
        if ck.digest != Self::progress_digest(ck.units_done, &ck.cursor, &ck.cells) {
            return Err(Error::Checkpoint("progress digest mismatch".into()));
        }
        Ok(ck)
    }

    fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).map_err(|e| Error::Checkpoint(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, json).map_err(|e| Error::Checkpoint(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    /// Where progress is saved after every batch.
    pub checkpoint: Option<PathBuf>,
    /// Continue from `checkpoint` if the file exists.
    pub resume: bool,
    /// Stop after this many units in this run.
    pub max_units: Option<usize>,
    /// Units per parallel batch; 0 picks a multiple of the thread count.
    pub batch_units: usize,
}

struct CellCtx {
    b: u64,
    n: u32,
    m: u64,
    bound: Bound,
    table: Option<Vec<u16>>,
    families: Vec<u64>,
}

impl CellCtx {
    fn new(b: u64, n: u32) -> Result<Self> {
        let q = b.pow(n);
        let table = (q <= TABLE_LIMIT).then(|| digit_sum_table(b, q as usize));
        let families = family_candidates(b, n)?.into_iter().map(|(e, _)| e).collect();
        Ok(CellCtx { b, n, m: q - 1, bound: Bound::new(b, n), table, families })
    }

    #[inline]
    fn sum(&self, x: u64) -> i64 {
        match &self.table {
            Some(t) => t[x as usize] as i64,
            None => digit_sum(x, self.b) as i64,
        }
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.m as u128) as u64
    }

    fn is_representative(&self, d: u64) -> bool {
        if d == self.m {
            return true;
        }
        let mut x = d;
        for _ in 1..self.n {
            x = self.mulmod(x, self.b);
            if x < d {
                return false;
            }
        }
        true
    }

    fn coset(&self, d: u64) -> Vec<u64> {
        if d == self.m {
            return vec![d];
        }
        let mut out = vec![d];
        let mut x = d;
        for _ in 1..self.n {
            x = self.mulmod(x, self.b);
            if x == d {
                break;
            }
            out.push(x);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn exceeds(&self, prod: u64, e: u64) -> bool {
        let prod = if prod == 0 { self.m } else { prod };
        self.bound.exceeded_by(self.sum(prod) - self.sum(e))
    }

    /// Smallest witness found by the family-then-ascending order.
    fn first_witness(&self, d: u64) -> Option<u64> {
        for &e in &self.families {
            if self.exceeds(self.mulmod(e, d), e) {
                return Some(e);
            }
        }
        let mut ed = 0u64;
        for e in 1..=self.m {
            ed += d;
            if ed >= self.m {
                ed -= self.m;
            }
            if self.exceeds(ed, e) {
                return Some(e);
            }
        }
        None
    }
}

#[derive(Debug, Clone, Default)]
struct UnitResult {
    representatives: u64,
    excluded: u64,
    witnessed: u64,
    max_first_e: u64,
    failures: Vec<Failure>,
}

#[derive(Debug, Clone, Copy)]
struct Unit {
    cell: usize,
    start: u64,
    end: u64,
}

fn units_of(cells: &[(u64, u32)], block: u64) -> Vec<Unit> {
    let mut units = Vec::new();
    for (idx, &(b, n)) in cells.iter().enumerate() {
        let q = b.pow(n);
        let mut start = 1;
        while start < q {
            let end = (start + block).min(q);
            units.push(Unit { cell: idx, start, end });
            start = end;
        }
    }
    units
}

fn run_unit(ctx: &CellCtx, unit: Unit) -> UnitResult {
    let mut out = UnitResult::default();
    for d in unit.start..unit.end {
        if !ctx.is_representative(d) {
            continue;
        }
        out.representatives += 1;
        let label = exceptions_for(ctx.b, ctx.n, d);
        if label.is_some_and(|l| l.excluded()) {
            out.excluded += 1;
            continue;
        }
        match ctx.first_witness(d) {
            Some(e) => {
                out.witnessed += 1;
                out.max_first_e = out.max_first_e.max(e);
            }
            None => out.failures.extend(
                ctx.coset(d).into_iter().map(|x| Failure { d: x, label: exceptions_for(ctx.b, ctx.n, x) }),
            ),
        }
    }
    out
}

/// Scans every cell of `config`, looking for exponents outside the labeled
/// exceptions that have no witness at all.
pub fn conjecture_scan(config: &ScanConfig, opts: &ScanOptions) -> Result<ScanReport> {
    config.validate()?;
    let fingerprint = config.fingerprint();
    let cells = config.cells();
    let units = units_of(&cells, config.block);

    let mut done = 0usize;
    let mut reports: Vec<CellReport> = Vec::new();
    if let (true, Some(path)) = (opts.resume, &opts.checkpoint) {
        if path.exists() {
            let ck = ScanCheckpoint::load(path)?;
            if ck.fingerprint != fingerprint {
                return Err(Error::Checkpoint("checkpoint belongs to a different configuration".into()));
            }
            if ck.units_done > units.len() {
                return Err(Error::Checkpoint("checkpoint is ahead of the unit list".into()));
            }
            done = ck.units_done;
            reports = ck.cells;
        }
    }

    let batch = match opts.batch_units {
        0 => 4 * rayon::current_num_threads().max(1),
        k => k,
    };
    let stop = opts.max_units.map_or(units.len(), |k| (done + k).min(units.len()));
    let mut contexts: HashMap<usize, Arc<CellCtx>> = HashMap::new();
    while done < stop {
        let slice = &units[done..(done + batch).min(stop)];
        contexts.retain(|idx, _| slice.iter().any(|u| u.cell == *idx));
        for u in slice {
            if !contexts.contains_key(&u.cell) {
                let (b, n) = cells[u.cell];
                contexts.insert(u.cell, Arc::new(CellCtx::new(b, n)?));
            }
        }
        let results: Vec<UnitResult> = slice.par_iter().map(|u| run_unit(&contexts[&u.cell], *u)).collect();
        for (u, r) in slice.iter().zip(results) {
            while reports.len() <= u.cell {
                let (b, n) = cells[reports.len()];
                reports.push(CellReport::empty(b, n));
            }
            reports[u.cell].absorb(r);
        }
        done += slice.len();
        if let Some(path) = &opts.checkpoint {
            let cursor = units.get(done).map(|u| (u.cell, u.start));
            let ck = ScanCheckpoint {
                version: CHECKPOINT_VERSION,
                fingerprint: fingerprint.clone(),
                config: config.clone(),
                units_done: done,
                digest: ScanCheckpoint::progress_digest(done, &cursor, &reports),
                cursor,
                cells: reports.clone(),
            };
            ck.save(path)?;
        }
    }
    if done == units.len() {
        while reports.len() < cells.len() {
            let (b, n) = cells[reports.len()];
            reports.push(CellReport::empty(b, n));
        }
    }
    Ok(ScanReport { config: config.clone(), fingerprint, units_total: units.len(), units_done: done, cells: reports })
}
