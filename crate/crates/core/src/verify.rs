//! Range scans over even numbers.
//!
//! A scan splits `[lo, hi]` into chunks of `chunk_size` consecutive even numbers,
//! processes the chunks on a worker pool, and merges the per-chunk reports in
//! range order. Merging is associative, so the result does not depend on the
//! number of workers or on where a resumed run picked up.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{check_bounds, check_dusart, BoundConstant, Inequality, Outcome, WING_PROOF_GATE};
use crate::checkpoint::Checkpoint;
use crate::error::{Error, Result};
use crate::half::HalfValue;
use crate::prime_table::PrimeTable;
use crate::sce_model::{check_identities, decompose, prime_pair_weight};
use crate::type_space::classify;

pub const DEFAULT_CHUNK_SIZE: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    /// `d_E` only.
    Goldbach,
    /// Structural type of every E.
    Census,
    /// Census plus theorem, inequality and identity checks.
    Theorem,
}

impl ScanKind {
    fn wants_decomposition(self) -> bool {
        self != ScanKind::Goldbach
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Even numbers per chunk.
    pub chunk_size: u64,
    pub workers: usize,
    pub constant: BoundConstant,
    /// Resume from and save progress to this file.
    pub checkpoint: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            chunk_size: DEFAULT_CHUNK_SIZE,
            workers: default_workers(),
            constant: BoundConstant::default(),
            checkpoint: None,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinD {
    #[serde(rename = "E")]
    pub e: u64,
    pub d: HalfValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedHit {
    #[serde(rename = "E")]
    pub e: u64,
    #[serde(rename = "type")]
    pub type_name: String,
    pub d: HalfValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    #[serde(rename = "E")]
    pub e: u64,
    pub id: String,
}

/// Aggregated findings over a contiguous range of even numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub range: (u64, u64),
    pub evens_scanned: u64,
    /// Every E with `d_E = 0`, including the known exception 4.
    pub goldbach_failures: Vec<u64>,
    pub min_d: Option<MinD>,
    pub type_census: BTreeMap<String, u64>,
    pub excluded_hits: Vec<ExcludedHit>,
    /// E whose type is not excluded yet `d_E = 0`.
    pub theorem_violations: Vec<u64>,
    /// Number of E at which each bound was applicable and evaluated.
    pub bound_checked: BTreeMap<String, u64>,
    pub bound_failures: BTreeMap<String, Vec<u64>>,
    pub marginal: BTreeMap<String, u64>,
    pub identity_failures: Vec<IdentityFailure>,
}

impl ScanReport {
    fn empty(lo: u64, hi: u64) -> Self {
        ScanReport {
            range: (lo, hi),
            evens_scanned: 0,
            goldbach_failures: Vec::new(),
            min_d: None,
            type_census: BTreeMap::new(),
            excluded_hits: Vec::new(),
            theorem_violations: Vec::new(),
            bound_checked: BTreeMap::new(),
            bound_failures: BTreeMap::new(),
            marginal: BTreeMap::new(),
            identity_failures: Vec::new(),
        }
    }

    /// Goldbach failures other than the known exception E = 4.
    pub fn unexpected_goldbach_failures(&self) -> impl Iterator<Item = u64> + '_ {
        self.goldbach_failures.iter().copied().filter(|&e| e != 4)
    }

    pub fn has_bound_failures(&self) -> bool {
        self.bound_failures.values().any(|v| !v.is_empty())
    }

    /// Concatenates the report for the adjacent range that follows `self`.
    pub fn merge(mut self, next: ScanReport) -> Result<ScanReport> {
        if next.range.0 != self.range.1 + 2 {
            return Err(Error::invalid(format!(
                "cannot merge [{}, {}] with non-adjacent [{}, {}]",
                self.range.0, self.range.1, next.range.0, next.range.1
            )));
        }
        self.range.1 = next.range.1;
        self.evens_scanned += next.evens_scanned;
        self.goldbach_failures.extend(next.goldbach_failures);
        self.min_d = match (self.min_d, next.min_d) {
            (Some(a), Some(b)) => Some(if b.d < a.d { b } else { a }),
            (a, b) => a.or(b),
        };
        for (k, v) in next.type_census {
            *self.type_census.entry(k).or_default() += v;
        }
        self.excluded_hits.extend(next.excluded_hits);
        self.theorem_violations.extend(next.theorem_violations);
        for (k, v) in next.bound_checked {
            *self.bound_checked.entry(k).or_default() += v;
        }
        for (k, v) in next.bound_failures {
            self.bound_failures.entry(k).or_default().extend(v);
        }
        for (k, v) in next.marginal {
            *self.marginal.entry(k).or_default() += v;
        }
        self.identity_failures.extend(next.identity_failures);
        Ok(self)
    }

    fn record_bound(&mut self, id: String, e: u64, outcome: Outcome) {
        if !outcome.is_applicable() {
            return;
        }
        *self.bound_checked.entry(id.clone()).or_default() += 1;
        match outcome {
            Outcome::Fails => self.bound_failures.entry(id).or_default().push(e),
            Outcome::Marginal => *self.marginal.entry(id).or_default() += 1,
            _ => {}
        }
    }
}

fn scan_chunk(
    kind: ScanKind,
    lo: u64,
    hi: u64,
    table: &PrimeTable,
    c: BoundConstant,
) -> Result<ScanReport> {
    let mut report = ScanReport::empty(lo, hi);
    for e in (lo..=hi).step_by(2) {
        report.evens_scanned += 1;
        if !kind.wants_decomposition() {
            let d = prime_pair_weight(e, table)?;
            note_d(&mut report, e, d);
            continue;
        }

        let dec = decompose(e, table)?;
        note_d(&mut report, e, dec.d);
        let ty = classify(&dec);
        *report.type_census.entry(ty.canonical().to_string()).or_default() += 1;
        if ty.excluded {
            report.excluded_hits.push(ExcludedHit {
                e,
                type_name: ty.canonical().to_string(),
                d: dec.d,
            });
        }
        if kind != ScanKind::Theorem {
            continue;
        }

        if !ty.excluded && dec.d == HalfValue::ZERO {
            report.theorem_violations.push(e);
        }
        let bounds = check_bounds(&dec, c);
        for (ineq, outcome) in bounds.entries() {
            report.record_bound(ineq.id().to_string(), e, outcome);
            if ineq.is_wing() && e > WING_PROOF_GATE {
                report.record_bound(wing_gate_id(ineq), e, outcome);
            }
        }
        let identities = check_identities(&dec, table)?;
        for id in identities.failures() {
            report.identity_failures.push(IdentityFailure { e, id: id.to_string() });
        }
    }
    Ok(report)
}

fn note_d(report: &mut ScanReport, e: u64, d: HalfValue) {
    if d == HalfValue::ZERO {
        report.goldbach_failures.push(e);
    }
    if report.min_d.map_or(true, |m| d < m.d) {
        report.min_d = Some(MinD { e, d });
    }
}

fn validate_range(lo: u64, hi: u64, table: &PrimeTable) -> Result<()> {
    if lo < 2 || lo % 2 != 0 || hi % 2 != 0 {
        return Err(Error::invalid(format!(
            "range bounds must be even and at least 2, got [{lo}, {hi}]"
        )));
    }
    if lo > hi {
        return Err(Error::invalid(format!("empty range [{lo}, {hi}]")));
    }
    table.check_covered(hi)
}

/// Chunk boundaries `(first, last)` covering `[lo, hi]`.
fn chunks(lo: u64, hi: u64, chunk_size: u64) -> Vec<(u64, u64)> {
    let span = chunk_size.saturating_sub(1).saturating_mul(2);
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = start.saturating_add(span).min(hi);
        out.push((start, end));
        if end >= hi {
            return out;
        }
        start = end + 2;
    }
}

fn merge_all(mut parts: impl Iterator<Item = ScanReport>) -> Result<Option<ScanReport>> {
    let Some(first) = parts.next() else {
        return Ok(None);
    };
    parts.try_fold(first, ScanReport::merge).map(Some)
}

/// Runs a scan of `kind` over the even numbers in `[lo, hi]`.
pub fn run_scan(
    kind: ScanKind,
    lo: u64,
    hi: u64,
    table: &PrimeTable,
    config: &ScanConfig,
) -> Result<ScanReport> {
    validate_range(lo, hi, table)?;
    if config.chunk_size == 0 {
        return Err(Error::invalid("chunk size must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Resource(format!("worker pool: {e}")))?;
    let c = config.constant;
    let run = |parts: &[(u64, u64)]| -> Result<Vec<ScanReport>> {
        pool.install(|| {
            parts
                .par_iter()
                .map(|&(a, b)| scan_chunk(kind, a, b, table, c))
                .collect()
        })
    };

    let all = chunks(lo, hi, config.chunk_size);
    let Some(path) = &config.checkpoint else {
        let parts = run(&all)?;
        return merge_all(parts.into_iter()).map(|r| r.expect("range is nonempty"));
    };

    let mut state = match Checkpoint::load(path)? {
        Some(cp) => {
            cp.ensure_matches(path, kind, lo, hi, config.chunk_size, c)?;
            cp
        }
        None => Checkpoint::new(kind, lo, hi, config.chunk_size, c),
    };
    let done = state.completed_through;
    let pending: Vec<(u64, u64)> = all
        .into_iter()
        .filter(|&(_, b)| done.map_or(true, |d| b > d))
        .collect();
    let wave = config.workers.max(1) * 2;
    for batch in pending.chunks(wave) {
        let parts = run(batch)?;
        let merged = merge_all(parts.into_iter())?.expect("batch is nonempty");
        state.aggregates = Some(match state.aggregates.take() {
            Some(prev) => prev.merge(merged)?,
            None => merged,
        });
        state.completed_through = Some(batch.last().expect("batch is nonempty").1);
        state.save(path)?;
    }
    state
        .aggregates
        .ok_or_else(|| Error::Checkpoint {
            path: path.clone(),
            reason: "checkpoint marks the range complete but holds no aggregates".into(),
        })
}

pub fn goldbach_scan(lo: u64, hi: u64, table: &PrimeTable) -> Result<ScanReport> {
    run_scan(ScanKind::Goldbach, lo, hi, table, &ScanConfig::default())
}

pub fn census(lo: u64, hi: u64, table: &PrimeTable) -> Result<ScanReport> {
    run_scan(ScanKind::Census, lo, hi, table, &ScanConfig::default())
}

pub fn theorem_check(lo: u64, hi: u64, table: &PrimeTable, c: BoundConstant) -> Result<ScanReport> {
    let config = ScanConfig {
        constant: c,
        ..ScanConfig::default()
    };
    run_scan(ScanKind::Theorem, lo, hi, table, &config)
}

/// Dusart bounds checked at every integer of a range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DusartScan {
    pub range: (u64, u64),
    pub constant: BoundConstant,
    pub checked: u64,
    /// Integers with `x / ln x > pi(x)`, among x >= 17.
    pub lower_failures: Vec<u64>,
    /// Integers with `pi(x) > c x / ln x`.
    pub upper_failures: Vec<u64>,
    pub lower_marginal: u64,
    pub upper_marginal: u64,
}

impl DusartScan {
    pub fn first_upper_violation(&self) -> Option<u64> {
        self.upper_failures.first().copied()
    }

    pub fn first_lower_violation(&self) -> Option<u64> {
        self.lower_failures.first().copied()
    }

    pub fn has_failures(&self) -> bool {
        !self.lower_failures.is_empty() || !self.upper_failures.is_empty()
    }
}

pub fn dusart_scan(lo: u64, hi: u64, table: &PrimeTable, c: BoundConstant) -> Result<DusartScan> {
    if lo < 2 || lo > hi {
        return Err(Error::invalid(format!("Dusart scan needs 2 <= from <= to, got [{lo}, {hi}]")));
    }
    table.check_covered(hi)?;
    let mut scan = DusartScan {
        range: (lo, hi),
        constant: c,
        checked: 0,
        lower_failures: Vec::new(),
        upper_failures: Vec::new(),
        lower_marginal: 0,
        upper_marginal: 0,
    };
    for x in lo..=hi {
        let r = check_dusart(x, table, c)?;
        scan.checked += 1;
        match r.lower {
            Outcome::Fails => scan.lower_failures.push(x),
            Outcome::Marginal => scan.lower_marginal += 1,
            _ => {}
        }
        match r.upper {
            Outcome::Fails => scan.upper_failures.push(x),
            Outcome::Marginal => scan.upper_marginal += 1,
            _ => {}
        }
    }
    Ok(scan)
}

/// Id under which a wing bound's stricter proof gate is reported.
pub fn wing_gate_id(ineq: Inequality) -> String {
    format!("{}_gt{WING_PROOF_GATE}", ineq.id())
}
