//! Exceptional sets: integers up to a bound that are locally represented but
//! not represented, regularity up to a bound, and the `(m−2)³` scaling scan.
//!
//! `[0, bound]` is cut into fixed chunks handed to scoped worker threads.
//! Each chunk starts with a fresh witness cache, so the verdicts (and hence the
//! report) do not depend on how chunks are distributed.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{MgonalError, Result};
use crate::local::{locally_represents, LocalReport};
use crate::polygonal::{decompose_target, represents, represents_with_cache, MgonalForm, WitnessCache};

/// Largest bound accepted by default.
pub const DEFAULT_MAX_BOUND: u64 = 100_000_000;

/// Targets per chunk.
pub const CHUNK: u64 = 2048;

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub jobs: usize,
    pub max_bound: u64,
    /// Drop wall-clock timings from reports.
    pub stable_output: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_bound: DEFAULT_MAX_BOUND,
            stable_output: false,
        }
    }
}

impl CensusOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        Self { jobs: jobs.max(1), ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub locally_represented: u64,
    pub represented: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub form: MgonalForm,
    pub bound: u64,
    pub exceptional: Vec<u64>,
    pub counts: Counts,
    pub max_exceptional: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ExceptionalReport {
    pub fn is_regular_up_to_bound(&self) -> bool {
        self.exceptional.is_empty()
    }

    /// One CSV row per exceptional N: `N, A, B, evidence`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["N", "A", "B", "evidence"]).map_err(csv_error)?;
        for &n in &self.exceptional {
            let t = decompose_target(self.form.m(), n)?;
            let local = locally_represents(&self.form, &BigInt::from(n))?;
            w.write_record([n.to_string(), t.a.to_string(), t.b.to_string(), evidence_summary(&local)])
                .map_err(csv_error)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| MgonalError::Resource(e.to_string()))?)
            .map_err(|e| MgonalError::Resource(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> MgonalError {
    MgonalError::Resource(format!("csv: {e}"))
}

fn evidence_summary(local: &LocalReport) -> String {
    let rules: Vec<String> = local
        .verdicts
        .iter()
        .map(|v| format!("p={} rule {}", v.p, v.rule))
        .collect();
    format!("search exhausted; locally represented ({})", rules.join(", "))
}

struct ChunkResult {
    exceptional: Vec<u64>,
    counts: Counts,
}

fn scan_chunk(form: &MgonalForm, lo: u64, hi: u64) -> Result<ChunkResult> {
    let mut cache = WitnessCache::new();
    let mut out = ChunkResult { exceptional: Vec::new(), counts: Counts::default() };
    for n in lo..=hi {
        let local = locally_represents(form, &BigInt::from(n))?.represented;
        let global = represents_with_cache(form, n, &mut cache);
        match (local, global.is_some()) {
            (true, true) => {
                out.counts.locally_represented += 1;
                out.counts.represented += 1;
            }
            (true, false) => {
                out.counts.locally_represented += 1;
                out.exceptional.push(n);
            }
            (false, true) => {
                return Err(MgonalError::Anomaly(format!(
                    "{form} represents {n} (x = {:?}) but the local test rejects it",
                    global.unwrap().x
                )))
            }
            (false, false) => {}
        }
    }
    Ok(out)
}

/// Exact exceptional set of `form` on `[0, bound]`.
pub fn exceptional_set(form: &MgonalForm, bound: u64, opts: &CensusOptions) -> Result<ExceptionalReport> {
    if bound > opts.max_bound {
        return Err(MgonalError::Resource(format!(
            "bound {bound} exceeds the configured limit {}",
            opts.max_bound
        )));
    }
    if form.rank() < 3 {
        form.require_rank(3)?;
    }
    let start = Instant::now();
    let chunks: Vec<(u64, u64)> = (0..=bound / CHUNK)
        .map(|c| (c * CHUNK, (c * CHUNK + CHUNK - 1).min(bound)))
        .collect();
    let slots: Vec<Mutex<Option<Result<ChunkResult>>>> = chunks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = opts.jobs.max(1).min(chunks.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(lo, hi)) = chunks.get(i) else { break };
                *slots[i].lock().unwrap() = Some(scan_chunk(form, lo, hi));
            });
        }
    });
    let mut exceptional = Vec::new();
    let mut counts = Counts::default();
    for slot in slots {
        let r = slot.into_inner().unwrap().expect("every chunk is scanned")?;
        exceptional.extend(r.exceptional);
        counts.locally_represented += r.counts.locally_represented;
        counts.represented += r.counts.represented;
    }
    Ok(ExceptionalReport {
        form: form.clone(),
        bound,
        max_exceptional: exceptional.last().copied(),
        exceptional,
        counts,
        timings: (!opts.stable_output).then(|| Timings { seconds: start.elapsed().as_secs_f64() }),
    })
}

/// Independent re-check of a report's exceptional list, one N at a time with
/// the uncached search.
pub fn reverify(report: &ExceptionalReport) -> Result<bool> {
    for &n in &report.exceptional {
        if n > report.bound
            || !locally_represents(&report.form, &BigInt::from(n))?.represented
            || represents(&report.form, n).is_some()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RegularityVerdict {
    RegularUpToBound { bound: u64 },
    ExceptionsFound { bound: u64, exceptions: Vec<u64> },
}

pub fn regularity_check(form: &MgonalForm, bound: u64, opts: &CensusOptions) -> Result<RegularityVerdict> {
    let r = exceptional_set(form, bound, opts)?;
    Ok(if r.exceptional.is_empty() {
        RegularityVerdict::RegularUpToBound { bound }
    } else {
        RegularityVerdict::ExceptionsFound { bound, exceptions: r.exceptional }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub m: u64,
    pub bound: u64,
    pub max_exceptional: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub coeffs: Vec<u64>,
    /// Exact multiplier, e.g. `"20"` or `"41/2"`.
    pub multiplier: String,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln(1 + max_exceptional)` against `ln(m−2)`;
    /// `None` with fewer than three rows having exceptions.
    pub slope: Option<f64>,
}

impl ScalingReport {
    /// `m, bound, max_exceptional, seconds`; an empty exceptional set is
    /// written as an empty field.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "bound", "max_exceptional", "seconds"]).map_err(csv_error)?;
        for r in &self.rows {
            w.write_record([
                r.m.to_string(),
                r.bound.to_string(),
                r.max_exceptional.map_or_else(String::new, |v| v.to_string()),
                r.seconds.map_or_else(String::new, |s| format!("{s:.3}")),
            ])
            .map_err(csv_error)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| MgonalError::Resource(e.to_string()))?)
            .map_err(|e| MgonalError::Resource(e.to_string()))
    }
}

/// Parse `"20"`, `"41/2"` or `"2.5"` into a positive rational.
pub fn parse_multiplier(text: &str) -> Result<Ratio<u64>> {
    let bad = || MgonalError::invalid(format!("multiplier must be a positive rational, got {text:?}"));
    let r = if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let den = 10u64.checked_pow(digits).ok_or_else(bad)?;
        let whole: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let part: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ratio::new(whole.checked_mul(den).and_then(|w| w.checked_add(part)).ok_or_else(bad)?, den)
    } else {
        text.parse::<Ratio<u64>>().map_err(|_| bad())?
    };
    if r == Ratio::from_integer(0) {
        return Err(bad());
    }
    Ok(r)
}

/// `⌈multiplier·(m−2)³⌉`.
pub fn scaling_bound(m: u64, multiplier: Ratio<u64>) -> Result<u64> {
    let cube = (m - 2).checked_pow(3).ok_or_else(|| MgonalError::invalid("m too large"))?;
    let num = (*multiplier.numer() as u128) * cube as u128;
    let den = *multiplier.denom() as u128;
    u64::try_from(num.div_ceil(den)).map_err(|_| MgonalError::invalid("scan bound overflows u64"))
}

/// Least-squares slope through `(xᵢ, yᵢ)`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn scaling_experiment(
    coeffs: &[u64],
    m_min: u64,
    m_max: u64,
    multiplier: Ratio<u64>,
    opts: &CensusOptions,
) -> Result<ScalingReport> {
    if m_min > m_max {
        return Err(MgonalError::invalid(format!("empty m range [{m_min}, {m_max}]")));
    }
    if coeffs.len() < 5 {
        return Err(MgonalError::invalid("the scaling experiment needs rank n ≥ 5"));
    }
    let mut rows = Vec::new();
    for m in m_min.max(3)..=m_max {
        let form = MgonalForm::new(m, coeffs.to_vec())?;
        let bound = scaling_bound(m, multiplier)?;
        let start = Instant::now();
        let report = exceptional_set(&form, bound, opts)?;
        rows.push(ScalingRow {
            m,
            bound,
            max_exceptional: report.max_exceptional,
            seconds: (!opts.stable_output).then(|| start.elapsed().as_secs_f64()),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let v = r.max_exceptional.filter(|&v| v >= 1)?;
            Some((((r.m - 2) as f64).ln(), (1.0 + v.to_f64()?).ln()))
        })
        .collect();
    let slope = if points.len() >= 3 { least_squares_slope(&points) } else { None };
    Ok(ScalingReport {
        coeffs: coeffs.to_vec(),
        multiplier: multiplier.to_string(),
        rows,
        slope,
    })
}
