//! Bounded sweep over seed points, multiplier pairs and parametrizations.
//!
//! One task per `(seed, k, m, parametrization)`; tasks share only immutable
//! data and are merged by a sort on the record key, so the output does not
//! depend on the worker count.

use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cuboid::{build_npc, CuboidRecord, CuboidSource, Parametrization};
use crate::curve::{CurvePoint, SolutionPair};
use crate::error::{Error, Result};
use crate::json::{big_int, default_seeds, PointRecord};

pub const DEFAULT_HEIGHT_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
    #[default]
    Both,
}

impl Parity {
    fn admits(self, k: u32, m: u32) -> bool {
        if k % 2 != m % 2 {
            return false;
        }
        match self {
            Parity::Odd => k % 2 == 1,
            Parity::Even => k.is_multiple_of(2),
            Parity::Both => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchJob {
    pub seeds: Vec<CurvePoint>,
    pub max_multiple: u32,
    pub parity: Parity,
    pub parametrizations: Vec<Parametrization>,
    pub height_limit: usize,
}

impl SearchJob {
    pub fn new(
        seeds: Vec<CurvePoint>,
        max_multiple: u32,
        parity: Parity,
        parametrizations: Vec<Parametrization>,
        height_limit: usize,
    ) -> Result<Self> {
        if max_multiple < 2 {
            return Err(Error::InvalidJob("max_multiple must be at least 2".into()));
        }
        if height_limit < 1 {
            return Err(Error::InvalidJob("height_limit must be at least 1".into()));
        }
        if parametrizations.is_empty() {
            return Err(Error::InvalidJob("no parametrizations requested".into()));
        }
        for (i, s) in seeds.iter().enumerate() {
            if !s.on_curve() || !s.is_nontrivial() {
                return Err(Error::InvalidSeed(format!(
                    "seed {i} ({s:?}) is not a nontrivial curve point"
                )));
            }
        }
        let mut parametrizations = parametrizations;
        parametrizations.sort();
        parametrizations.dedup();
        Ok(SearchJob {
            seeds,
            max_multiple,
            parity,
            parametrizations,
            height_limit,
        })
    }
}

/// Job file layout; omitted fields take their defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchJobFile {
    #[serde(default)]
    pub seeds: Option<Vec<PointRecord>>,
    pub max_multiple: u32,
    #[serde(default)]
    pub parity: Parity,
    #[serde(default)]
    pub parametrizations: Option<Vec<Parametrization>>,
    #[serde(default = "default_height")]
    pub height_limit: usize,
}

fn default_height() -> usize {
    DEFAULT_HEIGHT_LIMIT
}

impl SearchJobFile {
    /// Builds the job; `fallback_seeds` (or the built-in seeds) apply when the file lists none.
    pub fn into_job(self, fallback_seeds: Option<Vec<CurvePoint>>) -> Result<SearchJob> {
        let seeds = match self.seeds {
            Some(recs) => recs
                .iter()
                .enumerate()
                .map(|(i, r)| r.to_point().map_err(|e| Error::InvalidSeed(format!("seed {i}: {e}"))))
                .collect::<Result<Vec<_>>>()?,
            None => fallback_seeds.unwrap_or_else(default_seeds),
        };
        SearchJob::new(
            seeds,
            self.max_multiple,
            self.parity,
            self.parametrizations.unwrap_or_else(|| Parametrization::ALL.to_vec()),
            self.height_limit,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Ok,
    Truncated,
    Skipped,
}

/// One line of search output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    #[serde(rename = "N", with = "big_int")]
    pub n: BigInt,
    /// Index of the seed in the job, disambiguating seeds on one curve.
    pub seed: usize,
    pub k: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametrization: Option<Parametrization>,
    pub status: RecordStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuboid: Option<CuboidRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
}

/// Sort and resume key of a record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RecordKey {
    pub n: BigInt,
    pub seed: usize,
    pub k: u32,
    pub m: u32,
    pub parametrization: Option<Parametrization>,
}

impl SearchRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            n: self.n.clone(),
            seed: self.seed,
            k: self.k,
            m: self.m,
            parametrization: self.parametrization,
        }
    }

    fn skipped(n: &BigInt, seed: usize, k: u32, m: u32, p: Option<Parametrization>, reason: String) -> Self {
        SearchRecord {
            n: n.clone(),
            seed,
            k,
            m,
            parametrization: p,
            status: RecordStatus::Skipped,
            pc: None,
            digits: None,
            truncated: false,
            cuboid: None,
            skip_reason: Some(reason),
        }
    }
}

/// `(k, m, pair of kP and mP)`, or why the pair could not be formed.
type MultiplePair = (u32, u32, std::result::Result<SolutionPair, Error>);

struct Task<'a> {
    seed: usize,
    n: &'a BigInt,
    k: u32,
    m: u32,
    pair: std::result::Result<&'a SolutionPair, &'a Error>,
    param: Parametrization,
}

fn run_task(task: &Task<'_>, height_limit: usize) -> SearchRecord {
    let pair = match task.pair {
        Ok(p) => p,
        Err(e) => return SearchRecord::skipped(task.n, task.seed, task.k, task.m, Some(task.param), e.to_string()),
    };
    match build_npc(pair, task.param) {
        Err(e) => SearchRecord::skipped(task.n, task.seed, task.k, task.m, Some(task.param), e.to_string()),
        Ok(cuboid) => {
            let pc = cuboid.pc_condition();
            let digits = cuboid.digits();
            if pc {
                log::warn!(
                    "PERFECT CUBOID: N={} k={} m={} {} gives a rational a-b diagonal",
                    task.n,
                    task.k,
                    task.m,
                    task.param
                );
            }
            let truncated = digits > height_limit;
            SearchRecord {
                n: task.n.clone(),
                seed: task.seed,
                k: task.k,
                m: task.m,
                parametrization: Some(task.param),
                status: if truncated {
                    RecordStatus::Truncated
                } else {
                    RecordStatus::Ok
                },
                pc: Some(pc),
                digits: Some(digits),
                truncated,
                cuboid: (!truncated)
                    .then(|| CuboidRecord::from_cuboid(&cuboid, Some(CuboidSource::of(pair, task.param)))),
                skip_reason: None,
            }
        }
    }
}

/// Runs the whole job; see [`run_search_after`].
pub fn run_search(job: &SearchJob, workers: usize) -> Result<Vec<SearchRecord>> {
    run_search_after(job, workers, None)
}

/// Runs every task whose key is after `resume` and returns the records in key order.
///
/// `workers == 0` uses rayon's default pool size.
pub fn run_search_after(job: &SearchJob, workers: usize, resume: Option<&RecordKey>) -> Result<Vec<SearchRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidJob(format!("cannot start worker pool: {e}")))?;

    pool.install(|| {
        // multiples of each seed, then the pairs, both computed once and shared
        let pairs: Vec<Vec<MultiplePair>> = job
            .seeds
            .par_iter()
            .map(|seed| {
                let mut out = Vec::new();
                for k in 1..=job.max_multiple {
                    for m in (k + 1)..=job.max_multiple {
                        if job.parity.admits(k, m) {
                            out.push((k, m, SolutionPair::same_parity(seed, k as i64, m as i64)));
                        }
                    }
                }
                out
            })
            .collect();

        let mut records = Vec::new();
        let mut tasks = Vec::new();
        for (si, (seed, seed_pairs)) in job.seeds.iter().zip(&pairs).enumerate() {
            let n = seed.curve().n();
            if seed_pairs.is_empty() {
                records.push(SearchRecord::skipped(
                    n,
                    si,
                    1,
                    job.max_multiple,
                    None,
                    "no multipliers of the requested parity with 1 <= k < m <= max_multiple".into(),
                ));
                continue;
            }
            for (k, m, pair) in seed_pairs {
                for &param in &job.parametrizations {
                    tasks.push(Task {
                        seed: si,
                        n,
                        k: *k,
                        m: *m,
                        pair: pair.as_ref(),
                        param,
                    });
                }
            }
        }
        records.par_extend(tasks.par_iter().map(|t| run_task(t, job.height_limit)));
        if let Some(after) = resume {
            records.retain(|r| &r.key() > after);
        }
        records.sort_by_key(SearchRecord::key);
        Ok(records)
    })
}

pub fn write_jsonl<W: Write>(records: &[SearchRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Key of the last complete line of an existing output stream.
///
/// A trailing line without a newline is an interrupted write and is ignored;
/// the returned byte length is where appending should resume.
pub fn resume_point<R: BufRead>(mut input: R) -> io::Result<(Option<RecordKey>, u64)> {
    let mut last = None;
    let mut complete_len = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let read = input.read_line(&mut line)?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        if let Ok(rec) = serde_json::from_str::<SearchRecord>(line.trim_end()) {
            last = Some(rec.key());
        } else if !line.trim().is_empty() {
            break;
        }
        complete_len += read as u64;
    }
    Ok((last, complete_len))
}

/// `(N, seed, k, m_prev, m)` where the invariant cuboid height decreased as `m` grew.
pub fn height_regressions(records: &[SearchRecord]) -> Vec<(BigInt, usize, u32, u32, u32)> {
    let mut out = Vec::new();
    let inv: Vec<&SearchRecord> = records
        .iter()
        .filter(|r| r.parametrization == Some(Parametrization::Invariant) && r.digits.is_some())
        .collect();
    for w in inv.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.n == b.n && a.seed == b.seed && a.k == b.k && b.digits < a.digits {
            out.push((a.n.clone(), a.seed, a.k, a.m, b.m));
        }
    }
    out
}
