//! The exhaustive experiment driver: for every base `g` of a prime sweep,
//! build the transition map, classify its `m`-class, analyze the graph,
//! and aggregate per-class and combined statistics together with extremal
//! witnesses.
//!
//! Work is partitioned into contiguous chunks of `g` values. Workers merge
//! chunk results through an associative, commutative accumulator whose
//! witness lists are sorted at the end, so the output is bit-identical
//! regardless of worker count or completion order. Completed chunks are
//! recorded in an optional JSON checkpoint, making long sweeps resumable.

use crate::asymptotics::{predict_for_class, Prediction};
use crate::graph::{analyze_with, StatSums, Workspace};
use crate::numtheory::{build_map_into, multiplicative_order, PrimeContext};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Bases per work chunk (also the checkpoint granularity).
pub const CHUNK_SIZE: u64 = 512;

const CHECKPOINT_VERSION: u32 = 1;
const CHECKPOINT_WRITE_INTERVAL: Duration = Duration::from_secs(2);

/// Which `m`-classes a sweep analyzes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassFilter {
    /// Every base in the range.
    All,
    /// Only bases whose class `m` is in the (sorted, deduplicated) list.
    Only(Vec<u64>),
}

impl ClassFilter {
    pub fn only(mut classes: Vec<u64>) -> Self {
        classes.sort_unstable();
        classes.dedup();
        ClassFilter::Only(classes)
    }

    fn admits(&self, m: u64) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::Only(list) => list.binary_search(&m).is_ok(),
        }
    }
}

/// Everything that defines one sweep run.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p: u64,
    /// Inclusive subrange of bases; `None` sweeps all of `1..=p-1`.
    pub g_range: Option<(u64, u64)>,
    pub classes: ClassFilter,
    /// Worker threads; 0 picks the machine's available parallelism.
    pub workers: usize,
    /// Checkpoint file for resumable runs.
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks (budgeted incremental runs); the
    /// checkpoint carries the rest.
    pub chunk_budget: Option<usize>,
}

impl SweepConfig {
    pub fn new(p: u64) -> Self {
        SweepConfig {
            p,
            g_range: None,
            classes: ClassFilter::All,
            workers: 0,
            checkpoint: None,
            chunk_budget: None,
        }
    }
}

/// Running aggregate of one `m`-class (`m = 0` is the combined census
/// over every analyzed base).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub p: u64,
    pub m: u64,
    /// Node count of every graph in the class, `p - 1`.
    pub n: u64,
    pub sums: StatSums,
}

/// One observed-vs-predicted table cell.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldComparison {
    pub field: &'static str,
    pub observed: f64,
    pub predicted: f64,
    /// `|observed - predicted| / predicted * 100`; 0 when both sides are
    /// zero, infinite when only the prediction is.
    pub pct_error: f64,
}

fn ratio(num: u128, den: u128) -> f64 {
    // split integer and fractional parts so means stay at full f64
    // precision even when the numerator exceeds 2^53
    let q = num / den;
    let r = num % den;
    q as f64 + r as f64 / den as f64
}

impl ClassSummary {
    fn new(p: u64, m: u64) -> Self {
        ClassSummary {
            p,
            m,
            n: p - 1,
            sums: StatSums::default(),
        }
    }

    pub fn graph_count(&self) -> u64 {
        self.sums.graphs
    }

    pub fn merge(&mut self, other: &ClassSummary) {
        assert_eq!((self.p, self.m), (other.p, other.m));
        self.sums.merge(&other.sums);
    }

    pub fn mean_components(&self) -> f64 {
        ratio(self.sums.components as u128, self.sums.graphs as u128)
    }
    pub fn mean_cyclic_nodes(&self) -> f64 {
        ratio(self.sums.cyclic_nodes as u128, self.sums.graphs as u128)
    }
    pub fn mean_image_nodes(&self) -> f64 {
        ratio(self.sums.image_nodes as u128, self.sums.graphs as u128)
    }
    pub fn mean_max_cycle(&self) -> f64 {
        ratio(self.sums.max_cycle as u128, self.sums.graphs as u128)
    }
    pub fn mean_max_tail(&self) -> f64 {
        ratio(self.sums.max_tail as u128, self.sums.graphs as u128)
    }
    /// Mean per-node average cycle length: the exact integer total divided
    /// by `graphs * n` in one step.
    pub fn mean_avg_cycle(&self) -> f64 {
        ratio(
            self.sums.sum_cycle_over_nodes,
            self.sums.graphs as u128 * self.n as u128,
        )
    }
    pub fn mean_avg_tail(&self) -> f64 {
        ratio(
            self.sums.sum_tail_over_nodes,
            self.sums.graphs as u128 * self.n as u128,
        )
    }

    /// The theoretical model for this class, when one exists (`m = 0`
    /// random, `m = 1` permutation, `m = 2` binary).
    pub fn prediction(&self) -> Option<Prediction> {
        predict_for_class(self.m, self.n)
    }

    /// Observed vs predicted for the seven reported statistics.
    pub fn comparisons(&self) -> Option<Vec<FieldComparison>> {
        let pred = self.prediction()?;
        let pairs = [
            ("components", self.mean_components(), pred.components),
            ("cyclic_nodes", self.mean_cyclic_nodes(), pred.cyclic_nodes),
            ("image_nodes", self.mean_image_nodes(), pred.image_nodes),
            ("avg_cycle", self.mean_avg_cycle(), pred.avg_cycle),
            ("avg_tail", self.mean_avg_tail(), pred.avg_tail),
            ("max_cycle", self.mean_max_cycle(), pred.max_cycle),
            ("max_tail", self.mean_max_tail(), pred.max_tail),
        ];
        Some(
            pairs
                .into_iter()
                .map(|(field, observed, predicted)| FieldComparison {
                    field,
                    observed,
                    predicted,
                    pct_error: pct_error(observed, predicted),
                })
                .collect(),
        )
    }
}

/// `|observed - predicted| / predicted * 100`.
pub fn pct_error(observed: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        if observed == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (observed - predicted).abs() / predicted * 100.0
    }
}

/// The best value of one statistic and every base attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ExtremalValue {
    pub value: u64,
    pub witnesses: Vec<u64>,
}

impl ExtremalValue {
    fn observe(&mut self, value: u64, g: u64) {
        if self.witnesses.is_empty() || value > self.value {
            self.value = value;
            self.witnesses.clear();
            self.witnesses.push(g);
        } else if value == self.value {
            self.witnesses.push(g);
        }
    }

    fn merge(&mut self, other: &ExtremalValue) {
        if other.witnesses.is_empty() {
            return;
        }
        if self.witnesses.is_empty() || other.value > self.value {
            *self = other.clone();
        } else if other.value == self.value {
            self.witnesses.extend_from_slice(&other.witnesses);
        }
    }

    fn normalize(&mut self) {
        self.witnesses.sort_unstable();
        self.witnesses.dedup();
    }
}

/// Extremal observations across the whole sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ExtremalRecords {
    pub longest_cycle: ExtremalValue,
    pub longest_tail: ExtremalValue,
    /// All bases whose graph has no cycle longer than a fixed point.
    pub unit_cycle_witnesses: Vec<u64>,
}

impl ExtremalRecords {
    fn merge(&mut self, other: &ExtremalRecords) {
        self.longest_cycle.merge(&other.longest_cycle);
        self.longest_tail.merge(&other.longest_tail);
        self.unit_cycle_witnesses
            .extend_from_slice(&other.unit_cycle_witnesses);
    }

    fn normalize(&mut self) {
        self.longest_cycle.normalize();
        self.longest_tail.normalize();
        self.unit_cycle_witnesses.sort_unstable();
        self.unit_cycle_witnesses.dedup();
    }
}

/// Everything a sweep produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub p: u64,
    pub n: u64,
    pub g_start: u64,
    pub g_end: u64,
    pub classes: ClassFilter,
    /// Per-class aggregates keyed by `m`.
    pub per_class: BTreeMap<u64, ClassSummary>,
    /// Combined aggregate over every analyzed base (`m = 0`).
    pub combined: ClassSummary,
    pub extremal: ExtremalRecords,
    /// Bases analyzed so far.
    pub processed: u64,
    pub chunks_done: u64,
    pub chunks_total: u64,
    /// True only for an unfiltered, full-range, fully processed sweep.
    pub complete: bool,
}

impl SweepResult {
    /// Summaries in report order: combined first, then ascending `m`.
    pub fn all_summaries(&self) -> impl Iterator<Item = &ClassSummary> {
        std::iter::once(&self.combined).chain(self.per_class.values())
    }
}

/// Identity of a sweep, used to match checkpoints to configurations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SweepKey {
    p: u64,
    g_start: u64,
    g_end: u64,
    classes: ClassFilter,
    chunk_size: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CheckpointState {
    version: u32,
    key: SweepKey,
    done_chunks: Vec<u64>,
    per_class: BTreeMap<u64, ClassSummary>,
    combined: ClassSummary,
    extremal: ExtremalRecords,
}

impl CheckpointState {
    fn fresh(key: SweepKey) -> Self {
        let combined = ClassSummary::new(key.p, 0);
        CheckpointState {
            version: CHECKPOINT_VERSION,
            key,
            done_chunks: Vec::new(),
            per_class: BTreeMap::new(),
            combined,
            extremal: ExtremalRecords::default(),
        }
    }

    fn load(path: &Path, key: &SweepKey) -> Result<Self> {
        let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let state: CheckpointState =
            serde_json::from_slice(&data).map_err(|e| Error::CheckpointCorrupt {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        if state.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointCorrupt {
                path: path.to_path_buf(),
                reason: format!("unsupported version {}", state.version),
            });
        }
        if &state.key != key {
            return Err(Error::CheckpointMismatch {
                path: path.to_path_buf(),
                reason: format!("checkpoint key {:?} vs requested {:?}", state.key, key),
            });
        }
        Ok(state)
    }

    fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let data = serde_json::to_vec(self).expect("checkpoint state serializes");
        std::fs::write(&tmp, data).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    fn absorb(&mut self, chunk: u64, partial: ChunkPartial) {
        debug_assert!(!self.done_chunks.contains(&chunk));
        self.done_chunks.push(chunk);
        for (m, sums) in partial.per_class {
            let entry = self
                .per_class
                .entry(m)
                .or_insert_with(|| ClassSummary::new(self.key.p, m));
            entry.sums.merge(&sums);
        }
        self.combined.sums.merge(&partial.combined);
        self.extremal.merge(&partial.extremal);
    }

    fn into_result(mut self, chunks_total: u64, full_range: bool) -> SweepResult {
        self.extremal.normalize();
        self.done_chunks.sort_unstable();
        let chunks_done = self.done_chunks.len() as u64;
        let all_done = chunks_done == chunks_total;
        SweepResult {
            p: self.key.p,
            n: self.key.p - 1,
            g_start: self.key.g_start,
            g_end: self.key.g_end,
            classes: self.key.classes.clone(),
            per_class: self.per_class,
            processed: self.combined.sums.graphs,
            combined: self.combined,
            extremal: self.extremal,
            chunks_done,
            chunks_total,
            complete: all_done && full_range && self.key.classes == ClassFilter::All,
        }
    }
}

/// Per-chunk accumulator produced by one worker.
struct ChunkPartial {
    per_class: BTreeMap<u64, StatSums>,
    combined: StatSums,
    extremal: ExtremalRecords,
}

fn process_chunk(
    ctx: &PrimeContext,
    classes: &ClassFilter,
    g_lo: u64,
    g_hi: u64,
    table: &mut Vec<u32>,
    ws: &mut Workspace,
) -> Result<ChunkPartial> {
    let mut partial = ChunkPartial {
        per_class: BTreeMap::new(),
        combined: StatSums::default(),
        extremal: ExtremalRecords::default(),
    };
    for g in g_lo..=g_hi {
        let m = ctx.n() / multiplicative_order(g, ctx)?;
        if !classes.admits(m) {
            continue;
        }
        build_map_into(g, ctx, table)?;
        let stats = analyze_with(ws, table)?;
        // Theorem check while sweeping in debug builds: an m-ary graph has
        // exactly (p-1)/m image nodes, and a binary one n/2 terminals.
        debug_assert_eq!(stats.image_nodes, ctx.n() / m, "g={g}");
        debug_assert!(m != 2 || stats.terminal_nodes == ctx.n() / 2, "g={g}");
        partial.per_class.entry(m).or_default().add(&stats);
        partial.combined.add(&stats);
        partial.extremal.longest_cycle.observe(stats.max_cycle, g);
        partial.extremal.longest_tail.observe(stats.max_tail, g);
        if stats.max_cycle == 1 {
            partial.extremal.unit_cycle_witnesses.push(g);
        }
    }
    Ok(partial)
}

/// Run a sweep to completion (or to its chunk budget), honoring and
/// updating the checkpoint if one is configured.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let ctx = PrimeContext::new(cfg.p)?;
    let n = ctx.n();
    let (g_start, g_end) = cfg.g_range.unwrap_or((1, n));
    if g_start < 1 || g_end > n || g_start > g_end {
        return Err(Error::BadGRange {
            start: g_start,
            end: g_end,
            max: n,
        });
    }
    let key = SweepKey {
        p: cfg.p,
        g_start,
        g_end,
        classes: cfg.classes.clone(),
        chunk_size: CHUNK_SIZE,
    };
    let span = g_end - g_start + 1;
    let chunks_total = span.div_ceil(CHUNK_SIZE);

    let state = match &cfg.checkpoint {
        Some(path) if path.exists() => CheckpointState::load(path, &key)?,
        _ => CheckpointState::fresh(key.clone()),
    };

    let mut pending: Vec<u64> = {
        let done: std::collections::BTreeSet<u64> = state.done_chunks.iter().copied().collect();
        (0..chunks_total).filter(|c| !done.contains(c)).collect()
    };
    if let Some(budget) = cfg.chunk_budget {
        pending.truncate(budget);
    }

    let workers = if cfg.workers == 0 {
        std::thread::available_parallelism().map_or(1, |v| v.get())
    } else {
        cfg.workers
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Pool(e.to_string()))?;

    let shared = Mutex::new((state, Instant::now()));
    let ctx_ref = &ctx;
    let classes = &cfg.classes;
    pool.install(|| {
        pending.par_iter().try_for_each_init(
            || (Vec::new(), Workspace::new()),
            |(table, ws), &chunk| -> Result<()> {
                let lo = g_start + chunk * CHUNK_SIZE;
                let hi = (lo + CHUNK_SIZE - 1).min(g_end);
                let partial = process_chunk(ctx_ref, classes, lo, hi, table, ws)?;
                let mut guard = shared.lock().unwrap();
                let (state, last_write) = &mut *guard;
                state.absorb(chunk, partial);
                if let Some(path) = &cfg.checkpoint {
                    if last_write.elapsed() >= CHECKPOINT_WRITE_INTERVAL {
                        state.save(path)?;
                        *last_write = Instant::now();
                    }
                }
                Ok(())
            },
        )
    })?;

    let (state, _) = shared.into_inner().unwrap();
    if let Some(path) = &cfg.checkpoint {
        state.save(path)?;
    }
    let full_range = g_start == 1 && g_end == n;
    Ok(state.into_result(chunks_total, full_range))
}
