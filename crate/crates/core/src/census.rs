//! Exact, sampled and unlabelled censuses of Cayley digraphs, hypothesis
//! flags for overgroups of the regular representation, and bound evaluators.
//!
//! Subsets of a group of order `r` are encoded as integers `0..2^r` (bit `g`
//! is element `g`) and enumerated in ascending order. Work is split into
//! contiguous chunks; workers take chunks from a shared counter and the main
//! thread merges per-chunk tallies in chunk order, so results do not depend on
//! the worker count.
//!
//! With orbit reduction the units of work are the orbit representatives of
//! `Aut(R)` acting on subsets (the least integer of each orbit, ascending),
//! each weighted by its orbit size.
//!
//! Checkpoint files are line-delimited JSON: a header line identifying the run,
//! then one line `{"range_start", "range_end", "tallies"}` per finished chunk,
//! written in chunk order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autgrp::{automorphism_group, canonical_form_with_group, CanonicalCode};
use crate::digraph::{cayley, ConnectionSet};
use crate::error::{Error, Result};
use crate::groups::{
    group_automorphisms, regular_representation, FiniteGroup, DEFAULT_LATTICE_CAP,
};
use crate::perm::{core_in, is_normal, maximal_overgroups, PermGroup, Permutation};

pub const DEFAULT_EXACT_CAP: usize = 20;
pub const DEFAULT_UNLABELLED_CAP: usize = 12;
pub const DEFAULT_CHUNK_SIZE: usize = 256;
/// Largest `|Aut(Γ)|` for which overgroups are enumerated.
pub const DEFAULT_OVERGROUP_CAP: u128 = 50_000;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "DRR")]
    Drr,
    #[serde(rename = "NORMAL_NON_DRR")]
    NormalNonDrr,
    #[serde(rename = "NON_NORMAL")]
    NonNormal,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Drr => "DRR",
            Classification::NormalNonDrr => "NORMAL_NON_DRR",
            Classification::NonNormal => "NON_NORMAL",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub set: ConnectionSet,
    pub aut_order: u128,
    pub classification: Classification,
    pub orbit_size: u64,
}

impl CensusRecord {
    pub const CSV_HEADER: &'static str = "subset_hex,aut_order,class,orbit_size";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.set.to_hex(),
            self.aut_order,
            self.classification,
            self.orbit_size
        )
    }
}

/// Optional callback receiving records in enumeration order.
pub type RecordSink<'a> = Option<&'a mut dyn FnMut(&CensusRecord) -> Result<()>>;

/// Orbit-weighted counts per classification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub drr: u64,
    pub normal_non_drr: u64,
    pub non_normal: u64,
}

impl Tally {
    pub fn add(&mut self, class: Classification, weight: u64) {
        match class {
            Classification::Drr => self.drr += weight,
            Classification::NormalNonDrr => self.normal_non_drr += weight,
            Classification::NonNormal => self.non_normal += weight,
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.drr += other.drr;
        self.normal_non_drr += other.normal_non_drr;
        self.non_normal += other.non_normal;
    }

    pub fn total(&self) -> u64 {
        self.drr + self.normal_non_drr + self.non_normal
    }
}

/// A reduced fraction with its decimal rendering to six places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub numerator: u64,
    pub denominator: u64,
    pub decimal: String,
}

impl Proportion {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        let g = numerator.gcd(&denominator).max(1);
        let (num, den) = (numerator / g, denominator / g);
        // Round half up at the sixth decimal, in integer arithmetic.
        let scaled = (2 * num as u128 * 1_000_000 + den as u128) / (2 * den.max(1) as u128);
        let decimal = format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000);
        Proportion {
            numerator: num,
            denominator: den,
            decimal,
        }
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} ({})",
            self.numerator, self.denominator, self.decimal
        )
    }
}

/// Wilson score interval at 95%.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    pub half_width: f64,
}

impl Interval {
    pub fn wilson(successes: u64, trials: u64) -> Self {
        let k = trials as f64;
        let p = successes as f64 / k;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / k;
        let center = (p + z2 / (2.0 * k)) / denom;
        let half_width = Z95 / denom * (p * (1.0 - p) / k + z2 / (4.0 * k * k)).sqrt();
        Interval {
            low: (center - half_width).max(0.0),
            high: (center + half_width).min(1.0),
            half_width,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Exact,
    Sampled,
    Unlabelled,
}

impl fmt::Display for CensusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CensusMode::Exact => "exact",
            CensusMode::Sampled => "sampled",
            CensusMode::Unlabelled => "unlabelled",
        })
    }
}

impl FromStr for CensusMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CensusMode::Exact),
            "sampled" => Ok(CensusMode::Sampled),
            "unlabelled" | "unlabeled" => Ok(CensusMode::Unlabelled),
            _ => Err(Error::Parse(format!("unknown census mode {s:?}"))),
        }
    }
}

/// Isomorphism-class counts of Cayley digraphs on one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnlabelledCounts {
    /// Isomorphism classes of Cayley digraphs.
    pub cd_count: u64,
    /// Isomorphism classes that are DRRs.
    pub drr_count: u64,
    /// `Aut(R)`-orbits on DRR connection sets.
    pub drr_orbit_count: u64,
    /// DRR connection sets.
    pub drr_subset_count: u64,
    pub aut_r_order: u64,
}

/// Aggregated census result. `wall_time` is not serialized, so summaries of
/// identical runs are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub group: String,
    pub r: usize,
    pub mode: CensusMode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduce_by_aut: Option<bool>,
    pub total: u64,
    pub counts: Tally,
    pub drr_proportion: Proportion,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub confidence_95: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unlabelled: Option<UnlabelledCounts>,
    #[serde(skip)]
    pub wall_time: Option<Duration>,
}

impl CensusSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Classifies Cayley digraphs on one group, reusing its regular representation.
pub struct Classifier<'a> {
    group: &'a FiniteGroup,
    regular: PermGroup,
}

impl<'a> Classifier<'a> {
    pub fn new(group: &'a FiniteGroup) -> Self {
        Classifier {
            group,
            regular: regular_representation(group),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn regular(&self) -> &PermGroup {
        &self.regular
    }

    /// Full automorphism group of `Γ(R, S)` and its classification.
    pub fn analyse(&self, s: &ConnectionSet) -> Result<(PermGroup, Classification)> {
        let d = cayley(self.group, s)?;
        let aut = automorphism_group(&d, Some(&self.regular))?;
        let class = if aut.order() == self.group.order() as u128 {
            Classification::Drr
        } else if is_normal(&aut, &self.regular)? {
            Classification::NormalNonDrr
        } else {
            Classification::NonNormal
        };
        Ok((aut, class))
    }

    pub fn classify(&self, s: &ConnectionSet) -> Result<CensusRecord> {
        let (aut, classification) = self.analyse(s)?;
        Ok(CensusRecord {
            set: s.clone(),
            aut_order: aut.order(),
            classification,
            orbit_size: 1,
        })
    }

    fn classify_mask(&self, mask: u64) -> Result<(u128, Classification)> {
        let (aut, class) = self.analyse(&ConnectionSet::from_mask(self.group.order(), mask))?;
        Ok((aut.order(), class))
    }
}

/// Classification of a single connection set; `orbit_size` is reported as 1.
pub fn classify(group: &FiniteGroup, s: &ConnectionSet) -> Result<CensusRecord> {
    Classifier::new(group).classify(s)
}

/// Action of `Aut(R)` on subsets encoded as `u64` masks.
pub struct SubsetAction {
    r: usize,
    /// Per generator, per input byte, the image of each byte value.
    tables: Vec<Vec<[u64; 256]>>,
    aut_order: u64,
}

impl SubsetAction {
    pub fn new(group: &FiniteGroup) -> Result<Self> {
        let r = group.order();
        if r > 64 {
            return Err(Error::CapExceeded {
                what: "group order for subset masks",
                value: r as u128,
                cap: 64,
            });
        }
        let auts = group_automorphisms(group, DEFAULT_LATTICE_CAP)?;
        let aut_order = auts.len() as u64;
        let generated = PermGroup::from_elements_incremental(r, auts.iter())?;
        let tables = generated
            .generators()
            .iter()
            .map(|phi| byte_tables(r, phi))
            .collect();
        Ok(SubsetAction {
            r,
            tables,
            aut_order,
        })
    }

    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    fn apply(tables: &[[u64; 256]], mask: u64) -> u64 {
        tables
            .iter()
            .enumerate()
            .fold(0, |acc, (b, t)| acc | t[(mask >> (8 * b)) as usize & 0xff])
    }

    /// The orbit of `mask`, sorted.
    pub fn orbit(&self, mask: u64) -> Vec<u64> {
        let mut seen = BTreeSet::from([mask]);
        let mut stack = vec![mask];
        while let Some(m) = stack.pop() {
            for t in &self.tables {
                let img = Self::apply(t, m);
                if seen.insert(img) {
                    stack.push(img);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Orbit representatives (least mask of each orbit, ascending) with orbit
    /// sizes, over all `2^r` subsets.
    pub fn representatives(&self) -> (Vec<u64>, Vec<u64>) {
        let total = 1u64 << self.r;
        let mut seen = vec![0u64; (total as usize).div_ceil(64)];
        let mark = |seen: &mut Vec<u64>, m: u64| {
            let (w, b) = ((m / 64) as usize, m % 64);
            let was = seen[w] >> b & 1 == 1;
            seen[w] |= 1 << b;
            !was
        };
        let (mut reps, mut sizes) = (Vec::new(), Vec::new());
        let mut stack = Vec::new();
        for m in 0..total {
            if !mark(&mut seen, m) {
                continue;
            }
            let mut size = 1u64;
            stack.push(m);
            while let Some(x) = stack.pop() {
                for t in &self.tables {
                    let img = Self::apply(t, x);
                    if mark(&mut seen, img) {
                        size += 1;
                        stack.push(img);
                    }
                }
            }
            reps.push(m);
            sizes.push(size);
        }
        (reps, sizes)
    }
}

fn byte_tables(r: usize, phi: &Permutation) -> Vec<[u64; 256]> {
    (0..r.div_ceil(8).max(1))
        .map(|b| {
            let mut table = [0u64; 256];
            for (v, slot) in table.iter_mut().enumerate() {
                for bit in 0..8 {
                    let g = 8 * b + bit;
                    if v >> bit & 1 == 1 && g < r {
                        *slot |= 1 << phi.apply(g);
                    }
                }
            }
            table
        })
        .collect()
}

/// Worker count from `n`, or the machine's parallelism when `n == 0`.
pub fn resolve_workers(n: usize) -> usize {
    if n > 0 {
        n
    } else {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    }
}

/// Runs `work` on chunks `start..end` with `workers` threads and hands results
/// to `consume` in chunk order. `consume` returns `false` to stop early.
pub(crate) fn parallel_chunks<T, W, C>(
    start: usize,
    end: usize,
    workers: usize,
    work: W,
    mut consume: C,
) -> Result<()>
where
    T: Send,
    W: Fn(usize) -> Result<T> + Sync,
    C: FnMut(usize, T) -> Result<bool>,
{
    if start >= end {
        return Ok(());
    }
    let next = AtomicUsize::new(start);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<T>)>();
    std::thread::scope(|scope| {
        for _ in 0..resolve_workers(workers).min(end - start) {
            let tx = tx.clone();
            let (next, stop, work) = (&next, &stop, &work);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= end {
                    break;
                }
                if tx.send((idx, work(idx))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending: BTreeMap<usize, Result<T>> = BTreeMap::new();
        let mut expected = start;
        let mut outcome = Ok(());
        for (idx, res) in rx {
            if outcome.is_err() {
                continue;
            }
            pending.insert(idx, res);
            while let Some(res) = pending.remove(&expected) {
                expected += 1;
                match res.and_then(|v| consume(expected - 1, v)) {
                    Ok(true) => {}
                    Ok(false) => {
                        stop.store(true, Ordering::Relaxed);
                        outcome = Err(None);
                        break;
                    }
                    Err(e) => {
                        stop.store(true, Ordering::Relaxed);
                        outcome = Err(Some(e));
                        break;
                    }
                }
            }
        }
        match outcome {
            Ok(()) | Err(None) => Ok(()),
            Err(Some(e)) => Err(e),
        }
    })
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub reduce_by_aut: bool,
    /// 0 means one worker per available core.
    pub workers: usize,
    pub chunk_size: usize,
    pub cap: usize,
    pub checkpoint: Option<PathBuf>,
    /// Return [`Error::Interrupted`] after this many chunks complete in this call.
    pub stop_after_chunks: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            reduce_by_aut: true,
            workers: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
            cap: DEFAULT_EXACT_CAP,
            checkpoint: None,
            stop_after_chunks: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CheckpointHeader {
    group: String,
    mode: CensusMode,
    seed: Option<u64>,
    reduce_by_aut: bool,
    chunk_size: usize,
    units: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CheckpointLine {
    range_start: u64,
    range_end: u64,
    tallies: Tally,
}

/// Completed chunks from an existing checkpoint, rewriting the file without
/// any torn trailing line; or a fresh file holding just the header.
fn open_checkpoint(path: &Path, header: &CheckpointHeader) -> Result<(File, Vec<CheckpointLine>)> {
    let mut done = Vec::new();
    if path.exists() {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        if let Some(first) = lines.next() {
            let found: CheckpointHeader = serde_json::from_str(&first?)
                .map_err(|e| Error::CheckpointMismatch(format!("unreadable header: {e}")))?;
            if found != *header {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is for {found:?}, this run is {header:?}"
                )));
            }
            for line in lines {
                let Ok(line) = line else { break };
                let Ok(rec) = serde_json::from_str::<CheckpointLine>(&line) else {
                    break;
                };
                let expected_start = done.len() as u64 * header.chunk_size as u64;
                if rec.range_start != expected_start {
                    break;
                }
                done.push(rec);
            }
        }
    }
    let mut file = File::create(path)?;
    writeln!(file, "{}", serde_json::to_string(header)?)?;
    for rec in &done {
        writeln!(file, "{}", serde_json::to_string(rec)?)?;
    }
    file.flush()?;
    drop(file);
    let file = OpenOptions::new().append(true).open(path)?;
    Ok((file, done))
}

/// Classifies every subset of `group` (or one per `Aut(R)`-orbit, weighted).
///
/// `on_record` receives records in enumeration order for the chunks computed
/// in this call; chunks restored from a checkpoint are not replayed.
pub fn exact_census(
    group: &FiniteGroup,
    opts: &ExactOptions,
    mut on_record: RecordSink<'_>,
) -> Result<CensusSummary> {
    let started = Instant::now();
    let r = group.order();
    if r > opts.cap.min(63) {
        return Err(Error::CapExceeded {
            what: "group order for exact census",
            value: r as u128,
            cap: opts.cap.min(63) as u128,
        });
    }
    if opts.chunk_size == 0 {
        return Err(Error::InvalidParams("chunk size must be positive".into()));
    }
    let classifier = Classifier::new(group);
    let action = SubsetAction::new(group)?;
    let (reps, sizes) = action.representatives();
    let units: u64 = if opts.reduce_by_aut {
        reps.len() as u64
    } else {
        1 << r
    };
    let mut orbit_size_of = BTreeMap::new();
    if on_record.is_some() && !opts.reduce_by_aut {
        for (rep, &size) in reps.iter().zip(&sizes) {
            for m in action.orbit(*rep) {
                orbit_size_of.insert(m, size);
            }
        }
    }
    let chunk = opts.chunk_size as u64;
    let num_chunks = units.div_ceil(chunk) as usize;
    let header = CheckpointHeader {
        group: group.id().to_string(),
        mode: CensusMode::Exact,
        seed: None,
        reduce_by_aut: opts.reduce_by_aut,
        chunk_size: opts.chunk_size,
        units,
    };
    let mut tally = Tally::default();
    let (mut ckpt, start_chunk) = match &opts.checkpoint {
        Some(path) => {
            let (file, done) = open_checkpoint(path, &header)?;
            done.iter().for_each(|l| tally.merge(&l.tallies));
            (Some(file), done.len())
        }
        None => (None, 0),
    };
    let want_records = on_record.is_some();
    let work = |c: usize| -> Result<(Tally, Vec<CensusRecord>)> {
        let (lo, hi) = (c as u64 * chunk, ((c as u64 + 1) * chunk).min(units));
        let mut t = Tally::default();
        let mut records = Vec::new();
        for u in lo..hi {
            let (mask, weight) = if opts.reduce_by_aut {
                (reps[u as usize], sizes[u as usize])
            } else {
                (u, 1)
            };
            let (aut_order, class) = classifier.classify_mask(mask)?;
            t.add(class, weight);
            if want_records {
                let orbit_size = if opts.reduce_by_aut {
                    weight
                } else {
                    orbit_size_of[&mask]
                };
                records.push(CensusRecord {
                    set: ConnectionSet::from_mask(r, mask),
                    aut_order,
                    classification: class,
                    orbit_size,
                });
            }
        }
        Ok((t, records))
    };
    let mut completed = 0usize;
    parallel_chunks(
        start_chunk,
        num_chunks,
        opts.workers,
        work,
        |c, (t, records)| {
            tally.merge(&t);
            if let Some(f) = ckpt.as_mut() {
                let line = CheckpointLine {
                    range_start: c as u64 * chunk,
                    range_end: ((c as u64 + 1) * chunk).min(units),
                    tallies: t,
                };
                writeln!(f, "{}", serde_json::to_string(&line)?)?;
                f.flush()?;
            }
            if let Some(cb) = on_record.as_mut() {
                records.iter().try_for_each(cb)?;
            }
            completed += 1;
            Ok(opts.stop_after_chunks.is_none_or(|n| completed < n))
        },
    )?;
    if start_chunk + completed < num_chunks {
        return Err(Error::Interrupted {
            completed: start_chunk + completed,
        });
    }
    let total = 1u64 << r;
    debug_assert_eq!(tally.total(), total);
    Ok(CensusSummary {
        group: group.id().to_string(),
        r,
        mode: CensusMode::Exact,
        reduce_by_aut: Some(opts.reduce_by_aut),
        total,
        counts: tally,
        drr_proportion: Proportion::new(tally.drr, total),
        seed: None,
        confidence_95: None,
        unlabelled: None,
        wall_time: Some(started.elapsed()),
    })
}

/// Classifies `samples` subsets, each made of `r` independent fair bits drawn
/// from `ChaCha8Rng::seed_from_u64(seed)` (low `r` bits of one `u64` per sample).
///
/// Records carry the `Aut(R)`-orbit size of each sampled set.
pub fn sampled_census(
    group: &FiniteGroup,
    samples: u64,
    seed: u64,
    workers: usize,
    mut on_record: RecordSink<'_>,
) -> Result<CensusSummary> {
    let started = Instant::now();
    let r = group.order();
    if samples == 0 {
        return Err(Error::InvalidParams(
            "sample count must be at least 1".into(),
        ));
    }
    if r > 64 {
        return Err(Error::CapExceeded {
            what: "group order for sampled census",
            value: r as u128,
            cap: 64,
        });
    }
    let keep = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks: Vec<u64> = (0..samples).map(|_| rng.gen::<u64>() & keep).collect();
    let classifier = Classifier::new(group);
    let action = if on_record.is_some() {
        Some(SubsetAction::new(group)?)
    } else {
        None
    };
    let chunk = DEFAULT_CHUNK_SIZE;
    let mut tally = Tally::default();
    let work = |c: usize| -> Result<Vec<CensusRecord>> {
        masks[c * chunk..((c + 1) * chunk).min(masks.len())]
            .iter()
            .map(|&m| {
                let (aut_order, classification) = classifier.classify_mask(m)?;
                let orbit_size = action.as_ref().map_or(0, |a| a.orbit(m).len() as u64);
                Ok(CensusRecord {
                    set: ConnectionSet::from_mask(r, m),
                    aut_order,
                    classification,
                    orbit_size,
                })
            })
            .collect()
    };
    parallel_chunks(
        0,
        masks.len().div_ceil(chunk),
        workers,
        work,
        |_, records| {
            for rec in &records {
                tally.add(rec.classification, 1);
                if let Some(cb) = on_record.as_mut() {
                    cb(rec)?;
                }
            }
            Ok(true)
        },
    )?;
    Ok(CensusSummary {
        group: group.id().to_string(),
        r,
        mode: CensusMode::Sampled,
        reduce_by_aut: None,
        total: samples,
        counts: tally,
        drr_proportion: Proportion::new(tally.drr, samples),
        seed: Some(seed),
        confidence_95: Some(Interval::wilson(tally.drr, samples)),
        unlabelled: None,
        wall_time: Some(started.elapsed()),
    })
}

/// Counts Cayley digraphs on `group` up to isomorphism, by canonical codes of
/// one connection set per `Aut(R)`-orbit.
pub fn unlabelled_census(group: &FiniteGroup, cap: usize, workers: usize) -> Result<CensusSummary> {
    let started = Instant::now();
    let r = group.order();
    if r > cap.min(63) {
        return Err(Error::CapExceeded {
            what: "group order for unlabelled census",
            value: r as u128,
            cap: cap.min(63) as u128,
        });
    }
    let classifier = Classifier::new(group);
    let action = SubsetAction::new(group)?;
    let (reps, sizes) = action.representatives();
    let chunk = 64;
    let work = |c: usize| -> Result<Vec<(CanonicalCode, Classification, u64)>> {
        (c * chunk..((c + 1) * chunk).min(reps.len()))
            .map(|i| {
                let s = ConnectionSet::from_mask(r, reps[i]);
                let (aut, class) = classifier.analyse(&s)?;
                let code = canonical_form_with_group(&cayley(group, &s)?, &aut);
                Ok((code, class, sizes[i]))
            })
            .collect()
    };
    let mut all = BTreeSet::new();
    let mut drr = BTreeSet::new();
    let mut tally = Tally::default();
    let mut drr_orbits = 0u64;
    parallel_chunks(0, reps.len().div_ceil(chunk), workers, work, |_, items| {
        for (code, class, size) in items {
            tally.add(class, size);
            if class == Classification::Drr {
                drr_orbits += 1;
                drr.insert(code.clone());
            }
            all.insert(code);
        }
        Ok(true)
    })?;
    let total = 1u64 << r;
    Ok(CensusSummary {
        group: group.id().to_string(),
        r,
        mode: CensusMode::Unlabelled,
        reduce_by_aut: Some(true),
        total,
        counts: tally,
        drr_proportion: Proportion::new(drr.len() as u64, all.len() as u64),
        seed: None,
        confidence_95: None,
        unlabelled: Some(UnlabelledCounts {
            cd_count: all.len() as u64,
            drr_count: drr.len() as u64,
            drr_orbit_count: drr_orbits,
            drr_subset_count: tally.drr,
            aut_r_order: action.aut_order(),
        }),
        wall_time: Some(started.elapsed()),
    })
}

/// Flags for one overgroup `G` with `R` maximal in `G <= Aut(Γ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvergroupFlags {
    pub order: u128,
    /// `|G_1|`, the stabilizer of vertex 0.
    pub stabilizer_order: u128,
    /// `|G_R|`, the core of `R` in `G`.
    pub core_order: u128,
    /// `|G_1| > 2^(r^0.499)`.
    pub h2: bool,
    /// `|G_R| <= 4 log2 r`.
    pub h3: bool,
    /// Some `G_R`-orbit is not fixed setwise by `G_1`.
    pub h4: bool,
    /// `G_R` is trivial.
    pub h5: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub aut_order: u128,
    /// `Aut(Γ) > R`.
    pub h1: bool,
    pub overgroups: Vec<OvergroupFlags>,
}

pub fn hypothesis_flags(
    group: &FiniteGroup,
    s: &ConnectionSet,
    cap: u128,
) -> Result<HypothesisReport> {
    let classifier = Classifier::new(group);
    let (aut, _) = classifier.analyse(s)?;
    let reg = classifier.regular();
    let r = group.order();
    let mut overgroups = Vec::new();
    if aut.order() > r as u128 {
        if aut.order() > cap {
            return Err(Error::CapExceeded {
                what: "automorphism group order",
                value: aut.order(),
                cap,
            });
        }
        let log2r = (r as f64).log2();
        for g in maximal_overgroups(&aut, reg, cap)? {
            let stab = g.point_stabilizer(0);
            let core = core_in(&g, reg, cap)?;
            let orbits = core.orbits();
            let h4 = stab
                .generators()
                .iter()
                .any(|x| orbits.cells().iter().any(|o| !x.fixes_set(o)));
            overgroups.push(OvergroupFlags {
                order: g.order(),
                stabilizer_order: stab.order(),
                core_order: core.order(),
                h2: (stab.order() as f64).log2() > (r as f64).powf(0.499),
                h3: core.order() as f64 <= 4.0 * log2r,
                h4,
                h5: core.order() == 1,
            });
        }
    }
    Ok(HypothesisReport {
        aut_order: aut.order(),
        h1: aut.order() > r as u128,
        overgroups,
    })
}

/// Which explicit bound to evaluate. Each is reported as `log2` of the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// Non-DRR subsets: `r - b r^0.499 / (4 (log2 r)^3) + 2`.
    #[serde(rename = "T1.3")]
    T1_3,
    /// Subsets with a stabilizer element normalising `N` and moving a cell:
    /// `r - n/4 + (log2 n)^2 + log2 n`.
    #[serde(rename = "L2.2")]
    L2_2,
    /// Same without the normalising condition:
    /// `r + log2 C(n, 2) + ((r/n - 2)/3) log2(3/4)`.
    #[serde(rename = "L2.3")]
    L2_3,
    /// Large normal subgroup version, `n >= 71`:
    /// `r - n/4 + (log2 n)^2 + (log2 r)^2 + log2 r`.
    #[serde(rename = "T2.4")]
    T2_4,
    /// Small normal subgroup version:
    /// `r - ((r/n - 2)/3) log2(4/3) + (log2 r)^2 + log2 r + log2 n - 1`.
    #[serde(rename = "T2.5")]
    T2_5,
    /// Overgroups with a small stabilizer: `3r/4 + r^(1 - epsilon)`.
    #[serde(rename = "T3.3")]
    T3_3,
    /// Overgroups with a large core:
    /// `r - (r / (4 log2 r)) log2 e - log2(4 log2 r) + (log2 r)^2 + log2 r`.
    #[serde(rename = "T3.4")]
    T3_4,
    /// Odd-quotient reduction: `r - b r^0.499 / (4 (log2 r)^3) + 1`.
    #[serde(rename = "T6.1")]
    T6_1,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::T1_3,
        BoundKind::L2_2,
        BoundKind::L2_3,
        BoundKind::T2_4,
        BoundKind::T2_5,
        BoundKind::T3_3,
        BoundKind::T3_4,
        BoundKind::T6_1,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BoundKind::T1_3 => "T1.3",
            BoundKind::L2_2 => "L2.2",
            BoundKind::L2_3 => "L2.3",
            BoundKind::T2_4 => "T2.4",
            BoundKind::T2_5 => "T2.5",
            BoundKind::T3_3 => "T3.3",
            BoundKind::T3_4 => "T3.4",
            BoundKind::T6_1 => "T6.1",
        }
    }

    fn needs_n(self) -> bool {
        matches!(
            self,
            BoundKind::L2_2 | BoundKind::L2_3 | BoundKind::T2_4 | BoundKind::T2_5
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown bound kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub r: u64,
    /// `|N|` for the kinds that involve a normal subgroup.
    pub n: Option<u64>,
    pub b: f64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(r: u64) -> Self {
        BoundParams {
            r,
            n: None,
            b: 1.0,
            epsilon: 0.001,
        }
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn validate(&self, kind: BoundKind) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.r < 2 {
            return bad(format!("r = {} must be at least 2", self.r));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return bad(format!("epsilon = {} must lie in (0, 1/2)", self.epsilon));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return bad(format!("b = {} must be a non-negative real", self.b));
        }
        if kind.needs_n() {
            let Some(n) = self.n else {
                return bad(format!("{kind} needs n"));
            };
            let min = match kind {
                BoundKind::T2_4 => 71,
                BoundKind::L2_3 => 2,
                _ => 1,
            };
            if n < min || n > self.r {
                return bad(format!(
                    "{kind} needs {min} <= n <= r, got n = {n}, r = {}",
                    self.r
                ));
            }
        }
        Ok(())
    }
}

/// `log2` of the bound, in double precision.
pub fn bound_eval(kind: BoundKind, p: &BoundParams) -> Result<f64> {
    p.validate(kind)?;
    let r = p.r as f64;
    let n = p.n.unwrap_or(0) as f64;
    let lr = r.log2();
    let ln = n.log2();
    Ok(match kind {
        BoundKind::T1_3 => r - p.b * r.powf(0.499) / (4.0 * lr.powi(3)) + 2.0,
        BoundKind::T6_1 => r - p.b * r.powf(0.499) / (4.0 * lr.powi(3)) + 1.0,
        BoundKind::L2_2 => r - n / 4.0 + ln * ln + ln,
        BoundKind::L2_3 => {
            r + (n * (n - 1.0) / 2.0).log2() + ((r / n - 2.0) / 3.0) * 0.75f64.log2()
        }
        BoundKind::T2_4 => r - n / 4.0 + ln * ln + lr * lr + lr,
        BoundKind::T2_5 => {
            r - ((r / n - 2.0) / 3.0) * (4.0f64 / 3.0).log2() + lr * lr + lr + ln - 1.0
        }
        BoundKind::T3_3 => 3.0 * r / 4.0 + r.powf(1.0 - p.epsilon),
        BoundKind::T3_4 => {
            r - (r / (4.0 * lr)) * std::f64::consts::LOG2_E - (4.0 * lr).log2() + lr * lr + lr
        }
    })
}

/// `log2 x` when `x` is a power of two.
fn exact_log2(x: Ratio<i64>) -> Option<Ratio<i64>> {
    let (num, den) = (*x.numer(), *x.denom());
    if num <= 0 || !(num as u64).is_power_of_two() || !(den as u64).is_power_of_two() {
        return None;
    }
    Some(Ratio::from_integer(
        num.trailing_zeros() as i64 - den.trailing_zeros() as i64,
    ))
}

/// `log2` of the bound as an exact rational, when every term is rational;
/// `None` otherwise.
pub fn bound_eval_exact(kind: BoundKind, p: &BoundParams) -> Result<Option<Ratio<i64>>> {
    p.validate(kind)?;
    let r = Ratio::from_integer(p.r as i64);
    let n = Ratio::from_integer(p.n.unwrap_or(1) as i64);
    let zero_b = p.b == 0.0;
    let lr = exact_log2(r);
    let ln = exact_log2(n);
    let q = (r / n - Ratio::from_integer(2)) / Ratio::from_integer(3);
    Ok(match kind {
        BoundKind::T1_3 => zero_b.then(|| r + 2),
        BoundKind::T6_1 => zero_b.then(|| r + 1),
        BoundKind::L2_2 => ln.map(|l| r - n / 4 + l * l + l),
        BoundKind::L2_3 => {
            let pairs = n * (n - 1) / 2;
            if *q.numer() == 0 {
                exact_log2(pairs).map(|l| r + l)
            } else {
                None
            }
        }
        BoundKind::T2_4 => ln.zip(lr).map(|(l, m)| r - n / 4 + l * l + m * m + m),
        BoundKind::T2_5 => {
            if *q.numer() == 0 {
                ln.zip(lr).map(|(l, m)| r + m * m + m + l - 1)
            } else {
                None
            }
        }
        BoundKind::T3_3 | BoundKind::T3_4 => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::brute_force_automorphisms;
    use crate::groups::{catalog_up_to, make_group};

    fn grp(s: &str) -> FiniteGroup {
        make_group(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c3 = grp("cyclic:3");
        let rec = classify(&c3, &ConnectionSet::from_elements(3, [1]).unwrap()).unwrap();
        assert_eq!(
            (rec.aut_order, rec.classification),
            (3, Classification::Drr)
        );
        let c4 = grp("cyclic:4");
        let rec = classify(&c4, &ConnectionSet::empty(4)).unwrap();
        assert_eq!(
            (rec.aut_order, rec.classification),
            (24, Classification::NonNormal)
        );
        assert!(classify(&c4, &ConnectionSet::empty(3)).is_err());
        assert_eq!(
            CensusRecord::CSV_HEADER,
            "subset_hex,aut_order,class,orbit_size"
        );
        assert_eq!(rec.to_csv_row(), "00,24,NON_NORMAL,1");
    }

    #[test]
    fn klein_four_has_no_drr() {
        let v4 = grp("klein4");
        for mask in 0..16 {
            let d = cayley(&v4, &ConnectionSet::from_mask(4, mask)).unwrap();
            assert!(brute_force_automorphisms(&d).unwrap().order() > 4);
            assert_ne!(
                classify(&v4, &ConnectionSet::from_mask(4, mask))
                    .unwrap()
                    .classification,
                Classification::Drr
            );
        }
        let summary = exact_census(&v4, &ExactOptions::default(), None).unwrap();
        assert_eq!(summary.counts.drr, 0);
        assert_eq!(summary.total, 16);
    }

    #[test]
    fn small_cyclic_censuses() {
        let s1 = exact_census(&grp("cyclic:1"), &ExactOptions::default(), None).unwrap();
        assert_eq!((s1.counts.drr, s1.total), (2, 2));
        // Oracle count for order 2: every subset gives Aut = Z_2.
        let c2 = grp("cyclic:2");
        let oracle = (0..4u64)
            .filter(|&m| {
                brute_force_automorphisms(&cayley(&c2, &ConnectionSet::from_mask(2, m)).unwrap())
                    .unwrap()
                    .order()
                    == 2
            })
            .count() as u64;
        assert_eq!(oracle, 4);
        assert_eq!(
            exact_census(&c2, &ExactOptions::default(), None)
                .unwrap()
                .counts
                .drr,
            oracle
        );
    }

    #[test]
    fn classification_is_constant_on_aut_orbits() {
        for spec in catalog_up_to(8) {
            let group = make_group(&spec).unwrap();
            let r = group.order();
            let classifier = Classifier::new(&group);
            let auts = group_automorphisms(&group, 64).unwrap();
            let results: Vec<(u128, Classification)> = (0..1u64 << r)
                .map(|m| classifier.classify_mask(m).unwrap())
                .collect();
            for phi in &auts {
                for m in 0..1u64 << r {
                    let img = ConnectionSet::from_mask(r, m).image(phi).mask().unwrap();
                    assert_eq!(results[m as usize], results[img as usize], "{spec}");
                }
            }
            for (m, (order, class)) in results.iter().enumerate() {
                if *class == Classification::Drr {
                    assert_eq!(*order, r as u128);
                    let (aut, _) = classifier
                        .analyse(&ConnectionSet::from_mask(r, m as u64))
                        .unwrap();
                    assert!(is_normal(&aut, classifier.regular()).unwrap());
                }
            }
        }
    }

    #[test]
    fn reduction_and_workers_do_not_change_tallies() {
        for spec in catalog_up_to(10) {
            let group = make_group(&spec).unwrap();
            let plain = exact_census(
                &group,
                &ExactOptions {
                    reduce_by_aut: false,
                    chunk_size: 37,
                    ..Default::default()
                },
                None,
            )
            .unwrap();
            let reduced = exact_census(
                &group,
                &ExactOptions {
                    workers: 3,
                    ..Default::default()
                },
                None,
            )
            .unwrap();
            assert_eq!(plain.counts, reduced.counts, "{spec}");
            assert_eq!(plain.counts.total(), 1 << group.order());
        }
    }

    #[test]
    fn records_stream_in_order() {
        let group = grp("cyclic:4");
        let mut rows = Vec::new();
        let mut cb = |rec: &CensusRecord| {
            rows.push(rec.to_csv_row());
            Ok(())
        };
        let opts = ExactOptions {
            reduce_by_aut: false,
            workers: 4,
            chunk_size: 3,
            ..Default::default()
        };
        exact_census(&group, &opts, Some(&mut cb)).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0], "00,24,NON_NORMAL,1");
        assert_eq!(rows[2], "02,4,DRR,2");
    }

    #[test]
    fn checkpoint_resume_is_byte_identical() {
        let group = grp("dihedral:8");
        let dir = tempfile::tempdir().unwrap();
        let reference = exact_census(
            &group,
            &ExactOptions {
                chunk_size: 5,
                ..Default::default()
            },
            None,
        )
        .unwrap();
        for stop in [1, 2, 4] {
            let path = dir.path().join(format!("ck{stop}.jsonl"));
            let mut opts = ExactOptions {
                chunk_size: 5,
                workers: 2,
                checkpoint: Some(path.clone()),
                ..Default::default()
            };
            opts.stop_after_chunks = Some(stop);
            let mut runs = 0;
            let summary = loop {
                runs += 1;
                match exact_census(&group, &opts, None) {
                    Ok(s) => break s,
                    Err(Error::Interrupted { .. }) => continue,
                    Err(e) => panic!("{e}"),
                }
            };
            assert!(runs > 1);
            assert_eq!(summary.to_json(), reference.to_json());
        }
        let path = dir.path().join("ck1.jsonl");
        let other = ExactOptions {
            chunk_size: 5,
            reduce_by_aut: false,
            checkpoint: Some(path),
            ..Default::default()
        };
        assert!(matches!(
            exact_census(&group, &other, None),
            Err(Error::CheckpointMismatch(_))
        ));
    }

    #[test]
    fn sampled_is_deterministic_and_consistent() {
        let group = grp("cyclic:8");
        let a = sampled_census(&group, 500, 42, 1, None).unwrap();
        let b = sampled_census(&group, 500, 42, 4, None).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let exact = exact_census(&group, &ExactOptions::default(), None).unwrap();
        assert!(a
            .confidence_95
            .as_ref()
            .unwrap()
            .contains(exact.drr_proportion.value()));
        let mut one = Vec::new();
        let mut cb = |rec: &CensusRecord| {
            one.push(rec.clone());
            Ok(())
        };
        sampled_census(&group, 1, 7, 1, Some(&mut cb)).unwrap();
        let mut again = Vec::new();
        let mut cb = |rec: &CensusRecord| {
            again.push(rec.clone());
            Ok(())
        };
        sampled_census(&group, 1, 7, 1, Some(&mut cb)).unwrap();
        assert_eq!(one, again);
        assert!(sampled_census(&group, 0, 7, 1, None).is_err());
    }

    #[test]
    fn unlabelled_examples() {
        let u1 = unlabelled_census(&grp("cyclic:1"), 12, 1)
            .unwrap()
            .unlabelled
            .unwrap();
        assert_eq!((u1.cd_count, u1.drr_count), (2, 2));
        // Oracle for order 3: isomorphism classes among the 8 Cayley digraphs.
        let c3 = grp("cyclic:3");
        let digraphs: Vec<_> = (0..8)
            .map(|m| cayley(&c3, &ConnectionSet::from_mask(3, m)).unwrap())
            .collect();
        let mut classes: Vec<usize> = Vec::new();
        for (i, d) in digraphs.iter().enumerate() {
            let new = classes.iter().all(|&j| {
                let mut iso = false;
                PermGroup::symmetric(3)
                    .for_each_element(|p| iso |= d.relabel(p).unwrap() == digraphs[j]);
                !iso
            });
            if new {
                classes.push(i);
            }
        }
        let u3 = unlabelled_census(&c3, 12, 2).unwrap().unlabelled.unwrap();
        assert_eq!(u3.cd_count, classes.len() as u64);
        assert_eq!(u3.drr_count, u3.drr_orbit_count);
        assert!(u3.drr_count * u3.aut_r_order >= u3.drr_subset_count);
    }

    #[test]
    fn hypothesis_examples() {
        let c3 = grp("cyclic:3");
        let rep = hypothesis_flags(
            &c3,
            &ConnectionSet::from_elements(3, [1]).unwrap(),
            DEFAULT_OVERGROUP_CAP,
        )
        .unwrap();
        assert!(!rep.h1);
        assert!(rep.overgroups.is_empty());
        let v4 = grp("klein4");
        let rep = hypothesis_flags(
            &v4,
            &ConnectionSet::from_elements(4, [1]).unwrap(),
            DEFAULT_OVERGROUP_CAP,
        )
        .unwrap();
        assert!(rep.h1);
        assert_eq!(rep.aut_order, 8);
        assert!(!rep.overgroups.is_empty());
        for g in &rep.overgroups {
            assert_eq!(g.order, 8);
            assert_eq!(g.stabilizer_order, 2);
            // R has index 2, so it is normal and is its own core.
            assert_eq!(g.core_order, 4);
            assert!(!g.h2 && g.h3 && !g.h4 && !g.h5);
        }
    }

    #[test]
    fn trivial_core_implies_h3_and_h4() {
        for spec in catalog_up_to(8) {
            let group = make_group(&spec).unwrap();
            for mask in (0..1u64 << group.order()).step_by(3) {
                let s = ConnectionSet::from_mask(group.order(), mask);
                let Ok(rep) = hypothesis_flags(&group, &s, 5_000) else {
                    continue;
                };
                for g in rep.overgroups.iter().filter(|g| g.h5) {
                    assert!(g.h3 && g.h4, "{spec} {mask:#x}");
                }
            }
        }
    }

    #[test]
    fn bound_spot_values() {
        let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-9;
        let mut p = BoundParams::new(1024);
        p.b = 0.0;
        assert!(close(bound_eval(BoundKind::T1_3, &p).unwrap(), 1026.0));
        assert_eq!(
            bound_eval_exact(BoundKind::T1_3, &p).unwrap(),
            Some(Ratio::from_integer(1026))
        );
        let p = BoundParams::new(16).with_n(4);
        assert!(close(bound_eval(BoundKind::L2_2, &p).unwrap(), 21.0));
        assert_eq!(
            bound_eval_exact(BoundKind::L2_2, &p).unwrap(),
            Some(Ratio::from_integer(21))
        );
        let p = BoundParams::new(1024);
        assert!(close(
            bound_eval(BoundKind::T3_3, &p).unwrap(),
            768.0 + 1024f64.powf(0.999)
        ));
        assert!(bound_eval(BoundKind::T2_4, &BoundParams::new(1024).with_n(64)).is_err());
        assert!(bound_eval(BoundKind::T2_4, &BoundParams::new(1024).with_n(128)).is_ok());
        assert!(bound_eval(BoundKind::L2_2, &BoundParams::new(16)).is_err());
        let mut bad = BoundParams::new(16);
        bad.epsilon = 0.5;
        assert!(bound_eval(BoundKind::T3_3, &bad).is_err());
        assert_eq!(
            bound_eval_exact(BoundKind::T3_4, &BoundParams::new(16)).unwrap(),
            None
        );
        assert_eq!("t2.5".parse::<BoundKind>().unwrap(), BoundKind::T2_5);
    }

    #[test]
    fn exact_bounds_agree_with_floating_point() {
        for r in [2u64, 4, 8, 16, 64, 256] {
            for n in [1u64, 2, 4, 8, 16, 128] {
                for kind in BoundKind::ALL {
                    let mut p = BoundParams::new(r).with_n(n);
                    p.b = 0.0;
                    if let (Ok(Some(q)), Ok(x)) = (bound_eval_exact(kind, &p), bound_eval(kind, &p))
                    {
                        let qf = *q.numer() as f64 / *q.denom() as f64;
                        assert!((qf - x).abs() < 1e-9, "{kind} r={r} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn proportion_formatting() {
        assert_eq!(Proportion::new(4, 8).to_string(), "1/2 (0.500000)");
        assert_eq!(Proportion::new(1, 3).decimal, "0.333333");
        assert_eq!(Proportion::new(2, 3).decimal, "0.666667");
        assert_eq!(Proportion::new(0, 16).decimal, "0.000000");
        assert_eq!(Proportion::new(16, 16).decimal, "1.000000");
    }
}
