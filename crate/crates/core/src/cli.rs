//! Command-line front end. [`run`] is what the binary calls; [`run_with_output`]
//! takes explicit sinks so tests can capture output.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 a lemma check failed.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::autgrp::automorphism_group;
use crate::census::{
    bound_eval, bound_eval_exact, exact_census, hypothesis_flags, sampled_census,
    unlabelled_census, BoundKind, BoundParams, CensusMode, CensusRecord, CensusSummary, Classifier,
    ExactOptions, RecordSink, DEFAULT_CHUNK_SIZE, DEFAULT_EXACT_CAP, DEFAULT_OVERGROUP_CAP,
    DEFAULT_UNLABELLED_CAP,
};
use crate::digraph::{cayley, ConnectionSet};
use crate::error::{Error, Result};
use crate::groups::{catalog, make_group, GroupSpec};
use crate::lemmalab::{run_suite, Suite, SuiteOptions};
use crate::perm::PermGroup;
use crate::quotient::{
    coset_partition, normal_quotient, odd_connection_set, odd_quotient, QuotientReport,
};

pub const WORKERS_ENV: &str = "CAYLEY_CENSUS_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A fully parsed invocation.
#[derive(Clone, Debug, PartialEq, Parser, Serialize, Deserialize)]
#[command(
    name = "cayley-census",
    version,
    about = "Census of Cayley digraphs on small groups"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Classify every (or a sample of) connection set of a group.
    Census(CensusArgs),
    /// Classify one connection set.
    Classify(ClassifyArgs),
    /// Quotient of a Cayley digraph by the cosets of a normal subgroup.
    Quotient(QuotientArgs),
    /// Run the lemma check suites.
    Verify(VerifyArgs),
    /// Evaluate an explicit bound (log2).
    Bounds(BoundsArgs),
    /// Group catalog.
    Groups(GroupsArgs),
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub group: GroupSpec,
    #[arg(long, value_parser = parse_mode, default_value = "exact")]
    pub mode: CensusMode,
    /// Enumerate one connection set per Aut(R)-orbit (exact mode).
    #[arg(long)]
    pub reduce_by_aut: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<u64>,
    /// 0 uses every available core.
    #[arg(long, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Per-subset records go here (CSV or JSON lines, per --format).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: usize,
    /// Largest group order accepted (exact and unlabelled modes).
    #[arg(long)]
    pub cap: Option<usize>,
    /// Print wall time to stderr.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub group: GroupSpec,
    /// Connection set as a little-endian hex bitmask.
    #[arg(long)]
    pub set: String,
    /// Also report hypothesis flags for the maximal overgroups of R.
    #[arg(long)]
    pub flags: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["odd", "normal_quotient"]))]
pub struct QuotientArgs {
    #[arg(long)]
    pub group: GroupSpec,
    /// Normal subgroup as comma-separated element indices.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub normal: Vec<usize>,
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub odd: bool,
    #[arg(long)]
    pub normal_quotient: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Suite to run; all suites when omitted.
    #[arg(long, value_parser = parse_suite)]
    pub suite: Option<Suite>,
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    #[arg(long, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub sigma_instances: u64,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: BoundKind,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.001)]
    pub epsilon: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GroupsArgs {
    #[command(subcommand)]
    pub action: GroupsAction,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupsAction {
    /// Catalog as CSV `kind,order,id`.
    List {
        #[arg(long)]
        max_order: Option<usize>,
    },
}

fn parse_mode(s: &str) -> std::result::Result<CensusMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<BoundKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunConfig {
    pub fn from_args<I, T>(argv: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        RunConfig::try_parse_from(argv)
    }

    /// Rejects flag combinations that make no sense, before any computation.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        match &self.command {
            Command::Census(a) => {
                a.group.validate()?;
                match a.mode {
                    CensusMode::Sampled => {
                        if a.samples.is_none_or(|s| s == 0) {
                            return bad("sampled mode needs --samples >= 1");
                        }
                        if a.checkpoint.is_some() || a.reduce_by_aut {
                            return bad(
                                "--checkpoint and --reduce-by-aut apply to exact mode only",
                            );
                        }
                    }
                    CensusMode::Exact => {
                        if a.samples.is_some() {
                            return bad("--samples applies to sampled mode only");
                        }
                    }
                    CensusMode::Unlabelled => {
                        if a.samples.is_some() || a.checkpoint.is_some() {
                            return bad(
                                "--samples and --checkpoint do not apply to unlabelled mode",
                            );
                        }
                        if a.out.is_some() {
                            return bad("unlabelled mode has no per-subset records");
                        }
                    }
                }
                if a.chunk_size == 0 {
                    return bad("--chunk-size must be positive");
                }
                Ok(())
            }
            Command::Classify(a) => a.group.validate(),
            Command::Quotient(a) => {
                if a.normal.is_empty() {
                    return bad("--normal must list at least one element");
                }
                a.group.validate()
            }
            Command::Bounds(a) => BoundParams {
                r: a.r,
                n: a.n,
                b: a.b,
                epsilon: a.epsilon,
            }
            .validate(a.kind),
            Command::Verify(_) | Command::Groups(_) => Ok(()),
        }
    }

    pub fn execute(&self, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
        self.validate()?;
        match &self.command {
            Command::Census(a) => census(a, out, err),
            Command::Classify(a) => classify(a, out),
            Command::Quotient(a) => quotient(a, out),
            Command::Verify(a) => verify(a, out, err),
            Command::Bounds(a) => bounds(a, out),
            Command::Groups(GroupsArgs {
                action: GroupsAction::List { max_order },
            }) => {
                writeln!(out, "kind,order,id")?;
                for spec in catalog()
                    .into_iter()
                    .filter_map(|s| s.order().map(|o| (s, o)))
                {
                    let (spec, order) = spec;
                    if max_order.is_some_and(|m| order > m) {
                        continue;
                    }
                    writeln!(
                        out,
                        "{},{order},{}",
                        spec.kind(),
                        csv_field(&spec.to_string())
                    )?;
                }
                Ok(0)
            }
        }
    }
}

/// Quotes a CSV field when it holds a comma or quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn summary_csv(s: &CensusSummary) -> String {
    let mut text =
        String::from("group,mode,total,drr,normal_non_drr,non_normal,drr_fraction,drr_decimal");
    let (num, den) = (s.drr_proportion.numerator, s.drr_proportion.denominator);
    text += &format!(
        "\n{},{},{},{},{},{},{num}/{den},{}",
        csv_field(&s.group),
        s.mode,
        s.total,
        s.counts.drr,
        s.counts.normal_non_drr,
        s.counts.non_normal,
        s.drr_proportion.decimal
    );
    if let Some(ci) = &s.confidence_95 {
        text += &format!("\nci95_low,ci95_high\n{:.6},{:.6}", ci.low, ci.high);
    }
    if let Some(u) = &s.unlabelled {
        text += &format!(
            "\ncd_count,drr_count,drr_orbit_count\n{},{},{}",
            u.cd_count, u.drr_count, u.drr_orbit_count
        );
    }
    text
}

fn record_json(rec: &CensusRecord) -> String {
    serde_json::json!({
        "subset_hex": rec.set.to_hex(),
        "aut_order": rec.aut_order,
        "class": rec.classification,
        "orbit_size": rec.orbit_size,
    })
    .to_string()
}

fn census(a: &CensusArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let group = make_group(&a.group)?;
    let mut sink = match &a.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            if a.format == Format::Csv {
                writeln!(w, "{}", CensusRecord::CSV_HEADER)?;
            }
            Some(w)
        }
        None => None,
    };
    let format = a.format;
    let mut write_record = |rec: &CensusRecord| -> Result<()> {
        if let Some(w) = sink.as_mut() {
            match format {
                Format::Csv => writeln!(w, "{}", rec.to_csv_row())?,
                Format::Json => writeln!(w, "{}", record_json(rec))?,
            }
        }
        Ok(())
    };
    let callback: RecordSink<'_> = if a.out.is_some() {
        Some(&mut write_record)
    } else {
        None
    };
    let summary = match a.mode {
        CensusMode::Exact => {
            let opts = ExactOptions {
                reduce_by_aut: a.reduce_by_aut,
                workers: a.workers,
                chunk_size: a.chunk_size,
                cap: a.cap.unwrap_or(DEFAULT_EXACT_CAP),
                checkpoint: a.checkpoint.clone(),
                stop_after_chunks: None,
            };
            exact_census(&group, &opts, callback)?
        }
        CensusMode::Sampled => {
            sampled_census(&group, a.samples.unwrap_or(1), a.seed, a.workers, callback)?
        }
        CensusMode::Unlabelled => {
            unlabelled_census(&group, a.cap.unwrap_or(DEFAULT_UNLABELLED_CAP), a.workers)?
        }
    };
    if let Some(mut w) = sink {
        w.flush()?;
    }
    match a.format {
        Format::Json => writeln!(out, "{}", summary.to_json())?,
        Format::Csv => writeln!(out, "{}", summary_csv(&summary))?,
    }
    if a.timing {
        if let Some(t) = summary.wall_time {
            writeln!(err, "wall_time_seconds: {:.3}", t.as_secs_f64())?;
        }
    }
    Ok(0)
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let group = make_group(&a.group)?;
    let s = ConnectionSet::from_hex(group.order(), &a.set)?;
    let rec = Classifier::new(&group).classify(&s)?;
    match a.format {
        Format::Csv => {
            writeln!(out, "{}", CensusRecord::CSV_HEADER)?;
            writeln!(out, "{}", rec.to_csv_row())?;
        }
        Format::Json => {
            let mut value = serde_json::json!({
                "group": group.id(),
                "subset_hex": s.to_hex(),
                "aut_order": rec.aut_order,
                "class": rec.classification,
            });
            if a.flags {
                value["hypotheses"] =
                    serde_json::to_value(hypothesis_flags(&group, &s, DEFAULT_OVERGROUP_CAP)?)?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        }
    }
    Ok(0)
}

fn quotient(a: &QuotientArgs, out: &mut dyn Write) -> Result<i32> {
    let group = make_group(&a.group)?;
    let s = ConnectionSet::from_hex(group.order(), &a.set)?;
    if !group.is_normal_subset(&a.normal) {
        return Err(Error::NotNormal(format!("{:?}", a.normal)));
    }
    let d = cayley(&group, &s)?;
    let cells = coset_partition(&group, &a.normal)?;
    let value = if a.odd {
        let q = odd_quotient(&d, &cells)?;
        let mut v = serde_json::to_value(QuotientReport {
            digraph: &q,
            cells: cells.cells(),
        })?;
        v["odd_connection_set"] = odd_connection_set(&group, &a.normal, &s)?.to_hex().into();
        v
    } else {
        let n_reg = PermGroup::from_generators(
            group.order(),
            a.normal
                .iter()
                .map(|&x| group.right_multiplication(x))
                .collect(),
        )?;
        let reg = crate::groups::regular_representation(&group);
        let aut = automorphism_group(&d, Some(&reg))?;
        let nq = normal_quotient(&d, &reg, &n_reg)?;
        let mut v = serde_json::to_value(&nq)?;
        v["aut_order"] = serde_json::to_value(aut.order())?;
        v
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    Ok(0)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let opts = SuiteOptions {
        max_order: a.max_order,
        workers: a.workers,
        seed: a.seed,
        sigma_instances: a.sigma_instances,
    };
    let suites: Vec<Suite> = a.suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
    let mut code = 0;
    for suite in suites {
        let rep = run_suite(suite, &opts)?;
        writeln!(out, "{}", serde_json::to_string(&rep)?)?;
        if a.timing {
            if let Some(t) = rep.wall_time {
                writeln!(err, "{suite}: {:.3}s", t.as_secs_f64())?;
            }
        }
        if !rep.pass {
            code = 2;
        }
    }
    Ok(code)
}

fn bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    let p = BoundParams {
        r: a.r,
        n: a.n,
        b: a.b,
        epsilon: a.epsilon,
    };
    let value = bound_eval(a.kind, &p)?;
    let exact = bound_eval_exact(a.kind, &p)?;
    if a.json {
        let v = serde_json::json!({
            "kind": a.kind,
            "params": p,
            "log2_bound": value,
            "exact": exact.map(|q| q.to_string()),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        match exact {
            Some(q) => writeln!(out, "{q}")?,
            None => writeln!(out, "{value}")?,
        }
    }
    Ok(0)
}

/// Parses `argv` (program name first) and runs it, writing to the given sinks.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::from_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match config.execute(out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    run_with_output(argv, &mut out, &mut err)
}
