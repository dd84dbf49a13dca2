//! File formats. Column sets are frozen per schema version; floats are written
//! in shortest round-trip form so reruns are byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use largeface_core::fragmentation::FragEvent;
use largeface_core::lamination::{triangle_metrics, DislocationTree};
use largeface_core::sampling::ExcursionPath;
use largeface_core::stats::{RatioRow, SweepPoint};
use serde::Serialize;
use serde_json::Value;

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::{RunError, RunResult};
use crate::experiments::{ChordOutcome, StableOutcome, TheoryRecord};

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> RunResult<()> {
    let csv_err = |source| RunError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| RunError::Io { path: path.to_path_buf(), source })
}

#[derive(Serialize)]
struct RecordRow {
    lo: u32,
    hi: u32,
    split: u32,
    x: f64,
    s1: f64,
    s2: f64,
    level: f64,
    birth_level: f64,
    shortest_edge: f64,
    area: f64,
}

/// `lo,hi,split,x,s1,s2,level,birth_level,shortest_edge,area`, pre-order.
pub fn write_records(path: &Path, tree: &DislocationTree) -> RunResult<()> {
    write_rows(
        path,
        tree.records().iter().map(|r| {
            let m = triangle_metrics(r);
            RecordRow {
                lo: r.lo,
                hi: r.hi,
                split: r.split,
                x: r.x(),
                s1: r.s1(),
                s2: r.s2(),
                level: r.level,
                birth_level: r.birth_level,
                shortest_edge: m.shortest,
                area: m.area,
            }
        }),
    )
}

#[derive(Serialize)]
struct PathRow {
    index: usize,
    value: f64,
}

/// `index,value`.
pub fn write_path(path: &Path, excursion: &ExcursionPath) -> RunResult<()> {
    write_rows(path, excursion.values().iter().enumerate().map(|(index, &value)| PathRow { index, value }))
}

#[derive(Serialize)]
struct SweepRow {
    eps: f64,
    mean_scaled: f64,
    var_scaled: f64,
    ci_low: f64,
    ci_high: f64,
    #[serde(rename = "M")]
    m: u64,
}

/// `eps,mean_scaled,var_scaled,ci_low,ci_high,M`.
pub fn write_sweep(path: &Path, points: &[SweepPoint]) -> RunResult<()> {
    write_rows(
        path,
        points.iter().map(|p| SweepRow {
            eps: p.eps,
            mean_scaled: p.estimate.mean,
            var_scaled: p.estimate.variance,
            ci_low: p.estimate.ci_low,
            ci_high: p.estimate.ci_high,
            m: p.estimate.m,
        }),
    )
}

#[derive(Serialize)]
struct RatioCsvRow {
    eps: f64,
    mean_ratio: f64,
    /// Empty when undefined (scalar target or a constant column).
    corr: Option<f64>,
    #[serde(rename = "M_effective")]
    m_effective: usize,
}

/// `eps,mean_ratio,corr,M_effective`.
pub fn write_ratio(path: &Path, rows: &[RatioRow]) -> RunResult<()> {
    write_rows(
        path,
        rows.iter().map(|r| RatioCsvRow {
            eps: r.eps,
            mean_ratio: r.mean_ratio,
            corr: r.corr,
            m_effective: r.m_effective,
        }),
    )
}

#[derive(Serialize)]
struct EventRow {
    t_homog: f64,
    t_selfsim: f64,
    parent_mass: f64,
    s1: f64,
    psi_value: f64,
}

/// `t_homog,t_selfsim,parent_mass,s1,psi_value`.
pub fn write_events(path: &Path, events: &[FragEvent]) -> RunResult<()> {
    write_rows(
        path,
        events.iter().map(|e| EventRow {
            t_homog: e.time_homog,
            t_selfsim: e.time_selfsim,
            parent_mass: e.parent_mass,
            s1: e.s1,
            psi_value: e.psi_value,
        }),
    )
}

#[derive(Serialize)]
struct ChordRow {
    replicate: usize,
    fraction: f64,
    length: f64,
    degenerate: bool,
}

/// `replicate,fraction,length,degenerate`.
pub fn write_chords(path: &Path, outcome: &ChordOutcome) -> RunResult<()> {
    write_rows(
        path,
        outcome.samples.iter().enumerate().map(|(replicate, s)| ChordRow {
            replicate,
            fraction: s.fraction,
            length: s.length,
            degenerate: s.degenerate,
        }),
    )
}

#[derive(Serialize)]
struct StableCsvRow {
    replicate: usize,
    t1: f64,
    delta1: f64,
    jumps: usize,
}

/// `replicate,t1,delta1,jumps`.
pub fn write_stable(path: &Path, outcome: &StableOutcome) -> RunResult<()> {
    write_rows(
        path,
        outcome.rows.iter().enumerate().map(|(replicate, r)| StableCsvRow {
            replicate,
            t1: r.t1,
            delta1: r.delta1,
            jumps: r.jumps,
        }),
    )
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> RunResult<()> {
    let io_err = |source| RunError::Io { path: path.to_path_buf(), source };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn theory_json(records: &[TheoryRecord]) -> RunResult<String> {
    Ok(serde_json::to_string_pretty(records)?)
}

/// Everything needed to rerun: the full config (seed included) and the
/// versions that produced the outputs. The thread count is left out on
/// purpose since results do not depend on it.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub core_version: &'static str,
    pub config: &'a RunConfig,
    pub outputs: Vec<PathBuf>,
    pub summary: Value,
}

impl<'a> Manifest<'a> {
    pub fn new(config: &'a RunConfig, outputs: Vec<PathBuf>, summary: Value) -> Self {
        Manifest {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            core_version: largeface_core::VERSION,
            config,
            outputs,
            summary,
        }
    }
}
