//! Chain traces and their line-delimited persistence format.
//!
//! A trace file is JSON Lines: the first line is a [`TraceHeader`] carrying
//! the format tag and version, every following line one [`TraceRecord`].
//! Records are flushed as they are produced, so an interrupted run leaves a
//! readable prefix; a trailing partial line is ignored on read.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_io::Dyad;
use crate::sbm::Hyperparams;

pub const TRACE_FORMAT: &str = "mnsbm-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub version: u32,
    /// Path or name of the run manifest, if any.
    pub manifest: Option<String>,
    pub n: usize,
    pub subnetworks: usize,
    pub iterations: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub master_seed: u64,
    pub scan_order: String,
    pub mh_step: f64,
    pub sample_hyperparams: bool,
    /// Edge count of the graph before the held-out split.
    pub observed_edges: usize,
    /// Training edges, indexing the per-record edge counts.
    pub train_edges: Vec<Dyad>,
    /// Held-out `(i, j, label)`, indexing the per-record imputed values.
    pub heldout: Vec<(u32, u32, u8)>,
    /// Records a complete run produces.
    pub expected_records: u64,
}

/// Retained state of one post-burn-in iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    /// Occupied block count `L` per subnetwork.
    pub blocks: Vec<usize>,
    pub hyperparams: Vec<Hyperparams>,
    pub log_density: f64,
    pub assignments: Vec<Vec<u32>>,
    /// Imputed total count per held-out dyad.
    pub heldout_totals: Vec<u32>,
    /// Per subnetwork, latent count per training edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_counts: Option<Vec<Vec<u32>>>,
    /// Per subnetwork, imputed count per held-out dyad.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heldout_counts: Option<Vec<Vec<u32>>>,
}

impl TraceRecord {
    pub fn mean_blocks(&self) -> f64 {
        self.blocks.iter().sum::<usize>() as f64 / self.blocks.len().max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainTrace {
    pub header: TraceHeader,
    pub records: Vec<TraceRecord>,
}

/// Number of records retained by a run of `iterations` sweeps.
pub fn expected_records(iterations: u64, burn_in: u64, thinning: u64) -> u64 {
    iterations.saturating_sub(burn_in).div_ceil(thinning.max(1))
}

/// Whether sweep `t` (1-based) is retained.
#[inline]
pub fn is_retained(t: u64, burn_in: u64, thinning: u64) -> bool {
    t > burn_in && (t - burn_in - 1) % thinning == 0
}

pub fn write_header<W: Write>(header: &TraceHeader, mut sink: W) -> Result<()> {
    serde_json::to_writer(&mut sink, header).map_err(|e| Error::Trace(e.to_string()))?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn write_record<W: Write>(record: &TraceRecord, mut sink: W) -> Result<()> {
    serde_json::to_writer(&mut sink, record).map_err(|e| Error::Trace(e.to_string()))?;
    sink.write_all(b"\n")?;
    Ok(())
}

impl ChainTrace {
    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<()> {
        write_header(&self.header, &mut sink)?;
        for r in &self.records {
            write_record(r, &mut sink)?;
        }
        sink.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Trace("empty trace".into()))??;
        let header: TraceHeader =
            serde_json::from_str(&first).map_err(|e| Error::Trace(format!("header: {e}")))?;
        if header.format != TRACE_FORMAT {
            return Err(Error::Trace(format!("unknown format tag `{}`", header.format)));
        }
        if header.version != TRACE_VERSION {
            return Err(Error::Trace(format!("unsupported version {}", header.version)));
        }
        let lines: Vec<String> = lines.collect::<std::io::Result<_>>()?;
        let mut records = Vec::with_capacity(lines.len());
        let last = lines.len().saturating_sub(1);
        for (k, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<TraceRecord>(line) {
                Ok(r) => records.push(r),
                // torn final line of an interrupted run
                Err(_) if k == last => break,
                Err(e) => return Err(Error::Trace(format!("record {}: {e}", k + 1))),
            }
        }
        Ok(ChainTrace { header, records })
    }

    /// Records from the last `window` sweeps of the run.
    pub fn window(&self, window: u64) -> impl Iterator<Item = &TraceRecord> {
        let start = self.header.iterations.saturating_sub(window);
        self.records.iter().filter(move |r| r.iteration > start)
    }
}
