//! Held-out link prediction and structure-recovery scoring.

use std::io::Write;

use crate::error::{Error, Result};
use crate::synth::GroundTruth;
use crate::trace::ChainTrace;

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionRow {
    pub i: u32,
    pub j: u32,
    pub label: u8,
    /// Fraction of retained samples whose imputed total count is positive.
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionTable {
    pub rows: Vec<PredictionRow>,
}

impl PredictionTable {
    pub fn labels(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.score).collect()
    }

    pub fn auc(&self) -> Result<f64> {
        auc(&self.labels(), &self.scores())
    }

    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "i,j,label,score")?;
        for r in &self.rows {
            writeln!(sink, "{},{},{},{}", r.i, r.j, r.label, r.score)?;
        }
        sink.flush()?;
        Ok(())
    }
}

/// MCMC average of the Heaviside of each held-out dyad's imputed total.
pub fn predict_link_prob(trace: &ChainTrace) -> Result<PredictionTable> {
    if trace.records.is_empty() {
        return Err(Error::arg("trace has no retained records"));
    }
    let h = trace.header.heldout.len();
    let mut hits = vec![0u64; h];
    for r in &trace.records {
        if r.heldout_totals.len() != h {
            return Err(Error::Trace(format!(
                "record {} has {} held-out values, header lists {h}",
                r.iteration,
                r.heldout_totals.len()
            )));
        }
        for (acc, &tot) in hits.iter_mut().zip(&r.heldout_totals) {
            *acc += (tot > 0) as u64;
        }
    }
    let t = trace.records.len() as f64;
    let rows = trace
        .header
        .heldout
        .iter()
        .zip(hits)
        .map(|(&(i, j, label), k)| PredictionRow {
            i,
            j,
            label,
            score: k as f64 / t,
        })
        .collect();
    Ok(PredictionTable { rows })
}

/// Area under the ROC curve: the probability that a random positive
/// outscores a random negative, ties counting one half. Computed from
/// midranks (Mann–Whitney U).
pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64> {
    if labels.len() != scores.len() {
        return Err(Error::arg("labels and scores differ in length"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::arg("scores contain NaN"));
    }
    let pos = labels.iter().filter(|&&l| l != 0).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // rank sum of positives, ranks 1-based, ties share their mean rank
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let midrank = (start + 1 + end) as f64 / 2.0;
        let tied_pos = order[start..end].iter().filter(|&&k| labels[k] != 0).count();
        rank_sum += midrank * tied_pos as f64;
        start = end;
    }
    let u = rank_sum - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

/// True same-block indicators `a_k` and estimated same-block weights `w_k`
/// over the realised true edges.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityVectors {
    pub edges: Vec<(u32, u32)>,
    pub truth: Vec<u8>,
    pub estimate: Vec<f64>,
}

/// Where a dyad's latent counts live in a trace record.
enum Slot {
    Train(usize),
    Heldout(usize),
}

/// Builds `(a_k, w_k)` for every dyad carrying at least one true latent
/// edge. Only records from the last `window` sweeps are used (all records
/// when `None`). `a_k` is clamped to `{0, 1}`. Records in which the dyad
/// has no latent edge are skipped when averaging `w_k`; a dyad skipped in
/// every record gets `w_k = 0`.
pub fn same_block_vectors(
    truth: &GroundTruth,
    trace: &ChainTrace,
    window: Option<u64>,
) -> Result<SimilarityVectors> {
    if truth.n() != trace.header.n {
        return Err(Error::arg(format!(
            "ground truth has {} vertices, trace {}",
            truth.n(),
            trace.header.n
        )));
    }
    let records: Vec<_> = match window {
        Some(w) => trace.window(w).collect(),
        None => trace.records.iter().collect(),
    };
    if records.is_empty() {
        return Err(Error::arg("no trace records in the requested window"));
    }
    for r in &records {
        if r.edge_counts.is_none() || r.heldout_counts.is_none() {
            return Err(Error::Trace(format!("record {} lacks latent counts", r.iteration)));
        }
    }

    let true_edges = truth.realised_edges();
    if true_edges.is_empty() {
        return Err(Error::arg("ground truth has no realised edges"));
    }
    let mut out = SimilarityVectors {
        edges: Vec::with_capacity(true_edges.len()),
        truth: Vec::with_capacity(true_edges.len()),
        estimate: Vec::with_capacity(true_edges.len()),
    };
    for (i, j) in true_edges {
        let slot = if let Ok(e) = trace.header.train_edges.binary_search(&(i, j)) {
            Slot::Train(e)
        } else if let Some(h) = trace.header.heldout.iter().position(|&(a, b, _)| (a, b) == (i, j)) {
            Slot::Heldout(h)
        } else {
            return Err(Error::arg(format!(
                "true edge ({i}, {j}) is neither a training edge nor held out in the trace"
            )));
        };

        let (mut sum, mut used) = (0.0, 0usize);
        for r in &records {
            let layers = match slot {
                Slot::Train(_) => r.edge_counts.as_ref(),
                Slot::Heldout(_) => r.heldout_counts.as_ref(),
            }
            .expect("checked above");
            let k = match slot {
                Slot::Train(e) | Slot::Heldout(e) => e,
            };
            let (mut same, mut total) = (0u64, 0u64);
            for (s, layer) in layers.iter().enumerate() {
                let c = layer[k] as u64;
                let z = &r.assignments[s];
                total += c;
                if z[i as usize] == z[j as usize] {
                    same += c;
                }
            }
            if total > 0 {
                sum += same as f64 / total as f64;
                used += 1;
            }
        }
        out.edges.push((i, j));
        out.truth.push(truth.same_block_indicator(i, j));
        out.estimate.push(if used > 0 { sum / used as f64 } else { 0.0 });
    }
    Ok(out)
}

/// AUC of the estimated same-block weights against the true indicators.
pub fn structure_auc(v: &SimilarityVectors) -> Result<f64> {
    auc(&v.truth, &v.estimate)
}
