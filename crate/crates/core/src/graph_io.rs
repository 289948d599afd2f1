//! Edge-list parsing, canonicalisation and held-out splits.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex pair in canonical form `(i, j)` with `i < j`.
pub type Dyad = (u32, u32);

#[inline]
pub fn canonical(a: u32, b: u32) -> Dyad {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[inline]
pub fn dyad_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Binary symmetric observation without self-loops.
///
/// Edges (dyads with `a = 1`) are stored sorted. Every other dyad is a
/// non-edge unless it is listed in `unobserved`, in which case it is
/// excluded from the likelihood entirely (held-out dyads of a split).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedGraph {
    n: usize,
    edges: Vec<Dyad>,
    unobserved: Vec<Dyad>,
}

impl ObservedGraph {
    /// Builds a canonical graph from arbitrary pairs; self-loops are dropped
    /// and duplicates merged.
    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(Error::arg(format!("edge ({a}, {b}) out of bounds for n = {n}")));
            }
            if a != b {
                edges.push(canonical(a, b));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(ObservedGraph {
            n,
            edges,
            unobserved: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted list of edges (`a = 1`).
    pub fn edges(&self) -> &[Dyad] {
        &self.edges
    }

    /// Sorted list of dyads excluded from the likelihood.
    pub fn unobserved(&self) -> &[Dyad] {
        &self.unobserved
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Dyads that enter the likelihood.
    pub fn observed_dyad_count(&self) -> usize {
        dyad_count(self.n) - self.unobserved.len()
    }

    pub fn non_edge_count(&self) -> usize {
        self.observed_dyad_count() - self.edges.len()
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.edges.binary_search(&canonical(i, j)).is_ok()
    }

    pub fn is_unobserved(&self, i: u32, j: u32) -> bool {
        self.unobserved.binary_search(&canonical(i, j)).is_ok()
    }

    /// Observation at a dyad: `Some(1)` edge, `Some(0)` non-edge, `None`
    /// unobserved or a self-pair.
    pub fn value(&self, i: u32, j: u32) -> Option<u8> {
        if i == j || self.is_unobserved(i, j) {
            None
        } else {
            Some(self.has_edge(i, j) as u8)
        }
    }
}

/// Dyads removed from training, with their true labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeldoutSet {
    /// Sorted `(i, j, label)` triples.
    pub dyads: Vec<(u32, u32, u8)>,
    pub fraction: f64,
    pub positives: usize,
    pub negatives: usize,
}

impl HeldoutSet {
    pub fn empty() -> Self {
        HeldoutSet {
            dyads: Vec::new(),
            fraction: 0.0,
            positives: 0,
            negatives: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.dyads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dyads.is_empty()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.dyads.iter().map(|d| d.2).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Vertex count; indices at or above it are rejected.
    pub n_hint: Option<usize>,
    /// Input indices start at 1 (Pajek-style exports).
    pub one_based: bool,
}

/// Parses a whitespace-separated `i j [w]` edge list.
///
/// Lines starting with `#` or `%` are comments. Weights of duplicate and
/// mirrored entries are summed and any positive total becomes an edge.
pub fn parse_edge_list<R: BufRead>(reader: R, opts: ParseOptions) -> Result<ObservedGraph> {
    let mut weights: BTreeMap<Dyad, f64> = BTreeMap::new();
    let mut max_index: Option<usize> = None;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `i j` or `i j w`, found {} fields", tokens.len()),
            });
        }
        let a = parse_index(tokens[0], lineno, opts)?;
        let b = parse_index(tokens[1], lineno, opts)?;
        let w = match tokens.get(2) {
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("non-numeric weight `{tok}`"),
                })?;
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("weight must be a nonnegative number, found `{tok}`"),
                    });
                }
                w
            }
            None => 1.0,
        };
        if let Some(n) = opts.n_hint {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::Bounds {
                        line: lineno,
                        index: idx,
                        n,
                    });
                }
            }
        }
        max_index = max_index.max(Some(a.max(b)));
        if a != b {
            *weights.entry(canonical(a as u32, b as u32)).or_insert(0.0) += w;
        }
    }

    let n = opts.n_hint.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    let edges = weights
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(d, _)| d)
        .collect();
    Ok(ObservedGraph {
        n,
        edges,
        unobserved: Vec::new(),
    })
}

fn parse_index(tok: &str, line: usize, opts: ParseOptions) -> Result<usize> {
    let raw: u64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("non-numeric vertex index `{tok}`"),
    })?;
    let idx = if opts.one_based {
        raw.checked_sub(1).ok_or_else(|| Error::Parse {
            line,
            msg: "vertex index 0 in one-based input".to_string(),
        })?
    } else {
        raw
    };
    if idx > u32::MAX as u64 - 1 {
        return Err(Error::Parse {
            line,
            msg: format!("vertex index `{tok}` too large"),
        });
    }
    Ok(idx as usize)
}

/// Writes the canonical edge list, one `i j` per line, 0-based.
pub fn write_graph<W: Write>(g: &ObservedGraph, mut sink: W) -> Result<()> {
    for &(i, j) in &g.edges {
        writeln!(sink, "{i} {j}")?;
    }
    sink.flush()?;
    Ok(())
}

/// Holds out `⌊fraction · E⌋` uniformly chosen edges and as many uniformly
/// chosen non-edges. Held-out dyads are removed from the training graph's
/// likelihood, not recorded as zeros.
pub fn split_holdout<R: Rng + ?Sized>(
    g: &ObservedGraph,
    edge_fraction: f64,
    rng: &mut R,
) -> Result<(ObservedGraph, HeldoutSet)> {
    if !(edge_fraction > 0.0 && edge_fraction < 1.0) {
        return Err(Error::arg(format!(
            "held-out fraction must lie in (0, 1), got {edge_fraction}"
        )));
    }
    let e = g.edge_count();
    let k = (edge_fraction * e as f64).floor() as usize;
    if k == 0 {
        return Err(Error::InfeasibleSplit(format!(
            "{e} edges give no held-out edge at fraction {edge_fraction}"
        )));
    }
    let free_non_edges = g.non_edge_count();
    if free_non_edges < k {
        return Err(Error::InfeasibleSplit(format!(
            "need {k} held-out non-edges but only {free_non_edges} exist"
        )));
    }

    let mut held: Vec<(u32, u32, u8)> = Vec::with_capacity(2 * k);
    for idx in index::sample(rng, e, k) {
        let (i, j) = g.edges[idx];
        held.push((i, j, 1));
    }

    let n = g.n as u32;
    let mut chosen: Vec<Dyad> = Vec::with_capacity(k);
    if free_non_edges < 4 * k.max(16) || free_non_edges * 8 < dyad_count(g.n) {
        // Few non-edges: enumerate them and sample without replacement.
        let mut pool = Vec::with_capacity(free_non_edges);
        for i in 0..n {
            for j in (i + 1)..n {
                if g.value(i, j) == Some(0) {
                    pool.push((i, j));
                }
            }
        }
        for idx in index::sample(rng, pool.len(), k) {
            chosen.push(pool[idx]);
        }
    } else {
        let mut seen = std::collections::HashSet::with_capacity(k);
        while chosen.len() < k {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let d = canonical(a, b);
            if g.value(d.0, d.1) == Some(0) && seen.insert(d) {
                chosen.push(d);
            }
        }
    }
    held.extend(chosen.into_iter().map(|(i, j)| (i, j, 0)));
    held.sort_unstable();

    let mut unobserved: Vec<Dyad> = g.unobserved.clone();
    unobserved.extend(held.iter().map(|&(i, j, _)| (i, j)));
    unobserved.sort_unstable();
    let edges = g
        .edges
        .iter()
        .copied()
        .filter(|d| unobserved.binary_search(d).is_err())
        .collect();

    let train = ObservedGraph {
        n: g.n,
        edges,
        unobserved,
    };
    let test = HeldoutSet {
        dyads: held,
        fraction: edge_fraction,
        positives: k,
        negatives: k,
    };
    Ok((train, test))
}
