//! Planted two-subnetwork benchmarks with circular-shift overlap.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::SweepConfig;
use crate::error::{Error, Result};
use crate::graph_io::{split_holdout, Dyad, HeldoutSet, ObservedGraph};
use crate::rng::{derive_seed, stream, Phase};

pub const DIAGONAL_RATES: [f64; 2] = [1.0, 1.5];
pub const OFF_DIAGONAL_RATE: f64 = 0.1;

/// Two planted SBMs on `N` vertices with `K` equal contiguous blocks each;
/// the second subnetwork's block boundaries are rotated by `m` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedModel {
    pub n: usize,
    pub k: usize,
    pub shift: usize,
    pub assignments: [Vec<u32>; 2],
    pub diagonal: [f64; 2],
    pub off_diagonal: f64,
    /// `2 K m / N`, in `[0, 1]`.
    pub overlap: f64,
}

impl PlantedModel {
    #[inline]
    pub fn rate(&self, s: usize, i: usize, j: usize) -> f64 {
        let z = &self.assignments[s];
        if z[i] == z[j] {
            self.diagonal[s]
        } else {
            self.off_diagonal
        }
    }

    /// Vertices whose second-subnetwork block differs from their first under
    /// the identity identification of block labels.
    pub fn overlapping_vertices(&self) -> usize {
        self.assignments[0]
            .iter()
            .zip(&self.assignments[1])
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Builds the planted model for `(N, K, m)`.
pub fn planted_params(n: usize, k: usize, shift: usize) -> Result<PlantedModel> {
    if k == 0 || n == 0 || n % k != 0 {
        return Err(Error::arg(format!("N = {n} must be a positive multiple of K = {k}")));
    }
    if 2 * k * shift > n {
        return Err(Error::arg(format!(
            "shift m = {shift} exceeds N / (2K) = {}",
            n as f64 / (2 * k) as f64
        )));
    }
    let size = n / k;
    let first: Vec<u32> = (0..n).map(|v| (v / size) as u32).collect();
    let second: Vec<u32> = (0..n).map(|v| (((v + n - shift) % n) / size) as u32).collect();
    Ok(PlantedModel {
        n,
        k,
        shift,
        assignments: [first, second],
        diagonal: DIAGONAL_RATES,
        off_diagonal: OFF_DIAGONAL_RATE,
        overlap: (2 * k * shift) as f64 / n as f64,
    })
}

/// Shift `m = λ N / (2K)`; `λ` must land on an integer shift.
pub fn shift_for_overlap(n: usize, k: usize, overlap: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::arg(format!("overlap lambda = {overlap} outside [0, 1]")));
    }
    let m = overlap * n as f64 / (2 * k) as f64;
    let r = m.round();
    if (m - r).abs() > 1e-9 {
        return Err(Error::arg(format!(
            "lambda = {overlap} gives non-integer shift m = {m} for N = {n}, K = {k}"
        )));
    }
    Ok(r as usize)
}

/// Planted assignments and per-subnetwork multigraph counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub assignments: Vec<Vec<u32>>,
    /// Per subnetwork, sorted nonzero `(i, j, count)` with `i < j`.
    pub layers: Vec<Vec<(u32, u32, u32)>>,
}

impl GroundTruth {
    pub fn n(&self) -> usize {
        self.assignments.first().map_or(0, |z| z.len())
    }

    fn count(&self, s: usize, i: u32, j: u32) -> u32 {
        let layer = &self.layers[s];
        layer
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(i, j)))
            .map_or(0, |k| layer[k].2)
    }

    /// Dyads with at least one latent edge in some subnetwork, sorted.
    pub fn realised_edges(&self) -> Vec<Dyad> {
        let mut all: Vec<Dyad> = self.layers.iter().flatten().map(|&(i, j, _)| (i, j)).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// `a_k = Σ_s A^s_ij δ(z^s_i = z^s_j)`, clamped to `{0, 1}`.
    pub fn same_block_indicator(&self, i: u32, j: u32) -> u8 {
        let a: u32 = (0..self.layers.len())
            .filter(|&s| self.assignments[s][i as usize] == self.assignments[s][j as usize])
            .map(|s| self.count(s, i, j))
            .sum();
        a.min(1) as u8
    }

    /// Heaviside of the summed layers.
    pub fn observed(&self) -> ObservedGraph {
        ObservedGraph::from_edges(self.n(), self.realised_edges()).expect("indices within n")
    }

    /// Writes `assignment_<s>.txt` ("vertex block") and `counts_<s>.txt`
    /// ("i j count") for `s = 1..=S`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (s, (z, layer)) in self.assignments.iter().zip(&self.layers).enumerate() {
            let mut f = fs::File::create(dir.join(format!("assignment_{}.txt", s + 1)))?;
            for (v, b) in z.iter().enumerate() {
                writeln!(f, "{v} {b}")?;
            }
            let mut f = fs::File::create(dir.join(format!("counts_{}.txt", s + 1)))?;
            for &(i, j, c) in layer {
                writeln!(f, "{i} {j} {c}")?;
            }
        }
        Ok(())
    }

    /// Reads every consecutive `assignment_<s>.txt` / `counts_<s>.txt` pair.
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let mut truth = GroundTruth {
            assignments: Vec::new(),
            layers: Vec::new(),
        };
        for s in 1.. {
            let zpath = dir.join(format!("assignment_{s}.txt"));
            if !zpath.exists() {
                break;
            }
            let z = read_columns(&zpath, 2)?;
            let mut labels = vec![0u32; z.len()];
            for row in &z {
                let v = row[0] as usize;
                if v >= labels.len() {
                    return Err(Error::arg(format!("{}: vertex {v} out of range", zpath.display())));
                }
                labels[v] = row[1] as u32;
            }
            let mut layer: Vec<(u32, u32, u32)> = read_columns(&dir.join(format!("counts_{s}.txt")), 3)?
                .into_iter()
                .map(|r| (r[0].min(r[1]) as u32, r[0].max(r[1]) as u32, r[2] as u32))
                .collect();
            layer.sort_unstable();
            truth.assignments.push(labels);
            truth.layers.push(layer);
        }
        if truth.assignments.is_empty() {
            return Err(Error::arg(format!("no ground-truth files in {}", dir.display())));
        }
        Ok(truth)
    }
}

fn read_columns(path: &Path, cols: usize) -> Result<Vec<Vec<u64>>> {
    let f = BufReader::new(fs::File::open(path)?);
    let mut rows = Vec::new();
    for (k, line) in f.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line: k + 1,
                msg: format!("{}: expected {cols} integers", path.display()),
            })?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("{}: expected {cols} integers", path.display()),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Draws independent Poisson counts for every dyad and subnetwork; the
/// observed graph is the Heaviside of their sum.
pub fn generate<R: Rng + ?Sized>(pm: &PlantedModel, rng: &mut R) -> (ObservedGraph, GroundTruth) {
    let mut layers = vec![Vec::new(), Vec::new()];
    for i in 0..pm.n {
        for j in (i + 1)..pm.n {
            for (s, layer) in layers.iter_mut().enumerate() {
                let c = crate::ensemble::poisson_count(pm.rate(s, i, j), rng);
                if c > 0 {
                    layer.push((i as u32, j as u32, c));
                }
            }
        }
    }
    let truth = GroundTruth {
        assignments: pm.assignments.to_vec(),
        layers,
    };
    (truth.observed(), truth)
}

/// One fit in an experiment grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRun {
    pub k: usize,
    pub n: usize,
    pub overlap: f64,
    pub shift: usize,
    pub restart: usize,
    pub subnetworks: usize,
    /// Seeds the planted data; shared by every `subnetworks` value.
    pub data_seed: u64,
    pub chain_seed: u64,
}

/// Everything a grid run fits and scores against.
#[derive(Clone, Debug)]
pub struct PlantedData {
    pub model: PlantedModel,
    pub truth: GroundTruth,
    pub graph: ObservedGraph,
    pub train: ObservedGraph,
    pub heldout: HeldoutSet,
}

impl GridRun {
    /// Regenerates this run's planted graph and held-out split from its
    /// data seed.
    pub fn realise(&self, holdout_fraction: f64) -> Result<PlantedData> {
        let model = planted_params(self.n, self.k, self.shift)?;
        let (graph, truth) = generate(&model, &mut stream(self.data_seed, Phase::Generate, 0, 0));
        let (train, heldout) = split_holdout(&graph, holdout_fraction, &mut stream(self.data_seed, Phase::Split, 0, 0))?;
        Ok(PlantedData {
            model,
            truth,
            graph,
            train,
            heldout,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub master_seed: u64,
    pub config: SweepConfig,
    pub runs: Vec<GridRun>,
}

/// Enumerates `(K, N = 20K, λ, restart, Ŝ)` with derived seeds.
pub fn experiment_grid(
    k_list: &[usize],
    overlaps: &[f64],
    restarts: usize,
    s_list: &[usize],
    master_seed: u64,
    cfg: &SweepConfig,
) -> Result<ExperimentManifest> {
    let mut runs = Vec::new();
    let mut data_unit = 0u64;
    let mut chain_unit = 0u64;
    for &k in k_list {
        let n = 20 * k;
        for &overlap in overlaps {
            let shift = shift_for_overlap(n, k, overlap)?;
            for restart in 0..restarts {
                let data_seed = derive_seed(master_seed, Phase::Generate, data_unit);
                data_unit += 1;
                for &subnetworks in s_list {
                    if subnetworks == 0 {
                        return Err(Error::arg("subnetwork counts must be positive"));
                    }
                    runs.push(GridRun {
                        k,
                        n,
                        overlap,
                        shift,
                        restart,
                        subnetworks,
                        data_seed,
                        chain_seed: derive_seed(master_seed, Phase::Grid, chain_unit),
                    });
                    chain_unit += 1;
                }
            }
        }
    }
    Ok(ExperimentManifest {
        master_seed,
        config: cfg.clone(),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_parameter() {
        assert!((planted_params(30, 3, 1).unwrap().overlap - 0.2).abs() < 1e-15);
        assert_eq!(planted_params(60, 3, 10).unwrap().overlap, 1.0);
        let pm = planted_params(60, 3, 0).unwrap();
        assert_eq!(pm.overlap, 0.0);
        assert_eq!(pm.assignments[0], pm.assignments[1]);
    }

    #[test]
    fn shift_rotates_boundaries() {
        let pm = planted_params(12, 3, 2).unwrap();
        assert_eq!(pm.assignments[0], vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(pm.assignments[1], vec![2, 2, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2]);
        for z in &pm.assignments {
            for b in 0..3 {
                assert_eq!(z.iter().filter(|&&x| x == b).count(), 4);
            }
        }
        // m vertices cross each of the K boundaries
        assert_eq!(pm.overlapping_vertices(), 3 * 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(planted_params(31, 3, 1).is_err());
        assert!(planted_params(60, 3, 11).is_err());
        assert!(planted_params(60, 0, 0).is_err());
        assert_eq!(shift_for_overlap(60, 3, 0.2).unwrap(), 2);
        assert!(shift_for_overlap(60, 3, 0.35).is_err());
    }

    #[test]
    fn observed_is_heaviside_of_layers() {
        let pm = planted_params(30, 3, 2).unwrap();
        let (g, truth) = generate(&pm, &mut stream(4, Phase::Generate, 0, 0));
        for i in 0..30u32 {
            for j in (i + 1)..30 {
                let sum = truth.count(0, i, j) + truth.count(1, i, j);
                assert_eq!(g.has_edge(i, j), sum > 0);
            }
        }
        let (g2, truth2) = generate(&pm, &mut stream(4, Phase::Generate, 0, 0));
        assert_eq!((g, truth), (g2, truth2));
    }

    #[test]
    fn zero_rates_give_empty_graph() {
        let mut pm = planted_params(20, 2, 0).unwrap();
        pm.diagonal = [0.0, 0.0];
        pm.off_diagonal = 0.0;
        let (g, truth) = generate(&pm, &mut stream(1, Phase::Generate, 0, 0));
        assert_eq!(g.edge_count(), 0);
        assert!(truth.realised_edges().is_empty());
    }

    #[test]
    fn grid_layout() {
        let cfg = SweepConfig::default();
        let m = experiment_grid(&[3, 4, 5], &[0.0, 0.5, 1.0], 20, &[1, 2, 3], 1, &cfg).unwrap();
        assert_eq!(m.runs.len(), 3 * 3 * 20 * 3);
        assert!(m.runs.iter().filter(|r| r.k == 3).all(|r| r.n == 60));
        assert!(m.runs.iter().filter(|r| r.k == 5).all(|r| r.n == 100));
        let first: Vec<_> = m.runs.iter().take(3).collect();
        assert!(first.iter().all(|r| r.data_seed == first[0].data_seed));
        assert_ne!(first[0].chain_seed, first[1].chain_seed);
        let err = experiment_grid(&[3], &[0.35], 1, &[1], 1, &cfg).unwrap_err();
        assert!(err.to_string().contains("0.35"));

        // runs sharing a data seed see the same planted graph and split
        let a = first[0].realise(0.05).unwrap();
        let b = first[2].realise(0.05).unwrap();
        assert_eq!((a.graph, a.train, a.heldout), (b.graph, b.train, b.heldout));
    }
}
