//! Measured checks shared by the integration tests and the acceptance
//! runner. Each returns the statistic it measured; callers apply the bound.

use std::collections::HashMap;

use mnsbm::ensemble::{sample_total_count, split_count};
use mnsbm::graph_io::HeldoutSet;
use mnsbm::rng::{stream, Phase};
use mnsbm::sbm::{block_stats, collapsed_log_likelihood, crp_log_density, gibbs_sweep_z, Topology};
use mnsbm::{Assignment, EnsembleState, Hyperparams, ObservedGraph, SweepConfig};
use rand::Rng;

use super::*;

pub fn fixed_config(seed: u64, hp: Hyperparams) -> SweepConfig {
    SweepConfig {
        master_seed: seed,
        initial_hyperparams: hp,
        sample_hyperparams: false,
        ..Default::default()
    }
}

/// Expected TV of `n` independent draws from `exact`.
pub fn sampling_tv(exact: &[f64], n: f64) -> f64 {
    0.5 * exact
        .iter()
        .map(|&p| (2.0 * p * (1.0 - p) / (std::f64::consts::PI * n)).sqrt())
        .sum::<f64>()
}

/// Largest `|Σ_z p(z) − 1|` over `n ≤ 6` and a few concentrations.
pub fn crp_normalization_error() -> f64 {
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for &alpha in &[0.1, 0.5, 1.0, 2.5, 10.0] {
            let total: f64 = set_partitions(n)
                .iter()
                .map(|z| crp_log_density(&Assignment::from_labels(z), alpha).unwrap().exp())
                .sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    worst
}

/// Largest relative error of the collapsed likelihood against quadrature
/// over random 4-vertex instances (random partition, counts, held-out
/// dyads and prior).
pub fn collapsed_quadrature_error(instances: usize, seed: u64) -> f64 {
    let mut rng = stream(seed, Phase::Init, 0, 0);
    let all: Vec<(u32, u32)> = (0..4u32).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let z = canonical(&(0..4).map(|_| rng.gen_range(0..4)).collect::<Vec<u32>>());
        let kappa = rng.gen_range(0.2..5.0);
        let lambda = rng.gen_range(0.2..5.0);
        let (mut edges, mut edge_counts, mut unobserved, mut dyads) = (vec![], vec![], vec![], vec![]);
        for &d in &all {
            if rng.gen_bool(0.15) {
                unobserved.push(d);
                continue;
            }
            let c = rng.gen_range(0..5u32);
            dyads.push((d, c));
            if c > 0 {
                edges.push(d);
                edge_counts.push(c);
            }
        }
        let topo = Topology::new(4, edges, unobserved);
        let stats = block_stats(&Assignment::from_labels(&z), &topo, &edge_counts);
        let lib = collapsed_log_likelihood(&stats, &edge_counts, kappa, lambda).unwrap();
        let oracle = log_collapsed_quadrature(&z, &dyads, kappa, lambda, &mut HashMap::new());
        worst = worst.max(((lib - oracle) / oracle.abs().max(1e-300)).abs());
    }
    worst
}

fn max_z_score(freq: &[(f64, f64)], draws: f64) -> f64 {
    freq.iter()
        .filter(|(p, _)| *p > 0.0)
        .map(|&(p, f)| (f - p).abs() / (p * (1.0 - p) / draws).sqrt())
        .fold(0.0, f64::max)
}

/// Largest per-value z-score of zero-truncated Poisson draws against the
/// exact pmf over the values within three standard deviations of `eta`,
/// plus the number of zeros drawn.
pub fn zero_truncated_law(eta: f64, draws: usize, seed: u64) -> (f64, usize) {
    let mut rng = stream(seed, Phase::Edges, 0, 0);
    let mut hist: HashMap<u32, usize> = HashMap::new();
    for _ in 0..draws {
        *hist.entry(sample_total_count(1, eta, &mut rng).unwrap()).or_default() += 1;
    }
    let ln_norm = (-(-eta).exp_m1()).ln();
    let spread = 3.0 * eta.sqrt();
    let lo = ((eta - spread).floor() as u32).max(1);
    let hi = (eta + spread).ceil().max(5.0) as u32;
    let rows: Vec<(f64, f64)> = (lo..=hi)
        .map(|k| {
            let ln_p = k as f64 * eta.ln() - eta - ln_factorial(k) - ln_norm;
            (ln_p.exp(), hist.get(&k).copied().unwrap_or(0) as f64 / draws as f64)
        })
        .collect();
    (max_z_score(&rows, draws as f64), hist.get(&0).copied().unwrap_or(0))
}

/// Largest z-score of the multinomial split against the exact law: every
/// outcome cell with an expected count of at least 5 when the outcome space
/// is small, and every component mean `total · p_s`.
pub fn multinomial_law(total: u32, rates: &[f64; 3], draws: usize, seed: u64) -> f64 {
    let mut rng = stream(seed, Phase::Edges, 0, 1);
    let mut hist: HashMap<Vec<u32>, usize> = HashMap::new();
    for _ in 0..draws {
        *hist.entry(split_count(total, rates, &mut rng).unwrap()).or_default() += 1;
    }
    let n = draws as f64;
    let sum: f64 = rates.iter().sum();
    let p: Vec<f64> = rates.iter().map(|r| r / sum).collect();

    let mut worst: f64 = 0.0;
    for s in 0..3 {
        let mean = hist.iter().map(|(k, &c)| k[s] as f64 * c as f64).sum::<f64>() / n;
        let sd = (total as f64 * p[s] * (1.0 - p[s]) / n).sqrt();
        worst = worst.max((mean - total as f64 * p[s]).abs() / sd);
    }
    if total <= 16 {
        let mut rows = Vec::new();
        for a in 0..=total {
            for b in 0..=(total - a) {
                let c = total - a - b;
                let ln_p = ln_factorial(total) - ln_factorial(a) - ln_factorial(b) - ln_factorial(c)
                    + a as f64 * p[0].ln()
                    + b as f64 * p[1].ln()
                    + c as f64 * p[2].ln();
                let prob = ln_p.exp();
                if prob * n >= 5.0 {
                    rows.push((prob, hist.get(&vec![a, b, c]).copied().unwrap_or(0) as f64 / n));
                }
            }
        }
        worst = worst.max(max_z_score(&rows, n));
    }
    worst
}

/// Fraction of random splits whose parts do not sum to the total (0 when
/// conservation holds).
pub fn split_conservation_failures(trials: usize, seed: u64) -> usize {
    let mut rng = stream(seed, Phase::Edges, 0, 2);
    let mut bad = 0;
    for _ in 0..trials {
        let s = rng.gen_range(1..8);
        let rates: Vec<f64> = (0..s).map(|_| 10f64.powf(rng.gen_range(-12.0..1.0))).collect();
        let total = rng.gen_range(0..400);
        let v = split_count(total, &rates, &mut rng).unwrap();
        bad += (v.iter().sum::<u32>() != total || v.len() != s) as usize;
    }
    bad
}

/// Runs `sweeps` full sweeps of a planted instance, checking the Heaviside
/// constraint and statistic consistency after each.
pub fn soak(sweeps: usize, seed: u64) -> Result<(), String> {
    let pm = mnsbm::planted_params(40, 4, 2).unwrap();
    let (g, _) = mnsbm::generate(&pm, &mut stream(seed, Phase::Generate, 0, 0));
    let (train, held) = mnsbm::split_holdout(&g, 0.05, &mut stream(seed, Phase::Split, 0, 0)).unwrap();
    let cfg = SweepConfig {
        master_seed: seed,
        ..Default::default()
    };
    let mut ens = EnsembleState::initialize(&train, &held, 3, &cfg).unwrap();
    for t in 0..sweeps {
        ens.full_sweep();
        ens.check_invariants().map_err(|e| format!("sweep {}: {e}", t + 1))?;
    }
    Ok(())
}

/// A TV measurement with the TV expected from iid sampling noise alone.
pub struct TvCheck {
    pub tv: f64,
    pub noise: f64,
}

/// Collapsed Gibbs over `z` alone, with fixed counts, against the enumerated
/// partition posterior.
pub fn gibbs_only_tv(samples: usize, seed: u64) -> TvCheck {
    let hp = Hyperparams::new(1.3, 1.5, 0.8).unwrap();
    let edges = vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)];
    let counts = vec![2u32, 1, 3, 1, 2];
    let topo = Topology::new(5, edges.clone(), vec![(1, 4)]);
    let mut dyads = Vec::new();
    for i in 0..5u32 {
        for j in (i + 1)..5 {
            if (i, j) != (1, 4) {
                let c = edges.iter().position(|&d| d == (i, j)).map_or(0, |e| counts[e]);
                dyads.push(((i, j), c));
            }
        }
    }
    let mut cache = HashMap::new();
    let exact = normalize(
        set_partitions(5)
            .into_iter()
            .map(|z| {
                let w = crp_seating_prob(&z, hp.alpha).ln()
                    + log_collapsed_quadrature(&z, &dyads, hp.kappa, hp.lambda, &mut cache);
                (z, w)
            })
            .collect(),
    );
    let mut z = Assignment::single_block(5);
    let mut stats = block_stats(&z, &topo, &counts);
    let mut rng = stream(seed, Phase::Gibbs, 0, 0);
    let mut hist: HashMap<Vec<u32>, u64> = HashMap::new();
    for t in 0..1000 + samples {
        gibbs_sweep_z(&mut z, &mut stats, &topo, &counts, &hp, &mut rng);
        if t >= 1000 {
            *hist.entry(z.canonical_labels()).or_default() += 1;
        }
    }
    let probs: Vec<f64> = exact.iter().map(|e| e.1).collect();
    TvCheck {
        tv: total_variation(&exact, &hist),
        noise: sampling_tv(&probs, samples as f64),
    }
}

/// Full `S = 1` chain on a 5-vertex graph against the exact posterior over
/// all 52 partitions, with hyperparameters held fixed.
pub fn single_subnetwork_tv(edges: &[(u32, u32)], keep: usize, seed: u64) -> TvCheck {
    let hp = Hyperparams::new(1.0, 2.0, 2.0).unwrap();
    let g = ObservedGraph::from_edges(5, edges.iter().copied()).unwrap();
    let exact = binary_sbm_posterior(5, g.edges(), hp.alpha, hp.kappa, hp.lambda);
    assert_eq!(exact.len(), 52);

    let mut ens = EnsembleState::initialize(&g, &HeldoutSet::empty(), 1, &fixed_config(seed, hp)).unwrap();
    let (burn, thin) = (2000, 5);
    let mut hist: HashMap<Vec<u32>, u64> = HashMap::new();
    for t in 0..burn + thin * keep {
        ens.full_sweep();
        if t >= burn && (t - burn) % thin == 0 {
            *hist.entry(ens.subnetworks()[0].z.canonical_labels()).or_default() += 1;
        }
    }
    let probs: Vec<f64> = exact.iter().map(|e| e.1).collect();
    TvCheck {
        tv: total_variation(&exact, &hist),
        noise: sampling_tv(&probs, keep as f64),
    }
}

/// Joint key: canonical partitions of both subnetworks, then the latent
/// counts of both subnetworks on the training edges.
fn joint_key(z1: &[u32], z2: &[u32], c1: &[u32], c2: &[u32]) -> Vec<u32> {
    let mut k = canonical(z1);
    k.extend(canonical(z2));
    k.extend_from_slice(c1);
    k.extend_from_slice(c2);
    k
}

/// Full `S = 2` chain on the path 0–1–2 against the enumerated joint over
/// both partitions and all latent counts up to `cap`. The enumeration is
/// truncated, so the chain is conditioned on every count lying within the
/// cap; the returned fraction is the chain's mass beyond it.
pub fn two_subnetwork_tv(keep: usize, seed: u64) -> (TvCheck, f64) {
    let hp = Hyperparams::new(1.0, 1.0, 4.0).unwrap();
    let g = ObservedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let cap = 3u32;

    let mut cache = HashMap::new();
    let mut weights = Vec::new();
    let parts = set_partitions(3);
    let per_edge: Vec<(u32, u32)> = (0..=cap)
        .flat_map(|a| (0..=cap).map(move |b| (a, b)))
        .filter(|&(a, b)| a + b > 0)
        .collect();
    for z1 in &parts {
        for z2 in &parts {
            for &(a0, b0) in &per_edge {
                for &(a1, b1) in &per_edge {
                    let (c1, c2) = ([a0, a1], [b0, b1]);
                    let mut w = crp_seating_prob(z1, hp.alpha).ln() + crp_seating_prob(z2, hp.alpha).ln();
                    for (z, c) in [(z1, &c1), (z2, &c2)] {
                        let dyads = [((0, 1), c[0]), ((1, 2), c[1]), ((0, 2), 0)];
                        w += log_collapsed_quadrature(z, &dyads, hp.kappa, hp.lambda, &mut cache);
                    }
                    weights.push((joint_key(z1, z2, &c1, &c2), w));
                }
            }
        }
    }
    let exact = normalize(weights);

    let mut ens = EnsembleState::initialize(&g, &HeldoutSet::empty(), 2, &fixed_config(seed, hp)).unwrap();
    let (burn, thin) = (2000, 2);
    let mut hist: HashMap<Vec<u32>, u64> = HashMap::new();
    for t in 0..burn + thin * keep {
        ens.full_sweep();
        if t >= burn && (t - burn) % thin == 0 {
            let s = ens.subnetworks();
            let c = ens.counts();
            *hist
                .entry(joint_key(s[0].z.labels(), s[1].z.labels(), &c[0], &c[1]))
                .or_default() += 1;
        }
    }
    hist.retain(|k, _| k[6..].iter().all(|&c| c <= cap));
    let inside = hist.values().sum::<u64>() as f64;
    let probs: Vec<f64> = exact.iter().map(|e| e.1).collect();
    let check = TvCheck {
        tv: total_variation(&exact, &hist),
        noise: sampling_tv(&probs, inside),
    };
    (check, 1.0 - inside / keep as f64)
}
