//! Block-pair sufficient statistics and the Gamma–Poisson collapsed
//! marginal.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::{Assignment, SymMatrix, Topology};
use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_gamma};

/// CRP concentration and Gamma(shape, rate) prior on block-pair rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub alpha: f64,
    pub kappa: f64,
    pub lambda: f64,
}

impl Hyperparams {
    pub fn new(alpha: f64, kappa: f64, lambda: f64) -> Result<Self> {
        let hp = Hyperparams {
            alpha,
            kappa,
            lambda,
        };
        hp.validate()?;
        Ok(hp)
    }

    /// Mean of the G(2, 1) hyperprior in every coordinate.
    pub fn prior_mean() -> Self {
        Hyperparams {
            alpha: 2.0,
            kappa: 2.0,
            lambda: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("kappa", self.kappa), ("lambda", self.lambda)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::arg(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// `N_ℓm` (latent edge totals) and `M_ℓm` (training dyads) per block pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockStats {
    pub(crate) edges: SymMatrix<u64>,
    pub(crate) dyads: SymMatrix<u64>,
}

impl BlockStats {
    pub fn num_blocks(&self) -> usize {
        self.edges.dim()
    }

    /// Latent edge total `N_ℓm`.
    pub fn edge_total(&self, l: usize, m: usize) -> u64 {
        self.edges.get(l, m)
    }

    /// Training dyad count `M_ℓm`.
    pub fn dyad_total(&self, l: usize, m: usize) -> u64 {
        self.dyads.get(l, m)
    }

    /// Iterates `(ℓ, m, N_ℓm, M_ℓm)` over pairs with `ℓ ≤ m`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u64, u64)> + '_ {
        let l = self.num_blocks();
        (0..l).flat_map(move |a| {
            (a..l).map(move |b| (a, b, self.edges.get(a, b), self.dyads.get(a, b)))
        })
    }

    /// Recomputes only the edge totals, e.g. after the counts were resampled.
    pub(crate) fn refresh_edges(&mut self, z: &Assignment, topo: &Topology, counts: &[u32]) {
        self.edges = edge_totals(z, topo, counts);
    }
}

fn edge_totals(z: &Assignment, topo: &Topology, counts: &[u32]) -> SymMatrix<u64> {
    let mut edges = SymMatrix::zeros(z.num_blocks());
    for (&(i, j), &c) in topo.edges().iter().zip(counts) {
        if c > 0 {
            edges.add(z.label(i as usize), z.label(j as usize), c as u64);
        }
    }
    edges
}

/// Sufficient statistics from scratch. `counts[e]` is this subnetwork's
/// latent count on training edge `e`; held-out dyads contribute to neither
/// `N` nor `M`.
pub fn block_stats(z: &Assignment, topo: &Topology, counts: &[u32]) -> BlockStats {
    let l = z.num_blocks();
    let sizes = z.sizes();
    let mut dyads = SymMatrix::zeros(l);
    for a in 0..l {
        let na = sizes[a] as u64;
        dyads.set(a, a, na * na.saturating_sub(1) / 2);
        for b in (a + 1)..l {
            dyads.set(a, b, na * sizes[b] as u64);
        }
    }
    for &(i, j) in topo.unobserved() {
        let (a, b) = (z.label(i as usize), z.label(j as usize));
        dyads.set(a, b, dyads.get(a, b) - 1);
    }
    BlockStats {
        edges: edge_totals(z, topo, counts),
        dyads,
    }
}

/// One block pair's term of the collapsed marginal:
/// `κ ln λ − ln Γ(κ) + ln Γ(N + κ) − (N + κ) ln(M + λ)`.
/// Zero when `N = M = 0`.
#[inline]
pub(crate) fn pair_term(edges: u64, dyads: u64, kappa: f64, lambda: f64, prior_const: f64) -> f64 {
    let shape = edges as f64 + kappa;
    prior_const + ln_gamma(shape) - shape * (dyads as f64 + lambda).ln()
}

#[inline]
pub(crate) fn prior_const(kappa: f64, lambda: f64) -> f64 {
    kappa * lambda.ln() - ln_gamma(kappa)
}

/// Sum of pair terms only (the part that depends on `κ`, `λ` and `z`).
pub(crate) fn collapsed_pair_sum(stats: &BlockStats, kappa: f64, lambda: f64) -> f64 {
    let c = prior_const(kappa, lambda);
    stats
        .pairs()
        .filter(|&(_, _, n, m)| n > 0 || m > 0)
        .map(|(_, _, n, m)| pair_term(n, m, kappa, lambda, c))
        .sum()
}

/// `ln p(A | z, κ, λ)` with the block-pair rates integrated out.
pub fn collapsed_log_likelihood(
    stats: &BlockStats,
    counts: &[u32],
    kappa: f64,
    lambda: f64,
) -> Result<f64> {
    if !(kappa > 0.0) || !(lambda > 0.0) {
        return Err(Error::arg(format!(
            "Gamma prior needs positive shape and rate, got ({kappa}, {lambda})"
        )));
    }
    let factorials: f64 = counts
        .iter()
        .filter(|&&c| c > 1)
        .map(|&c| ln_factorial(c as u64))
        .sum();
    Ok(collapsed_pair_sum(stats, kappa, lambda) - factorials)
}

/// Block-pair Poisson rates `η_ℓm`, symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateMatrix {
    dim: usize,
    rates: Vec<f64>,
}

impl RateMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut rates = vec![0.0; dim * dim];
        for a in 0..dim {
            for b in a..dim {
                let v = f(a, b);
                rates[a * dim + b] = v;
                rates[b * dim + a] = v;
            }
        }
        RateMatrix { dim, rates }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.rates[a * self.dim + b]
    }
}

/// Draws every `η_ℓm` from its conjugate conditional
/// `Gamma(N_ℓm + κ, rate = M_ℓm + λ)`.
pub fn sample_eta<R: Rng + ?Sized>(
    stats: &BlockStats,
    kappa: f64,
    lambda: f64,
    rng: &mut R,
) -> Result<RateMatrix> {
    if !(kappa > 0.0) || !(lambda > 0.0) {
        return Err(Error::arg(format!(
            "Gamma prior needs positive shape and rate, got ({kappa}, {lambda})"
        )));
    }
    let l = stats.num_blocks();
    let mut out = RateMatrix::from_fn(l, |_, _| 0.0);
    for (a, b, n, m) in stats.pairs() {
        let shape = n as f64 + kappa;
        let scale = 1.0 / (m as f64 + lambda);
        let g = Gamma::new(shape, scale).expect("positive gamma parameters");
        let v = g.sample(rng);
        out.rates[a * l + b] = v;
        out.rates[b * l + a] = v;
    }
    Ok(out)
}
