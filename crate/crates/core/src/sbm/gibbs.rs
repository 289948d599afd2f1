//! Collapsed Gibbs sweep over block assignments.

use rand::Rng;

use super::stats::{pair_term, prior_const};
use super::{Assignment, BlockStats, Hyperparams, SymMatrix, Topology};

/// Samples an index from unnormalised log weights.
pub(crate) fn sample_log_weights<R: Rng + ?Sized>(log_w: &[f64], rng: &mut R) -> usize {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = log_w.iter().map(|&w| (w - max).exp()).sum();
    let mut u = rng.gen::<f64>() * total;
    for (k, &w) in log_w.iter().enumerate() {
        u -= (w - max).exp();
        if u < 0.0 {
            return k;
        }
    }
    log_w.len() - 1
}

/// Scratch buffers reused across vertices.
#[derive(Default)]
struct Scratch {
    // latent edges from the vertex into each block
    edges_to: Vec<u64>,
    // training dyads from the vertex into each block
    dyads_to: Vec<u64>,
    // unobserved dyads from the vertex into each block
    held_to: Vec<u64>,
    log_w: Vec<f64>,
}

/// One systematic-scan sweep (vertices `0..n`) of the collapsed Gibbs
/// sampler for `p(z | A, α, κ, λ)`. `stats` must be consistent with `z`
/// and `counts` on entry and is kept consistent incrementally.
pub fn gibbs_sweep_z<R: Rng + ?Sized>(
    z: &mut Assignment,
    stats: &mut BlockStats,
    topo: &Topology,
    counts: &[u32],
    hp: &Hyperparams,
    rng: &mut R,
) {
    let n = z.len();
    if n <= 1 {
        return;
    }
    let (kappa, lambda) = (hp.kappa, hp.lambda);
    let c = prior_const(kappa, lambda);
    let term = |e: u64, d: u64| pair_term(e, d, kappa, lambda, c);

    // cached pair terms for the current statistics
    let l0 = z.num_blocks();
    let mut cache = SymMatrix::<f64>::zeros(l0);
    for a in 0..l0 {
        for b in a..l0 {
            cache.set(a, b, term(stats.edges.get(a, b), stats.dyads.get(a, b)));
        }
    }
    let mut s = Scratch::default();
    let ln_alpha = hp.alpha.ln();

    for i in 0..n {
        let l = z.num_blocks();
        s.edges_to.clear();
        s.edges_to.resize(l, 0);
        s.held_to.clear();
        s.held_to.resize(l, 0);
        for &(j, e) in topo.edge_neighbours(i) {
            s.edges_to[z.label(j as usize)] += counts[e as usize] as u64;
        }
        for &j in topo.unobserved_neighbours(i) {
            s.held_to[z.label(j as usize)] += 1;
        }

        // take i out of its block
        let k0 = z.label(i);
        s.dyads_to.clear();
        s.dyads_to.extend(z.sizes().iter().zip(&s.held_to).enumerate().map(
            |(m, (&sz, &h))| sz as u64 - (m == k0) as u64 - h,
        ));
        for m in 0..l {
            if s.edges_to[m] > 0 || s.dyads_to[m] > 0 {
                sub(&mut stats.edges, k0, m, s.edges_to[m]);
                sub(&mut stats.dyads, k0, m, s.dyads_to[m]);
            }
        }
        for m in 0..l {
            cache.set(k0, m, term(stats.edges.get(k0, m), stats.dyads.get(k0, m)));
        }
        if z.detach(i).is_some() {
            stats.edges.swap_remove(k0);
            stats.dyads.swap_remove(k0);
            cache.swap_remove(k0);
            s.edges_to.swap_remove(k0);
            s.dyads_to.swap_remove(k0);
        }

        // candidate weights: existing blocks, then a new block
        let l = z.num_blocks();
        s.log_w.clear();
        for k in 0..l {
            let mut w = (z.sizes()[k] as f64).ln();
            let (n_row, m_row, c_row) = (stats.edges.row(k), stats.dyads.row(k), cache.row(k));
            for m in 0..l {
                let (de, dd) = (s.edges_to[m], s.dyads_to[m]);
                if de > 0 || dd > 0 {
                    w += term(n_row[m] + de, m_row[m] + dd) - c_row[m];
                }
            }
            s.log_w.push(w);
        }
        let mut w_new = ln_alpha;
        for m in 0..l {
            let (de, dd) = (s.edges_to[m], s.dyads_to[m]);
            if de > 0 || dd > 0 {
                w_new += term(de, dd);
            }
        }
        s.log_w.push(w_new);

        let k = sample_log_weights(&s.log_w, rng);
        if k == l {
            stats.edges.push();
            stats.dyads.push();
            cache.push();
        }
        z.attach(i, k);
        for m in 0..l {
            let (de, dd) = (s.edges_to[m], s.dyads_to[m]);
            if de > 0 || dd > 0 {
                stats.edges.add(k, m, de);
                stats.dyads.add(k, m, dd);
            }
        }
        for m in 0..z.num_blocks() {
            cache.set(k, m, term(stats.edges.get(k, m), stats.dyads.get(k, m)));
        }
    }
}

#[inline]
fn sub(mat: &mut SymMatrix<u64>, a: usize, b: usize, v: u64) {
    let cur = mat.get(a, b);
    debug_assert!(cur >= v, "block statistics underflow");
    mat.set(a, b, cur - v);
}
