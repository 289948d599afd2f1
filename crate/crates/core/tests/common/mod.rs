//! Independent oracles shared by the integration tests. The oracles in this
//! file never call the library's densities; `checks` compares against them.
#![allow(dead_code)]

pub mod checks;

use std::collections::HashMap;

/// All set partitions of `n` elements as restricted-growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for l in 0..=max + 1 {
            prefix.push(l);
            rec(prefix, max.max(l), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    rec(&mut prefix, 0, n, &mut out);
    out
}

/// Canonical relabelling by first appearance.
pub fn canonical(z: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    z.iter()
        .map(|&l| {
            let next = map.len() as u32;
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// CRP probability of a restricted-growth string via the seating rule.
pub fn crp_seating_prob(z: &[u32], alpha: f64) -> f64 {
    let mut sizes: Vec<f64> = Vec::new();
    let mut p = 1.0;
    for (i, &l) in z.iter().enumerate() {
        let denom = i as f64 + alpha;
        if l as usize == sizes.len() {
            p *= alpha / denom;
            sizes.push(1.0);
        } else {
            p *= sizes[l as usize] / denom;
            sizes[l as usize] += 1.0;
        }
    }
    p
}

pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|x| (x as f64).ln()).sum()
}

/// `log ∫_0^∞ exp(log_f(η)) dη` by composite Simpson in `u = ln η`, with
/// the range grown until the integrand falls 50 nats below its peak.
pub fn log_integrate(log_f: impl Fn(f64) -> f64) -> f64 {
    let log_g = |u: f64| log_f(u.exp()) + u;
    // coarse peak search
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut u = -60.0;
    while u <= 12.0 {
        let v = log_g(u);
        if v > best.0 {
            best = (v, u);
        }
        u += 0.05;
    }
    let (peak, u0) = best;
    let mut lo = u0;
    while log_g(lo) > peak - 50.0 && lo > -400.0 {
        lo -= 0.5;
    }
    let mut hi = u0;
    while log_g(hi) > peak - 50.0 && hi < 20.0 {
        hi += 0.5;
    }
    let steps = 8000usize;
    let h = (hi - lo) / steps as f64;
    let mut acc = 0.0;
    for k in 0..=steps {
        let w = if k == 0 || k == steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * (log_g(lo + k as f64 * h) - peak).exp();
    }
    peak + (acc * h / 3.0).ln()
}

/// `log ∫ Π_d Pois(c_d | η) Ga(η | κ, λ) dη` for one block pair, with the
/// Gamma normaliser also obtained by quadrature.
pub fn log_pair_marginal_quadrature(counts: &[u32], kappa: f64, lambda: f64) -> f64 {
    let prior = |eta: f64| (kappa - 1.0) * eta.ln() - lambda * eta;
    let joint = |eta: f64| {
        prior(eta)
            + counts
                .iter()
                .map(|&c| c as f64 * eta.ln() - eta - ln_factorial(c))
                .sum::<f64>()
    };
    log_integrate(joint) - log_integrate(prior)
}

/// Collapsed log-likelihood of per-dyad counts under partition `z`
/// (`dyads` lists every observed dyad with its count; held-out dyads are
/// simply absent).
pub fn log_collapsed_quadrature(
    z: &[u32],
    dyads: &[((u32, u32), u32)],
    kappa: f64,
    lambda: f64,
    cache: &mut HashMap<Vec<u32>, f64>,
) -> f64 {
    let mut per_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for &((i, j), c) in dyads {
        let (a, b) = (z[i as usize], z[j as usize]);
        per_pair.entry((a.min(b), a.max(b))).or_default().push(c);
    }
    per_pair
        .into_values()
        .map(|mut cs| {
            cs.sort_unstable();
            *cache
                .entry(cs.clone())
                .or_insert_with(|| log_pair_marginal_quadrature(&cs, kappa, lambda))
        })
        .sum()
}

/// `log ∫ (1 − e^{−η})^E e^{−(M−E)η} Ga(η | κ, λ) dη` by binomial expansion:
/// `Σ_k C(E,k) (−1)^k (λ / (λ + M − E + k))^κ`.
pub fn log_binary_pair_marginal(edges: u32, dyads: u32, kappa: f64, lambda: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=edges {
        if k > 0 {
            binom *= (edges - k + 1) as f64 / k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * (lambda / (lambda + (dyads - edges + k) as f64)).powf(kappa);
    }
    sum.ln()
}

/// Exact posterior over set partitions of a binary graph under one
/// Poisson SBM observed through the Heaviside.
pub fn binary_sbm_posterior(n: usize, edges: &[(u32, u32)], alpha: f64, kappa: f64, lambda: f64) -> Vec<(Vec<u32>, f64)> {
    let parts = set_partitions(n);
    let mut weights = Vec::with_capacity(parts.len());
    for z in parts {
        let mut pairs: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                let (a, b) = (z[i as usize], z[j as usize]);
                let e = pairs.entry((a.min(b), a.max(b))).or_default();
                e.1 += 1;
                if edges.contains(&(i, j)) {
                    e.0 += 1;
                }
            }
        }
        let ll: f64 = pairs
            .values()
            .map(|&(e, m)| log_binary_pair_marginal(e, m, kappa, lambda))
            .sum();
        let w = crp_seating_prob(&z, alpha).ln() + ll;
        weights.push((z, w));
    }
    normalize(weights)
}

pub fn normalize<K>(log_weights: Vec<(K, f64)>) -> Vec<(K, f64)> {
    let max = log_weights.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = log_weights.iter().map(|w| (w.1 - max).exp()).sum();
    log_weights
        .into_iter()
        .map(|(k, w)| (k, (w - max).exp() / total))
        .collect()
}

/// Total variation between an exact distribution and empirical counts;
/// empirical mass on keys missing from `exact` counts fully.
pub fn total_variation<K: std::hash::Hash + Eq>(exact: &[(K, f64)], counts: &HashMap<K, u64>) -> f64 {
    let total: u64 = counts.values().sum();
    let mut tv = 0.0;
    let mut covered = 0u64;
    for (k, p) in exact {
        let c = counts.get(k).copied().unwrap_or(0);
        covered += c;
        tv += (c as f64 / total as f64 - p).abs();
    }
    tv += (total - covered) as f64 / total as f64;
    tv / 2.0
}
