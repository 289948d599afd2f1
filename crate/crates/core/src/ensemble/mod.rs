//! The ensemble of `S` latent subnetworks and the MCMC sweep over it.
//!
//! One sweep runs four phases separated by barriers:
//!
//! 1. per subnetwork, draw the block-pair rates from their conjugate
//!    conditional;
//! 2. per dyad block, redraw each training edge's total latent count from
//!    the zero-truncated Poisson and split it multinomially across
//!    subnetworks; held-out dyads are imputed from the untruncated Poisson;
//! 3. per subnetwork, a collapsed Gibbs sweep over block assignments;
//! 4. per subnetwork, Metropolis–Hastings on the hyperparameters.
//!
//! Every unit of work draws from its own keyed stream (see [`crate::rng`]),
//! so a sweep is bit-identical for any worker count.

mod sampling;

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use sampling::{sample_total_count, split_count, RATE_FLOOR};
pub(crate) use sampling::poisson as poisson_count;
use sampling::{poisson, split_into, zero_truncated_poisson};

use crate::error::{Error, Result};
use crate::graph_io::{HeldoutSet, ObservedGraph};
use crate::rng::{stream, Phase};
use crate::sbm::{
    block_stats, collapsed_log_likelihood, crp_log_density, gibbs_sweep_z, mh_update_hyperparams,
    sample_crp, sample_eta, Assignment, BlockStats, Hyperparams, RateMatrix, Topology, DEFAULT_STEP,
};
use crate::special::ln_hyperprior;
use crate::trace::{expected_records, is_retained, ChainTrace, TraceHeader, TraceRecord, TRACE_FORMAT, TRACE_VERSION};

/// Training edges handled by one dyad-phase work unit.
pub const DYAD_BLOCK: usize = 2048;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub iterations: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub master_seed: u64,
    pub parallel_workers: usize,
    pub initial_hyperparams: Hyperparams,
    /// When false the hyperparameters stay at their initial values.
    pub sample_hyperparams: bool,
    pub mh_step: f64,
    /// Store per-subnetwork latent counts in every retained record.
    pub record_counts: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            iterations: 6000,
            burn_in: 3000,
            thinning: 10,
            master_seed: 0,
            parallel_workers: 1,
            initial_hyperparams: Hyperparams::prior_mean(),
            sample_hyperparams: true,
            mh_step: DEFAULT_STEP,
            record_counts: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::arg("iterations must be positive"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::arg(format!(
                "burn-in {} must be below the iteration count {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thinning == 0 {
            return Err(Error::arg("thinning must be positive"));
        }
        if self.parallel_workers == 0 {
            return Err(Error::arg("at least one worker is required"));
        }
        if !(self.mh_step > 0.0) {
            return Err(Error::arg("MH step must be positive"));
        }
        self.initial_hyperparams.validate()
    }
}

/// One latent SBM.
#[derive(Clone, Debug, PartialEq)]
pub struct SubnetworkState {
    pub z: Assignment,
    pub stats: BlockStats,
    pub eta: RateMatrix,
    pub hp: Hyperparams,
}

impl SubnetworkState {
    #[inline]
    fn rate(&self, i: u32, j: u32) -> f64 {
        self.eta
            .get(self.z.label(i as usize), self.z.label(j as usize))
            .max(RATE_FLOOR)
    }
}

/// Wall time spent per sweep phase.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub eta: Duration,
    pub edges: Duration,
    pub gibbs: Duration,
    pub hyper: Duration,
}

#[derive(Clone, Debug)]
pub struct EnsembleState {
    topo: Topology,
    heldout: Vec<(u32, u32, u8)>,
    subs: Vec<SubnetworkState>,
    /// `counts[s][e]`: latent count of subnetwork `s` on training edge `e`.
    counts: Vec<Vec<u32>>,
    /// `heldout_counts[s][h]`: imputed count on held-out dyad `h`.
    heldout_counts: Vec<Vec<u32>>,
    heldout_totals: Vec<u32>,
    /// Stream unit per subnetwork; the dyad phase visits subnetworks in
    /// ascending stream order.
    stream_ids: Vec<u64>,
    iteration: u64,
    master_seed: u64,
    mh_step: f64,
    sample_hyperparams: bool,
    timings: PhaseTimings,
}

impl EnsembleState {
    /// Random initial state: CRP(1) assignments, each observed edge given a
    /// single latent edge in a uniformly chosen subnetwork, hyperparameters
    /// from `cfg`.
    pub fn initialize(
        g: &ObservedGraph,
        heldout: &HeldoutSet,
        subnetworks: usize,
        cfg: &SweepConfig,
    ) -> Result<Self> {
        if subnetworks == 0 {
            return Err(Error::arg("at least one subnetwork is required"));
        }
        if g.n() == 0 {
            return Err(Error::arg("graph has no vertices"));
        }
        for &(i, j, _) in &heldout.dyads {
            if g.value(i, j).is_some() {
                return Err(Error::arg(format!(
                    "held-out dyad ({i}, {j}) is still part of the training graph"
                )));
            }
        }
        let topo = Topology::from_graph(g);
        let seed = cfg.master_seed;
        let n_edges = topo.edges().len();

        let mut counts = vec![vec![0u32; n_edges]; subnetworks];
        let mut rng = stream(seed, Phase::Init, 0, subnetworks as u64);
        for e in 0..n_edges {
            counts[rng.gen_range(0..subnetworks)][e] = 1;
        }

        let mut subs = Vec::with_capacity(subnetworks);
        for (s, c) in counts.iter().enumerate() {
            let z = sample_crp(topo.n(), 1.0, &mut stream(seed, Phase::Init, 0, s as u64))?;
            let stats = block_stats(&z, &topo, c);
            let eta = RateMatrix::from_fn(z.num_blocks(), |_, _| 0.0);
            subs.push(SubnetworkState {
                z,
                stats,
                eta,
                hp: cfg.initial_hyperparams,
            });
        }
        let h = heldout.dyads.len();
        Ok(EnsembleState {
            topo,
            heldout: heldout.dyads.clone(),
            subs,
            counts,
            heldout_counts: vec![vec![0; h]; subnetworks],
            heldout_totals: vec![0; h],
            stream_ids: (0..subnetworks as u64).collect(),
            iteration: 0,
            master_seed: seed,
            mh_step: cfg.mh_step,
            sample_hyperparams: cfg.sample_hyperparams,
            timings: PhaseTimings::default(),
        })
    }

    /// State with explicit assignments and latent counts.
    pub fn from_parts(
        g: &ObservedGraph,
        heldout: &HeldoutSet,
        assignments: Vec<Assignment>,
        counts: Vec<Vec<u32>>,
        hp: Vec<Hyperparams>,
        cfg: &SweepConfig,
    ) -> Result<Self> {
        let s = assignments.len();
        let mut ens = EnsembleState::initialize(g, heldout, s.max(1), cfg)?;
        if counts.len() != s || hp.len() != s {
            return Err(Error::arg("one count vector and hyperparameter set per subnetwork"));
        }
        for (k, ((z, c), h)) in assignments.into_iter().zip(&counts).zip(hp).enumerate() {
            if z.len() != g.n() || c.len() != ens.topo.edges().len() {
                return Err(Error::arg(format!("subnetwork {k} has mismatched dimensions")));
            }
            h.validate()?;
            ens.subs[k] = SubnetworkState {
                stats: block_stats(&z, &ens.topo, c),
                eta: RateMatrix::from_fn(z.num_blocks(), |_, _| 0.0),
                z,
                hp: h,
            };
        }
        ens.counts = counts;
        Ok(ens)
    }

    pub fn subnetworks(&self) -> &[SubnetworkState] {
        &self.subs
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    pub fn heldout_dyads(&self) -> &[(u32, u32, u8)] {
        &self.heldout
    }

    pub fn heldout_totals(&self) -> &[u32] {
        &self.heldout_totals
    }

    pub fn heldout_counts(&self) -> &[Vec<u32>] {
        &self.heldout_counts
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn timings(&self) -> PhaseTimings {
        self.timings
    }

    /// Overrides the per-subnetwork stream units (a permutation of `0..S`).
    pub fn set_stream_ids(&mut self, ids: Vec<u64>) -> Result<()> {
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted != (0..self.subs.len() as u64).collect::<Vec<_>>() {
            return Err(Error::arg("stream ids must be a permutation of 0..S"));
        }
        self.stream_ids = ids;
        Ok(())
    }

    /// Sets the rate matrices directly (normally drawn by the sweep).
    pub fn set_rates(&mut self, rates: Vec<RateMatrix>) -> Result<()> {
        if rates.len() != self.subs.len()
            || rates.iter().zip(&self.subs).any(|(r, s)| r.dim() != s.z.num_blocks())
        {
            return Err(Error::arg("one rate matrix per subnetwork with matching block count"));
        }
        for (s, r) in self.subs.iter_mut().zip(rates) {
            s.eta = r;
        }
        Ok(())
    }

    /// `η_ij = Σ_s η^s_{z_i z_j}` with each term floored at [`RATE_FLOOR`].
    pub fn total_rate(&self, i: u32, j: u32) -> f64 {
        self.subs.iter().map(|s| s.rate(i, j)).sum()
    }

    fn split_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.subs.len()).collect();
        order.sort_by_key(|&s| self.stream_ids[s]);
        order
    }

    /// Phase 1: draw every subnetwork's rates.
    pub fn sample_rates(&mut self) {
        let (seed, t) = (self.master_seed, self.iteration);
        let ids = &self.stream_ids;
        self.subs.par_iter_mut().enumerate().for_each(|(s, sub)| {
            let mut rng = stream(seed, Phase::Eta, t, ids[s]);
            sub.eta = sample_eta(&sub.stats, sub.hp.kappa, sub.hp.lambda, &mut rng)
                .expect("hyperparameters stay positive");
        });
    }

    /// Phase 2a: redraw latent counts on every training edge and refresh
    /// the edge totals of every subnetwork.
    pub fn resample_edges(&mut self) {
        let s_count = self.subs.len();
        let n_edges = self.topo.edges().len();
        if n_edges == 0 {
            return;
        }
        let order = self.split_order();
        let (seed, t) = (self.master_seed, self.iteration);
        let mut flat = vec![0u32; n_edges * s_count];
        {
            let edges = self.topo.edges();
            let subs = &self.subs;
            flat.par_chunks_mut(DYAD_BLOCK * s_count)
                .enumerate()
                .for_each(|(b, chunk)| {
                    let mut rng = stream(seed, Phase::Edges, t, b as u64);
                    let mut rates = vec![0.0; s_count];
                    let mut split = vec![0u32; s_count];
                    for (k, out) in chunk.chunks_mut(s_count).enumerate() {
                        let (i, j) = edges[b * DYAD_BLOCK + k];
                        for (r, &s) in rates.iter_mut().zip(&order) {
                            *r = subs[s].rate(i, j);
                        }
                        let total = zero_truncated_poisson(rates.iter().sum(), &mut rng);
                        split_into(total, &rates, &mut split, &mut rng);
                        for (&x, &s) in split.iter().zip(&order) {
                            out[s] = x;
                        }
                    }
                });
        }
        let topo = &self.topo;
        self.counts
            .par_iter_mut()
            .zip(self.subs.par_iter_mut())
            .enumerate()
            .for_each(|(s, (c, sub))| {
                for (e, x) in c.iter_mut().enumerate() {
                    *x = flat[e * s_count + s];
                }
                sub.stats.refresh_edges(&sub.z, topo, c);
            });
    }

    /// Phase 2b: impute every held-out dyad from the untruncated Poisson
    /// and split it across subnetworks. Imputed counts are kept outside the
    /// block statistics.
    pub fn impute_heldout(&mut self) {
        let s_count = self.subs.len();
        let h = self.heldout.len();
        if h == 0 {
            return;
        }
        let order = self.split_order();
        let (seed, t) = (self.master_seed, self.iteration);
        let mut flat = vec![0u32; h * s_count];
        let mut totals = vec![0u32; h];
        {
            let dyads = &self.heldout;
            let subs = &self.subs;
            flat.par_chunks_mut(DYAD_BLOCK * s_count)
                .zip(totals.par_chunks_mut(DYAD_BLOCK))
                .enumerate()
                .for_each(|(b, (chunk, tot))| {
                    let mut rng = stream(seed, Phase::Heldout, t, b as u64);
                    let mut rates = vec![0.0; s_count];
                    let mut split = vec![0u32; s_count];
                    for (k, (out, total_out)) in chunk.chunks_mut(s_count).zip(tot.iter_mut()).enumerate() {
                        let (i, j, _) = dyads[b * DYAD_BLOCK + k];
                        for (r, &s) in rates.iter_mut().zip(&order) {
                            *r = subs[s].eta.get(subs[s].z.label(i as usize), subs[s].z.label(j as usize));
                        }
                        let total = poisson(rates.iter().sum(), &mut rng);
                        *total_out = total;
                        if total > 0 {
                            split_into(total, &rates, &mut split, &mut rng);
                            for (&x, &s) in split.iter().zip(&order) {
                                out[s] = x;
                            }
                        }
                    }
                });
        }
        for (s, c) in self.heldout_counts.iter_mut().enumerate() {
            for (k, x) in c.iter_mut().enumerate() {
                *x = flat[k * s_count + s];
            }
        }
        self.heldout_totals = totals;
    }

    /// Phase 3: one collapsed Gibbs sweep per subnetwork.
    pub fn sweep_assignments(&mut self) {
        let (seed, t) = (self.master_seed, self.iteration);
        let topo = &self.topo;
        let ids = &self.stream_ids;
        self.subs
            .par_iter_mut()
            .zip(self.counts.par_iter())
            .enumerate()
            .for_each(|(s, (sub, c))| {
                let mut rng = stream(seed, Phase::Gibbs, t, ids[s]);
                let hp = sub.hp;
                gibbs_sweep_z(&mut sub.z, &mut sub.stats, topo, c, &hp, &mut rng);
            });
    }

    /// Phase 4: hyperparameter MH per subnetwork.
    pub fn update_hyperparams(&mut self) {
        let (seed, t, step) = (self.master_seed, self.iteration, self.mh_step);
        let ids = &self.stream_ids;
        self.subs.par_iter_mut().enumerate().for_each(|(s, sub)| {
            let mut rng = stream(seed, Phase::Hyper, t, ids[s]);
            sub.hp = mh_update_hyperparams(&sub.hp, &sub.z, &sub.stats, step, &mut rng).0;
        });
    }

    /// One complete sweep; increments the iteration counter first so the
    /// streams of sweep `t` are keyed by `t`.
    pub fn full_sweep(&mut self) {
        self.iteration += 1;
        let t0 = Instant::now();
        self.sample_rates();
        let t1 = Instant::now();
        self.resample_edges();
        self.impute_heldout();
        let t2 = Instant::now();
        self.sweep_assignments();
        let t3 = Instant::now();
        if self.sample_hyperparams {
            self.update_hyperparams();
        }
        let t4 = Instant::now();
        self.timings.eta += t1 - t0;
        self.timings.edges += t2 - t1;
        self.timings.gibbs += t3 - t2;
        self.timings.hyper += t4 - t3;
    }

    /// Joint log density of assignments, latent counts and hyperparameters
    /// with the rates integrated out.
    pub fn log_density(&self) -> f64 {
        self.subs
            .iter()
            .zip(&self.counts)
            .map(|(sub, c)| {
                let hp = sub.hp;
                crp_log_density(&sub.z, hp.alpha).expect("positive alpha")
                    + collapsed_log_likelihood(&sub.stats, c, hp.kappa, hp.lambda).expect("positive prior")
                    + ln_hyperprior(hp.alpha)
                    + ln_hyperprior(hp.kappa)
                    + ln_hyperprior(hp.lambda)
            })
            .sum()
    }

    pub fn record(&self, with_counts: bool) -> TraceRecord {
        TraceRecord {
            iteration: self.iteration,
            blocks: self.subs.iter().map(|s| s.z.num_blocks()).collect(),
            hyperparams: self.subs.iter().map(|s| s.hp).collect(),
            log_density: self.log_density(),
            assignments: self.subs.iter().map(|s| s.z.labels().to_vec()).collect(),
            heldout_totals: self.heldout_totals.clone(),
            edge_counts: with_counts.then(|| self.counts.clone()),
            heldout_counts: with_counts.then(|| self.heldout_counts.clone()),
        }
    }

    /// Checks the Heaviside constraint, label compaction and that every
    /// subnetwork's statistics equal a from-scratch recomputation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for e in 0..self.topo.edges().len() {
            if self.counts.iter().all(|c| c[e] == 0) {
                return Err(format!("observed edge {:?} has no latent edge", self.topo.edges()[e]));
            }
        }
        for (s, (sub, c)) in self.subs.iter().zip(&self.counts).enumerate() {
            if !sub.z.check() {
                return Err(format!("subnetwork {s}: labels not compact"));
            }
            if sub.stats != block_stats(&sub.z, &self.topo, c) {
                return Err(format!("subnetwork {s}: block statistics drifted"));
            }
        }
        for (k, &tot) in self.heldout_totals.iter().enumerate() {
            let sum: u32 = self.heldout_counts.iter().map(|c| c[k]).sum();
            if sum != tot {
                return Err(format!("held-out dyad {k}: split does not conserve the total"));
            }
        }
        Ok(())
    }
}

/// What a chain run produced besides its records.
#[derive(Clone, Debug)]
pub struct ChainOutcome {
    pub header: TraceHeader,
    pub completed_iterations: u64,
    pub timings: PhaseTimings,
    pub final_state: EnsembleState,
}

pub fn trace_header(g: &ObservedGraph, heldout: &HeldoutSet, subnetworks: usize, cfg: &SweepConfig) -> TraceHeader {
    TraceHeader {
        format: TRACE_FORMAT.to_string(),
        version: TRACE_VERSION,
        manifest: None,
        n: g.n(),
        subnetworks,
        iterations: cfg.iterations,
        burn_in: cfg.burn_in,
        thinning: cfg.thinning,
        master_seed: cfg.master_seed,
        scan_order: "systematic".to_string(),
        mh_step: cfg.mh_step,
        sample_hyperparams: cfg.sample_hyperparams,
        observed_edges: g.edge_count() + heldout.positives,
        train_edges: g.edges().to_vec(),
        heldout: heldout.dyads.clone(),
        expected_records: expected_records(cfg.iterations, cfg.burn_in, cfg.thinning),
    }
}

/// Runs the chain, handing each retained record to `on_record`. Returning
/// `ControlFlow::Break` stops the run early.
pub fn run_chain_with<F>(
    g: &ObservedGraph,
    heldout: &HeldoutSet,
    subnetworks: usize,
    cfg: &SweepConfig,
    mut on_record: F,
) -> Result<ChainOutcome>
where
    F: FnMut(&TraceRecord) -> ControlFlow<()>,
{
    cfg.validate()?;
    let header = trace_header(g, heldout, subnetworks, cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel_workers)
        .build()
        .map_err(|e| Error::arg(format!("thread pool: {e}")))?;
    let mut ens = EnsembleState::initialize(g, heldout, subnetworks, cfg)?;
    for t in 1..=cfg.iterations {
        pool.install(|| ens.full_sweep());
        if is_retained(t, cfg.burn_in, cfg.thinning) {
            let rec = ens.record(cfg.record_counts);
            if on_record(&rec).is_break() {
                break;
            }
        }
    }
    Ok(ChainOutcome {
        header,
        completed_iterations: ens.iteration(),
        timings: ens.timings(),
        final_state: ens,
    })
}

/// Runs the chain and collects the retained records.
pub fn run_chain(
    g: &ObservedGraph,
    heldout: &HeldoutSet,
    subnetworks: usize,
    cfg: &SweepConfig,
) -> Result<ChainTrace> {
    let mut records = Vec::new();
    let outcome = run_chain_with(g, heldout, subnetworks, cfg, |r| {
        records.push(r.clone());
        ControlFlow::Continue(())
    })?;
    Ok(ChainTrace {
        header: outcome.header,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_graph() -> ObservedGraph {
        ObservedGraph::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]).unwrap()
    }

    fn fixed_cfg() -> SweepConfig {
        SweepConfig {
            iterations: 10,
            burn_in: 5,
            thinning: 1,
            master_seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn total_rate_sums_subnetworks() {
        let g = ObservedGraph::from_edges(2, [(0, 1)]).unwrap();
        let cfg = fixed_cfg();
        let one = vec![Assignment::single_block(2)];
        let mut ens =
            EnsembleState::from_parts(&g, &HeldoutSet::empty(), one, vec![vec![1]], vec![Hyperparams::prior_mean()], &cfg)
                .unwrap();
        ens.set_rates(vec![RateMatrix::from_fn(1, |_, _| 0.7)]).unwrap();
        assert!((ens.total_rate(0, 1) - 0.7).abs() < 1e-15);

        let two = vec![Assignment::single_block(2), Assignment::from_labels(&[0, 1])];
        let mut ens = EnsembleState::from_parts(
            &g,
            &HeldoutSet::empty(),
            two,
            vec![vec![1], vec![0]],
            vec![Hyperparams::prior_mean(); 2],
            &cfg,
        )
        .unwrap();
        ens.set_rates(vec![
            RateMatrix::from_fn(1, |_, _| 0.3),
            RateMatrix::from_fn(2, |a, b| if a == b { 9.0 } else { 0.5 }),
        ])
        .unwrap();
        assert!((ens.total_rate(0, 1) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn chain_retains_post_burn_in_records() {
        let trace = run_chain(&small_graph(), &HeldoutSet::empty(), 2, &fixed_cfg()).unwrap();
        assert_eq!(trace.records.len(), 5);
        assert_eq!(trace.records[0].iteration, 6);
        assert_eq!(trace.header.expected_records, 5);
    }

    #[test]
    fn empty_graph_sweeps_cleanly() {
        let g = ObservedGraph::from_edges(4, []).unwrap();
        let mut ens = EnsembleState::initialize(&g, &HeldoutSet::empty(), 2, &fixed_cfg()).unwrap();
        for _ in 0..5 {
            ens.full_sweep();
            ens.check_invariants().unwrap();
        }
        assert!(ens.counts().iter().all(|c| c.is_empty()));
    }

    #[test]
    fn single_subnetwork_receives_whole_total() {
        let mut ens = EnsembleState::initialize(&small_graph(), &HeldoutSet::empty(), 1, &fixed_cfg()).unwrap();
        for _ in 0..20 {
            ens.full_sweep();
            assert!(ens.counts()[0].iter().all(|&c| c >= 1));
        }
    }

    #[test]
    fn early_stop_yields_prefix() {
        let mut seen = 0;
        let out = run_chain_with(&small_graph(), &HeldoutSet::empty(), 1, &fixed_cfg(), |_| {
            seen += 1;
            if seen == 2 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert_eq!(seen, 2);
        assert_eq!(out.completed_iterations, 7);
    }

    #[test]
    fn rejects_bad_configs() {
        let g = small_graph();
        let h = HeldoutSet::empty();
        for cfg in [
            SweepConfig { iterations: 0, burn_in: 0, ..fixed_cfg() },
            SweepConfig { burn_in: 10, ..fixed_cfg() },
            SweepConfig { thinning: 0, ..fixed_cfg() },
            SweepConfig { parallel_workers: 0, ..fixed_cfg() },
        ] {
            assert!(run_chain(&g, &h, 1, &cfg).is_err());
        }
        assert!(run_chain(&g, &h, 0, &fixed_cfg()).is_err());
    }
}
