use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use mnsbm::graph_io::ParseOptions;
use mnsbm::rng::{stream, Phase};
use mnsbm::trace::{write_header, write_record};
use mnsbm::{
    parse_edge_list, predict_link_prob, run_chain_with, split_holdout, ChainTrace, HeldoutSet, ObservedGraph,
    SweepConfig,
};

use crate::config::Overrides;
use crate::error::{io_at, CliResult, Failure};
use crate::manifest::{RunManifest, Timings};

pub const TRACE_FILE: &str = "trace.jsonl";
pub const PREDICTION_FILE: &str = "predictions.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Sweep and split settings shared by `fit` and `experiment`.
#[derive(Args, Debug, Clone, Default)]
pub struct ChainArgs {
    /// Total sweeps T.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Sweeps discarded before recording.
    #[arg(long)]
    pub burnin: Option<u64>,
    /// Record every n-th post-burn-in sweep.
    #[arg(long)]
    pub thin: Option<u64>,
    /// Fraction of edges (and as many non-edges) held out; 0 disables.
    #[arg(long)]
    pub holdout: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Threads used inside each sweep; traces do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Leave latent counts out of the trace (smaller files, no similarity).
    #[arg(long)]
    pub no_counts: bool,
}

pub const CHAIN_KEYS: &[&str] = &["iters", "burnin", "thin", "holdout", "seed", "workers", "no-counts"];

/// Resolved chain settings.
#[derive(Debug, Clone)]
pub struct ChainSettings {
    pub sweep: SweepConfig,
    pub holdout: f64,
}

impl ChainArgs {
    pub fn resolve(&self, cfg: &Overrides) -> CliResult<ChainSettings> {
        let d = SweepConfig::default();
        let sweep = SweepConfig {
            iterations: cfg.pick(self.iters, "iters", d.iterations)?,
            burn_in: cfg.pick(self.burnin, "burnin", d.burn_in)?,
            thinning: cfg.pick(self.thin, "thin", d.thinning)?,
            master_seed: cfg.seed(self.seed)?,
            parallel_workers: cfg.pick(self.workers, "workers", 1)?,
            record_counts: !cfg.flag(self.no_counts, "no-counts")?,
            ..d
        };
        sweep.validate()?;
        let holdout = cfg.pick(self.holdout, "holdout", 0.05)?;
        if !(0.0..1.0).contains(&holdout) {
            return Err(Failure::usage(format!("--holdout must lie in [0, 1), got {holdout}")));
        }
        Ok(ChainSettings { sweep, holdout })
    }
}

impl ChainSettings {
    pub fn record(&self, m: &mut RunManifest) {
        let s = &self.sweep;
        m.param("iters", s.iterations)
            .param("burnin", s.burn_in)
            .param("thin", s.thinning)
            .param("seed", s.master_seed)
            .param("workers", s.parallel_workers)
            .param("holdout", self.holdout)
            .param("record_counts", s.record_counts)
            .param("mh_step", s.mh_step)
            .param("initial_hyperparams", s.initial_hyperparams);
    }

    /// Held-out split keyed by the run seed.
    pub fn split(&self, g: &ObservedGraph, seed: u64) -> CliResult<(ObservedGraph, HeldoutSet)> {
        if self.holdout == 0.0 {
            return Ok((g.clone(), HeldoutSet::empty()));
        }
        Ok(split_holdout(g, self.holdout, &mut stream(seed, Phase::Split, 0, 0))?)
    }
}

/// What a finished fit reports.
pub struct FitSummary {
    pub auc: Option<f64>,
    pub mean_blocks: Vec<f64>,
    pub timings: Timings,
}

/// Runs one chain, streaming the trace to `dir/trace.jsonl` and writing the
/// prediction table when anything was held out.
pub fn fit_to_dir(
    train: &ObservedGraph,
    heldout: &HeldoutSet,
    subnetworks: usize,
    sweep: &SweepConfig,
    dir: &Path,
) -> CliResult<FitSummary> {
    io_at(dir, fs::create_dir_all(dir))?;
    let trace_path = dir.join(TRACE_FILE);
    let mut sink = BufWriter::new(io_at(&trace_path, fs::File::create(&trace_path))?);
    let mut header = mnsbm::ensemble::trace_header(train, heldout, subnetworks, sweep);
    header.manifest = Some(MANIFEST_FILE.to_string());
    write_header(&header, &mut sink)?;

    let started = Instant::now();
    let mut records = Vec::new();
    let mut failure = None;
    let outcome = run_chain_with(train, heldout, subnetworks, sweep, |rec| {
        if let Err(e) = write_record(rec, &mut sink) {
            failure = Some(e);
            return ControlFlow::Break(());
        }
        // latent counts are only needed on disk
        let mut light = rec.clone();
        light.edge_counts = None;
        light.heldout_counts = None;
        records.push(light);
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    io_at(&trace_path, sink.flush())?;
    let timings = Timings::from_phases(&outcome.timings, started.elapsed());

    let mut mean_blocks = vec![0.0; subnetworks];
    for r in &records {
        for (acc, &l) in mean_blocks.iter_mut().zip(&r.blocks) {
            *acc += l as f64;
        }
    }
    mean_blocks.iter_mut().for_each(|x| *x /= records.len().max(1) as f64);

    let trace = ChainTrace { header, records };
    let auc = if heldout.is_empty() || trace.records.is_empty() {
        None
    } else {
        let table = predict_link_prob(&trace)?;
        let path = dir.join(PREDICTION_FILE);
        table.write_csv(BufWriter::new(io_at(&path, fs::File::create(&path))?))?;
        Some(table.auc()?)
    };
    Ok(FitSummary {
        auc,
        mean_blocks,
        timings,
    })
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Edge list: `i j [weight]` per line, `#`/`%` comments.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of latent subnetworks S.
    #[arg(long)]
    pub subnetworks: Option<usize>,
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Vertex indices in the input start at 1.
    #[arg(long)]
    pub one_based: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: FitArgs) -> CliResult<()> {
    let keys: Vec<&str> = ["input", "subnetworks", "one-based", "out-dir"]
        .into_iter()
        .chain(CHAIN_KEYS.iter().copied())
        .collect();
    let cfg = Overrides::load(args.config.as_deref(), &keys)?;
    let input: PathBuf = cfg
        .pick_opt(args.input, "input")?
        .ok_or_else(|| Failure::usage("--input is required"))?;
    let out_dir: PathBuf = cfg
        .pick_opt(args.out_dir, "out-dir")?
        .ok_or_else(|| Failure::usage("--out-dir is required"))?;
    let subnetworks = cfg.pick(args.subnetworks, "subnetworks", 1)?;
    if subnetworks == 0 {
        return Err(Failure::usage("--subnetworks must be positive"));
    }
    let one_based = cfg.flag(args.one_based, "one-based")?;
    let settings = args.chain.resolve(&cfg)?;

    let file = io_at(&input, fs::File::open(&input))?;
    let opts = ParseOptions {
        one_based,
        ..Default::default()
    };
    let g = parse_edge_list(BufReader::new(file), opts)
        .map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
    let (train, heldout) = settings.split(&g, settings.sweep.master_seed)?;

    let summary = fit_to_dir(&train, &heldout, subnetworks, &settings.sweep, &out_dir)?;

    let mut m = RunManifest::new("fit");
    m.param("subnetworks", subnetworks)
        .param("one_based", one_based)
        .param("n", g.n())
        .param("edges", g.edge_count())
        .param("out_dir", out_dir.display().to_string());
    settings.record(&mut m);
    m.inputs.push(input.display().to_string());
    m.outputs.push(TRACE_FILE.into());
    if summary.auc.is_some() {
        m.outputs.push(PREDICTION_FILE.into());
    }
    m.timings = Some(summary.timings);
    m.write(&out_dir.join(MANIFEST_FILE))?;

    match summary.auc {
        Some(auc) => println!("link AUC: {auc:.4}"),
        None => println!("link AUC: n/a (nothing held out)"),
    }
    let l: Vec<String> = summary.mean_blocks.iter().map(|x| format!("{x:.2}")).collect();
    println!("mean blocks per subnetwork: {}", l.join(" "));
    Ok(())
}
