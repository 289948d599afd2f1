//! `experiment`: the (K, λ, restart, Ŝ) grid of planted two-subnetwork fits.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use mnsbm::rng::{stream, Phase};
use mnsbm::synth::{ExperimentManifest, GridRun};
use mnsbm::{experiment_grid, generate, planted_params, GroundTruth, HeldoutSet, ObservedGraph, SweepConfig};
use serde::{Deserialize, Serialize};

use crate::config::{parse_list, Overrides};
use crate::error::{io_at, CliResult, Failure};
use crate::fit::{fit_to_dir, ChainArgs, CHAIN_KEYS, MANIFEST_FILE, TRACE_FILE};
use crate::generate::write_instance;
use crate::manifest::RunManifest;

pub const GRID_FILE: &str = "grid.json";

/// What `experiment` leaves in its output directory besides the runs.
#[derive(Debug, Serialize, Deserialize)]
pub struct GridFile {
    pub holdout: f64,
    pub manifest: ExperimentManifest,
}

impl GridFile {
    pub fn data_dir(&self, run: &GridRun) -> PathBuf {
        PathBuf::from("data").join(format!("{:016x}", run.data_seed))
    }

    pub fn run_dir(index: usize) -> PathBuf {
        PathBuf::from("runs").join(format!("{index:04}"))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        io_at(path, fs::write(path, s))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let s = io_at(path, fs::read_to_string(path))?;
        serde_json::from_str(&s).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

/// Planted graph, its truth, and the training/held-out split of one run.
fn realise(run: &GridRun, holdout: f64) -> CliResult<(ObservedGraph, GroundTruth, ObservedGraph, HeldoutSet)> {
    if holdout == 0.0 {
        let model = planted_params(run.n, run.k, run.shift)?;
        let (g, truth) = generate(&model, &mut stream(run.data_seed, Phase::Generate, 0, 0));
        return Ok((g.clone(), truth, g, HeldoutSet::empty()));
    }
    let d = run.realise(holdout)?;
    Ok((d.graph, d.truth, d.train, d.heldout))
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// Comma-separated block counts K (N = 20K).
    #[arg(long)]
    pub k: Option<String>,
    /// Comma-separated overlaps λ.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Independent data sets per (K, λ).
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Comma-separated subnetwork counts Ŝ fitted to each data set.
    #[arg(long)]
    pub subnetworks: Option<String>,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn list<T: std::str::FromStr>(cfg: &Overrides, flag: Option<String>, key: &str, default: &str) -> CliResult<Vec<T>> {
    let s = cfg.pick(flag, key, default.to_string())?;
    parse_list(&s).map_err(|e| Failure::usage(format!("--{key}: {e}")))
}

pub fn run(args: ExperimentArgs) -> CliResult<()> {
    let keys: Vec<&str> = ["k", "lambda", "restarts", "subnetworks", "out-dir"]
        .into_iter()
        .chain(CHAIN_KEYS.iter().copied())
        .collect();
    let cfg = Overrides::load(args.config.as_deref(), &keys)?;
    let k_list: Vec<usize> = list(&cfg, args.k, "k", "3")?;
    let overlaps: Vec<f64> = list(&cfg, args.lambda, "lambda", "0,0.3,0.6,1")?;
    let s_list: Vec<usize> = list(&cfg, args.subnetworks, "subnetworks", "1,2,3")?;
    let restarts = cfg.pick(args.restarts, "restarts", 5)?;
    let out_dir: PathBuf = cfg
        .pick_opt(args.out_dir, "out-dir")?
        .ok_or_else(|| Failure::usage("--out-dir is required"))?;
    let settings = args.chain.resolve(&cfg)?;

    let grid = GridFile {
        holdout: settings.holdout,
        manifest: experiment_grid(&k_list, &overlaps, restarts, &s_list, settings.sweep.master_seed, &settings.sweep)?,
    };
    io_at(&out_dir, fs::create_dir_all(&out_dir))?;
    grid.write(&out_dir.join(GRID_FILE))?;

    let mut written = BTreeSet::new();
    let total = grid.manifest.runs.len();
    for (index, run) in grid.manifest.runs.iter().enumerate() {
        let (graph, truth, train, heldout) = realise(run, grid.holdout)?;
        let data_dir = out_dir.join(grid.data_dir(run));
        if written.insert(run.data_seed) {
            write_instance(&data_dir, &graph, &truth)?;
        }
        let sweep = SweepConfig {
            master_seed: run.chain_seed,
            ..settings.sweep.clone()
        };
        let run_dir = out_dir.join(GridFile::run_dir(index));
        let summary = fit_to_dir(&train, &heldout, run.subnetworks, &sweep, &run_dir)?;

        let mut m = RunManifest::new("experiment");
        m.param("k", run.k)
            .param("n", run.n)
            .param("lambda", run.overlap)
            .param("shift", run.shift)
            .param("restart", run.restart)
            .param("subnetworks", run.subnetworks)
            .param("data_seed", run.data_seed)
            .param("chain_seed", run.chain_seed)
            .param("holdout", grid.holdout);
        m.inputs.push(format!("../../{}", grid.data_dir(run).display()));
        m.outputs.push(TRACE_FILE.into());
        m.timings = Some(summary.timings);
        m.write(&run_dir.join(MANIFEST_FILE))?;

        let auc = summary.auc.map_or("n/a".to_string(), |a| format!("{a:.4}"));
        println!(
            "[{}/{total}] K={} lambda={} restart={} S={}: link AUC {auc}",
            index + 1,
            run.k,
            run.overlap,
            run.restart,
            run.subnetworks
        );
    }
    Ok(())
}
