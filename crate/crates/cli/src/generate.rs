use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::Args;
use mnsbm::rng::{stream, Phase};
use mnsbm::synth::shift_for_overlap;
use mnsbm::{generate, planted_params, write_graph, GroundTruth, ObservedGraph};

use crate::config::Overrides;
use crate::error::{io_at, CliResult, Failure};
use crate::manifest::RunManifest;

pub const EDGE_FILE: &str = "edges.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Number of vertices N (a multiple of K).
    #[arg(long)]
    pub n: Option<usize>,
    /// Blocks per planted subnetwork.
    #[arg(long)]
    pub k: Option<usize>,
    /// Circular shift m of the second subnetwork's blocks.
    #[arg(long, conflicts_with = "lambda")]
    pub shift: Option<usize>,
    /// Normalised overlap 2Km/N; must give an integer shift.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &["n", "k", "shift", "lambda", "seed", "out-dir"];

/// Writes the edge list, ground truth and manifest of one planted instance.
pub fn write_instance(dir: &Path, g: &ObservedGraph, truth: &GroundTruth) -> CliResult<()> {
    io_at(dir, fs::create_dir_all(dir))?;
    let edges = dir.join(EDGE_FILE);
    write_graph(g, BufWriter::new(io_at(&edges, fs::File::create(&edges))?))?;
    truth.write_dir(dir)?;
    Ok(())
}

pub fn run(args: GenerateArgs) -> CliResult<()> {
    let cfg = Overrides::load(args.config.as_deref(), KEYS)?;
    let n = cfg
        .pick_opt(args.n, "n")?
        .ok_or_else(|| Failure::usage("--n is required"))?;
    let k = cfg
        .pick_opt(args.k, "k")?
        .ok_or_else(|| Failure::usage("--k is required"))?;
    let out_dir: PathBuf = cfg
        .pick_opt(args.out_dir, "out-dir")?
        .ok_or_else(|| Failure::usage("--out-dir is required"))?;
    let seed = cfg.seed(args.seed)?;
    // a flag for either form overrides the file's value for both
    let (shift, lambda) = match (args.shift, args.lambda) {
        (Some(m), None) => (Some(m), None),
        (None, Some(l)) => (None, Some(l)),
        _ => (cfg.pick_opt(None, "shift")?, cfg.pick_opt(None, "lambda")?),
    };
    let shift = match (shift, lambda) {
        (Some(_), Some(_)) => return Err(Failure::usage("give either --shift or --lambda, not both")),
        (Some(m), None) => m,
        (None, Some(l)) => {
            if k == 0 {
                return Err(Failure::usage("--k must be positive"));
            }
            shift_for_overlap(n, k, l)?
        }
        (None, None) => return Err(Failure::usage("one of --shift or --lambda is required")),
    };
    let pm = planted_params(n, k, shift)?;
    let (g, truth) = generate(&pm, &mut stream(seed, Phase::Generate, 0, 0));
    write_instance(&out_dir, &g, &truth)?;

    let mut m = RunManifest::new("generate");
    m.param("n", n)
        .param("k", k)
        .param("shift", shift)
        .param("lambda", pm.overlap)
        .param("seed", seed)
        .param("diagonal_rates", pm.diagonal)
        .param("off_diagonal_rate", pm.off_diagonal)
        .param("out_dir", out_dir.display().to_string());
    m.outputs.push(EDGE_FILE.into());
    for s in 1..=truth.assignments.len() {
        m.outputs.push(format!("assignment_{s}.txt"));
        m.outputs.push(format!("counts_{s}.txt"));
    }
    m.write(&out_dir.join(MANIFEST_FILE))?;
    println!(
        "N = {n}, K = {k}, m = {shift} (lambda = {}): {} edges written to {}",
        pm.overlap,
        g.edge_count(),
        out_dir.display()
    );
    Ok(())
}
