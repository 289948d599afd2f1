//! `evaluate` and `similarity`: summaries computed from saved traces.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use mnsbm::{predict_link_prob, same_block_vectors, structure_auc, ChainTrace, GroundTruth};

use crate::error::{io_at, CliResult, Failure};
use crate::experiment::{GridFile, GRID_FILE};
use crate::manifest::RunManifest;

pub fn read_trace(path: &Path) -> CliResult<ChainTrace> {
    let f = io_at(path, fs::File::open(path))?;
    ChainTrace::read_from(BufReader::new(f)).map_err(|e| match e {
        mnsbm::Error::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

fn open_output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io_at(p, fs::File::create(p))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Mean and standard deviation of the mean (`sd / √n`, with the `n − 1`
/// sample deviation; 0 for a single value).
pub fn mean_sdm(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn mean_blocks(t: &ChainTrace) -> f64 {
    if t.records.is_empty() {
        return f64::NAN;
    }
    t.records.iter().map(|r| r.mean_blocks()).sum::<f64>() / t.records.len() as f64
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Trace files; restarts of the same configuration are averaged per S.
    #[arg(required = true)]
    pub traces: Vec<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn evaluate(args: EvaluateArgs) -> CliResult<()> {
    let mut groups: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut reference: Option<(PathBuf, usize, u64, u64, u64)> = None;
    for path in &args.traces {
        let t = read_trace(path)?;
        let shape = (t.header.n, t.header.iterations, t.header.burn_in, t.header.thinning);
        match &reference {
            None => reference = Some((path.clone(), shape.0, shape.1, shape.2, shape.3)),
            Some((first, n, it, b, th)) => {
                if (*n, *it, *b, *th) != shape {
                    return Err(Failure::usage(format!(
                        "{} (n={}, T={}, burn-in={}, thin={}) is incompatible with {} (n={n}, T={it}, burn-in={b}, thin={th})",
                        path.display(),
                        shape.0,
                        shape.1,
                        shape.2,
                        shape.3,
                        first.display()
                    )));
                }
            }
        }
        let auc = predict_link_prob(&t)
            .and_then(|p| p.auc())
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let g = groups.entry(t.header.subnetworks).or_default();
        g.0.push(auc);
        g.1.push(mean_blocks(&t));
    }
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "S,mean_auc,sdm,mean_L")?;
    for (s, (aucs, ls)) in &groups {
        let (mean, sdm) = mean_sdm(aucs);
        let l = ls.iter().sum::<f64>() / ls.len() as f64;
        writeln!(out, "{s},{mean},{sdm},{l}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct SimilarityArgs {
    /// Directory written by `generate` (assignment_<s>.txt, counts_<s>.txt).
    #[arg(long, conflicts_with = "grid", requires = "traces")]
    pub truth: Option<PathBuf>,
    /// Traces fitted to the `--truth` graph.
    pub traces: Vec<PathBuf>,
    /// Output directory of `experiment`; one row per run.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Use samples from the last `window` sweeps.
    #[arg(long, default_value_t = 500)]
    pub window: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_truth(dir: &Path) -> CliResult<GroundTruth> {
    if !dir.join("assignment_1.txt").is_file() {
        return Err(Failure::usage(format!("no ground truth (assignment_1.txt) in {}", dir.display())));
    }
    Ok(GroundTruth::read_dir(dir)?)
}

fn similarity_of(truth: &GroundTruth, trace: &ChainTrace, window: u64, label: &Path) -> CliResult<f64> {
    same_block_vectors(truth, trace, Some(window))
        .and_then(|v| structure_auc(&v))
        .map_err(|e| Failure::usage(format!("{}: {e}", label.display())))
}

pub fn similarity(args: SimilarityArgs) -> CliResult<()> {
    let mut rows = Vec::new();
    if let Some(dir) = &args.grid {
        let grid = GridFile::read(&dir.join(GRID_FILE))?;
        for (k, run) in grid.manifest.runs.iter().enumerate() {
            let truth = load_truth(&dir.join(grid.data_dir(run)))?;
            let trace_path = dir.join(GridFile::run_dir(k)).join(crate::fit::TRACE_FILE);
            let trace = read_trace(&trace_path)?;
            let auc = similarity_of(&truth, &trace, args.window, &trace_path)?;
            rows.push((run.k.to_string(), run.overlap.to_string(), run.subnetworks, auc));
        }
    } else {
        let dir = args
            .truth
            .as_ref()
            .ok_or_else(|| Failure::usage("give --truth DIR with trace files, or --grid DIR"))?;
        let truth = load_truth(dir)?;
        // K and λ from the generator's manifest when present
        let (k, lambda) = match RunManifest::read(&dir.join(crate::generate::MANIFEST_FILE)) {
            Ok(m) => (
                m.parameters.get("k").map_or(String::new(), |v| v.to_string()),
                m.parameters.get("lambda").map_or(String::new(), |v| v.to_string()),
            ),
            Err(_) => {
                let k = truth.assignments[0].iter().max().map_or(0, |&b| b + 1);
                (k.to_string(), String::new())
            }
        };
        for path in &args.traces {
            let trace = read_trace(path)?;
            let auc = similarity_of(&truth, &trace, args.window, path)?;
            rows.push((k.clone(), lambda.clone(), trace.header.subnetworks, auc));
        }
    }
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "K,lambda,S,structure_auc")?;
    for (k, lambda, s, auc) in rows {
        writeln!(out, "{k},{lambda},{s},{auc}")?;
    }
    out.flush()?;
    Ok(())
}
