mod config;
mod error;
mod experiment;
mod fit;
mod generate;
mod manifest;
mod report;

use clap::{Parser, Subcommand};

/// Multi-network stochastic blockmodel: generate, fit and score.
#[derive(Parser, Debug)]
#[command(name = "mnsbm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a planted two-subnetwork graph with ground truth.
    Generate(generate::GenerateArgs),
    /// Run the sampler on an edge list.
    Fit(fit::FitArgs),
    /// Link-prediction AUC per S from saved traces.
    Evaluate(report::EvaluateArgs),
    /// Structure AUC of traces against planted partitions.
    Similarity(report::SimilarityArgs),
    /// Fit the planted (K, λ, restart, S) grid.
    Experiment(experiment::ExperimentArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Fit(a) => fit::run(a),
        Command::Evaluate(a) => report::evaluate(a),
        Command::Similarity(a) => report::similarity(a),
        Command::Experiment(a) => experiment::run(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
