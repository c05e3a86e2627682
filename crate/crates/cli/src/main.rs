use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stegwolf_cli::commands::{bench, corpus, steg};
use stegwolf_cli::config::KeyValues;
use stegwolf_cli::CliResult;

/// Steganalysis experiment driver.
#[derive(Parser)]
#[command(name = "stegwolf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key=value config file overlaid on the defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for reports and the resolved-config snapshot
    #[arg(long)]
    out: PathBuf,
    /// Master seed; every random stream derives from it
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compare optimizer variants on a benchmark function
    Bench {
        #[command(flatten)]
        common: Common,
        /// Benchmark function (F1 or F9)
        #[arg(long)]
        function: Option<String>,
        /// Comma-separated variants (classic, levy)
        #[arg(long)]
        variants: Option<String>,
        /// Number of seeded trials
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        dimension: Option<usize>,
        #[arg(long)]
        pack_size: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        levy_mu: Option<f64>,
        #[arg(long)]
        levy_gamma: Option<f64>,
        #[arg(long)]
        a_max: Option<f64>,
    },
    /// Generate a cover/stego PPM corpus with a manifest
    Corpus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_pairs: Option<usize>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        /// Comma-separated payloads in bits per channel pixel
        #[arg(long)]
        payloads: Option<String>,
    },
    /// Run the detection pipeline over a corpus manifest
    Steg {
        #[command(flatten)]
        common: Common,
        /// Path to manifest.csv
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Aggregation mode (concat or weighted_average)
        #[arg(long)]
        aggregation: Option<String>,
        /// Per-colorspace weights: 'uniform' or six comma-separated values
        #[arg(long)]
        weights: Option<String>,
        /// Wrapper feature selection (on or off)
        #[arg(long)]
        selection: Option<String>,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        classifier_lr: Option<f64>,
        #[arg(long)]
        classifier_epochs: Option<usize>,
        #[arg(long)]
        classifier_l2: Option<f64>,
        #[arg(long)]
        sel_pack_size: Option<usize>,
        #[arg(long)]
        sel_iterations: Option<usize>,
        #[arg(long)]
        sel_folds: Option<usize>,
        #[arg(long)]
        sel_error_weight: Option<f64>,
        #[arg(long)]
        sel_epochs: Option<usize>,
        #[arg(long)]
        sel_gamma: Option<f64>,
        #[arg(long)]
        sel_a_max: Option<f64>,
        /// Also write features.csv (on or off)
        #[arg(long)]
        dump_features: Option<String>,
    },
}

fn resolve(defaults: &[(&str, &str)], common: &Common) -> CliResult<KeyValues> {
    let mut kv = KeyValues::from_defaults(defaults);
    if let Some(path) = &common.config {
        kv.merge_file(path)?;
    }
    kv.override_with("seed", &common.seed);
    Ok(kv)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Bench {
            common,
            function,
            variants,
            seeds,
            dimension,
            pack_size,
            iterations,
            levy_mu,
            levy_gamma,
            a_max,
        } => {
            let mut kv = resolve(bench::DEFAULTS, &common)?;
            kv.override_with("function", &function);
            kv.override_with("variants", &variants);
            kv.override_with("seeds", &seeds);
            kv.override_with("dimension", &dimension);
            kv.override_with("pack_size", &pack_size);
            kv.override_with("iterations", &iterations);
            kv.override_with("levy_mu", &levy_mu);
            kv.override_with("levy_gamma", &levy_gamma);
            kv.override_with("a_max", &a_max);
            bench::run(&kv, &common.out)
        }
        Command::Corpus { common, n_pairs, width, height, payloads } => {
            let mut kv = resolve(corpus::DEFAULTS, &common)?;
            kv.override_with("n_pairs", &n_pairs);
            kv.override_with("width", &width);
            kv.override_with("height", &height);
            kv.override_with("payloads", &payloads);
            corpus::run(&kv, &common.out)
        }
        Command::Steg {
            common,
            manifest,
            aggregation,
            weights,
            selection,
            repeats,
            classifier_lr,
            classifier_epochs,
            classifier_l2,
            sel_pack_size,
            sel_iterations,
            sel_folds,
            sel_error_weight,
            sel_epochs,
            sel_gamma,
            sel_a_max,
            dump_features,
        } => {
            let mut kv = resolve(steg::DEFAULTS, &common)?;
            kv.override_with("manifest", &manifest.map(|p| p.display().to_string()));
            kv.override_with("aggregation", &aggregation);
            kv.override_with("weights", &weights);
            kv.override_with("selection", &selection);
            kv.override_with("repeats", &repeats);
            kv.override_with("classifier_lr", &classifier_lr);
            kv.override_with("classifier_epochs", &classifier_epochs);
            kv.override_with("classifier_l2", &classifier_l2);
            kv.override_with("sel_pack_size", &sel_pack_size);
            kv.override_with("sel_iterations", &sel_iterations);
            kv.override_with("sel_folds", &sel_folds);
            kv.override_with("sel_error_weight", &sel_error_weight);
            kv.override_with("sel_epochs", &sel_epochs);
            kv.override_with("sel_gamma", &sel_gamma);
            kv.override_with("sel_a_max", &sel_a_max);
            kv.override_with("dump_features", &dump_features);
            steg::run(&kv, &common.out).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stegwolf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
