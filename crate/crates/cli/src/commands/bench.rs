//! `bench`: run the optimizer variants over a benchmark function and write
//! traces.csv, stats.csv and ranksum.csv.

use std::path::Path;

use stegwolf_core::benchfns::{benchmark_spec, rank_sum_test, run_trials, BenchFunction, TrialStats};
use stegwolf_core::gwo::{OptimizerConfig, Variant};
use stegwolf_core::levy::LevyParams;

use crate::config::{write_atomic, KeyValues};
use crate::csvout::{f64_17, Csv};
use crate::{CliError, CliResult};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("function", "F1"),
    ("variants", "classic,levy"),
    ("seeds", "10"),
    ("seed", "1"),
    ("dimension", "30"),
    ("pack_size", "30"),
    ("iterations", "500"),
    ("levy_mu", "0"),
    ("levy_gamma", "0.5"),
    ("a_max", "3"),
];

struct BenchConfig {
    function: BenchFunction,
    variants: Vec<Variant>,
    n_seeds: usize,
    seed: u64,
    dimension: usize,
    pack_size: usize,
    iterations: usize,
    levy: LevyParams,
    a_max: f64,
}

fn typed(kv: &KeyValues) -> CliResult<BenchConfig> {
    let variants: Vec<Variant> = kv.parse_list("variants")?;
    if variants.is_empty() {
        return Err(CliError::Config("at least one variant is required".into()));
    }
    for (i, v) in variants.iter().enumerate() {
        if variants[..i].contains(v) {
            return Err(CliError::Config(format!("variant '{}' listed twice", v.name())));
        }
    }
    let n_seeds: usize = kv.parse("seeds")?;
    if n_seeds < 2 {
        return Err(CliError::Config("seeds must be at least 2".into()));
    }
    Ok(BenchConfig {
        function: kv.parse("function")?,
        variants,
        n_seeds,
        seed: kv.parse("seed")?,
        dimension: kv.parse("dimension")?,
        pack_size: kv.parse("pack_size")?,
        iterations: kv.parse("iterations")?,
        levy: LevyParams::new(kv.parse("levy_mu")?, kv.parse("levy_gamma")?)
            .map_err(|e| CliError::Config(e.to_string()))?,
        a_max: kv.parse("a_max")?,
    })
}

pub fn run(kv: &KeyValues, out_dir: &Path) -> CliResult<()> {
    let cfg = typed(kv)?;
    let spec = benchmark_spec(cfg.function, cfg.dimension)?;
    // paired trials: the same derived seed list is shared by every variant
    let seeds: Vec<u64> = (0..cfg.n_seeds as u64).map(|i| cfg.seed.wrapping_add(i)).collect();

    let mut results: Vec<(Variant, TrialStats, Vec<Vec<f64>>)> = Vec::new();
    for &variant in &cfg.variants {
        let mut optimizer =
            OptimizerConfig::new(variant, cfg.pack_size, cfg.iterations, spec.bounds.clone(), 0)
                .map_err(|e| CliError::Config(e.to_string()))?;
        optimizer.levy = cfg.levy;
        optimizer.a_max = cfg.a_max;
        optimizer.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let (stats, traces) = run_trials(&spec, &optimizer, &seeds)?;
        results.push((variant, stats, traces));
    }

    let mut traces_csv = Csv::new(&["variant", "seed", "iteration", "best_fitness"]);
    for (variant, _, traces) in &results {
        for (i, trace) in traces.iter().enumerate() {
            for (t, best) in trace.iter().enumerate() {
                traces_csv.row(&[
                    variant.name().to_string(),
                    seeds[i].to_string(),
                    t.to_string(),
                    f64_17(*best),
                ]);
            }
        }
    }
    write_atomic(&out_dir.join("traces.csv"), &traces_csv.into_bytes())?;

    let mut stats_csv = Csv::new(&["variant", "mean", "median", "q1", "q3", "min", "max"]);
    for (variant, stats, _) in &results {
        stats_csv.row(&[
            variant.name().to_string(),
            f64_17(stats.mean),
            f64_17(stats.median),
            f64_17(stats.quartiles.0),
            f64_17(stats.quartiles.1),
            f64_17(stats.min),
            f64_17(stats.max),
        ]);
    }
    write_atomic(&out_dir.join("stats.csv"), &stats_csv.into_bytes())?;

    let mut ranksum_csv = Csv::new(&["variant_a", "variant_b", "u", "p"]);
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            let outcome =
                rank_sum_test(&results[i].1.per_seed_finals, &results[j].1.per_seed_finals)?;
            ranksum_csv.row(&[
                results[i].0.name().to_string(),
                results[j].0.name().to_string(),
                f64_17(outcome.u_statistic),
                f64_17(outcome.p_one_sided),
            ]);
        }
    }
    write_atomic(&out_dir.join("ranksum.csv"), &ranksum_csv.into_bytes())?;
    write_atomic(&out_dir.join("resolved.cfg"), kv.snapshot().as_bytes())?;
    Ok(())
}
