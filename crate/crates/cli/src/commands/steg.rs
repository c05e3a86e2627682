//! `steg`: end-to-end detection runs over a corpus manifest.
//!
//! Features are extracted once per image; each payload then forms its own
//! cover-vs-stego dataset using the manifest's train/test split. Per repeat,
//! an optional wrapper feature selection runs on the training split before
//! the classifier is trained and evaluated.

use std::fs;
use std::path::Path;

use stegwolf_core::binsel::{select_features, SelectionConfig, SelectionMask};
use stegwolf_core::classify::{evaluate, train, TrainConfig};
use stegwolf_core::colorspace::ENSEMBLE;
use stegwolf_core::exec;
use stegwolf_core::featpipe::{aggregate, extract, AggregationConfig, AggregationMode, FeatureVector};
use stegwolf_core::gwo::{Bounds, OptimizerConfig, Variant};
use stegwolf_core::levy::LevyParams;
use stegwolf_core::rng::{derive_seed, purpose};
use stegwolf_core::stegosim::{read_ppm, CorpusManifest, Split};

use crate::config::{write_atomic, KeyValues};
use crate::csvout::{f64_17, Csv};
use crate::{CliError, CliResult};

pub const DEFAULTS: &[(&str, &str)] = &[
    ("manifest", ""),
    ("aggregation", "concat"),
    ("weights", "uniform"),
    ("selection", "off"),
    ("repeats", "10"),
    ("seed", "1"),
    ("classifier_lr", "0.05"),
    ("classifier_epochs", "500"),
    ("classifier_l2", "1e-4"),
    ("sel_pack_size", "10"),
    ("sel_iterations", "12"),
    ("sel_folds", "3"),
    ("sel_error_weight", "0.99"),
    ("sel_epochs", "150"),
    ("sel_gamma", "0.5"),
    ("sel_a_max", "3"),
    ("dump_features", "off"),
];

/// One results.csv row.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub repeat: usize,
    pub payload: f64,
    pub selection: bool,
    pub n_features_selected: usize,
    pub accuracy: f64,
    pub tpr: f64,
    pub tnr: f64,
}

/// One summary.csv row: means over repeats for one payload.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub payload: f64,
    pub selection: bool,
    pub mean_n_features_selected: f64,
    pub mean_accuracy: f64,
    pub mean_tpr: f64,
    pub mean_tnr: f64,
}

struct StegConfig {
    aggregation: AggregationConfig,
    selection: bool,
    repeats: usize,
    seed: u64,
    classifier: TrainConfig,
    sel_pack_size: usize,
    sel_iterations: usize,
    sel_folds: usize,
    sel_error_weight: f64,
    sel_epochs: usize,
    sel_gamma: f64,
    sel_a_max: f64,
    dump_features: bool,
}

fn typed(kv: &KeyValues) -> CliResult<StegConfig> {
    let mode: AggregationMode = kv.parse("aggregation")?;
    let aggregation = match kv.raw("weights") {
        "uniform" => AggregationConfig::uniform(mode, ENSEMBLE.len()),
        _ => AggregationConfig { mode, weights: kv.parse_list("weights")? },
    };
    aggregation.validate(ENSEMBLE.len()).map_err(|e| CliError::Config(e.to_string()))?;
    let repeats: usize = kv.parse("repeats")?;
    if repeats < 1 {
        return Err(CliError::Config("repeats must be at least 1".into()));
    }
    Ok(StegConfig {
        aggregation,
        selection: kv.parse_switch("selection")?,
        repeats,
        seed: kv.parse("seed")?,
        classifier: TrainConfig {
            learning_rate: kv.parse("classifier_lr")?,
            epochs: kv.parse("classifier_epochs")?,
            l2: kv.parse("classifier_l2")?,
        },
        sel_pack_size: kv.parse("sel_pack_size")?,
        sel_iterations: kv.parse("sel_iterations")?,
        sel_folds: kv.parse("sel_folds")?,
        sel_error_weight: kv.parse("sel_error_weight")?,
        sel_epochs: kv.parse("sel_epochs")?,
        sel_gamma: kv.parse("sel_gamma")?,
        sel_a_max: kv.parse("sel_a_max")?,
        dump_features: kv.parse_switch("dump_features")?,
    })
}

fn runtime(msg: String) -> CliError {
    CliError::Runtime(msg)
}

pub fn run(kv: &KeyValues, out_dir: &Path) -> CliResult<(Vec<ResultRow>, Vec<SummaryRow>)> {
    let cfg = typed(kv)?;
    let manifest_path = kv.raw("manifest");
    if manifest_path.is_empty() {
        return Err(CliError::Config("'manifest' must point at a corpus manifest".into()));
    }
    let manifest_path = Path::new(manifest_path);
    let manifest_text = fs::read_to_string(manifest_path)
        .map_err(|e| runtime(format!("cannot read manifest {}: {e}", manifest_path.display())))?;
    let manifest = CorpusManifest::from_csv(&manifest_text)?;
    if manifest.entries.is_empty() {
        return Err(runtime("manifest has no entries".into()));
    }
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    // one extraction per image, shared by every payload and repeat
    let features: Vec<FeatureVector> = exec::par_try_map(manifest.entries.len(), |i| {
        let entry = &manifest.entries[i];
        let path = base.join(entry.image_path());
        let bytes = fs::read(&path)
            .map_err(|e| runtime(format!("manifest entry {}: cannot read {}: {e}", i + 1, path.display())))?;
        let image = read_ppm(&bytes)
            .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        let per_space = extract(&image, &ENSEMBLE)?;
        Ok::<_, CliError>(aggregate(&per_space, &cfg.aggregation)?)
    })?;
    let width = features[0].values.len();

    if cfg.dump_features {
        let mut header = vec!["image".to_string(), "label".to_string(), "split".to_string()];
        header.extend(features[0].column_names());
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut csv = Csv::new(&header_refs);
        for (entry, fv) in manifest.entries.iter().zip(&features) {
            let mut row = vec![
                entry.image_path().to_string(),
                if entry.is_cover() { "cover" } else { "stego" }.to_string(),
                entry.split.name().to_string(),
            ];
            row.extend(fv.values.iter().map(|&v| f64_17(v)));
            csv.row(&row);
        }
        write_atomic(&out_dir.join("features.csv"), &csv.into_bytes())?;
    }

    let payloads = manifest.payloads();
    if payloads.is_empty() {
        return Err(runtime("manifest contains no stego entries".into()));
    }

    let mut rows: Vec<ResultRow> = Vec::new();
    for (payload_index, &payload) in payloads.iter().enumerate() {
        // dataset: all covers plus the stegos of this payload
        let mut train_x: Vec<Vec<f64>> = Vec::new();
        let mut train_y: Vec<bool> = Vec::new();
        let mut test_x: Vec<Vec<f64>> = Vec::new();
        let mut test_y: Vec<bool> = Vec::new();
        for (entry, fv) in manifest.entries.iter().zip(&features) {
            let include = entry.is_cover() || entry.bpc == payload;
            if !include {
                continue;
            }
            match entry.split {
                Split::Train => {
                    train_x.push(fv.values.clone());
                    train_y.push(!entry.is_cover());
                }
                Split::Test => {
                    test_x.push(fv.values.clone());
                    test_y.push(!entry.is_cover());
                }
            }
        }
        if train_x.is_empty() || test_x.is_empty() {
            return Err(runtime(format!("payload {payload}: empty train or test split")));
        }

        let repeat_rows = exec::par_try_map(cfg.repeats, |r| {
            let repeat = r + 1;
            let (selected_train, selected_test, n_selected) = if cfg.selection {
                let sel_seed =
                    derive_seed(&[cfg.seed, purpose::SELECTION, payload_index as u64, repeat as u64]);
                let mut optimizer = OptimizerConfig::new(
                    Variant::Levy,
                    cfg.sel_pack_size,
                    cfg.sel_iterations,
                    Bounds::symmetric(width, 0.0, 1.0)?,
                    sel_seed,
                )?;
                optimizer.levy = LevyParams::new(0.0, cfg.sel_gamma)?;
                optimizer.a_max = cfg.sel_a_max;
                let mut sel_cfg = SelectionConfig::new(optimizer);
                sel_cfg.error_weight = cfg.sel_error_weight;
                sel_cfg.folds = cfg.sel_folds;
                sel_cfg.classifier = TrainConfig { epochs: cfg.sel_epochs, ..cfg.classifier };
                let (mask, _) = select_features(&train_x, &train_y, &sel_cfg)?;
                let n = mask.popcount();
                (mask.apply(&train_x), mask.apply(&test_x), n)
            } else {
                let mask = SelectionMask::all_ones(width);
                (mask.apply(&train_x), mask.apply(&test_x), width)
            };

            let clf_seed =
                derive_seed(&[cfg.seed, purpose::CLASSIFIER, payload_index as u64, repeat as u64]);
            let model = train(&selected_train, &train_y, &cfg.classifier, clf_seed)?;
            let report = evaluate(&model, &selected_test, &test_y)?;
            Ok::<_, CliError>(ResultRow {
                repeat,
                payload,
                selection: cfg.selection,
                n_features_selected: n_selected,
                accuracy: report.accuracy,
                tpr: report.true_positive_rate,
                tnr: report.true_negative_rate,
            })
        })?;
        rows.extend(repeat_rows);
    }

    let mut results_csv = Csv::new(&[
        "repeat",
        "payload",
        "selection",
        "n_features_selected",
        "accuracy",
        "tpr",
        "tnr",
    ]);
    for row in &rows {
        results_csv.row(&[
            row.repeat.to_string(),
            f64_17(row.payload),
            if row.selection { "on" } else { "off" }.to_string(),
            row.n_features_selected.to_string(),
            f64_17(row.accuracy),
            f64_17(row.tpr),
            f64_17(row.tnr),
        ]);
    }
    write_atomic(&out_dir.join("results.csv"), &results_csv.into_bytes())?;

    let mut summaries: Vec<SummaryRow> = Vec::new();
    for &payload in &payloads {
        let group: Vec<&ResultRow> = rows.iter().filter(|r| r.payload == payload).collect();
        let n = group.len() as f64;
        summaries.push(SummaryRow {
            payload,
            selection: cfg.selection,
            mean_n_features_selected: group.iter().map(|r| r.n_features_selected as f64).sum::<f64>() / n,
            mean_accuracy: group.iter().map(|r| r.accuracy).sum::<f64>() / n,
            mean_tpr: group.iter().map(|r| r.tpr).sum::<f64>() / n,
            mean_tnr: group.iter().map(|r| r.tnr).sum::<f64>() / n,
        });
    }
    let mut summary_csv = Csv::new(&[
        "payload",
        "selection",
        "mean_n_features_selected",
        "mean_accuracy",
        "mean_tpr",
        "mean_tnr",
    ]);
    for s in &summaries {
        summary_csv.row(&[
            f64_17(s.payload),
            if s.selection { "on" } else { "off" }.to_string(),
            f64_17(s.mean_n_features_selected),
            f64_17(s.mean_accuracy),
            f64_17(s.mean_tpr),
            f64_17(s.mean_tnr),
        ]);
    }
    write_atomic(&out_dir.join("summary.csv"), &summary_csv.into_bytes())?;
    write_atomic(&out_dir.join("resolved.cfg"), kv.snapshot().as_bytes())?;
    Ok((rows, summaries))
}
