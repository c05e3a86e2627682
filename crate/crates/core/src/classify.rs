//! Two-class linear classifier: L2-regularized logistic regression trained
//! by full-batch gradient descent from zero initialization, on standardized
//! features. Constant columns carry no information and are dropped at fit
//! time. Training is deterministic; the seed parameter is kept on the
//! signature for interface stability but nothing draws from it.

use crate::error::{Error, Result};
use crate::fmt::f64_17;

/// Gradient descent hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 0.1, epochs: 500, l2: 1e-4 }
    }
}

/// Per-feature standardization fitted on training rows only. `kept` lists
/// the original column indices that survived the constant-column drop;
/// `stats` holds their (mean, population stddev) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub input_width: usize,
    pub kept: Vec<usize>,
    pub stats: Vec<(f64, f64)>,
}

impl Standardization {
    /// Project and standardize one full-width row.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_width {
            return Err(Error::DimensionMismatch { expected: self.input_width, got: row.len() });
        }
        Ok(self
            .kept
            .iter()
            .zip(&self.stats)
            .map(|(&col, &(mean, std))| (row[col] - mean) / std)
            .collect())
    }
}

/// Column means and population stddevs from training rows; constant columns
/// (stddev below 1e-12 relative) are flagged out.
pub fn standardize_fit(features: &[Vec<f64>]) -> Result<Standardization> {
    let n = features.len();
    if n < 2 {
        return Err(Error::InvalidParameter("standardization needs at least 2 rows".into()));
    }
    let width = features[0].len();
    for row in features {
        if row.len() != width {
            return Err(Error::DimensionMismatch { expected: width, got: row.len() });
        }
    }
    let mut kept = Vec::new();
    let mut stats = Vec::new();
    for col in 0..width {
        let mean = features.iter().map(|r| r[col]).sum::<f64>() / n as f64;
        let var = features.iter().map(|r| (r[col] - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std > 1e-12 * (1.0 + mean.abs()) {
            kept.push(col);
            stats.push((mean, std));
        }
    }
    Ok(Standardization { input_width: width, kept, stats })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardization: Standardization,
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + exp(z))` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn check_two_classes(labels: &[bool]) -> Result<()> {
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::SingleClassDataset);
    }
    Ok(())
}

/// Train and also return the per-epoch regularized loss trace.
pub fn train_traced(
    features: &[Vec<f64>],
    labels: &[bool],
    hyper: &TrainConfig,
    _seed: u64,
) -> Result<(LinearModel, Vec<f64>)> {
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: features.len(), got: labels.len() });
    }
    check_two_classes(labels)?;
    let standardization = standardize_fit(features)?;
    let rows: Vec<Vec<f64>> =
        features.iter().map(|r| standardization.apply(r)).collect::<Result<_>>()?;
    let n = rows.len();
    let d = standardization.kept.len();

    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    let mut losses = Vec::with_capacity(hyper.epochs);
    let inv_n = 1.0 / n as f64;

    for _ in 0..hyper.epochs {
        let mut grad_w = vec![0.0; d];
        let mut grad_b = 0.0;
        let mut loss = 0.0;
        for (row, &label) in rows.iter().zip(labels) {
            let y = f64::from(label);
            let z = row.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>() + bias;
            loss += softplus(z) - y * z;
            let err = sigmoid(z) - y;
            for (g, x) in grad_w.iter_mut().zip(row) {
                *g += err * x;
            }
            grad_b += err;
        }
        loss = loss * inv_n + 0.5 * hyper.l2 * weights.iter().map(|w| w * w).sum::<f64>();
        losses.push(loss);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= hyper.learning_rate * (g * inv_n + hyper.l2 * *w);
        }
        bias -= hyper.learning_rate * grad_b * inv_n;
    }

    Ok((LinearModel { weights, bias, standardization }, losses))
}

pub fn train(
    features: &[Vec<f64>],
    labels: &[bool],
    hyper: &TrainConfig,
    seed: u64,
) -> Result<LinearModel> {
    train_traced(features, labels, hyper, seed).map(|(model, _)| model)
}

/// Score one row: sigmoid of the standardized linear response. The label is
/// true when the score reaches 0.5.
pub fn predict(model: &LinearModel, row: &[f64]) -> Result<(bool, f64)> {
    let x = model.standardization.apply(row)?;
    let z = x.iter().zip(&model.weights).map(|(x, w)| x * w).sum::<f64>() + model.bias;
    let score = sigmoid(z);
    Ok((score >= 0.5, score))
}

/// Accuracy, class rates and the 2x2 confusion matrix
/// (`confusion[actual][predicted]`, positive class = true).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub true_positive_rate: f64,
    pub true_negative_rate: f64,
    pub confusion: [[usize; 2]; 2],
}

pub fn evaluate(model: &LinearModel, features: &[Vec<f64>], labels: &[bool]) -> Result<EvalReport> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::InvalidParameter("evaluation needs matching non-empty rows and labels".into()));
    }
    let mut confusion = [[0usize; 2]; 2];
    for (row, &label) in features.iter().zip(labels) {
        let (predicted, _) = predict(model, row)?;
        confusion[usize::from(label)][usize::from(predicted)] += 1;
    }
    let total = features.len();
    let positives = confusion[1][0] + confusion[1][1];
    let negatives = confusion[0][0] + confusion[0][1];
    let rate = |hit: usize, all: usize| if all == 0 { 0.0 } else { hit as f64 / all as f64 };
    Ok(EvalReport {
        accuracy: (confusion[0][0] + confusion[1][1]) as f64 / total as f64,
        true_positive_rate: rate(confusion[1][1], positives),
        true_negative_rate: rate(confusion[0][0], negatives),
        confusion,
    })
}

impl LinearModel {
    /// Plain-text serialization: header key=value lines, then one line per
    /// kept feature (`index mean stddev weight`), all floats round-trip
    /// exact at 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("format=linear-logistic-v1\n");
        out.push_str(&format!("input_width={}\n", self.standardization.input_width));
        out.push_str(&format!("n_features={}\n", self.weights.len()));
        out.push_str(&format!("bias={}\n", f64_17(self.bias)));
        for ((&col, &(mean, std)), &w) in self
            .standardization
            .kept
            .iter()
            .zip(&self.standardization.stats)
            .zip(&self.weights)
        {
            out.push_str(&format!("{col} {} {} {}\n", f64_17(mean), f64_17(std), f64_17(w)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut expect_kv = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::ModelParse(format!("missing '{key}' line")))?;
            line.strip_prefix(&format!("{key}="))
                .map(str::to_string)
                .ok_or_else(|| Error::ModelParse(format!("expected '{key}=', got '{line}'")))
        };
        let format = expect_kv("format")?;
        if format != "linear-logistic-v1" {
            return Err(Error::ModelParse(format!("unsupported format '{format}'")));
        }
        let input_width: usize = expect_kv("input_width")?
            .parse()
            .map_err(|_| Error::ModelParse("bad input_width".into()))?;
        let n_features: usize = expect_kv("n_features")?
            .parse()
            .map_err(|_| Error::ModelParse("bad n_features".into()))?;
        let bias: f64 =
            expect_kv("bias")?.parse().map_err(|_| Error::ModelParse("bad bias".into()))?;

        let mut kept = Vec::with_capacity(n_features);
        let mut stats = Vec::with_capacity(n_features);
        let mut weights = Vec::with_capacity(n_features);
        for line in lines.filter(|l| !l.is_empty()) {
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 4 {
                return Err(Error::ModelParse(format!("bad feature line '{line}'")));
            }
            kept.push(fields[0].parse().map_err(|_| Error::ModelParse("bad column index".into()))?);
            let mean = fields[1].parse().map_err(|_| Error::ModelParse("bad mean".into()))?;
            let std = fields[2].parse().map_err(|_| Error::ModelParse("bad stddev".into()))?;
            stats.push((mean, std));
            weights.push(fields[3].parse().map_err(|_| Error::ModelParse("bad weight".into()))?);
        }
        if weights.len() != n_features {
            return Err(Error::ModelParse(format!(
                "expected {n_features} feature lines, got {}",
                weights.len()
            )));
        }
        Ok(LinearModel { weights, bias, standardization: Standardization { input_width, kept, stats } })
    }
}
