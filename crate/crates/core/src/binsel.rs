//! Binary wrapper feature selection driven by the Lévy-flight optimizer.
//!
//! Wolves roam `[0, 1]^d`; each position maps to a feature mask through a
//! sigmoid transfer plus a seeded coin per bit, and the mask's fitness is the
//! stratified cross-validated error of the linear classifier restricted to
//! the masked columns, lightly penalized by the selected fraction. One wolf
//! is pinned at the all-ones position and the literal all-ones mask is
//! evaluated up front, so the selection result can never be worse, in
//! fitness, than keeping every feature.

use std::sync::Mutex;

use crate::classify::{self, TrainConfig};
use crate::error::{Error, Result};
use crate::gwo::{self, Bounds, EvalContext, OptimizerConfig, Variant};
use crate::rng::{purpose, RngStream};

/// Binary choice over feature indices. Repair guarantees at least one set bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMask {
    pub bits: Vec<bool>,
}

impl SelectionMask {
    pub fn all_ones(d: usize) -> Self {
        SelectionMask { bits: vec![true; d] }
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn selected_indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Keep only the masked columns of each row.
    pub fn apply(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let idx = self.selected_indices();
        rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SelectionConfig {
    /// Weight of the cross-validation error against the sparsity term.
    pub error_weight: f64,
    pub optimizer: OptimizerConfig,
    pub folds: usize,
    /// Hyperparameters of the classifier trained inside the fitness.
    pub classifier: TrainConfig,
}

impl SelectionConfig {
    pub fn new(optimizer: OptimizerConfig) -> Self {
        SelectionConfig {
            error_weight: 0.99,
            optimizer,
            folds: 3,
            classifier: TrainConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.error_weight > 0.0 && self.error_weight <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "error_weight must be in (0, 1], got {}",
                self.error_weight
            )));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter(format!("folds must be at least 2, got {}", self.folds)));
        }
        Ok(())
    }
}

/// Sigmoid transfer `1 / (1 + exp(-10 * (x - 0.5)))`. Strictly inside (0, 1)
/// for the `[0, 1]` positions the optimizer produces; far outside that box
/// the float result saturates.
pub fn transfer(position_component: f64) -> f64 {
    1.0 / (1.0 + (-10.0 * (position_component - 0.5)).exp())
}

/// Draw a mask: bit i is set when a uniform draw falls below the transfer
/// probability. An all-zero draw is repaired by setting the bit with the
/// highest transfer probability (lowest index on ties).
pub fn binarize(position: &[f64], rng: &mut RngStream) -> SelectionMask {
    let bits: Vec<bool> = position.iter().map(|&x| rng.next_f64() < transfer(x)).collect();
    let mut mask = SelectionMask { bits };
    if mask.popcount() == 0 {
        let best = position
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.partial_cmp(b).expect("finite position"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        mask.bits[best] = true;
    }
    mask
}

/// Deterministic stratified fold assignment: per class, indices are shuffled
/// by a stream keyed off the optimizer seed and dealt round-robin.
fn fold_assignment(labels: &[bool], folds: usize, seed: u64) -> Vec<usize> {
    let mut assignment = vec![0usize; labels.len()];
    for class in [false, true] {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect();
        RngStream::from_key(&[seed, purpose::CV_FOLDS, u64::from(class)]).shuffle(&mut members);
        for (k, &row) in members.iter().enumerate() {
            assignment[row] = k % folds;
        }
    }
    assignment
}

fn validate_dataset(features: &[Vec<f64>], labels: &[bool], folds: usize) -> Result<()> {
    if features.len() != labels.len() || features.is_empty() {
        return Err(Error::InvalidParameter("features and labels must be non-empty and matching".into()));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassDataset);
    }
    if positives < folds || negatives < folds {
        return Err(Error::InvalidParameter(format!(
            "each class needs at least {folds} rows for {folds}-fold validation"
        )));
    }
    Ok(())
}

/// Composite fitness of one mask, lower is better:
/// `error_weight * cv_error + (1 - error_weight) * selected_fraction`.
pub fn selection_fitness(
    mask: &SelectionMask,
    features: &[Vec<f64>],
    labels: &[bool],
    config: &SelectionConfig,
) -> Result<f64> {
    config.validate()?;
    validate_dataset(features, labels, config.folds)?;
    let d = features[0].len();
    if mask.bits.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: mask.bits.len() });
    }
    if mask.popcount() == 0 {
        return Err(Error::InvalidParameter("selection mask has no set bits".into()));
    }

    let masked = mask.apply(features);
    let assignment = fold_assignment(labels, config.folds, config.optimizer.seed);
    let mut misclassified = 0usize;
    for fold in 0..config.folds {
        let mut train_rows = Vec::new();
        let mut train_labels = Vec::new();
        let mut val_rows = Vec::new();
        let mut val_labels = Vec::new();
        for (i, row) in masked.iter().enumerate() {
            if assignment[i] == fold {
                val_rows.push(row.clone());
                val_labels.push(labels[i]);
            } else {
                train_rows.push(row.clone());
                train_labels.push(labels[i]);
            }
        }
        let model = classify::train(
            &train_rows,
            &train_labels,
            &config.classifier,
            config.optimizer.seed ^ fold as u64,
        )?;
        for (row, &label) in val_rows.iter().zip(&val_labels) {
            let (predicted, _) = classify::predict(&model, row)?;
            if predicted != label {
                misclassified += 1;
            }
        }
    }
    let cv_error = misclassified as f64 / labels.len() as f64;
    let sparsity = mask.popcount() as f64 / d as f64;
    Ok(config.error_weight * cv_error + (1.0 - config.error_weight) * sparsity)
}

struct BestMask {
    fitness: f64,
    iteration: usize,
    wolf: usize,
    mask: SelectionMask,
}

/// Objective adapter: binarize the position with a stream keyed by the
/// evaluation context, score the mask, and remember the best one seen. The
/// lexicographic (fitness, iteration, wolf) comparison makes the recorded
/// winner independent of evaluation order.
struct MaskObjective<'a> {
    features: &'a [Vec<f64>],
    labels: &'a [bool],
    config: &'a SelectionConfig,
    seed: u64,
    best: Mutex<BestMask>,
    failure: Mutex<Option<Error>>,
}

impl gwo::Objective for MaskObjective<'_> {
    fn evaluate(&self, x: &[f64], ctx: EvalContext) -> f64 {
        let mut rng = RngStream::from_key(&[
            self.seed,
            purpose::BINARIZE,
            ctx.iteration as u64,
            ctx.wolf as u64,
        ]);
        let mask = binarize(x, &mut rng);
        match selection_fitness(&mask, self.features, self.labels, self.config) {
            Ok(fitness) => {
                let mut best = self.best.lock().expect("tracker poisoned");
                let candidate = (fitness, ctx.iteration, ctx.wolf);
                if candidate < (best.fitness, best.iteration, best.wolf) {
                    *best = BestMask { fitness, iteration: ctx.iteration, wolf: ctx.wolf, mask };
                }
                fitness
            }
            Err(e) => {
                let mut failure = self.failure.lock().expect("tracker poisoned");
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    }
}

/// Run the Lévy-variant optimizer over `[0, 1]^d` and return the best mask
/// encountered plus the best-so-far fitness trace.
pub fn select_features(
    features: &[Vec<f64>],
    labels: &[bool],
    config: &SelectionConfig,
) -> Result<(SelectionMask, Vec<f64>)> {
    config.validate()?;
    validate_dataset(features, labels, config.folds)?;
    let d = features[0].len();
    if d < 2 {
        return Err(Error::InvalidParameter("feature selection needs at least 2 features".into()));
    }

    let mut optimizer = config.optimizer.clone();
    optimizer.variant = Variant::Levy;
    optimizer.bounds = Bounds::symmetric(d, 0.0, 1.0)?;
    optimizer.pinned = vec![vec![1.0; d]];

    // guardrail: score the literal all-ones mask before the search starts
    let all_ones = SelectionMask::all_ones(d);
    let ones_fitness = selection_fitness(&all_ones, features, labels, config)?;

    let objective = MaskObjective {
        features,
        labels,
        config,
        seed: optimizer.seed,
        best: Mutex::new(BestMask {
            fitness: ones_fitness,
            iteration: 0,
            wolf: usize::MAX,
            mask: all_ones,
        }),
        failure: Mutex::new(None),
    };
    let outcome = gwo::optimize(&objective, &optimizer)?;
    if let Some(e) = objective.failure.into_inner().expect("tracker poisoned") {
        return Err(e);
    }

    let best = objective.best.into_inner().expect("tracker poisoned");
    let trace: Vec<f64> = outcome.trace.into_iter().map(|v| v.min(ones_fitness)).collect();
    Ok((best.mask, trace))
}
