//! Residual co-occurrence features and per-colorspace aggregation.
//!
//! Each plane is min-max scaled to `[0, 255]`, differenced along four
//! directions (right, down, down-right, down-left), quantized with unit step
//! and truncated to `[-2, 2]`. For every direction the joint histogram of
//! residual pairs one step apart along that same direction gives 25 bins;
//! four directions make 100 values per plane, 300 per colorspace. The +-1
//! noise of LSB matching spreads these sharply peaked histograms, which is
//! exactly what the classifier keys on.

use crate::colorspace::{self, ColorSpace, ImageRGB};
use crate::error::{Error, Result};

/// Residual truncation threshold; residuals land in `[-T, T]`.
const TRUNC: i32 = 2;
const BINS_PER_SIDE: usize = 2 * TRUNC as usize + 1;
/// Bins of one direction's joint histogram.
pub const COOC_BINS: usize = BINS_PER_SIDE * BINS_PER_SIDE;

/// Scan directions as (row, col) steps: right, down, down-right, down-left.
pub const DIRECTIONS: [(isize, isize); 4] = [(0, 1), (1, 0), (1, 1), (1, -1)];
pub const DIRECTION_NAMES: [&str; 4] = ["h", "v", "d", "a"];

/// Length of one plane's feature block.
pub const PLANE_FEATURES: usize = DIRECTIONS.len() * COOC_BINS;
/// Length of one colorspace's feature block (three planes).
pub const SPACE_FEATURES: usize = 3 * PLANE_FEATURES;

fn valid_range(len: usize, step: isize) -> std::ops::Range<usize> {
    if step >= 0 {
        0..len - step as usize
    } else {
        (-step) as usize..len
    }
}

/// Four normalized 25-bin co-occurrence histograms of one plane
/// (`width * height` row-major values), concatenated in direction order.
pub fn residual_features(plane: &[f64], width: usize, height: usize) -> Result<Vec<f64>> {
    if width < 3 || height < 3 {
        return Err(Error::PlaneTooSmall { width, height });
    }
    debug_assert_eq!(plane.len(), width * height);

    // min-max scale to [0, 255]; constant planes collapse to zero
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in plane {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let scaled: Vec<f64> = plane.iter().map(|&v| (v - lo) * scale).collect();

    let mut features = Vec::with_capacity(PLANE_FEATURES);
    for (di, dj) in DIRECTIONS {
        // truncated residual grid for this direction
        let ri = valid_range(height, di);
        let rj = valid_range(width, dj);
        let (rh, rw) = (ri.len(), rj.len());
        let mut residual = vec![0i32; rh * rw];
        for (a, i) in ri.clone().enumerate() {
            for (b, j) in rj.clone().enumerate() {
                let here = scaled[i * width + j];
                let there = scaled[(i as isize + di) as usize * width + (j as isize + dj) as usize];
                residual[a * rw + b] = ((there - here).round() as i32).clamp(-TRUNC, TRUNC);
            }
        }

        // joint histogram of residual pairs one step apart, same direction
        let mut hist = [0u64; COOC_BINS];
        let mut total = 0u64;
        for a in valid_range(rh, di) {
            for b in valid_range(rw, dj) {
                let first = residual[a * rw + b];
                let second =
                    residual[(a as isize + di) as usize * rw + (b as isize + dj) as usize];
                let bin = (first + TRUNC) as usize * BINS_PER_SIDE + (second + TRUNC) as usize;
                hist[bin] += 1;
                total += 1;
            }
        }
        debug_assert!(total > 0);
        features.extend(hist.iter().map(|&c| c as f64 / total as f64));
    }
    Ok(features)
}

/// Feature block of one colorspace: the three channel blocks concatenated.
#[derive(Debug, Clone)]
pub struct SpaceFeatures {
    pub space: ColorSpace,
    pub values: Vec<f64>,
}

/// Per-colorspace residual features for an image, order preserved.
pub fn extract(image: &ImageRGB, spaces: &[ColorSpace]) -> Result<Vec<SpaceFeatures>> {
    let planars = colorspace::convert_all(image, spaces)?;
    planars
        .into_iter()
        .map(|p| {
            let mut values = Vec::with_capacity(SPACE_FEATURES);
            for channel in &p.channels {
                values.extend(residual_features(channel, p.width, p.height)?);
            }
            Ok(SpaceFeatures { space: p.colorspace, values })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregationMode {
    Concat,
    WeightedAverage,
}

impl AggregationMode {
    pub fn name(self) -> &'static str {
        match self {
            AggregationMode::Concat => "concat",
            AggregationMode::WeightedAverage => "weighted_average",
        }
    }
}

impl std::str::FromStr for AggregationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concat" => Ok(AggregationMode::Concat),
            "weighted_average" => Ok(AggregationMode::WeightedAverage),
            other => Err(Error::InvalidParameter(format!("unknown aggregation mode '{other}'"))),
        }
    }
}

/// How per-colorspace blocks combine into one vector.
#[derive(Debug, Clone)]
pub struct AggregationConfig {
    pub mode: AggregationMode,
    /// One weight per colorspace; nonnegative, summing to 1.
    pub weights: Vec<f64>,
}

impl AggregationConfig {
    pub fn uniform(mode: AggregationMode, n_spaces: usize) -> Self {
        AggregationConfig { mode, weights: vec![1.0 / n_spaces as f64; n_spaces] }
    }

    pub fn validate(&self, n_spaces: usize) -> Result<()> {
        if self.weights.len() != n_spaces {
            return Err(Error::DimensionMismatch { expected: n_spaces, got: self.weights.len() });
        }
        if self.weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("aggregation weights must be nonnegative".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "aggregation weights must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

/// Index range of one labeled block inside a feature vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutBlock {
    pub label: String,
    pub offset: usize,
    pub len: usize,
}

/// Aggregated feature vector plus the layout describing which block came
/// from which colorspace (a single shared block in weighted-average mode).
#[derive(Debug, Clone)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: Vec<LayoutBlock>,
}

impl FeatureVector {
    /// Column names of the form `<label>_c<channel>_<direction>_b<bin>`.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.values.len());
        for block in &self.layout {
            debug_assert_eq!(block.len, SPACE_FEATURES);
            for channel in 0..3 {
                for dir in DIRECTION_NAMES {
                    for bin in 0..COOC_BINS {
                        names.push(format!("{}_c{channel}_{dir}_b{bin:02}", block.label));
                    }
                }
            }
        }
        names
    }
}

/// Combine per-colorspace blocks: `concat` lays the weighted blocks end to
/// end; `weighted_average` sums them into a single block.
pub fn aggregate(per_space: &[SpaceFeatures], config: &AggregationConfig) -> Result<FeatureVector> {
    if per_space.is_empty() {
        return Err(Error::InvalidParameter("no per-colorspace features to aggregate".into()));
    }
    config.validate(per_space.len())?;
    let block_len = per_space[0].values.len();
    for sf in per_space {
        if sf.values.len() != block_len {
            return Err(Error::DimensionMismatch { expected: block_len, got: sf.values.len() });
        }
    }
    match config.mode {
        AggregationMode::Concat => {
            let mut values = Vec::with_capacity(block_len * per_space.len());
            let mut layout = Vec::with_capacity(per_space.len());
            for (sf, &w) in per_space.iter().zip(&config.weights) {
                layout.push(LayoutBlock {
                    label: sf.space.name().to_string(),
                    offset: values.len(),
                    len: block_len,
                });
                values.extend(sf.values.iter().map(|&v| w * v));
            }
            Ok(FeatureVector { values, layout })
        }
        AggregationMode::WeightedAverage => {
            let mut values = vec![0.0; block_len];
            for (sf, &w) in per_space.iter().zip(&config.weights) {
                for (acc, &v) in values.iter_mut().zip(&sf.values) {
                    *acc += w * v;
                }
            }
            let layout = vec![LayoutBlock { label: "avg".to_string(), offset: 0, len: block_len }];
            Ok(FeatureVector { values, layout })
        }
    }
}
