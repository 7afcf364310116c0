use alloc::vec::Vec;

use crate::{Error, Result};

use super::sampling::{
    keyed_rng, standard_normal, unit_f64, TAG_DATASET_MODEL, TAG_DATASET_ROW, UNIT_MAX,
};

pub const LABEL_THRESHOLD: f64 = 0.5;

/// Standard deviation of the additive response noise in generated data.
pub const DEFAULT_NOISE_STD: f64 = 0.02;

// Hidden model: fixed intercept, nonnegative weights summing to
// HIDDEN_WEIGHT_SUM, so the clean response lies in [0.1, 0.9) and its mean
// sits on the label threshold.
const HIDDEN_BIAS: f64 = 0.1;
const HIDDEN_WEIGHT_SUM: f64 = 0.8;

/// Samples of a unipolar regression/classification task.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    d: usize,
    /// Row-major `len() x d`.
    features: Vec<f64>,
    true_response: Vec<f64>,
    labels: Vec<bool>,
    threshold: f64,
    seed: u64,
}

fn in_unit(v: f64) -> bool {
    (0.0..1.0).contains(&v)
}

impl Dataset {
    /// Builds a dataset from features and responses; labels are
    /// `response >= threshold`.
    pub fn from_responses(
        d: usize,
        features: Vec<f64>,
        true_response: Vec<f64>,
        threshold: f64,
        seed: u64,
    ) -> Result<Self> {
        if d == 0 || features.len() != d * true_response.len() {
            return Err(Error::Domain(alloc::format!(
                "{} feature values do not form rows of width {d} for {} responses",
                features.len(),
                true_response.len()
            )));
        }
        if !features.iter().chain(&true_response).all(|&v| in_unit(v)) {
            return Err(Error::Domain(
                "features and responses must lie in [0, 1)".into(),
            ));
        }
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::Domain("threshold must lie in (0, 1)".into()));
        }
        let labels = true_response.iter().map(|&r| r >= threshold).collect();
        Ok(Self {
            d,
            features,
            true_response,
            labels,
            threshold,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.true_response.len()
    }

    pub fn is_empty(&self) -> bool {
        self.true_response.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.d)
    }

    pub fn true_response(&self) -> &[f64] {
        &self.true_response
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Synthetic task with the default noise level.
pub fn generate_dataset(seed: u64, m_samples: usize, d: usize) -> Result<Dataset> {
    generate_dataset_with_noise(seed, m_samples, d, DEFAULT_NOISE_STD)
}

/// Features uniform in `[0, 1)^d`; response `w*.x + b* + N(0, noise_std^2)`
/// clamped into `[0, 1)` for a hidden nonnegative `w*` derived from `seed`.
pub fn generate_dataset_with_noise(
    seed: u64,
    m_samples: usize,
    d: usize,
    noise_std: f64,
) -> Result<Dataset> {
    if m_samples < 10 || d == 0 {
        return Err(Error::Domain(
            "dataset needs at least 10 samples and 1 feature".into(),
        ));
    }
    if !(noise_std.is_finite() && noise_std >= 0.0) {
        return Err(Error::Domain("noise scale must be finite and >= 0".into()));
    }

    let mut model_rng = keyed_rng(seed, &[TAG_DATASET_MODEL]);
    let raw: Vec<f64> = (0..d)
        .map(|_| 0.1 + 0.9 * unit_f64(&mut model_rng))
        .collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w * HIDDEN_WEIGHT_SUM / total).collect();

    let mut features = Vec::with_capacity(m_samples * d);
    let mut response = Vec::with_capacity(m_samples);
    for i in 0..m_samples {
        let mut rng = keyed_rng(seed, &[TAG_DATASET_ROW, i as u64]);
        let row: Vec<f64> = (0..d).map(|_| unit_f64(&mut rng)).collect();
        let clean: f64 = HIDDEN_BIAS + row.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>();
        let noise = if noise_std > 0.0 {
            noise_std * standard_normal(&mut rng)
        } else {
            0.0
        };
        response.push((clean + noise).clamp(0.0, UNIT_MAX));
        features.extend(row);
    }
    Dataset::from_responses(d, features, response, LABEL_THRESHOLD, seed)
}
