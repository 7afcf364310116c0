//! Linear regression with a threshold, evaluated three ways.
//!
//! BE inference is exact fixed-point arithmetic on `n`-bit quantized
//! operands. SC inference multiplies each weight/feature pair by ANDing
//! streams and sums the products and the bias with a balanced tree of
//! interleaving scaled adders; a tree over `d + 1` terms divides the result
//! by `2^ceil(log2(d + 1))`, which is undone after decoding.

use alloc::vec::Vec;

use crate::backend::{bits_to_int, evaluate, int_to_bits, BitBackend, CostReport};
use crate::bitstream::{ds_encode, Bitstream, Precision};
use crate::circuits::{build_array_multiplier, build_ripple_carry_adder};
use crate::{Error, Result};

use super::dataset::Dataset;
use super::linalg::least_squares;
use super::sampling::{derive_key, quantize, ScRngFamily, TAG_SC_INFERENCE, UNIT_MAX};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub threshold: f64,
}

impl LinearModel {
    pub fn response(&self, row: &[f64]) -> f64 {
        self.bias
            + row
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x * w)
                .sum::<f64>()
    }

    /// Weights and bias in `[0, 1)`, threshold in `(0, 1)`, and every
    /// partial dot product on `ds` below 1.
    pub fn check_range(&self, ds: &Dataset) -> Result<()> {
        let unit = |v: f64| (0.0..1.0).contains(&v);
        if self.weights.len() != ds.dim() {
            return Err(Error::Domain("model and dataset dimensions differ".into()));
        }
        if !self.weights.iter().all(|&w| unit(w)) || !unit(self.bias) {
            return Err(Error::Domain("weights and bias must lie in [0, 1)".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Domain("threshold must lie in (0, 1)".into()));
        }
        // terms are nonnegative, so the full sum is the largest partial value
        if ds.rows().any(|row| !unit(self.response(row))) {
            return Err(Error::Domain(
                "dot product leaves [0, 1) on the dataset".into(),
            ));
        }
        Ok(())
    }
}

/// Closed-form least-squares fit of the response on the features, then
/// projected into the unipolar range.
///
/// Negative coefficients are clamped to zero. If the fitted response then
/// reaches 1 on some sample, weights, bias and threshold are scaled down
/// together, which leaves every thresholded prediction unchanged.
pub fn train_float(ds: &Dataset) -> Result<LinearModel> {
    let d = ds.dim();
    let design: Vec<f64> = ds
        .rows()
        .flat_map(|row| row.iter().copied().chain([1.0]))
        .collect();
    let beta = least_squares(&design, d + 1, ds.true_response(), 1e-10)
        .ok_or_else(|| Error::Training("design matrix is rank deficient".into()))?;

    let clamp = |v: f64| v.clamp(0.0, UNIT_MAX);
    let mut model = LinearModel {
        weights: beta[..d].iter().map(|&w| clamp(w)).collect(),
        bias: clamp(beta[d]),
        threshold: ds.threshold(),
    };
    let peak = ds.rows().map(|r| model.response(r)).fold(0.0, f64::max);
    if peak > UNIT_MAX {
        let s = UNIT_MAX / peak;
        model.weights.iter_mut().for_each(|w| *w *= s);
        model.bias *= s;
        model.threshold *= s;
    }
    model.check_range(ds)?;
    Ok(model)
}

pub fn predict_float(model: &LinearModel, ds: &Dataset) -> Vec<bool> {
    ds.rows()
        .map(|r| model.response(r) >= model.threshold)
        .collect()
}

/// Exact fixed-point response in units of `2^-2n`:
/// `sum(q(w_i) q(x_i)) + q(b) 2^n`.
fn be_accumulator(model: &LinearModel, row: &[f64], n: Precision) -> u64 {
    let products: u64 = row
        .iter()
        .zip(&model.weights)
        .map(|(&x, &w)| u64::from(quantize(w, n)) * u64::from(quantize(x, n)))
        .sum();
    products + (u64::from(quantize(model.bias, n)) << n.bits())
}

fn be_threshold_units(model: &LinearModel, n: Precision) -> f64 {
    model.threshold * libm::ldexp(1.0, 2 * n.bits() as i32)
}

/// BE response of one sample as a real.
pub fn be_response(model: &LinearModel, row: &[f64], n: Precision) -> f64 {
    libm::ldexp(be_accumulator(model, row, n) as f64, -2 * n.bits() as i32)
}

/// Quantized BE inference by integer arithmetic.
pub fn predict_be(model: &LinearModel, ds: &Dataset, n: Precision) -> Vec<bool> {
    let cut = be_threshold_units(model, n);
    ds.rows()
        .map(|r| be_accumulator(model, r, n) as f64 >= cut)
        .collect()
}

fn ceil_log2(v: usize) -> u32 {
    usize::BITS - (v.max(1) - 1).leading_zeros()
}

/// Quantized BE inference through array-multiplier and ripple-carry-adder
/// netlists on `backend`. Bit-identical to [`predict_be`].
pub fn predict_be_netlist<B: BitBackend>(
    model: &LinearModel,
    ds: &Dataset,
    n: Precision,
    backend: &mut B,
) -> Result<(Vec<bool>, CostReport)> {
    let nb = n.bits();
    let width = 2 * nb + ceil_log2(ds.dim() + 1);
    let width_p = Precision::new(width)
        .map_err(|_| Error::Domain(alloc::format!("accumulator width {width} exceeds 16 bits")))?;
    let mult = build_array_multiplier(n);
    let add = build_ripple_carry_adder(width_p);
    let cut = be_threshold_units(model, n);
    let mut total = CostReport::default();
    let mut labels = Vec::with_capacity(ds.len());

    for row in ds.rows() {
        let mut acc = u64::from(quantize(model.bias, n)) << nb;
        for (&x, &w) in row.iter().zip(&model.weights) {
            let inputs: Vec<bool> = int_to_bits(quantize(w, n).into(), nb)
                .chain(int_to_bits(quantize(x, n).into(), nb))
                .collect();
            let (prod, r) = evaluate(&mult, &inputs, backend)?;
            total += r;
            let inputs: Vec<bool> = int_to_bits(acc, width)
                .chain(int_to_bits(bits_to_int(&prod), width))
                .collect();
            let (sum, r) = evaluate(&add, &inputs, backend)?;
            total += r;
            acc = bits_to_int(&sum);
        }
        labels.push(acc as f64 >= cut);
    }
    Ok((labels, total))
}

/// SC response of sample `index`, rescaled by the adder-tree factor.
pub fn sc_response(
    model: &LinearModel,
    row: &[f64],
    n: Precision,
    seed: u64,
    index: u64,
    family: ScRngFamily,
) -> Result<f64> {
    let d = model.weights.len();
    let levels = ceil_log2(d + 1);
    if levels > n.bits() {
        return Err(Error::Domain(alloc::format!(
            "a {}-term adder tree needs at least {levels} bits of precision",
            d + 1
        )));
    }
    let encode = |value: u32, operand: u64| -> Result<Bitstream> {
        let key = derive_key(seed, &[TAG_SC_INFERENCE, index, operand]);
        ds_encode(value, n, &mut family.source(n, key))
    };

    let mut terms = Vec::with_capacity(1 << levels);
    for (i, (&x, &w)) in row.iter().zip(&model.weights).enumerate() {
        let sw = encode(quantize(w, n), 2 * i as u64)?;
        let sx = encode(quantize(x, n), 2 * i as u64 + 1)?;
        terms.push(sw.and(&sx)?);
    }
    terms.push(encode(quantize(model.bias, n), 2 * d as u64)?);
    terms.resize(1 << levels, Bitstream::zeros(n.stream_length()));

    for level in 0..levels {
        terms = terms
            .chunks_exact(2)
            .map(|pair| pair[0].select_interleave(&pair[1], level))
            .collect::<Result<_>>()?;
    }
    let scaled = terms[0].popcount() as f64 / f64::from(n.max_value());
    Ok(libm::ldexp(scaled, levels as i32))
}

/// SC inference with the default LFSR encoders.
pub fn predict_sc(model: &LinearModel, ds: &Dataset, n: Precision, seed: u64) -> Result<Vec<bool>> {
    predict_sc_with(model, ds, n, seed, ScRngFamily::default())
}

pub fn predict_sc_with(
    model: &LinearModel,
    ds: &Dataset,
    n: Precision,
    seed: u64,
    family: ScRngFamily,
) -> Result<Vec<bool>> {
    ds.rows()
        .enumerate()
        .map(|(i, r)| Ok(sc_response(model, r, n, seed, i as u64, family)? >= model.threshold))
        .collect()
}

fn r2_core(pred: impl Iterator<Item = f64>, truth: &[f64]) -> Result<f64> {
    if truth.len() < 2 {
        return Err(Error::Domain("R^2 needs at least two samples".into()));
    }
    let mean = truth.iter().sum::<f64>() / truth.len() as f64;
    let ss_tot: f64 = truth.iter().map(|t| (t - mean) * (t - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Domain(
            "R^2 is undefined for a constant target".into(),
        ));
    }
    let ss_res: f64 = pred.zip(truth).map(|(p, t)| (t - p) * (t - p)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Coefficient of determination of 0/1 predictions against 0/1 labels.
pub fn r2_score(pred: &[bool], truth: &[bool]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    let truth: Vec<f64> = truth.iter().map(|&t| f64::from(u8::from(t))).collect();
    r2_core(pred.iter().map(|&p| f64::from(u8::from(p))), &truth)
}

/// Coefficient of determination of real-valued predictions.
pub fn r2_real(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    r2_core(pred.iter().copied(), truth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InferenceMode {
    Float,
    Be,
    Sc,
}

impl InferenceMode {
    pub fn name(self) -> &'static str {
        match self {
            InferenceMode::Float => "float",
            InferenceMode::Be => "be",
            InferenceMode::Sc => "sc",
        }
    }
}

/// R^2 on thresholded labels and on the pre-threshold response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Pair {
    pub label: f64,
    pub response: f64,
}

/// Scores `mode` inference of `model` on `ds`. `n` is ignored for `Float`;
/// `seed` only keys the SC encoders.
pub fn classification_r2(
    model: &LinearModel,
    ds: &Dataset,
    mode: InferenceMode,
    n: Precision,
    seed: u64,
    family: ScRngFamily,
) -> Result<R2Pair> {
    let responses: Vec<f64> = match mode {
        InferenceMode::Float => ds.rows().map(|r| model.response(r)).collect(),
        InferenceMode::Be => ds.rows().map(|r| be_response(model, r, n)).collect(),
        InferenceMode::Sc => ds
            .rows()
            .enumerate()
            .map(|(i, r)| sc_response(model, r, n, seed, i as u64, family))
            .collect::<Result<_>>()?,
    };
    let labels: Vec<bool> = match mode {
        // integer comparison, identical to predict_be
        InferenceMode::Be => predict_be(model, ds, n),
        _ => responses.iter().map(|&v| v >= model.threshold).collect(),
    };
    Ok(R2Pair {
        label: r2_score(&labels, ds.labels())?,
        response: r2_real(&responses, ds.true_response())?,
    })
}
