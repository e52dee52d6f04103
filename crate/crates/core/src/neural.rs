//! Dense MLP engine with mini-batch gradient descent, plus the covariance
//! feature map and dataset builders for the two networks it hosts: the
//! antenna-selection classifier (cos(theta) -> selection mask, sigmoid
//! head, binary cross-entropy) and the DOA regressor (covariance features
//! -> angle, linear head, mean squared error).
//!
//! Hidden layers are ReLU. Training is plain SGD with a fixed learning
//! rate, single-threaded and bit-deterministic for a fixed seed.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::array::{
    compress_geometry, sample_covariance, synthesize_snapshots, ArrayGeometry, CovarianceMatrix,
    SelectionVector, SourceEnsemble,
};
use crate::beampattern::{constrained_select, SelectionConfig};
use crate::rng::{derive_seed, rng_from_seed};
use crate::swsha::AngleGrid;
use crate::{Error, Result};

/// Output-layer nonlinearity; hidden layers are always ReLU.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputActivation {
    Sigmoid,
    Linear,
}

/// Training loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    /// Binary cross-entropy; expects a sigmoid head.
    Bce,
    /// Mean squared error; expects a linear head.
    Mse,
}

/// Feed-forward dense network. Weight `h` has shape (out, in).
#[derive(Debug, Clone)]
pub struct Mlp {
    dims: Vec<usize>,
    weights: Vec<DMatrix<f64>>,
    biases: Vec<DVector<f64>>,
    output_activation: OutputActivation,
}

impl Mlp {
    /// He-style uniform init, deterministic in `seed`.
    pub fn new_random(dims: &[usize], output_activation: OutputActivation, seed: u64) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::Domain("network needs input and output layers".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Domain("layer sizes must be positive".into()));
        }
        let mut rng = rng_from_seed(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / fan_in as f64).sqrt();
            weights.push(DMatrix::from_fn(fan_out, fan_in, |_, _| {
                rng.random_range(-bound..bound)
            }));
            biases.push(DVector::zeros(fan_out));
        }
        Ok(Self { dims: dims.to_vec(), weights, biases, output_activation })
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.output_activation
    }

    /// Number of weight layers.
    pub fn layer_count(&self) -> usize {
        self.weights.len()
    }

    /// Weight matrix of layer `h`, shape (out, in).
    pub fn layer_weights(&self, h: usize) -> &DMatrix<f64> {
        &self.weights[h]
    }

    pub fn layer_weights_mut(&mut self, h: usize) -> &mut DMatrix<f64> {
        &mut self.weights[h]
    }

    pub fn layer_biases(&self, h: usize) -> &DVector<f64> {
        &self.biases[h]
    }

    pub fn layer_biases_mut(&mut self, h: usize) -> &mut DVector<f64> {
        &mut self.biases[h]
    }

    /// Single-sample forward pass.
    pub fn forward(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::Domain(format!(
                "input length {} does not match input layer {}",
                x.len(),
                self.input_dim()
            )));
        }
        let mut a = DVector::from_column_slice(x);
        let last = self.weights.len() - 1;
        for (h, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            a = w * a + b;
            if h < last {
                a.apply(|v| *v = v.max(0.0));
            } else {
                match self.output_activation {
                    OutputActivation::Sigmoid => a.apply(|v| *v = sigmoid(*v)),
                    OutputActivation::Linear => {}
                }
            }
        }
        Ok(a)
    }

    /// Batched forward keeping pre-head activations of every layer;
    /// samples are columns.
    fn forward_train(&self, x: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let mut acts = Vec::with_capacity(self.weights.len() + 1);
        acts.push(x.clone());
        let last = self.weights.len() - 1;
        for (h, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = w * acts.last().unwrap();
            for mut col in z.column_iter_mut() {
                col += b;
            }
            if h < last {
                z.apply(|v| *v = v.max(0.0));
            } else if self.output_activation == OutputActivation::Sigmoid {
                z.apply(|v| *v = sigmoid(*v));
            }
            acts.push(z);
        }
        acts
    }

    /// Text serialization: header (layer sizes, head, loss-free) then
    /// row-major weights and biases per layer, full precision.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "mlp v1")?;
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        writeln!(f, "layers {}", dims.join(" "))?;
        writeln!(
            f,
            "output {}",
            match self.output_activation {
                OutputActivation::Sigmoid => "sigmoid",
                OutputActivation::Linear => "linear",
            }
        )?;
        for (w, b) in self.weights.iter().zip(&self.biases) {
            for r in 0..w.nrows() {
                let row: Vec<String> = (0..w.ncols()).map(|c| format!("{:e}", w[(r, c)])).collect();
                writeln!(f, "{}", row.join(" "))?;
            }
            let bias: Vec<String> = b.iter().map(|v| format!("{v:e}")).collect();
            writeln!(f, "{}", bias.join(" "))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = BufReader::new(std::fs::File::open(path)?);
        let mut lines = f.lines();
        let magic = lines.next().ok_or_else(bad_model)??;
        if magic.trim() != "mlp v1" {
            return Err(Error::Domain("unrecognized model header".into()));
        }
        let dims_line = lines.next().ok_or_else(bad_model)??;
        let dims: Vec<usize> = dims_line
            .trim()
            .strip_prefix("layers ")
            .ok_or_else(bad_model)?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad_model()))
            .collect::<std::result::Result<_, _>>()?;
        let head_line = lines.next().ok_or_else(bad_model)??;
        let output_activation = match head_line.trim().strip_prefix("output ").ok_or_else(bad_model)? {
            "sigmoid" => OutputActivation::Sigmoid,
            "linear" => OutputActivation::Linear,
            _ => return Err(bad_model()),
        };
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        let mut parse_row = |expect: usize| -> Result<Vec<f64>> {
            let line = lines.next().ok_or_else(bad_model)??;
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad_model()))
                .collect::<std::result::Result<_, _>>()?;
            if vals.len() != expect {
                return Err(bad_model());
            }
            Ok(vals)
        };
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let mut mat = DMatrix::zeros(fan_out, fan_in);
            for r in 0..fan_out {
                let row = parse_row(fan_in)?;
                for c in 0..fan_in {
                    mat[(r, c)] = row[c];
                }
            }
            weights.push(mat);
            biases.push(DVector::from_vec(parse_row(fan_out)?));
        }
        Ok(Self { dims, weights, biases, output_activation })
    }
}

fn bad_model() -> Error {
    Error::Domain("malformed model file".into())
}

fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub loss: Loss,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { epochs: 2000, batch_size: 16, learning_rate: 1e-3, seed: 0, loss: Loss::Mse }
    }
}

/// In-memory training set; all inputs share one length, likewise targets.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    inputs: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, input: Vec<f64>, target: Vec<f64>) -> Result<()> {
        if let Some(first) = self.inputs.first() {
            if input.len() != first.len() || target.len() != self.targets[0].len() {
                return Err(Error::Domain("inconsistent sample shape".into()));
            }
        }
        self.inputs.push(input);
        self.targets.push(target);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i]
    }

    pub fn target(&self, i: usize) -> &[f64] {
        &self.targets[i]
    }
}

/// Mini-batch SGD with backprop. Returns the per-epoch mean training loss.
pub fn train(mlp: &mut Mlp, data: &Dataset, cfg: &TrainConfig) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::Domain("training set is empty".into()));
    }
    if !(cfg.learning_rate > 0.0) {
        return Err(Error::Domain("learning rate must be positive".into()));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(Error::Domain("batch size and epochs must be positive".into()));
    }
    match (cfg.loss, mlp.output_activation) {
        (Loss::Bce, OutputActivation::Sigmoid) | (Loss::Mse, OutputActivation::Linear) => {}
        _ => {
            return Err(Error::Domain(
                "loss/head mismatch: BCE needs sigmoid, MSE needs linear".into(),
            ))
        }
    }

    let n = data.len();
    let din = mlp.input_dim();
    let dout = mlp.output_dim();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng_from_seed(cfg.seed);
    let mut history = Vec::with_capacity(cfg.epochs);
    let layers = mlp.weights.len();

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let bs = batch.len();
            let mut x = DMatrix::zeros(din, bs);
            let mut y = DMatrix::zeros(dout, bs);
            for (c, &i) in batch.iter().enumerate() {
                x.column_mut(c).copy_from_slice(data.input(i));
                y.column_mut(c).copy_from_slice(data.target(i));
            }
            let acts = mlp.forward_train(&x);
            let out = &acts[layers];

            // loss and output-layer delta dL/dz (pre-activation)
            let mut delta = DMatrix::zeros(dout, bs);
            let mut loss = 0.0;
            match cfg.loss {
                Loss::Mse => {
                    for c in 0..bs {
                        for r in 0..dout {
                            let e = out[(r, c)] - y[(r, c)];
                            loss += e * e;
                            delta[(r, c)] = 2.0 * e / bs as f64;
                        }
                    }
                    loss /= bs as f64;
                }
                Loss::Bce => {
                    for c in 0..bs {
                        for r in 0..dout {
                            let p = out[(r, c)].clamp(1e-12, 1.0 - 1e-12);
                            let t = y[(r, c)];
                            loss -= t * p.ln() + (1.0 - t) * (1.0 - p).ln();
                            // combined sigmoid+BCE gradient
                            delta[(r, c)] = (out[(r, c)] - t) / bs as f64;
                        }
                    }
                    loss /= bs as f64;
                }
            }
            if !loss.is_finite() {
                return Err(Error::Training(format!("loss diverged at epoch {epoch}")));
            }
            epoch_loss += loss * bs as f64;

            // backprop
            for h in (0..layers).rev() {
                let grad_w = &delta * acts[h].transpose();
                let mut grad_b = DVector::zeros(mlp.biases[h].len());
                for c in 0..bs {
                    grad_b += delta.column(c);
                }
                if h > 0 {
                    let mut next = mlp.weights[h].transpose() * &delta;
                    // ReLU mask of the previous layer's activation
                    for c in 0..bs {
                        for r in 0..next.nrows() {
                            if acts[h][(r, c)] <= 0.0 {
                                next[(r, c)] = 0.0;
                            }
                        }
                    }
                    delta = next;
                }
                mlp.weights[h] -= grad_w * cfg.learning_rate;
                mlp.biases[h] -= grad_b * cfg.learning_rate;
            }
        }
        history.push(epoch_loss / n as f64);
    }
    Ok(history)
}

/// Mean loss of `mlp` over a dataset, without updating parameters.
pub fn evaluate_loss(mlp: &Mlp, data: &Dataset, loss: Loss) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Domain("dataset is empty".into()));
    }
    let mut total = 0.0;
    for i in 0..data.len() {
        let out = mlp.forward(data.input(i))?;
        let t = data.target(i);
        match loss {
            Loss::Mse => {
                for r in 0..out.len() {
                    total += (out[r] - t[r]).powi(2);
                }
            }
            Loss::Bce => {
                for r in 0..out.len() {
                    let p = out[r].clamp(1e-12, 1.0 - 1e-12);
                    total -= t[r] * p.ln() + (1.0 - t[r]) * (1.0 - p).ln();
                }
            }
        }
    }
    Ok(total / data.len() as f64)
}

/// Real feature vector of a Hermitian covariance: row-major upper
/// triangle, real parts then imaginary parts, length `K(K+1)`.
pub fn extract_features(r: &CovarianceMatrix) -> Vec<f64> {
    let k = r.dim();
    let mut re = Vec::with_capacity(k * (k + 1) / 2);
    let mut im = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            re.push(r.data()[(i, j)].re);
            im.push(r.data()[(i, j)].im);
        }
    }
    re.extend(im);
    re
}

/// Features of the trace-normalized covariance `R * K / tr(R)`; the scale
/// the regressor is trained on.
pub fn normalized_features(r: &CovarianceMatrix) -> Vec<f64> {
    let k = r.dim() as f64;
    let scale = k / r.trace_re();
    extract_features(r).into_iter().map(|v| v * scale).collect()
}

/// Label set of the selection network: optimal selection per grid angle.
pub fn asn_build_dataset(
    grid: &AngleGrid,
    cfg: &SelectionConfig,
    geometry: &ArrayGeometry,
) -> Result<(Dataset, Vec<SelectionVector>)> {
    if grid.is_empty() {
        return Err(Error::Domain("angle grid is empty".into()));
    }
    let labels: Vec<Result<SelectionVector>> = (0..grid.len())
        .into_par_iter()
        .map(|i| constrained_select(grid.angle(i), cfg, geometry))
        .collect();
    let mut data = Dataset::new();
    let mut sels = Vec::with_capacity(grid.len());
    for (i, l) in labels.into_iter().enumerate() {
        let sel = l?;
        let target: Vec<f64> = sel.mask().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        data.push(vec![grid.angle(i).cos()], target)?;
        sels.push(sel);
    }
    Ok((data, sels))
}

/// Top-K thresholding of the selection network's sigmoid output; ties go
/// to the smaller antenna index.
pub fn asn_infer(mlp: &Mlp, cos_theta: f64, k: usize) -> Result<SelectionVector> {
    let out = mlp.forward(&[cos_theta])?;
    let m = out.len();
    if k == 0 || k > m {
        return Err(Error::Domain(format!("cannot select top {k} of {m} outputs")));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| out[j].partial_cmp(&out[i]).unwrap().then(i.cmp(&j)));
    let mut mask = vec![false; m];
    for &i in &order[..k] {
        mask[i] = true;
    }
    SelectionVector::from_mask(mask)
}

/// Configuration of the regressor's training-set synthesis.
#[derive(Debug, Clone)]
pub struct DnnDatasetConfig {
    pub snr_db_sweep: Vec<f64>,
    /// Noisy draws per (angle, SNR) pair.
    pub realizations: usize,
    pub snapshots: usize,
    pub seed: u64,
}

/// Per-angle feature/target pairs for the DOA regressor. `selections`
/// supplies the array configuration used at each grid angle (one entry, or
/// one per angle). Targets are degrees scaled by 1/90.
pub fn dnn_build_dataset(
    grid: &AngleGrid,
    selections: &[SelectionVector],
    full_geometry: &ArrayGeometry,
    cfg: &DnnDatasetConfig,
) -> Result<Dataset> {
    if grid.is_empty() {
        return Err(Error::Domain("angle grid is empty".into()));
    }
    if selections.len() != 1 && selections.len() != grid.len() {
        return Err(Error::Domain(
            "need one selection total or one per grid angle".into(),
        ));
    }
    if cfg.realizations == 0 || cfg.snapshots == 0 {
        return Err(Error::Domain("realizations and snapshots must be positive".into()));
    }
    let rows: Vec<Result<Vec<(Vec<f64>, f64)>>> = (0..grid.len())
        .into_par_iter()
        .map(|ai| {
            let theta = grid.angle(ai);
            let sel = if selections.len() == 1 { &selections[0] } else { &selections[ai] };
            let geom = compress_geometry(full_geometry, sel)?;
            let target = theta.to_degrees() / 90.0;
            let mut out = Vec::with_capacity(cfg.snr_db_sweep.len() * cfg.realizations);
            for (si, &snr) in cfg.snr_db_sweep.iter().enumerate() {
                let power = 10f64.powf(snr / 10.0);
                let src = SourceEnsemble::single(theta, power, 1.0)?;
                for rep in 0..cfg.realizations {
                    let stream = (ai as u64) << 32 | (si as u64) << 16 | rep as u64;
                    let y = synthesize_snapshots(
                        &geom,
                        &src,
                        cfg.snapshots,
                        derive_seed(cfg.seed, stream),
                    )?;
                    let r = sample_covariance(&y)?;
                    out.push((normalized_features(&r), target));
                }
            }
            Ok(out)
        })
        .collect();
    let mut data = Dataset::new();
    for row in rows {
        for (input, target) in row? {
            data.push(input, vec![target])?;
        }
    }
    Ok(data)
}


/// Angle estimate of the regressor, radians.
pub fn dnn_infer(mlp: &Mlp, features: &[f64]) -> Result<f64> {
    let out = mlp.forward(features)?;
    if out.len() != 1 {
        return Err(Error::Domain("regressor must have a single output".into()));
    }
    Ok((out[0] * 90.0).to_radians())
}
