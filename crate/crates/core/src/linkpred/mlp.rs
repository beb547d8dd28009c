//! One-hidden-layer perceptron for edge classification.
//!
//! Parameters live in one flat vector laid out as `[W1 | b1 | w2 | b2]`, with
//! `W1` row-major `hidden × input`. The forward pass is
//! `σ(w2 · relu(W1 x + b1) + b2)` and training minimizes mean binary
//! cross-entropy with momentum SGD.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::auc::compute_auc;
use super::features::EdgeFeatures;
use crate::error::{Error, Result};
use crate::rng::{stage, stage_rng};
use crate::scalar::{dot, log_sigmoid, sigmoid, Real};

/// Rows per parallel gradient chunk; fixed so that reduction order is too.
const GRADIENT_CHUNK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without a validation-AUC improvement before stopping.
    pub patience: usize,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: 128,
            learning_rate: 1e-2,
            momentum: 0.9,
            batch_size: 256,
            max_epochs: 200,
            patience: 10,
            seed: 0,
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 || self.batch_size == 0 {
            return Err(Error::InvalidConfig("hidden and batch_size must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) || !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidConfig(
                "learning_rate must be positive and momentum in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp<T> {
    input: usize,
    hidden: usize,
    params: Vec<T>,
}

impl<T: Real> Mlp<T> {
    pub fn parameter_count(input: usize, hidden: usize) -> usize {
        hidden * input + 2 * hidden + 1
    }

    pub fn zeros(input: usize, hidden: usize) -> Self {
        Mlp {
            input,
            hidden,
            params: vec![T::zero(); Self::parameter_count(input, hidden)],
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init<R: Rng>(input: usize, hidden: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(input, hidden);
        let a1 = (6.0 / (input + hidden) as f64).sqrt();
        let a2 = (6.0 / (hidden + 1) as f64).sqrt();
        let (w1_end, w2_start) = (hidden * input, hidden * input + hidden);
        for w in &mut m.params[..w1_end] {
            *w = T::of(rng.gen_range(-a1..a1));
        }
        for w in &mut m.params[w2_start..w2_start + hidden] {
            *w = T::of(rng.gen_range(-a2..a2));
        }
        m
    }

    pub fn from_params(input: usize, hidden: usize, params: Vec<T>) -> Result<Self> {
        let expected = Self::parameter_count(input, hidden);
        if params.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: params.len(),
            });
        }
        Ok(Mlp { input, hidden, params })
    }

    pub fn input_size(&self) -> usize {
        self.input
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        &mut self.params
    }

    fn split(&self) -> (&[T], &[T], &[T], T) {
        let (w1, rest) = self.params.split_at(self.hidden * self.input);
        let (b1, rest) = rest.split_at(self.hidden);
        let (w2, b2) = rest.split_at(self.hidden);
        (w1, b1, w2, b2[0])
    }

    /// Pre-sigmoid output; fills `h` with the hidden activations.
    fn logit_into(&self, x: &[T], h: &mut [T]) -> T {
        let (w1, b1, w2, b2) = self.split();
        for (j, hj) in h.iter_mut().enumerate() {
            let z = b1[j] + dot(&w1[j * self.input..(j + 1) * self.input], x);
            *hj = z.max(T::zero());
        }
        dot(w2, h) + b2
    }

    pub fn logit(&self, x: &[T]) -> T {
        let mut h = vec![T::zero(); self.hidden];
        self.logit_into(x, &mut h)
    }

    pub fn predict_one(&self, x: &[T]) -> Result<T> {
        self.check_width(x.len())?;
        Ok(sigmoid(self.logit(x)))
    }

    /// Scores in (0, 1), one per row.
    pub fn predict(&self, feats: &EdgeFeatures<T>) -> Result<Vec<T>> {
        self.check_width(feats.width)?;
        Ok((0..feats.rows())
            .into_par_iter()
            .map_init(
                || vec![T::zero(); self.hidden],
                |h, i| sigmoid(self.logit_into(feats.row(i), h)),
            )
            .collect())
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width != self.input {
            return Err(Error::ShapeMismatch {
                expected: self.input,
                actual: width,
            });
        }
        Ok(())
    }

    /// Mean binary cross-entropy over `rows` of `feats`.
    pub fn batch_loss(&self, feats: &EdgeFeatures<T>, rows: &[usize]) -> T {
        let mut h = vec![T::zero(); self.hidden];
        let total = rows.iter().fold(T::zero(), |acc, &i| {
            let z = self.logit_into(feats.row(i), &mut h);
            acc + bce(z, feats.labels[i])
        });
        total / T::of(rows.len() as f64)
    }

    /// Mean loss and its gradient with respect to the flat parameter vector.
    pub fn batch_gradient(&self, feats: &EdgeFeatures<T>, rows: &[usize]) -> (T, Vec<T>) {
        let n = self.params.len();
        let partials: Vec<(T, Vec<T>)> = rows
            .par_chunks(GRADIENT_CHUNK)
            .map(|chunk| {
                let mut grad = vec![T::zero(); n];
                let mut h = vec![T::zero(); self.hidden];
                let mut loss = T::zero();
                for &i in chunk {
                    loss += self.accumulate(feats.row(i), feats.labels[i], &mut h, &mut grad);
                }
                (loss, grad)
            })
            .collect();
        let scale = T::one() / T::of(rows.len() as f64);
        let mut grad = vec![T::zero(); n];
        let mut loss = T::zero();
        for (l, g) in partials {
            loss += l;
            for (a, b) in grad.iter_mut().zip(g) {
                *a += b;
            }
        }
        grad.iter_mut().for_each(|g| *g *= scale);
        (loss * scale, grad)
    }

    /// Adds one example's loss gradient into `grad`; returns its loss.
    fn accumulate(&self, x: &[T], label: bool, h: &mut [T], grad: &mut [T]) -> T {
        let z = self.logit_into(x, h);
        let y = if label { T::one() } else { T::zero() };
        let dz = sigmoid(z) - y;
        let (_, _, w2, _) = self.split();
        let (hid, inp) = (self.hidden, self.input);
        let (g_w1, rest) = grad.split_at_mut(hid * inp);
        let (g_b1, rest) = rest.split_at_mut(hid);
        let (g_w2, g_b2) = rest.split_at_mut(hid);
        g_b2[0] += dz;
        for j in 0..hid {
            g_w2[j] += dz * h[j];
            if h[j] > T::zero() {
                let dh = dz * w2[j];
                g_b1[j] += dh;
                for (g, &xi) in g_w1[j * inp..(j + 1) * inp].iter_mut().zip(x) {
                    *g += dh * xi;
                }
            }
        }
        bce(z, label)
    }
}

#[inline]
fn bce<T: Real>(logit: T, label: bool) -> T {
    if label {
        -log_sigmoid(logit)
    } else {
        -log_sigmoid(-logit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_auc: f64,
}

/// The best-validation snapshot and the history that led to it.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedClassifier<T> {
    pub model: Mlp<T>,
    /// 0 means the untrained initialization was never beaten.
    pub best_epoch: usize,
    pub best_val_auc: f64,
    pub initial_val_auc: f64,
    pub history: Vec<EpochRecord>,
}

pub fn train_classifier<T: Real>(
    train: &EdgeFeatures<T>,
    val: &EdgeFeatures<T>,
    cfg: &MlpConfig,
) -> Result<TrainedClassifier<T>> {
    cfg.validate()?;
    if !train.has_both_classes() || !val.has_both_classes() {
        return Err(Error::SingleClass);
    }
    if train.width != val.width {
        return Err(Error::ShapeMismatch {
            expected: train.width,
            actual: val.width,
        });
    }
    let mut model = Mlp::init(train.width, cfg.hidden, &mut stage_rng(cfg.seed, stage::MLP_INIT));
    let val_auc = |m: &Mlp<T>| -> Result<f64> { compute_auc(&m.predict(val)?, &val.labels) };
    let initial_val_auc = val_auc(&model)?;
    let mut best = (model.clone(), 0usize, initial_val_auc);
    let mut velocity = vec![T::zero(); model.params.len()];
    let (lr, mu) = (T::of(cfg.learning_rate), T::of(cfg.momentum));
    let mut order: Vec<usize> = (0..train.rows()).collect();
    let mut rng = stage_rng(cfg.seed, stage::MLP_SHUFFLE);
    let mut history = Vec::new();
    let mut stale = 0;

    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let (loss, grad) = model.batch_gradient(train, batch);
            loss_sum += loss.as_f64() * batch.len() as f64;
            for ((p, v), g) in model.params.iter_mut().zip(&mut velocity).zip(grad) {
                *v = mu * *v + g;
                *p -= lr * *v;
            }
        }
        let auc = val_auc(&model)?;
        history.push(EpochRecord {
            epoch,
            train_loss: loss_sum / train.rows() as f64,
            val_auc: auc,
        });
        if auc > best.2 {
            best = (model.clone(), epoch, auc);
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        }
    }
    Ok(TrainedClassifier {
        model: best.0,
        best_epoch: best.1,
        best_val_auc: best.2,
        initial_val_auc,
        history,
    })
}
