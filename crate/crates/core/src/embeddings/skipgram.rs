//! SkipGram with negative sampling, trained by plain SGD.
//!
//! Two tables are trained (input and output vectors); the input table is what
//! gets exported. Negatives come from the unigram distribution raised to 3/4,
//! and the learning rate decays linearly to `1e-4` of its initial value.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::EmbeddingMatrix;
use super::walks::WalkCorpus;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stage, stage_rng};
use crate::scalar::{dot, log_sigmoid, sigmoid, Real};

pub const MIN_LEARNING_RATE_FRACTION: f64 = 1e-4;
const NOISE_EXPONENT: f64 = 0.75;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkipGramConfig {
    /// Maximum distance between center and context. Each center draws its
    /// effective window uniformly from `1..=window`, as word2vec does.
    pub window: usize,
    pub negatives_per_positive: usize,
    pub epochs: usize,
    pub initial_learning_rate: f64,
    pub seed: u64,
    /// 1 trains serially and deterministically; more threads run lock-free
    /// updates whose result varies between runs.
    pub threads: usize,
}

impl Default for SkipGramConfig {
    fn default() -> Self {
        SkipGramConfig {
            window: 10,
            negatives_per_positive: 5,
            epochs: 5,
            initial_learning_rate: 0.025,
            seed: 0,
            threads: 1,
        }
    }
}

impl SkipGramConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 1 {
            return Err(Error::InvalidConfig("window must be >= 1".into()));
        }
        if self.negatives_per_positive < 1 {
            return Err(Error::InvalidConfig("negatives_per_positive must be >= 1".into()));
        }
        if !(self.initial_learning_rate > 0.0 && self.initial_learning_rate.is_finite()) {
            return Err(Error::InvalidConfig("initial_learning_rate must be positive".into()));
        }
        if self.threads < 1 {
            return Err(Error::InvalidConfig("threads must be >= 1".into()));
        }
        Ok(())
    }
}

/// Mean pair loss per epoch.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub epoch_losses: Vec<f64>,
}

/// Negative-sampling loss of one `(center, context)` pair against explicit
/// negative output vectors: `-ln σ(c·o) - Σ ln σ(-c·n)`.
pub fn pair_loss<T: Real>(center: &[T], context: &[T], negatives: &[Vec<T>]) -> T {
    let mut loss = -log_sigmoid(dot(center, context));
    for n in negatives {
        loss -= log_sigmoid(-dot(center, n));
    }
    loss
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairGradients<T> {
    pub center: Vec<T>,
    pub context: Vec<T>,
    pub negatives: Vec<Vec<T>>,
}

/// Analytic gradient of [`pair_loss`] with respect to every vector involved.
pub fn pair_gradients<T: Real>(center: &[T], context: &[T], negatives: &[Vec<T>]) -> PairGradients<T> {
    let g_pos = sigmoid(dot(center, context)) - T::one();
    let mut d_center: Vec<T> = context.iter().map(|&o| g_pos * o).collect();
    let d_context = center.iter().map(|&c| g_pos * c).collect();
    let d_negatives = negatives
        .iter()
        .map(|n| {
            let g = sigmoid(dot(center, n));
            for (dc, &x) in d_center.iter_mut().zip(n) {
                *dc += g * x;
            }
            center.iter().map(|&c| g * c).collect()
        })
        .collect();
    PairGradients {
        center: d_center,
        context: d_context,
        negatives: d_negatives,
    }
}

/// Cumulative unigram^(3/4) table; sampling is a binary search.
struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    fn new(freq: &[u64]) -> Self {
        let mut acc = 0.0;
        let cumulative = freq
            .iter()
            .map(|&f| {
                acc += (f as f64).powf(NOISE_EXPONENT);
                acc
            })
            .collect();
        NoiseTable { cumulative }
    }

    #[inline]
    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// One SGD step on a single pair. Negatives equal to `context` are skipped.
/// Returns the pair loss evaluated before the update.
#[inline]
#[allow(clippy::too_many_arguments)]
fn update_pair<T: Real>(
    input: &mut [T],
    output: &mut [T],
    dim: usize,
    center: usize,
    context: usize,
    negatives: &[usize],
    lr: T,
    grad: &mut [T],
) -> f64 {
    grad.iter_mut().for_each(|g| *g = T::zero());
    let c = &input[center * dim..(center + 1) * dim];
    let mut loss = T::zero();
    let targets = std::iter::once((context, true))
        .chain(negatives.iter().filter(|&&n| n != context).map(|&n| (n, false)));
    for (t, positive) in targets {
        let o = &mut output[t * dim..(t + 1) * dim];
        let f = dot(c, o);
        let (label, l) = if positive {
            (T::one(), -log_sigmoid(f))
        } else {
            (T::zero(), -log_sigmoid(-f))
        };
        loss += l;
        let g = (label - sigmoid(f)) * lr;
        for ((gd, od), &cd) in grad.iter_mut().zip(o.iter_mut()).zip(c) {
            *gd += g * *od;
            *od += g * cd;
        }
    }
    for (cd, gd) in input[center * dim..(center + 1) * dim].iter_mut().zip(grad.iter()) {
        *cd += *gd;
    }
    loss.as_f64()
}

struct Schedule {
    initial: f64,
    total_tokens: f64,
}

impl Schedule {
    #[inline]
    fn rate<T: Real>(&self, processed: usize) -> T {
        let frac = (1.0 - processed as f64 / self.total_tokens).max(MIN_LEARNING_RATE_FRACTION);
        T::of(self.initial * frac)
    }
}

#[allow(clippy::too_many_arguments)]
fn train_walks<T: Real>(
    walks: &[Vec<usize>],
    order: &[usize],
    input: &mut [T],
    output: &mut [T],
    dim: usize,
    cfg: &SkipGramConfig,
    noise: &NoiseTable,
    schedule: &Schedule,
    processed: &AtomicUsize,
    rng: &mut ChaCha8Rng,
) -> (f64, usize) {
    let mut grad = vec![T::zero(); dim];
    let mut negs = vec![0usize; cfg.negatives_per_positive];
    let (mut loss, mut pairs) = (0.0, 0usize);
    for &wi in order {
        let walk = &walks[wi];
        let start = processed.fetch_add(walk.len(), Ordering::Relaxed);
        for (i, &center) in walk.iter().enumerate() {
            let lr: T = schedule.rate(start + i);
            let b = rng.gen_range(1..=cfg.window);
            let lo = i.saturating_sub(b);
            let hi = (i + b + 1).min(walk.len());
            for (j, &context) in walk.iter().enumerate().take(hi).skip(lo) {
                if j == i {
                    continue;
                }
                for n in negs.iter_mut() {
                    *n = noise.sample(rng);
                }
                loss += update_pair(input, output, dim, center, context, &negs, lr, &mut grad);
                pairs += 1;
            }
        }
    }
    (loss, pairs)
}

/// Raw table shared by lock-free worker threads.
struct SharedTable<T> {
    ptr: *mut T,
    len: usize,
}

unsafe impl<T: Send> Send for SharedTable<T> {}
unsafe impl<T: Send> Sync for SharedTable<T> {}

impl<T> SharedTable<T> {
    /// # Safety
    /// Callers accept unsynchronized concurrent writes (Hogwild-style SGD).
    #[allow(clippy::mut_from_ref)]
    unsafe fn slice(&self) -> &mut [T] {
        std::slice::from_raw_parts_mut(self.ptr, self.len)
    }
}

pub fn train_skipgram<T: Real>(corpus: &WalkCorpus, dim: usize, cfg: &SkipGramConfig) -> Result<EmbeddingMatrix<T>> {
    train_skipgram_traced(corpus, dim, cfg).map(|(m, _)| m)
}

/// Trains SGNS vectors for every token of `corpus` and reports per-epoch losses.
pub fn train_skipgram_traced<T: Real>(
    corpus: &WalkCorpus,
    dim: usize,
    cfg: &SkipGramConfig,
) -> Result<(EmbeddingMatrix<T>, TrainingTrace)> {
    cfg.validate()?;
    if dim == 0 {
        return Err(Error::InvalidConfig("embedding dimension must be >= 1".into()));
    }
    let token_count = corpus.token_count();
    if token_count == 0 || corpus.vocabulary_size == 0 {
        return Err(Error::EmptyCorpus);
    }
    let vocab = corpus.vocabulary_size;
    let mut rng = stage_rng(cfg.seed, stage::SKIPGRAM);
    let scale = T::of(dim as f64);
    let mut input: Vec<T> = (0..vocab * dim)
        .map(|_| T::of(rng.gen::<f64>() - 0.5) / scale)
        .collect();
    let mut output = vec![T::zero(); vocab * dim];
    let noise = NoiseTable::new(&corpus.token_frequencies());
    let schedule = Schedule {
        initial: cfg.initial_learning_rate,
        total_tokens: (token_count * cfg.epochs.max(1)) as f64,
    };
    let processed = AtomicUsize::new(0);
    let mut trace = TrainingTrace::default();
    let mut order: Vec<usize> = (0..corpus.walks.len()).collect();

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let (loss, pairs) = if cfg.threads == 1 {
            train_walks(
                &corpus.walks, &order, &mut input, &mut output, dim, cfg, &noise, &schedule,
                &processed, &mut rng,
            )
        } else {
            let shared_in = SharedTable { ptr: input.as_mut_ptr(), len: input.len() };
            let shared_out = SharedTable { ptr: output.as_mut_ptr(), len: output.len() };
            let chunk = order.len().div_ceil(cfg.threads);
            std::thread::scope(|scope| {
                let handles: Vec<_> = order
                    .chunks(chunk.max(1))
                    .enumerate()
                    .map(|(t, part)| {
                        let (si, so) = (&shared_in, &shared_out);
                        let (noise, schedule, processed) = (&noise, &schedule, &processed);
                        let walks = &corpus.walks;
                        let seed = derive_seed(cfg.seed, ((epoch as u64) << 32) | t as u64);
                        scope.spawn(move || {
                            let mut rng = stage_rng(seed, stage::SKIPGRAM);
                            // SAFETY: Hogwild updates; races only perturb SGD steps.
                            let (inp, out) = unsafe { (si.slice(), so.slice()) };
                            train_walks(walks, part, inp, out, dim, cfg, noise, schedule, processed, &mut rng)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("skipgram worker panicked"))
                    .fold((0.0, 0), |(l, p), (l2, p2)| (l + l2, p + p2))
            })
        };
        trace.epoch_losses.push(if pairs == 0 { 0.0 } else { loss / pairs as f64 });
    }
    let matrix = EmbeddingMatrix::new(vocab, dim, input)?;
    Ok((matrix, trace))
}
