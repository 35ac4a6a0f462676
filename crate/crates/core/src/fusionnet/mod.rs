//! Two-branch fusion network.
//!
//! The text branch projects a sparse unigram one-hot through a learned
//! hidden layer: `h = relu(W1.x + b1)`. The image branch passes a fixed,
//! pre-extracted dense vector straight through. Both meet in a
//! concatenation layer `z = [h; avr]`, and the output layer maps
//! `relu(z)` to two-class probabilities with a softmax:
//!
//! ```text
//! p = softmax(W_out . relu([relu(W1.x + b1); avr]) + b_out)
//! ```
//!
//! In text-only or image-only operation the network keeps its full shape;
//! the absent branch contributes zeros to the concatenation layer.
//!
//! Training minimizes mean cross-entropy with Nesterov-momentum SGD:
//! gradients are evaluated at the lookahead point `theta + mu*v`, then
//! `v <- mu*v - lr*g` and `theta <- theta + v`. Zero momentum reduces to
//! plain SGD step for step. Minibatches are drawn without replacement in a
//! fresh seeded order each epoch, and training always runs the configured
//! number of epochs.

mod io;

pub use io::{read_checkpoint, write_checkpoint, Checkpoint};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which input branches are live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetMode {
    TextOnly,
    ImageOnly,
    Fusion,
}

/// Network shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetConfig {
    /// Unigram vocabulary size (text input dimension).
    pub text_vocab: usize,
    /// Hidden width of the text branch.
    pub hidden: usize,
    /// Dimension of the dense image vector.
    pub image_dim: usize,
}

impl NetConfig {
    /// Production shape: 512 hidden units over a 4096-dimensional image vector.
    pub fn with_defaults(text_vocab: usize) -> Self {
        NetConfig {
            text_vocab,
            hidden: 512,
            image_dim: 4096,
        }
    }

    pub fn concat_dim(&self) -> usize {
        self.hidden + self.image_dim
    }

    pub fn output_dim(&self) -> usize {
        2
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 {
            return Err(Error::InvalidConfig("hidden width must be positive".into()));
        }
        Ok(())
    }
}

/// Optimizer knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetTrainConfig {
    pub mode: NetMode,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub seed: u64,
}

impl Default for NetTrainConfig {
    fn default() -> Self {
        NetTrainConfig {
            mode: NetMode::Fusion,
            batch_size: 128,
            epochs: 30,
            learning_rate: 0.01,
            momentum: 0.9,
            seed: 0,
        }
    }
}

impl NetTrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidConfig(format!(
                "momentum must be in [0, 1), got {}",
                self.momentum
            )));
        }
        Ok(())
    }
}

/// One training or prediction input.
///
/// `text` holds the active unigram indices (presence one-hot), `avr` the
/// dense image vector. `label` is the class index: 0 non-sarcastic,
/// 1 sarcastic.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub text: Vec<usize>,
    pub avr: Vec<f64>,
    pub label: usize,
}

/// Offsets of the four tensors inside the flat parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ParamShape {
    w1: usize,    // text_vocab x hidden, row-major by input index
    b1: usize,    // hidden
    w_out: usize, // concat x 2, row-major by concat index
    b_out: usize, // 2
    total: usize,
}

impl ParamShape {
    fn of(cfg: &NetConfig) -> Self {
        let w1 = 0;
        let b1 = w1 + cfg.text_vocab * cfg.hidden;
        let w_out = b1 + cfg.hidden;
        let b_out = w_out + cfg.concat_dim() * 2;
        ParamShape {
            w1,
            b1,
            w_out,
            b_out,
            total: b_out + 2,
        }
    }
}

/// The network: shape, mode and one flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionNet {
    cfg: NetConfig,
    mode: NetMode,
    params: Vec<f64>,
}

/// Intermediate activations of one forward pass, kept for the backward pass.
struct Activations {
    a1: Vec<f64>,
    z: Vec<f64>,
    c: Vec<f64>,
    probs: [f64; 2],
}

fn softmax2(logits: [f64; 2]) -> [f64; 2] {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let s = e0 + e1;
    [e0 / s, e1 / s]
}

impl FusionNet {
    /// Fresh network with weights uniform in `(-1/sqrt(fan_in), +1/sqrt(fan_in))`
    /// and zero biases, drawn from `seed`.
    pub fn init(cfg: NetConfig, mode: NetMode, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(FusionNet::init_from_rng(cfg, mode, &mut rng))
    }

    fn init_from_rng(cfg: NetConfig, mode: NetMode, rng: &mut ChaCha8Rng) -> Self {
        let shape = ParamShape::of(&cfg);
        let mut params = vec![0.0; shape.total];
        if cfg.text_vocab > 0 {
            let bound = 1.0 / (cfg.text_vocab as f64).sqrt();
            for p in &mut params[shape.w1..shape.b1] {
                *p = rng.gen_range(-bound..bound);
            }
        }
        let bound = 1.0 / (cfg.concat_dim() as f64).sqrt();
        for p in &mut params[shape.w_out..shape.b_out] {
            *p = rng.gen_range(-bound..bound);
        }
        // Biases stay zero.
        FusionNet { cfg, mode, params }
    }

    pub fn config(&self) -> &NetConfig {
        &self.cfg
    }

    pub fn mode(&self) -> NetMode {
        self.mode
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Rebuilds a network from its parts (checkpoint loading, tests).
    pub fn from_params(cfg: NetConfig, mode: NetMode, params: Vec<f64>) -> Result<Self> {
        cfg.validate()?;
        let shape = ParamShape::of(&cfg);
        if params.len() != shape.total {
            return Err(Error::DimMismatch {
                expected: shape.total,
                got: params.len(),
            });
        }
        Ok(FusionNet { cfg, mode, params })
    }

    fn shape(&self) -> ParamShape {
        ParamShape::of(&self.cfg)
    }

    fn check_example(&self, text: &[usize], avr: &[f64]) -> Result<()> {
        let text_live = self.mode != NetMode::ImageOnly;
        let image_live = self.mode != NetMode::TextOnly;
        if text_live {
            if let Some(&bad) = text.iter().find(|&&i| i >= self.cfg.text_vocab) {
                return Err(Error::DimMismatch {
                    expected: self.cfg.text_vocab,
                    got: bad + 1,
                });
            }
        }
        if image_live && avr.len() != self.cfg.image_dim {
            return Err(Error::DimMismatch {
                expected: self.cfg.image_dim,
                got: avr.len(),
            });
        }
        // A dead branch accepts its input only when shaped correctly or absent.
        if !image_live && !avr.is_empty() && avr.len() != self.cfg.image_dim {
            return Err(Error::DimMismatch {
                expected: self.cfg.image_dim,
                got: avr.len(),
            });
        }
        Ok(())
    }

    fn forward_internal(&self, params: &[f64], text: &[usize], avr: &[f64]) -> Activations {
        let cfg = &self.cfg;
        let shape = self.shape();
        let text_live = self.mode != NetMode::ImageOnly;
        let image_live = self.mode != NetMode::TextOnly;

        // Text branch: a1 = W1.x + b1 over the active unigrams.
        let mut a1 = vec![0.0; cfg.hidden];
        if text_live {
            a1.copy_from_slice(&params[shape.b1..shape.b1 + cfg.hidden]);
            for &i in text {
                let row = shape.w1 + i * cfg.hidden;
                for (j, a) in a1.iter_mut().enumerate() {
                    *a += params[row + j];
                }
            }
        }

        // Concatenation layer; a dead branch contributes zeros.
        let mut z = vec![0.0; cfg.concat_dim()];
        if text_live {
            for j in 0..cfg.hidden {
                z[j] = a1[j].max(0.0);
            }
        }
        if image_live {
            z[cfg.hidden..].copy_from_slice(avr);
        }
        let c: Vec<f64> = z.iter().map(|&x| x.max(0.0)).collect();

        let mut logits = [
            params[shape.b_out],
            params[shape.b_out + 1],
        ];
        for (m, &cm) in c.iter().enumerate() {
            if cm != 0.0 {
                let row = shape.w_out + m * 2;
                logits[0] += params[row] * cm;
                logits[1] += params[row + 1] * cm;
            }
        }
        Activations {
            a1,
            z,
            c,
            probs: softmax2(logits),
        }
    }

    /// Class probabilities `[p(non-sarcastic), p(sarcastic)]`.
    pub fn forward(&self, text: &[usize], avr: &[f64]) -> Result<[f64; 2]> {
        self.check_example(text, avr)?;
        Ok(self.forward_internal(&self.params, text, avr).probs)
    }

    /// Predicted class index (ties resolve to 0).
    pub fn predict(&self, text: &[usize], avr: &[f64]) -> Result<usize> {
        let p = self.forward(text, avr)?;
        Ok(if p[1] > p[0] { 1 } else { 0 })
    }

    /// Mean cross-entropy over `batch` and its gradient with respect to
    /// every parameter, evaluated at `at` (defaults to the current
    /// parameters). Gradients of a dead branch are zero by construction.
    pub fn loss_and_grads(&self, batch: &[Example], at: Option<&[f64]>) -> Result<(f64, Vec<f64>)> {
        if batch.is_empty() {
            return Err(Error::EmptyInput("batch"));
        }
        let params = at.unwrap_or(&self.params);
        if params.len() != self.params.len() {
            return Err(Error::DimMismatch {
                expected: self.params.len(),
                got: params.len(),
            });
        }
        let cfg = &self.cfg;
        let shape = self.shape();
        let text_live = self.mode != NetMode::ImageOnly;
        let mut loss = 0.0;
        let mut grads = vec![0.0; params.len()];
        for ex in batch {
            if ex.label > 1 {
                return Err(Error::InvalidConfig(format!(
                    "label must be 0 or 1, got {}",
                    ex.label
                )));
            }
            self.check_example(&ex.text, &ex.avr)?;
            let acts = self.forward_internal(params, &ex.text, &ex.avr);
            let p_true = acts.probs[ex.label].max(f64::MIN_POSITIVE);
            loss -= p_true.ln();

            // d loss / d logits = p - onehot(y).
            let mut dlogits = acts.probs;
            dlogits[ex.label] -= 1.0;

            grads[shape.b_out] += dlogits[0];
            grads[shape.b_out + 1] += dlogits[1];

            // Output weights and the gradient flowing back into relu(z).
            let mut dz = vec![0.0; cfg.concat_dim()];
            for m in 0..cfg.concat_dim() {
                let row = shape.w_out + m * 2;
                let cm = acts.c[m];
                if cm != 0.0 {
                    grads[row] += cm * dlogits[0];
                    grads[row + 1] += cm * dlogits[1];
                }
                if acts.z[m] > 0.0 {
                    dz[m] = params[row] * dlogits[0] + params[row + 1] * dlogits[1];
                }
            }

            // Text branch: through the inner relu into W1 and b1.
            if text_live {
                for j in 0..cfg.hidden {
                    if acts.a1[j] > 0.0 {
                        let da = dz[j];
                        grads[shape.b1 + j] += da;
                        for &i in &ex.text {
                            grads[shape.w1 + i * cfg.hidden + j] += da;
                        }
                    }
                }
            }
            // Image branch has no parameters.
        }
        let scale = 1.0 / batch.len() as f64;
        loss *= scale;
        for g in &mut grads {
            *g *= scale;
        }
        Ok((loss, grads))
    }
}

/// Per-run training diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct NetTrainSummary {
    /// Mean full-dataset loss after each epoch.
    pub loss_by_epoch: Vec<f64>,
}

/// Trains a fresh network on `dataset`.
///
/// Initialization, shuffling and batching all derive from `cfg.seed`, so a
/// run is bit-reproducible. Both classes must be present.
pub fn train(
    dataset: &[Example],
    net_cfg: NetConfig,
    cfg: &NetTrainConfig,
) -> Result<(FusionNet, NetTrainSummary)> {
    cfg.validate()?;
    net_cfg.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyInput("training examples"));
    }
    let has0 = dataset.iter().any(|e| e.label == 0);
    let has1 = dataset.iter().any(|e| e.label == 1);
    if !(has0 && has1) {
        return Err(Error::DegenerateLabels);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let net = FusionNet::init_from_rng(net_cfg, cfg.mode, &mut rng);
    // Validate the whole dataset once before any arithmetic.
    for ex in dataset {
        net.check_example(&ex.text, &ex.avr)?;
        if ex.label > 1 {
            return Err(Error::InvalidConfig(format!(
                "label must be 0 or 1, got {}",
                ex.label
            )));
        }
    }

    let mut net = net;
    let mut velocity = vec![0.0; net.params.len()];
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut lookahead = vec![0.0; net.params.len()];
    let mut loss_by_epoch = Vec::with_capacity(cfg.epochs);
    let mut batch: Vec<Example> = Vec::with_capacity(cfg.batch_size);

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| dataset[i].clone()));
            // Gradient at the lookahead point theta + mu*v.
            for ((l, &p), &v) in lookahead
                .iter_mut()
                .zip(net.params.iter())
                .zip(velocity.iter())
            {
                *l = p + cfg.momentum * v;
            }
            let (_, grads) = net.loss_and_grads(&batch, Some(&lookahead))?;
            for ((v, &g), p) in velocity
                .iter_mut()
                .zip(grads.iter())
                .zip(net.params.iter_mut())
            {
                *v = cfg.momentum * *v - cfg.learning_rate * g;
                *p += *v;
            }
        }
        let (loss, _) = net.loss_and_grads(dataset, None)?;
        loss_by_epoch.push(loss);
    }
    Ok((net, NetTrainSummary { loss_by_epoch }))
}
