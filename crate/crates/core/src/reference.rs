//! Slow reference implementations used to validate the trainers.
//!
//! Each function recomputes something the fast paths compute, by a
//! different route: the classifier by projected gradient ascent on its
//! dual with a global safe step, the network by a direct dense forward
//! pass over the flat parameter vector. Tests compare the two routes.
//! Nothing here is tuned for speed.

use crate::error::{Error, Result};
use crate::featvec::FeatureVector;
use crate::fusionnet::{Example, NetConfig, NetMode};

/// The regularized hinge objective
/// `0.5 * (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w.x_i + b))`,
/// computed from scratch. The bias is regularized, matching its treatment
/// as an appended constant feature.
pub fn svm_objective_reference(
    weights: &[f64],
    bias: f64,
    inputs: &[FeatureVector],
    labels: &[i8],
    c: f64,
) -> f64 {
    let reg = 0.5 * (weights.iter().map(|w| w * w).sum::<f64>() + bias * bias);
    let mut hinge = 0.0;
    for (v, &l) in inputs.iter().zip(labels) {
        let y = if l > 0 { 1.0 } else { -1.0 };
        let x = v.to_dense();
        let margin = y * (weights.iter().zip(&x).map(|(w, xi)| w * xi).sum::<f64>() + bias);
        hinge += (1.0 - margin).max(0.0);
    }
    reg + c * hinge
}

/// Trains the hinge-loss classifier by projected subgradient descent on
/// the primal, with the decreasing step schedule for strongly convex
/// objectives and projection onto a ball known to contain the optimum.
/// Returns the `(weights, bias)` of the best iterate seen.
pub fn svm_train_reference(
    inputs: &[FeatureVector],
    labels: &[i8],
    c: f64,
    iters: usize,
) -> Result<(Vec<f64>, f64)> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput("training inputs"));
    }
    if inputs.len() != labels.len() {
        return Err(Error::DimMismatch {
            expected: inputs.len(),
            got: labels.len(),
        });
    }
    let n = inputs.len();
    let x: Vec<Vec<f64>> = inputs
        .iter()
        .map(|v| {
            let mut d = v.to_dense();
            d.push(1.0); // bias feature
            d
        })
        .collect();
    let dim = x[0].len();
    let y: Vec<f64> = labels.iter().map(|&l| if l > 0 { 1.0 } else { -1.0 }).collect();

    // In the per-example scaling the objective is
    // (lambda/2)|w|^2 + (1/n) sum hinge with lambda = 1/(nC); at w = 0 it
    // is 1, so |w*| <= sqrt(2/lambda) bounds the optimum.
    let lambda = 1.0 / (n as f64 * c);
    let radius = (2.0 / lambda).sqrt();

    let objective = |w: &[f64]| -> f64 {
        let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        let hinge: f64 = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| {
                let m = yi * w.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>();
                (1.0 - m).max(0.0)
            })
            .sum();
        reg + c * hinge
    };

    let mut w = vec![0.0; dim];
    let mut best_w = w.clone();
    let mut best_obj = objective(&w);
    for t in 0..iters {
        // Subgradient of the scaled objective at w.
        let mut g: Vec<f64> = w.iter().map(|v| lambda * v).collect();
        for (xi, yi) in x.iter().zip(&y) {
            let m = yi * w.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>();
            if m < 1.0 {
                for (gj, xj) in g.iter_mut().zip(xi) {
                    *gj -= yi * xj / n as f64;
                }
            }
        }
        let eta = 1.0 / (lambda * (t + 1) as f64);
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= eta * gj;
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            let scale = radius / norm;
            for wj in &mut w {
                *wj *= scale;
            }
        }
        let obj = objective(&w);
        if obj < best_obj {
            best_obj = obj;
            best_w.copy_from_slice(&w);
        }
    }
    let bias = best_w.pop().expect("bias feature present");
    Ok((best_w, bias))
}

fn net_concat(
    cfg: &NetConfig,
    mode: NetMode,
    params: &[f64],
    text: &[usize],
    avr: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let v = cfg.text_vocab;
    let h = cfg.hidden;
    let mut a1 = vec![0.0; h];
    if mode != NetMode::ImageOnly {
        for (j, a) in a1.iter_mut().enumerate() {
            *a = params[v * h + j];
        }
        for &i in text {
            for (j, a) in a1.iter_mut().enumerate() {
                *a += params[i * h + j];
            }
        }
    }
    let mut concat = vec![0.0; cfg.concat_dim()];
    if mode != NetMode::ImageOnly {
        for j in 0..h {
            concat[j] = a1[j].max(0.0);
        }
    }
    if mode != NetMode::TextOnly {
        for (m, &x) in avr.iter().enumerate() {
            concat[h + m] = x.max(0.0);
        }
    }
    (a1, concat)
}

/// Class probabilities computed directly from the flat parameter vector.
pub fn net_probs_reference(
    cfg: &NetConfig,
    mode: NetMode,
    params: &[f64],
    text: &[usize],
    avr: &[f64],
) -> [f64; 2] {
    let w_out_base = cfg.text_vocab * cfg.hidden + cfg.hidden;
    let b_out_base = w_out_base + cfg.concat_dim() * 2;
    let (_, concat) = net_concat(cfg, mode, params, text, avr);
    let mut logits = [params[b_out_base], params[b_out_base + 1]];
    for (m, &cm) in concat.iter().enumerate() {
        logits[0] += params[w_out_base + m * 2] * cm;
        logits[1] += params[w_out_base + m * 2 + 1] * cm;
    }
    let e0 = (logits[0] - logits[0].max(logits[1])).exp();
    let e1 = (logits[1] - logits[0].max(logits[1])).exp();
    [e0 / (e0 + e1), e1 / (e0 + e1)]
}

/// Mean cross-entropy of `batch`, computed via [`net_probs_reference`].
pub fn net_loss_reference(
    cfg: &NetConfig,
    mode: NetMode,
    params: &[f64],
    batch: &[Example],
) -> f64 {
    let mut total = 0.0;
    for ex in batch {
        let p = net_probs_reference(cfg, mode, params, &ex.text, &ex.avr);
        total -= p[ex.label].max(f64::MIN_POSITIVE).ln();
    }
    total / batch.len() as f64
}

/// Smallest distance from any hidden pre-activation to its kink, over the
/// whole batch. Finite-difference checks need this to be comfortably larger
/// than the probe step; image coordinates enter the concat layer as
/// constants and cannot produce parameter-space kinks.
pub fn net_kink_margin(
    cfg: &NetConfig,
    mode: NetMode,
    params: &[f64],
    batch: &[Example],
) -> f64 {
    if mode == NetMode::ImageOnly {
        return f64::INFINITY;
    }
    let mut margin = f64::INFINITY;
    for ex in batch {
        let (a1, _) = net_concat(cfg, mode, params, &ex.text, &ex.avr);
        for a in a1 {
            margin = margin.min(a.abs());
        }
    }
    margin
}
