//! Forward/backward recursions and per-position posteriors.
//!
//! In scaled mode each forward row is normalized by its mass
//! `c_t = P(O_t | O_1..O_{t-1})`, so `ln P(O) = sum_t ln c_t`. Backward rows
//! are divided by the same `c_{t+1}`, which makes `alpha_t(i) * beta_t(i)`
//! the posterior `gamma_t(i)` directly.

use super::model::DiscreteHmm;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    #[default]
    Scaled,
    /// Raw probabilities; underflows on long sequences. Meant for checks.
    Unscaled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass {
    pub alpha: Matrix,
    /// Per-step normalizers; all ones when unscaled.
    pub scale: Vec<f64>,
    pub loglik: f64,
    pub scaling: Scaling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    pub alpha: Matrix,
    pub beta: Matrix,
    pub scale: Vec<f64>,
    pub gamma: Matrix,
    pub loglik: f64,
}

pub fn forward(model: &DiscreteHmm, obs: &[usize], scaling: Scaling) -> Result<ForwardPass> {
    model.check_obs(obs)?;
    let n = model.n_states();
    let t_len = obs.len();
    let (pi, trans, emit) = (model.pi(), model.trans(), model.emit());
    let mut alpha = Matrix::filled(t_len, n, 0.0);
    let mut scale = vec![1.0; t_len];

    for i in 0..n {
        alpha[(0, i)] = pi[i] * emit[(i, obs[0])];
    }
    for t in 0..t_len {
        if t > 0 {
            for j in 0..n {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += alpha[(t - 1, i)] * trans[(i, j)];
                }
                alpha[(t, j)] = acc * emit[(j, obs[t])];
            }
        }
        let mass: f64 = alpha.row(t).iter().sum();
        if mass == 0.0 {
            return Err(Error::ZeroProbabilityObservation { t });
        }
        if scaling == Scaling::Scaled {
            scale[t] = mass;
            alpha.row_mut(t).iter_mut().for_each(|a| *a /= mass);
        }
    }

    let loglik = match scaling {
        Scaling::Scaled => scale.iter().map(|c| c.ln()).sum(),
        Scaling::Unscaled => alpha.row(t_len - 1).iter().sum::<f64>().ln(),
    };
    Ok(ForwardPass {
        alpha,
        scale,
        loglik,
        scaling,
    })
}

/// Backward table. With `scale`, row `t` is divided by `scale[t + 1]`;
/// without it the values are the raw `beta_t(i)`.
pub fn backward(model: &DiscreteHmm, obs: &[usize], scale: Option<&[f64]>) -> Result<Matrix> {
    model.check_obs(obs)?;
    let t_len = obs.len();
    if let Some(s) = scale {
        if s.len() != t_len {
            return Err(Error::ShapeMismatch {
                expected: t_len,
                actual: s.len(),
            });
        }
    }
    let n = model.n_states();
    let (trans, emit) = (model.trans(), model.emit());
    let mut beta = Matrix::filled(t_len, n, 0.0);
    beta.row_mut(t_len - 1).fill(1.0);
    let mut weighted = vec![0.0; n];
    for t in (0..t_len - 1).rev() {
        for j in 0..n {
            weighted[j] = emit[(j, obs[t + 1])] * beta[(t + 1, j)];
        }
        let norm = scale.map_or(1.0, |s| s[t + 1]);
        for i in 0..n {
            let acc: f64 = (0..n).map(|j| trans[(i, j)] * weighted[j]).sum();
            beta[(t, i)] = acc / norm;
        }
    }
    Ok(beta)
}

/// Scaled forward-backward with gamma rows normalized to one.
pub fn posterior(model: &DiscreteHmm, obs: &[usize]) -> Result<PosteriorTable> {
    let fwd = forward(model, obs, Scaling::Scaled)?;
    let beta = backward(model, obs, Some(&fwd.scale))?;
    let n = model.n_states();
    let mut gamma = Matrix::filled(obs.len(), n, 0.0);
    for t in 0..obs.len() {
        let row = gamma.row_mut(t);
        for i in 0..n {
            row[i] = fwd.alpha[(t, i)] * beta[(t, i)];
        }
        let mass: f64 = row.iter().sum();
        if mass == 0.0 {
            return Err(Error::ZeroProbabilityObservation { t });
        }
        row.iter_mut().for_each(|g| *g /= mass);
    }
    Ok(PosteriorTable {
        alpha: fwd.alpha,
        beta,
        scale: fwd.scale,
        gamma,
        loglik: fwd.loglik,
    })
}

/// Index of the largest entry; the lowest index wins ties.
pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// Individually most likely state at every position.
pub fn decode_posterior(model: &DiscreteHmm, obs: &[usize]) -> Result<Vec<usize>> {
    let post = posterior(model, obs)?;
    Ok(post.gamma.iter_rows().map(argmax).collect())
}

/// Expected sufficient statistics of one sequence.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SequenceStats {
    pub loglik: f64,
    pub first: Vec<f64>,
    pub trans: Matrix,
    pub emit: Matrix,
}

pub(crate) fn sequence_stats(model: &DiscreteHmm, obs: &[usize]) -> Result<SequenceStats> {
    let post = posterior(model, obs)?;
    let n = model.n_states();
    let (trans, emit) = (model.trans(), model.emit());
    let mut xi_sum = Matrix::filled(n, n, 0.0);
    let mut emit_counts = Matrix::filled(n, model.n_symbols(), 0.0);
    for t in 0..obs.len() {
        for i in 0..n {
            emit_counts[(i, obs[t])] += post.gamma[(t, i)];
        }
        if t + 1 < obs.len() {
            let c = post.scale[t + 1];
            for i in 0..n {
                let a = post.alpha[(t, i)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    xi_sum[(i, j)] +=
                        a * trans[(i, j)] * emit[(j, obs[t + 1])] * post.beta[(t + 1, j)] / c;
                }
            }
        }
    }
    Ok(SequenceStats {
        loglik: post.loglik,
        first: post.gamma.row(0).to_vec(),
        trans: xi_sum,
        emit: emit_counts,
    })
}
