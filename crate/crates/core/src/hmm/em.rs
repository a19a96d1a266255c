//! Baum-Welch re-estimation for discrete HMMs.

use super::inference::{sequence_stats, SequenceStats};
use super::model::DiscreteHmm;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    pub max_iter: usize,
    pub thresh: f64,
    /// Added to every expected emission count before renormalizing.
    pub pseudocount: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            max_iter: 15,
            thresh: 1e-4,
            pseudocount: 0.0,
        }
    }
}

impl EmConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.pseudocount >= 0.0 && self.pseudocount.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "pseudocount must be a finite non-negative number, got {}",
                self.pseudocount
            )));
        }
        if !(self.thresh >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid threshold {}", self.thresh)));
        }
        Ok(())
    }
}

/// `|LL - prev| / (1 + |LL|) < thresh`; never true on the first iteration.
pub fn em_converged(loglik: f64, previous: f64, thresh: f64) -> bool {
    if !previous.is_finite() {
        return false;
    }
    (loglik - previous).abs() / (1.0 + loglik.abs()) < thresh
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmReport {
    /// Log-likelihood of the data under the model entering each iteration.
    pub loglik_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_model: DiscreteHmm,
    /// States whose rows were reset to uniform for lack of expected mass.
    pub degenerate_states: Vec<usize>,
}

impl EmReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Expected counts summed over sequences in input order.
fn accumulate(model: &DiscreteHmm, data: &[Vec<usize>], pseudocount: f64) -> Result<SequenceStats> {
    let per_seq: Vec<Result<SequenceStats>> =
        data.par_iter().map(|obs| sequence_stats(model, obs)).collect();
    let (n, m) = (model.n_states(), model.n_symbols());
    let mut total = SequenceStats {
        loglik: 0.0,
        first: vec![0.0; n],
        trans: Matrix::filled(n, n, 0.0),
        emit: Matrix::filled(n, m, pseudocount),
    };
    for (index, stats) in per_seq.into_iter().enumerate() {
        let s = stats.map_err(|e| match e {
            Error::ZeroProbabilityObservation { .. } => Error::ZeroSequenceProbability { index },
            other => other,
        })?;
        total.loglik += s.loglik;
        total.first.iter_mut().zip(&s.first).for_each(|(a, b)| *a += b);
        let add = |dst: &mut Matrix, src: &Matrix| {
            dst.as_mut_slice()
                .iter_mut()
                .zip(src.as_slice())
                .for_each(|(a, b)| *a += b)
        };
        add(&mut total.trans, &s.trans);
        add(&mut total.emit, &s.emit);
    }
    Ok(total)
}

/// Normalizes `row` in place; returns false (and leaves it uniform) when it has no mass.
pub(crate) fn normalize_or_uniform(row: &mut [f64]) -> bool {
    let sum: f64 = row.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        row.iter_mut().for_each(|x| *x /= sum);
        true
    } else {
        let u = 1.0 / row.len() as f64;
        row.fill(u);
        false
    }
}

pub fn baum_welch(init: &DiscreteHmm, data: &[Vec<usize>], cfg: &EmConfig) -> Result<EmReport> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    for obs in data {
        init.check_obs(obs)?;
    }
    let mut model = init.clone();
    let mut trace = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    let mut converged = false;
    let mut degenerate = Vec::new();

    while trace.len() < cfg.max_iter && !converged {
        let mut stats = accumulate(&model, data, cfg.pseudocount)?;
        let n = model.n_states();
        let mut pi = stats.first;
        normalize_or_uniform(&mut pi);
        for i in 0..n {
            let ok_trans = normalize_or_uniform(stats.trans.row_mut(i));
            let ok_emit = normalize_or_uniform(stats.emit.row_mut(i));
            if !(ok_trans && ok_emit) && !degenerate.contains(&i) {
                degenerate.push(i);
            }
        }
        model = DiscreteHmm::new(pi, stats.trans, stats.emit)?
            .with_labels(
                init.state_labels().map(<[String]>::to_vec),
                init.symbol_labels().map(<[String]>::to_vec),
            )?;
        converged = em_converged(stats.loglik, previous, cfg.thresh);
        previous = stats.loglik;
        trace.push(stats.loglik);
    }
    degenerate.sort_unstable();
    Ok(EmReport {
        iterations: trace.len(),
        loglik_trace: trace,
        converged,
        final_model: model,
        degenerate_states: degenerate,
    })
}
