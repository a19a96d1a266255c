use super::model::DiscreteHmm;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ViterbiResult {
    pub path: Vec<usize>,
    /// `ln` of the joint probability of `path` and the observations.
    pub log_prob: f64,
    /// Best predecessor of each state at each step (row 0 is unused).
    pub backpointers: Matrix<usize>,
}

/// Most probable hidden path, computed in log space.
///
/// The delta/backpointer recursion supplies the optimum; the path itself is
/// rebuilt front to back from best-suffix scores so that, among equally
/// probable paths, the lexicographically smallest one is returned.
pub fn viterbi(model: &DiscreteHmm, obs: &[usize]) -> Result<ViterbiResult> {
    model.check_obs(obs)?;
    let n = model.n_states();
    let t_len = obs.len();
    let ln_pi: Vec<f64> = model.pi().iter().map(|p| p.ln()).collect();
    let ln_a: Vec<f64> = model.trans().as_slice().iter().map(|p| p.ln()).collect();
    let ln_b = |j: usize, t: usize| model.emit()[(j, obs[t])].ln();

    let mut delta = vec![f64::NEG_INFINITY; n];
    let mut next = vec![f64::NEG_INFINITY; n];
    let mut backpointers = Matrix::filled(t_len, n, 0usize);
    for j in 0..n {
        delta[j] = ln_pi[j] + ln_b(j, 0);
    }
    for t in 1..t_len {
        for j in 0..n {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for i in 0..n {
                let v = delta[i] + ln_a[i * n + j];
                if v > best {
                    best = v;
                    arg = i;
                }
            }
            next[j] = best + ln_b(j, t);
            backpointers[(t, j)] = arg;
        }
        std::mem::swap(&mut delta, &mut next);
    }
    let log_prob = delta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if log_prob == f64::NEG_INFINITY {
        return Err(Error::AllPathsZero);
    }

    // psi[t][i]: best log score of observations t+1.. given state i at t
    let mut psi = Matrix::filled(t_len, n, 0.0);
    for t in (0..t_len - 1).rev() {
        for i in 0..n {
            psi[(t, i)] = (0..n)
                .map(|j| ln_a[i * n + j] + ln_b(j, t + 1) + psi[(t + 1, j)])
                .fold(f64::NEG_INFINITY, f64::max);
        }
    }
    let mut path = Vec::with_capacity(t_len);
    let first_scores: Vec<f64> = (0..n).map(|i| ln_pi[i] + ln_b(i, 0) + psi[(0, i)]).collect();
    path.push(first_best(&first_scores));
    for t in 1..t_len {
        let prev = path[t - 1];
        let scores: Vec<f64> = (0..n)
            .map(|j| ln_a[prev * n + j] + ln_b(j, t) + psi[(t, j)])
            .collect();
        path.push(first_best(&scores));
    }
    Ok(ViterbiResult {
        path,
        log_prob,
        backpointers,
    })
}

fn first_best(scores: &[f64]) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().position(|&s| s == best).unwrap_or(0)
}

/// Path recovered by following backpointers from the best final state.
pub fn backtrack(result: &ViterbiResult, final_state: usize) -> Vec<usize> {
    let t_len = result.backpointers.rows();
    let mut path = vec![0; t_len];
    path[t_len - 1] = final_state;
    for t in (1..t_len).rev() {
        path[t - 1] = result.backpointers[(t, path[t])];
    }
    path
}
