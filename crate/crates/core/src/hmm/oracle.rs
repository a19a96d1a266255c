//! Exhaustive path enumeration for small instances.
//!
//! These routines share no code with the dynamic programs they check: every
//! one of the `N^T` hidden paths is scored by direct multiplication.

use super::model::DiscreteHmm;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest number of paths the enumerators will visit.
pub const MAX_PATHS: f64 = 1e7;

fn guard(model: &DiscreteHmm, obs: &[usize]) -> Result<()> {
    model.check_obs(obs)?;
    let paths = (model.n_states() as f64).powi(obs.len() as i32);
    if paths > MAX_PATHS {
        return Err(Error::InstanceTooLarge {
            paths,
            limit: MAX_PATHS,
        });
    }
    Ok(())
}

/// Calls `f(path)` for every hidden path, in lexicographic order.
fn for_each_path(n_states: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut path = vec![0usize; len];
    loop {
        f(&path);
        // odometer increment, last position fastest
        let mut t = len;
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            path[t] += 1;
            if path[t] < n_states {
                break;
            }
            path[t] = 0;
        }
    }
}

/// `P(O) = sum over all paths Q of P(O | Q) P(Q)`.
pub fn brute_force_prob(model: &DiscreteHmm, obs: &[usize]) -> Result<f64> {
    guard(model, obs)?;
    let mut total = 0.0;
    for_each_path(model.n_states(), obs.len(), |q| total += model.joint_prob(q, obs));
    Ok(total)
}

/// Posterior state marginals `P(q_t = i | O)` by enumeration.
pub fn brute_force_posterior(model: &DiscreteHmm, obs: &[usize]) -> Result<Matrix> {
    guard(model, obs)?;
    let n = model.n_states();
    let mut mass = Matrix::filled(obs.len(), n, 0.0);
    let mut total = 0.0;
    for_each_path(n, obs.len(), |q| {
        let p = model.joint_prob(q, obs);
        total += p;
        for (t, &s) in q.iter().enumerate() {
            mass[(t, s)] += p;
        }
    });
    if total == 0.0 {
        return Err(Error::ZeroSequenceProbability { index: 0 });
    }
    mass.as_mut_slice().iter_mut().for_each(|m| *m /= total);
    Ok(mass)
}

/// Highest-probability path and its probability. The first maximum found
/// in lexicographic order is kept, so ties resolve to the smallest path.
pub fn brute_force_best_path(model: &DiscreteHmm, obs: &[usize]) -> Result<(Vec<usize>, f64)> {
    guard(model, obs)?;
    let mut best = (vec![0; obs.len()], -1.0);
    for_each_path(model.n_states(), obs.len(), |q| {
        let p = model.joint_prob(q, obs);
        if p > best.1 {
            best = (q.to_vec(), p);
        }
    });
    Ok(best)
}
