use super::dp::{expected_counts_from, ExpectedCounts, ProfileDp, Space};
use super::model::{slot_exists, ColumnTransitions, ProfileHmm, StateKind, TO_MATCH};
use crate::error::{Error, Result};
use crate::hmm::{em_converged, normalize_or_uniform, EmConfig};
use crate::matrix::Matrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileEmConfig {
    pub em: EmConfig,
    /// `None` picks linear or log space per sequence length.
    pub space: Option<Space>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEmReport {
    /// Total `ln P` of the sequences under the profile entering each iteration.
    pub loglik_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_profile: ProfileHmm,
    /// Columns with a state bundle or emission row that had no expected mass.
    pub degenerate_columns: Vec<usize>,
}

fn e_step(p: &ProfileHmm, seqs: &[Vec<usize>], space: Option<Space>) -> Result<(f64, ExpectedCounts)> {
    let per_seq: Vec<Result<(f64, ExpectedCounts)>> = seqs
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let s = space.unwrap_or_else(|| Space::for_length(x.len()));
            let dp = ProfileDp::compute(p, x, s)?;
            let counts = expected_counts_from(p, x, &dp, index)?;
            let ln_p = match s {
                Space::Linear => dp.total.ln(),
                Space::Log => dp.total,
            };
            Ok((ln_p, counts))
        })
        .collect();
    let mut total = ExpectedCounts::zeros(p.length(), p.alphabet_size());
    let mut loglik = 0.0;
    for r in per_seq {
        let (ll, c) = r?;
        loglik += ll;
        total.add(&c);
    }
    Ok((loglik, total))
}

/// Normalizes accumulated counts (plus `pseudocount`) into a new profile.
pub fn profile_m_step(
    template: &ProfileHmm,
    counts: &ExpectedCounts,
    pseudocount: f64,
) -> Result<(ProfileHmm, Vec<usize>)> {
    let l = template.length();
    let mut degenerate = Vec::new();
    let mut smooth = |m: &Matrix, offset: usize| -> Matrix {
        let mut out = m.clone();
        for r in 0..out.rows() {
            let row = out.row_mut(r);
            row.iter_mut().for_each(|x| *x += pseudocount);
            if !normalize_or_uniform(row) {
                degenerate.push(r + offset);
            }
        }
        out
    };
    let match_emit = smooth(&counts.match_emission, 1);
    let insert_emit = smooth(&counts.insert_emission, 0);
    let mut transitions = Vec::with_capacity(l + 1);
    for j in 0..=l {
        let mut col = ColumnTransitions {
            from_match: [0.0; 3],
            from_insert: [0.0; 3],
            from_delete: [0.0; 3],
        };
        for from in StateKind::ALL {
            if !slot_exists(l, j, from, TO_MATCH) {
                continue;
            }
            let allowed: Vec<usize> = (0..3).filter(|&to| slot_exists(l, j, from, to)).collect();
            let mut row: Vec<f64> = allowed.iter().map(|&to| counts.trans(j, from, to) + pseudocount).collect();
            if !normalize_or_uniform(&mut row) {
                degenerate.push(j);
            }
            let bundle = col.bundle_mut(from);
            for (&to, v) in allowed.iter().zip(row) {
                bundle[to] = v;
            }
        }
        transitions.push(col);
    }
    degenerate.sort_unstable();
    degenerate.dedup();
    let p = ProfileHmm::new(template.alphabet(), match_emit, insert_emit, transitions)?;
    Ok((p, degenerate))
}

pub fn profile_baum_welch(
    init: &ProfileHmm,
    sequences: &[Vec<usize>],
    cfg: &ProfileEmConfig,
) -> Result<ProfileEmReport> {
    cfg.em.validate()?;
    if sequences.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    for x in sequences {
        init.check_sequence(x)?;
    }
    let mut profile = init.clone();
    let mut trace = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    let mut converged = false;
    let mut degenerate = Vec::new();
    while trace.len() < cfg.em.max_iter && !converged {
        let (loglik, counts) = e_step(&profile, sequences, cfg.space)?;
        let (next, degen) = profile_m_step(&profile, &counts, cfg.em.pseudocount)?;
        profile = next;
        degenerate.extend(degen);
        converged = em_converged(loglik, previous, cfg.em.thresh);
        previous = loglik;
        trace.push(loglik);
    }
    degenerate.sort_unstable();
    degenerate.dedup();
    Ok(ProfileEmReport {
        iterations: trace.len(),
        loglik_trace: trace,
        converged,
        final_profile: profile,
        degenerate_columns: degenerate,
    })
}
