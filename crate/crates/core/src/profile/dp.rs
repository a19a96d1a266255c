//! Forward/backward lattices and expected counts for profile HMMs.
//!
//! Lattices are `(m+1) x (L+1)`: row `i` is the number of symbols consumed,
//! column `j` the model column. `f_M[0][0] = 1` is the begin state.

use super::model::{ProfileHmm, StateKind, TO_DELETE, TO_INSERT, TO_MATCH};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use serde::{Deserialize, Serialize};

/// Number representation used by the lattices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Plain probabilities. Exact to rounding, but underflows on long inputs.
    #[default]
    Linear,
    /// Natural logarithms.
    Log,
}

impl Space {
    /// Linear for short inputs, log beyond 200 symbols.
    pub fn for_length(len: usize) -> Space {
        if len > 200 {
            Space::Log
        } else {
            Space::Linear
        }
    }
}

trait Domain {
    const ZERO: f64;
    const ONE: f64;
    fn lift(p: f64) -> f64;
    fn mul(a: f64, b: f64) -> f64;
    fn add(a: f64, b: f64) -> f64;
    /// `a / b` returned as a plain number.
    fn ratio(a: f64, b: f64) -> f64;
}

struct Linear;
struct Log;

impl Domain for Linear {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;
    #[inline]
    fn lift(p: f64) -> f64 {
        p
    }
    #[inline]
    fn mul(a: f64, b: f64) -> f64 {
        a * b
    }
    #[inline]
    fn add(a: f64, b: f64) -> f64 {
        a + b
    }
    #[inline]
    fn ratio(a: f64, b: f64) -> f64 {
        a / b
    }
}

impl Domain for Log {
    const ZERO: f64 = f64::NEG_INFINITY;
    const ONE: f64 = 0.0;
    #[inline]
    fn lift(p: f64) -> f64 {
        p.ln()
    }
    #[inline]
    fn mul(a: f64, b: f64) -> f64 {
        a + b
    }
    #[inline]
    fn add(a: f64, b: f64) -> f64 {
        if a == f64::NEG_INFINITY {
            return b;
        }
        if b == f64::NEG_INFINITY {
            return a;
        }
        let hi = a.max(b);
        hi + ((a - hi).exp() + (b - hi).exp()).ln()
    }
    #[inline]
    fn ratio(a: f64, b: f64) -> f64 {
        (a - b).exp()
    }
}

/// Match, insert and delete tables of one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub space: Space,
    pub matches: Matrix,
    pub inserts: Matrix,
    pub deletes: Matrix,
}

impl Lattice {
    fn new(space: Space, rows: usize, cols: usize, zero: f64) -> Self {
        Lattice {
            space,
            matches: Matrix::filled(rows, cols, zero),
            inserts: Matrix::filled(rows, cols, zero),
            deletes: Matrix::filled(rows, cols, zero),
        }
    }

    pub fn get(&self, kind: StateKind, i: usize, j: usize) -> f64 {
        match kind {
            StateKind::Match => self.matches[(i, j)],
            StateKind::Insert => self.inserts[(i, j)],
            StateKind::Delete => self.deletes[(i, j)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileForward {
    pub lattice: Lattice,
    /// `P(x)` in the lattice's space (a probability, or its logarithm).
    pub total: f64,
}

impl ProfileForward {
    pub fn ln_prob(&self) -> f64 {
        match self.lattice.space {
            Space::Linear => self.total.ln(),
            Space::Log => self.total,
        }
    }
}

fn forward_in<D: Domain>(p: &ProfileHmm, x: &[usize], space: Space) -> ProfileForward {
    let (m, l) = (x.len(), p.length());
    let mut f = Lattice::new(space, m + 1, l + 1, D::ZERO);
    let t = |j, from, to| D::lift(p.trans(j, from, to));
    f.matches[(0, 0)] = D::ONE;

    for i in 0..=m {
        for j in 0..=l {
            if i >= 1 {
                let sym = x[i - 1];
                if j >= 1 {
                    let into = [StateKind::Match, StateKind::Insert, StateKind::Delete]
                        .iter()
                        .fold(D::ZERO, |acc, &k| {
                            D::add(acc, D::mul(f.get(k, i - 1, j - 1), t(j - 1, k, TO_MATCH)))
                        });
                    f.matches[(i, j)] = D::mul(D::lift(p.match_emission(j, sym)), into);
                }
                let into = StateKind::ALL.iter().fold(D::ZERO, |acc, &k| {
                    D::add(acc, D::mul(f.get(k, i - 1, j), t(j, k, TO_INSERT)))
                });
                f.inserts[(i, j)] = D::mul(D::lift(p.insert_emission(j, sym)), into);
            }
            if j >= 1 {
                f.deletes[(i, j)] = StateKind::ALL.iter().fold(D::ZERO, |acc, &k| {
                    D::add(acc, D::mul(f.get(k, i, j - 1), t(j - 1, k, TO_DELETE)))
                });
            }
        }
    }
    let total = StateKind::ALL.iter().fold(D::ZERO, |acc, &k| {
        D::add(acc, D::mul(f.get(k, m, l), t(l, k, TO_MATCH)))
    });
    ProfileForward { lattice: f, total }
}

fn backward_in<D: Domain>(p: &ProfileHmm, x: &[usize], space: Space) -> Lattice {
    let (m, l) = (x.len(), p.length());
    let mut b = Lattice::new(space, m + 1, l + 1, D::ZERO);
    let t = |j, from, to| D::lift(p.trans(j, from, to));

    for i in (0..=m).rev() {
        for j in (0..=l).rev() {
            for from in StateKind::ALL {
                if j == 0 && from == StateKind::Delete {
                    continue;
                }
                let mut acc = D::ZERO;
                if i == m && j == l {
                    acc = t(l, from, TO_MATCH);
                }
                if i < m {
                    let next = x[i];
                    if j < l {
                        acc = D::add(
                            acc,
                            D::mul(
                                D::mul(b.matches[(i + 1, j + 1)], t(j, from, TO_MATCH)),
                                D::lift(p.match_emission(j + 1, next)),
                            ),
                        );
                    }
                    acc = D::add(
                        acc,
                        D::mul(
                            D::mul(b.inserts[(i + 1, j)], t(j, from, TO_INSERT)),
                            D::lift(p.insert_emission(j, next)),
                        ),
                    );
                }
                if j < l {
                    acc = D::add(acc, D::mul(b.deletes[(i, j + 1)], t(j, from, TO_DELETE)));
                }
                match from {
                    StateKind::Match => b.matches[(i, j)] = acc,
                    StateKind::Insert => b.inserts[(i, j)] = acc,
                    StateKind::Delete => b.deletes[(i, j)] = acc,
                }
            }
        }
    }
    b
}

pub fn profile_forward(p: &ProfileHmm, x: &[usize], space: Space) -> Result<ProfileForward> {
    p.check_sequence(x)?;
    Ok(match space {
        Space::Linear => forward_in::<Linear>(p, x, space),
        Space::Log => forward_in::<Log>(p, x, space),
    })
}

pub fn profile_backward(p: &ProfileHmm, x: &[usize], space: Space) -> Result<Lattice> {
    p.check_sequence(x)?;
    Ok(match space {
        Space::Linear => backward_in::<Linear>(p, x, space),
        Space::Log => backward_in::<Log>(p, x, space),
    })
}

/// Both passes over one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDp {
    pub forward: Lattice,
    pub backward: Lattice,
    pub total: f64,
}

impl ProfileDp {
    pub fn compute(p: &ProfileHmm, x: &[usize], space: Space) -> Result<Self> {
        let fwd = profile_forward(p, x, space)?;
        let backward = profile_backward(p, x, space)?;
        Ok(ProfileDp {
            forward: fwd.lattice,
            backward,
            total: fwd.total,
        })
    }

    pub fn space(&self) -> Space {
        self.forward.space
    }

    fn fb(&self, kind: StateKind, i: usize, j: usize) -> f64 {
        let (f, b) = (self.forward.get(kind, i, j), self.backward.get(kind, i, j));
        match self.space() {
            Space::Linear => f * b,
            Space::Log => f + b,
        }
    }

    fn sum(&self, terms: impl Iterator<Item = f64>) -> f64 {
        match self.space() {
            Space::Linear => terms.sum(),
            Space::Log => terms.fold(f64::NEG_INFINITY, Log::add),
        }
    }

    /// `P(x)` rebuilt from the states that emit symbol `i` (the begin state
    /// for `i = 0`). Delete states are excluded: a path can pass through
    /// several of them between two emissions.
    pub fn row_total(&self, i: usize) -> f64 {
        if i == 0 {
            return self.fb(StateKind::Match, 0, 0);
        }
        let cols = self.forward.matches.cols();
        let m = (1..cols).map(|j| self.fb(StateKind::Match, i, j));
        let ins = (0..cols).map(|j| self.fb(StateKind::Insert, i, j));
        self.sum(m.chain(ins))
    }

    /// `P(x)` rebuilt from column `j >= 1`: every path visits exactly one of
    /// `M_j` and `D_j`.
    pub fn column_total(&self, j: usize) -> f64 {
        let rows = self.forward.matches.rows();
        let terms = (0..rows).flat_map(|i| [self.fb(StateKind::Match, i, j), self.fb(StateKind::Delete, i, j)]);
        self.sum(terms)
    }
}

/// Expected emission and transition counts of one or more sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    /// `L x K`; row `k-1` is match state `M_k`.
    pub match_emission: Matrix,
    /// `(L+1) x K`; row `k` is insert state `I_k`.
    pub insert_emission: Matrix,
    /// Per column, `[from][to]` with the slot order of `ColumnTransitions`.
    /// The last column's `TO_MATCH` slot counts transitions to the end state.
    pub transitions: Vec<[[f64; 3]; 3]>,
}

impl ExpectedCounts {
    pub fn zeros(length: usize, alphabet_size: usize) -> Self {
        ExpectedCounts {
            match_emission: Matrix::filled(length, alphabet_size, 0.0),
            insert_emission: Matrix::filled(length + 1, alphabet_size, 0.0),
            transitions: vec![[[0.0; 3]; 3]; length + 1],
        }
    }

    pub fn add(&mut self, other: &ExpectedCounts) {
        let add = |a: &mut Matrix, b: &Matrix| {
            a.as_mut_slice().iter_mut().zip(b.as_slice()).for_each(|(x, y)| *x += y)
        };
        add(&mut self.match_emission, &other.match_emission);
        add(&mut self.insert_emission, &other.insert_emission);
        for (a, b) in self.transitions.iter_mut().zip(&other.transitions) {
            for (ra, rb) in a.iter_mut().zip(b) {
                ra.iter_mut().zip(rb).for_each(|(x, y)| *x += y);
            }
        }
    }

    pub fn trans(&self, j: usize, from: StateKind, to: usize) -> f64 {
        self.transitions[j][from.index()][to]
    }
}

fn counts_in<D: Domain>(p: &ProfileHmm, x: &[usize], dp: &ProfileDp) -> ExpectedCounts {
    let (m, l) = (x.len(), p.length());
    let (f, b, total) = (&dp.forward, &dp.backward, dp.total);
    let mut c = ExpectedCounts::zeros(l, p.alphabet_size());
    let t = |j, from, to| D::lift(p.trans(j, from, to));

    for i in 1..=m {
        let a = x[i - 1];
        for k in 1..=l {
            c.match_emission[(k - 1, a)] += D::ratio(D::mul(f.matches[(i, k)], b.matches[(i, k)]), total);
        }
        for k in 0..=l {
            c.insert_emission[(k, a)] += D::ratio(D::mul(f.inserts[(i, k)], b.inserts[(i, k)]), total);
        }
    }

    for k in 0..=l {
        for from in StateKind::ALL {
            if k == 0 && from == StateKind::Delete {
                continue;
            }
            let cell = &mut c.transitions[k][from.index()];
            for i in 0..=m {
                let fx = f.get(from, i, k);
                if i < m {
                    let next = x[i];
                    if k < l {
                        let v = D::mul(
                            D::mul(fx, t(k, from, TO_MATCH)),
                            D::mul(D::lift(p.match_emission(k + 1, next)), b.matches[(i + 1, k + 1)]),
                        );
                        cell[TO_MATCH] += D::ratio(v, total);
                    }
                    let v = D::mul(
                        D::mul(fx, t(k, from, TO_INSERT)),
                        D::mul(D::lift(p.insert_emission(k, next)), b.inserts[(i + 1, k)]),
                    );
                    cell[TO_INSERT] += D::ratio(v, total);
                }
                if k < l {
                    let v = D::mul(D::mul(fx, t(k, from, TO_DELETE)), b.deletes[(i, k + 1)]);
                    cell[TO_DELETE] += D::ratio(v, total);
                }
            }
            if k == l {
                cell[TO_MATCH] += D::ratio(D::mul(f.get(from, m, l), t(l, from, TO_MATCH)), total);
            }
        }
    }
    c
}

pub fn profile_expected_counts(p: &ProfileHmm, x: &[usize], space: Space) -> Result<ExpectedCounts> {
    let dp = ProfileDp::compute(p, x, space)?;
    expected_counts_from(p, x, &dp, 0)
}

pub(crate) fn expected_counts_from(
    p: &ProfileHmm,
    x: &[usize],
    dp: &ProfileDp,
    index: usize,
) -> Result<ExpectedCounts> {
    let zero = match dp.space() {
        Space::Linear => dp.total <= 0.0,
        Space::Log => dp.total == f64::NEG_INFINITY,
    };
    if zero || dp.total.is_nan() {
        return Err(Error::ZeroSequenceProbability { index });
    }
    Ok(match dp.space() {
        Space::Linear => counts_in::<Linear>(p, x, dp),
        Space::Log => counts_in::<Log>(p, x, dp),
    })
}
