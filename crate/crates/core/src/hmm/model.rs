use crate::error::{Error, Result};
use crate::matrix::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Sum tolerance for probability vectors.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Discrete-emission HMM `(A, B, pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteHmm {
    n_states: usize,
    n_symbols: usize,
    pi: Vec<f64>,
    trans: Matrix,
    emit: Matrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    state_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol_labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawHmm {
    n_states: usize,
    n_symbols: usize,
    pi: Vec<f64>,
    trans: Matrix,
    emit: Matrix,
    #[serde(default)]
    state_labels: Option<Vec<String>>,
    #[serde(default)]
    symbol_labels: Option<Vec<String>>,
}

impl<'de> Deserialize<'de> for DiscreteHmm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawHmm::deserialize(d)?;
        if raw.trans.rows() != raw.n_states || raw.emit.cols() != raw.n_symbols {
            return Err(serde::de::Error::custom(
                "n_states/n_symbols disagree with matrix shapes",
            ));
        }
        DiscreteHmm::new(raw.pi, raw.trans, raw.emit)
            .and_then(|m| m.with_labels(raw.state_labels, raw.symbol_labels))
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_distribution(what: &str, row: &[f64]) -> Result<()> {
    if let Some(&p) = row.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidModel(format!("{what} has entry {p}")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidModel(format!("{what} sums to {sum}")));
    }
    Ok(())
}

impl DiscreteHmm {
    pub fn new(pi: Vec<f64>, trans: Matrix, emit: Matrix) -> Result<Self> {
        let n = pi.len();
        if n == 0 {
            return Err(Error::InvalidModel("no states".into()));
        }
        if trans.rows() != n || trans.cols() != n {
            return Err(Error::InvalidModel(format!(
                "transition matrix is {}x{}, expected {n}x{n}",
                trans.rows(),
                trans.cols()
            )));
        }
        if emit.rows() != n || emit.cols() == 0 {
            return Err(Error::InvalidModel(format!(
                "emission matrix is {}x{}, expected {n} rows and at least one symbol",
                emit.rows(),
                emit.cols()
            )));
        }
        check_distribution("pi", &pi)?;
        for i in 0..n {
            check_distribution(&format!("transition row {i}"), trans.row(i))?;
            check_distribution(&format!("emission row {i}"), emit.row(i))?;
        }
        Ok(DiscreteHmm {
            n_states: n,
            n_symbols: emit.cols(),
            pi,
            trans,
            emit,
            state_labels: None,
            symbol_labels: None,
        })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(pi: Vec<f64>, trans: Vec<Vec<f64>>, emit: Vec<Vec<f64>>) -> Result<Self> {
        let ragged = || Error::InvalidModel("ragged matrix".into());
        Self::new(
            pi,
            Matrix::from_rows(trans).ok_or_else(ragged)?,
            Matrix::from_rows(emit).ok_or_else(ragged)?,
        )
    }

    pub fn with_labels(
        mut self,
        state_labels: Option<Vec<String>>,
        symbol_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if state_labels.as_ref().is_some_and(|l| l.len() != self.n_states)
            || symbol_labels.as_ref().is_some_and(|l| l.len() != self.n_symbols)
        {
            return Err(Error::InvalidModel("label count does not match model size".into()));
        }
        self.state_labels = state_labels;
        self.symbol_labels = symbol_labels;
        Ok(self)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn trans(&self) -> &Matrix {
        &self.trans
    }

    pub fn emit(&self) -> &Matrix {
        &self.emit
    }

    pub fn state_labels(&self) -> Option<&[String]> {
        self.state_labels.as_deref()
    }

    pub fn symbol_labels(&self) -> Option<&[String]> {
        self.symbol_labels.as_deref()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub(crate) fn check_obs(&self, obs: &[usize]) -> Result<()> {
        if obs.is_empty() {
            return Err(Error::EmptySequence);
        }
        match obs.iter().position(|&o| o >= self.n_symbols) {
            Some(t) => Err(Error::ObservationOutOfRange {
                t,
                symbol: obs[t],
                n_symbols: self.n_symbols,
            }),
            None => Ok(()),
        }
    }

    /// Joint probability `P(path, obs)` by direct multiplication.
    pub fn joint_prob(&self, path: &[usize], obs: &[usize]) -> f64 {
        debug_assert_eq!(path.len(), obs.len());
        let mut p = 1.0;
        for (t, (&q, &o)) in path.iter().zip(obs).enumerate() {
            p *= if t == 0 {
                self.pi[q]
            } else {
                self.trans[(path[t - 1], q)]
            };
            p *= self.emit[(q, o)];
        }
        p
    }

    /// `ln P(path, obs)`, `-inf` for impossible paths.
    pub fn joint_log_prob(&self, path: &[usize], obs: &[usize]) -> f64 {
        let mut lp = 0.0;
        for (t, (&q, &o)) in path.iter().zip(obs).enumerate() {
            lp += if t == 0 {
                self.pi[q].ln()
            } else {
                self.trans[(path[t - 1], q)].ln()
            };
            lp += self.emit[(q, o)].ln();
        }
        lp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "scheme")]
pub enum InitScheme {
    /// Every row drawn uniform and normalized.
    Random,
    /// `dominance` on the transition diagonal, the rest split evenly.
    Diagonal { dominance: f64 },
}

impl InitScheme {
    pub const DEFAULT_DOMINANCE: f64 = 0.67;
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let row: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let sum: f64 = row.iter().sum();
        if sum > 0.0 {
            return row.into_iter().map(|x| x / sum).collect();
        }
    }
}

pub fn init_model(
    n_states: usize,
    n_symbols: usize,
    scheme: InitScheme,
    seed: u64,
) -> Result<DiscreteHmm> {
    if n_states == 0 || n_symbols == 0 {
        return Err(Error::InvalidArgument("model needs at least one state and symbol".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = random_distribution(&mut rng, n_states);
    let mut trans = Matrix::filled(n_states, n_states, 0.0);
    match scheme {
        InitScheme::Random => {
            for i in 0..n_states {
                trans.row_mut(i).copy_from_slice(&random_distribution(&mut rng, n_states));
            }
        }
        InitScheme::Diagonal { dominance } => {
            if !(dominance > 0.0 && dominance < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "dominance must lie in (0, 1), got {dominance}"
                )));
            }
            if n_states == 1 {
                trans[(0, 0)] = 1.0;
            } else {
                let off = (1.0 - dominance) / (n_states - 1) as f64;
                for i in 0..n_states {
                    for j in 0..n_states {
                        trans[(i, j)] = if i == j { dominance } else { off };
                    }
                }
            }
        }
    }
    let mut emit = Matrix::filled(n_states, n_symbols, 0.0);
    for i in 0..n_states {
        emit.row_mut(i).copy_from_slice(&random_distribution(&mut rng, n_symbols));
    }
    DiscreteHmm::new(pi, trans, emit)
}

fn sample_discrete(rng: &mut ChaCha8Rng, dist: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left u above the final cumulative sum
    dist.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// A sampled hidden path and its observations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub states: Vec<usize>,
    pub observations: Vec<usize>,
}

/// Draws `n_sequences` independent length-`len` realizations.
pub fn sample(model: &DiscreteHmm, len: usize, n_sequences: usize, seed: u64) -> Result<Vec<Sample>> {
    if len == 0 || n_sequences == 0 {
        return Err(Error::InvalidArgument("sample length and count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_sequences)
        .map(|_| {
            let mut states = Vec::with_capacity(len);
            let mut observations = Vec::with_capacity(len);
            let mut q = sample_discrete(&mut rng, model.pi());
            for t in 0..len {
                if t > 0 {
                    q = sample_discrete(&mut rng, model.trans().row(q));
                }
                states.push(q);
                observations.push(sample_discrete(&mut rng, model.emit().row(q)));
            }
            Sample {
                states,
                observations,
            }
        })
        .collect())
}
