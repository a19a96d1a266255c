use crate::error::{Error, Result};
use crate::hmm::check_distribution;
use crate::matrix::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Slot order inside a transition bundle.
pub const TO_MATCH: usize = 0;
pub const TO_INSERT: usize = 1;
pub const TO_DELETE: usize = 2;

/// Outgoing transitions of the three states of one column.
///
/// Each bundle is `[to next match, to this column's insert, to next delete]`.
/// In the last column the first slot is the transition to the end state and
/// the delete slot must be zero. Column 0 holds the begin state in
/// `from_match`; it has no delete state, so `from_delete` must be zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnTransitions {
    #[serde(rename = "match")]
    pub from_match: [f64; 3],
    #[serde(rename = "insert")]
    pub from_insert: [f64; 3],
    #[serde(rename = "delete")]
    pub from_delete: [f64; 3],
}

impl ColumnTransitions {
    pub fn bundle(&self, from: StateKind) -> &[f64; 3] {
        match from {
            StateKind::Match => &self.from_match,
            StateKind::Insert => &self.from_insert,
            StateKind::Delete => &self.from_delete,
        }
    }

    pub fn bundle_mut(&mut self, from: StateKind) -> &mut [f64; 3] {
        match from {
            StateKind::Match => &mut self.from_match,
            StateKind::Insert => &mut self.from_insert,
            StateKind::Delete => &mut self.from_delete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateKind {
    Match,
    Insert,
    Delete,
}

impl StateKind {
    pub const ALL: [StateKind; 3] = [StateKind::Match, StateKind::Insert, StateKind::Delete];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Left-to-right profile HMM with `length` match columns.
///
/// Match states `M_1..M_L`, insert states `I_0..I_L` and delete states
/// `D_1..D_L`; the begin state acts as `M_0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileHmm {
    length: usize,
    alphabet: String,
    match_emit: Matrix,
    insert_emit: Matrix,
    transitions: Vec<ColumnTransitions>,
}

#[derive(Deserialize)]
struct RawProfile {
    length: usize,
    alphabet: String,
    match_emit: Matrix,
    insert_emit: Matrix,
    transitions: Vec<ColumnTransitions>,
}

impl<'de> Deserialize<'de> for ProfileHmm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawProfile::deserialize(d)?;
        let p = ProfileHmm::new(raw.alphabet, raw.match_emit, raw.insert_emit, raw.transitions)
            .map_err(serde::de::Error::custom)?;
        if p.length != raw.length {
            return Err(serde::de::Error::custom("length disagrees with match_emit rows"));
        }
        Ok(p)
    }
}

/// Whether a transition slot exists in column `j` of a length-`len` profile.
pub fn slot_exists(len: usize, j: usize, from: StateKind, to: usize) -> bool {
    if j == 0 && from == StateKind::Delete {
        return false;
    }
    !(j == len && to == TO_DELETE)
}

impl ProfileHmm {
    pub fn new(
        alphabet: impl Into<String>,
        match_emit: Matrix,
        insert_emit: Matrix,
        transitions: Vec<ColumnTransitions>,
    ) -> Result<Self> {
        let alphabet = alphabet.into();
        let length = match_emit.rows();
        let k = alphabet.chars().count();
        if length == 0 {
            return Err(Error::InvalidModel("profile needs at least one match column".into()));
        }
        if k == 0 || match_emit.cols() != k || insert_emit.cols() != k {
            return Err(Error::InvalidModel(format!(
                "emission tables must have {k} columns, one per alphabet symbol"
            )));
        }
        if insert_emit.rows() != length + 1 || transitions.len() != length + 1 {
            return Err(Error::InvalidModel(format!(
                "a {length}-column profile needs {} insert rows and transition columns",
                length + 1
            )));
        }
        for j in 0..length {
            check_distribution(&format!("match emission {}", j + 1), match_emit.row(j))?;
        }
        for j in 0..=length {
            check_distribution(&format!("insert emission {j}"), insert_emit.row(j))?;
            for from in StateKind::ALL {
                let bundle = transitions[j].bundle(from);
                let what = format!("{from:?} transitions of column {j}");
                if !slot_exists(length, j, from, TO_MATCH) {
                    if bundle.iter().any(|&p| p != 0.0) {
                        return Err(Error::InvalidModel(format!("{what} must be zero")));
                    }
                    continue;
                }
                if j == length && bundle[TO_DELETE] != 0.0 {
                    return Err(Error::InvalidModel(format!("{what}: last column cannot delete")));
                }
                check_distribution(&what, bundle)?;
            }
        }
        Ok(ProfileHmm {
            length,
            alphabet,
            match_emit,
            insert_emit,
            transitions,
        })
    }

    /// Random parameters with every allowed transition and emission positive.
    pub fn random(length: usize, alphabet: &str, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::filled(length, alphabet, |_| rng.gen::<f64>() + 0.05)
    }

    pub fn uniform(length: usize, alphabet: &str) -> Result<Self> {
        Self::filled(length, alphabet, |_| 1.0)
    }

    fn filled(length: usize, alphabet: &str, mut weight: impl FnMut(usize) -> f64) -> Result<Self> {
        let k = alphabet.chars().count();
        if length == 0 || k == 0 {
            return Err(Error::InvalidArgument("profile needs columns and symbols".into()));
        }
        let mut row = |n: usize| -> Vec<f64> {
            let mut r: Vec<f64> = (0..n).map(&mut weight).collect();
            let s: f64 = r.iter().sum();
            r.iter_mut().for_each(|x| *x /= s);
            r
        };
        let match_emit = Matrix::from_rows((0..length).map(|_| row(k)).collect()).expect("rectangular");
        let insert_emit = Matrix::from_rows((0..=length).map(|_| row(k)).collect()).expect("rectangular");
        let mut transitions = Vec::with_capacity(length + 1);
        for j in 0..=length {
            let mut col = ColumnTransitions {
                from_match: [0.0; 3],
                from_insert: [0.0; 3],
                from_delete: [0.0; 3],
            };
            for from in StateKind::ALL {
                if !slot_exists(length, j, from, TO_MATCH) {
                    continue;
                }
                let allowed = if j == length { 2 } else { 3 };
                let r = row(allowed);
                col.bundle_mut(from)[..allowed].copy_from_slice(&r);
            }
            transitions.push(col);
        }
        ProfileHmm::new(alphabet, match_emit, insert_emit, transitions)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alphabet(&self) -> &str {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.match_emit.cols()
    }

    /// Emission of match state `M_j`, `1 <= j <= L`.
    #[inline]
    pub fn match_emission(&self, j: usize, symbol: usize) -> f64 {
        self.match_emit[(j - 1, symbol)]
    }

    /// Emission of insert state `I_j`, `0 <= j <= L`.
    #[inline]
    pub fn insert_emission(&self, j: usize, symbol: usize) -> f64 {
        self.insert_emit[(j, symbol)]
    }

    pub fn match_emit(&self) -> &Matrix {
        &self.match_emit
    }

    pub fn insert_emit(&self) -> &Matrix {
        &self.insert_emit
    }

    pub fn transitions(&self) -> &[ColumnTransitions] {
        &self.transitions
    }

    /// Probability of moving from `from` in column `j` to slot `to`.
    #[inline]
    pub fn trans(&self, j: usize, from: StateKind, to: usize) -> f64 {
        self.transitions[j].bundle(from)[to]
    }

    pub fn begin(&self) -> &[f64; 3] {
        &self.transitions[0].from_match
    }

    /// `[a(M_L -> end), a(I_L -> end), a(D_L -> end)]`.
    pub fn end(&self) -> [f64; 3] {
        let last = &self.transitions[self.length];
        [last.from_match[TO_MATCH], last.from_insert[TO_MATCH], last.from_delete[TO_MATCH]]
    }

    /// Maps a string over the profile alphabet to symbol indices.
    pub fn encode(&self, s: &str) -> Result<Vec<usize>> {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                self.alphabet.chars().position(|a| a == c).ok_or(Error::SymbolNotInAlphabet {
                    ch: c,
                    position: i + 1,
                    alphabet: "profile",
                })
            })
            .collect()
    }

    pub(crate) fn check_sequence(&self, x: &[usize]) -> Result<()> {
        match x.iter().position(|&s| s >= self.alphabet_size()) {
            Some(t) => Err(Error::ObservationOutOfRange {
                t,
                symbol: x[t],
                n_symbols: self.alphabet_size(),
            }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
