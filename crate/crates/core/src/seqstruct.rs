//! Supervised sequence/structure HMMs built by counting.
//!
//! Model 1 hides the structure string and observes the residues (8 states,
//! 20 symbols); model 2 swaps the roles (20 states, 8 symbols). Both are
//! estimated from aligned training pairs by relative frequencies and scored
//! on held-out pairs by the fraction of correctly recovered hidden symbols.

use crate::alphabet::{Alphabet, RESIDUES, STRUCTURES};
use crate::dataset::{Corpus, FoldSpec, LabeledPair};
use crate::error::{Error, Result};
use crate::hmm::{decode_posterior, normalize_or_uniform, viterbi, DiscreteHmm};
use crate::matrix::Matrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelDirection {
    /// Model 1: structure hidden, sequence observed.
    #[serde(rename = "model1")]
    StructureHidden,
    /// Model 2: sequence hidden, structure observed.
    #[serde(rename = "model2")]
    SequenceHidden,
}

impl ModelDirection {
    pub fn hidden_alphabet(self) -> Alphabet {
        match self {
            ModelDirection::StructureHidden => STRUCTURES,
            ModelDirection::SequenceHidden => RESIDUES,
        }
    }

    pub fn observed_alphabet(self) -> Alphabet {
        match self {
            ModelDirection::StructureHidden => RESIDUES,
            ModelDirection::SequenceHidden => STRUCTURES,
        }
    }

    /// `(hidden, observed)` strings of a pair.
    pub fn split(self, pair: &LabeledPair) -> (&str, &str) {
        match self {
            ModelDirection::StructureHidden => (&pair.structure, &pair.seq),
            ModelDirection::SequenceHidden => (&pair.seq, &pair.structure),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelDirection::StructureHidden => "model1",
            ModelDirection::SequenceHidden => "model2",
        }
    }
}

impl std::fmt::Display for ModelDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model1" | "1" => Ok(ModelDirection::StructureHidden),
            "model2" | "2" => Ok(ModelDirection::SequenceHidden),
            other => Err(Error::InvalidArgument(format!("unknown direction {other:?}"))),
        }
    }
}

/// Raw tallies behind a counted model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingEstimate {
    pub model: DiscreteHmm,
    pub direction: ModelDirection,
    /// How often each hidden symbol starts a training pair.
    pub first_counts: Vec<u64>,
    /// Number of training pairs.
    pub n_pairs: u64,
    pub trans_counts: Matrix<u64>,
    pub emit_counts: Matrix<u64>,
    pub pseudocount: f64,
}

impl CountingEstimate {
    pub fn trans_row_total(&self, i: usize) -> u64 {
        self.trans_counts.row(i).iter().sum()
    }

    pub fn emit_row_total(&self, i: usize) -> u64 {
        self.emit_counts.row(i).iter().sum()
    }
}

fn smoothed(counts: &[u64], pseudocount: f64) -> Vec<f64> {
    let mut row: Vec<f64> = counts.iter().map(|&c| c as f64 + pseudocount).collect();
    normalize_or_uniform(&mut row);
    row
}

/// Relative-frequency estimate of `(pi, A, B)` from aligned pairs.
///
/// Transitions are counted inside each pair only. `pseudocount` is added to
/// every cell first; rows that still have no mass become uniform.
pub fn estimate_by_counting<'a, I>(
    pairs: I,
    direction: ModelDirection,
    pseudocount: f64,
) -> Result<CountingEstimate>
where
    I: IntoIterator<Item = &'a LabeledPair>,
{
    if !(pseudocount >= 0.0 && pseudocount.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid pseudocount {pseudocount}")));
    }
    let hidden_ab = direction.hidden_alphabet();
    let observed_ab = direction.observed_alphabet();
    let (n, m) = (hidden_ab.len(), observed_ab.len());
    let mut first = vec![0u64; n];
    let mut trans = Matrix::filled(n, n, 0u64);
    let mut emit = Matrix::filled(n, m, 0u64);
    let mut n_pairs = 0u64;

    for pair in pairs {
        let (hidden, observed) = direction.split(pair);
        let h = hidden_ab.indices(hidden)?;
        let o = observed_ab.indices(observed)?;
        if h.is_empty() || h.len() != o.len() {
            return Err(Error::LengthMismatch {
                id: pair.id,
                seq_len: pair.seq.len(),
                str_len: pair.structure.len(),
            });
        }
        n_pairs += 1;
        first[h[0]] += 1;
        for w in h.windows(2) {
            trans[(w[0], w[1])] += 1;
        }
        for (&s, &k) in h.iter().zip(&o) {
            emit[(s, k)] += 1;
        }
    }
    if n_pairs == 0 {
        return Err(Error::EmptyTrainingSet);
    }

    let pi = smoothed(&first, pseudocount);
    let mut a = Matrix::filled(n, n, 0.0);
    let mut b = Matrix::filled(n, m, 0.0);
    for i in 0..n {
        a.row_mut(i).copy_from_slice(&smoothed(trans.row(i), pseudocount));
        b.row_mut(i).copy_from_slice(&smoothed(emit.row(i), pseudocount));
    }
    let labels = |ab: Alphabet| Some(ab.symbols().iter().map(|&c| (c as char).to_string()).collect());
    let model = DiscreteHmm::new(pi, a, b)?.with_labels(labels(hidden_ab), labels(observed_ab))?;
    Ok(CountingEstimate {
        model,
        direction,
        first_counts: first,
        n_pairs,
        trans_counts: trans,
        emit_counts: emit,
        pseudocount,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    /// Per-position argmax of the state posterior.
    #[default]
    Posterior,
    /// Single most probable path.
    Viterbi,
}

impl std::str::FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "posterior" => Ok(Decoder::Posterior),
            "viterbi" => Ok(Decoder::Viterbi),
            other => Err(Error::InvalidArgument(format!("unknown decoder {other:?}"))),
        }
    }
}

pub fn predict_hidden(model: &DiscreteHmm, observed: &[usize], decoder: Decoder) -> Result<Vec<usize>> {
    match decoder {
        Decoder::Posterior => decode_posterior(model, observed),
        Decoder::Viterbi => viterbi(model, observed).map(|r| r.path),
    }
}

/// Which labels count as a match when scoring.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassMode {
    /// Exact symbol agreement.
    #[default]
    #[serde(rename = "8")]
    Eight,
    /// Structure symbols reduced to helix (H,G,I), strand (E,B) and coil
    /// (T,S,U) before comparison.
    #[serde(rename = "3")]
    Three,
}

impl std::str::FromStr for ClassMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "8" | "eight" => Ok(ClassMode::Eight),
            "3" | "three" => Ok(ClassMode::Three),
            other => Err(Error::InvalidArgument(format!("unknown class mode {other:?}"))),
        }
    }
}

fn three_state(c: u8, position: usize) -> Result<u8> {
    match c {
        b'H' | b'G' | b'I' => Ok(b'H'),
        b'E' | b'B' => Ok(b'E'),
        b'T' | b'S' | b'U' => Ok(b'C'),
        _ => Err(Error::SymbolNotInAlphabet {
            ch: c as char,
            position,
            alphabet: "structure",
        }),
    }
}

/// Percentage of positions where `predicted` agrees with `actual`.
pub fn q3_score(predicted: &str, actual: &str, classes: ClassMode) -> Result<f64> {
    if predicted.len() != actual.len() || actual.is_empty() {
        return Err(Error::LengthMismatch {
            id: 0,
            seq_len: predicted.len(),
            str_len: actual.len(),
        });
    }
    let mut matches = 0usize;
    for (t, (p, a)) in predicted.bytes().zip(actual.bytes()).enumerate() {
        let hit = match classes {
            ClassMode::Eight => p == a,
            ClassMode::Three => three_state(p, t + 1)? == three_state(a, t + 1)?,
        };
        matches += hit as usize;
    }
    Ok(100.0 * matches as f64 / actual.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub direction: ModelDirection,
    pub decoder: Decoder,
    pub pseudocount: f64,
    pub classes: ClassMode,
}

impl EvalOptions {
    pub fn new(direction: ModelDirection) -> Self {
        EvalOptions {
            direction,
            decoder: Decoder::Posterior,
            pseudocount: 1.0,
            classes: ClassMode::Eight,
        }
    }

    /// The three-class reduction only exists for structure labels; model 2
    /// always scores exact residue agreement.
    pub fn effective_classes(&self) -> ClassMode {
        match self.direction {
            ModelDirection::StructureHidden => self.classes,
            ModelDirection::SequenceHidden => ClassMode::Eight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub id: u32,
    pub length: usize,
    pub q3: f64,
    pub predicted: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub direction: ModelDirection,
    pub fold: FoldSpec,
    pub per_pair: Vec<PairScore>,
    pub mean_q3: f64,
}

impl EvalReport {
    /// Builds a report whose mean is the unweighted mean of the pair scores.
    pub fn from_scores(direction: ModelDirection, fold: FoldSpec, per_pair: Vec<PairScore>) -> Self {
        let mean_q3 = if per_pair.is_empty() {
            0.0
        } else {
            per_pair.iter().map(|p| p.q3).sum::<f64>() / per_pair.len() as f64
        };
        EvalReport {
            direction,
            fold,
            per_pair,
            mean_q3,
        }
    }
}

/// Trains on the fold's training ids and scores every test pair.
pub fn evaluate_fold(corpus: &Corpus, fold: &FoldSpec, opts: &EvalOptions) -> Result<EvalReport> {
    let train = corpus.select(&fold.train_ids)?;
    let test = corpus.select(&fold.test_ids)?;
    let estimate = estimate_by_counting(train, opts.direction, opts.pseudocount)?;
    let (hidden_ab, observed_ab) = (opts.direction.hidden_alphabet(), opts.direction.observed_alphabet());
    let classes = opts.effective_classes();
    let per_pair = test
        .par_iter()
        .map(|pair| {
            let (hidden, observed) = opts.direction.split(pair);
            let obs = observed_ab.indices(observed)?;
            let path = predict_hidden(&estimate.model, &obs, opts.decoder)?;
            let predicted = hidden_ab.string_from_indices(&path);
            Ok(PairScore {
                id: pair.id,
                length: pair.len(),
                q3: q3_score(&predicted, hidden, classes)?,
                predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_scores(opts.direction, fold.clone(), per_pair))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(id: u32, seq: &str, s: &str) -> LabeledPair {
        LabeledPair::new(id, seq, s).unwrap()
    }

    #[test]
    fn single_pair_counts() {
        let p = [pair(1, "AA", "HH")];
        let e = estimate_by_counting(&p, ModelDirection::StructureHidden, 0.0).unwrap();
        let m = &e.model;
        assert_eq!((m.n_states(), m.n_symbols()), (8, 20));
        assert_eq!(m.pi()[0], 1.0);
        assert_eq!(m.trans()[(0, 0)], 1.0);
        assert_eq!(m.emit()[(0, 0)], 1.0);
        // G was never seen: its rows fall back to uniform
        assert_eq!(m.trans().row(1), &[0.125; 8]);
        assert_eq!(m.emit().row(1), &[0.05; 20]);
        assert_eq!(e.n_pairs, 1);
        assert_eq!(e.trans_row_total(0), 1);
        assert_eq!(e.emit_row_total(0), 2);
    }

    #[test]
    fn model2_shapes_and_no_cross_pair_transitions() {
        let p = [pair(1, "AC", "HE"), pair(2, "D", "U")];
        let e = estimate_by_counting(&p, ModelDirection::SequenceHidden, 0.0).unwrap();
        assert_eq!((e.model.n_states(), e.model.n_symbols()), (20, 8));
        assert_eq!(e.trans_counts.as_slice().iter().sum::<u64>(), 1);
        // C -> D would be a cross-pair transition
        assert_eq!(e.trans_counts[(1, 2)], 0);
        assert_eq!(e.first_counts[0] + e.first_counts[2], 2);
    }

    #[test]
    fn pseudocount_smooths_every_cell() {
        let p = [pair(1, "AA", "HH")];
        let e = estimate_by_counting(&p, ModelDirection::StructureHidden, 1.0).unwrap();
        assert!((e.model.emit()[(0, 0)] - 3.0 / 22.0).abs() < 1e-15);
        assert!((e.model.pi()[0] - 2.0 / 9.0).abs() < 1e-15);
        assert!(e.model.emit().as_slice().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn empty_training_set() {
        let none: [LabeledPair; 0] = [];
        assert_eq!(
            estimate_by_counting(&none, ModelDirection::StructureHidden, 1.0).unwrap_err(),
            Error::EmptyTrainingSet
        );
    }

    #[test]
    fn q3_examples() {
        assert_eq!(q3_score("HHHH", "HHHH", ClassMode::Eight).unwrap(), 100.0);
        assert_eq!(q3_score("HHEE", "HHHH", ClassMode::Eight).unwrap(), 50.0);
        assert_eq!(q3_score("GGG", "HHH", ClassMode::Three).unwrap(), 100.0);
        assert_eq!(q3_score("GGG", "HHH", ClassMode::Eight).unwrap(), 0.0);
        assert_eq!(q3_score("BTU", "ESS", ClassMode::Three).unwrap(), 100.0);
        assert!(matches!(q3_score("HH", "H", ClassMode::Eight), Err(Error::LengthMismatch { .. })));
        assert!(q3_score("", "", ClassMode::Eight).is_err());
        assert!(q3_score("AH", "HH", ClassMode::Three).is_err());
    }

    #[test]
    fn identity_emissions_recover_hidden() {
        // three hidden states emitting three distinct symbols deterministically
        let m = DiscreteHmm::from_rows(
            vec![0.2, 0.3, 0.5],
            vec![vec![0.4, 0.3, 0.3], vec![0.1, 0.8, 0.1], vec![0.3, 0.3, 0.4]],
            vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        )
        .unwrap();
        let obs = [0, 1, 2, 2, 0];
        for d in [Decoder::Posterior, Decoder::Viterbi] {
            assert_eq!(predict_hidden(&m, &obs, d).unwrap(), vec![1, 2, 0, 0, 1]);
        }
    }

    #[test]
    fn single_state_predicts_constant() {
        let m = DiscreteHmm::from_rows(vec![1.0], vec![vec![1.0]], vec![vec![0.5, 0.5]]).unwrap();
        assert_eq!(predict_hidden(&m, &[0, 1, 1], Decoder::Posterior).unwrap(), vec![0; 3]);
    }

    #[test]
    fn fold_report_is_unweighted_mean() {
        let text = ">1\nAAAA\nHHHH\n>2\nCCCC\nEEEE\n>3\nAC\nHE\n>4\nAAC\nHHE\n";
        let corpus = crate::dataset::parse_corpus(text, crate::dataset::ParseMode::Strict)
            .unwrap()
            .corpus;
        let fold = FoldSpec {
            index: 0,
            train_ids: vec![1, 2],
            test_ids: vec![3, 4],
        };
        let r = evaluate_fold(&corpus, &fold, &EvalOptions::new(ModelDirection::StructureHidden)).unwrap();
        let mean = (r.per_pair[0].q3 + r.per_pair[1].q3) / 2.0;
        assert_eq!(r.mean_q3, mean);
        assert_eq!(r.per_pair[0].predicted, "HE");
        assert_eq!(r.per_pair[1].q3, 100.0);
    }
}
