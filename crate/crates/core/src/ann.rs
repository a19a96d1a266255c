//! Sliding-window feed-forward networks over binary symbol codes.
//!
//! Every symbol is written as its fixed-width binary code; a window of `n`
//! observed symbols centred on a position is the network input and the code
//! of the counterpart symbol at that position is the target. Outputs are
//! decoded to the nearest legal code.

use crate::alphabet::{code_bits, Alphabet};
use crate::dataset::{Corpus, FoldSpec, LabeledPair};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seqstruct::{q3_score, EvalReport, ModelDirection, PairScore};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Fully connected sigmoid network.
///
/// `weights[l]` has one row per unit of layer `l + 1` and one column per
/// unit of layer `l`, plus a final bias column whose input is fixed at 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeedForwardNet {
    layer_sizes: Vec<usize>,
    weights: Vec<Matrix>,
}

#[derive(Deserialize)]
struct RawNet {
    layer_sizes: Vec<usize>,
    weights: Vec<Matrix>,
}

impl<'de> Deserialize<'de> for FeedForwardNet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawNet::deserialize(d)?;
        FeedForwardNet::from_weights(raw.layer_sizes, raw.weights).map_err(serde::de::Error::custom)
    }
}

impl FeedForwardNet {
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        check_sizes(layer_sizes)?;
        let weights = layer_sizes
            .windows(2)
            .map(|w| Matrix::filled(w[1], w[0] + 1, 0.0))
            .collect();
        Ok(FeedForwardNet {
            layer_sizes: layer_sizes.to_vec(),
            weights,
        })
    }

    /// Weights drawn uniformly from `[-scale, scale]`.
    pub fn random(layer_sizes: &[usize], scale: f64, seed: u64) -> Result<Self> {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::InvalidArgument(format!("init scale must be non-negative, got {scale}")));
        }
        let mut net = Self::zeros(layer_sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in &mut net.weights {
            for v in w.as_mut_slice() {
                *v = if scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 };
            }
        }
        Ok(net)
    }

    pub fn from_weights(layer_sizes: Vec<usize>, weights: Vec<Matrix>) -> Result<Self> {
        check_sizes(&layer_sizes)?;
        if weights.len() != layer_sizes.len() - 1 {
            return Err(Error::ShapeMismatch {
                expected: layer_sizes.len() - 1,
                actual: weights.len(),
            });
        }
        for (w, sz) in weights.iter().zip(layer_sizes.windows(2)) {
            if w.rows() != sz[1] || w.cols() != sz[0] + 1 {
                return Err(Error::InvalidModel(format!(
                    "weight matrix is {}x{}, expected {}x{}",
                    w.rows(),
                    w.cols(),
                    sz[1],
                    sz[0] + 1
                )));
            }
            if w.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel("non-finite weight".into()));
            }
        }
        Ok(FeedForwardNet { layer_sizes, weights })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [Matrix] {
        &mut self.weights
    }

    pub fn n_inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.layer_sizes.last().expect("at least two layers")
    }
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "a network needs an input and an output layer of non-zero width, got {sizes:?}"
        )));
    }
    Ok(())
}

/// Outputs of every layer, input layer first.
pub fn net_activations(net: &FeedForwardNet, input: &[f64]) -> Result<Vec<Vec<f64>>> {
    if input.len() != net.n_inputs() {
        return Err(Error::ShapeMismatch {
            expected: net.n_inputs(),
            actual: input.len(),
        });
    }
    let mut acts = Vec::with_capacity(net.layer_sizes.len());
    acts.push(input.to_vec());
    for w in &net.weights {
        let prev = acts.last().expect("non-empty");
        let bias = w.cols() - 1;
        let next = w
            .iter_rows()
            .map(|row| {
                let a: f64 = row[..bias].iter().zip(prev).map(|(w, y)| w * y).sum::<f64>() + row[bias];
                sigmoid(a)
            })
            .collect();
        acts.push(next);
    }
    Ok(acts)
}

pub fn net_forward(net: &FeedForwardNet, input: &[f64]) -> Result<Vec<f64>> {
    Ok(net_activations(net, input)?.pop().expect("output layer"))
}

fn check_target(net: &FeedForwardNet, target: &[f64]) -> Result<()> {
    if target.len() != net.n_outputs() {
        return Err(Error::ShapeMismatch {
            expected: net.n_outputs(),
            actual: target.len(),
        });
    }
    if target.iter().any(|&t| t != 0.0 && t != 1.0) {
        return Err(Error::InvalidArgument("targets must be 0 or 1".into()));
    }
    Ok(())
}

/// `E = ½ Σ (y - t)²` for one example.
pub fn squared_error(output: &[f64], target: &[f64]) -> f64 {
    0.5 * output.iter().zip(target).map(|(y, t)| (y - t) * (y - t)).sum::<f64>()
}

/// Error of the example and `∂E/∂w` for every weight, shaped like the net.
pub fn gradient(net: &FeedForwardNet, input: &[f64], target: &[f64]) -> Result<(f64, Vec<Matrix>)> {
    check_target(net, target)?;
    let acts = net_activations(net, input)?;
    let out = acts.last().expect("output layer");
    let error = squared_error(out, target);
    let mut delta: Vec<f64> = out.iter().zip(target).map(|(y, t)| (y - t) * y * (1.0 - y)).collect();
    let mut grads: Vec<Matrix> = net.weights.iter().map(|w| Matrix::filled(w.rows(), w.cols(), 0.0)).collect();
    for l in (0..net.weights.len()).rev() {
        let prev = &acts[l];
        let g = &mut grads[l];
        for (i, &d) in delta.iter().enumerate() {
            let row = g.row_mut(i);
            for (gj, y) in row.iter_mut().zip(prev) {
                *gj = d * y;
            }
            row[prev.len()] = d;
        }
        if l > 0 {
            let w = &net.weights[l];
            delta = prev
                .iter()
                .enumerate()
                .map(|(j, &y)| {
                    let back: f64 = delta.iter().enumerate().map(|(i, d)| d * w[(i, j)]).sum();
                    back * y * (1.0 - y)
                })
                .collect();
        }
    }
    Ok((error, grads))
}

/// One gradient-descent update; returns the error before the update.
pub fn backprop_step(net: &mut FeedForwardNet, input: &[f64], target: &[f64], learning_rate: f64) -> Result<f64> {
    let (error, grads) = gradient(net, input, target)?;
    for (w, g) in net.weights.iter_mut().zip(&grads) {
        for (wv, gv) in w.as_mut_slice().iter_mut().zip(g.as_slice()) {
            *wv -= learning_rate * gv;
        }
    }
    Ok(error)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub window: usize,
    pub in_bits: usize,
    pub out_bits: usize,
}

pub const DEFAULT_WINDOW: usize = 13;

impl WindowConfig {
    /// Code widths of the direction's alphabets: 5 bits per residue and 3 per
    /// structure class.
    pub fn for_direction(direction: ModelDirection, window: usize) -> Result<Self> {
        let cfg = WindowConfig {
            window,
            in_bits: direction.observed_alphabet().min_code_width(),
            out_bits: direction.hidden_alphabet().min_code_width(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("window must be odd, got {}", self.window)));
        }
        if self.in_bits == 0 || self.out_bits == 0 {
            return Err(Error::InvalidArgument("code widths must be positive".into()));
        }
        Ok(())
    }

    pub fn n_inputs(&self) -> usize {
        self.window * self.in_bits
    }

    fn check_direction(&self, direction: ModelDirection) -> Result<()> {
        let (obs, hid) = (direction.observed_alphabet(), direction.hidden_alphabet());
        if self.in_bits < obs.min_code_width() {
            return Err(Error::EncodingWidth {
                width: self.in_bits,
                needed: obs.min_code_width(),
                alphabet: obs.name(),
            });
        }
        if self.out_bits < hid.min_code_width() {
            return Err(Error::EncodingWidth {
                width: self.out_bits,
                needed: hid.min_code_width(),
                alphabet: hid.name(),
            });
        }
        self.validate()
    }
}

fn bits_f64(code: u32, width: usize) -> impl Iterator<Item = f64> {
    code_bits(code, width).into_iter().map(f64::from)
}

fn window_inputs(observed: &[usize], alphabet: Alphabet, cfg: &WindowConfig) -> Vec<Vec<f64>> {
    let half = cfg.window / 2;
    let n = observed.len() as isize;
    (0..n)
        .map(|t| {
            let mut v = Vec::with_capacity(cfg.n_inputs());
            for u in t - half as isize..=t + half as isize {
                if (0..n).contains(&u) {
                    v.extend(bits_f64(alphabet.code(observed[u as usize]), cfg.in_bits));
                } else {
                    v.extend(std::iter::repeat_n(0.0, cfg.in_bits));
                }
            }
            v
        })
        .collect()
}

/// One `(input, target)` example per position of the pair.
pub fn build_windows(
    pair: &LabeledPair,
    direction: ModelDirection,
    cfg: &WindowConfig,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    cfg.check_direction(direction)?;
    let (hidden, observed) = direction.split(pair);
    let (hid_ab, obs_ab) = (direction.hidden_alphabet(), direction.observed_alphabet());
    let obs = obs_ab.indices(observed)?;
    let hid = hid_ab.indices(hidden)?;
    let inputs = window_inputs(&obs, obs_ab, cfg);
    Ok(inputs
        .into_iter()
        .zip(hid)
        .map(|(x, h)| (x, bits_f64(hid_ab.code(h), cfg.out_bits).collect()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub iterations_per_position: usize,
    pub epochs: usize,
    pub seed: u64,
    pub init_scale: f64,
    /// Hidden layer widths; empty means a single-layer perceptron.
    pub hidden: Vec<usize>,
    /// Shuffle examples and visit each once per round instead of repeating
    /// each position `iterations_per_position` times in a row.
    pub shuffled_sgd: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            iterations_per_position: 200,
            epochs: 1,
            seed: 0,
            init_scale: 0.1,
            hidden: Vec::new(),
            shuffled_sgd: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad learning rate {}", self.learning_rate)));
        }
        if !(self.init_scale.is_finite() && self.init_scale >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad init scale {}", self.init_scale)));
        }
        if self.hidden.contains(&0) {
            return Err(Error::InvalidArgument("hidden layers need at least one unit".into()));
        }
        Ok(())
    }
}

/// A trained network together with the encoding it expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnModel {
    pub direction: ModelDirection,
    pub window: WindowConfig,
    pub net: FeedForwardNet,
}

impl AnnModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("net serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: AnnModel = serde_json::from_str(text)?;
        m.window.check_direction(m.direction)?;
        if m.net.n_inputs() != m.window.n_inputs() || m.net.n_outputs() != m.window.out_bits {
            return Err(Error::InvalidModel("network shape disagrees with its window".into()));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedAnn {
    pub model: AnnModel,
    /// Number of weight updates performed.
    pub steps: u64,
}

pub fn train_ann<'a, I>(
    pairs: I,
    direction: ModelDirection,
    wcfg: &WindowConfig,
    tcfg: &TrainConfig,
) -> Result<TrainedAnn>
where
    I: IntoIterator<Item = &'a LabeledPair>,
{
    tcfg.validate()?;
    wcfg.check_direction(direction)?;
    let mut examples = Vec::new();
    let mut n_pairs = 0;
    for pair in pairs {
        examples.extend(build_windows(pair, direction, wcfg)?);
        n_pairs += 1;
    }
    if n_pairs == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let mut sizes = vec![wcfg.n_inputs()];
    sizes.extend(&tcfg.hidden);
    sizes.push(wcfg.out_bits);
    let mut net = FeedForwardNet::random(&sizes, tcfg.init_scale, tcfg.seed)?;
    let mut steps = 0u64;
    let lr = tcfg.learning_rate;
    if tcfg.shuffled_sgd {
        let mut rng = ChaCha8Rng::seed_from_u64(tcfg.seed ^ 0x5eed);
        let mut order: Vec<usize> = (0..examples.len()).collect();
        for _ in 0..tcfg.epochs * tcfg.iterations_per_position {
            order.shuffle(&mut rng);
            for &k in &order {
                let (x, y) = &examples[k];
                backprop_step(&mut net, x, y, lr)?;
                steps += 1;
            }
        }
    } else {
        for _ in 0..tcfg.epochs {
            for (x, y) in &examples {
                for _ in 0..tcfg.iterations_per_position {
                    backprop_step(&mut net, x, y, lr)?;
                    steps += 1;
                }
            }
        }
    }
    Ok(TrainedAnn {
        model: AnnModel {
            direction,
            window: *wcfg,
            net,
        },
        steps,
    })
}

/// Index of the symbol whose code is nearest to `output`; ties go to the
/// lowest index.
pub fn nearest_code(output: &[f64], alphabet: Alphabet) -> usize {
    let mut best = (0, f64::INFINITY);
    for i in 0..alphabet.len() {
        let d: f64 = bits_f64(alphabet.code(i), output.len())
            .zip(output)
            .map(|(b, o)| (b - o) * (b - o))
            .sum();
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Predicted counterpart string for an observed string.
pub fn predict_ann(model: &AnnModel, observed: &str) -> Result<String> {
    let obs_ab = model.direction.observed_alphabet();
    let hid_ab = model.direction.hidden_alphabet();
    let obs = obs_ab.indices(observed)?;
    window_inputs(&obs, obs_ab, &model.window)
        .iter()
        .map(|x| Ok(hid_ab.symbol(nearest_code(&net_forward(&model.net, x)?, hid_ab))))
        .collect()
}

/// Trains on the fold's training pairs and scores the test pairs.
pub fn evaluate_ann_fold(
    corpus: &Corpus,
    fold: &FoldSpec,
    direction: ModelDirection,
    wcfg: &WindowConfig,
    tcfg: &TrainConfig,
) -> Result<EvalReport> {
    let train = corpus.select(&fold.train_ids)?;
    let test = corpus.select(&fold.test_ids)?;
    let trained = train_ann(train, direction, wcfg, tcfg)?;
    let per_pair = test
        .par_iter()
        .map(|pair| {
            let (hidden, observed) = direction.split(pair);
            let predicted = predict_ann(&trained.model, observed)?;
            Ok(PairScore {
                id: pair.id,
                length: pair.len(),
                q3: q3_score(&predicted, hidden, crate::seqstruct::ClassMode::Eight)?,
                predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_scores(direction, fold.clone(), per_pair))
}
