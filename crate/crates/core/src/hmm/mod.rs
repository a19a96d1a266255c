//! Discrete-observation hidden Markov models.

mod em;
mod inference;
mod model;
pub mod oracle;
mod viterbi;

pub use em::{baum_welch, em_converged, EmConfig, EmReport};
pub(crate) use em::normalize_or_uniform;
pub use inference::{
    argmax, backward, decode_posterior, forward, posterior, ForwardPass, PosteriorTable, Scaling,
};
pub use model::{init_model, sample, DiscreteHmm, InitScheme, Sample, STOCHASTIC_TOL};
pub(crate) use model::check_distribution;
pub use oracle::brute_force_prob;
pub use viterbi::{backtrack, viterbi, ViterbiResult};
