//! Hidden Markov models and feed-forward networks relating protein sequence
//! to secondary structure.
//!
//! * [`dataset`] parses labeled sequence/structure corpora and builds folds.
//! * [`hmm`] is a generic discrete HMM: forward/backward, posteriors,
//!   Viterbi, Baum-Welch, and brute-force oracles for small instances.
//! * [`seqstruct`] trains the two supervised models (structure hidden or
//!   sequence hidden) by counting and scores them with Q3.
//! * [`profile`] implements a match/insert/delete profile HMM.
//! * [`ann`] is the sliding-window feed-forward network counterpart.
//! * [`harness`] runs the cross-validation matrix and writes reports.

pub mod alphabet;
pub mod ann;
pub mod dataset;
mod error;
pub mod harness;
pub mod hmm;
pub mod matrix;
pub mod profile;
pub mod seqstruct;

pub use error::{Error, Field, Result};
