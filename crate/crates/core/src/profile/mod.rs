//! Profile HMMs with match, insert and delete states.

mod dp;
mod em;
mod model;
pub mod oracle;

pub use dp::{
    profile_backward, profile_expected_counts, profile_forward, ExpectedCounts, Lattice, ProfileDp,
    ProfileForward, Space,
};
pub use em::{profile_baum_welch, profile_m_step, ProfileEmConfig, ProfileEmReport};
pub use model::{slot_exists, ColumnTransitions, ProfileHmm, StateKind, TO_DELETE, TO_INSERT, TO_MATCH};
