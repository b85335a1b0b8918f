//! Process operators over a base LTS and the compositionality of `𝔡`.

mod compose;
mod semantics;
mod term;

pub use compose::{
    check_immediate_compositionality, compatibility, f_hat, increasing_states, verify_composition, CompatRelation,
    ComposeConfig, Operator,
};
pub use semantics::{build_term_lts, unfold_count, TermLts};
pub use term::ProcessTerm;

#[cfg(test)]
mod tests;
