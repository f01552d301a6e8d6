//! Finite metric spaces and the basic analysis built on them.

mod chains;
mod doubling;
mod extension;
mod space;
mod whitney;

pub use chains::{
    delta_components, find_relative_alpha_chain, find_relative_alpha_chain_in, is_relative_chain,
    max_step, relative_ratio, uniform_disconnectedness_constant, Chain, ChainKind,
    Disconnectedness,
};
pub use doubling::{doubling_constant, DoublingReport, EXACT_DOUBLING_LIMIT};
pub use extension::{lipschitz_on, mcshane_extend};
pub use space::{validate_metric, FiniteMetricSpace, ValidationReport};
pub use whitney::{epsilon_prime, whitney_net, WhitneyCheck, WhitneyNet};
