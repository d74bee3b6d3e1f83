//! The group `G = F/K` built from a λ-system with primes and coefficients,
//! the witness equations over it, and basis candidates for its quotients.

mod basis;
mod doc;
mod system;
mod witness;

pub use basis::{enumerate_basis, verify_basis, AtomCoset, BasisCandidate, BasisReport, Expression, ZCoset};
pub use doc::{coloring_from_json, coloring_to_json, Primes, WhiteheadDoc, WitnessDoc, SCHEMA};
pub use system::{build_g, z_name, WhiteheadSystem};
pub use witness::{
    solve_witness, theta_extends, transport_witness, verify_infeasibility, verify_witness, Coloring, EquationFailure,
    Witness, WitnessCheck, WitnessOutcome,
};

use crate::abelian::AbelianError;
use crate::lambda_core::node_key;

#[derive(Debug, thiserror::Error)]
pub enum WhiteheadError {
    #[error("invalid system: {}", .0.join("; "))]
    InvalidSystem(Vec<String>),
    #[error("truncation J = {j} is too small for r = {r}; need J >= r + 2")]
    TruncationTooSmall { j: usize, r: usize },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("bad reshuffling order: {0}")]
    BadOrder(String),
    #[error("malformed document: {0}")]
    Doc(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

pub(crate) fn ser_node<S: serde::Serializer>(node: &[u32], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&node_key(node))
}
