//! Exact integer linear algebra and finitely generated abelian groups.

mod matrix;
mod nonfree;
mod normal_form;
mod presentation;
mod solve;

pub use matrix::{dot, IntMatrix};
pub use nonfree::{
    build_h, divisibility_evidence, evaluate_relation, in_subgroup_mod_relations, DivisibilityEvidence,
    DivisibilityStep, NonfreeSpec,
};
pub use normal_form::{hnf, snf, HermiteDecomposition, RowLattice, SmithDecomposition};
pub use presentation::{BasisCheck, Presentation, PresentationDoc};
pub use solve::{max_abs, solve_z, InfeasibilityCertificate, LinearSystem, Solution};

#[derive(Debug, thiserror::Error)]
pub enum AbelianError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("invalid group specification: {0}")]
    Spec(String),
    #[error("truncation J = {j} is too small for r = {r}; need J >= r + 2")]
    TruncationTooSmall { j: usize, r: usize },
}
