//! Residue tables `F : Z/NZ -> {0, 1}` and a finite simulation of the
//! uniformization argument over ladder systems.

mod chain;
mod ladder;
mod lemmas;
mod residue;

pub use chain::{
    build_chain, recode, simulate, ChainState, HEntry, LevelReport, RecodedLevel, SimulationReport, Stage, WValue,
};
pub use ladder::{y_name, z_name, LadderInstance, Level, Plan, Subcase, SCHEMA};
pub use lemmas::{
    lemma2_table, lemma3_table, lemma4_table, lemma_sub2_table, mu_weights, shift_disjoint, shift_disjoint_in, t_p,
    t_sequence, BlockTable, Lemma2Table, Lemma4Table, Shift, MAX_TABLE_INTERVALS,
};
pub use residue::{IntervalSet, ResidueTable};

use crate::abelian::AbelianError;

#[derive(Debug, thiserror::Error)]
pub enum UnifError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no shift separates a set of {y} residues from {y_prime}")]
    NoShift { y: usize, y_prime: String },
    #[error("malformed residue table: {0}")]
    Table(String),
    #[error("invalid ladder instance: {0}")]
    Instance(String),
    #[error("the extension does not split; certificate y = [{}]", .0.join(", "))]
    Splitting(Vec<String>),
    #[error("inconsistent coloring: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}
