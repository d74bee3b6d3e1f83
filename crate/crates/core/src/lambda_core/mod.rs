//! Finite skeletons of λ-systems and the families of sets based on them.

mod atom;
mod beautiful;
mod doc;
mod family;
mod node;
mod skeleton;
mod transform;

pub use atom::Atom;
pub use beautiful::{check_beautiful, BeautifulReport, CarrierOverlap, PropertyCheck, SliceOverlap, TreeBreak};
pub use doc::LambdaDoc;
pub use family::{derived_system, BasedFamily};
pub use node::{is_prefix, lex_compare, node_key, parent, parse_node_key, Node};
pub use skeleton::{Clause, Largeness, SystemSkeleton, ValidationReport, Violation};
pub use transform::{transform_disjoint, transform_tree, Transformed};

#[derive(Debug, thiserror::Error)]
pub enum LambdaError {
    #[error("invalid node key {0:?}")]
    InvalidNodeKey(String),
    #[error("invalid atom {input:?} at byte {position}: {reason}")]
    InvalidAtom { input: String, position: usize, reason: String },
    #[error("unknown largeness predicate {0:?}")]
    UnknownLargeness(String),
    #[error("node {0:?} is not in the tree")]
    UnknownNode(String),
    #[error("derived system undefined at final node {0:?}")]
    FinalNode(String),
    #[error("malformed document: {0}")]
    Doc(String),
}
