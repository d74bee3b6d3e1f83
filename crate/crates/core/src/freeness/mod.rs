//! Transversals, Hall certificates and reshuffling orders for finite families.

mod kfree;
mod matching;
mod reshuffle;

pub use kfree::{k_free_check, smallest_violator, KFreeResult};
pub use matching::{find_transversal, HallCertificate, Transversal, TransversalResult};
pub use reshuffle::{find_reshuffling, find_reshuffling_backtracking, ReshuffleOutcome, ReshufflingOrder};
