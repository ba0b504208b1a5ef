//! Lifts of reflexive voltage trees over cyclic groups, with constructive
//! Hamiltonian cycles, 2-factors, and long cycles, and independent
//! validators that certify every output.

pub mod billiard;
pub mod error;
pub mod group;
pub mod lift;
pub mod long_cycle;
pub mod oracle;
pub mod path_ham;
pub mod perm;
pub mod prime_ham;
pub mod text;
pub mod tree_ham;
pub mod voltage;

pub use error::{Error, Result};
pub use group::Group;
pub use lift::{build_lift, EdgeSet, LiftEdge, LiftGraph, LiftVertex};
pub use path_ham::{AlternatingEdgeSet, CycleCertificate, TwoFactorResult};
pub use perm::Perm;
pub use prime_ham::IntegerLabeledTree;
pub use tree_ham::Decomposition;
pub use voltage::{normalize_cut_edges, rescale_by_unit, VoltageTree};
