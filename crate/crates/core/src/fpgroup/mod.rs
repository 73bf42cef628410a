//! Finitely presented groups: words, presentations, Tietze moves, coset
//! enumeration and sound tri-state decision procedures.

mod coset;
mod hom;
mod iso;
mod oracle;
mod presentation;
mod stallings;
mod tietze;
mod word;

use thiserror::Error;

pub use coset::{todd_coxeter, CosetTable, Enumeration};
pub use hom::{image_descriptor, Certification, GroupHom, ImageDescriptor};
pub use iso::{count_homs_to_symmetric_group, iso_certificate, verify_inverse_homs, Distinction, IsoCertificate, IsoWitness};
pub use oracle::{word_is_trivial, WordProblem};
pub use presentation::{free_product, FreeProductIndex, Presentation};
pub use stallings::free_subgroup_rank;
pub use tietze::{replay_tietze, tietze_simplify, TietzeMove, TietzeResult};
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("generator {generator} out of range for {generators} generators")]
    GeneratorOutOfRange { generator: usize, generators: usize },
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("composition of homomorphisms with mismatched presentations")]
    MismatchedPresentations,
    #[error("relator {relator} does not map to the identity")]
    NotAHomomorphism { relator: usize },
    #[error("invalid Tietze move {index}: {reason}")]
    InvalidMove { index: usize, reason: String },
}

/// Resource limits for the semi-decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Budget {
    /// Longest intermediate word in rewriting searches.
    pub max_word_length: usize,
    /// Words visited by the rewriting search.
    pub max_nodes: usize,
    /// Cosets defined by Todd–Coxeter.
    pub max_cosets: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_word_length: 32, max_nodes: 100_000, max_cosets: 10_000 }
    }
}

impl Budget {
    pub fn tiny() -> Self {
        Budget { max_word_length: 4, max_nodes: 16, max_cosets: 4 }
    }
}

/// Answer of a sound semi-decision procedure. `Yes` and `No` are certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}
