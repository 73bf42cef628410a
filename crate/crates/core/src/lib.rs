//! Persistent fundamental groups and persistent homology of filtered
//! simplicial complexes.
//!
//! Everything is generic over a [`Scalar`] filtration value; use the aliases
//! below for the common choices.

pub mod corpus;
pub mod diagram;
pub mod field;
pub mod filtration;
pub mod fpgroup;
pub mod homology;
pub mod interleaving;
pub mod intmat;
pub mod pi1;
pub mod scalar;
pub mod vankampen;
mod unionfind;

use serde::Serialize;

pub use scalar::{Extended, Scalar};

/// Exact rational filtration values.
pub type Q = num_rational::BigRational;

pub type FilteredComplexF64 = filtration::FilteredComplex<f64>;
pub type FilteredComplexQ = filtration::FilteredComplex<Q>;
pub type PersistenceDiagramF64 = diagram::PersistenceDiagram<f64>;
pub type PersistenceDiagramQ = diagram::PersistenceDiagram<Q>;

/// Outcome of a theorem check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
    Inapplicable,
}

impl Verdict {
    /// Combines verdicts: any refutation wins, then inconclusive, then
    /// inapplicable; verified only if all are verified.
    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Verified;
        for v in items {
            out = match (out, v) {
                (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                (Verdict::Inapplicable, _) | (_, Verdict::Inapplicable) => Verdict::Inapplicable,
                _ => Verdict::Verified,
            };
        }
        out
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}
