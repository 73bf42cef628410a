use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::{Budget, Decision, GroupError, Presentation, Word, WordProblem};
use crate::intmat::{subgroup_invariants, AbelianInvariants, IntMatrix, Matrix};

/// How far the homomorphism property was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certification {
    /// Every source relator maps to a certified-trivial word.
    Certified,
    /// The listed source relators could not be certified within budget.
    Uncertified { relators: Vec<usize> },
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Word>,
    certification: Certification,
}

impl GroupHom {
    /// Builds the map and checks each relator image with `oracle` (which must
    /// be an oracle for `target`).
    pub fn with_oracle(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Word>,
        oracle: &WordProblem,
    ) -> Result<Self, GroupError> {
        let mut hom = GroupHom::unchecked(source, target, images)?;
        let mut pending = Vec::new();
        for (i, r) in hom.source.relators().iter().enumerate() {
            match oracle.is_trivial(&r.substitute(&hom.images)) {
                Decision::Yes => {}
                Decision::No => return Err(GroupError::NotAHomomorphism { relator: i }),
                Decision::Unknown => pending.push(i),
            }
        }
        if !pending.is_empty() {
            hom.certification = Certification::Uncertified { relators: pending };
        }
        Ok(hom)
    }

    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Word>,
        budget: &Budget,
    ) -> Result<Self, GroupError> {
        let oracle = WordProblem::new(&target, *budget);
        GroupHom::with_oracle(source, target, images, &oracle)
    }

    /// Validates shapes only; the caller vouches for the relators (for example
    /// maps induced by simplicial inclusions). Marked certified.
    pub fn unchecked(source: Arc<Presentation>, target: Arc<Presentation>, images: Vec<Word>) -> Result<Self, GroupError> {
        if images.len() != source.generators() {
            return Err(GroupError::ImageCount { expected: source.generators(), got: images.len() });
        }
        if let Some(g) = images.iter().filter_map(Word::max_generator).max() {
            if g >= target.generators() {
                return Err(GroupError::GeneratorOutOfRange { generator: g, generators: target.generators() });
            }
        }
        let images = images.iter().map(Word::free_reduce).collect();
        Ok(GroupHom { source, target, images, certification: Certification::Certified })
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let images = (0..p.generators()).map(Word::generator).collect();
        GroupHom { source: p.clone(), target: p, images, certification: Certification::Certified }
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    pub fn is_certified(&self) -> bool {
        self.certification == Certification::Certified
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom, GroupError> {
        if *self.target != *next.source {
            return Err(GroupError::MismatchedPresentations);
        }
        let images = self.images.iter().map(|w| next.apply(w)).collect();
        let certification = match (&self.certification, &next.certification) {
            (Certification::Certified, Certification::Certified) => Certification::Certified,
            (Certification::Uncertified { relators }, _) => Certification::Uncertified { relators: relators.clone() },
            _ => Certification::Uncertified { relators: (0..self.source.relators().len()).collect() },
        };
        Ok(GroupHom { source: self.source.clone(), target: next.target.clone(), images, certification })
    }

    /// Target generators × source generators matrix of exponent sums.
    pub fn abelianized_matrix(&self) -> IntMatrix {
        let n = self.target.generators();
        let cols: Vec<Vec<BigInt>> = self
            .images
            .iter()
            .map(|w| w.exponent_sums(n).into_iter().map(BigInt::from).collect())
            .collect();
        Matrix::from_columns(&cols, n)
    }

    /// Generator-wise equality with another map between the same presentations.
    pub fn agrees_with(&self, other: &GroupHom, oracle: &WordProblem) -> Decision {
        if self.images.len() != other.images.len() {
            return Decision::No;
        }
        let mut result = Decision::Yes;
        for (a, b) in self.images.iter().zip(&other.images) {
            match oracle.equal(a, b) {
                Decision::Yes => {}
                Decision::No => return Decision::No,
                Decision::Unknown => result = Decision::Unknown,
            }
        }
        result
    }
}

/// Computable stand-in for the image subgroup of a homomorphism.
#[derive(Clone, Debug)]
pub struct ImageDescriptor {
    pub hom: GroupHom,
    /// Invariants of the image of the abelianized map.
    pub invariants: AbelianInvariants,
    pub images: Vec<Word>,
}

pub fn image_descriptor(f: &GroupHom) -> ImageDescriptor {
    let invariants = subgroup_invariants(&f.abelianized_matrix(), &f.target.relator_matrix());
    ImageDescriptor { hom: f.clone(), invariants, images: f.images.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Arc<Presentation> {
        Arc::new(Presentation::parse(text).unwrap())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn hom(src: &Arc<Presentation>, dst: &Arc<Presentation>, imgs: &[&str]) -> GroupHom {
        GroupHom::new(src.clone(), dst.clone(), imgs.iter().map(|s| w(s)).collect(), &Budget::default()).unwrap()
    }

    #[test]
    fn composition() {
        let z = pres("gens: 1");
        let f = hom(&z, &z, &["a0 a0"]);
        let g = hom(&z, &z, &["a0 a0 a0"]);
        assert_eq!(f.then(&g).unwrap().images(), &[w("a0 a0 a0 a0 a0 a0")]);
        let id = GroupHom::identity(z.clone());
        assert_eq!(id.then(&f).unwrap().images(), f.images());
        assert_eq!(f.then(&id).unwrap().images(), f.images());
        let other = pres("gens: 2");
        assert_eq!(f.then(&GroupHom::identity(other)).unwrap_err(), GroupError::MismatchedPresentations);
    }

    #[test]
    fn abelianized_matrices() {
        let f2 = pres("gens: 2");
        assert_eq!(GroupHom::identity(f2.clone()).abelianized_matrix(), IntMatrix::identity(2));
        let z = pres("gens: 1");
        assert_eq!(hom(&z, &z, &["A0"]).abelianized_matrix(), IntMatrix::from_i64_rows(&[vec![-1]], 1));
        let m = hom(&f2, &f2, &["a0 a1", "a1"]).abelianized_matrix();
        assert_eq!(m, IntMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]], 2));
    }

    #[test]
    fn image_invariants() {
        let z = pres("gens: 1");
        assert_eq!(image_descriptor(&hom(&z, &z, &["a0 a0"])).invariants, AbelianInvariants::free(1));
        let f2 = pres("gens: 2");
        let z2 = pres("gens: 1\na0 a0");
        assert!(image_descriptor(&hom(&f2, &z2, &["1", "1"])).invariants.is_trivial());
        assert_eq!(image_descriptor(&hom(&f2, &z, &["a0", "a0"])).invariants, AbelianInvariants::free(1));
        let z4 = pres("gens: 1\na0 a0 a0 a0");
        assert_eq!(image_descriptor(&hom(&z4, &z4, &["a0 a0"])).invariants, AbelianInvariants::with_torsion(0, &[2]));
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let z2 = pres("gens: 1\na0 a0");
        let z = pres("gens: 1");
        let err = GroupHom::new(z2, z, vec![w("a0")], &Budget::default()).unwrap_err();
        assert_eq!(err, GroupError::NotAHomomorphism { relator: 0 });
    }
}
