use std::fmt;

use num_bigint::BigInt;

use super::{GroupError, Word};
use crate::intmat::{AbelianInvariants, IntMatrix, Matrix};

/// A finitely presented group `⟨g0, …, g(n-1) | relators⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    /// Validates generator indices and freely reduces the relators.
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= generators {
                    return Err(GroupError::GeneratorOutOfRange { generator: g, generators });
                }
            }
        }
        Ok(Presentation { generators, relators: relators.iter().map(Word::free_reduce).collect() })
    }

    pub fn trivial() -> Self {
        Presentation::default()
    }

    pub fn free(rank: usize) -> Self {
        Presentation { generators: rank, relators: Vec::new() }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn has_generator(&self, word: &Word) -> bool {
        word.max_generator().is_none_or(|g| g < self.generators)
    }

    /// Generators × relators matrix of exponent sums.
    pub fn relator_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|r| r.exponent_sums(self.generators).into_iter().map(BigInt::from).collect())
            .collect();
        Matrix::from_columns(&cols, self.generators)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        AbelianInvariants::of_cokernel(&self.relator_matrix())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators);
        for r in &self.relators {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses `gens: n` followed by one relator per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GroupError::Parse("missing `gens:` header".into()))?;
        let count = header
            .strip_prefix("gens:")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| GroupError::Parse(format!("bad header `{header}`")))?;
        let relators = lines.map(str::parse).collect::<Result<Vec<Word>, _>>()?;
        Presentation::new(count, relators)
    }

    /// Presentation with the same generators and an extra relator list.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, GroupError> {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Presentation::new(self.generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | ", self.generators)?;
        let rels: Vec<String> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "{}>", rels.join(", "))
    }
}

/// Where the factors of a free product landed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeProductIndex {
    pub left_offset: usize,
    pub right_offset: usize,
}

impl FreeProductIndex {
    pub fn left(&self, w: &Word) -> Word {
        w.shift(self.left_offset)
    }

    pub fn right(&self, w: &Word) -> Word {
        w.shift(self.right_offset)
    }
}

/// Free product: disjoint union of generators and relators.
pub fn free_product(p: &Presentation, q: &Presentation) -> (Presentation, FreeProductIndex) {
    let index = FreeProductIndex { left_offset: 0, right_offset: p.generators };
    let mut relators: Vec<Word> = p.relators.clone();
    relators.extend(q.relators.iter().map(|r| index.right(r)));
    (Presentation { generators: p.generators + q.generators, relators }, index)
}

impl serde::Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(Presentation::free(2).abelianization(), AbelianInvariants::free(2));
        assert_eq!(pres("gens: 1\na0 a0").abelianization(), AbelianInvariants::with_torsion(0, &[2]));
        let p = pres("gens: 2\na0 a1 A0 A1\na0 a0");
        assert_eq!(p.abelianization(), AbelianInvariants::with_torsion(1, &[2]));
    }

    #[test]
    fn free_product_examples() {
        let (p, _) = free_product(&Presentation::free(1), &Presentation::free(1));
        assert_eq!(p, Presentation::free(2));
        let x = pres("gens: 2\na0 a1 A0 A1");
        assert_eq!(free_product(&x, &Presentation::trivial()).0, x);
        let (z, idx) = free_product(&pres("gens: 1\na0 a0"), &pres("gens: 1\na0 a0 a0"));
        assert_eq!(z.generators(), 2);
        assert_eq!(z.relators(), &[pres("gens: 2\na0 a0").relators()[0].clone(), "a1 a1 a1".parse().unwrap()]);
        assert_eq!(idx.right_offset, 1);
    }

    #[test]
    fn text_format_roundtrip_and_errors() {
        let p = pres("# cyclic\ngens: 2\na0 A1\n1\n");
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
        assert!(Presentation::parse("gens: 1\na1").is_err());
        assert!(Presentation::parse("a0").is_err());
    }
}
