use std::fmt;
use std::str::FromStr;

use super::GroupError;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index in a coset table: `2 * generator + inverse`.
    pub(crate) fn column(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }
}

/// A word in generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    /// Builds a word from signed one-based indices: `2` is the second generator,
    /// `-1` the inverse of the first.
    pub fn from_signed(indices: &[i64]) -> Self {
        Word(
            indices
                .iter()
                .map(|&i| {
                    assert!(i != 0, "signed generator indices are one-based");
                    Letter::new(i.unsigned_abs() as usize - 1, i < 0)
                })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len() + other.len());
        for &l in self.0.iter().chain(&other.0) {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Plain concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn free_reduce(&self) -> Word {
        self.mul(&Word::identity())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Free reduction followed by stripping cancelling first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut out = self.0[k..].to_vec();
        out.extend_from_slice(&self.0[..k]);
        Word(out)
    }

    /// True when `other` is a cyclic rotation of `self`.
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.len() == other.len() && (0..self.len().max(1)).any(|k| self.rotate(k) == *other)
    }

    /// Lexicographically least word among rotations of the cyclic reduction and
    /// of its inverse; two relators with equal keys define the same normal closure.
    pub fn cyclic_key(&self) -> Word {
        let c = self.cyclic_reduce();
        let inv = c.inverse();
        (0..c.len().max(1))
            .flat_map(|k| [c.rotate(k), inv.rotate(k)])
            .min()
            .unwrap_or_default()
    }

    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generators];
        for l in &self.0 {
            sums[l.generator] += l.sign();
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.0.iter().filter(|l| l.generator == generator).count()
    }

    /// Replaces each generator `g` by `images[g]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        let mut push = |l: Letter| {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        };
        for l in &self.0 {
            let img = &images[l.generator].0;
            if l.inverse {
                img.iter().rev().for_each(|x| push(x.inv()));
            } else {
                img.iter().for_each(|&x| push(x));
            }
        }
        Word(out)
    }

    /// Adds `offset` to every generator index.
    pub fn shift(&self, offset: usize) -> Word {
        Word(self.0.iter().map(|l| Letter::new(l.generator + offset, l.inverse)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if l.inverse { 'A' } else { 'a' }, l.generator)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    /// Parses `a0 A1 a2`; `1` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (inverse, rest) = match tok.as_bytes().first() {
                Some(b'a') => (false, &tok[1..]),
                Some(b'A') => (true, &tok[1..]),
                _ => return Err(GroupError::Parse(format!("bad letter `{tok}`"))),
            };
            let generator = rest
                .parse::<usize>()
                .map_err(|_| GroupError::Parse(format!("bad generator index in `{tok}`")))?;
            letters.push(Letter::new(generator, inverse));
        }
        Ok(Word(letters))
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(w("a0 A0 a1").free_reduce(), w("a1"));
        assert_eq!(Word::identity().free_reduce(), Word::identity());
        assert_eq!(w("a0 a1 A1 A0").free_reduce(), Word::identity());
    }

    #[test]
    fn cyclic_reduction_and_keys() {
        assert_eq!(w("a1 a0 a0 A1").cyclic_reduce(), w("a0 a0"));
        assert_eq!(w("a0 a1").cyclic_key(), w("a1 a0").cyclic_key());
        assert_eq!(w("a0 a1").cyclic_key(), w("A1 A0").cyclic_key());
        assert_ne!(w("a0 a1").cyclic_key(), w("a0 A1").cyclic_key());
    }

    #[test]
    fn text_roundtrip() {
        let word = w("a0 A1 a2");
        assert_eq!(word.to_string(), "a0 A1 a2");
        assert_eq!(w("1"), Word::identity());
        assert!("b0".parse::<Word>().is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..16)
            .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_shortening(word in arb_word()) {
            let r = word.free_reduce();
            prop_assert!(r.len() <= word.len());
            prop_assert_eq!(r.free_reduce(), r.clone());
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(word.exponent_sums(3), r.exponent_sums(3));
        }

        #[test]
        fn inverse_cancels(word in arb_word()) {
            prop_assert!(word.mul(&word.inverse()).is_empty());
        }
    }
}
