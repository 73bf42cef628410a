use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{todd_coxeter, tietze_simplify, Budget, CosetTable, Decision, Presentation, TietzeResult, Word};
use crate::intmat::{column_echelon, ColumnEchelon};

/// Word-problem oracle for one presentation. Precomputes a Tietze-simplified
/// form and caches the coset enumeration, so repeated queries against the same
/// target stay cheap. All `Yes`/`No` answers are certified.
pub struct WordProblem {
    budget: Budget,
    simplified: TietzeResult,
    keys: HashSet<Word>,
    /// Cyclic reductions of the simplified relators and their inverses.
    relator_words: Vec<Word>,
    lattice: ColumnEchelon,
    cyclic_order: Option<BigInt>,
    table: OnceLock<Option<CosetTable>>,
}

impl WordProblem {
    pub fn new(p: &Presentation, budget: Budget) -> Self {
        let simplified = tietze_simplify(p, &budget);
        let sp = &simplified.presentation;
        let keys = sp.relators().iter().map(Word::cyclic_key).collect();
        let relator_words = sp
            .relators()
            .iter()
            .flat_map(|r| {
                let c = r.cyclic_reduce();
                [c.inverse(), c]
            })
            .filter(|r| !r.is_empty())
            .collect();
        let lattice = column_echelon(&sp.relator_matrix(), false);
        let cyclic_order = (sp.generators() == 1).then(|| {
            sp.relators().iter().fold(BigInt::from(0), |g, r| g.gcd(&BigInt::from(r.exponent_sums(1)[0])))
        });
        WordProblem { budget, simplified, keys, relator_words, lattice, cyclic_order, table: OnceLock::new() }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn simplified(&self) -> &TietzeResult {
        &self.simplified
    }

    /// Complete coset table over the trivial subgroup, when the group is
    /// finite and small enough for the budget.
    pub fn finite_table(&self) -> Option<&CosetTable> {
        self.table
            .get_or_init(|| todd_coxeter(&self.simplified.presentation, &[], self.budget.max_cosets).table().cloned())
            .as_ref()
    }

    /// Order of the group if it was certified finite.
    pub fn finite_order(&self) -> Option<usize> {
        if self.simplified.presentation.generators() == 0 {
            return Some(1);
        }
        self.finite_table().map(CosetTable::index)
    }

    /// Decides whether `w` (in the original generators) is the identity.
    pub fn is_trivial(&self, w: &Word) -> Decision {
        let sp = &self.simplified.presentation;
        let w = self.simplified.forward(w).cyclic_reduce();
        if w.is_empty() {
            return Decision::Yes;
        }
        if sp.relators().is_empty() {
            return Decision::No;
        }
        if let Some(d) = &self.cyclic_order {
            let e = BigInt::from(w.exponent_sums(1)[0]);
            let trivial = if d == &BigInt::from(0) { e == BigInt::from(0) } else { e.is_multiple_of(d) };
            return if trivial { Decision::Yes } else { Decision::No };
        }
        if self.keys.contains(&w.cyclic_key()) {
            return Decision::Yes;
        }
        let sums: Vec<BigInt> = w.exponent_sums(sp.generators()).into_iter().map(BigInt::from).collect();
        if self.lattice.coordinates(&sums).is_none() {
            return Decision::No;
        }
        if self.dehn_reduce(&w).is_empty() {
            return Decision::Yes;
        }
        if let Some(table) = self.finite_table() {
            return if table.trace(0, &w) == 0 { Decision::Yes } else { Decision::No };
        }
        if self.rewrite_search(&w) {
            Decision::Yes
        } else {
            Decision::Unknown
        }
    }

    /// Two words represent the same element.
    pub fn equal(&self, a: &Word, b: &Word) -> Decision {
        self.is_trivial(&a.mul(&b.inverse()))
    }

    /// Greedy shortening: replace any subword covering more than half of a
    /// cyclic relator rotation by the inverse of the remainder.
    fn dehn_reduce(&self, w: &Word) -> Word {
        let mut current = w.cyclic_reduce();
        'outer: loop {
            if current.is_empty() {
                return current;
            }
            for r in &self.relator_words {
                let n = r.len();
                for k in 0..n {
                    let rot = r.rotate(k);
                    let rl = rot.letters();
                    let cl = current.letters();
                    for len in (n / 2 + 1..=n.min(cl.len())).rev() {
                        let piece = &rl[..len];
                        if let Some(pos) = cl.windows(len).position(|win| win == piece) {
                            // piece · rest = 1  ⇒  piece = rest⁻¹
                            let rest = Word::from_letters(rl[len..].to_vec()).inverse();
                            let before = Word::from_letters(cl[..pos].to_vec());
                            let after = Word::from_letters(cl[pos + len..].to_vec());
                            current = before.mul(&rest).mul(&after).cyclic_reduce();
                            continue 'outer;
                        }
                    }
                }
            }
            return current;
        }
    }

    /// Best-first search over cyclic words: insert a relator rotation at any
    /// position and cyclically reduce. Conjugation preserves triviality, so
    /// states are taken up to rotation and inversion.
    fn rewrite_search(&self, w: &Word) -> bool {
        let start = self.dehn_reduce(w).cyclic_key();
        if start.is_empty() {
            return true;
        }
        let rotations: Vec<Word> = self
            .relator_words
            .iter()
            .flat_map(|r| (0..r.len()).map(move |k| r.rotate(k)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut seen: HashSet<Word> = HashSet::new();
        let mut frontier: BTreeSet<(usize, Word)> = BTreeSet::new();
        seen.insert(start.clone());
        frontier.insert((start.len(), start));
        let mut generated = 1usize;
        while let Some((_, cur)) = frontier.pop_first() {
            let letters = cur.letters();
            for pos in 0..=letters.len() {
                let before = Word::from_letters(letters[..pos].to_vec());
                let after = Word::from_letters(letters[pos..].to_vec());
                for r in &rotations {
                    let next = before.mul(r).mul(&after).cyclic_key();
                    if next.is_empty() {
                        return true;
                    }
                    if next.len() > self.budget.max_word_length || !seen.insert(next.clone()) {
                        continue;
                    }
                    generated += 1;
                    if generated > self.budget.max_nodes {
                        return false;
                    }
                    frontier.insert((next.len(), next));
                }
            }
        }
        false
    }
}

/// One-shot convenience wrapper around [`WordProblem`].
pub fn word_is_trivial(p: &Presentation, w: &Word, budget: &Budget) -> Decision {
    WordProblem::new(p, *budget).is_trivial(w)
}
