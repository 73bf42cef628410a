use serde::Serialize;

use super::{Budget, GroupError, Presentation, Word};

/// One step of a simplification log. Indices refer to the presentation as it
/// stands when the move is applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum TietzeMove {
    /// Replace a relator by its cyclic reduction.
    ReduceRelator { index: usize },
    /// Drop a relator that is empty or a cyclic conjugate of another relator
    /// (or of its inverse).
    RemoveRelator { index: usize },
    /// Solve `relator` for `generator` (which occurs in it exactly once),
    /// substitute everywhere, then drop both. Higher generators shift down.
    EliminateGenerator { generator: usize, relator: usize },
}

/// Output of simplification together with the maps back and forth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeResult {
    pub presentation: Presentation,
    pub moves: Vec<TietzeMove>,
    /// Image of each original generator as a word in the simplified generators.
    pub generator_images: Vec<Word>,
    /// Original generator index of each surviving generator.
    pub survivors: Vec<usize>,
}

impl TietzeResult {
    fn start(p: &Presentation) -> Self {
        TietzeResult {
            presentation: p.clone(),
            moves: Vec::new(),
            generator_images: (0..p.generators()).map(Word::generator).collect(),
            survivors: (0..p.generators()).collect(),
        }
    }

    /// Rewrites a word in the original generators into the simplified ones.
    pub fn forward(&self, w: &Word) -> Word {
        w.substitute(&self.generator_images)
    }

    /// Rewrites a word in the simplified generators into the original ones.
    pub fn backward(&self, w: &Word) -> Word {
        let images: Vec<Word> = self.survivors.iter().map(|&g| Word::generator(g)).collect();
        w.substitute(&images)
    }

    fn apply(&mut self, mv: TietzeMove) -> Result<(), GroupError> {
        let step = self.moves.len();
        let invalid = |reason: &str| GroupError::InvalidMove { index: step, reason: reason.to_string() };
        let gens = self.presentation.generators();
        let mut relators = self.presentation.relators().to_vec();
        match mv {
            TietzeMove::ReduceRelator { index } => {
                let r = relators.get(index).ok_or_else(|| invalid("relator index out of range"))?;
                relators[index] = r.cyclic_reduce();
                self.presentation = Presentation::new(gens, relators)?;
            }
            TietzeMove::RemoveRelator { index } => {
                let r = relators.get(index).ok_or_else(|| invalid("relator index out of range"))?;
                let key = r.cyclic_key();
                let redundant = key.is_empty()
                    || relators.iter().enumerate().any(|(i, s)| i != index && s.cyclic_key() == key);
                if !redundant {
                    return Err(invalid("relator is not derivable from the others"));
                }
                relators.remove(index);
                self.presentation = Presentation::new(gens, relators)?;
            }
            TietzeMove::EliminateGenerator { generator, relator } => {
                if generator >= gens {
                    return Err(invalid("generator out of range"));
                }
                let r = relators.get(relator).ok_or_else(|| invalid("relator index out of range"))?.clone();
                if r.occurrences(generator) != 1 {
                    return Err(invalid("generator must occur exactly once in the relator"));
                }
                let letters = r.letters();
                let pos = letters.iter().position(|l| l.generator == generator).expect("occurs once");
                let x = Word::from_letters(letters[..pos].to_vec());
                let y = Word::from_letters(letters[pos + 1..].to_vec());
                // x g y = 1 gives g = x⁻¹ y⁻¹; x g⁻¹ y = 1 gives g = y x.
                let solution = if letters[pos].inverse { y.mul(&x) } else { x.inverse().mul(&y.inverse()) };
                let reindex: Vec<Word> = (0..gens)
                    .map(|h| match h.cmp(&generator) {
                        std::cmp::Ordering::Less => Word::generator(h),
                        std::cmp::Ordering::Equal => Word::identity(),
                        std::cmp::Ordering::Greater => Word::generator(h - 1),
                    })
                    .collect();
                let mut images = reindex.clone();
                images[generator] = solution.substitute(&reindex);
                relators.remove(relator);
                let relators: Vec<Word> = relators.iter().map(|s| s.substitute(&images)).collect();
                self.presentation = Presentation::new(gens - 1, relators)?;
                self.generator_images = self.generator_images.iter().map(|w| w.substitute(&images)).collect();
                self.survivors.remove(generator);
            }
        }
        self.moves.push(mv);
        Ok(())
    }
}

/// Greedy simplification: cyclically reduce, drop redundant relators, and
/// eliminate generators through the shortest available defining relator.
/// Eliminations that would push the total relator length past
/// `budget.max_nodes` letters are skipped.
pub fn tietze_simplify(p: &Presentation, budget: &Budget) -> TietzeResult {
    let mut state = TietzeResult::start(p);
    loop {
        if let Some(mv) = next_move(&state.presentation, budget) {
            state.apply(mv).expect("generated moves are valid");
        } else {
            return state;
        }
    }
}

fn next_move(p: &Presentation, budget: &Budget) -> Option<TietzeMove> {
    let rels = p.relators();
    if let Some(index) = rels.iter().position(|r| r.cyclic_reduce() != *r) {
        return Some(TietzeMove::ReduceRelator { index });
    }
    if let Some(index) = rels.iter().position(Word::is_empty) {
        return Some(TietzeMove::RemoveRelator { index });
    }
    let keys: Vec<Word> = rels.iter().map(Word::cyclic_key).collect();
    for i in 0..keys.len() {
        if keys[..i].contains(&keys[i]) {
            return Some(TietzeMove::RemoveRelator { index: i });
        }
    }
    // Shortest relator first, then smallest generator.
    let total: usize = rels.iter().map(Word::len).sum();
    let mut best: Option<(usize, usize, usize)> = None;
    for (ri, r) in rels.iter().enumerate() {
        for g in 0..p.generators() {
            if r.occurrences(g) != 1 {
                continue;
            }
            let uses: usize = rels.iter().map(|s| s.occurrences(g)).sum::<usize>() - 1;
            let growth = uses * r.len().saturating_sub(1);
            if total + growth > budget.max_nodes {
                continue;
            }
            let cand = (r.len(), ri, g);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best.map(|(_, relator, generator)| TietzeMove::EliminateGenerator { generator, relator })
}

/// Applies a move log to `p`, rejecting any move whose side condition fails.
pub fn replay_tietze(p: &Presentation, moves: &[TietzeMove]) -> Result<TietzeResult, GroupError> {
    let mut state = TietzeResult::start(p);
    for mv in moves {
        state.apply(mv.clone())?;
    }
    Ok(state)
}
