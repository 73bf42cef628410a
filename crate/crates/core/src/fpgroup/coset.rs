use super::{Letter, Presentation, Word};

/// Complete coset table: `action[c][col]` is the image of coset `c` under the
/// letter with column `col` (`2 * generator + inverse`). Coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    action: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Number of cosets (the subgroup index).
    pub fn index(&self) -> usize {
        self.action.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.action[coset][letter.column()]
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Permutation of cosets induced by a generator.
    pub fn permutation(&self, generator: usize) -> Vec<usize> {
        (0..self.index()).map(|c| self.act(c, Letter::new(generator, false))).collect()
    }

    /// Every relator closes at every coset, generators act as permutations
    /// and the action is transitive.
    pub fn is_valid_for(&self, p: &Presentation) -> bool {
        let n = self.index();
        for g in 0..self.generators {
            let fwd = Letter::new(g, false);
            if (0..n).any(|c| self.act(self.act(c, fwd), fwd.inv()) != c) {
                return false;
            }
        }
        if !(0..n).all(|c| p.relators().iter().all(|r| self.trace(c, r) == c)) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for col in 0..2 * self.generators {
                let d = self.action[c][col];
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Outcome of a bounded enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete(CosetTable),
    Inconclusive,
}

impl Enumeration {
    pub fn table(&self) -> Option<&CosetTable> {
        match self {
            Enumeration::Complete(t) => Some(t),
            Enumeration::Inconclusive => None,
        }
    }
}

struct Enumerator<'a> {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    live: usize,
    max_cosets: usize,
    total_limit: usize,
    relators: &'a [Word],
}

struct Overflow;

impl Enumerator<'_> {
    fn new_coset(&mut self) -> Result<usize, Overflow> {
        if self.live >= self.max_cosets || self.table.len() >= self.total_limit {
            return Err(Overflow);
        }
        self.table.push(vec![None; self.cols]);
        self.parent.push(self.table.len() - 1);
        self.live += 1;
        Ok(self.table.len() - 1)
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        self.live -= 1;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                let xi = x ^ 1;
                if self.table[f][xi] == Some(e) {
                    self.table[f][xi] = None;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][xi] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][xi] = Some(e1);
                }
            }
        }
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), Overflow> {
        let d = self.new_coset()?;
        self.table[c][col] = Some(d);
        self.table[d][col ^ 1] = Some(c);
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, w: &Word) -> Result<(), Overflow> {
        let letters: Vec<usize> = w.letters().iter().map(|l| l.column()).collect();
        if letters.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = letters.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.table[f][letters[i]] {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][letters[j as usize] ^ 1] {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][letters[i]] = Some(b);
                self.table[b][letters[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, letters[i])?;
        }
    }

    fn run(&mut self, subgroup: &[Word]) -> Result<(), Overflow> {
        self.new_coset()?;
        for w in subgroup {
            self.scan_and_fill(0, w)?;
        }
        let mut c = 0;
        while c < self.table.len() {
            for r in self.relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan_and_fill(c, r)?;
            }
            for col in 0..self.cols {
                if !self.is_live(c) {
                    break;
                }
                if self.table[c][col].is_none() {
                    self.define(c, col)?;
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn compact(mut self) -> Option<Vec<Vec<usize>>> {
        let live: Vec<usize> = (0..self.table.len()).filter(|&c| self.is_live(c)).collect();
        let mut renumber = vec![usize::MAX; self.table.len()];
        for (k, &c) in live.iter().enumerate() {
            renumber[c] = k;
        }
        let mut out = Vec::with_capacity(live.len());
        for &c in &live {
            let mut row = Vec::with_capacity(self.cols);
            for col in 0..self.cols {
                let d = self.rep(self.table[c][col]?);
                row.push(renumber[d]);
            }
            out.push(row);
        }
        Some(out)
    }
}

/// Hasse–Low–Todd–Coxeter enumeration of the cosets of the subgroup generated
/// by `subgroup`, with at most `max_cosets` live cosets (and a proportional
/// cap on total definitions). Never returns an incorrect table: the result is
/// re-checked before being reported complete.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Enumeration {
    let mut e = Enumerator {
        cols: 2 * p.generators(),
        table: Vec::new(),
        parent: Vec::new(),
        live: 0,
        max_cosets: max_cosets.max(1),
        total_limit: max_cosets.max(1).saturating_mul(8),
        relators: p.relators(),
    };
    if e.run(subgroup).is_err() {
        return Enumeration::Inconclusive;
    }
    let Some(action) = e.compact() else { return Enumeration::Inconclusive };
    let table = CosetTable { generators: p.generators(), action };
    let closes = subgroup.iter().all(|w| table.trace(0, w) == 0);
    if closes && table.is_valid_for(p) {
        Enumeration::Complete(table)
    } else {
        Enumeration::Inconclusive
    }
}
