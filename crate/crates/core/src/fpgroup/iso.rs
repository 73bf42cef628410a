use serde::Serialize;

use super::{replay_tietze, Budget, Decision, GroupHom, Presentation, TietzeMove, Word, WordProblem};
use crate::intmat::AbelianInvariants;

/// Replayable evidence that two presentations define isomorphic groups.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoWitness {
    /// The presentations are identical.
    Identity,
    /// Both logs simplify to the same presentation up to relator order and
    /// cyclic conjugation of relators.
    Tietze { left: Vec<TietzeMove>, right: Vec<TietzeMove> },
}

impl IsoWitness {
    /// Re-derives the certificate from scratch.
    pub fn replay(&self, p: &Presentation, q: &Presentation) -> bool {
        match self {
            IsoWitness::Identity => p == q,
            IsoWitness::Tietze { left, right } => match (replay_tietze(p, left), replay_tietze(q, right)) {
                (Ok(a), Ok(b)) => canonical(&a.presentation) == canonical(&b.presentation),
                _ => false,
            },
        }
    }
}

/// An invariant on which the two groups differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Distinction {
    Abelianization { left: AbelianInvariants, right: AbelianInvariants },
    FiniteOrder { left: usize, right: usize },
    /// Number of homomorphisms onto-or-into the symmetric group on 3 letters.
    HomsToS3 { left: usize, right: usize },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoCertificate {
    Verified { witness: IsoWitness },
    Refuted { distinction: Distinction },
    Inconclusive,
}

impl IsoCertificate {
    pub fn decision(&self) -> Decision {
        match self {
            IsoCertificate::Verified { .. } => Decision::Yes,
            IsoCertificate::Refuted { .. } => Decision::No,
            IsoCertificate::Inconclusive => Decision::Unknown,
        }
    }
}

fn canonical(p: &Presentation) -> (usize, Vec<Word>) {
    let mut keys: Vec<Word> = p.relators().iter().map(Word::cyclic_key).filter(|k| !k.is_empty()).collect();
    keys.sort();
    keys.dedup();
    (p.generators(), keys)
}

/// Largest generator count for which homomorphisms to S3 are enumerated.
const S3_PROBE_GENERATORS: usize = 5;

pub fn iso_certificate(p: &Presentation, q: &Presentation, budget: &Budget) -> IsoCertificate {
    if p == q {
        return IsoCertificate::Verified { witness: IsoWitness::Identity };
    }
    let (ap, aq) = (p.abelianization(), q.abelianization());
    if ap != aq {
        return IsoCertificate::Refuted { distinction: Distinction::Abelianization { left: ap, right: aq } };
    }
    let wp = WordProblem::new(p, *budget);
    let wq = WordProblem::new(q, *budget);
    let (sp, sq) = (wp.simplified(), wq.simplified());
    if canonical(&sp.presentation) == canonical(&sq.presentation) {
        let witness = IsoWitness::Tietze { left: sp.moves.clone(), right: sq.moves.clone() };
        return IsoCertificate::Verified { witness };
    }
    if let (Some(m), Some(n)) = (wp.finite_order(), wq.finite_order()) {
        if m != n {
            return IsoCertificate::Refuted { distinction: Distinction::FiniteOrder { left: m, right: n } };
        }
    }
    let (gp, gq) = (&sp.presentation, &sq.presentation);
    if gp.generators() <= S3_PROBE_GENERATORS && gq.generators() <= S3_PROBE_GENERATORS {
        let (m, n) = (count_homs_to_symmetric_group(gp), count_homs_to_symmetric_group(gq));
        if m != n {
            return IsoCertificate::Refuted { distinction: Distinction::HomsToS3 { left: m, right: n } };
        }
    }
    IsoCertificate::Inconclusive
}

type Perm3 = [u8; 3];

fn compose(a: &Perm3, b: &Perm3) -> Perm3 {
    [b[a[0] as usize], b[a[1] as usize], b[a[2] as usize]]
}

fn invert(a: &Perm3) -> Perm3 {
    let mut out = [0u8; 3];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// Brute-force count of homomorphisms from the group to S3.
pub fn count_homs_to_symmetric_group(p: &Presentation) -> usize {
    const S3: [Perm3; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let g = p.generators();
    let mut count = 0;
    let mut choice = vec![0usize; g];
    loop {
        let ok = p.relators().iter().all(|r| {
            let v = r.letters().iter().fold([0u8, 1, 2], |acc, l| {
                let x = S3[choice[l.generator]];
                compose(&acc, &if l.inverse { invert(&x) } else { x })
            });
            v == [0, 1, 2]
        });
        count += usize::from(ok);
        let mut i = 0;
        while i < g && choice[i] == 5 {
            choice[i] = 0;
            i += 1;
        }
        if i == g {
            return count;
        }
        choice[i] += 1;
    }
}

/// Checks that `f: P → Q` and `g: Q → P` are mutually inverse: both
/// composites fix every generator. Oracles are for `P` and `Q` respectively.
pub fn verify_inverse_homs(f: &GroupHom, g: &GroupHom, oracle_p: &WordProblem, oracle_q: &WordProblem) -> Decision {
    let (Ok(gf), Ok(fg)) = (f.then(g), g.then(f)) else { return Decision::No };
    let a = gf.agrees_with(&GroupHom::identity(f.source().clone()), oracle_p);
    let b = fg.agrees_with(&GroupHom::identity(g.source().clone()), oracle_q);
    match (a, b) {
        (Decision::Yes, Decision::Yes) if f.is_certified() && g.is_certified() => Decision::Yes,
        (Decision::Yes, Decision::Yes) => Decision::Unknown,
        (Decision::No, _) | (_, Decision::No) => Decision::No,
        _ => Decision::Unknown,
    }
}
