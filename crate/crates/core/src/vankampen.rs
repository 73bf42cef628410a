//! Persistent Van Kampen: the homomorphisms between two levels of a cover,
//! the amalgamated quotient `Q_uv`, the map `φ^{u,v}` and its certificates,
//! and the level-wise maps `r_u` packaged as shift families.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::filtration::{CoverFiltration, Piece, Vertex};
use crate::fpgroup::{
    free_product, free_subgroup_rank, image_descriptor, iso_certificate, tietze_simplify, todd_coxeter, verify_inverse_homs, Budget,
    Decision, Enumeration, FreeProductIndex, GroupError, GroupHom, IsoCertificate, Presentation, Word, WordProblem,
};
use crate::interleaving::{
    GroupFlavor, GroupObject, InterleavingError, InterleavingWitness, Persistence, ShiftFamily,
};
use crate::interleaving::Flavor;
use crate::intmat::{kernel_basis, subgroup_invariants, AbelianInvariants, IntMatrix, Matrix};
use crate::pi1::{induced_hom, EdgePathPresentation, Pi1Error};
use crate::scalar::Scalar;
use crate::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VanKampenError {
    #[error("{piece:?} is empty or not path-connected at level {level}")]
    Disconnected { piece: Piece, level: String },
    #[error("basepoint {basepoint} is not in the intersection at level {level}")]
    BasepointAbsent { basepoint: Vertex, level: String },
    #[error("levels out of order: {u} > {v}")]
    LevelOrder { u: String, v: String },
    #[error("loop must start and end at the basepoint")]
    NotALoop,
    #[error("edge {0:?} lies in neither cover piece")]
    CoverViolation((Vertex, Vertex)),
    #[error("symbol {symbol} out of range for {symbols} image generators")]
    Symbol { symbol: usize, symbols: usize },
    #[error("{piece:?} at one level is not contained in the other at the shifted level")]
    NotNested { piece: Piece },
    #[error(transparent)]
    Pi1(#[from] Pi1Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Interleaving(#[from] InterleavingError),
}

/// One factor `j_A(a)` or `j_B(b)` of a loop factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub piece: Piece,
    /// Closed vertex path in the piece: tree path in `C_u`, the run, tree path back.
    pub path: Vec<Vertex>,
    /// The path as a word in the piece's presentation.
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub factors: Vec<Factor>,
    /// Product of the factors as a word in the free-product symbols.
    pub symbols: Word,
    /// Whether the product of the factors equals the loop in `π₁(X_u)`.
    pub certified: Decision,
}

/// Edge-path presentations of `X_u, A_u, B_u, C_u` at one level.
#[derive(Clone, Debug)]
pub struct CoverLevel<T> {
    pub level: T,
    pub x: EdgePathPresentation,
    pub a: EdgePathPresentation,
    pub b: EdgePathPresentation,
    pub c: EdgePathPresentation,
    a_vertices: BTreeSet<Vertex>,
}

impl<T: Scalar> CoverLevel<T> {
    /// Checks that `A_u, B_u, C_u` are path-connected and that `C_u`
    /// contains the basepoint.
    pub fn new(cov: &CoverFiltration<T>, u: &T, basepoint: Vertex) -> Result<Self, VanKampenError> {
        let level = u.to_string();
        let c_snap = cov.at(Piece::C, u);
        if !c_snap.has_vertex(basepoint) {
            return Err(VanKampenError::BasepointAbsent { basepoint, level });
        }
        for piece in [Piece::A, Piece::B, Piece::C] {
            if !cov.at(piece, u).is_connected() {
                return Err(VanKampenError::Disconnected { piece, level });
            }
        }
        Ok(CoverLevel {
            level: u.clone(),
            x: EdgePathPresentation::new(&cov.at(Piece::Total, u), basepoint)?,
            a: EdgePathPresentation::new(&cov.at(Piece::A, u), basepoint)?,
            b: EdgePathPresentation::new(&cov.at(Piece::B, u), basepoint)?,
            c: EdgePathPresentation::new(&c_snap, basepoint)?,
            a_vertices: cov.vertices(Piece::A),
        })
    }

    pub fn piece(&self, piece: Piece) -> &EdgePathPresentation {
        match piece {
            Piece::Total => &self.x,
            Piece::A => &self.a,
            Piece::B => &self.b,
            Piece::C => &self.c,
        }
    }

    /// `π₁(A_u) ∗ π₁(B_u)` with the symbol index map.
    pub fn free_product(&self) -> (Presentation, FreeProductIndex) {
        free_product(self.a.presentation(), self.b.presentation())
    }

    /// `i_A(w) i_B(w)⁻¹` for each generator `w` of `π₁(C_u)`, in free-product symbols.
    pub fn n_relators(&self) -> Vec<Word> {
        let (_, idx) = self.free_product();
        (0..self.c.presentation().generators())
            .map(|g| {
                let path = self.c.generator_loop(g);
                idx.left(&self.a.path_word(&path)).mul(&idx.right(&self.b.path_word(&path)).inverse())
            })
            .collect()
    }

    /// `(π₁(A_u) ∗ π₁(B_u)) / N_u`.
    pub fn quotient(&self) -> Presentation {
        let (fp, _) = self.free_product();
        fp.with_relators(self.n_relators()).expect("relators use free-product symbols")
    }

    /// Images of the free-product symbols in `π₁(X_u)`: `j_A` then `j_B`.
    pub fn phi_images(&self) -> Vec<Word> {
        let a = (0..self.a.presentation().generators()).map(|g| self.x.path_word(&self.a.generator_loop(g)));
        let b = (0..self.b.presentation().generators()).map(|g| self.x.path_word(&self.b.generator_loop(g)));
        a.chain(b).collect()
    }

    /// Splits a based edge loop of `X_u` into maximal runs inside `A_u` or
    /// `B_u` (ties go to `A_u`), closing each run through the tree of `C_u`.
    pub fn factor_loop(&self, path: &[Vertex], oracle: Option<&WordProblem>) -> Result<Factorization, VanKampenError> {
        let bp = self.c.basepoint();
        if path.first() != Some(&bp) || path.last() != Some(&bp) {
            return Err(VanKampenError::NotALoop);
        }
        let steps: Vec<(Vertex, Vertex)> = path.windows(2).filter(|s| s[0] != s[1]).map(|s| (s[0], s[1])).collect();
        let mut runs: Vec<(Piece, Vec<Vertex>)> = Vec::new();
        for &(p, q) in &steps {
            if self.x.try_path_word(&[p, q]).is_none() {
                return Err(VanKampenError::CoverViolation((p, q)));
            }
            let piece = if self.a_vertices.contains(&p) && self.a_vertices.contains(&q) { Piece::A } else { Piece::B };
            if piece == Piece::B && self.b.try_path_word(&[p, q]).is_none() {
                return Err(VanKampenError::CoverViolation((p, q)));
            }
            match runs.last_mut() {
                Some((last, verts)) if *last == piece => verts.push(q),
                _ => runs.push((piece, vec![p, q])),
            }
        }
        let (_, idx) = self.free_product();
        let mut symbols = Word::identity();
        let mut factors = Vec::new();
        let mut joined: Vec<Vertex> = vec![bp];
        for (piece, verts) in runs {
            let mut closed = self.c.tree_path(verts[0]);
            closed.extend_from_slice(&verts[1..]);
            let mut back = self.c.tree_path(*verts.last().expect("runs are nonempty"));
            back.pop();
            back.reverse();
            closed.extend(back);
            let word = self.piece(piece).path_word(&closed);
            symbols = symbols.mul(&match piece {
                Piece::A => idx.left(&word),
                _ => idx.right(&word),
            });
            joined.extend_from_slice(&closed[1..]);
            factors.push(Factor { piece, path: closed, word });
        }
        let certified = match oracle {
            Some(o) => o.equal(&self.x.path_word(&joined), &self.x.path_word(path)),
            None => Decision::Unknown,
        };
        Ok(Factorization { factors, symbols, certified })
    }

    /// `r_u`: each generator of `π₁(X_u)` to its factorization, as a word in
    /// the free-product symbols.
    pub fn r_images(&self) -> Result<Vec<Word>, VanKampenError> {
        (0..self.x.presentation().generators())
            .map(|g| Ok(self.factor_loop(&self.x.generator_loop(g), None)?.symbols))
            .collect()
    }
}

/// Outcome of the naturality audit of the four inclusion squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityAudit {
    pub verified: usize,
    pub inconclusive: usize,
    pub refuted: Vec<String>,
}

/// The homomorphisms between levels `u <= v` of a cover.
pub struct CoverHomSquare<T> {
    pub u: T,
    pub v: T,
    pub lower: CoverLevel<T>,
    pub upper: CoverLevel<T>,
    pub f_uv: GroupHom,
    pub g_uv: GroupHom,
    pub h_uv: GroupHom,
    pub k_uv: GroupHom,
    pub i_ua: GroupHom,
    pub i_ub: GroupHom,
    pub j_ua: GroupHom,
    pub j_ub: GroupHom,
    pub i_va: GroupHom,
    pub i_vb: GroupHom,
    pub j_va: GroupHom,
    pub j_vb: GroupHom,
    /// `i_vA` restricted to the image of `f_uv`, precomposed: `π₁(C_u) → π₁(A_v)`.
    pub alpha: GroupHom,
    pub beta: GroupHom,
    /// `j_vA` on the image of `g_uv`, precomposed: `π₁(A_u) → π₁(X_v)`.
    pub gamma: GroupHom,
    pub delta: GroupHom,
    pub naturality: NaturalityAudit,
    oracle_xu: WordProblem,
    oracle_xv: WordProblem,
    oracle_av: WordProblem,
    oracle_bv: WordProblem,
    budget: Budget,
}

pub fn build_cover_square<T: Scalar>(
    cov: &CoverFiltration<T>,
    u: &T,
    v: &T,
    basepoint: Vertex,
    budget: &Budget,
) -> Result<CoverHomSquare<T>, VanKampenError> {
    if u > v {
        return Err(VanKampenError::LevelOrder { u: u.to_string(), v: v.to_string() });
    }
    let lower = CoverLevel::new(cov, u, basepoint)?;
    let upper = CoverLevel::new(cov, v, basepoint)?;
    let hom = |from: &EdgePathPresentation, to: &EdgePathPresentation| induced_hom(from, to, None);
    let (f_uv, g_uv, h_uv, k_uv) = (hom(&lower.c, &upper.c)?, hom(&lower.a, &upper.a)?, hom(&lower.b, &upper.b)?, hom(&lower.x, &upper.x)?);
    let (i_ua, i_ub, j_ua, j_ub) = (hom(&lower.c, &lower.a)?, hom(&lower.c, &lower.b)?, hom(&lower.a, &lower.x)?, hom(&lower.b, &lower.x)?);
    let (i_va, i_vb, j_va, j_vb) = (hom(&upper.c, &upper.a)?, hom(&upper.c, &upper.b)?, hom(&upper.a, &upper.x)?, hom(&upper.b, &upper.x)?);
    let alpha = f_uv.then(&i_va)?;
    let beta = f_uv.then(&i_vb)?;
    let gamma = g_uv.then(&j_va)?;
    let delta = h_uv.then(&j_vb)?;
    let oracle_xu = WordProblem::new(lower.x.presentation(), *budget);
    let oracle_xv = WordProblem::new(upper.x.presentation(), *budget);
    let oracle_av = WordProblem::new(upper.a.presentation(), *budget);
    let oracle_bv = WordProblem::new(upper.b.presentation(), *budget);
    let mut naturality = NaturalityAudit { verified: 0, inconclusive: 0, refuted: Vec::new() };
    let squares = [
        ("g_uv i_uA = alpha", i_ua.then(&g_uv)?, alpha.clone(), &oracle_av),
        ("h_uv i_uB = beta", i_ub.then(&h_uv)?, beta.clone(), &oracle_bv),
        ("k_uv j_uA = gamma", j_ua.then(&k_uv)?, gamma.clone(), &oracle_xv),
        ("k_uv j_uB = delta", j_ub.then(&k_uv)?, delta.clone(), &oracle_xv),
    ];
    for (name, left, right, oracle) in squares {
        match left.agrees_with(&right, oracle) {
            Decision::Yes => naturality.verified += 1,
            Decision::Unknown => naturality.inconclusive += 1,
            Decision::No => naturality.refuted.push(name.to_string()),
        }
    }
    Ok(CoverHomSquare {
        u: u.clone(),
        v: v.clone(),
        lower,
        upper,
        f_uv,
        g_uv,
        h_uv,
        k_uv,
        i_ua,
        i_ub,
        j_ua,
        j_ub,
        i_va,
        i_vb,
        j_va,
        j_vb,
        alpha,
        beta,
        gamma,
        delta,
        naturality,
        oracle_xu,
        oracle_xv,
        oracle_av,
        oracle_bv,
        budget: *budget,
    })
}

/// `N_uv` in the image symbols: one relator `α(w) β(w)⁻¹` per generator `w`
/// of `π₁(C_u)`. By naturality `α(w) = g_uv(i_uA(w))`, so the symbol word
/// for `α(w)` is `i_uA(w)`; the naturality audit certifies this.
pub fn n_uv_relators<T: Scalar>(sq: &CoverHomSquare<T>) -> Vec<Word> {
    sq.lower.n_relators()
}

/// Presentation data of `Q_uv`.
#[derive(Clone, Debug, Serialize)]
pub struct AmalgamData {
    /// `π₁(A_u) ∗ π₁(B_u)`, including the level-`u` relators.
    pub free_product: Presentation,
    pub a_symbols: usize,
    pub b_symbols: usize,
    pub n_uv: Vec<Word>,
    /// Words in the symbols certified trivial in `π₁(A_v)` or `π₁(B_v)`.
    pub imported: Vec<Word>,
    pub quotient: Presentation,
}

/// Candidate kernel words of `map` (level-`u` generators into a level-`v`
/// group), kept when the oracle certifies their image trivial.
fn kernel_words(map: &GroupHom, oracle: &WordProblem) -> Vec<Word> {
    let n = map.source().generators();
    let trivial = |w: &Word| oracle.is_trivial(&map.apply(w)) == Decision::Yes;
    let mut out: Vec<Word> = (0..n).map(Word::generator).filter(|w| trivial(w)).collect();
    let live: Vec<usize> = (0..n).filter(|&g| !out.contains(&Word::generator(g))).collect();
    let mut candidates = Vec::new();
    for (i, &x) in live.iter().enumerate() {
        for &y in &live[i + 1..] {
            candidates.push(Word::generator(x).mul(&Word::generator(y).inverse()));
            candidates.push(Word::generator(x).mul(&Word::generator(y)));
        }
    }
    let m = map.abelianized_matrix().hstack(&map.target().relator_matrix());
    for k in kernel_basis(&m) {
        let mut w = Word::identity();
        for &g in &live {
            let e: i64 = (&k[g]).try_into().unwrap_or(0);
            w = w.mul(&Word::generator(g).pow(e));
        }
        candidates.push(w);
    }
    for w in candidates {
        if !w.is_empty() && !out.contains(&w) && !out.contains(&w.inverse()) && trivial(&w) {
            out.push(w);
        }
    }
    out
}

/// `Q_uv` on one symbol per level-`u` generator of `A` and of `B`. Relators:
/// the level-`u` relators, `N_uv`, and best-effort kernel words of `g_uv`
/// and `h_uv`.
pub fn amalgamated_presentation<T: Scalar>(sq: &CoverHomSquare<T>) -> AmalgamData {
    let (free_product, idx) = sq.lower.free_product();
    let n_uv = n_uv_relators(sq);
    let mut imported = Vec::new();
    if sq.u != sq.v {
        imported.extend(kernel_words(&sq.g_uv, &sq.oracle_av).iter().map(|w| idx.left(w)));
        imported.extend(kernel_words(&sq.h_uv, &sq.oracle_bv).iter().map(|w| idx.right(w)));
    }
    let quotient = free_product.with_relators(n_uv.iter().chain(&imported).cloned()).expect("symbols in range");
    AmalgamData {
        a_symbols: sq.lower.a.presentation().generators(),
        b_symbols: sq.lower.b.presentation().generators(),
        free_product,
        n_uv,
        imported,
        quotient,
    }
}

fn phi_images<T: Scalar>(sq: &CoverHomSquare<T>) -> Vec<Word> {
    sq.gamma.images().iter().chain(sq.delta.images()).cloned().collect()
}

/// `φ^{u,v}`: `γ` on `A` symbols and `δ` on `B` symbols, freely reduced.
pub fn phi_uv_apply<T: Scalar>(sq: &CoverHomSquare<T>, x: &Word) -> Result<Word, VanKampenError> {
    let images = phi_images(sq);
    if let Some(g) = x.max_generator().filter(|&g| g >= images.len()) {
        return Err(VanKampenError::Symbol { symbol: g, symbols: images.len() });
    }
    Ok(x.substitute(&images).free_reduce())
}

/// `φ^{u,v}` as a homomorphism `Q_uv → π₁(X_v)`, relators checked by oracle.
pub fn phi_uv<T: Scalar>(sq: &CoverHomSquare<T>, amalgam: &AmalgamData) -> Result<GroupHom, VanKampenError> {
    Ok(GroupHom::with_oracle(
        Arc::new(amalgam.quotient.clone()),
        sq.upper.x.presentation().clone(),
        phi_images(sq),
        &sq.oracle_xv,
    )?)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorPreimage {
    pub generator: usize,
    pub factorization: Factorization,
    /// `φ^{u,v}` of the factorization.
    pub phi_image: Word,
    /// `k_uv` of the generator.
    pub expected: Word,
    pub decision: Decision,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub verdict: Verdict,
    pub generators: Vec<GeneratorPreimage>,
}

/// Constructive surjectivity: every generator of `π₁^{u,v}(X)` (the image of
/// a level-`u` generator) is hit by `φ^{u,v}` of its loop factorization.
/// `Refuted` would indicate an internal inconsistency, never a budget issue.
pub fn verify_surjectivity<T: Scalar>(sq: &CoverHomSquare<T>) -> Result<SurjectivityReport, VanKampenError> {
    let mut generators = Vec::new();
    let mut decisions = Vec::new();
    for g in 0..sq.lower.x.presentation().generators() {
        let factorization = sq.lower.factor_loop(&sq.lower.x.generator_loop(g), Some(&sq.oracle_xu))?;
        let phi_image = phi_uv_apply(sq, &factorization.symbols)?;
        let expected = sq.k_uv.images()[g].clone();
        let mut decision = sq.oracle_xv.equal(&phi_image, &expected);
        if decision == Decision::Yes && factorization.certified != Decision::Yes {
            decision = Decision::Unknown;
        }
        decisions.push(decision);
        generators.push(GeneratorPreimage { generator: g, factorization, phi_image, expected, decision });
    }
    Ok(SurjectivityReport { verdict: verdict_of(&decisions), generators })
}

fn verdict_of(decisions: &[Decision]) -> Verdict {
    if decisions.contains(&Decision::No) {
        Verdict::Refuted
    } else if decisions.contains(&Decision::Unknown) {
        Verdict::Inconclusive
    } else {
        Verdict::Verified
    }
}

/// Builds the cover data at level `u` and factors `path`.
pub fn factor_loop<T: Scalar>(cov: &CoverFiltration<T>, u: &T, path: &[Vertex], basepoint: Vertex, budget: &Budget) -> Result<Factorization, VanKampenError> {
    let level = CoverLevel::new(cov, u, basepoint)?;
    let oracle = WordProblem::new(level.x.presentation(), *budget);
    level.factor_loop(path, Some(&oracle))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub verdict: Verdict,
    /// Invariants of the abelianized pushout.
    pub pushout: AbelianInvariants,
    /// Invariants of the abelianized image `π₁^{u,v}(X)`.
    pub image: AbelianInvariants,
}

/// Exact abelianized check of `ker φ^{u,v} = N_uv`: the images of the
/// level-`u` generators in `H₁(A_v) ⊕ H₁(B_v)` modulo the images of the
/// given relators, against the image of `H₁(X_u)` in `H₁(X_v)` restricted to
/// the basepoint component. Pass `n_uv_relators(sq)` for the real check.
pub fn verify_kernel_abelianized<T: Scalar>(sq: &CoverHomSquare<T>, n_uv: &[Word]) -> KernelReport {
    let g = sq.g_uv.abelianized_matrix().direct_sum(&sq.h_uv.abelianized_matrix());
    let symbols = g.cols();
    let rel = sq.upper.a.presentation().relator_matrix().direct_sum(&sq.upper.b.presentation().relator_matrix());
    let cols: Vec<Vec<BigInt>> = n_uv.iter().map(|w| w.exponent_sums(symbols).into_iter().map(BigInt::from).collect()).collect();
    let pushed = g.mul(&Matrix::from_columns(&cols, symbols));
    let pushout = subgroup_invariants(&g, &rel.hstack(&pushed));
    let image = image_descriptor(&sq.k_uv).invariants;
    let verdict = if pushout == image { Verdict::Verified } else { Verdict::Refuted };
    KernelReport { verdict, pushout, image }
}

#[derive(Clone, Debug, Serialize)]
pub struct FullIsoReport {
    pub verdict: Verdict,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<IsoCertificate>,
}

/// Injectivity of the induced map `Q_uv → π₁^{u,v}(X)`. Verified only with
/// a witness: mutually inverse homomorphisms or a Tietze path when `u = v`,
/// equal ranks of free groups when `X_v` has no triangles, or equal orders
/// of finite groups; each together with certified surjectivity.
pub fn verify_full_isomorphism<T: Scalar>(sq: &CoverHomSquare<T>, amalgam: &AmalgamData) -> Result<FullIsoReport, VanKampenError> {
    let report = |verdict, method: &str, certificate| FullIsoReport { verdict, method: method.to_string(), certificate };
    let kernel = verify_kernel_abelianized(sq, &amalgam.n_uv);
    if kernel.verdict == Verdict::Refuted {
        return Ok(report(Verdict::Refuted, "abelianized pushout differs from abelianized image", None));
    }
    if sq.u == sq.v {
        let q = Arc::new(amalgam.quotient.clone());
        let oracle_q = WordProblem::new(&q, sq.budget);
        let phi = phi_uv(sq, amalgam)?;
        let r = GroupHom::with_oracle(sq.lower.x.presentation().clone(), q.clone(), sq.lower.r_images()?, &oracle_q)?;
        match verify_inverse_homs(&r, &phi, &sq.oracle_xu, &oracle_q) {
            Decision::Yes => return Ok(report(Verdict::Verified, "mutually inverse homomorphisms r_u and phi_u", None)),
            Decision::No => return Ok(report(Verdict::Refuted, "r_u and phi_u are not mutually inverse", None)),
            Decision::Unknown => {}
        }
        let cert = iso_certificate(&q, sq.lower.x.presentation(), &sq.budget);
        let verdict = match cert.decision() {
            Decision::Yes => Verdict::Verified,
            Decision::No => Verdict::Refuted,
            Decision::Unknown => Verdict::Inconclusive,
        };
        return Ok(report(verdict, "isomorphism certificate for Q_u and pi_1(X_u)", Some(cert)));
    }
    let surjective = verify_surjectivity(sq)?.verdict == Verdict::Verified;
    if !surjective {
        return Ok(report(Verdict::Inconclusive, "surjectivity not certified", None));
    }
    let simplified_q = tietze_simplify(&amalgam.quotient, &sq.budget).presentation;
    if simplified_q.relators().is_empty() {
        if sq.upper.x.presentation().relators().is_empty() {
            if free_subgroup_rank(sq.k_uv.images()) == simplified_q.generators() {
                return Ok(report(Verdict::Verified, "free groups of equal rank; a surjection between them is an isomorphism", None));
            }
        } else if tietze_simplify(sq.upper.x.presentation(), &sq.budget).presentation.relators().is_empty()
            && kernel.image == AbelianInvariants::free(simplified_q.generators())
        {
            // A subgroup of a free group is free, so its rank is read off its abelianization.
            return Ok(report(Verdict::Verified, "free groups of equal rank; a surjection between them is an isomorphism", None));
        }
    }
    if let Some(order_x) = WordProblem::new(sq.upper.x.presentation(), sq.budget).finite_order() {
        let index = match todd_coxeter(sq.upper.x.presentation(), sq.k_uv.images(), sq.budget.max_cosets) {
            Enumeration::Complete(t) => Some(t.index()),
            Enumeration::Inconclusive => None,
        };
        let order_q = WordProblem::new(&amalgam.quotient, sq.budget).finite_order();
        if let (Some(index), Some(order_q)) = (index, order_q) {
            if order_q == order_x / index {
                return Ok(report(Verdict::Verified, "finite groups of equal order; a surjection between them is an isomorphism", None));
            }
            return Ok(report(Verdict::Inconclusive, "orders differ; Q_uv may lack relators", None));
        }
    }
    Ok(report(Verdict::Inconclusive, "no witness found within budget", None))
}

/// The cover at every critical level with the persistences of `π₁(A_u)`,
/// `π₁(B_u)`, `π₁(X_u)` and `Q_u = (π₁(A_u) ∗ π₁(B_u)) / N_u`, and the
/// level-wise maps `r_u: π₁(X_u) → Q_u` and `φ_u: Q_u → π₁(X_u)`.
pub struct CoverPersistence<T> {
    pub levels: Vec<CoverLevel<T>>,
    pub a: Persistence<T, GroupFlavor>,
    pub b: Persistence<T, GroupFlavor>,
    pub x: Persistence<T, GroupFlavor>,
    pub q: Persistence<T, GroupFlavor>,
    pub r: ShiftFamily<T, GroupFlavor>,
    pub phi: ShiftFamily<T, GroupFlavor>,
    budget: Budget,
}

fn piece_persistence<T: Scalar>(grid: &[T], levels: &[CoverLevel<T>], piece: Piece, budget: &Budget) -> Result<Persistence<T, GroupFlavor>, VanKampenError> {
    let objects: Vec<GroupObject> = levels.iter().map(|l| GroupObject::new(l.piece(piece).presentation().clone(), budget)).collect();
    let transitions = (1..levels.len())
        .map(|i| induced_hom(levels[i - 1].piece(piece), levels[i].piece(piece), Some(objects[i].oracle())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Persistence::new(grid.to_vec(), objects, transitions)?)
}

/// Builds the `r_u` family over the critical values of the cover.
pub fn build_r_family<T: Scalar>(cov: &CoverFiltration<T>, basepoint: Vertex, budget: &Budget) -> Result<CoverPersistence<T>, VanKampenError> {
    let grid = cov.complex().critical_values();
    let levels = grid.iter().map(|u| CoverLevel::new(cov, u, basepoint)).collect::<Result<Vec<_>, _>>()?;
    let a = piece_persistence(&grid, &levels, Piece::A, budget)?;
    let b = piece_persistence(&grid, &levels, Piece::B, budget)?;
    let x = piece_persistence(&grid, &levels, Piece::Total, budget)?;
    let q_objects: Vec<GroupObject> = levels.iter().map(|l| GroupObject::new(Arc::new(l.quotient()), budget)).collect();
    let mut q_transitions = Vec::new();
    for i in 1..levels.len() {
        let shift = levels[i].a.presentation().generators();
        let images = a.transition(i - 1).images().iter().cloned().chain(b.transition(i - 1).images().iter().map(|w| w.shift(shift))).collect();
        q_transitions.push(GroupHom::with_oracle(q_objects[i - 1].presentation().clone(), q_objects[i].presentation().clone(), images, q_objects[i].oracle())?);
    }
    let q: Persistence<T, GroupFlavor> = Persistence::new(grid.clone(), q_objects, q_transitions)?;
    let mut r_maps: Vec<GroupHom> = Vec::new();
    let mut phi_maps: Vec<GroupHom> = Vec::new();
    for (i, l) in levels.iter().enumerate() {
        r_maps.push(GroupHom::with_oracle(x.object(i).presentation().clone(), q.object(i).presentation().clone(), l.r_images()?, q.object(i).oracle())?);
        phi_maps.push(GroupHom::with_oracle(q.object(i).presentation().clone(), x.object(i).presentation().clone(), l.phi_images(), x.object(i).oracle())?);
    }
    let r = ShiftFamily::new(&x, &q, T::zero(), r_maps)?;
    let phi = ShiftFamily::new(&q, &x, T::zero(), phi_maps)?;
    Ok(CoverPersistence { levels, a, b, x, q, r, phi, budget: *budget })
}

impl<T: Scalar> CoverPersistence<T> {
    pub fn grid(&self) -> &[T] {
        self.x.grid()
    }

    pub fn persistence(&self, piece: Piece) -> &Persistence<T, GroupFlavor> {
        match piece {
            Piece::A => &self.a,
            Piece::B => &self.b,
            Piece::Total => &self.x,
            Piece::C => panic!("the intersection persistence is not stored"),
        }
    }

    /// The 0-interleaving witness `(r, φ)` between `π₁(X)` and `Q`.
    pub fn r_witness(&self) -> InterleavingWitness<T, GroupFlavor> {
        InterleavingWitness { forward: self.r.clone(), backward: self.phi.clone() }
    }

    /// Maps `π₁(P_u) → π₁(P'_{u+δ})` induced by inclusions, where `P` is a
    /// piece of this cover and `P'` the same piece of `other` (same vertex
    /// labels). Fails unless each snapshot is contained in the shifted one.
    pub fn inclusion_family(&self, other: &CoverPersistence<T>, piece: Piece, delta: &T) -> Result<ShiftFamily<T, GroupFlavor>, VanKampenError> {
        let (src, dst) = (self.persistence(piece), other.persistence(piece));
        let mut maps = Vec::new();
        for (i, u) in self.grid().iter().enumerate() {
            let from = self.levels[i].piece(piece);
            let shifted = u.clone() + delta.clone();
            let map = match other.x.index_at(&shifted) {
                None if from.presentation().generators() == 0 && from.component().len() == 1 => {
                    GroupFlavor::zero_map(src.object(i), &dst.object_at(&shifted))
                }
                None => return Err(VanKampenError::NotNested { piece }),
                Some(j) => {
                    let to = other.levels[j].piece(piece);
                    if to.basepoint() != from.basepoint() {
                        return Err(VanKampenError::NotNested { piece });
                    }
                    let images = (0..from.presentation().generators())
                        .map(|g| to.try_path_word(&from.generator_loop(g)))
                        .collect::<Option<Vec<_>>>()
                        .ok_or(VanKampenError::NotNested { piece })?;
                    GroupHom::with_oracle(from.presentation().clone(), to.presentation().clone(), images, dst.object(j).oracle())?
                }
            };
            maps.push(map);
        }
        Ok(ShiftFamily::new(src, dst, delta.clone(), maps)?)
    }

    /// Inclusion-induced interleaving witness of one piece at shift `delta`.
    pub fn inclusion_witness(&self, other: &CoverPersistence<T>, piece: Piece, delta: &T) -> Result<InterleavingWitness<T, GroupFlavor>, VanKampenError> {
        Ok(InterleavingWitness::new(self.inclusion_family(other, piece, delta)?, other.inclusion_family(self, piece, delta)?)?)
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }
}

/// Matrix of `H₁(A_u) ⊕ H₁(B_u)` relations, exposed for mutation tests.
pub fn pushout_relations<T: Scalar>(sq: &CoverHomSquare<T>) -> IntMatrix {
    sq.upper.a.presentation().relator_matrix().direct_sum(&sq.upper.b.presentation().relator_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::filtration::FilteredComplex;
    use crate::interleaving::check_interleaving;

    fn b() -> Budget {
        Budget::default()
    }

    fn pairs(grid: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for (i, u) in grid.iter().enumerate() {
            for v in &grid[i..] {
                out.push((*u, *v));
            }
        }
        out
    }

    fn corpus_covers() -> Vec<CoverFiltration<f64>> {
        vec![corpus::wedge_cover(corpus::staged_wedge()), corpus::wedge_cover(corpus::wedge_with_fills()), corpus::cylinder_cover()]
    }

    #[test]
    fn squares_on_the_corpus() {
        for cov in corpus_covers() {
            let grid = cov.complex().critical_values();
            for (u, v) in pairs(&grid) {
                let sq = build_cover_square(&cov, &u, &v, 3.min(cov.vertices(Piece::C).into_iter().next().unwrap()), &b()).unwrap();
                assert!(sq.naturality.refuted.is_empty());
                assert_eq!(sq.naturality.inconclusive, 0, "({u}, {v})");
                let kernel = verify_kernel_abelianized(&sq, &n_uv_relators(&sq));
                assert_eq!(kernel.verdict, Verdict::Verified, "({u}, {v}): {kernel:?}");
                assert_eq!(verify_surjectivity(&sq).unwrap().verdict, Verdict::Verified, "({u}, {v})");
                let full = verify_full_isomorphism(&sq, &amalgamated_presentation(&sq)).unwrap();
                assert_eq!(full.verdict, Verdict::Verified, "({u}, {v}): {full:?}");
            }
        }
    }

    #[test]
    fn wedge_examples() {
        let cov = corpus::wedge_cover(corpus::staged_wedge::<f64>());
        let sq = build_cover_square(&cov, &2.0, &2.0, 0, &b()).unwrap();
        assert!(n_uv_relators(&sq).is_empty());
        let am = amalgamated_presentation(&sq);
        assert_eq!(am.quotient.abelianization(), AbelianInvariants::free(2));
        let full = verify_full_isomorphism(&sq, &am).unwrap();
        assert_eq!(full.verdict, Verdict::Verified);
        assert_eq!(phi_uv_apply(&sq, &Word::identity()).unwrap(), Word::identity());
        let ab = phi_uv_apply(&sq, &"a0 a1".parse().unwrap()).unwrap();
        assert_eq!(ab.exponent_sums(2), vec![1, 1]);
        assert!(phi_uv_apply(&sq, &"a2".parse().unwrap()).is_err());
        let sq = build_cover_square(&cov, &1.0, &2.0, 0, &b()).unwrap();
        assert_eq!(sq.g_uv.abelianized_matrix(), IntMatrix::from_i64_rows(&[vec![1]], 1));
        assert_eq!(sq.f_uv.source().generators(), 0);
        let f = factor_loop(&cov, &2.0, &[0, 1, 2, 0, 3, 4, 0], 0, &b()).unwrap();
        assert_eq!(f.factors.iter().map(|x| x.piece).collect::<Vec<_>>(), vec![Piece::A, Piece::B]);
        assert_eq!(f.certified, Decision::Yes);
        let f = factor_loop(&cov, &2.0, &[0, 1, 2, 0], 0, &b()).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert!(factor_loop(&cov, &2.0, &[0], 0, &b()).unwrap().factors.is_empty());
        let full = verify_full_isomorphism(&build_cover_square(&cov, &0.0, &2.0, 0, &b()).unwrap(), &amalgamated_presentation(&build_cover_square(&cov, &0.0, &2.0, 0, &b()).unwrap())).unwrap();
        assert_eq!(full.verdict, Verdict::Verified);
    }

    #[test]
    fn cylinder_relator_and_mutation() {
        let cov = corpus::cylinder_cover::<f64>();
        let grid = cov.complex().critical_values();
        for (u, v) in pairs(&grid) {
            let sq = build_cover_square(&cov, &u, &v, 3, &b()).unwrap();
            let n = n_uv_relators(&sq);
            assert_eq!(n.len(), 1);
            for drop in 0..n.len() {
                let mut mutated = n.clone();
                mutated.remove(drop);
                assert_eq!(verify_kernel_abelianized(&sq, &mutated).verdict, Verdict::Refuted, "({u}, {v})");
            }
        }
        let sq = build_cover_square(&cov, &2.0, &2.0, 3, &b()).unwrap();
        assert_eq!(verify_kernel_abelianized(&sq, &n_uv_relators(&sq)).pushout, AbelianInvariants::free(1));
    }

    #[test]
    fn connectivity_precondition() {
        let k: FilteredComplex<f64> = FilteredComplex::parse("0;0\n1;0\n2;0\n0 1;0\n0 2;0\n1 2;1").unwrap();
        let cov = k.restrict_cover([1, 2].into(), [0, 1, 2].into()).unwrap();
        assert!(matches!(build_cover_square(&cov, &0.0, &1.0, 1, &b()), Err(VanKampenError::Disconnected { piece: Piece::A, .. })));
        assert!(build_cover_square(&cov, &1.0, &1.0, 1, &b()).is_ok());
        assert!(matches!(build_cover_square(&cov, &1.0, &1.0, 0, &b()), Err(VanKampenError::BasepointAbsent { .. })));
        assert!(matches!(build_cover_square(&cov, &1.0, &0.0, 1, &b()), Err(VanKampenError::LevelOrder { .. })));
        // Two-component intersection: a circle covered by two arcs.
        let k: FilteredComplex<f64> = FilteredComplex::parse("0;0\n1;0\n2;0\n3;0\n0 1;0\n1 2;0\n2 3;0\n0 3;0").unwrap();
        let cov = k.restrict_cover([0, 1, 2].into(), [2, 3, 0].into()).unwrap();
        assert!(matches!(build_cover_square(&cov, &0.0, &0.0, 0, &b()), Err(VanKampenError::Disconnected { piece: Piece::C, .. })));
    }

    /// `C` acquires a loop between the two levels that is killed in both `A`
    /// and `B` but not in `X`'s image: the abelianized pushout is `Z²` while
    /// the image is `Z`.
    #[test]
    fn intersection_loop_born_between_levels() {
        let text = "0;0\n1;0\n2;0\n3;0\n4;0\n\
                    0 1;0\n1 2;0\n1 3;0\n0 3;0\n1 4;0\n0 4;0\n\
                    0 2;1\n2 3;1\n2 4;1\n\
                    1 2 3;1\n0 2 3;1\n1 2 4;1\n0 2 4;1";
        let k: FilteredComplex<f64> = FilteredComplex::parse(text).unwrap();
        let cov = k.restrict_cover([0, 1, 2, 3].into(), [0, 1, 2, 4].into()).unwrap();
        let sq = build_cover_square(&cov, &0.0, &1.0, 0, &b()).unwrap();
        let report = verify_kernel_abelianized(&sq, &n_uv_relators(&sq));
        assert_eq!(report.pushout, AbelianInvariants::free(2));
        assert_eq!(report.image, AbelianInvariants::free(1));
        assert_eq!(report.verdict, Verdict::Refuted);
        let full = verify_full_isomorphism(&sq, &amalgamated_presentation(&sq)).unwrap();
        assert_eq!(full.verdict, Verdict::Refuted);
    }

    #[test]
    fn r_family_is_a_zero_interleaving() {
        for cov in corpus_covers() {
            let fam = build_r_family(&cov, *cov.vertices(Piece::C).iter().next().unwrap(), &b()).unwrap();
            let rep = check_interleaving(&fam.x, &fam.q, &fam.r_witness());
            assert_eq!(rep.verdict, Verdict::Verified, "{rep:?}");
        }
        let cov = corpus::wedge_cover(corpus::staged_wedge::<f64>());
        let fam = build_r_family(&cov, 0, &b()).unwrap();
        assert_eq!(fam.grid().len(), 3);
        assert_eq!(fam.r.maps()[2].images(), &["a0".parse::<Word>().unwrap(), "a1".parse().unwrap()]);
    }

    #[test]
    fn inclusion_witness_for_time_shift() {
        let cov = corpus::wedge_cover(corpus::staged_wedge::<f64>());
        let fam = build_r_family(&cov, 0, &b()).unwrap();
        let other = build_r_family(&cov.shifted(&1.0), 0, &b()).unwrap();
        for piece in [Piece::A, Piece::B, Piece::Total] {
            let w = fam.inclusion_witness(&other, piece, &1.0).unwrap();
            let rep = check_interleaving(fam.persistence(piece), other.persistence(piece), &w);
            assert_eq!(rep.verdict, Verdict::Verified);
        }
        assert!(fam.inclusion_witness(&other, Piece::A, &0.5).is_err());
    }
}
