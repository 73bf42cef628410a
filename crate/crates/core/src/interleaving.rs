//! Persistences of groups or vector spaces on a finite grid, shift families
//! between them, and a checker for δ-interleavings.
//!
//! A persistence is piecewise constant: its object at a real `t` is the one at
//! the largest grid value `<= t`, and the zero object before the grid starts.

use std::fmt::{self, Debug};
use std::marker::PhantomData;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use crate::diagram::{bottleneck_distance, Bar, PersistenceDiagram};
use crate::field::{span_rank, Field};
use crate::filtration::{FilteredComplex, Vertex};
use crate::fpgroup::{Budget, Decision, GroupError, GroupHom, Presentation, Word, WordProblem};
use crate::intmat::Matrix;
use crate::pi1::{Pi1Error, Pi1Persistence};
use crate::scalar::{floor_index, sort_scalars, Extended, Scalar};
use crate::vankampen::CoverPersistence;
use crate::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterleavingError {
    #[error("grid must be strictly increasing with one object per point and one transition per gap")]
    Shape,
    #[error("map {index} does not fit its source and target objects")]
    MapMismatch { index: usize },
    #[error("shift must be nonnegative, got {0}")]
    NegativeShift(String),
    #[error("witness shifts differ: {0} vs {1}")]
    ShiftMismatch(String, String),
    #[error("cannot pad from {from} down to {to}")]
    PadBelow { from: String, to: String },
    #[error(transparent)]
    Pi1(#[from] Pi1Error),
    #[error("level {index}: {source}")]
    Group { index: usize, source: GroupError },
    #[error("level {level} is not contained in the other filtration at the shifted level")]
    NotNested { level: String },
    #[error("witness line {line}: {message}")]
    WitnessParse { line: usize, message: String },
}

/// The algebraic category a persistence lives in.
pub trait Flavor {
    type Object: Clone + Debug;
    type Map: Clone + Debug;

    fn zero_object() -> Self::Object;
    fn identity(object: &Self::Object) -> Self::Map;
    fn zero_map(source: &Self::Object, target: &Self::Object) -> Self::Map;
    /// `second ∘ first`.
    fn compose(first: &Self::Map, second: &Self::Map) -> Self::Map;
    fn fits(map: &Self::Map, source: &Self::Object, target: &Self::Object) -> bool;
    /// Whether two parallel maps agree, with a witness when they do not.
    fn compare(a: &Self::Map, b: &Self::Map, target: &Self::Object) -> (Decision, Option<String>);
}

/// A finitely presented group with a word-problem oracle.
#[derive(Clone)]
pub struct GroupObject {
    presentation: Arc<Presentation>,
    oracle: Arc<WordProblem>,
}

impl GroupObject {
    pub fn new(presentation: Arc<Presentation>, budget: &Budget) -> Self {
        let oracle = Arc::new(WordProblem::new(&presentation, *budget));
        GroupObject { presentation, oracle }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn oracle(&self) -> &WordProblem {
        &self.oracle
    }
}

impl Debug for GroupObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupObject({:?})", self.presentation.to_text())
    }
}

/// Groups and homomorphisms; equality is decided by the target's oracle.
#[derive(Clone, Copy, Debug)]
pub struct GroupFlavor;

impl Flavor for GroupFlavor {
    type Object = GroupObject;
    type Map = GroupHom;

    fn zero_object() -> GroupObject {
        GroupObject::new(Arc::new(Presentation::trivial()), &Budget::tiny())
    }

    fn identity(object: &GroupObject) -> GroupHom {
        GroupHom::identity(object.presentation.clone())
    }

    fn zero_map(source: &GroupObject, target: &GroupObject) -> GroupHom {
        let images = vec![Word::identity(); source.presentation.generators()];
        GroupHom::unchecked(source.presentation.clone(), target.presentation.clone(), images).expect("shapes match")
    }

    fn compose(first: &GroupHom, second: &GroupHom) -> GroupHom {
        first.then(second).expect("composable maps")
    }

    fn fits(map: &GroupHom, source: &GroupObject, target: &GroupObject) -> bool {
        **map.source() == *source.presentation && **map.target() == *target.presentation
    }

    fn compare(a: &GroupHom, b: &GroupHom, target: &GroupObject) -> (Decision, Option<String>) {
        let mut out = Decision::Yes;
        for (i, (x, y)) in a.images().iter().zip(b.images()).enumerate() {
            match target.oracle.equal(x, y) {
                Decision::Yes => {}
                Decision::No => return (Decision::No, Some(format!("generator {i}: {x} vs {y}"))),
                Decision::Unknown => out = Decision::Unknown,
            }
        }
        (out, None)
    }
}

/// `F^dim` modulo the span of `relations` (columns of length `dim`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientSpace<F> {
    pub dim: usize,
    pub relations: Vec<Vec<F>>,
}

impl<F: Field> QuotientSpace<F> {
    pub fn free(dim: usize) -> Self {
        QuotientSpace { dim, relations: Vec::new() }
    }

    /// Dimension of the quotient.
    pub fn rank(&self) -> usize {
        self.dim - span_rank(&self.relations, self.dim)
    }

    /// Dimension of the image of `m` (a map into this space).
    fn image_rank(&self, m: &Matrix<F>) -> usize {
        let mut cols = self.relations.clone();
        cols.extend(m.columns());
        span_rank(&cols, self.dim) - span_rank(&self.relations, self.dim)
    }

    fn contains_zero(&self, v: Vec<F>) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let base = span_rank(&self.relations, self.dim);
        let mut cols = self.relations.clone();
        cols.push(v);
        span_rank(&cols, self.dim) == base
    }
}


/// Vector spaces over `F` (possibly presented as quotients) and linear maps.
#[derive(Clone, Copy, Debug)]
pub struct ModuleFlavor<F>(PhantomData<F>);

impl<F: Field> Flavor for ModuleFlavor<F> {
    type Object = QuotientSpace<F>;
    type Map = Matrix<F>;

    fn zero_object() -> QuotientSpace<F> {
        QuotientSpace::free(0)
    }

    fn identity(object: &QuotientSpace<F>) -> Matrix<F> {
        Matrix::identity(object.dim)
    }

    fn zero_map(source: &QuotientSpace<F>, target: &QuotientSpace<F>) -> Matrix<F> {
        Matrix::zeros(target.dim, source.dim)
    }

    fn compose(first: &Matrix<F>, second: &Matrix<F>) -> Matrix<F> {
        second.mul(first)
    }

    fn fits(map: &Matrix<F>, source: &QuotientSpace<F>, target: &QuotientSpace<F>) -> bool {
        map.rows() == target.dim && map.cols() == source.dim
    }

    fn compare(a: &Matrix<F>, b: &Matrix<F>, target: &QuotientSpace<F>) -> (Decision, Option<String>) {
        for j in 0..a.cols() {
            let diff: Vec<F> = a.column(j).into_iter().zip(b.column(j)).map(|(x, y)| x - y).collect();
            if !target.contains_zero(diff) {
                return (Decision::No, Some(format!("column {j} differs")));
            }
        }
        (Decision::Yes, None)
    }
}

/// Objects on a strictly increasing grid with maps between neighbours.
#[derive(Clone, Debug)]
pub struct Persistence<T, F: Flavor> {
    grid: Vec<T>,
    objects: Vec<F::Object>,
    transitions: Vec<F::Map>,
}

impl<T: Scalar, F: Flavor> Persistence<T, F> {
    pub fn new(grid: Vec<T>, objects: Vec<F::Object>, transitions: Vec<F::Map>) -> Result<Self, InterleavingError> {
        let increasing = grid.windows(2).all(|w| w[0] < w[1]);
        if !increasing || objects.len() != grid.len() || transitions.len() + 1 != grid.len().max(1) {
            return Err(InterleavingError::Shape);
        }
        for (i, m) in transitions.iter().enumerate() {
            if !F::fits(m, &objects[i], &objects[i + 1]) {
                return Err(InterleavingError::MapMismatch { index: i });
            }
        }
        Ok(Persistence { grid, objects, transitions })
    }

    pub fn zero() -> Self {
        Persistence { grid: Vec::new(), objects: Vec::new(), transitions: Vec::new() }
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn objects(&self) -> &[F::Object] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &F::Object {
        &self.objects[i]
    }

    pub fn transition(&self, i: usize) -> &F::Map {
        &self.transitions[i]
    }

    pub fn index_at(&self, t: &T) -> Option<usize> {
        floor_index(&self.grid, t)
    }

    pub fn object_at(&self, t: &T) -> F::Object {
        self.index_at(t).map_or_else(F::zero_object, |i| self.objects[i].clone())
    }

    /// Composite of the transitions from grid index `i` to `j >= i`.
    pub fn map_indices(&self, i: usize, j: usize) -> F::Map {
        let mut m = F::identity(&self.objects[i]);
        for k in i..j {
            m = F::compose(&m, &self.transitions[k]);
        }
        m
    }

    /// Transition from level `s` to level `t >= s`.
    pub fn map(&self, s: &T, t: &T) -> F::Map {
        match (self.index_at(s), self.index_at(t)) {
            (Some(i), Some(j)) => self.map_indices(i, j),
            _ => F::zero_map(&self.object_at(s), &self.object_at(t)),
        }
    }

    /// Same objects and maps, every grid value moved by `c`.
    pub fn shifted(&self, c: &T) -> Self {
        let grid = self.grid.iter().map(|g| g.clone() + c.clone()).collect();
        Persistence { grid, objects: self.objects.clone(), transitions: self.transitions.clone() }
    }
}

/// Maps `G_u → G'_{u+δ}` given at the source grid points; between grid
/// points they are extended by the target's transitions.
#[derive(Clone, Debug)]
pub struct ShiftFamily<T, F: Flavor> {
    delta: T,
    maps: Vec<F::Map>,
}

impl<T: Scalar, F: Flavor> ShiftFamily<T, F> {
    pub fn new(source: &Persistence<T, F>, target: &Persistence<T, F>, delta: T, maps: Vec<F::Map>) -> Result<Self, InterleavingError> {
        if delta < T::zero() {
            return Err(InterleavingError::NegativeShift(delta.to_string()));
        }
        if maps.len() != source.grid.len() {
            return Err(InterleavingError::Shape);
        }
        for (i, m) in maps.iter().enumerate() {
            let t = target.object_at(&(source.grid[i].clone() + delta.clone()));
            if !F::fits(m, &source.objects[i], &t) {
                return Err(InterleavingError::MapMismatch { index: i });
            }
        }
        Ok(ShiftFamily { delta, maps })
    }

    /// Identity maps of a persistence to itself at shift 0.
    pub fn identity(p: &Persistence<T, F>) -> Self {
        ShiftFamily { delta: T::zero(), maps: p.objects.iter().map(F::identity).collect() }
    }

    /// Maps into the zero-extended target: all zero.
    pub fn zero(source: &Persistence<T, F>, target: &Persistence<T, F>, delta: T) -> Self {
        let maps = (0..source.grid.len())
            .map(|i| F::zero_map(&source.objects[i], &target.object_at(&(source.grid[i].clone() + delta.clone()))))
            .collect();
        ShiftFamily { delta, maps }
    }

    pub fn delta(&self) -> &T {
        &self.delta
    }

    pub fn maps(&self) -> &[F::Map] {
        &self.maps
    }

    /// The map at an arbitrary level `u`.
    pub fn at(&self, source: &Persistence<T, F>, target: &Persistence<T, F>, u: &T) -> F::Map {
        let shifted = u.clone() + self.delta.clone();
        match source.index_at(u) {
            None => F::zero_map(&F::zero_object(), &target.object_at(&shifted)),
            Some(i) => {
                let from = source.grid[i].clone() + self.delta.clone();
                F::compose(&self.maps[i], &target.map(&from, &shifted))
            }
        }
    }

    /// Post-composes with target transitions to reach a larger shift.
    pub fn pad(&self, source: &Persistence<T, F>, target: &Persistence<T, F>, epsilon: &T) -> Result<Self, InterleavingError> {
        if *epsilon < self.delta {
            return Err(InterleavingError::PadBelow { from: self.delta.to_string(), to: epsilon.to_string() });
        }
        let maps = (0..source.grid.len())
            .map(|i| {
                let u = &source.grid[i];
                F::compose(&self.maps[i], &target.map(&(u.clone() + self.delta.clone()), &(u.clone() + epsilon.clone())))
            })
            .collect();
        Ok(ShiftFamily { delta: epsilon.clone(), maps })
    }

    /// `next ∘ self`, a family from `source` to `last` at the summed shift.
    pub fn then(&self, source: &Persistence<T, F>, middle: &Persistence<T, F>, next: &ShiftFamily<T, F>, last: &Persistence<T, F>) -> Self {
        let maps = (0..source.grid.len())
            .map(|i| {
                let mid = source.grid[i].clone() + self.delta.clone();
                F::compose(&self.maps[i], &next.at(middle, last, &mid))
            })
            .collect();
        ShiftFamily { delta: self.delta.clone() + next.delta.clone(), maps }
    }
}

/// Forward and backward shift families at a common shift.
#[derive(Clone, Debug)]
pub struct InterleavingWitness<T, F: Flavor> {
    pub forward: ShiftFamily<T, F>,
    pub backward: ShiftFamily<T, F>,
}

impl<T: Scalar, F: Flavor> InterleavingWitness<T, F> {
    pub fn new(forward: ShiftFamily<T, F>, backward: ShiftFamily<T, F>) -> Result<Self, InterleavingError> {
        if forward.delta != backward.delta {
            return Err(InterleavingError::ShiftMismatch(forward.delta.to_string(), backward.delta.to_string()));
        }
        Ok(InterleavingWitness { forward, backward })
    }

    pub fn delta(&self) -> &T {
        &self.forward.delta
    }

    /// Identity witness of a persistence with itself at shift 0.
    pub fn identity(p: &Persistence<T, F>) -> Self {
        InterleavingWitness { forward: ShiftFamily::identity(p), backward: ShiftFamily::identity(p) }
    }

    /// Witness between `g` and `g.shifted(c)`: identities forward and the
    /// `2c` transitions of `g` backward.
    pub fn time_shift(g: &Persistence<T, F>, c: &T) -> Result<Self, InterleavingError> {
        let h = g.shifted(c);
        let forward = ShiftFamily::new(g, &h, c.clone(), g.objects.iter().map(F::identity).collect())?;
        let two = c.clone() + c.clone();
        let maps = g.grid.iter().map(|u| g.map(u, &(u.clone() + two.clone()))).collect();
        let backward = ShiftFamily::new(&h, g, c.clone(), maps)?;
        InterleavingWitness::new(forward, backward)
    }
}

/// Post-composes both families with transitions to reach shift `epsilon`.
pub fn pad_interleaving<T: Scalar, F: Flavor>(
    g: &Persistence<T, F>,
    h: &Persistence<T, F>,
    w: &InterleavingWitness<T, F>,
    epsilon: &T,
) -> Result<InterleavingWitness<T, F>, InterleavingError> {
    InterleavingWitness::new(w.forward.pad(g, h, epsilon)?, w.backward.pad(h, g, epsilon)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramKind {
    /// `f_v ∘ G(u→v) = G'(u+δ → v+δ) ∘ f_u`.
    ForwardSquare,
    /// `g_v ∘ G'(u→v) = G(u+δ → v+δ) ∘ g_u`.
    BackwardSquare,
    /// `g_{u+δ} ∘ f_u = G(u → u+2δ)`.
    ForwardTriangle,
    /// `f_{u+δ} ∘ g_u = G'(u → u+2δ)`.
    BackwardTriangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramId {
    pub kind: DiagramKind,
    pub u: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramFailure {
    pub diagram: DiagramId,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterleavingReport {
    pub delta: String,
    pub verdict: Verdict,
    pub checked: usize,
    pub verified: usize,
    pub undecided: Vec<DiagramId>,
    pub failures: Vec<DiagramFailure>,
}

/// Levels where a family's diagrams can change: grid points of the source,
/// target grid points pulled back by δ, and source grid points pulled back by 2δ.
fn test_points<T: Scalar>(source: &[T], target: &[T], delta: &T) -> Vec<T> {
    let Some(start) = source.first() else { return Vec::new() };
    let two = delta.clone() + delta.clone();
    let mut pts: Vec<T> = source
        .iter()
        .cloned()
        .chain(target.iter().map(|q| q.clone() - delta.clone()))
        .chain(source.iter().map(|p| p.clone() - two.clone()))
        .filter(|t| t >= start)
        .collect();
    sort_scalars(&mut pts);
    pts
}

struct Audit {
    report: InterleavingReport,
}

impl Audit {
    fn record(&mut self, kind: DiagramKind, u: &impl ToString, v: &impl ToString, (d, witness): (Decision, Option<String>)) {
        let diagram = DiagramId { kind, u: u.to_string(), v: v.to_string() };
        self.report.checked += 1;
        match d {
            Decision::Yes => self.report.verified += 1,
            Decision::Unknown => self.report.undecided.push(diagram),
            Decision::No => self.report.failures.push(DiagramFailure { diagram, witness }),
        }
    }
}

fn audit_family<T: Scalar, F: Flavor>(
    audit: &mut Audit,
    (g, h): (&Persistence<T, F>, &Persistence<T, F>),
    (f, b): (&ShiftFamily<T, F>, &ShiftFamily<T, F>),
    (square, triangle): (DiagramKind, DiagramKind),
) {
    let delta = &f.delta;
    let two = delta.clone() + delta.clone();
    let pts = test_points(&g.grid, &h.grid, delta);
    for w in pts.windows(2) {
        let (u, v) = (&w[0], &w[1]);
        let (us, vs) = (u.clone() + delta.clone(), v.clone() + delta.clone());
        let left = F::compose(&g.map(u, v), &f.at(g, h, v));
        let right = F::compose(&f.at(g, h, u), &h.map(&us, &vs));
        audit.record(square, u, v, F::compare(&left, &right, &h.object_at(&vs)));
    }
    for u in &pts {
        let us = u.clone() + delta.clone();
        let round = F::compose(&f.at(g, h, u), &b.at(h, g, &us));
        let direct = g.map(u, &(u.clone() + two.clone()));
        audit.record(triangle, u, &(u.clone() + two.clone()), F::compare(&round, &direct, &g.object_at(&(u.clone() + two.clone()))));
    }
}

/// Checks the four families of interleaving diagrams on every level where
/// they can change. Verified only if every diagram is certified.
pub fn check_interleaving<T: Scalar, F: Flavor>(g: &Persistence<T, F>, h: &Persistence<T, F>, w: &InterleavingWitness<T, F>) -> InterleavingReport {
    let mut audit = Audit {
        report: InterleavingReport {
            delta: w.delta().to_string(),
            verdict: Verdict::Verified,
            checked: 0,
            verified: 0,
            undecided: Vec::new(),
            failures: Vec::new(),
        },
    };
    audit_family(&mut audit, (g, h), (&w.forward, &w.backward), (DiagramKind::ForwardSquare, DiagramKind::ForwardTriangle));
    audit_family(&mut audit, (h, g), (&w.backward, &w.forward), (DiagramKind::BackwardSquare, DiagramKind::BackwardTriangle));
    let mut report = audit.report;
    report.verdict = if !report.failures.is_empty() {
        Verdict::Refuted
    } else if !report.undecided.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Verified
    };
    report
}

pub type Module<T, F> = Persistence<T, ModuleFlavor<F>>;

/// Direct sum of interval modules, one per bar; the basis at each grid point
/// lists the live bars in diagram order.
pub fn module_from_diagram<T: Scalar, F: Field>(d: &PersistenceDiagram<T>) -> Module<T, F> {
    let grid = d.endpoints();
    let alive = |i: usize| -> Vec<usize> { (0..d.len()).filter(|&k| d.bars()[k].contains(&grid[i])).collect() };
    let objects: Vec<QuotientSpace<F>> = (0..grid.len()).map(|i| QuotientSpace::free(alive(i).len())).collect();
    let transitions = (1..grid.len())
        .map(|i| bar_matrix(&alive(i - 1), &alive(i), |k, l| if k == l { F::one() } else { F::zero() }))
        .collect();
    Persistence::new(grid, objects, transitions).expect("endpoints are increasing")
}

fn bar_matrix<F: Field>(source: &[usize], target: &[usize], coeff: impl Fn(usize, usize) -> F) -> Matrix<F> {
    let mut m = Matrix::zeros(target.len(), source.len());
    for (j, &k) in source.iter().enumerate() {
        for (i, &l) in target.iter().enumerate() {
            m[(i, j)] = coeff(k, l);
        }
    }
    m
}

/// Shift family between interval modules built by [`module_from_diagram`]:
/// bar `k` of the source maps to bar `l` of the target with coefficient
/// `coeff(k, l)` wherever both are alive.
pub fn bar_family<T: Scalar, F: Field>(
    (sd, source): (&PersistenceDiagram<T>, &Module<T, F>),
    (td, target): (&PersistenceDiagram<T>, &Module<T, F>),
    delta: T,
    coeff: impl Fn(usize, usize) -> F,
) -> Result<ShiftFamily<T, ModuleFlavor<F>>, InterleavingError> {
    let maps = source
        .grid
        .iter()
        .map(|u| {
            let s: Vec<usize> = (0..sd.len()).filter(|&k| sd.bars()[k].contains(u)).collect();
            let shifted = u.clone() + delta.clone();
            let t: Vec<usize> = match target.index_at(&shifted) {
                Some(j) => (0..td.len()).filter(|&l| td.bars()[l].contains(&target.grid[j])).collect(),
                None => Vec::new(),
            };
            bar_matrix(&s, &t, &coeff)
        })
        .collect();
    ShiftFamily::new(source, target, delta, maps)
}

/// Rank of the image of `M(grid_i → grid_j)`.
fn rank_invariant<T: Scalar, F: Field>(m: &Module<T, F>, i: usize, j: usize) -> usize {
    m.objects[j].image_rank(&m.map_indices(i, j))
}

/// Interval decomposition from the rank invariant: the multiplicity of
/// `[g_i, g_j)` is `r(i,j-1) - r(i,j) - r(i-1,j-1) + r(i-1,j)`.
pub fn barcode<T: Scalar, F: Field>(m: &Module<T, F>) -> PersistenceDiagram<T> {
    let n = m.grid.len();
    let mut r = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            r[i][j] = rank_invariant(m, i, j) as i64;
        }
    }
    let at = |i: isize, j: usize| -> i64 { if i < 0 { 0 } else { r[i as usize][j] } };
    let mut bars = Vec::new();
    for i in 0..n {
        let ii = i as isize;
        for j in i + 1..=n {
            let mult = if j == n {
                at(ii, n - 1) - at(ii - 1, n - 1)
            } else {
                at(ii, j - 1) - at(ii, j) - at(ii - 1, j - 1) + at(ii - 1, j)
            };
            debug_assert!(mult >= 0, "rank invariant is not interval decomposable");
            for _ in 0..mult.max(0) {
                bars.push(Bar {
                    birth: m.grid[i].clone(),
                    death: if j == n { Extended::Infinite } else { Extended::Finite(m.grid[j].clone()) },
                });
            }
        }
    }
    PersistenceDiagram::new(bars).expect("bars have positive length")
}

/// `d_I` of two modules over a field, as the bottleneck distance of barcodes.
pub fn interleaving_distance_modules<T: Scalar, F: Field>(a: &Module<T, F>, b: &Module<T, F>) -> Extended<T> {
    bottleneck_distance(&barcode(a), &barcode(b))
}

/// Abelianization over `F`: each group becomes `F^gens` modulo its relator
/// columns, each homomorphism its exponent-sum matrix.
pub fn group_to_module<T: Scalar, F: Field>(p: &Persistence<T, GroupFlavor>) -> Module<T, F> {
    let objects = p
        .objects
        .iter()
        .map(|o| {
            let pres = o.presentation();
            let rel = pres.relator_matrix().map(F::from_int);
            QuotientSpace { dim: pres.generators(), relations: rel.columns() }
        })
        .collect();
    let transitions = p.transitions.iter().map(|h| h.abelianized_matrix().map(F::from_int)).collect();
    Persistence::new(p.grid.clone(), objects, transitions).expect("same shape as the group persistence")
}

/// Group persistence of the basepoint component over the critical values of
/// `k` from the first level containing the basepoint.
pub fn group_persistence<T: Scalar>(k: &FilteredComplex<T>, basepoint: Vertex, budget: &Budget) -> Result<Persistence<T, GroupFlavor>, InterleavingError> {
    let p = Pi1Persistence::of_complex(k, basepoint, budget)?;
    Ok(from_pi1(&p, budget))
}

pub(crate) fn from_pi1<T: Scalar>(p: &Pi1Persistence<T>, budget: &Budget) -> Persistence<T, GroupFlavor> {
    let n = p.grid().len();
    let objects = (0..n).map(|i| GroupObject::new(p.level(i).presentation().clone(), budget)).collect();
    let transitions = (1..n).map(|i| p.transition(i - 1).clone()).collect();
    Persistence::new(p.grid().to_vec(), objects, transitions).expect("consistent levels")
}

fn inclusion_family<T: Scalar>(
    from: &Pi1Persistence<T>,
    g: &Persistence<T, GroupFlavor>,
    to: &Pi1Persistence<T>,
    h: &Persistence<T, GroupFlavor>,
    delta: &T,
) -> Result<ShiftFamily<T, GroupFlavor>, InterleavingError> {
    let mut maps = Vec::new();
    for (i, u) in g.grid().iter().enumerate() {
        let shifted = u.clone() + delta.clone();
        let source = from.level(i);
        let not_nested = || InterleavingError::NotNested { level: u.to_string() };
        let map = match h.index_at(&shifted) {
            None => return Err(not_nested()),
            Some(j) => {
                let target = to.level(j);
                let images = (0..source.presentation().generators())
                    .map(|k| target.try_path_word(&source.generator_loop(k)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(not_nested)?;
                GroupHom::with_oracle(source.presentation().clone(), target.presentation().clone(), images, h.object(j).oracle())
                    .map_err(|source| InterleavingError::Group { index: i, source })?
            }
        };
        maps.push(map);
    }
    ShiftFamily::new(g, h, delta.clone(), maps)
}

/// π₁ persistences of the basepoint components of `x` and `y`, with the
/// maps induced by `X_u ⊂ Y_{u+δ}` and `Y_u ⊂ X_{u+δ}` (same vertex labels).
#[allow(clippy::type_complexity)]
pub fn inclusion_interleaving<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    basepoint: Vertex,
    delta: &T,
    budget: &Budget,
) -> Result<(Persistence<T, GroupFlavor>, Persistence<T, GroupFlavor>, InterleavingWitness<T, GroupFlavor>), InterleavingError> {
    let (px, py) = (Pi1Persistence::of_complex(x, basepoint, budget)?, Pi1Persistence::of_complex(y, basepoint, budget)?);
    let (g, h) = (from_pi1(&px, budget), from_pi1(&py, budget));
    let w = InterleavingWitness::new(inclusion_family(&px, &g, &py, &h, delta)?, inclusion_family(&py, &h, &px, &g, delta)?)?;
    Ok((g, h, w))
}

/// Text form of a group witness: a `delta` line, then one line per map,
/// `forward <i>: <image>, <image>, ...` with images in word syntax.
pub fn witness_to_text<T: Scalar>(w: &InterleavingWitness<T, GroupFlavor>) -> String {
    let mut out = format!("delta {}\n", w.delta());
    for (name, family) in [("forward", &w.forward), ("backward", &w.backward)] {
        for (i, m) in family.maps().iter().enumerate() {
            let images: Vec<String> = m.images().iter().map(ToString::to_string).collect();
            let line = format!("{name} {i}: {}", images.join(", "));
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    out
}

/// Parses [`witness_to_text`] output against the two persistences; every
/// map is re-certified by the target's oracle.
pub fn parse_witness<T: Scalar>(
    text: &str,
    g: &Persistence<T, GroupFlavor>,
    h: &Persistence<T, GroupFlavor>,
) -> Result<InterleavingWitness<T, GroupFlavor>, InterleavingError> {
    let mut delta: Option<T> = None;
    let mut images: [Vec<Option<Vec<Word>>>; 2] = [vec![None; g.grid().len()], vec![None; h.grid().len()]];
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| InterleavingError::WitnessParse { line: n + 1, message };
        if let Some(rest) = line.strip_prefix("delta") {
            delta = Some(T::parse_decimal(rest.trim()).ok_or_else(|| err(format!("bad shift `{}`", rest.trim())))?);
            continue;
        }
        let (head, body) = line.split_once(':').ok_or_else(|| err("expected `forward|backward <index>: <images>`".into()))?;
        let mut head = head.split_whitespace();
        let side = match head.next() {
            Some("forward") => 0,
            Some("backward") => 1,
            other => return Err(err(format!("unknown direction {other:?}"))),
        };
        let index: usize = head.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("missing level index".into()))?;
        let slot = images[side].get_mut(index).ok_or_else(|| err(format!("level index {index} out of range")))?;
        let words = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|w| w.trim().parse::<Word>()).collect::<Result<Vec<_>, _>>().map_err(|e| err(e.to_string()))?
        };
        *slot = Some(words);
    }
    let delta = delta.ok_or(InterleavingError::WitnessParse { line: 0, message: "missing `delta` line".into() })?;
    let build = |side: usize, src: &Persistence<T, GroupFlavor>, dst: &Persistence<T, GroupFlavor>| -> Result<ShiftFamily<T, GroupFlavor>, InterleavingError> {
        let mut maps = Vec::new();
        for (i, u) in src.grid().iter().enumerate() {
            let words = images[side][i].clone().ok_or(InterleavingError::WitnessParse { line: 0, message: format!("no map for level {i}") })?;
            let target = dst.object_at(&(u.clone() + delta.clone()));
            let map = GroupHom::with_oracle(src.object(i).presentation().clone(), target.presentation().clone(), words, target.oracle())
                .map_err(|source| InterleavingError::Group { index: i, source })?;
            maps.push(map);
        }
        ShiftFamily::new(src, dst, delta.clone(), maps)
    };
    InterleavingWitness::new(build(0, g, h)?, build(1, h, g)?)
}

/// One direction of the product interleaving: `A` symbols go through `m`,
/// `B` symbols through `s` into the quotient of the other cover at `u + δ`.
fn product_family<T: Scalar>(
    from: &CoverPersistence<T>,
    to: &CoverPersistence<T>,
    m: &ShiftFamily<T, GroupFlavor>,
    s: &ShiftFamily<T, GroupFlavor>,
) -> Result<ShiftFamily<T, GroupFlavor>, InterleavingError> {
    let delta = m.delta().clone();
    let mut maps = Vec::new();
    for (i, u) in from.grid().iter().enumerate() {
        let source = from.q.object(i);
        let shifted = u.clone() + delta.clone();
        let map = match to.q.index_at(&shifted) {
            None => GroupFlavor::zero_map(source, &GroupFlavor::zero_object()),
            Some(j) => {
                let shift = to.levels[j].a.presentation().generators();
                let images = m.maps()[i].images().iter().cloned().chain(s.maps()[i].images().iter().map(|w| w.shift(shift))).collect();
                let target = to.q.object(j);
                GroupHom::with_oracle(source.presentation().clone(), target.presentation().clone(), images, target.oracle())
                    .map_err(|source| InterleavingError::Group { index: i, source })?
            }
        };
        maps.push(map);
    }
    ShiftFamily::new(&from.q, &to.q, delta, maps)
}

/// Builds `p_u` and `q_u` between the quotient persistences of two covers
/// from piece witnesses at a common shift.
pub fn product_interleaving<T: Scalar>(
    cx: &CoverPersistence<T>,
    cx2: &CoverPersistence<T>,
    wa: &InterleavingWitness<T, GroupFlavor>,
    wb: &InterleavingWitness<T, GroupFlavor>,
) -> Result<InterleavingWitness<T, GroupFlavor>, InterleavingError> {
    if wa.delta() != wb.delta() {
        return Err(InterleavingError::ShiftMismatch(wa.delta().to_string(), wb.delta().to_string()));
    }
    InterleavingWitness::new(product_family(cx, cx2, &wa.forward, &wb.forward)?, product_family(cx2, cx, &wa.backward, &wb.backward)?)
}

/// Abelianized distances over the rationals. These bound nothing about the
/// groups themselves; they are reported for comparison only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurrogateDistances {
    pub label: String,
    pub d_a: String,
    pub d_b: String,
    pub d_x: String,
    pub equality_observed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub delta_a: String,
    pub delta_b: String,
    pub bound: String,
    /// Audit of the product witness between the quotient persistences.
    pub product: InterleavingReport,
    /// Audit of `φ' ∘ p ∘ r` and `φ ∘ q ∘ r'` between the `π₁(X)` persistences.
    pub total: InterleavingReport,
    /// Verified iff both audits verify.
    pub upper_bound: Verdict,
    pub surrogate: SurrogateDistances,
}

/// Certifies `d_I(π₁(X), π₁(X')) <= max(δ_A, δ_B)` by padding both piece
/// witnesses to the larger shift, building the product interleaving and
/// conjugating it by the 0-interleavings `r, φ` on each side.
pub fn max_corollary_report<T: Scalar>(
    cx: &CoverPersistence<T>,
    cx2: &CoverPersistence<T>,
    wa: &InterleavingWitness<T, GroupFlavor>,
    wb: &InterleavingWitness<T, GroupFlavor>,
) -> Result<CorollaryReport, InterleavingError> {
    let bound = if wa.delta() >= wb.delta() { wa.delta().clone() } else { wb.delta().clone() };
    let wa_pad = pad_interleaving(&cx.a, &cx2.a, wa, &bound)?;
    let wb_pad = pad_interleaving(&cx.b, &cx2.b, wb, &bound)?;
    let p = product_interleaving(cx, cx2, &wa_pad, &wb_pad)?;
    let product = check_interleaving(&cx.q, &cx2.q, &p);
    let forward = cx.r.then(&cx.x, &cx.q, &p.forward, &cx2.q).then(&cx.x, &cx2.q, &cx2.phi, &cx2.x);
    let backward = cx2.r.then(&cx2.x, &cx2.q, &p.backward, &cx.q).then(&cx2.x, &cx.q, &cx.phi, &cx.x);
    let total = check_interleaving(&cx.x, &cx2.x, &InterleavingWitness::new(forward, backward)?);
    let upper_bound = Verdict::all([product.verdict, total.verdict]);
    let dist = |g: &Persistence<T, GroupFlavor>, h: &Persistence<T, GroupFlavor>| {
        interleaving_distance_modules(&group_to_module::<T, crate::Q>(g), &group_to_module::<T, crate::Q>(h))
    };
    let (d_a, d_b, d_x) = (dist(&cx.a, &cx2.a), dist(&cx.b, &cx2.b), dist(&cx.x, &cx2.x));
    let max_ab = if d_a >= d_b { d_a.clone() } else { d_b.clone() };
    let surrogate = SurrogateDistances {
        label: "abelianized over Q (surrogate)".to_string(),
        equality_observed: d_x == max_ab,
        d_a: d_a.to_string(),
        d_b: d_b.to_string(),
        d_x: d_x.to_string(),
    };
    Ok(CorollaryReport {
        delta_a: wa.delta().to_string(),
        delta_b: wb.delta().to_string(),
        bound: bound.to_string(),
        product,
        total,
        upper_bound,
        surrogate,
    })
}
