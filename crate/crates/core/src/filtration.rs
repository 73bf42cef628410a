//! Filtered simplicial complexes, sublevel snapshots, covers, cones and
//! suspensions.
//!
//! Sublevel sets use the closed convention: the snapshot at `u` holds every
//! simplex with value `<= u`, so snapshots change exactly at critical values.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{sort_scalars, Scalar};
use crate::unionfind::UnionFind;

pub type Vertex = usize;
/// Strictly increasing vertex tuple.
pub type Simplex = Vec<Vertex>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("simplex {simplex:?} repeats a vertex")]
    RepeatedVertex { simplex: Simplex },
    #[error("duplicate simplex {simplex:?}")]
    Duplicate { simplex: Simplex },
    #[error("face {face:?} of {simplex:?} is missing")]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("face {face:?} has value {face_value} above its coface {simplex:?} at {value}")]
    Monotonicity { simplex: Simplex, value: String, face: Simplex, face_value: String },
    #[error("simplex {simplex:?} lies in neither cover piece")]
    CoverViolation { simplex: Simplex },
    #[error("apex label {0} is already a vertex")]
    ApexCollision(Vertex),
    #[error("selected simplices do not form a subcomplex: {simplex:?} lacks face {face:?}")]
    NotSubcomplex { simplex: Simplex, face: Simplex },
    #[error("points must all have dimension {expected}, line {line} has {got}")]
    PointDimension { line: usize, expected: usize, got: usize },
}

/// Codimension-one faces, in the order of the omitted vertex.
pub fn facets(simplex: &[Vertex]) -> impl Iterator<Item = Simplex> + '_ {
    (0..if simplex.len() > 1 { simplex.len() } else { 0 }).map(move |i| {
        let mut f = simplex.to_vec();
        f.remove(i);
        f
    })
}

fn canonical_order(a: &[Vertex], b: &[Vertex]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Finite simplicial complex with a monotone value on each simplex.
///
/// Simplices are stored sorted by dimension, then lexicographically; indices
/// into that order are stable and shared by all snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex<T> {
    simplices: Vec<Simplex>,
    values: Vec<T>,
    index: HashMap<Simplex, usize>,
}

impl<T: Scalar> FilteredComplex<T> {
    /// Validates and stores the given simplices. Vertex tuples may come in any
    /// order; faces must all be listed.
    pub fn new(entries: Vec<(Vec<Vertex>, T)>) -> Result<Self, FiltrationError> {
        let mut entries: Vec<(Simplex, T)> = entries
            .into_iter()
            .map(|(mut s, v)| {
                s.sort_unstable();
                (s, v)
            })
            .collect();
        for (s, _) in &entries {
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(FiltrationError::RepeatedVertex { simplex: s.clone() });
            }
        }
        entries.sort_by(|a, b| canonical_order(&a.0, &b.0));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (s, _)) in entries.iter().enumerate() {
            if s.is_empty() {
                return Err(FiltrationError::Parse { line: 0, message: "empty simplex".into() });
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(FiltrationError::Duplicate { simplex: s.clone() });
            }
        }
        for (s, v) in &entries {
            for f in facets(s) {
                let Some(&fi) = index.get(&f) else {
                    return Err(FiltrationError::MissingFace { simplex: s.clone(), face: f });
                };
                let fv = &entries[fi].1;
                if fv.total_cmp(v) == Ordering::Greater {
                    return Err(FiltrationError::Monotonicity {
                        simplex: s.clone(),
                        value: v.to_string(),
                        face: f,
                        face_value: fv.to_string(),
                    });
                }
            }
        }
        let (simplices, values) = entries.into_iter().unzip();
        Ok(FilteredComplex { simplices, values, index })
    }

    pub fn empty() -> Self {
        FilteredComplex { simplices: Vec::new(), values: Vec::new(), index: HashMap::new() }
    }

    /// Parses the `.flt` format: `v0 v1 ... vk ; value` per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self, FiltrationError> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| FiltrationError::Parse { line: n + 1, message };
            let (verts, value) = line.split_once(';').ok_or_else(|| err("expected `vertices ; value`".into()))?;
            let simplex = verts
                .split_whitespace()
                .map(|t| t.parse::<Vertex>().map_err(|_| err(format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if simplex.is_empty() {
                return Err(err("no vertices".into()));
            }
            let value = T::parse_decimal(value.trim()).ok_or_else(|| err(format!("bad value `{}`", value.trim())))?;
            entries.push((simplex, value));
        }
        FilteredComplex::new(entries)
    }

    /// Canonical `.flt` text (dimension, then lexicographic order).
    pub fn to_flt(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.simplices.iter().zip(&self.values) {
            let verts: Vec<String> = s.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{} ; {}", verts.join(" "), v);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &T {
        &self.values[index]
    }

    pub fn index_of(&self, simplex: &[Vertex]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices.iter().take_while(|s| s.len() == 1).count()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// Sorted distinct simplex values.
    pub fn critical_values(&self) -> Vec<T> {
        let mut v = self.values.clone();
        sort_scalars(&mut v);
        v
    }

    pub fn min_value(&self) -> Option<T> {
        self.critical_values().into_iter().next()
    }

    /// Simplices with value `<= u`.
    pub fn sublevel(&self, u: &T) -> Snapshot<'_, T> {
        let member: Vec<bool> = self.values.iter().map(|v| v.total_cmp(u) != Ordering::Greater).collect();
        Snapshot::from_mask(self, Some(u.clone()), member)
    }

    /// The whole complex as a snapshot.
    pub fn full(&self) -> Snapshot<'_, T> {
        Snapshot::from_mask(self, None, vec![true; self.len()])
    }

    /// Full subcomplex on `vertices`, keeping values.
    pub fn full_subcomplex(&self, vertices: &BTreeSet<Vertex>) -> FilteredComplex<T> {
        let entries = self
            .simplices
            .iter()
            .zip(&self.values)
            .filter(|(s, _)| s.iter().all(|v| vertices.contains(v)))
            .map(|(s, v)| (s.clone(), v.clone()))
            .collect();
        FilteredComplex::new(entries).expect("full subcomplexes are closed")
    }

    /// Applies a monotone map to every value (for example a time shift).
    pub fn map_values<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Result<FilteredComplex<S>, FiltrationError> {
        FilteredComplex::new(self.simplices.iter().cloned().zip(self.values.iter().map(f)).collect())
    }

    /// Adds `c` to every value.
    pub fn shifted(&self, c: &T) -> FilteredComplex<T> {
        self.map_values(|v| v.clone() + c.clone()).expect("shifts preserve monotonicity")
    }

    /// Cone with apex `apex` at the minimum value (zero for the empty complex).
    pub fn cone(&self, apex: Vertex) -> Result<FilteredComplex<T>, FiltrationError> {
        if self.index.contains_key(&vec![apex]) {
            return Err(FiltrationError::ApexCollision(apex));
        }
        let base = self.min_value().unwrap_or_else(T::zero);
        let mut entries: Vec<(Simplex, T)> = self.simplices.iter().cloned().zip(self.values.iter().cloned()).collect();
        entries.push((vec![apex], base));
        for (s, v) in self.simplices.iter().zip(&self.values) {
            let mut c = s.clone();
            c.push(apex);
            entries.push((c, v.clone()));
        }
        FilteredComplex::new(entries)
    }

    /// Two cones on fresh apexes glued along the complex. Returns the complex
    /// and the two apex labels.
    pub fn suspension(&self) -> (FilteredComplex<T>, Vertex, Vertex) {
        let top = self.vertices().into_iter().max().map_or(0, |m| m + 1);
        let (plus, minus) = (top, top + 1);
        let cone = self.cone(plus).expect("fresh apex");
        let mut entries: Vec<(Simplex, T)> = cone.simplices.iter().cloned().zip(cone.values.iter().cloned()).collect();
        entries.push((vec![minus], self.min_value().unwrap_or_else(T::zero)));
        for (s, v) in self.simplices.iter().zip(&self.values) {
            let mut c = s.clone();
            c.push(minus);
            entries.push((c, v.clone()));
        }
        (FilteredComplex::new(entries).expect("suspension is closed and monotone"), plus, minus)
    }

    /// Splits into full subcomplexes on `a` and `b`, which must cover every simplex.
    pub fn restrict_cover(&self, a: BTreeSet<Vertex>, b: BTreeSet<Vertex>) -> Result<CoverFiltration<T>, FiltrationError> {
        for s in &self.simplices {
            let in_a = s.iter().all(|v| a.contains(v));
            let in_b = s.iter().all(|v| b.contains(v));
            if !in_a && !in_b {
                return Err(FiltrationError::CoverViolation { simplex: s.clone() });
            }
        }
        Ok(CoverFiltration { complex: self.clone(), a, b })
    }

    /// Euler characteristic of the whole complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }
}

impl FilteredComplex<f64> {
    /// Vietoris–Rips complex of a Euclidean point cloud.
    pub fn vietoris_rips(points: &[Vec<f64>], max_dim: usize, max_scale: f64) -> FilteredComplex<f64> {
        let n = points.len();
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                    .collect()
            })
            .collect();
        rips_from_distances(&dist, max_dim, &max_scale)
    }
}

/// Rips complex from a symmetric distance matrix: `{v0..vk}` is present when
/// `k <= max_dim` and its diameter is `<= max_scale`; its value is the diameter.
pub fn rips_from_distances<T: Scalar>(dist: &[Vec<T>], max_dim: usize, max_scale: &T) -> FilteredComplex<T> {
    let n = dist.len();
    let mut entries: Vec<(Simplex, T)> = Vec::new();
    let close = |i: usize, j: usize| dist[i][j].total_cmp(max_scale) != Ordering::Greater;
    // Depth-first clique extension in increasing vertex order.
    let mut stack: Vec<(Simplex, T)> = (0..n).map(|v| (vec![v], T::zero())).collect();
    stack.reverse();
    while let Some((s, value)) = stack.pop() {
        let last = *s.last().expect("nonempty");
        if s.len() <= max_dim {
            for w in (last + 1..n).rev() {
                if s.iter().all(|&x| close(x, w)) {
                    let diam = s.iter().fold(value.clone(), |m, &x| m.max_of(&dist[x][w]));
                    let mut t = s.clone();
                    t.push(w);
                    stack.push((t, diam));
                }
            }
        }
        entries.push((s, value));
    }
    FilteredComplex::new(entries).expect("rips complexes are closed and monotone")
}

/// Parses one point per line, whitespace-separated coordinates.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>, FiltrationError> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line
            .split_whitespace()
            .map(|t| {
                f64::parse_decimal(t).ok_or_else(|| FiltrationError::Parse { line: n + 1, message: format!("bad coordinate `{t}`") })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(FiltrationError::PointDimension { line: n + 1, expected: first.len(), got: p.len() });
            }
        }
        points.push(p);
    }
    Ok(points)
}

/// A face-closed subset of a complex's simplices.
#[derive(Clone, Debug)]
pub struct Snapshot<'a, T> {
    parent: &'a FilteredComplex<T>,
    level: Option<T>,
    member: Vec<bool>,
    members: Vec<usize>,
}

impl<'a, T: Scalar> Snapshot<'a, T> {
    fn from_mask(parent: &'a FilteredComplex<T>, level: Option<T>, member: Vec<bool>) -> Self {
        let members = (0..member.len()).filter(|&i| member[i]).collect();
        Snapshot { parent, level, member, members }
    }

    pub fn parent(&self) -> &'a FilteredComplex<T> {
        self.parent
    }

    /// The level this snapshot was cut at (`None` for the whole complex).
    pub fn level(&self) -> Option<&T> {
        self.level.as_ref()
    }

    /// Indices into the parent, in canonical order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.member[i]
    }

    pub fn contains(&self, simplex: &[Vertex]) -> bool {
        self.parent.index_of(simplex).is_some_and(|i| self.member[i])
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.contains(&[v])
    }

    pub fn simplices(&self) -> impl Iterator<Item = &'a Simplex> + '_ {
        self.members.iter().map(|&i| &self.parent.simplices[i])
    }

    /// Simplices of dimension `k`, in canonical order.
    pub fn of_dim(&self, k: usize) -> Vec<&'a Simplex> {
        self.simplices().filter(|s| s.len() == k + 1).collect()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.of_dim(0).into_iter().map(|s| s[0]).collect()
    }

    /// Intersection with the full subcomplex on `vertices`.
    pub fn restrict(&self, vertices: &BTreeSet<Vertex>) -> Snapshot<'a, T> {
        let member = (0..self.member.len())
            .map(|i| self.member[i] && self.parent.simplices[i].iter().all(|v| vertices.contains(v)))
            .collect();
        Snapshot::from_mask(self.parent, self.level.clone(), member)
    }

    pub fn is_subset_of(&self, other: &Snapshot<'_, T>) -> bool {
        self.members.iter().all(|&i| other.member[i])
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let verts = self.vertices();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(verts.len());
        for e in self.of_dim(1) {
            uf.union(pos[&e[0]], pos[&e[1]]);
        }
        let mut groups: HashMap<usize, Vec<Vertex>> = HashMap::new();
        for (i, &v) in verts.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(v);
        }
        let mut out: Vec<Vec<Vertex>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Vertices in the component of `v`.
    pub fn component_of(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.components().into_iter().find(|c| c.contains(&v)).unwrap_or_default().into_iter().collect()
    }
}

/// Which piece of a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    /// The whole space `X`.
    Total,
    A,
    B,
    /// The intersection `A ∩ B`.
    C,
}

/// Cover of a filtration by two full subcomplexes.
#[derive(Clone, Debug)]
pub struct CoverFiltration<T> {
    complex: FilteredComplex<T>,
    a: BTreeSet<Vertex>,
    b: BTreeSet<Vertex>,
}

impl<T: Scalar> CoverFiltration<T> {
    pub fn complex(&self) -> &FilteredComplex<T> {
        &self.complex
    }

    pub fn vertices(&self, piece: Piece) -> BTreeSet<Vertex> {
        match piece {
            Piece::Total => self.complex.vertices().into_iter().collect(),
            Piece::A => self.a.clone(),
            Piece::B => self.b.clone(),
            Piece::C => self.a.intersection(&self.b).copied().collect(),
        }
    }

    /// Snapshot of a piece at level `u`.
    pub fn at(&self, piece: Piece, u: &T) -> Snapshot<'_, T> {
        let s = self.complex.sublevel(u);
        match piece {
            Piece::Total => s,
            _ => s.restrict(&self.vertices(piece)),
        }
    }

    /// The filtration of one piece as a standalone complex.
    pub fn piece_complex(&self, piece: Piece) -> FilteredComplex<T> {
        self.complex.full_subcomplex(&self.vertices(piece))
    }

    /// Cover of a time-shifted copy.
    pub fn shifted(&self, c: &T) -> CoverFiltration<T> {
        CoverFiltration { complex: self.complex.shifted(c), a: self.a.clone(), b: self.b.clone() }
    }

    pub fn check_connectivity(&self, levels: &[T]) -> Vec<ConnectivityLevel<T>> {
        levels
            .iter()
            .map(|u| {
                let report = |p: Piece| self.at(p, u).is_connected();
                let c = self.at(Piece::C, u);
                ConnectivityLevel {
                    level: u.clone(),
                    a_connected: report(Piece::A),
                    b_connected: report(Piece::B),
                    c_connected: c.is_connected(),
                    c_nonempty: !c.is_empty(),
                }
            })
            .collect()
    }
}

/// Path-connectedness of the cover pieces at one level. The empty space counts
/// as not path-connected.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityLevel<T> {
    pub level: T,
    pub a_connected: bool,
    pub b_connected: bool,
    pub c_connected: bool,
    pub c_nonempty: bool,
}

impl<T> ConnectivityLevel<T> {
    pub fn all_connected(&self) -> bool {
        self.a_connected && self.b_connected && self.c_connected
    }
}

/// A filtered complex with a filtered subcomplex, for relative homology.
#[derive(Clone, Debug)]
pub struct PairFiltration<T> {
    total: FilteredComplex<T>,
    selected: Vec<bool>,
}

impl<T: Scalar> PairFiltration<T> {
    /// Subcomplex given by an explicit simplex list (must be face-closed).
    pub fn from_simplices(total: FilteredComplex<T>, simplices: &[Simplex]) -> Result<Self, FiltrationError> {
        let mut selected = vec![false; total.len()];
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            let i = total.index_of(&s).ok_or_else(|| FiltrationError::NotSubcomplex { simplex: s.clone(), face: s.clone() })?;
            selected[i] = true;
        }
        for (i, s) in total.simplices().iter().enumerate() {
            if selected[i] {
                for f in facets(s) {
                    if !selected[total.index_of(&f).expect("parent is closed")] {
                        return Err(FiltrationError::NotSubcomplex { simplex: s.clone(), face: f });
                    }
                }
            }
        }
        Ok(PairFiltration { total, selected })
    }

    /// Subcomplex given as the full subcomplex on a vertex set.
    pub fn from_vertices(total: FilteredComplex<T>, vertices: &BTreeSet<Vertex>) -> Self {
        let selected = total.simplices().iter().map(|s| s.iter().all(|v| vertices.contains(v))).collect();
        PairFiltration { total, selected }
    }

    pub fn total(&self) -> &FilteredComplex<T> {
        &self.total
    }

    pub fn total_at(&self, u: &T) -> Snapshot<'_, T> {
        self.total.sublevel(u)
    }

    pub fn sub_at(&self, u: &T) -> Snapshot<'_, T> {
        let s = self.total.sublevel(u);
        let member = (0..self.selected.len()).map(|i| s.member[i] && self.selected[i]).collect();
        Snapshot::from_mask(&self.total, Some(u.clone()), member)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staged_triangle() -> FilteredComplex<f64> {
        FilteredComplex::parse("0;0\n1;0\n2;0\n0 1;1\n1 2;1\n0 2;1\n0 1 2;2\n").unwrap()
    }

    #[test]
    fn load_examples() {
        let k = FilteredComplex::<f64>::parse("0 ; 0.0").unwrap();
        assert_eq!((k.len(), k.vertex_count()), (1, 1));
        let t = staged_triangle();
        assert_eq!(t.len(), 7);
        assert_eq!(t.critical_values(), vec![0.0, 1.0, 2.0]);
        let err = FilteredComplex::<f64>::parse("0 ; 1.0\n1 ; 0\n0 1 ; 0.5").unwrap_err();
        assert!(matches!(err, FiltrationError::Monotonicity { .. }));
        assert!(matches!(FilteredComplex::<f64>::parse("0 1 ; 1").unwrap_err(), FiltrationError::MissingFace { .. }));
        assert!(matches!(FilteredComplex::<f64>::parse("0;0\n0;1").unwrap_err(), FiltrationError::Duplicate { .. }));
        assert!(matches!(FilteredComplex::<f64>::parse("0 x;1").unwrap_err(), FiltrationError::Parse { line: 1, .. }));
        assert_eq!(FilteredComplex::<f64>::parse("").unwrap().critical_values(), Vec::<f64>::new());
    }

    #[test]
    fn flt_roundtrip() {
        let t = staged_triangle();
        assert_eq!(FilteredComplex::<f64>::parse(&t.to_flt()).unwrap(), t);
    }

    #[test]
    fn sublevels() {
        let t = staged_triangle();
        assert!(t.sublevel(&-1.0).is_empty());
        assert_eq!(t.sublevel(&5.0).len(), 7);
        let s = t.sublevel(&1.0);
        let oracle: Vec<&Simplex> = t.simplices().iter().zip(t.values()).filter(|(_, v)| **v <= 1.0).map(|(s, _)| s).collect();
        assert_eq!(s.simplices().collect::<Vec<_>>(), oracle);
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn rips_examples() {
        let k = FilteredComplex::vietoris_rips(&[vec![0.0], vec![2.0]], 1, 3.0);
        assert_eq!(k.to_flt(), "0 ; 0\n1 ; 0\n0 1 ; 2\n");
        let h = 3f64.sqrt() / 2.0;
        let tri = FilteredComplex::vietoris_rips(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]], 2, 1.0 + 1e-9);
        assert_eq!(tri.len(), 7);
        assert_eq!(FilteredComplex::vietoris_rips(&[vec![1.0]], 2, 1.0).len(), 1);
    }

    #[test]
    fn rips_matches_subset_oracle() {
        let dist = [
            vec![0, 1, 3, 2],
            vec![1, 0, 2, 4],
            vec![3, 2, 0, 1],
            vec![2, 4, 1, 0],
        ];
        let dist: Vec<Vec<num_rational::Rational64>> =
            dist.iter().map(|r| r.iter().map(|&x| num_rational::Rational64::from_integer(x)).collect()).collect();
        let scale = num_rational::Rational64::from_integer(3);
        let k = rips_from_distances(&dist, 2, &scale);
        for mask in 1u32..16 {
            let s: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            let diam = s.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).map(|(a, b)| dist[a][b]).max().unwrap();
            let expected = s.len() <= 3 && diam <= scale;
            assert_eq!(k.index_of(&s).is_some(), expected, "{s:?}");
            if let Some(i) = k.index_of(&s) {
                assert_eq!(*k.value(i), diam);
            }
        }
    }

    fn wedge() -> FilteredComplex<f64> {
        // Two triangle boundaries sharing vertex 0.
        FilteredComplex::parse("0;0\n1;0\n2;0\n3;0\n4;0\n0 1;0\n1 2;0\n0 2;0\n0 3;0\n3 4;0\n0 4;0\n").unwrap()
    }

    #[test]
    fn covers() {
        let k = wedge();
        let cov = k.restrict_cover([0, 1, 2].into(), [0, 3, 4].into()).unwrap();
        let c = cov.at(Piece::C, &0.0);
        assert_eq!(c.vertices(), vec![0]);
        let report = cov.check_connectivity(&[0.0]);
        assert!(report[0].all_connected() && report[0].c_nonempty);
        let all: BTreeSet<Vertex> = k.vertices().into_iter().collect();
        let cov = k.restrict_cover(all, BTreeSet::new()).unwrap();
        assert!(cov.at(Piece::B, &0.0).is_empty());
        let square = FilteredComplex::<f64>::parse("0;0\n1;0\n2;0\n3;0\n0 1;0\n1 2;0\n2 3;0\n0 3;0").unwrap();
        assert!(matches!(square.restrict_cover([0, 1].into(), [2, 3].into()), Err(FiltrationError::CoverViolation { .. })));
    }

    #[test]
    fn connectivity_flags() {
        let k = FilteredComplex::<f64>::parse("0;0\n1;0\n2;1\n3;1\n0 1;0\n2 3;1\n1 2;2\n").unwrap();
        let cov = k.restrict_cover([0, 1, 2, 3].into(), [1, 2].into()).unwrap();
        let r = cov.check_connectivity(&[-1.0, 1.0, 2.0]);
        assert!(!r[0].c_nonempty && !r[0].c_connected);
        assert!(!r[1].a_connected && !r[1].c_connected);
        assert!(r[2].all_connected());
    }

    #[test]
    fn cones_and_suspensions() {
        let two = FilteredComplex::<f64>::parse("0;0\n1;0").unwrap();
        let c = two.cone(2).unwrap();
        assert_eq!((c.vertex_count(), c.len()), (3, 5));
        assert!(matches!(two.cone(1), Err(FiltrationError::ApexCollision(1))));
        assert_eq!(FilteredComplex::<f64>::empty().cone(0).unwrap().len(), 1);
        let (s, _, _) = two.suspension();
        assert_eq!((s.vertex_count(), s.len()), (4, 8));
        let (e, _, _) = FilteredComplex::<f64>::empty().suspension();
        assert_eq!(e.len(), 2);
        let circle = FilteredComplex::<f64>::parse("0;0\n1;0\n2;0\n0 1;1\n1 2;1\n0 2;1").unwrap();
        let (s2, _, _) = circle.suspension();
        assert_eq!(s2.euler_characteristic(), 2);
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn pair_filtration_validation() {
        let t = staged_triangle();
        assert!(PairFiltration::from_simplices(t.clone(), &[vec![0, 1]]).is_err());
        let p = PairFiltration::from_simplices(t.clone(), &[vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(p.sub_at(&0.0).len(), 2);
        assert_eq!(p.sub_at(&1.0).len(), 3);
    }
}
