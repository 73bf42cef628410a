//! Edge-path presentations of snapshots, inclusion-induced homomorphisms and
//! persistent fundamental groups.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::filtration::{FilteredComplex, Simplex, Snapshot, Vertex};
use crate::fpgroup::{image_descriptor, Budget, Decision, GroupError, GroupHom, ImageDescriptor, Presentation, Word, WordProblem};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Pi1Error {
    #[error("basepoint {basepoint} is absent at level {level}")]
    BasepointAbsent { basepoint: Vertex, level: String },
    #[error("levels out of order: {u} > {v}")]
    LevelOrder { u: String, v: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Presentation of the fundamental group of the basepoint's component.
///
/// Generators are the non-tree edges of a BFS spanning tree (sorted
/// adjacency) oriented from the smaller to the larger vertex; each triangle
/// contributes its boundary word as a relator.
#[derive(Clone, Debug)]
pub struct EdgePathPresentation {
    basepoint: Vertex,
    component: BTreeSet<Vertex>,
    parent: BTreeMap<Vertex, Vertex>,
    tree: BTreeSet<(Vertex, Vertex)>,
    generator_edges: Vec<(Vertex, Vertex)>,
    generator_of: HashMap<(Vertex, Vertex), usize>,
    presentation: Arc<Presentation>,
}

impl EdgePathPresentation {
    pub fn new<T: Scalar>(s: &Snapshot<'_, T>, basepoint: Vertex) -> Result<Self, Pi1Error> {
        if !s.has_vertex(basepoint) {
            let level = s.level().map_or_else(|| "all".to_string(), ToString::to_string);
            return Err(Pi1Error::BasepointAbsent { basepoint, level });
        }
        let edges = s.of_dim(1);
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for e in &edges {
            adj.entry(e[0]).or_default().push(e[1]);
            adj.entry(e[1]).or_default().push(e[0]);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        let mut parent = BTreeMap::new();
        let mut component = BTreeSet::from([basepoint]);
        let mut tree = BTreeSet::new();
        let mut queue = VecDeque::from([basepoint]);
        while let Some(x) = queue.pop_front() {
            for &y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if component.insert(y) {
                    parent.insert(y, x);
                    tree.insert((x.min(y), x.max(y)));
                    queue.push_back(y);
                }
            }
        }
        let generator_edges: Vec<(Vertex, Vertex)> = edges
            .iter()
            .map(|e| (e[0], e[1]))
            .filter(|e| component.contains(&e.0) && !tree.contains(e))
            .collect();
        let generator_of = generator_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut epp = EdgePathPresentation {
            basepoint,
            component,
            parent,
            tree,
            generator_edges,
            generator_of,
            presentation: Arc::new(Presentation::trivial()),
        };
        let relators = s
            .of_dim(2)
            .into_iter()
            .filter(|t| epp.component.contains(&t[0]))
            .map(|t| epp.path_word(&[t[0], t[1], t[2], t[0]]))
            .collect();
        epp.presentation = Arc::new(Presentation::new(epp.generator_edges.len(), relators)?);
        Ok(epp)
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn component(&self) -> &BTreeSet<Vertex> {
        &self.component
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn tree_edges(&self) -> Vec<Simplex> {
        self.tree.iter().map(|&(a, b)| vec![a, b]).collect()
    }

    pub fn generator_edges(&self) -> &[(Vertex, Vertex)] {
        &self.generator_edges
    }

    /// Symbol of the oriented edge `a → b` (identity on tree edges).
    /// Panics if the edge is not in the component.
    pub fn edge_symbol(&self, a: Vertex, b: Vertex) -> Word {
        let key = (a.min(b), a.max(b));
        if self.tree.contains(&key) {
            return Word::identity();
        }
        let g = *self.generator_of.get(&key).unwrap_or_else(|| panic!("edge {key:?} not in the basepoint component"));
        let w = Word::generator(g);
        if a < b {
            w
        } else {
            w.inverse()
        }
    }

    /// Like [`Self::path_word`], but `None` if some edge is not in the component.
    pub fn try_path_word(&self, path: &[Vertex]) -> Option<Word> {
        let mut w = Word::identity();
        for step in path.windows(2) {
            let (a, b) = (step[0], step[1]);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if self.tree.contains(&key) {
                continue;
            }
            let g = Word::generator(*self.generator_of.get(&key)?);
            w = w.mul(&if a < b { g } else { g.inverse() });
        }
        Some(w)
    }

    /// Word of an edge path given by consecutive vertices.
    pub fn path_word(&self, path: &[Vertex]) -> Word {
        let mut w = Word::identity();
        for step in path.windows(2) {
            if step[0] != step[1] {
                w = w.mul(&self.edge_symbol(step[0], step[1]));
            }
        }
        w
    }

    /// Tree path from the basepoint to `v`.
    pub fn tree_path(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(&p) = self.parent.get(&x) {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    /// Tree path between two component vertices (through the basepoint).
    pub fn tree_path_between(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        let mut up = self.tree_path(a);
        up.reverse();
        let down = self.tree_path(b);
        up.extend_from_slice(&down[1..]);
        up
    }

    /// Based vertex loop representing generator `g`.
    pub fn generator_loop(&self, g: usize) -> Vec<Vertex> {
        let (a, b) = self.generator_edges[g];
        let mut path = self.tree_path(a);
        let mut back = self.tree_path(b);
        back.reverse();
        path.extend(back);
        path
    }

    /// Images of this presentation's generators under inclusion into `target`
    /// (a presentation of a larger snapshot with the same basepoint).
    pub fn inclusion_images(&self, target: &EdgePathPresentation) -> Vec<Word> {
        (0..self.generator_edges.len()).map(|g| target.path_word(&self.generator_loop(g))).collect()
    }
}

/// Homomorphism induced by the inclusion of the snapshot behind `from` into
/// the one behind `to`. Relator images are checked with `oracle` (an oracle
/// for `to`) when given; otherwise the map is marked certified, since each
/// relator maps to a conjugate of a target relator.
pub fn induced_hom(from: &EdgePathPresentation, to: &EdgePathPresentation, oracle: Option<&WordProblem>) -> Result<GroupHom, Pi1Error> {
    let images = from.inclusion_images(to);
    let (src, dst) = (from.presentation.clone(), to.presentation.clone());
    Ok(match oracle {
        Some(o) => GroupHom::with_oracle(src, dst, images, o)?,
        None => GroupHom::unchecked(src, dst, images)?,
    })
}

/// `π₁^{u,v}` of the basepoint component: image of the inclusion-induced map.
/// An empty level `u` gives the trivial image.
pub fn persistent_pi1<T: Scalar>(k: &FilteredComplex<T>, u: &T, v: &T, basepoint: Vertex) -> Result<ImageDescriptor, Pi1Error> {
    if u > v {
        return Err(Pi1Error::LevelOrder { u: u.to_string(), v: v.to_string() });
    }
    let (su, sv) = (k.sublevel(u), k.sublevel(v));
    if su.is_empty() {
        let target = if sv.has_vertex(basepoint) {
            EdgePathPresentation::new(&sv, basepoint)?.presentation.clone()
        } else {
            Arc::new(Presentation::trivial())
        };
        let hom = GroupHom::unchecked(Arc::new(Presentation::trivial()), target, Vec::new())?;
        return Ok(image_descriptor(&hom));
    }
    let pu = EdgePathPresentation::new(&su, basepoint)?;
    let pv = EdgePathPresentation::new(&sv, basepoint)?;
    Ok(image_descriptor(&induced_hom(&pu, &pv, None)?))
}

/// Presentations on a grid with transition maps between consecutive levels.
pub struct Pi1Persistence<T> {
    grid: Vec<T>,
    levels: Vec<EdgePathPresentation>,
    oracles: Vec<WordProblem>,
    transitions: Vec<GroupHom>,
}

impl<T: Scalar> Pi1Persistence<T> {
    /// Builds presentations of the given snapshots (nested, in grid order).
    pub fn from_snapshots(grid: Vec<T>, snapshots: &[Snapshot<'_, T>], basepoint: Vertex, budget: &Budget) -> Result<Self, Pi1Error> {
        let levels = snapshots
            .iter()
            .map(|s| EdgePathPresentation::new(s, basepoint))
            .collect::<Result<Vec<_>, _>>()?;
        let oracles: Vec<WordProblem> = levels.iter().map(|l| WordProblem::new(l.presentation(), *budget)).collect();
        let transitions = (1..levels.len())
            .map(|i| induced_hom(&levels[i - 1], &levels[i], Some(&oracles[i])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pi1Persistence { grid, levels, oracles, transitions })
    }

    /// Persistence over the critical values of `k`, starting at the first
    /// level containing the basepoint.
    pub fn of_complex(k: &FilteredComplex<T>, basepoint: Vertex, budget: &Budget) -> Result<Self, Pi1Error> {
        let grid: Vec<T> = k.critical_values().into_iter().filter(|u| k.sublevel(u).has_vertex(basepoint)).collect();
        let snapshots: Vec<Snapshot<'_, T>> = grid.iter().map(|u| k.sublevel(u)).collect();
        Self::from_snapshots(grid, &snapshots, basepoint, budget)
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn level(&self, i: usize) -> &EdgePathPresentation {
        &self.levels[i]
    }

    pub fn oracle(&self, i: usize) -> &WordProblem {
        &self.oracles[i]
    }

    pub fn transition(&self, i: usize) -> &GroupHom {
        &self.transitions[i]
    }

    /// Direct inclusion map between grid levels `i <= j`.
    pub fn map_between(&self, i: usize, j: usize) -> Result<GroupHom, Pi1Error> {
        induced_hom(&self.levels[i], &self.levels[j], None)
    }

    /// Certifies `map(u→w) = map(v→w) ∘ map(u→v)` on consecutive triples.
    pub fn functoriality_audit(&self) -> AuditReport {
        let mut report = AuditReport::default();
        for i in 0..self.levels.len().saturating_sub(2) {
            let direct = self.map_between(i, i + 2).expect("grid levels are nested");
            let composite = self.transitions[i].then(&self.transitions[i + 1]).expect("consecutive maps compose");
            match direct.agrees_with(&composite, &self.oracles[i + 2]) {
                Decision::Yes => report.verified += 1,
                Decision::Unknown => report.inconclusive += 1,
                Decision::No => report.refuted.push(i),
            }
        }
        report
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub verified: usize,
    pub inconclusive: usize,
    /// Start indices of triples whose squares failed.
    pub refuted: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::AbelianInvariants;

    fn flt(text: &str) -> FilteredComplex<f64> {
        FilteredComplex::parse(text).unwrap()
    }

    const CIRCLE: &str = "0;0\n1;0\n2;0\n0 1;1\n1 2;1\n0 2;1\n";

    #[test]
    fn edge_path_examples() {
        let k = flt(CIRCLE);
        let p = EdgePathPresentation::new(&k.full(), 0).unwrap();
        assert_eq!((p.presentation().generators(), p.presentation().relators().len()), (1, 0));
        let filled = flt(&format!("{CIRCLE}0 1 2;2"));
        let p = EdgePathPresentation::new(&filled.full(), 0).unwrap();
        assert!(p.presentation().abelianization().is_trivial());
        let disk = flt("0;0\n1;0\n2;0\n3;0\n0 1;0\n1 2;0\n0 2;0\n1 3;0\n2 3;0\n0 1 2;0\n1 2 3;0");
        let p = EdgePathPresentation::new(&disk.full(), 0).unwrap();
        assert_eq!(p.presentation().generators(), 2);
        assert!(p.presentation().abelianization().is_trivial());
        assert!(EdgePathPresentation::new(&k.sublevel(&-1.0), 0).is_err());
    }

    #[test]
    fn persistent_examples() {
        let k = flt(&format!("{CIRCLE}0 1 2;3"));
        assert_eq!(persistent_pi1(&k, &1.0, &2.0, 0).unwrap().invariants, AbelianInvariants::free(1));
        assert!(persistent_pi1(&k, &1.0, &3.0, 0).unwrap().invariants.is_trivial());
        assert!(persistent_pi1(&k, &-1.0, &3.0, 0).unwrap().invariants.is_trivial());
        let extra = flt(&format!("{CIRCLE}5;2\n6;2\n5 6;2"));
        let d = persistent_pi1(&extra, &1.0, &2.0, 0).unwrap();
        assert_eq!(d.hom.abelianized_matrix(), crate::intmat::IntMatrix::from_i64_rows(&[vec![1]], 1));
    }

    #[test]
    fn functoriality_on_staged_circle() {
        let k = flt(&format!("{CIRCLE}0 1 2;3\n3;4\n0 3;4\n2 3;4"));
        let p = Pi1Persistence::of_complex(&k, 0, &Budget::default()).unwrap();
        let audit = p.functoriality_audit();
        assert_eq!(audit, AuditReport { verified: 2, inconclusive: 0, refuted: vec![] });
    }
}
