//! Small curated filtrations and covers used by tests, examples and the CLI.

use std::collections::BTreeSet;

use crate::filtration::{CoverFiltration, FilteredComplex, Simplex, Vertex};
use crate::scalar::Scalar;

fn build<T: Scalar>(entries: &[(&[Vertex], i64)]) -> FilteredComplex<T> {
    FilteredComplex::new(entries.iter().map(|(s, v)| (s.to_vec(), T::from_i64(*v))).collect()).expect("corpus complexes are valid")
}

/// Boundary of the triangle on `a, b, c` with vertices at `vertex_value` and
/// edges at `edge_value`.
fn circle(out: &mut Vec<(Simplex, i64)>, [a, b, c]: [Vertex; 3], vertex_value: i64, edge_value: i64) {
    for v in [a, b, c] {
        if !out.iter().any(|(s, _)| s == &vec![v]) {
            out.push((vec![v], vertex_value));
        }
    }
    for e in [[a, b], [b, c], [a, c]] {
        out.push((e.to_vec(), edge_value));
    }
}

fn from_owned<T: Scalar>(entries: Vec<(Simplex, i64)>) -> FilteredComplex<T> {
    FilteredComplex::new(entries.into_iter().map(|(s, v)| (s, T::from_i64(v))).collect()).expect("corpus complexes are valid")
}

fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
    vs.iter().copied().collect()
}

/// Triangle boundary on 0, 1, 2: vertices at 0, edges at 1, filled at 3.
pub fn staged_circle<T: Scalar>() -> FilteredComplex<T> {
    build(&[(&[0], 0), (&[1], 0), (&[2], 0), (&[0, 1], 1), (&[1, 2], 1), (&[0, 2], 1), (&[0, 1, 2], 3)])
}

/// Path `a - b - c` at 0, closed into a loop by the edge `a c` at `birth`.
fn lasso(out: &mut Vec<(Simplex, i64)>, [a, b, c]: [Vertex; 3], birth: i64) {
    for v in [a, b, c] {
        if !out.iter().any(|(s, _)| s == &vec![v]) {
            out.push((vec![v], 0));
        }
    }
    out.push((vec![a, b], 0));
    out.push((vec![b, c], 0));
    out.push((vec![a, c], birth));
}

/// Two triangle-boundary circles glued at vertex 0, each a path at level 0:
/// circle `a` on {0, 1, 2} closes at 1, circle `b` on {0, 3, 4} closes at 2.
pub fn staged_wedge<T: Scalar>() -> FilteredComplex<T> {
    wedge_with_births(1, 2)
}

/// The staged wedge with circle `a` closing at `a_birth` and `b` at `b_birth`.
pub fn wedge_with_births<T: Scalar>(a_birth: i64, b_birth: i64) -> FilteredComplex<T> {
    let mut e = Vec::new();
    lasso(&mut e, [0, 1, 2], a_birth);
    lasso(&mut e, [0, 3, 4], b_birth);
    from_owned(e)
}

/// The staged wedge with circle `a` filled at 3 and circle `b` filled at 4.
pub fn wedge_with_fills<T: Scalar>() -> FilteredComplex<T> {
    let mut e = Vec::new();
    lasso(&mut e, [0, 1, 2], 1);
    lasso(&mut e, [0, 3, 4], 2);
    e.push((vec![0, 1, 2], 3));
    e.push((vec![0, 3, 4], 4));
    from_owned(e)
}

/// Cover of a wedge complex by its two circles, meeting at vertex 0.
pub fn wedge_cover<T: Scalar>(k: FilteredComplex<T>) -> CoverFiltration<T> {
    k.restrict_cover(set(&[0, 1, 2]), set(&[0, 3, 4])).expect("wedge cover is valid")
}

fn band(out: &mut Vec<(Simplex, i64)>, a: [Vertex; 3], b: [Vertex; 3], value: i64) {
    for k in 0..3 {
        let n = (k + 1) % 3;
        out.push((vec![a[k], b[k]], value));
        out.push((vec![a[k], b[n]], value));
        out.push((vec![a[k], a[n], b[n]], value));
        out.push((vec![a[k], b[k], b[n]], value));
    }
}

/// Triangulated cylinder on three rings of three vertices: the middle ring
/// {3, 4, 5} at 0, the upper band to ring {0, 1, 2} at 1, the lower band to
/// ring {6, 7, 8} at 2, and the upper ring capped by a triangle at 3.
pub fn cylinder<T: Scalar>() -> FilteredComplex<T> {
    let mut e = Vec::new();
    circle(&mut e, [3, 4, 5], 0, 0);
    circle(&mut e, [0, 1, 2], 1, 1);
    band(&mut e, [0, 1, 2], [3, 4, 5], 1);
    circle(&mut e, [6, 7, 8], 2, 2);
    band(&mut e, [6, 7, 8], [3, 4, 5], 2);
    e.push((vec![0, 1, 2], 3));
    from_owned(e)
}

/// Annulus cover of [`cylinder`]: the upper and lower bands, meeting in the
/// middle ring.
pub fn cylinder_cover<T: Scalar>() -> CoverFiltration<T> {
    cylinder().restrict_cover(set(&[0, 1, 2, 3, 4, 5]), set(&[3, 4, 5, 6, 7, 8])).expect("cylinder cover is valid")
}

/// Octahedral 2-sphere: poles 0 and 5, equator 1-2-3-4. The upper cap is
/// present at 0, the lower pole with three lower faces at 1, the last face at 2.
pub fn staged_octahedron<T: Scalar>() -> FilteredComplex<T> {
    let ring = [1, 2, 3, 4];
    let mut e: Vec<(Simplex, i64)> = Vec::new();
    e.push((vec![0], 0));
    for &v in &ring {
        e.push((vec![v], 0));
        e.push((vec![0, v], 0));
    }
    e.push((vec![5], 1));
    for i in 0..4 {
        let (a, b) = (ring[i], ring[(i + 1) % 4]);
        e.push((vec![a, b], 0));
        e.push((vec![0, a, b], 0));
        e.push((vec![a, 5], 1));
        e.push((vec![a, b, 5], if i == 3 { 2 } else { 1 }));
    }
    from_owned(e)
}

/// Six-vertex real projective plane, every simplex at 0.
pub fn projective_plane<T: Scalar>() -> FilteredComplex<T> {
    const FACES: [[Vertex; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    let mut simplices: BTreeSet<Simplex> = BTreeSet::new();
    for f in FACES {
        let mut f = f.to_vec();
        f.sort_unstable();
        for s in [vec![f[0]], vec![f[1]], vec![f[2]], vec![f[0], f[1]], vec![f[1], f[2]], vec![f[0], f[2]], f.clone()] {
            simplices.insert(s);
        }
    }
    from_owned(simplices.into_iter().map(|s| (s, 0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Piece;

    #[test]
    fn euler_characteristics() {
        assert_eq!(staged_circle::<f64>().euler_characteristic(), 1);
        assert_eq!(staged_wedge::<f64>().euler_characteristic(), -1);
        assert_eq!(cylinder::<f64>().euler_characteristic(), 1);
        assert_eq!(staged_octahedron::<f64>().euler_characteristic(), 2);
        assert_eq!(projective_plane::<f64>().euler_characteristic(), 1);
        assert_eq!(projective_plane::<f64>().len(), 31);
    }

    #[test]
    fn projective_plane_is_a_closed_surface() {
        let k = projective_plane::<f64>();
        for e in k.simplices().iter().filter(|s| s.len() == 2) {
            let cofaces = k.simplices().iter().filter(|t| t.len() == 3 && e.iter().all(|v| t.contains(v))).count();
            assert_eq!(cofaces, 2, "edge {e:?}");
        }
    }

    #[test]
    fn covers_are_connected_at_every_level() {
        for cov in [wedge_cover(staged_wedge::<f64>()), wedge_cover(wedge_with_fills()), cylinder_cover()] {
            let grid = cov.complex().critical_values();
            assert!(cov.check_connectivity(&grid).iter().all(|r| r.all_connected()));
        }
        let cov = cylinder_cover::<f64>();
        assert_eq!(cov.vertices(Piece::C).len(), 3);
    }
}
