//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use pertopo::diagram::{Bar, PersistenceDiagram};
use pertopo::field::Gf2;
use pertopo::filtration::{rips_from_distances, CoverFiltration, FilteredComplex};
use pertopo::interleaving::{bar_family, check_interleaving, module_from_diagram, DiagramKind, InterleavingWitness, ShiftFamily};
use pertopo::intmat::IntMatrix;
use pertopo::{Extended, Scalar, Verdict};
use proptest::prelude::*;

pub type R = Rational64;

pub fn r(n: i64) -> R {
    R::from_integer(n)
}

/// Rips filtration on `n` points from the upper triangle of a distance matrix.
pub fn rips(n: usize, upper: &[i64], max_dim: usize) -> FilteredComplex<R> {
    let mut dist = vec![vec![r(0); n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let d = r(*it.next().expect("enough distances"));
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    rips_from_distances(&dist, max_dim, &r(i64::MAX / 4))
}

/// `(n, distances)` for a Rips complex on 3 to `max_n` points with integer
/// distances in `1..=6`.
pub fn rips_input(max_n: usize) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (3..=max_n).prop_flat_map(|n| (Just(n), proptest::collection::vec(1i64..=6, n * (n - 1) / 2)))
}

/// Cover of a Rips complex by labelling each vertex A-only, B-only or shared;
/// simplices touching both an A-only and a B-only vertex are dropped.
pub fn random_cover(n: usize, upper: &[i64], labels: &[u8], max_dim: usize) -> Option<CoverFiltration<R>> {
    let k = rips(n, upper, max_dim);
    let a: BTreeSet<usize> = (0..n).filter(|&v| labels[v] != 1).collect();
    let b: BTreeSet<usize> = (0..n).filter(|&v| labels[v] != 0).collect();
    let entries: Vec<(Vec<usize>, R)> = k
        .simplices()
        .iter()
        .zip(k.values())
        .filter(|(s, _)| s.iter().all(|v| a.contains(v)) || s.iter().all(|v| b.contains(v)))
        .map(|(s, v)| (s.clone(), *v))
        .collect();
    let k = FilteredComplex::new(entries).ok()?;
    k.restrict_cover(a, b).ok()
}

pub fn critical_pairs<T: Scalar>(grid: &[T]) -> Vec<(T, T)> {
    let mut out = Vec::new();
    for (i, u) in grid.iter().enumerate() {
        for v in &grid[i..] {
            out.push((u.clone(), v.clone()));
        }
    }
    out
}

fn ext_max(a: Extended<R>, b: Extended<R>) -> Extended<R> {
    if a.total_cmp(&b) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Bottleneck distance by enumerating every partial matching.
pub fn brute_bottleneck(a: &[Bar<R>], b: &[Bar<R>]) -> Extended<R> {
    fn go(i: usize, a: &[Bar<R>], b: &[Bar<R>], used: &mut Vec<bool>, cost: Extended<R>, best: &mut Extended<R>) {
        if cost.total_cmp(best) != Ordering::Less {
            return;
        }
        if i == a.len() {
            let mut c = cost;
            for (j, bar) in b.iter().enumerate() {
                if !used[j] {
                    c = ext_max(c, bar.half_persistence());
                }
            }
            if c.total_cmp(best) == Ordering::Less {
                *best = c;
            }
            return;
        }
        go(i + 1, a, b, used, ext_max(cost.clone(), a[i].half_persistence()), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, ext_max(cost.clone(), a[i].distance(&b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = Extended::Infinite;
    go(0, a, b, &mut vec![false; b.len()], Extended::Finite(r(0)), &mut best);
    best
}

/// Diagram with up to `max_bars` bars, endpoints in `0..=8` halves, some essential.
pub fn diagram_strategy(max_bars: usize) -> impl Strategy<Value = PersistenceDiagram<R>> {
    proptest::collection::vec((0i64..=16, 1i64..=8, prop::bool::weighted(0.15)), 0..=max_bars).prop_map(|raw| {
        let bars = raw
            .into_iter()
            .map(|(b, len, inf)| {
                let birth = R::new(b, 2);
                if inf {
                    Bar::infinite(birth)
                } else {
                    Bar::finite(birth, birth + R::new(len, 2))
                }
            })
            .collect();
        PersistenceDiagram::new(bars).expect("positive lengths")
    })
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => {
            let mut total = BigInt::zero();
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k` = gcd of all `k × k` minors, for `k = 1..=min(rows, cols)`.
pub fn minor_gcds(m: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows(), m.cols());
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| m.row(i)[j].clone()).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            g
        })
        .collect()
}

/// Least `δ` among the candidates at which the interval modules of `a` and
/// `b` admit a δ-interleaving, found by trying every GF(2) coefficient
/// matrix between the bars. Feasibility is monotone in `δ`, so the search
/// bisects the sorted candidates.
pub fn brute_interleaving_distance(a: &PersistenceDiagram<R>, b: &PersistenceDiagram<R>) -> Extended<R> {
    let mut ends: Vec<R> = Vec::new();
    for bar in a.bars().iter().chain(b.bars()) {
        ends.push(bar.birth);
        if let Extended::Finite(d) = bar.death {
            ends.push(d);
        }
    }
    let mut candidates: BTreeSet<R> = BTreeSet::new();
    candidates.insert(r(0));
    for x in &ends {
        for y in &ends {
            let d = num_traits::Signed::abs(&(x - y));
            candidates.insert(d);
            candidates.insert(d / r(2));
        }
    }
    let candidates: Vec<R> = candidates.into_iter().collect();
    let feasible = |delta: R| -> bool {
        let (ma, mb) = (module_from_diagram::<R, Gf2>(a), module_from_diagram::<R, Gf2>(b));
        let cells = a.len() * b.len();
        let coeff = |mask: u32, rows: usize| move |k: usize, l: usize| if mask >> (k * rows + l) & 1 == 1 { Gf2::one() } else { Gf2::zero() };
        // Families whose own squares commute; the triangles couple the two directions.
        let fwds: Vec<_> = (0..1u32 << cells)
            .filter_map(|f| bar_family((a, &ma), (b, &mb), delta, coeff(f, b.len())).ok())
            .filter(|fwd| {
                let w = InterleavingWitness::new(fwd.clone(), ShiftFamily::zero(&mb, &ma, delta)).expect("same shift");
                !check_interleaving(&ma, &mb, &w).failures.iter().any(|f| f.diagram.kind == DiagramKind::ForwardSquare)
            })
            .collect();
        let bwds: Vec<_> = (0..1u32 << cells)
            .filter_map(|g| bar_family((b, &mb), (a, &ma), delta, coeff(g, a.len())).ok())
            .filter(|bwd| {
                let w = InterleavingWitness::new(ShiftFamily::zero(&ma, &mb, delta), bwd.clone()).expect("same shift");
                !check_interleaving(&ma, &mb, &w).failures.iter().any(|f| f.diagram.kind == DiagramKind::BackwardSquare)
            })
            .collect();
        fwds.iter().any(|fwd| {
            bwds.iter().any(|bwd| {
                let w = InterleavingWitness::new(fwd.clone(), bwd.clone()).expect("same shift");
                check_interleaving(&ma, &mb, &w).verdict == Verdict::Verified
            })
        })
    };
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates.get(lo).map_or(Extended::Infinite, |d| Extended::Finite(*d))
}
