//! Persistence diagrams and the bottleneck distance.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{sort_scalars, Extended, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bar must satisfy birth < death, got ({birth}, {death})")]
    EmptyBar { birth: String, death: String },
}

/// A half-open interval `[birth, death)`; `death` may be infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bar<T> {
    pub birth: T,
    pub death: Extended<T>,
}

impl<T: Scalar> Bar<T> {
    pub fn finite(birth: T, death: T) -> Self {
        Bar { birth, death: Extended::Finite(death) }
    }

    pub fn infinite(birth: T) -> Self {
        Bar { birth, death: Extended::Infinite }
    }

    /// Half the length; infinite for essential bars.
    pub fn half_persistence(&self) -> Extended<T> {
        match &self.death {
            Extended::Finite(d) => Extended::Finite((d.clone() - self.birth.clone()).half()),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// `l∞` distance between two bars as points of the plane.
    pub fn distance(&self, other: &Bar<T>) -> Extended<T> {
        let db = self.birth.abs_diff(&other.birth);
        match (&self.death, &other.death) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(db.max_of(&a.abs_diff(b))),
            (Extended::Infinite, Extended::Infinite) => Extended::Finite(db),
            _ => Extended::Infinite,
        }
    }

    /// Whether the bar contains `t`.
    pub fn contains(&self, t: &T) -> bool {
        self.birth.total_cmp(t) != Ordering::Greater
            && match &self.death {
                Extended::Finite(d) => t.total_cmp(d) == Ordering::Less,
                Extended::Infinite => true,
            }
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        self.birth.total_cmp(&other.birth).then_with(|| self.death.total_cmp(&other.death))
    }
}

impl<T: Scalar> Serialize for Bar<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.birth.to_string(), self.death.to_string()).serialize(s)
    }
}

/// Multiset of bars, kept sorted by birth then death.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent, bound = "")]
pub struct PersistenceDiagram<T: Scalar> {
    bars: Vec<Bar<T>>,
}

impl<T: Scalar> Default for PersistenceDiagram<T> {
    fn default() -> Self {
        PersistenceDiagram { bars: Vec::new() }
    }
}

impl<T: Scalar> PersistenceDiagram<T> {
    pub fn new(mut bars: Vec<Bar<T>>) -> Result<Self, DiagramError> {
        for b in &bars {
            if b.death.total_cmp(&Extended::Finite(b.birth.clone())) != Ordering::Greater {
                return Err(DiagramError::EmptyBar { birth: b.birth.to_string(), death: b.death.to_string() });
            }
        }
        bars.sort_by(Bar::cmp_key);
        Ok(PersistenceDiagram { bars })
    }

    pub fn bars(&self) -> &[Bar<T>] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars alive at `t`.
    pub fn rank_at(&self, t: &T) -> usize {
        self.bars.iter().filter(|b| b.contains(t)).count()
    }

    /// Removes one essential bar with the earliest birth (reduced `H_0`).
    pub fn reduced(&self) -> Self {
        let mut bars = self.bars.clone();
        if let Some(i) = bars.iter().position(|b| !b.death.is_finite()) {
            bars.remove(i);
        }
        PersistenceDiagram { bars }
    }

    /// Sorted distinct endpoints.
    pub fn endpoints(&self) -> Vec<T> {
        let mut v: Vec<T> = self.bars.iter().flat_map(|b| [Some(b.birth.clone()), b.death.finite().cloned()]).flatten().collect();
        sort_scalars(&mut v);
        v
    }

    /// One `birth death` pair per line; `inf` for essential bars.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut bars = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| DiagramError::Parse { line: n + 1, message };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [b, d] = parts[..] else { return Err(err("expected `birth death`".into())) };
            let birth = T::parse_decimal(b).ok_or_else(|| err(format!("bad birth `{b}`")))?;
            let death = if d.eq_ignore_ascii_case("inf") {
                Extended::Infinite
            } else {
                Extended::Finite(T::parse_decimal(d).ok_or_else(|| err(format!("bad death `{d}`")))?)
            };
            bars.push(Bar { birth, death });
        }
        PersistenceDiagram::new(bars)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.bars {
            let _ = writeln!(out, "{} {}", b.birth, b.death);
        }
        out
    }
}

/// Exact bottleneck distance. Candidate thresholds are all pairwise bar
/// distances and half-persistences; the least feasible one is returned.
/// Essential bars only match essential bars, so differing counts give `∞`.
pub fn bottleneck_distance<T: Scalar>(a: &PersistenceDiagram<T>, b: &PersistenceDiagram<T>) -> Extended<T> {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    if size == 0 {
        return Extended::Finite(T::zero());
    }
    // Left: a's bars then diagonal copies of b's bars. Right: b's bars then
    // diagonal copies of a's bars.
    let cost = |i: usize, j: usize| -> Extended<T> {
        match (i < n, j < m) {
            (true, true) => a.bars[i].distance(&b.bars[j]),
            (true, false) => {
                if j - m == i {
                    a.bars[i].half_persistence()
                } else {
                    Extended::Infinite
                }
            }
            (false, true) => {
                if i - n == j {
                    b.bars[j].half_persistence()
                } else {
                    Extended::Infinite
                }
            }
            (false, false) => Extended::Finite(T::zero()),
        }
    };
    let costs: Vec<Vec<Extended<T>>> = (0..size).map(|i| (0..size).map(|j| cost(i, j)).collect()).collect();
    let mut candidates: Vec<T> = costs.iter().flatten().filter_map(|c| c.finite().cloned()).collect();
    sort_scalars(&mut candidates);
    let feasible = |t: &T| -> bool {
        let adj: Vec<Vec<usize>> = costs
            .iter()
            .map(|row| {
                (0..size)
                    .filter(|&j| row[j].finite().is_some_and(|c| c.total_cmp(t) != Ordering::Greater))
                    .collect()
            })
            .collect();
        perfect_matching(&adj, size)
    };
    let (mut lo, mut hi) = (0usize, candidates.len());
    // Find the first feasible candidate; feasibility is monotone in t.
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    match candidates.get(lo) {
        Some(t) => Extended::Finite(t.clone()),
        None => Extended::Infinite,
    }
}

/// Kuhn's augmenting-path algorithm; true when every left vertex is matched.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if match_right[v].is_none_or(|w| augment(w, adj, seen, match_right)) {
                    match_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    (0..adj.len()).all(|u| {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut match_right)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn d(text: &str) -> PersistenceDiagram<Rational64> {
        PersistenceDiagram::parse(text).unwrap()
    }

    fn r(n: i64) -> Extended<Rational64> {
        Extended::Finite(Rational64::from_integer(n))
    }

    #[test]
    fn bottleneck_examples() {
        let x = d("0 2\n1 inf");
        assert_eq!(bottleneck_distance(&x, &x), r(0));
        assert_eq!(bottleneck_distance(&d("0 2"), &d("")), r(1));
        assert_eq!(bottleneck_distance(&d("0 4"), &d("1 5")), r(1));
        assert_eq!(bottleneck_distance(&d("0 inf"), &d("")), Extended::Infinite);
        assert_eq!(bottleneck_distance(&d("0 inf"), &d("3 inf")), r(3));
        assert_eq!(bottleneck_distance(&d(""), &d("")), r(0));
    }

    #[test]
    fn parsing_and_reduction() {
        let x = d("1 inf\n0 inf\n0 1");
        assert_eq!(x.to_text(), "0 1\n0 inf\n1 inf\n");
        assert_eq!(x.reduced().to_text(), "0 1\n1 inf\n");
        assert!(PersistenceDiagram::<Rational64>::parse("2 1").is_err());
        assert!(PersistenceDiagram::<Rational64>::parse("2").is_err());
        assert_eq!(x.rank_at(&Rational64::from_integer(0)), 2);
    }
}
