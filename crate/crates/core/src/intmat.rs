//! Exact integer matrices: Smith normal form, column echelon form, kernels
//! and invariants of finitely generated abelian groups.
//!
//! Every routine first runs in checked `i64` arithmetic and transparently
//! restarts in `BigInt` on overflow, so results are always exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type IntMatrix = Matrix<BigInt>;

impl<R: Clone + Zero> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<R>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        Matrix { rows: nrows, cols, data }
    }

    /// Builds a matrix from columns; `rows` is needed when there are no columns.
    pub fn from_columns(columns: &[Vec<R>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<R>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<S: Clone + Zero>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<R: Clone + Zero + One> Matrix<R> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }
}

impl<R> Matrix<R>
where
    R: Clone + Zero + std::ops::Mul<Output = R>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    let cur = std::mem::replace(&mut m[(i, j)], R::zero());
                    m[(i, j)] = cur + prod;
                }
            }
        }
        m
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            cols,
        )
    }
}

/// Integer arithmetic that can report overflow.
pub(crate) trait ExactInt: Clone + fmt::Debug + PartialEq + Zero + One {
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn neg_c(&self) -> Option<Self>;
    /// Truncating quotient.
    fn quot_c(&self, o: &Self) -> Option<Self>;
    fn rem_is_zero(&self, o: &Self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, o: &Self) -> bool;
    fn to_big(&self) -> BigInt;
    fn from_big(v: &BigInt) -> Option<Self>;
}

impl ExactInt for i64 {
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot_c(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn rem_is_zero(&self, o: &Self) -> bool {
        self.checked_rem(*o).is_none_or(|r| r == 0)
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        // keep headroom so that i64::MIN never appears
        v.to_i64().filter(|x| *x > i64::MIN)
    }
}

impl ExactInt for BigInt {
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot_c(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn rem_is_zero(&self, o: &Self) -> bool {
        (self % o).is_zero()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

#[derive(Debug)]
struct Overflow;

type Checked<T> = Result<T, Overflow>;

fn ck<T>(v: Option<T>) -> Checked<T> {
    v.ok_or(Overflow)
}

fn convert<R: ExactInt>(m: &IntMatrix) -> Option<Matrix<R>> {
    let data = m.data.iter().map(R::from_big).collect::<Option<Vec<_>>>()?;
    Some(Matrix { rows: m.rows, cols: m.cols, data })
}

fn to_big_matrix<R: ExactInt>(m: &Matrix<R>) -> IntMatrix {
    Matrix { rows: m.rows, cols: m.cols, data: m.data.iter().map(ExactInt::to_big).collect() }
}

/// row_target += factor * row_source
fn row_axpy<R: ExactInt>(m: &mut Matrix<R>, target: usize, source: usize, factor: &R) -> Checked<()> {
    for j in 0..m.cols {
        let s = &m[(source, j)];
        if s.is_zero() {
            continue;
        }
        let v = m[(target, j)].add_c(&ck(s.mul_c(factor))?);
        m[(target, j)] = ck(v)?;
    }
    Ok(())
}

/// col_target += factor * col_source
fn col_axpy<R: ExactInt>(m: &mut Matrix<R>, target: usize, source: usize, factor: &R) -> Checked<()> {
    for i in 0..m.rows {
        let s = &m[(i, source)];
        if s.is_zero() {
            continue;
        }
        let v = m[(i, target)].add_c(&ck(s.mul_c(factor))?);
        m[(i, target)] = ck(v)?;
    }
    Ok(())
}

fn negate_row<R: ExactInt>(m: &mut Matrix<R>, i: usize) -> Checked<()> {
    for j in 0..m.cols {
        m[(i, j)] = ck(m[(i, j)].neg_c())?;
    }
    Ok(())
}

/// Result of a Smith normal form computation: `left * input * right = diagonal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them, non-negative, each dividing the next
    /// (zeros last).
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Rank of the input matrix.
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Re-multiplies the transforms and checks unimodularity-compatible shape.
    pub fn verify(&self, input: &IntMatrix) -> bool {
        let d = self.left.mul(input).mul(&self.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j { self.invariant_factors[i].clone() } else { BigInt::zero() };
                if d[(i, j)] != expected {
                    return false;
                }
            }
        }
        let chain = self
            .invariant_factors
            .windows(2)
            .all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        chain && self.invariant_factors.iter().all(|d| !d.is_negative())
    }
}

fn smith_generic<R: ExactInt>(input: &Matrix<R>, track: bool) -> Checked<(Vec<R>, Option<Matrix<R>>, Option<Matrix<R>>)> {
    let mut a = input.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut left = track.then(|| Matrix::<R>::identity(rows));
    let mut right = track.then(|| Matrix::<R>::identity(cols));
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &a[(i, j)];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs_lt(&a[(bi, bj)])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(r) = right.as_mut() {
            r.swap_cols(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = ck(a[(i, t)].quot_c(&a[(t, t)]))?;
                let nq = ck(q.neg_c())?;
                row_axpy(&mut a, i, t, &nq)?;
                if let Some(l) = left.as_mut() {
                    row_axpy(l, i, t, &nq)?;
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = ck(a[(t, j)].quot_c(&a[(t, t)]))?;
                let nq = ck(q.neg_c())?;
                col_axpy(&mut a, j, t, &nq)?;
                if let Some(r) = right.as_mut() {
                    col_axpy(r, j, t, &nq)?;
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder smaller than the pivot exists in row/column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs_lt(&a[best]) {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs_lt(&a[best]) {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    if let Some(l) = left.as_mut() {
                        l.swap_rows(t, best.0);
                    }
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    if let Some(r) = right.as_mut() {
                        r.swap_cols(t, best.1);
                    }
                }
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            let mut offender = None;
            'search: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[(i, j)].rem_is_zero(&a[(t, t)]) {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_axpy(&mut a, t, i, &R::one())?;
                    if let Some(l) = left.as_mut() {
                        row_axpy(l, t, i, &R::one())?;
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_neg() {
            negate_row(&mut a, t)?;
            if let Some(l) = left.as_mut() {
                negate_row(l, t)?;
            }
        }
        t += 1;
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok((diag, left, right))
}

fn smith_dispatch(m: &IntMatrix, track: bool) -> (Vec<BigInt>, Option<IntMatrix>, Option<IntMatrix>) {
    if let Some(small) = convert::<i64>(m) {
        if let Ok((d, l, r)) = smith_generic(&small, track) {
            return (
                d.iter().map(ExactInt::to_big).collect(),
                l.as_ref().map(to_big_matrix),
                r.as_ref().map(to_big_matrix),
            );
        }
    }
    let (d, l, r) = smith_generic(m, track).expect("bigint arithmetic cannot overflow");
    (d, l, r)
}

/// Smith normal form with recorded unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (invariant_factors, left, right) = smith_dispatch(m, true);
    SmithForm {
        invariant_factors,
        left: left.expect("tracked"),
        right: right.expect("tracked"),
    }
}

/// Invariant factors only (no transforms).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_dispatch(m, false).0
}

/// Column echelon form `input * transform = echelon`.
///
/// The first `rank` columns of `echelon` are linearly independent with pivot rows
/// strictly increasing and zeros above each pivot; the remaining columns are
/// zero, so the matching columns of `transform` span the integer kernel.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub echelon: IntMatrix,
    pub transform: IntMatrix,
    pub pivots: Vec<(usize, usize)>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the integer kernel of the input, as columns.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.transform.cols()).map(|j| self.transform.column(j)).collect()
    }

    /// Basis of the lattice spanned by the input columns.
    pub fn lattice_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|j| self.echelon.column(j)).collect()
    }

    /// Coordinates of `y` in [`lattice_basis`](Self::lattice_basis), if `y` lies in the lattice.
    pub fn coordinates(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = y.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for &(prow, pcol) in &self.pivots {
            let p = &self.echelon[(prow, pcol)];
            let (q, r) = rest[prow].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, v) in rest.iter_mut().enumerate() {
                    let h = &self.echelon[(i, pcol)];
                    if !h.is_zero() {
                        *v -= &q * h;
                    }
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }
}

fn echelon_generic<R: ExactInt>(input: &Matrix<R>, track: bool) -> Checked<(Matrix<R>, Option<Matrix<R>>, Vec<(usize, usize)>)> {
    let mut a = input.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut v = track.then(|| Matrix::<R>::identity(cols));
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in k..cols {
                let x = &a[(i, j)];
                if !x.is_zero() && best.is_none_or(|b| x.abs_lt(&a[(i, b)])) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(k, b);
            if let Some(v) = v.as_mut() {
                v.swap_cols(k, b);
            }
            let mut done = true;
            for j in k + 1..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let q = ck(a[(i, j)].quot_c(&a[(i, k)]))?;
                let nq = ck(q.neg_c())?;
                col_axpy(&mut a, j, k, &nq)?;
                if let Some(v) = v.as_mut() {
                    col_axpy(v, j, k, &nq)?;
                }
                if !a[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push((i, k));
                k += 1;
                break;
            }
        }
    }
    Ok((a, v, pivots))
}

pub fn column_echelon(m: &IntMatrix, track: bool) -> ColumnEchelon {
    let cols = m.cols();
    if let Some(small) = convert::<i64>(m) {
        if let Ok((a, v, pivots)) = echelon_generic(&small, track) {
            return ColumnEchelon {
                echelon: to_big_matrix(&a),
                transform: v.as_ref().map(to_big_matrix).unwrap_or_else(|| Matrix::zeros(cols, 0)),
                pivots,
            };
        }
    }
    let (a, v, pivots) = echelon_generic(m, track).expect("bigint arithmetic cannot overflow");
    ColumnEchelon { echelon: a, transform: v.unwrap_or_else(|| Matrix::zeros(cols, 0)), pivots }
}

/// Integer kernel basis (columns) of `m`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    column_echelon(m, true).kernel_basis()
}

/// Invariants of a finitely generated abelian group: free rank plus torsion
/// coefficients `d1 | d2 | ...`, each greater than one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { rank, torsion: Vec::new() }
    }

    pub fn with_torsion(rank: usize, torsion: &[i64]) -> Self {
        AbelianInvariants { rank, torsion: torsion.iter().map(|&d| BigInt::from(d)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Reads off the invariants of `Z^n / (column span)` from diagonal entries.
    fn from_factors(ambient: usize, factors: &[BigInt]) -> Self {
        let nonzero: Vec<&BigInt> = factors.iter().filter(|d| !d.is_zero()).collect();
        AbelianInvariants {
            rank: ambient - nonzero.len(),
            torsion: nonzero.into_iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Invariants of `Z^n / ⟨columns of relations⟩`, where `n = relations.rows()`.
    pub fn of_cokernel(relations: &IntMatrix) -> Self {
        Self::from_factors(relations.rows(), &invariant_factors(relations))
    }

    /// Checks the divisibility chain.
    pub fn is_well_formed(&self) -> bool {
        self.torsion.iter().all(|d| *d > BigInt::one())
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariants of the subgroup generated by the columns of `generators` inside
/// `Z^n / ⟨columns of relations⟩`, i.e. of `(⟨S⟩ + ⟨R⟩) / ⟨R⟩`.
pub fn subgroup_invariants(generators: &IntMatrix, relations: &IntMatrix) -> AbelianInvariants {
    assert_eq!(generators.rows(), relations.rows(), "ambient dimension mismatch");
    let joint = generators.hstack(relations);
    let ech = column_echelon(&joint, false);
    let d = ech.rank();
    let coords: Vec<Vec<BigInt>> = relations
        .columns()
        .iter()
        .map(|c| ech.coordinates(c).expect("relation lies in the joint lattice"))
        .collect();
    let cmat = Matrix::from_columns(&coords, d);
    AbelianInvariants::from_factors(d, &invariant_factors(&cmat))
}
