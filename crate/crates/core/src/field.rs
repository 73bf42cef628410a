//! Coefficient fields for persistence modules and mod-p homology.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::intmat::Matrix;

/// Exact field usable as module coefficients.
pub trait Field: Num + Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn from_int(value: &BigInt) -> Self;
}

impl Field for BigRational {
    fn from_int(value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }
}

/// Integers modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

pub type Gf2 = Fp<2>;
/// A large prime field; behaves like the rationals on torsion-free data.
pub type GfLarge = Fp<2_147_483_647>;

impl<const P: u64> Fp<P> {
    pub fn new(value: i64) -> Self {
        Fp(value.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn inverse(self) -> Self {
        assert!(self.0 != 0, "division by zero in Fp");
        // Fermat
        let mut result = 1u64;
        let mut base = self.0;
        let mut exp = P - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = mulmod::<P>(result, base);
            }
            base = mulmod::<P>(base, base);
            exp >>= 1;
        }
        Fp(result)
    }
}

fn mulmod<const P: u64>(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(mulmod::<P>(self.0, o.0))
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inverse()
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_int(value: &BigInt) -> Self {
        let r = value.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced below P"))
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in 0..cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let inv = F::one() / m[(r, c)].clone();
        for j in 0..cols {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..cols {
                    let sub = f.clone() * m[(r, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut copy = m.clone();
    rref(&mut copy).len()
}

/// Rank of the span of the given column vectors (all of length `dim`).
pub fn span_rank<F: Field>(columns: &[Vec<F>], dim: usize) -> usize {
    if columns.is_empty() || dim == 0 {
        return 0;
    }
    rank(&Matrix::from_columns(columns, dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        type F7 = Fp<7>;
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(F7::new(1) / F7::new(3), F7::new(5));
        assert_eq!(F7::new(-1), F7::new(6));
        assert_eq!(Gf2::new(1) + Gf2::new(1), Gf2::zero());
    }

    #[test]
    fn rank_over_gf2_and_rationals() {
        let m = Matrix::from_rows(
            vec![vec![Gf2::new(1), Gf2::new(1)], vec![Gf2::new(1), Gf2::new(1)]],
            2,
        );
        assert_eq!(rank(&m), 1);
        let q = Matrix::from_rows(
            vec![
                vec![BigRational::from_int(&BigInt::from(2)), BigRational::from_int(&BigInt::from(1))],
                vec![BigRational::from_int(&BigInt::from(4)), BigRational::from_int(&BigInt::from(3))],
            ],
            2,
        );
        assert_eq!(rank(&q), 2);
    }
}
