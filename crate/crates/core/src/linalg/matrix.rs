use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::charpoly::{char_poly_with, CharPolyOptions};
use super::modular::{self, Modulus};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn from_fn<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j).into())
            .collect();
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Panics on ragged rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn mat_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (d, b) in dst.iter_mut().zip(other.row(k)) {
                    if !b.is_zero() {
                        *d += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `m^e` by repeated squaring; `m^0` is the identity.
    pub fn mat_pow(&self, mut e: u64) -> Result<IntMatrix> {
        let n = self.require_square()?;
        let mut result = IntMatrix::identity(n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mat_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.entries.clone();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(piv) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let lead = a[i * n + k].clone();
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &lead * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let det = a[n * n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Fraction-free Gauss-Jordan reduction. Returns the pivot columns and the
    /// common pivot value `d`; rows `0..rank` then read `d` at their own pivot
    /// column and `0` at every other pivot column.
    fn fraction_free_reduce(&self) -> (Vec<BigInt>, Vec<usize>, BigInt) {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        for c in 0..cols {
            let r = pivots.len();
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    a.swap(r * cols + j, piv * cols + j);
                }
            }
            let pivot = a[r * cols + c].clone();
            for i in (0..rows).filter(|&i| i != r) {
                let lead = a[i * cols + c].clone();
                for j in 0..cols {
                    let v = &pivot * &a[i * cols + j] - &lead * &a[r * cols + j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "fraction-free step not exact");
                    a[i * cols + j] = q;
                }
            }
            pivots.push(c);
            prev = pivot;
        }
        (a, pivots, prev)
    }

    /// Rank over ℚ by exact fraction-free elimination.
    pub fn rank_exact(&self) -> usize {
        self.fraction_free_reduce().1.len()
    }

    /// Rank over ℚ. A rank computed modulo a prime never exceeds the rational
    /// rank, so a full modular rank is accepted as is; anything lower is
    /// recomputed exactly.
    pub fn rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        let m = Modulus::new(modular::nth_prime(0));
        if modular::rank_mod(self.reduce_mod(m), self.rows, self.cols, m) == full {
            return full;
        }
        self.rank_exact()
    }

    /// Integer basis of the right kernel, one primitive vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let (a, pivots, d) = self.fraction_free_reduce();
        let cols = self.cols;
        let mut basis = Vec::new();
        let mut next_pivot = 0;
        for f in 0..cols {
            if pivots.get(next_pivot) == Some(&f) {
                next_pivot += 1;
                continue;
            }
            let mut v = vec![BigInt::zero(); cols];
            v[f] = d.clone();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r * cols + f].clone();
            }
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                v.iter_mut().for_each(|x| *x /= &g);
            }
            if v[f].is_negative() {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            basis.push(v);
        }
        basis
    }

    pub(crate) fn reduce_mod(&self, m: Modulus) -> Vec<u64> {
        let p = BigInt::from(m.value());
        self.entries
            .iter()
            .map(|x| match x.to_i64() {
                Some(s) => m.reduce_i64(s),
                None => x.mod_floor(&p).to_u64().unwrap(),
            })
            .collect()
    }

    /// `det(xI - m)`, exact, via the modular method with default options.
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        Ok(char_poly_with(self, &CharPolyOptions::default())?.0)
    }

    /// JSON array of row arrays of integer literals.
    pub fn to_json(&self) -> String {
        let mut s = String::from("[");
        for i in 0..self.rows {
            if i > 0 {
                s.push(',');
            }
            write!(s, "[{}]", self.row(i).iter().join(",")).unwrap();
        }
        s.push(']');
        s
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            m(&[vec![1]]).char_poly().unwrap(),
            IntPolynomial::from_i64(&[-1, 1])
        );
        assert_eq!(
            m(&[vec![1, 0], vec![1, 1]]).char_poly().unwrap(),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            IntMatrix::zeros(3, 3).char_poly().unwrap(),
            IntPolynomial::monomial(3)
        );
        assert_eq!(IntMatrix::zeros(0, 0).char_poly().unwrap(), IntPolynomial::one());
        assert!(matches!(
            IntMatrix::zeros(2, 3).char_poly(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn power_examples() {
        let a = m(&[vec![1, 0], vec![1, 1]]);
        assert_eq!(a.mat_pow(2).unwrap(), m(&[vec![1, 0], vec![2, 1]]));
        assert_eq!(a.mat_pow(0).unwrap(), IntMatrix::identity(2));
        assert_eq!(m(&[vec![2]]).mat_pow(10).unwrap(), m(&[vec![1024]]));
        assert!(IntMatrix::zeros(1, 2).mat_pow(3).is_err());
        assert!(a.mat_mul(&IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[vec![1, 0], vec![1, 1]]).rank(), 2);
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank_exact(), 1);
        assert_eq!(IntMatrix::zeros(2, 5).rank(), 0);
        assert_eq!(IntMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(
            m(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            m(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).determinant().unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            m(&[vec![0, 0, 1], vec![0, 2, 0], vec![3, 0, 0]]).determinant().unwrap(),
            BigInt::from(-6)
        );
        assert_eq!(
            m(&[vec![1, 2], vec![2, 4]]).determinant().unwrap(),
            BigInt::zero()
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn kernel() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 7]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(
            k[0],
            vec![BigInt::from(-2), BigInt::from(1), BigInt::from(0)]
        );
        assert_eq!(IntMatrix::zeros(2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn json() {
        assert_eq!(m(&[vec![1, 0], vec![-1, 1]]).to_json(), "[[1,0],[-1,1]]");
    }
}
