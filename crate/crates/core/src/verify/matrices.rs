//! The descent/recoil matrix `M_n` and the basis matrix of `∂` in degree `n`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::linalg::IntMatrix;
use crate::permutation::{factorial, SymmetricGroup};

/// `M_n` kept implicitly: entry `(σ, τ)` is `1` iff `Rec(τ) ⊆ Des(σ)`, rows and
/// columns in lexicographic order of `S_n`.
#[derive(Clone)]
pub struct DescentMatrix {
    group: Arc<SymmetricGroup>,
}

impl DescentMatrix {
    pub fn new(n: usize) -> Self {
        DescentMatrix {
            group: SymmetricGroup::cached(n),
        }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn dim(&self) -> usize {
        self.group.len()
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.group.recoil_masks()[col] & !self.group.descent_masks()[row] == 0
    }

    pub fn row_bits(&self, row: usize) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim()).map(move |c| self.entry(row, c))
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.dim(), self.dim(), |i, j| i64::from(self.entry(i, j)))
    }

    /// Column sums of `v` grouped by the recoil mask of the column.
    fn bucket_by_recoils<T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T>>(
        &self,
        v: &[T],
    ) -> Vec<T> {
        let width = self.degree().saturating_sub(1);
        let mut buckets = vec![T::zero(); 1 << width];
        for (x, &r) in v.iter().zip(self.group.recoil_masks()) {
            buckets[r as usize] += x;
        }
        buckets
    }

    /// `M v`. Row `σ` only depends on `Des(σ)`, so the product sums the
    /// recoil buckets over the subsets of each descent mask.
    pub fn mul_vec_biguint(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.dim());
        let buckets = self.bucket_by_recoils(v);
        let sums = subset_sums(&buckets);
        self.group
            .descent_masks()
            .iter()
            .map(|&d| sums[d as usize].clone())
            .collect()
    }

    pub fn mul_vec_f64(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let width = self.degree().saturating_sub(1);
        let mut buckets = vec![0.0; 1 << width];
        for (x, &r) in v.iter().zip(self.group.recoil_masks()) {
            buckets[r as usize] += x;
        }
        let sums = subset_sums(&buckets);
        self.group
            .descent_masks()
            .iter()
            .map(|&d| sums[d as usize])
            .collect()
    }

    /// `M^T v`, i.e. the action of `Φ` on a coefficient vector in the F basis.
    pub fn transpose_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim());
        let width = self.degree().saturating_sub(1);
        let mut by_descent = vec![BigInt::zero(); 1 << width];
        for (x, &d) in v.iter().zip(self.group.descent_masks()) {
            by_descent[d as usize] += x;
        }
        // out[τ] = Σ_{D ⊇ Rec(τ)} by_descent[D]
        let sup = superset_sums(&by_descent);
        self.group
            .recoil_masks()
            .iter()
            .map(|&r| sup[r as usize].clone())
            .collect()
    }
}

/// `out[m] = Σ_{s ⊆ m} xs[s]` over a power-of-two sized table.
fn subset_sums<T: Clone + for<'a> std::ops::AddAssign<&'a T>>(xs: &[T]) -> Vec<T> {
    let mut out = xs.to_vec();
    let mut bit = 1;
    while bit < out.len() {
        for m in 0..out.len() {
            if m & bit != 0 {
                let lo = out[m ^ bit].clone();
                out[m] += &lo;
            }
        }
        bit <<= 1;
    }
    out
}

fn superset_sums<T: Clone + for<'a> std::ops::AddAssign<&'a T>>(xs: &[T]) -> Vec<T> {
    let mut out = xs.to_vec();
    let mut bit = 1;
    while bit < out.len() {
        for m in 0..out.len() {
            if m & bit == 0 {
                let hi = out[m | bit].clone();
                out[m] += &hi;
            }
        }
        bit <<= 1;
    }
    out
}

/// Matrix of `∂` from degree `n` to degree `n - 1` in the F bases:
/// column `σ` holds `Σ_i sgn_i(σ) F_{del_i(σ)}`.
pub fn derivation_matrix(n: usize) -> IntMatrix {
    assert!(n >= 1);
    let group = SymmetricGroup::cached(n);
    let mut d = IntMatrix::zeros(factorial(n - 1), factorial(n));
    for (col, sigma) in group.elements().iter().enumerate() {
        for i in 1..=n {
            let s = sigma.sign_at(i).expect("letter in range");
            if s != 0 {
                let row = sigma.delete_letter(i).expect("letter in range").lex_rank();
                let v = d.get(row, col) + s;
                d.set(row, col, v);
            }
        }
    }
    d
}
