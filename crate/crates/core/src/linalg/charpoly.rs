//! Characteristic polynomials over ℤ: one Hessenberg reduction per word-size
//! prime, then Chinese remaindering up to an a-priori coefficient bound.

use log::debug;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::matrix::IntMatrix;
use super::modular::{self, Modulus};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct CharPolyOptions {
    /// Skip this many primes at the start of the prime sequence; two runs with
    /// offsets further apart than the prime count use disjoint prime sets.
    pub prime_offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyStats {
    pub primes: usize,
    pub bound_bits: u64,
}

/// Bound on `max_k |c_k|` for `det(xI - m) = Σ c_k x^k`.
///
/// `c_{n-k}` is, up to sign, the sum of the `k x k` principal minors, and each
/// minor is at most the product of its row norms (Hadamard). Summing gives the
/// elementary symmetric function `e_k` of the row norms; the same holds for
/// columns and the smaller of the two is kept.
pub fn coefficient_bound(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let ceil_sqrt = |x: BigInt| {
        let s = x.sqrt();
        if &s * &s < x {
            s + 1
        } else {
            s
        }
    };
    let norm = |it: &mut dyn Iterator<Item = &BigInt>| ceil_sqrt(it.map(|x| x * x).sum());
    let rows: Vec<BigInt> = (0..n).map(|i| norm(&mut m.row(i).iter())).collect();
    let cols: Vec<BigInt> = (0..n)
        .map(|j| norm(&mut (0..n).map(|i| m.get(i, j))))
        .collect();
    let er = elementary_symmetric(&rows);
    let ec = elementary_symmetric(&cols);
    er.into_iter()
        .zip(ec)
        .map(|(a, b)| a.min(b))
        .max()
        .unwrap_or_else(BigInt::one)
}

fn elementary_symmetric(xs: &[BigInt]) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); xs.len() + 1];
    e[0] = BigInt::one();
    let mut top = 0;
    for x in xs.iter().filter(|x| !x.is_zero()) {
        top += 1;
        for k in (1..=top).rev() {
            let add = &e[k - 1] * x;
            e[k] += add;
        }
    }
    e
}

/// `det(xI - m)` with diagnostics.
pub fn char_poly_with(
    m: &IntMatrix,
    opts: &CharPolyOptions,
) -> Result<(IntPolynomial, CharPolyStats)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let bound = coefficient_bound(m);
    // The modulus must exceed 2·bound for symmetric residues to be unique.
    let target: BigInt = bound.clone() * 2u32 + 1u32;
    let mut moduli = Vec::new();
    let mut product = BigInt::one();
    while product <= target {
        let p = modular::nth_prime(opts.prime_offset + moduli.len());
        product *= p;
        moduli.push(Modulus::new(p));
    }
    debug!(
        "char_poly: n = {n}, bound {} bits, {} primes",
        bound.bits(),
        moduli.len()
    );

    let residues: Vec<Vec<u64>> = moduli
        .par_iter()
        .map(|&md| {
            let mut a = m.reduce_mod(md);
            modular::char_poly_mod(&mut a, n, md)
        })
        .collect();

    let coeffs = crt_symmetric(&moduli, &residues, n + 1);
    let poly = IntPolynomial::new(coeffs);
    if poly.degree() != Some(n) || !poly.is_monic() {
        return Err(Error::InvalidArgument(format!(
            "reconstructed characteristic polynomial is not monic of degree {n}"
        )));
    }
    Ok((
        poly,
        CharPolyStats {
            primes: moduli.len(),
            bound_bits: bound.bits(),
        },
    ))
}

/// Mixed-radix (Garner) reconstruction into the symmetric range.
fn crt_symmetric(moduli: &[Modulus], residues: &[Vec<u64>], len: usize) -> Vec<BigInt> {
    // inverses[i] = (p_0 ··· p_{i-1})^{-1} mod p_i
    let inverses: Vec<u64> = moduli
        .iter()
        .enumerate()
        .map(|(i, &mi)| {
            let prefix = moduli[..i]
                .iter()
                .fold(1u64, |acc, mj| mi.mul(acc, mj.value() % mi.value()));
            mi.inv(prefix)
        })
        .collect();
    let total: BigInt = moduli.iter().map(|md| BigInt::from(md.value())).product();
    let half = &total >> 1u32;
    (0..len)
        .map(|k| {
            let mut digits: Vec<u64> = Vec::with_capacity(moduli.len());
            for (i, &mi) in moduli.iter().enumerate() {
                // evaluate the partial mixed-radix number modulo p_i
                let mut acc = 0u64;
                for j in (0..i).rev() {
                    acc = mi.add(mi.mul(acc, moduli[j].value() % mi.value()), digits[j] % mi.value());
                }
                let r = residues[i][k];
                digits.push(mi.mul(mi.sub(r, acc), inverses[i]));
            }
            let mut x = BigInt::zero();
            for (j, &d) in digits.iter().enumerate().rev() {
                x = x * moduli[j].value() + d;
            }
            if x > half {
                x -= &total;
            }
            x
        })
        .collect()
}
