//! End-to-end checks on the descent/recoil matrices `M_n`: divisibility of
//! consecutive characteristic polynomials, commutation of `∂` and `Φ`, the
//! kernel/quotient structure behind the divisibility, and counting of normal
//! sequences.

mod cache;
mod matrices;
mod report;

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use cache::{CharPolyRecord, PolyCache, ALGORITHM_VERSION, INDEX_ORDER_VERSION};
pub use matrices::{derivation_matrix, DescentMatrix};
pub use report::{Claim, Diagnostics, Mismatch, TrailingTerm, VerificationReport, Witness};

use crate::error::{Error, Result};
use crate::fqsym::{derivation_of_ribbon, ribbon_complete, FQSymElement};
use crate::linalg::{char_poly_with, divides, CharPolyOptions, IntMatrix, IntPolynomial};
use crate::permutation::{factorial, Composition, SymmetricGroup};

pub const DEFAULT_COMMUTATION_SAMPLE: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Largest `n` each kind of computation is allowed to attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Building or multiplying by `M_n` (`n!` rows).
    pub max_matrix_n: usize,
    /// Characteristic polynomials of `M_n`.
    pub max_charpoly_n: usize,
    /// Exact integer kernels of `∂` in degree `n`.
    pub max_kernel_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_matrix_n: 7,
            max_charpoly_n: 6,
            max_kernel_n: 5,
        }
    }
}

impl Budget {
    /// One cap for everything.
    pub fn uniform(max_n: usize) -> Self {
        Budget {
            max_matrix_n: max_n,
            max_charpoly_n: max_n,
            max_kernel_n: max_n,
        }
    }

    fn check(what: &'static str, n: usize, max: usize) -> Result<()> {
        if n > max {
            return Err(Error::BudgetExceeded { what, n, max });
        }
        Ok(())
    }

    pub fn check_matrix(&self, n: usize) -> Result<()> {
        Self::check("matrix", n, self.max_matrix_n)
    }

    pub fn check_charpoly(&self, n: usize) -> Result<()> {
        Self::check("matrix", n, self.max_matrix_n)?;
        Self::check("characteristic polynomial", n, self.max_charpoly_n)
    }

    pub fn check_kernel(&self, n: usize) -> Result<()> {
        Self::check("kernel", n, self.max_kernel_n)
    }
}

fn require_positive(n: usize, name: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `M_n` as a dense integer matrix, rows and columns in lexicographic order.
pub fn build_matrix(n: usize, budget: &Budget) -> Result<IntMatrix> {
    require_positive(n, "n")?;
    budget.check_matrix(n)?;
    Ok(DescentMatrix::new(n).to_int_matrix())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub eigenvalue: f64,
    /// `‖M v - λ v‖ / ‖v‖` at the last iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Carries the budget and optional polynomial cache shared by the checks that
/// need `M_n` or `P_n`.
#[derive(Clone, Debug, Default)]
pub struct Verifier {
    budget: Budget,
    cache: Option<PolyCache>,
}

impl Verifier {
    pub fn new(budget: Budget, cache: Option<PolyCache>) -> Self {
        Verifier { budget, cache }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// `P_n = det(xI - M_n)`, from the cache when available.
    pub fn char_poly(&self, n: usize) -> Result<(IntPolynomial, Diagnostics)> {
        require_positive(n, "n")?;
        self.budget.check_charpoly(n)?;
        let start = Instant::now();
        if let Some(p) = self.cache.as_ref().and_then(|c| c.load(n)) {
            return Ok((
                p,
                Diagnostics {
                    wall_time: start.elapsed(),
                    primes: 0,
                    cache_hits: 1,
                },
            ));
        }
        let m = DescentMatrix::new(n).to_int_matrix();
        let (p, stats) = char_poly_with(&m, &CharPolyOptions::default())?;
        if let Some(c) = &self.cache {
            c.store(n, &p)?;
        }
        Ok((
            p,
            Diagnostics {
                wall_time: start.elapsed(),
                primes: stats.primes,
                cache_hits: 0,
            },
        ))
    }

    /// Does `P_n` divide `P_{n+1}` in ℤ[x]?
    pub fn verify_divisibility(&self, n: usize) -> Result<VerificationReport> {
        require_positive(n, "n")?;
        self.budget.check_charpoly(n + 1)?;
        let start = Instant::now();
        let (p_n, d1) = self.char_poly(n)?;
        let (p_next, d2) = self.char_poly(n + 1)?;
        let quotient = divides(&p_n, &p_next)?;
        let p_n_trailing = p_n.trailing_term().map(|(degree, c)| TrailingTerm {
            degree,
            coefficient: c.to_string(),
        });
        Ok(VerificationReport {
            n,
            claim: Claim::Divisibility,
            verified: quotient.is_some(),
            witness: Witness::Divisibility {
                quotient_degree: quotient.as_ref().and_then(IntPolynomial::degree),
                quotient,
                p_n,
                p_next,
                p_n_trailing,
            },
            diagnostics: Diagnostics {
                wall_time: start.elapsed(),
                primes: d1.primes + d2.primes,
                cache_hits: d1.cache_hits + d2.cache_hits,
            },
        })
    }

    /// Rank of `∂` from degree `n` to `n - 1` equals `(n-1)!`.
    pub fn verify_surjectivity(&self, n: usize) -> Result<VerificationReport> {
        if n < 2 {
            return Err(Error::InvalidArgument("surjectivity needs n >= 2".into()));
        }
        self.budget.check_matrix(n)?;
        let start = Instant::now();
        let d = derivation_matrix(n);
        let rank = d.rank();
        Ok(VerificationReport {
            n,
            claim: Claim::Surjectivity,
            verified: rank == d.rows(),
            witness: Witness::Surjectivity {
                rows: d.rows(),
                cols: d.cols(),
                rank,
                kernel_dim: d.cols() - rank,
            },
            diagnostics: Diagnostics {
                wall_time: start.elapsed(),
                ..Default::default()
            },
        })
    }

    /// `Φ_n` maps `K = ker ∂` into itself, and `dim K + (n-1)! = n!`.
    pub fn verify_block_structure(&self, n: usize) -> Result<VerificationReport> {
        if n < 2 {
            return Err(Error::InvalidArgument("block structure needs n >= 2".into()));
        }
        self.budget.check_matrix(n)?;
        self.budget.check_kernel(n)?;
        let start = Instant::now();
        let d = derivation_matrix(n);
        let kernel = d.kernel_basis();
        let m = DescentMatrix::new(n);
        let images: Vec<Vec<BigInt>> = kernel.par_iter().map(|v| m.transpose_mul_vec(v)).collect();
        let mut failure = None;
        for (v, w) in kernel.iter().zip(&images) {
            if !d.mul_vec(w)?.iter().all(Zero::is_zero) {
                failure = Some(v.iter().map(ToString::to_string).collect());
                break;
            }
        }
        let dimension_consistent = kernel.len() + factorial(n - 1) == factorial(n);
        Ok(VerificationReport {
            n,
            claim: Claim::BlockStructure,
            verified: failure.is_none() && dimension_consistent,
            witness: Witness::BlockStructure {
                kernel_dim: kernel.len(),
                vectors_checked: kernel.len(),
                dimension_consistent,
                failure,
            },
            diagnostics: Diagnostics {
                wall_time: start.elapsed(),
                ..Default::default()
            },
        })
    }

    /// Number of length-`l` sequences in `S_n` with `Rec(σ_{i+1}) ⊆ Des(σ_i)`:
    /// the sum of the entries of `M_n^{l-1}`.
    pub fn count_normal_sequences(&self, n: usize, l: usize) -> Result<BigUint> {
        require_positive(n, "n")?;
        require_positive(l, "length")?;
        self.budget.check_matrix(n)?;
        let m = DescentMatrix::new(n);
        let mut v = vec![BigUint::one(); m.dim()];
        for _ in 1..l {
            v = m.mul_vec_biguint(&v);
        }
        Ok(v.into_iter().sum())
    }

    /// Power-iteration estimate of the Perron root of `M_n`.
    pub fn growth_rate(&self, n: usize, iterations: usize, tolerance: f64) -> Result<GrowthEstimate> {
        require_positive(n, "n")?;
        require_positive(iterations, "iterations")?;
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        self.budget.check_matrix(n)?;
        let m = DescentMatrix::new(n);
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v = vec![1.0 / (m.dim() as f64).sqrt(); m.dim()];
        let mut est = GrowthEstimate {
            eigenvalue: 0.0,
            residual: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
        for it in 1..=iterations {
            let w = m.mul_vec_f64(&v);
            let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let residual = norm(
                &w.iter()
                    .zip(&v)
                    .map(|(a, b)| a - lambda * b)
                    .collect::<Vec<_>>(),
            );
            est = GrowthEstimate {
                eigenvalue: lambda,
                residual,
                iterations: it,
                converged: residual <= tolerance * lambda.abs().max(1.0),
            };
            if est.converged {
                break;
            }
            let nw = norm(&w);
            if nw == 0.0 {
                break;
            }
            v = w.into_iter().map(|x| x / nw).collect();
        }
        Ok(est)
    }
}

/// `∂Φ(F_σ) = Φ∂(F_σ)` for every `σ ∈ S_n`, or for `sample` distinct
/// permutations drawn with `seed`.
pub fn verify_commutation(n: usize, sample: Option<usize>, seed: u64) -> Result<VerificationReport> {
    require_positive(n, "n")?;
    if n > 12 {
        return Err(Error::BudgetExceeded {
            what: "commutation",
            n,
            max: 12,
        });
    }
    let start = Instant::now();
    let group = SymmetricGroup::cached(n);
    let total = group.len();
    let (indices, sampled): (Vec<usize>, bool) = match sample {
        Some(k) if k < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = index::sample(&mut rng, total, k).into_vec();
            idx.sort_unstable();
            (idx, true)
        }
        _ => ((0..total).collect(), false),
    };
    let outcomes: Vec<Option<Mismatch>> = indices
        .par_iter()
        .map(|&i| {
            let sigma = &group.elements()[i];
            let x = FQSymElement::basis(sigma.clone());
            let lhs = x.phi().derivation();
            let rhs = x.derivation().phi();
            (lhs != rhs).then(|| Mismatch {
                input: format!("F[{sigma}]"),
                lhs: lhs.to_text(),
                rhs: rhs.to_text(),
            })
        })
        .collect();
    let failure = outcomes.into_iter().flatten().next();
    Ok(VerificationReport {
        n,
        claim: Claim::Commutation,
        verified: failure.is_none(),
        witness: Witness::Commutation {
            checked: indices.len(),
            sampled,
            seed: sampled.then_some(seed),
            failure,
        },
        diagnostics: Diagnostics {
            wall_time: start.elapsed(),
            ..Default::default()
        },
    })
}

/// `derivation_of_ribbon(I) = ∂(S^I)` for every composition of every `m <= max_n`.
pub fn verify_ribbon_derivation(max_n: usize) -> Result<VerificationReport> {
    require_positive(max_n, "n")?;
    if max_n > 12 {
        return Err(Error::BudgetExceeded {
            what: "ribbon",
            n: max_n,
            max: 12,
        });
    }
    let start = Instant::now();
    let compositions: Vec<Composition> = (1..=max_n).flat_map(Composition::all_of).collect();
    let outcomes: Vec<Option<Mismatch>> = compositions
        .par_iter()
        .map(|c| {
            let lhs = derivation_of_ribbon(c);
            let rhs = ribbon_complete(c).derivation();
            (lhs != rhs).then(|| Mismatch {
                input: c.to_string(),
                lhs: lhs.to_text(),
                rhs: rhs.to_text(),
            })
        })
        .collect();
    let failure = outcomes.into_iter().flatten().next();
    Ok(VerificationReport {
        n: max_n,
        claim: Claim::RibbonDerivation,
        verified: failure.is_none(),
        witness: Witness::RibbonDerivation {
            compositions_checked: compositions.len(),
            failure,
        },
        diagnostics: Diagnostics {
            wall_time: start.elapsed(),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verifier() -> Verifier {
        Verifier::default()
    }

    #[test]
    fn build_matrix_examples() {
        let b = Budget::default();
        assert_eq!(build_matrix(1, &b).unwrap(), IntMatrix::from_rows(&[vec![1]]));
        assert_eq!(
            build_matrix(2, &b).unwrap(),
            IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]])
        );
        let m3 = build_matrix(3, &b).unwrap();
        assert_eq!(m3.trace().unwrap(), BigInt::from(4));
        assert_eq!(
            m3.row_sums(),
            [1, 3, 3, 3, 3, 6].map(BigInt::from).to_vec()
        );
        assert!(matches!(
            build_matrix(8, &b),
            Err(Error::BudgetExceeded { n: 8, max: 7, .. })
        ));
        assert!(build_matrix(0, &b).is_err());
    }

    #[test]
    fn divisibility_small() {
        let r = verifier().verify_divisibility(1).unwrap();
        assert!(r.verified);
        let Witness::Divisibility { quotient, p_n, .. } = &r.witness else {
            panic!()
        };
        assert_eq!(p_n, &IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(quotient.as_ref().unwrap(), &IntPolynomial::from_i64(&[-1, 1]));

        let r = verifier().verify_divisibility(2).unwrap();
        assert!(r.verified);
        let Witness::Divisibility { quotient_degree, .. } = &r.witness else {
            panic!()
        };
        assert_eq!(*quotient_degree, Some(4));
        assert!(verifier().verify_divisibility(6).is_err());
    }

    #[test]
    fn commutation_small() {
        for n in 1..=4 {
            let r = verify_commutation(n, None, DEFAULT_SEED).unwrap();
            assert!(r.verified, "{}", r.to_text());
            assert_eq!(
                r.witness,
                Witness::Commutation {
                    checked: factorial(n),
                    sampled: false,
                    seed: None,
                    failure: None
                }
            );
        }
        let r = verify_commutation(4, Some(5), 7).unwrap();
        assert!(matches!(r.witness, Witness::Commutation { checked: 5, sampled: true, .. }));
    }

    #[test]
    fn surjectivity_and_blocks_small() {
        let v = verifier();
        for (n, rank, kernel) in [(2, 1, 1), (3, 2, 4), (4, 6, 18)] {
            let r = v.verify_surjectivity(n).unwrap();
            assert!(r.verified);
            assert!(matches!(r.witness, Witness::Surjectivity { rank: a, kernel_dim: b, .. } if a == rank && b == kernel));
            let b = v.verify_block_structure(n).unwrap();
            assert!(b.verified, "{}", b.to_text());
            assert!(matches!(b.witness, Witness::BlockStructure { kernel_dim, .. } if kernel_dim == kernel));
        }
        assert!(v.verify_surjectivity(1).is_err());
        assert!(v.verify_block_structure(6).is_err());
    }

    #[test]
    fn ribbon_small() {
        let r = verify_ribbon_derivation(5).unwrap();
        assert!(r.verified);
        assert!(matches!(r.witness, Witness::RibbonDerivation { compositions_checked: 31, .. }));
    }

    #[test]
    fn counting_examples() {
        let v = verifier();
        assert_eq!(v.count_normal_sequences(2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(v.count_normal_sequences(2, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(v.count_normal_sequences(3, 2).unwrap(), BigUint::from(19u32));
        assert!(v.count_normal_sequences(3, 0).is_err());
        assert!(v.count_normal_sequences(8, 2).is_err());
    }

    #[test]
    fn count_matches_matrix_power() {
        let v = verifier();
        for n in 1..=4 {
            let m = build_matrix(n, &Budget::default()).unwrap();
            for l in 1..=5u64 {
                let total: BigInt = m.mat_pow(l - 1).unwrap().entries().iter().sum();
                let got = BigInt::from(v.count_normal_sequences(n, l as usize).unwrap());
                assert_eq!(got, total);
            }
        }
    }

    #[test]
    fn growth_examples() {
        let v = verifier();
        let g1 = v.growth_rate(1, 10, 1e-12).unwrap();
        assert!(g1.converged && (g1.eigenvalue - 1.0).abs() < 1e-12);
        // M_2 is a Jordan block: the residual decays like 1/k^2 but the
        // eigenvalue error only like 1/k.
        let g2 = v.growth_rate(2, 100_000, 1e-7).unwrap();
        assert!((g2.eigenvalue - 1.0).abs() < 1e-3, "{g2:?}");
        assert!(v.growth_rate(2, 0, 1e-3).is_err());
        assert!(v.growth_rate(2, 5, 0.0).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = Verifier::new(Budget::default(), Some(PolyCache::new(dir.path())));
        let (p, d) = v.char_poly(3).unwrap();
        assert_eq!(d.cache_hits, 0);
        let (q, d) = v.char_poly(3).unwrap();
        assert_eq!(d.cache_hits, 1);
        assert_eq!(p, q);
        assert_eq!(p, verifier().char_poly(3).unwrap().0);
    }
}
