//! Cross-checks against independent brute-force computations.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dehornoy::linalg::{char_poly_with, divides, CharPolyOptions, IntMatrix, IntPolynomial};
use dehornoy::permutation::factorial;
use dehornoy::verify::{Budget, DescentMatrix, Verifier};

fn all_words(n: usize) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u32 + 1);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn des(w: &[u32]) -> u64 {
    (1..w.len()).filter(|&i| w[i - 1] > w[i]).fold(0, |m, i| m | 1 << i)
}

fn rec(w: &[u32]) -> u64 {
    let mut inv = vec![0u32; w.len()];
    for (i, &v) in w.iter().enumerate() {
        inv[v as usize - 1] = i as u32 + 1;
    }
    des(&inv)
}

fn naive_descent_matrix(n: usize) -> IntMatrix {
    let words = all_words(n);
    IntMatrix::from_fn(words.len(), words.len(), |i, j| {
        i64::from(rec(&words[j]) & !des(&words[i]) == 0)
    })
}

/// Characteristic polynomial by Faddeev-LeVerrier; every division is exact.
fn faddeev_leverrier(a: &IntMatrix) -> IntPolynomial {
    let n = a.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mat_mul(&m).unwrap();
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        m = next;
        let tr = a.mat_mul(&m).unwrap().trace().unwrap();
        c[n - k] = -(tr / BigInt::from(k));
    }
    IntPolynomial::new(c)
}

/// `M_n = A B` through the `2^(n-1)` descent sets, so `P_n = x^(n! - 2^(n-1)) χ(BA)`.
fn low_rank_char_poly(n: usize) -> IntPolynomial {
    let words = all_words(n);
    let r = 1usize << (n - 1);
    let ba = IntMatrix::from_fn(r, r, |e, f| {
        let (e, f) = ((e as u64) << 1, (f as u64) << 1);
        words
            .iter()
            .filter(|w| rec(w) & !e == 0 && des(w) == f)
            .count() as i64
    });
    faddeev_leverrier(&ba).mul(&IntPolynomial::monomial(factorial(n) - r))
}

fn eval_det(m: &IntMatrix, t: i64) -> BigInt {
    let n = m.rows();
    IntMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { BigInt::from(t) } else { BigInt::zero() };
        d - m.get(i, j)
    })
    .determinant()
    .unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, span: i64) -> IntMatrix {
    IntMatrix::from_fn(n, n, |_, _| rng.gen_range(-span..=span))
}

#[test]
fn descent_matrix_matches_definition() {
    for n in 1..=5 {
        let fast = DescentMatrix::new(n).to_int_matrix();
        assert_eq!(fast, naive_descent_matrix(n), "n = {n}");
    }
}

#[test]
fn small_base_cases() {
    let m1 = DescentMatrix::new(1).to_int_matrix();
    assert_eq!(m1, IntMatrix::from_rows(&[vec![1]]));
    let m2 = DescentMatrix::new(2).to_int_matrix();
    assert_eq!(m2, IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]));
    let p1 = m1.char_poly().unwrap();
    let p2 = m2.char_poly().unwrap();
    assert_eq!(p1, IntPolynomial::from_i64(&[-1, 1]));
    assert_eq!(p2, IntPolynomial::from_i64(&[1, -2, 1]));
    assert_eq!(divides(&p1, &p2).unwrap(), Some(IntPolynomial::from_i64(&[-1, 1])));
}

#[test]
fn char_poly_matches_low_rank_factorisation() {
    let verifier = Verifier::default();
    for n in 1..=6 {
        let (p, _) = verifier.char_poly(n).unwrap();
        assert_eq!(p, low_rank_char_poly(n), "n = {n}");
    }
}

#[test]
fn frozen_trailing_terms() {
    let verifier = Verifier::default();
    let expected = [
        (3, (3, -2i64)),
        (4, (19, -6)),
        (5, (113, -144)),
        (6, (709, -8640)),
    ];
    for (n, (deg, c)) in expected {
        let (p, _) = verifier.char_poly(n).unwrap();
        assert_eq!(p.trailing_term(), Some((deg, &BigInt::from(c))), "n = {n}");
    }
    let (p3, _) = verifier.char_poly(3).unwrap();
    assert_eq!(p3, IntPolynomial::from_i64(&[0, 0, 0, -2, 5, -4, 1]));
}

#[test]
fn divisibility_quotient_degrees() {
    let verifier = Verifier::default();
    for n in 1..=5 {
        let (p, _) = verifier.char_poly(n).unwrap();
        let (q, _) = verifier.char_poly(n + 1).unwrap();
        let quotient = divides(&p, &q).unwrap().expect("exact division");
        assert_eq!(quotient.degree(), Some(factorial(n + 1) - factorial(n)));
        assert_eq!(p.mul(&quotient), q);
    }
}

#[test]
fn char_poly_matches_determinant_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut corpus: Vec<IntMatrix> = (1..=4).map(|n| DescentMatrix::new(n).to_int_matrix()).collect();
    for n in [1, 2, 3, 5, 8, 13, 21, 34, 60] {
        corpus.push(random_matrix(&mut rng, n, 9));
    }
    corpus.push(random_matrix(&mut rng, 12, 1_000_000_000));
    for m in &corpus {
        let p = m.char_poly().unwrap();
        assert_eq!(p.degree(), Some(m.rows()));
        assert_eq!(m.transpose().char_poly().unwrap(), p);
        for _ in 0..5 {
            let t = rng.gen_range(-50..=50);
            assert_eq!(p.eval(&BigInt::from(t)), eval_det(m, t), "dim {} at t = {t}", m.rows());
        }
    }
}

#[test]
fn disjoint_prime_sets_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut corpus = vec![DescentMatrix::new(5).to_int_matrix()];
    corpus.push(random_matrix(&mut rng, 30, 100));
    for m in &corpus {
        let (p, stats) = char_poly_with(m, &CharPolyOptions::default()).unwrap();
        let shifted = CharPolyOptions {
            prime_offset: stats.primes,
        };
        let (q, _) = char_poly_with(m, &shifted).unwrap();
        assert_eq!(p, q);
    }
}

#[test]
fn counts_match_enumeration() {
    let verifier = Verifier::default();
    for n in 1..=4 {
        let words = all_words(n);
        let max_l = if n == 4 { 3 } else { 4 };
        // count of sequences ending at each permutation, extended one step at a time
        let mut ending = vec![1u64; words.len()];
        for l in 1..=max_l {
            let brute: u64 = ending.iter().sum();
            let got = verifier.count_normal_sequences(n, l).unwrap();
            assert_eq!(got, brute.into(), "n = {n}, l = {l}");
            ending = (0..words.len())
                .map(|j| {
                    (0..words.len())
                        .filter(|&i| rec(&words[j]) & !des(&words[i]) == 0)
                        .map(|i| ending[i])
                        .sum()
                })
                .collect();
        }
    }
    assert_eq!(verifier.count_normal_sequences(3, 2).unwrap(), 19u32.into());
}

#[test]
fn pair_counts_are_multinomial_row_sums() {
    let verifier = Verifier::default();
    for n in 1..=6 {
        let expected: u64 = all_words(n)
            .iter()
            .map(|w| {
                let mut parts = Vec::new();
                let mut last = 0;
                for i in (1..w.len()).filter(|&i| w[i - 1] > w[i]) {
                    parts.push(i - last);
                    last = i;
                }
                parts.push(n - last);
                (factorial(n) / parts.iter().map(|&p| factorial(p)).product::<usize>()) as u64
            })
            .sum();
        assert_eq!(verifier.count_normal_sequences(n, 2).unwrap(), expected.into());
    }
}

#[test]
fn budget_is_enforced() {
    let verifier = Verifier::new(Budget::uniform(3), None);
    assert!(verifier.char_poly(4).is_err());
    assert!(verifier.count_normal_sequences(4, 2).is_err());
    assert!(verifier.char_poly(3).is_ok());
}
