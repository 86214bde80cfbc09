//! Word-size arithmetic modulo primes just below 2^62.

use std::sync::OnceLock;

/// Primes used for CRT reconstruction lie below this bound.
pub const PRIME_CEILING: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    p: u64,
}

impl Modulus {
    /// `p` must be an odd prime below 2^62.
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < PRIME_CEILING);
        Modulus { p }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub fn reduce_i64(self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    /// Precomputed multiplier for repeated products by the fixed `w < p`.
    #[inline]
    pub fn shoup(self, w: u64) -> Shoup {
        Shoup {
            w,
            w_pre: (((w as u128) << 64) / self.p as u128) as u64,
        }
    }

    /// `x * s.w mod p` for any `x < 2^64`.
    #[inline]
    pub fn mul_shoup(self, x: u64, s: Shoup) -> u64 {
        let q = ((x as u128 * s.w_pre as u128) >> 64) as u64;
        let r = x.wrapping_mul(s.w).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Shoup {
    w: u64,
    w_pre: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `k`-th prime below [`PRIME_CEILING`], counting downwards from 0.
pub fn nth_prime(k: usize) -> u64 {
    static PRIMES: OnceLock<std::sync::Mutex<Vec<u64>>> = OnceLock::new();
    let cache = PRIMES.get_or_init(Default::default);
    let mut primes = cache.lock().unwrap();
    while primes.len() <= k {
        let mut c = primes.last().copied().unwrap_or(PRIME_CEILING + 1) - 2;
        while !is_prime(c) {
            c -= 2;
        }
        primes.push(c);
    }
    primes[k]
}

/// Characteristic polynomial `det(xI - A)` of the `n x n` row-major matrix `a`
/// over `F_p`, ascending coefficients. `a` is overwritten with a Hessenberg form.
pub fn char_poly_mod(a: &mut [u64], n: usize, m: Modulus) -> Vec<u64> {
    assert_eq!(a.len(), n * n);
    hessenberg_in_place(a, n, m);
    hessenberg_char_poly(a, n, m)
}

/// Similarity reduction to upper Hessenberg form.
fn hessenberg_in_place(a: &mut [u64], n: usize, m: Modulus) {
    let mut factors: Vec<(usize, Shoup)> = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
            continue;
        };
        if piv != k + 1 {
            for j in 0..n {
                a.swap(piv * n + j, (k + 1) * n + j);
            }
            for i in 0..n {
                a.swap(i * n + piv, i * n + k + 1);
            }
        }
        let inv = m.inv(a[(k + 1) * n + k]);
        factors.clear();
        // rows: row_i -= t_i * row_{k+1}
        let (head, tail) = a.split_at_mut((k + 2) * n);
        let pivot_row = &head[(k + 1) * n..];
        for (off, row) in tail.chunks_exact_mut(n).enumerate() {
            if row[k] == 0 {
                continue;
            }
            let t = m.mul(row[k], inv);
            let neg_t = m.shoup(m.neg(t));
            for j in k..n {
                row[j] = m.add(row[j], m.mul_shoup(pivot_row[j], neg_t));
            }
            factors.push((k + 2 + off, m.shoup(t)));
        }
        if factors.is_empty() {
            continue;
        }
        // columns: col_{k+1} += Σ t_i * col_i
        for row in a.chunks_exact_mut(n) {
            let mut acc = row[k + 1];
            for &(i, t) in &factors {
                acc = m.add(acc, m.mul_shoup(row[i], t));
            }
            row[k + 1] = acc;
        }
    }
}

/// Characteristic polynomial of an upper Hessenberg matrix by the
/// leading-principal-minor recurrence.
fn hessenberg_char_poly(h: &[u64], n: usize, m: Modulus) -> Vec<u64> {
    let at = |i: usize, j: usize| h[i * n + j];
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        // (x - h_kk) p_{k-1}
        let prev = &polys[k - 1];
        let diag = at(k - 1, k - 1);
        let mut cur = vec![0u64; k + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] = m.add(cur[d + 1], c);
            cur[d] = m.sub(cur[d], m.mul(diag, c));
        }
        let mut t = 1u64;
        for i in 1..k {
            t = m.mul(t, at(k - i, k - i - 1));
            if t == 0 {
                break;
            }
            let c = m.mul(at(k - i - 1, k - 1), t);
            if c == 0 {
                continue;
            }
            let neg_c = m.shoup(m.neg(c));
            for (d, &q) in polys[k - i - 1].iter().enumerate() {
                cur[d] = m.add(cur[d], m.mul_shoup(q, neg_c));
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Rank of a row-major `rows x cols` matrix over `F_p`.
pub fn rank_mod(mut a: Vec<u64>, rows: usize, cols: usize, m: Modulus) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = m.inv(a[rank * cols + c]);
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            if row[c] == 0 {
                continue;
            }
            let neg_t = m.shoup(m.neg(m.mul(row[c], inv)));
            for j in c..cols {
                row[j] = m.add(row[j], m.mul_shoup(pivot_row[j], neg_t));
            }
        }
        rank += 1;
    }
    rank
}
