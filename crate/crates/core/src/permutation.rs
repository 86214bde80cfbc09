//! Permutations in one-line notation and the word combinatorics built on them:
//! descents, recoils, standardization, signed letter deletion, shifted shuffle
//! and descent compositions.
//!
//! Positions and values are 1-based throughout. The empty permutation (degree 0)
//! is a regular value.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1..n}` stored as its one-line word.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation {
    word: Vec<u32>,
}

/// Degree first, then lexicographic on the word.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &x in &word {
            let x = x as usize;
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!(
                    "letter {x} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::InvalidPermutation(format!("letter {x} repeated")));
            }
        }
        Ok(Permutation { word })
    }

    pub fn empty() -> Self {
        Permutation { word: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.word[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut q = vec![0u32; self.word.len()];
        for (pos, &v) in self.word.iter().enumerate() {
            q[v as usize - 1] = pos as u32 + 1;
        }
        Permutation { word: q }
    }

    pub fn descents(&self) -> DescentSet {
        let n = self.degree();
        let mut set = DescentSet::empty(n);
        for (i, w) in self.word.windows(2).enumerate() {
            if w[0] > w[1] {
                set.insert(i + 1);
            }
        }
        set
    }

    /// Descents of the inverse: `i` is a recoil iff `i + 1` sits left of `i`.
    pub fn recoils(&self) -> DescentSet {
        let n = self.degree();
        let pos = self.positions();
        let mut set = DescentSet::empty(n);
        for i in 1..n {
            if pos[i] < pos[i - 1] {
                set.insert(i);
            }
        }
        set
    }

    /// `pos[v - 1]` is the 0-based position of value `v`.
    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0usize; self.word.len()];
        for (p, &v) in self.word.iter().enumerate() {
            pos[v as usize - 1] = p;
        }
        pos
    }

    fn check_letter(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.degree() {
            return Err(Error::LetterOutOfRange {
                letter: i,
                degree: self.degree(),
            });
        }
        Ok(())
    }

    /// Sign of the letter `i` in the padded word `(n+1) · σ · 0`: `+1` when its
    /// neighbours increase through it, `-1` when they decrease, `0` otherwise.
    pub fn sign_at(&self, i: usize) -> Result<i32> {
        self.check_letter(i)?;
        let n = self.degree();
        let p = self.word.iter().position(|&x| x as usize == i).unwrap();
        let before = if p == 0 { n + 1 } else { self.word[p - 1] as usize };
        let after = if p + 1 == n { 0 } else { self.word[p + 1] as usize };
        Ok(if before < i && i < after {
            1
        } else if before > i && i > after {
            -1
        } else {
            0
        })
    }

    /// Removes the letter `i` and standardizes what is left.
    pub fn delete_letter(&self, i: usize) -> Result<Permutation> {
        self.check_letter(i)?;
        let i = i as u32;
        let word = self
            .word
            .iter()
            .filter(|&&x| x != i)
            .map(|&x| if x > i { x - 1 } else { x })
            .collect();
        Ok(Permutation { word })
    }

    /// Composition `(d_1, d_2 - d_1, ..., n - d_k)` of the descent set.
    pub fn descent_composition(&self) -> Composition {
        Composition::from_descents(&self.descents())
    }

    /// Lexicographic rank of the word among all permutations of the same degree.
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller_after = self.word[i + 1..]
                .iter()
                .filter(|&&x| x < self.word[i])
                .count();
            rank = rank * (n - i) + smaller_after;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: usize) -> Result<Permutation> {
        if rank >= factorial(n) {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} out of range for degree {n}"
            )));
        }
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut remaining: Vec<u32> = (1..=n as u32).collect();
        let word = digits.into_iter().map(|d| remaining.remove(d)).collect();
        Ok(Permutation { word })
    }
}

/// The unique permutation with the same relative order as `w`.
pub fn standardize(w: &[i64]) -> Result<Permutation> {
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by_key(|&i| w[i]);
    let mut word = vec![0u32; w.len()];
    for (rank, pair) in idx.iter().enumerate() {
        if rank > 0 && w[idx[rank - 1]] == w[*pair] {
            return Err(Error::RepeatedLetter(w[*pair]));
        }
        word[*pair] = rank as u32 + 1;
    }
    Ok(Permutation { word })
}

/// All interleavings of `a` with `b` shifted by `deg a`, in lexicographic order.
pub fn shifted_shuffle(a: &Permutation, b: &Permutation) -> Vec<Permutation> {
    let k = a.degree() as u32;
    let shifted: Vec<u32> = b.word.iter().map(|&x| x + k).collect();
    let mut out = Vec::with_capacity(binomial(a.degree() + b.degree(), a.degree()));
    let mut buf = Vec::with_capacity(a.degree() + b.degree());
    shuffle_into(&a.word, &shifted, &mut buf, &mut out);
    out.sort_unstable();
    out
}

fn shuffle_into(x: &[u32], y: &[u32], buf: &mut Vec<u32>, out: &mut Vec<Permutation>) {
    match (x.split_first(), y.split_first()) {
        (None, None) => out.push(Permutation { word: buf.clone() }),
        (Some((&h, rest)), None) | (None, Some((&h, rest))) => {
            let mark = buf.len();
            buf.push(h);
            buf.extend_from_slice(rest);
            out.push(Permutation { word: buf.clone() });
            buf.truncate(mark);
        }
        (Some((&hx, rx)), Some((&hy, ry))) => {
            buf.push(hx);
            shuffle_into(rx, y, buf, out);
            buf.pop();
            buf.push(hy);
            shuffle_into(x, ry, buf, out);
            buf.pop();
        }
    }
}

/// Digit string when `n <= 9`, comma-separated integers otherwise.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.word.iter().join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse(format!("{s:?} is not a digit string")))?
        };
        Permutation::new(word)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

/// A subset of `{1, ..., n-1}`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DescentSet {
    n: usize,
    bits: Vec<u64>,
}

impl DescentSet {
    pub fn empty(n: usize) -> Self {
        DescentSet {
            n,
            bits: vec![0; n.saturating_sub(1).div_ceil(64)],
        }
    }

    pub fn from_positions(n: usize, positions: &[usize]) -> Result<Self> {
        let mut set = DescentSet::empty(n);
        for &i in positions {
            if i == 0 || i >= n {
                return Err(Error::InvalidArgument(format!(
                    "position {i} outside 1..={}",
                    n.saturating_sub(1)
                )));
            }
            set.insert(i);
        }
        Ok(set)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    fn insert(&mut self, i: usize) {
        let b = i - 1;
        self.bits[b / 64] |= 1 << (b % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i < self.n && self.bits[(i - 1) / 64] >> ((i - 1) % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &DescentSet) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n).filter(|&i| self.contains(i))
    }

    /// Bit `i - 1` set iff `i` is in the set; `None` when `n - 1 > 64`.
    pub fn as_mask(&self) -> Option<u64> {
        match self.bits.len() {
            0 => Some(0),
            1 => Some(self.bits[0]),
            _ => None,
        }
    }
}

impl fmt::Debug for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A composition of `n`: a sequence of positive parts summing to `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?} has a zero part")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn from_descents(d: &DescentSet) -> Composition {
        let n = d.degree();
        if n == 0 {
            return Composition { parts: Vec::new() };
        }
        let mut parts = Vec::with_capacity(d.len() + 1);
        let mut prev = 0;
        for i in d.iter() {
            parts.push(i - prev);
            prev = i;
        }
        parts.push(n - prev);
        Composition { parts }
    }

    /// Partial sums of all parts but the last.
    pub fn descents(&self) -> DescentSet {
        let n = self.size();
        let mut set = DescentSet::empty(n);
        let mut acc = 0;
        for &p in self.parts.iter().take(self.parts.len().saturating_sub(1)) {
            acc += p;
            set.insert(acc);
        }
        set
    }

    /// All `2^(n-1)` compositions of `n` (just the empty one for `n = 0`),
    /// ordered by descent-set bitmask.
    pub fn all_of(n: usize) -> Vec<Composition> {
        if n == 0 {
            return vec![Composition { parts: Vec::new() }];
        }
        assert!(n <= 64, "too many compositions");
        (0u64..1 << (n - 1))
            .map(|mask| {
                let mut parts = Vec::new();
                let mut prev = 0;
                for i in 1..n {
                    if mask >> (i - 1) & 1 == 1 {
                        parts.push(i - prev);
                        prev = i;
                    }
                }
                parts.push(n - prev);
                Composition { parts }
            })
            .collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(", "))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Composition{self}")
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("{s:?}: expected a parenthesized list")))?;
        if inner.trim().is_empty() {
            return Ok(Composition { parts: Vec::new() });
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Composition::new(parts)
    }
}

/// `S_n` listed in lexicographic order, with descent and recoil bitmasks.
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Permutation>,
    descent_masks: Vec<u64>,
    recoil_masks: Vec<u64>,
}

impl SymmetricGroup {
    /// Builds the table; `n` must satisfy `n <= 12`.
    pub fn new(n: usize) -> Self {
        assert!(n <= 12, "S_{n} is too large to enumerate");
        let elements: Vec<Permutation> = if n == 0 {
            vec![Permutation::empty()]
        } else {
            (1..=n as u32)
                .permutations(n)
                .map(|word| Permutation { word })
                .collect()
        };
        let descent_masks = elements
            .iter()
            .map(|p| p.descents().as_mask().unwrap())
            .collect();
        let recoil_masks = elements
            .iter()
            .map(|p| p.recoils().as_mask().unwrap())
            .collect();
        SymmetricGroup {
            n,
            elements,
            descent_masks,
            recoil_masks,
        }
    }

    /// Shared table for `S_n`, built once per process.
    pub fn cached(n: usize) -> Arc<SymmetricGroup> {
        static TABLES: OnceLock<Mutex<HashMap<usize, Arc<SymmetricGroup>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        if let Some(t) = tables.lock().unwrap().get(&n) {
            return Arc::clone(t);
        }
        let table = Arc::new(SymmetricGroup::new(n));
        tables
            .lock()
            .unwrap()
            .entry(n)
            .or_insert(table)
            .clone()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn descent_masks(&self) -> &[u64] {
        &self.descent_masks
    }

    pub fn recoil_masks(&self) -> &[u64] {
        &self.recoil_masks
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
