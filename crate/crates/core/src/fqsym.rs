//! Free quasi-symmetric functions in the `F` basis.
//!
//! Elements are finite integer combinations of `F_σ`, possibly mixing degrees.
//! The product is the shifted shuffle, `∂ = Σ ∂_i` lowers degree by one and
//! `Φ` sends `F_σ` to the sum of the `F_τ` with `Rec(τ) ⊆ Des(σ)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::{shifted_shuffle, Composition, Permutation, SymmetricGroup};

/// A finitely supported integer combination of basis elements `F_σ`.
///
/// Terms are kept sorted (degree, then word) and never carry a zero
/// coefficient, so derived equality is coefficient-wise equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FQSymElement {
    terms: BTreeMap<Permutation, BigInt>,
}

impl FQSymElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `F_∅`, the unit.
    pub fn one() -> Self {
        Self::basis(Permutation::empty())
    }

    pub fn basis(p: Permutation) -> Self {
        Self::monomial(p, BigInt::one())
    }

    pub fn monomial(p: Permutation, c: BigInt) -> Self {
        let mut x = Self::zero();
        x.add_term(p, c);
        x
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Permutation, C)>,
        C: Into<BigInt>,
    {
        let mut x = Self::zero();
        for (p, c) in terms {
            x.add_term(p, c.into());
        }
        x
    }

    pub fn add_term(&mut self, p: Permutation, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &FQSymElement, c: &BigInt) {
        for (p, d) in &other.terms {
            self.add_term(p.clone(), c * d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Permutation) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigInt)> {
        self.terms.iter()
    }

    /// True when every supporting permutation has degree `d` (vacuously for zero).
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|p| p.degree() == d)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FQSymElement {
            terms: self.terms.iter().map(|(p, d)| (p.clone(), c * d)).collect(),
        }
    }

    pub fn multiply(&self, other: &FQSymElement) -> FQSymElement {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for g in shifted_shuffle(a, b) {
                    out.add_term(g, c.clone());
                }
            }
        }
        out
    }

    /// `∂_i`, applied termwise; terms of degree below `i` contribute nothing.
    pub fn partial_derivation(&self, i: usize) -> FQSymElement {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            if i == 0 || i > p.degree() {
                continue;
            }
            let s = p.sign_at(i).expect("letter in range");
            if s != 0 {
                out.add_term(p.delete_letter(i).expect("letter in range"), c * s);
            }
        }
        out
    }

    /// `∂ = Σ_i ∂_i`.
    pub fn derivation(&self) -> FQSymElement {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            for i in 1..=p.degree() {
                let s = p.sign_at(i).expect("letter in range");
                if s != 0 {
                    out.add_term(p.delete_letter(i).expect("letter in range"), c * s);
                }
            }
        }
        out
    }

    /// `Φ`, summing over `S_n` with the recoil filter. Degrees above 12 panic.
    pub fn phi(&self) -> FQSymElement {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            let group = SymmetricGroup::cached(p.degree());
            let des = p.descents().as_mask().expect("degree fits a mask");
            for (tau, &rec) in group.elements().iter().zip(group.recoil_masks()) {
                if rec & !des == 0 {
                    out.add_term(tau.clone(), c.clone());
                }
            }
        }
        out
    }

    /// Canonical text rendering such as `-2·F[21] + F[132]`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `S^I = F_{12..i_1} F_{12..i_2} ··· F_{12..i_k}`.
pub fn ribbon_complete(c: &Composition) -> FQSymElement {
    c.parts()
        .iter()
        .fold(FQSymElement::one(), |acc, &part| {
            acc.multiply(&FQSymElement::basis(Permutation::identity(part)))
        })
}

/// `Φ(F_σ)` through the factorization `S^{C(σ)}`.
pub fn phi_basis(p: &Permutation) -> FQSymElement {
    ribbon_complete(&p.descent_composition())
}

/// `Σ_j (i_j - 2) S^{I↓j}` where `I↓j` lowers part `j` by one, dropping it
/// when it reaches zero.
pub fn derivation_of_ribbon(c: &Composition) -> FQSymElement {
    let mut out = FQSymElement::zero();
    for (j, &part) in c.parts().iter().enumerate() {
        let coeff = BigInt::from(part as i64 - 2);
        if coeff.is_zero() {
            continue;
        }
        let mut lowered = c.parts().to_vec();
        if part == 1 {
            lowered.remove(j);
        } else {
            lowered[j] -= 1;
        }
        let lowered = Composition::new(lowered).expect("positive parts");
        out.add_scaled(&ribbon_complete(&lowered), &coeff);
    }
    out
}

impl fmt::Display for FQSymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "F[{p}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FQSymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    word: Permutation,
    coefficient: String,
}

impl Serialize for FQSymElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(p, c)| JsonTerm {
            word: p.clone(),
            coefficient: c.to_string(),
        }))
    }
}

impl<'de> Deserialize<'de> for FQSymElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<JsonTerm>::deserialize(d)?;
        let mut x = FQSymElement::zero();
        for t in raw {
            let c: BigInt = t.coefficient.parse().map_err(serde::de::Error::custom)?;
            x.add_term(t.word, c);
        }
        Ok(x)
    }
}

impl Add for &FQSymElement {
    type Output = FQSymElement;
    fn add(self, rhs: &FQSymElement) -> FQSymElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &FQSymElement {
    type Output = FQSymElement;
    fn sub(self, rhs: &FQSymElement) -> FQSymElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Neg for &FQSymElement {
    type Output = FQSymElement;
    fn neg(self) -> FQSymElement {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &FQSymElement {
    type Output = FQSymElement;
    fn mul(self, rhs: &FQSymElement) -> FQSymElement {
        self.multiply(rhs)
    }
}
