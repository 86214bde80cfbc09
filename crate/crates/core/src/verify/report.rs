use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::linalg::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Divisibility,
    Commutation,
    Surjectivity,
    RibbonDerivation,
    BlockStructure,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Divisibility => "divisibility",
            Claim::Commutation => "commutation",
            Claim::Surjectivity => "surjectivity",
            Claim::RibbonDerivation => "ribbon-derivation",
            Claim::BlockStructure => "block-structure",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailingTerm {
    pub degree: usize,
    pub coefficient: String,
}

/// A basis element where the two sides of an identity disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Divisibility {
        p_n: IntPolynomial,
        p_next: IntPolynomial,
        quotient: Option<IntPolynomial>,
        quotient_degree: Option<usize>,
        p_n_trailing: Option<TrailingTerm>,
    },
    Commutation {
        checked: usize,
        sampled: bool,
        seed: Option<u64>,
        failure: Option<Mismatch>,
    },
    Surjectivity {
        rows: usize,
        cols: usize,
        rank: usize,
        kernel_dim: usize,
    },
    RibbonDerivation {
        compositions_checked: usize,
        failure: Option<Mismatch>,
    },
    BlockStructure {
        kernel_dim: usize,
        vectors_checked: usize,
        dimension_consistent: bool,
        /// Kernel basis vector whose `Φ`-image leaves the kernel.
        failure: Option<Vec<String>>,
    },
}

/// Run-dependent numbers; kept out of the serialized report so that output
/// bytes do not depend on timing, threads or cache state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub wall_time: Duration,
    pub primes: usize,
    pub cache_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub claim: Claim,
    pub verified: bool,
    pub witness: Witness,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let status = if self.verified { "verified" } else { "FAILED" };
        let mut s = format!("{} n={}: {status}\n", self.claim, self.n);
        match &self.witness {
            Witness::Divisibility {
                p_n,
                p_next,
                quotient,
                quotient_degree,
                p_n_trailing,
            } => {
                s += &format!("P_n degree {}\n", p_n.degree().unwrap_or(0));
                s += &format!("P_n+1 degree {}\n", p_next.degree().unwrap_or(0));
                if let Some(t) = p_n_trailing {
                    s += &format!("P_n trailing term {}·x^{}\n", t.coefficient, t.degree);
                }
                match (quotient, quotient_degree) {
                    (Some(q), Some(d)) => s += &format!("quotient degree {d}\nquotient {q}\n"),
                    _ => s += &format!("remainder nonzero; P_n = {p_n}\n"),
                }
            }
            Witness::Commutation {
                checked,
                sampled,
                seed,
                failure,
            } => {
                let mode = match (sampled, seed) {
                    (true, Some(seed)) => format!("sampled, seed {seed}"),
                    _ => "exhaustive".to_string(),
                };
                s += &format!("basis elements checked {checked} ({mode})\n");
                if let Some(m) = failure {
                    s += &mismatch_text(m);
                }
            }
            Witness::Surjectivity {
                rows,
                cols,
                rank,
                kernel_dim,
            } => {
                s += &format!("derivation matrix {rows}x{cols}\nrank {rank}\nkernel dimension {kernel_dim}\n");
            }
            Witness::RibbonDerivation {
                compositions_checked,
                failure,
            } => {
                s += &format!("compositions checked {compositions_checked}\n");
                if let Some(m) = failure {
                    s += &mismatch_text(m);
                }
            }
            Witness::BlockStructure {
                kernel_dim,
                vectors_checked,
                dimension_consistent,
                failure,
            } => {
                s += &format!(
                    "kernel dimension {kernel_dim}\nkernel vectors checked {vectors_checked}\ndimension consistent {dimension_consistent}\n"
                );
                if let Some(v) = failure {
                    s += &format!("image leaves kernel for vector [{}]\n", v.join(", "));
                }
            }
        }
        s
    }
}

fn mismatch_text(m: &Mismatch) -> String {
    format!("counterexample {}\n  lhs {}\n  rhs {}\n", m.input, m.lhs, m.rhs)
}
