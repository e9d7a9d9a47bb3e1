//! Echelon data: a descending filtration `R^r = E^0 ⊇ E^1 ⊇ … ⊇ E^m` with a
//! divisor chain, its validation, the echelon-decomposition normal form and
//! its inverse, and seeded instance generators.

mod chain;
mod decompose;
mod generate;
mod validate;

#[cfg(test)]
mod tests;

use std::fmt;

use serde::Serialize;

use crate::lattice::{LatticeBasis, LatticeError};
use crate::poly::Ring;

pub use chain::{ChainStep, DivisorChain};
pub use decompose::{coefficient, decompose, reassemble, EchelonDecomposition};
pub use generate::{
    default_ring, normal_form_levels, random_datum, random_datum_with_basis, random_poly,
    scalar_datum, ChainStyle, GenParams, Generated, Scramble,
};
pub use validate::{validate_datum, StepVerdict, ValidationReport};

/// A failed clause of the echelon-datum definition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// `E^i ⊄ E^{i-1}`.
    Containment { i: usize },
    /// `t_i·E^{i-1} ⊄ E^i`.
    TwistedContainment { i: usize },
    /// `y_i ∤ t_i`.
    Effectivity { i: usize },
    /// `D_i` and `δ_i − D_i` share a component.
    CommonComponent { i: usize },
    /// `E^i / t_i E^{i-1}` is not a free split submodule of `E^j ⊗ R/(t_i)`.
    Persistence { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Containment { i } => write!(
                f,
                "ContainmentViolation(i={i}): E^{i} not inside E^{}",
                i - 1
            ),
            Violation::TwistedContainment { i } => {
                write!(
                    f,
                    "ContainmentViolation(i={i}): t_{i}·E^{} not inside E^{i}",
                    i - 1
                )
            }
            Violation::Effectivity { i } => write!(
                f,
                "EffectivityViolation(i={i}): y_{i} does not divide t_{i}"
            ),
            Violation::CommonComponent { i } => {
                write!(
                    f,
                    "CommonComponentViolation(i={i}): D_{i} meets the complementary divisor"
                )
            }
            Violation::Persistence { i, j } => write!(f, "PersistenceViolation(i={i}, j={j})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("{0}")]
    Invalid(Violation),
    #[error("lattice error: {0}")]
    Lattice(#[from] LatticeError),
    #[error("rank vector sums to {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error("decomposition does not reassemble to level {i} although the datum validates")]
    DecompositionBreach { i: usize },
}

/// An echelon datum on the standard lattice `R^r`.
#[derive(Clone, Debug)]
pub struct EchelonDatum {
    ring: Ring,
    chain: DivisorChain,
    /// `E^0, …, E^m`; `E^0` is standard.
    filtration: Vec<LatticeBasis>,
}

impl EchelonDatum {
    /// Builds from `E^1, …, E^m`; `E^0 = R^r` is implied.
    pub fn new(chain: DivisorChain, levels: Vec<LatticeBasis>) -> Result<EchelonDatum, DatumError> {
        let ring = chain.ring().clone();
        if chain.is_empty() {
            return Err(DatumError::Malformed(
                "chain length must be at least 1".into(),
            ));
        }
        if levels.len() != chain.len() {
            return Err(DatumError::Malformed(format!(
                "{} filtration levels for a chain of length {}",
                levels.len(),
                chain.len()
            )));
        }
        let rank = levels[0].rank();
        for l in &levels {
            if l.rank() != rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: rank,
                    found: l.rank(),
                }
                .into());
            }
            if !l.ring().same(&ring) {
                return Err(LatticeError::RingMismatch.into());
            }
        }
        let mut filtration = Vec::with_capacity(levels.len() + 1);
        filtration.push(LatticeBasis::standard(&ring, rank).with_label("E^0"));
        filtration.extend(
            levels
                .into_iter()
                .enumerate()
                .map(|(k, l)| l.with_label(format!("E^{}", k + 1))),
        );
        Ok(EchelonDatum {
            ring,
            chain,
            filtration,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.filtration[0].rank()
    }

    /// Length `m`.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn chain(&self) -> &DivisorChain {
        &self.chain
    }

    /// `E^i` for `0 ≤ i ≤ m`.
    pub fn level(&self, i: usize) -> &LatticeBasis {
        &self.filtration[i]
    }

    pub fn filtration(&self) -> &[LatticeBasis] {
        &self.filtration
    }

    /// `E^1, …, E^m`.
    pub fn levels(&self) -> &[LatticeBasis] {
        &self.filtration[1..]
    }
}
