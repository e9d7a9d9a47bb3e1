use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::echelon::{random_poly, EchelonDatum};
use crate::lattice::{is_member, FracEntry};
use crate::poly::{Monomial, Poly};

use super::{ModError, ModificationChain};

/// A map `φ: R^r → R` to the trivialized line, given by its row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapToLine {
    pub row: Vec<Poly>,
}

/// `φ(v)` over the fraction field.
pub fn apply_map(phi: &MapToLine, v: &[FracEntry]) -> FracEntry {
    let ring = phi.row[0].ring();
    v.iter()
        .zip(&phi.row)
        .fold(FracEntry::zero(ring), |acc, (e, p)| acc.add(&e.mul_poly(p)))
        .normalized()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub i: usize,
    pub divisor: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub hypothesis: Vec<LevelCheck>,
    /// `φ` on the basis columns of `Mod(χ, E)`.
    pub extension: Vec<String>,
}

fn check_rank(d: &EchelonDatum, phi: &MapToLine) -> Result<(), ModError> {
    if phi.row.len() != d.rank() {
        return Err(crate::lattice::LatticeError::DimensionMismatch {
            expected: d.rank(),
            found: phi.row.len(),
        }
        .into());
    }
    if phi.row.iter().any(|p| !p.ring().same(d.ring())) {
        return Err(crate::lattice::LatticeError::RingMismatch.into());
    }
    Ok(())
}

/// Checks `φ(E^i) ⊆ (D_i)` on the basis of every `E^i`, failing at the least `i`.
pub fn check_hypothesis(d: &EchelonDatum, phi: &MapToLine) -> Result<Vec<LevelCheck>, ModError> {
    check_rank(d, phi)?;
    let mut out = Vec::with_capacity(d.len());
    for i in 1..=d.len() {
        let big_d = d.chain().big_d(i);
        let mut values = Vec::new();
        for (k, col) in d.level(i).columns().iter().enumerate() {
            let value = apply_map(phi, col);
            if value.div_monomial(&big_d).normalized().as_poly().is_none() {
                return Err(ModError::HypothesisFail {
                    i,
                    column: k,
                    witness: format!(
                        "({})",
                        col.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    value: value.to_string(),
                });
            }
            values.push(value.to_string());
        }
        out.push(LevelCheck {
            i,
            divisor: d.ring().format_monomial(&big_d),
            values,
        });
    }
    Ok(out)
}

/// Extends `φ` to `Mod(χ, E)` once the hypothesis holds; a non-polynomial
/// value on `Mod(χ, E)` is an internal breach.
pub fn extend_map(
    d: &EchelonDatum,
    c: &ModificationChain,
    phi: &MapToLine,
) -> Result<ExtensionReport, ModError> {
    let hypothesis = check_hypothesis(d, phi)?;
    let mut extension = Vec::with_capacity(d.rank());
    for (k, col) in c.last().columns().iter().enumerate() {
        let value = apply_map(phi, col);
        if value.as_poly().is_none() {
            return Err(ModError::ExtensionFail {
                column: k,
                value: value.to_string(),
            });
        }
        extension.push(value.to_string());
    }
    Ok(ExtensionReport {
        hypothesis,
        extension,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRecord {
    pub trial: usize,
    pub vector: Vec<String>,
    pub denominator: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    /// Trials that produced an enlargement `E_m + R·v/μ ≠ E_m`.
    pub candidates: usize,
    /// Enlargements to which `φ` extends although they leave `Mod(χ, E)`.
    pub counterexamples: Vec<ProbeRecord>,
    pub consistent: bool,
}

/// `Some(value)` when `v/μ ∉ E_m`, with `φ(v/μ)`; `None` when `v/μ ∈ E_m`.
pub fn probe_candidate(
    c: &ModificationChain,
    phi: &MapToLine,
    v: &[Poly],
    mu: &Monomial,
) -> Result<Option<FracEntry>, ModError> {
    let w: Vec<FracEntry> = v
        .iter()
        .map(|p| FracEntry::poly(p.clone()).div_monomial(mu).normalized())
        .collect();
    if is_member(&w, c.last())? {
        return Ok(None);
    }
    Ok(Some(apply_map(phi, &w)))
}

const ATTEMPTS: usize = 16;

/// Tries `trials` seeded enlargements `E_m + R·v/μ` with `μ` a monomial in the
/// `y`-variables and records those to which `φ` extends. Trial `k` draws
/// from its own generator seeded with `seed + k`.
pub fn maximality_probe(
    d: &EchelonDatum,
    c: &ModificationChain,
    phi: &MapToLine,
    seed: u64,
    trials: usize,
) -> Result<ProbeReport, ModError> {
    check_rank(d, phi)?;
    let ring = d.ring();
    let n = ring.nvars();
    let mut y_vars: Vec<usize> = d
        .chain()
        .steps()
        .iter()
        .flat_map(|s| s.y.support().collect::<Vec<_>>())
        .collect();
    y_vars.sort_unstable();
    y_vars.dedup();
    // per trial: None if no enlargement was found, Some((extends, record)) otherwise
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<(bool, ProbeRecord)>, ModError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            for _ in 0..ATTEMPTS {
                let mut e = vec![0u32; n];
                for &v in &y_vars {
                    e[v] = rng.gen_range(0..=3);
                }
                let mu = Monomial::from_exponents(e);
                let v: Vec<Poly> = (0..d.rank())
                    .map(|_| random_poly(ring, &mut rng, 2))
                    .collect();
                let Some(value) = probe_candidate(c, phi, &v, &mu)? else {
                    continue;
                };
                let record = ProbeRecord {
                    trial,
                    vector: v.iter().map(ToString::to_string).collect(),
                    denominator: ring.format_monomial(&mu),
                    value: value.to_string(),
                };
                return Ok(Some((value.as_poly().is_some(), record)));
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let candidates = outcomes.iter().flatten().count();
    let counterexamples: Vec<ProbeRecord> = outcomes
        .into_iter()
        .flatten()
        .filter_map(|(extends, rec)| extends.then_some(rec))
        .collect();
    Ok(ProbeReport {
        trials,
        candidates,
        consistent: counterexamples.is_empty(),
        counterexamples,
    })
}
