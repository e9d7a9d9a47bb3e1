//! Collections of transverse echelon data on one lattice, the induced datum
//! `Mod(χ, χ′)` and iterated (poly-echelon) modification.
//!
//! All lattices involved must be diagonal in one common basis, found among
//! the adapted bases of the individual data; intersections and sums are then
//! entrywise on monomials.

#[cfg(test)]
mod tests;

use rayon::prelude::*;
use serde::Serialize;

use crate::echelon::{decompose, validate_datum, DatumError, EchelonDatum, Violation};
use crate::lattice::{adjugate, lattice_equal, FracEntry, LatticeBasis, LatticeError};
use crate::modification::diag::{self, meet, DiagDatum};
use crate::modification::ModError;
use crate::poly::{LaurentMonomial, Poly, Ring};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyEchelonError {
    #[error("empty collection")]
    Empty,
    #[error("data live on different rings or ranks")]
    Incompatible,
    #[error("NoCommonAdaptedBasis: datum {0} is not diagonal in any candidate basis")]
    NoCommonAdaptedBasis(usize),
    #[error("NotTransverse: {0}")]
    NotTransverse(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// A collection of echelon data on the same `R^r`.
#[derive(Clone, Debug)]
pub struct PolyEchelonDatum {
    data: Vec<EchelonDatum>,
}

/// The data written in a common basis `U`.
#[derive(Clone, Debug)]
pub struct CommonBasis {
    pub basis: Vec<Vec<Poly>>,
    pub data: Vec<DiagDatum>,
}

impl PolyEchelonDatum {
    pub fn new(data: Vec<EchelonDatum>) -> Result<PolyEchelonDatum, PolyEchelonError> {
        let first = data.first().ok_or(PolyEchelonError::Empty)?;
        if data
            .iter()
            .any(|d| !d.ring().same(first.ring()) || d.rank() != first.rank())
        {
            return Err(PolyEchelonError::Incompatible);
        }
        Ok(PolyEchelonDatum { data })
    }

    pub fn data(&self) -> &[EchelonDatum] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn ring(&self) -> &Ring {
        self.data[0].ring()
    }

    pub fn rank(&self) -> usize {
        self.data[0].rank()
    }

    /// A basis in which every `E_j^i` is diagonal: the identity or the
    /// adapted basis of one of the data, whichever works first.
    pub fn common_basis(&self) -> Result<CommonBasis, PolyEchelonError> {
        let ring = self.ring();
        let r = self.rank();
        let identity: Vec<Vec<Poly>> = (0..r)
            .map(|j| {
                (0..r)
                    .map(|i| {
                        if i == j {
                            Poly::one(ring)
                        } else {
                            Poly::zero(ring)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut candidates = vec![identity];
        for d in &self.data {
            candidates.push(decompose(d)?.basis);
        }
        let mut worst = 0;
        for basis in candidates {
            match self.diagonalize(&basis)? {
                Ok(data) => return Ok(CommonBasis { basis, data }),
                Err(k) => worst = worst.max(k),
            }
        }
        Err(PolyEchelonError::NoCommonAdaptedBasis(worst))
    }

    /// `Err(k)` names the first datum not diagonal in `basis`.
    fn diagonalize(
        &self,
        basis: &[Vec<Poly>],
    ) -> Result<Result<Vec<DiagDatum>, usize>, PolyEchelonError> {
        let ring = self.ring();
        let n = ring.nvars();
        let r = self.rank();
        let Ok(u) = LatticeBasis::from_poly_columns(ring, basis, "U") else {
            return Ok(Err(0));
        };
        if !lattice_equal(&u, &LatticeBasis::standard(ring, r))? {
            return Ok(Err(0));
        }
        let rows: Vec<Vec<Poly>> = (0..r)
            .map(|i| (0..r).map(|j| basis[j][i].clone()).collect())
            .collect();
        let adj = adjugate(ring, &rows);
        let mut out = Vec::with_capacity(self.len());
        for (k, d) in self.data.iter().enumerate() {
            let mut levels = vec![vec![LaurentMonomial::one(n); r]];
            for l in d.levels() {
                match diagonal_in(&adj, basis, l)? {
                    Some(v) => levels.push(v),
                    None => return Ok(Err(k)),
                }
            }
            out.push(DiagDatum {
                chain: d.chain().clone(),
                levels,
            });
        }
        Ok(Ok(out))
    }
}

/// The Laurent monomials `m` with `l = U·diag(m)`, if there are any.
fn diagonal_in(
    adj: &[Vec<Poly>],
    basis: &[Vec<Poly>],
    l: &LatticeBasis,
) -> Result<Option<Vec<LaurentMonomial>>, LatticeError> {
    let ring = l.ring();
    let r = l.rank();
    let mut diag = Vec::with_capacity(r);
    for row in adj {
        let mut content: Option<LaurentMonomial> = None;
        for col in l.columns() {
            let e = col
                .iter()
                .zip(row)
                .fold(FracEntry::zero(ring), |acc, (x, a)| acc.add(&x.mul_poly(a)))
                .normalized();
            if let Some(c) = e.numerator().monomial_content() {
                let lm = c.to_laurent().div_monomial(e.denominator());
                content = Some(match content {
                    Some(prev) => prev.gcd(&lm),
                    None => lm,
                });
            }
        }
        match content {
            Some(c) => diag.push(c),
            None => return Ok(None),
        }
    }
    let candidate = LatticeBasis::from_adapted(ring, basis, &diag, "candidate")?;
    Ok(lattice_equal(&candidate, l)?.then_some(diag))
}

/// `E^i ∩ F` for every level `i`, over the base `E^0 ∩ F`.
fn restrict(d: &DiagDatum, f: &[LaurentMonomial]) -> DiagDatum {
    DiagDatum {
        chain: d.chain.clone(),
        levels: d.levels.iter().map(|l| meet(l, f)).collect(),
    }
}

/// The same filtration written relative to its base: `E^i·diag(1/b)` with
/// `E^0` standard.
fn rebase(d: &DiagDatum) -> Result<EchelonDatum, PolyEchelonError> {
    let ring = d.chain.ring();
    let r = d.levels[0].len();
    let id: Vec<Vec<Poly>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|i| {
                    if i == j {
                        Poly::one(ring)
                    } else {
                        Poly::zero(ring)
                    }
                })
                .collect()
        })
        .collect();
    let levels = d.levels[1..]
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let rel: Vec<LaurentMonomial> =
                l.iter().zip(&d.levels[0]).map(|(a, b)| a.div(b)).collect();
            LatticeBasis::from_adapted(ring, &id, &rel, format!("E^{}", i + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EchelonDatum::new(d.chain.clone(), levels)?)
}

fn validated(d: &DiagDatum) -> Result<Option<Violation>, PolyEchelonError> {
    let report = validate_datum(&rebase(d)?)?;
    Ok(report.violations.into_iter().next())
}

fn modify_diag(d: &DiagDatum) -> Result<Vec<LaurentMonomial>, PolyEchelonError> {
    let run =
        diag::run(d).map_err(|(stage, column)| ModError::NonPrincipalSum { stage, column })?;
    Ok(run.last().to_vec())
}

/// `Mod(χ, χ′)`: the datum on `Mod(χ, E)` whose level `k` is `Mod(χ, F′^k)`,
/// with the divisors of `χ′`.
pub fn induced_diag(chi: &DiagDatum, chi_prime: &DiagDatum) -> Result<DiagDatum, PolyEchelonError> {
    let levels = chi_prime
        .levels
        .iter()
        .map(|f| modify_diag(&restrict(chi, f)))
        .collect::<Result<Vec<_>, _>>()?;
    let out = DiagDatum {
        chain: chi_prime.chain.clone(),
        levels,
    };
    if let Some(v) = validated(&out)? {
        return Err(PolyEchelonError::NotTransverse(format!(
            "induced datum fails: {v}"
        )));
    }
    Ok(out)
}

/// An echelon datum on a lattice other than `R^r`.
#[derive(Clone, Debug)]
pub struct InducedDatum {
    pub base: LatticeBasis,
    /// `F^1, …, F^m` as sublattices of `base`.
    pub levels: Vec<LatticeBasis>,
    /// The same datum in the coordinates of a basis of `base`.
    pub relative: EchelonDatum,
}

/// `Mod(χ, χ′)` in original coordinates.
pub fn induced_datum(
    chi: &EchelonDatum,
    chi_prime: &EchelonDatum,
) -> Result<InducedDatum, PolyEchelonError> {
    let p = PolyEchelonDatum::new(vec![chi.clone(), chi_prime.clone()])?;
    let common = p.common_basis()?;
    let out = induced_diag(&common.data[0], &common.data[1])?;
    let ring = p.ring();
    let base = LatticeBasis::from_adapted(ring, &common.basis, &out.levels[0], "Mod")?;
    let levels = out.levels[1..]
        .iter()
        .enumerate()
        .map(|(k, l)| LatticeBasis::from_adapted(ring, &common.basis, l, format!("F^{}", k + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InducedDatum {
        base,
        levels,
        relative: rebase(&out)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedCheck {
    /// Datum whose filtration is intersected.
    pub datum: usize,
    /// Datum and level supplying the lattice it is intersected with.
    pub with: usize,
    pub level: usize,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalityReport {
    /// Pairs of data whose divisor variables meet.
    pub shared_variables: Vec<(usize, usize)>,
    pub induced: Vec<InducedCheck>,
    pub transverse: bool,
}

/// Disjointness of divisor variables for all pairs, and for every ordered
/// pair `(a, b)` and level `k` of `b` that `(E_a^i ∩ E_b^k)_i` is an echelon
/// datum on `E_b^k`.
pub fn check_transverse(p: &PolyEchelonDatum) -> Result<TransversalityReport, PolyEchelonError> {
    let vars: Vec<Vec<usize>> = p.data.iter().map(|d| d.chain().divisor_vars()).collect();
    let mut shared_variables = Vec::new();
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if vars[a].iter().any(|v| vars[b].contains(v)) {
                shared_variables.push((a, b));
            }
        }
    }
    let mut induced = Vec::new();
    if p.len() > 1 {
        let common = p.common_basis()?;
        for a in 0..p.len() {
            for b in (0..p.len()).filter(|&b| b != a) {
                for (k, f) in common.data[b].levels.iter().enumerate() {
                    let violation =
                        validated(&restrict(&common.data[a], f))?.map(|v| v.to_string());
                    induced.push(InducedCheck {
                        datum: a,
                        with: b,
                        level: k,
                        violation,
                    });
                }
            }
        }
    }
    let transverse = shared_variables.is_empty() && induced.iter().all(|c| c.violation.is_none());
    Ok(TransversalityReport {
        shared_variables,
        induced,
        transverse,
    })
}

/// `E = M_0 ⊆ M_1 ⊆ … ⊆ M_k` for one ordering of the data.
#[derive(Clone, Debug)]
pub struct PolyModificationState {
    pub order: Vec<usize>,
    pub stages: Vec<LatticeBasis>,
    pub diagonal: Vec<Vec<LaurentMonomial>>,
}

impl PolyModificationState {
    pub fn last(&self) -> &LatticeBasis {
        self.stages.last().expect("M_0 is always present")
    }
}

fn run_order(
    common: &CommonBasis,
    order: &[usize],
) -> Result<Vec<Vec<LaurentMonomial>>, PolyEchelonError> {
    let mut pending: Vec<DiagDatum> = order.iter().map(|&k| common.data[k].clone()).collect();
    let mut stages = vec![common.data[order[0]].levels[0].clone()];
    while !pending.is_empty() {
        let chi = pending.remove(0);
        stages.push(modify_diag(&chi)?);
        pending = pending
            .iter()
            .map(|other| induced_diag(&chi, other))
            .collect::<Result<_, _>>()?;
    }
    Ok(stages)
}

/// Poly-echelon modification in the given order (a permutation of the data).
pub fn poly_modify(
    p: &PolyEchelonDatum,
    order: &[usize],
) -> Result<PolyModificationState, PolyEchelonError> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..p.len()).collect::<Vec<_>>() {
        return Err(DatumError::BadParameters(format!(
            "{order:?} is not an ordering of {} data",
            p.len()
        ))
        .into());
    }
    let report = check_transverse(p)?;
    if !report.transverse {
        return Err(PolyEchelonError::NotTransverse(describe_failure(&report)));
    }
    let common = p.common_basis()?;
    state(p, &common, order)
}

fn state(
    p: &PolyEchelonDatum,
    common: &CommonBasis,
    order: &[usize],
) -> Result<PolyModificationState, PolyEchelonError> {
    let diagonal = run_order(common, order)?;
    let stages = diagonal
        .iter()
        .enumerate()
        .map(|(j, v)| LatticeBasis::from_adapted(p.ring(), &common.basis, v, format!("M_{j}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyModificationState {
        order: order.to_vec(),
        stages,
        diagonal,
    })
}

fn describe_failure(r: &TransversalityReport) -> String {
    if let Some((a, b)) = r.shared_variables.first() {
        return format!("data {a} and {b} share divisor variables");
    }
    match r.induced.iter().find(|c| c.violation.is_some()) {
        Some(c) => format!(
            "datum {} restricted to level {} of datum {}: {}",
            c.datum,
            c.level,
            c.with,
            c.violation.as_deref().unwrap_or_default()
        ),
        None => String::new(),
    }
}

/// All orderings of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for idx in 0..rest.len() {
            let v = rest.remove(idx);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub orders: Vec<Vec<usize>>,
    pub agree: bool,
    /// Two orderings with different results.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub result: Vec<Vec<String>>,
}

const SAMPLED_ORDERS: usize = 6;

/// Runs every ordering (up to three data, otherwise a seeded sample) and
/// compares the final lattices.
pub fn order_independence_check(
    p: &PolyEchelonDatum,
    seed: u64,
) -> Result<OrderReport, PolyEchelonError> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let report = check_transverse(p)?;
    if !report.transverse {
        return Err(PolyEchelonError::NotTransverse(describe_failure(&report)));
    }
    let common = p.common_basis()?;
    let orders = if p.len() <= 3 {
        permutations(p.len())
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut orders = vec![(0..p.len()).collect::<Vec<_>>()];
        while orders.len() < SAMPLED_ORDERS {
            let mut o: Vec<usize> = (0..p.len()).collect();
            o.shuffle(&mut rng);
            orders.push(o);
        }
        orders
    };
    let states = orders
        .par_iter()
        .map(|o| state(p, &common, o))
        .collect::<Result<Vec<_>, _>>()?;
    let first = &states[0];
    let mut witness = None;
    for s in &states[1..] {
        if !lattice_equal(first.last(), s.last())? {
            witness = Some((first.order.clone(), s.order.clone()));
            break;
        }
    }
    Ok(OrderReport {
        orders,
        agree: witness.is_none(),
        witness,
        result: first.last().to_rows(),
    })
}
