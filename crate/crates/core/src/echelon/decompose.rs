use crate::lattice::{lattice_equal, LatticeBasis, LatticeError};
use crate::poly::{LaurentMonomial, Monomial, Poly, Scalar};

use super::{validate_datum, DatumError, DivisorChain, EchelonDatum};

/// An adapted basis `U = [A_0 | A_1 | … | A_m]` of `R^r` with block ranks
/// `r_0, …, r_m`, such that
/// `E^i = A_0 ⊕ … ⊕ A_{m-i} ⊕ t_i A_{m-i+1} ⊕ … ⊕ (t_i⋯t_1) A_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonDecomposition {
    pub ranks: Vec<usize>,
    /// Columns of `U`, grouped by block.
    pub basis: Vec<Vec<Poly>>,
}

impl EchelonDecomposition {
    /// Length `m` of the filtration this decomposes.
    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Block index `j` of every column of `U`.
    pub fn blocks(&self) -> Vec<usize> {
        self.ranks
            .iter()
            .enumerate()
            .flat_map(|(j, &r)| std::iter::repeat_n(j, r))
            .collect()
    }

    /// Level `m - j` of every column: the last `E^i` containing it unscaled.
    pub fn levels(&self) -> Vec<usize> {
        let m = self.len();
        self.blocks().into_iter().map(|j| m - j).collect()
    }
}

/// Coefficient of a level-`level` vector in `E^i`: `∏_{level < l ≤ i} t_l`.
pub fn coefficient(chain: &DivisorChain, i: usize, level: usize) -> Monomial {
    if i <= level {
        chain.ring().one_monomial()
    } else {
        chain.t_product(level, i)
    }
}

/// Linear independence of constant-term vectors over the coefficient field,
/// i.e. independence modulo the maximal ideal at the origin.
struct ResidueSpan {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl ResidueSpan {
    fn new() -> Self {
        ResidueSpan { rows: Vec::new() }
    }

    fn try_add(&mut self, v: &[Poly]) -> bool {
        let mut w: Vec<Scalar> = v.iter().map(Poly::constant_term).collect();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].div(&row[*p]);
                for (a, b) in w.iter_mut().zip(row) {
                    *a = a.sub(&f.mul(b));
                }
            }
        }
        match w.iter().position(|a| !a.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

fn poly_columns(l: &LatticeBasis) -> Option<Vec<Vec<Poly>>> {
    l.poly_columns()
}

/// Finds an echelon decomposition.
///
/// Vectors are chosen level by level from the bottom of the filtration: the
/// level-`i` block consists of basis columns of `E^i` that stay independent
/// modulo the maximal ideal together with everything chosen below. Level-0
/// vectors are taken from columns of `E^i` divided by `t_1⋯t_i` where
/// possible, and from the standard basis otherwise. The result is accepted
/// only if it reassembles every `E^i`; otherwise the validator names the
/// least violated clause.
pub fn decompose(d: &EchelonDatum) -> Result<EchelonDecomposition, DatumError> {
    let chain = d.chain();
    if let Some(v) = chain.violations().into_iter().next() {
        return Err(DatumError::Invalid(v));
    }
    let r = d.rank();
    let m = d.len();
    let ring = d.ring();
    let Some(cols) = d
        .filtration()
        .iter()
        .map(poly_columns)
        .collect::<Option<Vec<_>>>()
    else {
        return Err(diagnose(d, 1));
    };

    let mut span = ResidueSpan::new();
    let mut by_level: Vec<Vec<Vec<Poly>>> = vec![Vec::new(); m + 1];
    for level in (1..=m).rev() {
        if chain.t(level).is_one() {
            continue;
        }
        for c in &cols[level] {
            if span.try_add(c) {
                by_level[level].push(c.clone());
            }
        }
    }
    let mut candidates: Vec<Vec<Poly>> = Vec::new();
    for (i, level_cols) in cols.iter().enumerate().skip(1) {
        let c = coefficient(chain, i, 0);
        if c.is_one() {
            continue;
        }
        for col in level_cols {
            if let Some(q) = col
                .iter()
                .map(|p| p.div_monomial(&c))
                .collect::<Option<Vec<_>>>()
            {
                candidates.push(q);
            }
        }
    }
    for k in 0..r {
        candidates.push(
            (0..r)
                .map(|i| {
                    if i == k {
                        Poly::one(ring)
                    } else {
                        Poly::zero(ring)
                    }
                })
                .collect(),
        );
    }
    for c in candidates {
        if span.len() == r {
            break;
        }
        if span.try_add(&c) {
            by_level[0].push(c);
        }
    }
    debug_assert_eq!(span.len(), r);

    // block j holds level m - j
    let ranks: Vec<usize> = (0..=m).map(|j| by_level[m - j].len()).collect();
    let basis: Vec<Vec<Poly>> = (0..=m).flat_map(|j| by_level[m - j].clone()).collect();
    let dec = EchelonDecomposition { ranks, basis };

    let rebuilt = reassemble(&dec, chain)?;
    for i in 1..=m {
        if !lattice_equal(rebuilt.level(i), d.level(i))? {
            return Err(diagnose(d, i));
        }
    }
    Ok(dec)
}

fn diagnose(d: &EchelonDatum, i: usize) -> DatumError {
    match validate_datum(d) {
        Ok(report) => match report.violations.into_iter().next() {
            Some(v) => DatumError::Invalid(v),
            None => DatumError::DecompositionBreach { i },
        },
        Err(e) => e.into(),
    }
}

/// Rebuilds the filtration from an adapted basis by the closed formula.
pub fn reassemble(
    dec: &EchelonDecomposition,
    chain: &DivisorChain,
) -> Result<EchelonDatum, DatumError> {
    let r = dec.basis.len();
    let total: usize = dec.ranks.iter().sum();
    if total != r {
        return Err(DatumError::RankMismatch {
            expected: r,
            found: total,
        });
    }
    if dec.ranks.len() != chain.len() + 1 {
        return Err(DatumError::RankMismatch {
            expected: chain.len() + 1,
            found: dec.ranks.len(),
        });
    }
    let ring = chain.ring();
    let levels = dec.levels();
    let mut lattices = Vec::with_capacity(chain.len());
    for i in 1..=chain.len() {
        let diag: Vec<LaurentMonomial> = levels
            .iter()
            .map(|&l| coefficient(chain, i, l).to_laurent())
            .collect();
        let l =
            LatticeBasis::from_adapted(ring, &dec.basis, &diag, format!("E^{i}")).map_err(|e| {
                match e {
                    LatticeError::NonMonomialDeterminant(_) | LatticeError::SingularMatrix => {
                        DatumError::BadParameters("adapted basis is not unimodular".into())
                    }
                    e => e.into(),
                }
            })?;
        lattices.push(l);
    }
    EchelonDatum::new(chain.clone(), lattices)
}
