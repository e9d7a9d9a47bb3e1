//! Full-rank lattices in the generic fiber `K^r`, presented by basis matrices
//! whose entries are polynomials over monomial denominators.
//!
//! Coefficients live in the local ring at the origin: a lattice is the set of
//! combinations of its columns with coefficients `p/u`, `u` a local unit. Every
//! lattice handled here has determinant `(Laurent monomial) × (local unit)`,
//! which makes membership decidable by monomial divisibility alone.

mod det;
mod entry;
mod quotient;

use std::fmt;
use std::sync::OnceLock;

use crate::poly::{LaurentMonomial, Monomial, Poly, Ring, SyntaxError};

pub use entry::FracEntry;
pub use quotient::{local_split_rank, quotient_structure, QuotientDescriptor};

pub(crate) use det::adjugate;
pub use det::determinant;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis matrix is singular")]
    SingularMatrix,
    #[error("determinant {0} is not a monomial times a local unit")]
    NonMonomialDeterminant(String),
    #[error("column {column} of the smaller lattice is not contained in the larger one")]
    NotContained { column: usize },
    #[error("quotient is not free over R/({annihilator})")]
    NotFreeSplit { annihilator: String },
    #[error("denominator uses non-divisor variable {0}")]
    IllegalDenominator(String),
    #[error("lattices live over different variable tables")]
    RingMismatch,
    #[error("cannot parse entry {0:?}: {1}")]
    Syntax(String, SyntaxError),
}

/// Coordinates `w = numerators / unit` of a vector in a lattice basis:
/// `B · numerators = unit · v` holds exactly, with `unit` a local unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    pub numerators: Vec<Poly>,
    pub unit: Poly,
}

/// Cached data for membership solving.
#[derive(Clone, Debug)]
struct Solver {
    /// `D`: lcm of all denominators, so that `D·B` is polynomial.
    common_den: Monomial,
    /// Monomial part `μ` of `det(D·B) = μ·u`.
    det_monomial: Monomial,
    /// Local-unit part `u`.
    det_unit: Poly,
    adj: OnceLock<Vec<Vec<Poly>>>,
    cleared: Vec<Vec<Poly>>,
}

/// A basis of a full-rank lattice; `columns[j]` is the `j`-th basis vector.
#[derive(Clone)]
pub struct LatticeBasis {
    ring: Ring,
    columns: Vec<Vec<FracEntry>>,
    label: String,
    solver: Solver,
}

impl LatticeBasis {
    pub fn new(
        ring: &Ring,
        columns: Vec<Vec<FracEntry>>,
        label: impl Into<String>,
    ) -> Result<LatticeBasis, LatticeError> {
        let r = columns.len();
        if r == 0 {
            return Err(LatticeError::SingularMatrix);
        }
        for col in &columns {
            if col.len() != r {
                return Err(LatticeError::DimensionMismatch {
                    expected: r,
                    found: col.len(),
                });
            }
            if col.iter().any(|e| !e.ring().same(ring)) {
                return Err(LatticeError::RingMismatch);
            }
        }
        let common_den = columns
            .iter()
            .flatten()
            .fold(ring.one_monomial(), |acc, e| acc.lcm(e.denominator()));
        // row-major D·B
        let cleared: Vec<Vec<Poly>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let e = &columns[j][i];
                        e.numerator()
                            .mul_monomial(&common_den.div(e.denominator()).expect("lcm"))
                    })
                    .collect()
            })
            .collect();
        let det = determinant(ring, &cleared);
        let det_monomial = det.monomial_content().ok_or(LatticeError::SingularMatrix)?;
        let det_unit = det.div_monomial(&det_monomial).expect("content divides");
        if !det_unit.is_local_unit() {
            return Err(LatticeError::NonMonomialDeterminant(det.to_string()));
        }
        Ok(LatticeBasis {
            ring: ring.clone(),
            columns,
            label: label.into(),
            solver: Solver {
                common_den,
                det_monomial,
                det_unit,
                adj: OnceLock::new(),
                cleared,
            },
        })
    }

    /// The standard lattice `R^r`.
    pub fn standard(ring: &Ring, rank: usize) -> LatticeBasis {
        let columns = (0..rank)
            .map(|j| {
                (0..rank)
                    .map(|i| {
                        if i == j {
                            FracEntry::one(ring)
                        } else {
                            FracEntry::zero(ring)
                        }
                    })
                    .collect()
            })
            .collect();
        LatticeBasis::new(ring, columns, "standard").expect("identity is a basis")
    }

    /// Lattice spanned by polynomial columns.
    pub fn from_poly_columns(
        ring: &Ring,
        columns: &[Vec<Poly>],
        label: impl Into<String>,
    ) -> Result<LatticeBasis, LatticeError> {
        let cols = columns
            .iter()
            .map(|c| c.iter().cloned().map(FracEntry::poly).collect())
            .collect();
        LatticeBasis::new(ring, cols, label)
    }

    /// `basis[k] · m_k` for Laurent monomials `m_k`: the lattice that is diagonal
    /// in the (polynomial) basis `basis`.
    pub fn from_adapted(
        ring: &Ring,
        basis: &[Vec<Poly>],
        diagonal: &[LaurentMonomial],
        label: impl Into<String>,
    ) -> Result<LatticeBasis, LatticeError> {
        let cols = basis
            .iter()
            .zip(diagonal)
            .map(|(col, m)| col.iter().map(|p| FracEntry::from_laurent(p, m)).collect())
            .collect();
        LatticeBasis::new(ring, cols, label)
    }

    /// Parses row-major entry strings.
    pub fn from_rows(
        ring: &Ring,
        rows: &[Vec<String>],
        label: impl Into<String>,
    ) -> Result<LatticeBasis, LatticeError> {
        let r = rows.len();
        let mut columns = vec![Vec::with_capacity(r); r];
        for row in rows {
            if row.len() != r {
                return Err(LatticeError::DimensionMismatch {
                    expected: r,
                    found: row.len(),
                });
            }
            for (j, s) in row.iter().enumerate() {
                columns[j].push(FracEntry::parse(ring, s)?);
            }
        }
        LatticeBasis::new(ring, columns, label)
    }

    /// Row-major entry strings, each entry normalized.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| self.columns[j][i].normalized().to_string())
                    .collect()
            })
            .collect()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<FracEntry>] {
        &self.columns
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> LatticeBasis {
        self.label = label.into();
        self
    }

    /// Laurent monomial part of the determinant (the determinant divisor).
    pub fn det_divisor(&self) -> LaurentMonomial {
        let d = self.solver.common_den.pow(self.rank() as u32);
        self.solver.det_monomial.to_laurent().div_monomial(&d)
    }

    fn adj(&self) -> &Vec<Vec<Poly>> {
        self.solver
            .adj
            .get_or_init(|| adjugate(&self.ring, &self.solver.cleared))
    }

    /// Columns as polynomials, when every entry is polynomial.
    pub fn poly_columns(&self) -> Option<Vec<Vec<Poly>>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(FracEntry::as_poly).collect())
            .collect()
    }

    /// Applies a polynomial matrix `g` (row-major) on the left.
    pub fn transform(&self, g: &[Vec<Poly>]) -> Result<LatticeBasis, LatticeError> {
        let r = self.rank();
        if g.len() != r || g.iter().any(|row| row.len() != r) {
            return Err(LatticeError::DimensionMismatch {
                expected: r,
                found: g.len(),
            });
        }
        let cols = self
            .columns
            .iter()
            .map(|col| {
                (0..r)
                    .map(|i| {
                        col.iter()
                            .zip(&g[i])
                            .fold(FracEntry::zero(&self.ring), |acc, (e, gi)| {
                                acc.add(&e.mul_poly(gi))
                            })
                            .normalized()
                    })
                    .collect()
            })
            .collect();
        LatticeBasis::new(&self.ring, cols, self.label.clone())
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeBasis[{}]{:?}", self.label, self.to_rows())
    }
}

/// Solves `B·w = v` over the local ring. `Ok(None)` means `v` is not a member.
pub fn membership(
    v: &[FracEntry],
    lattice: &LatticeBasis,
) -> Result<Option<Coordinates>, LatticeError> {
    let r = lattice.rank();
    if v.len() != r {
        return Err(LatticeError::DimensionMismatch {
            expected: r,
            found: v.len(),
        });
    }
    let ring = &lattice.ring;
    if v.iter().any(|e| !e.ring().same(ring)) {
        return Err(LatticeError::RingMismatch);
    }
    let d = &lattice.solver.common_den;
    // D·v_k = n_k · a_k / b_k with a_k/b_k = D/d_k in lowest terms
    let parts: Vec<(Poly, Monomial)> = v
        .iter()
        .map(|e| {
            let (a, b) = d.to_laurent().div_monomial(e.denominator()).split();
            (e.numerator().mul_monomial(&a), b)
        })
        .collect();
    let b = parts
        .iter()
        .fold(ring.one_monomial(), |acc, (_, bk)| acc.lcm(bk));
    let rhs: Vec<Poly> = parts
        .iter()
        .map(|(p, bk)| p.mul_monomial(&b.div(bk).expect("lcm")))
        .collect();
    let divisor = b.mul(&lattice.solver.det_monomial);
    let adj = lattice.adj();
    let mut numerators = Vec::with_capacity(r);
    for row in adj {
        let z = row
            .iter()
            .zip(&rhs)
            .fold(Poly::zero(ring), |acc, (a, p)| &acc + &(a * p));
        match z.div_monomial(&divisor) {
            Some(q) => numerators.push(q),
            None => return Ok(None),
        }
    }
    Ok(Some(Coordinates {
        numerators,
        unit: lattice.solver.det_unit.clone(),
    }))
}

pub fn is_member(v: &[FracEntry], lattice: &LatticeBasis) -> Result<bool, LatticeError> {
    Ok(membership(v, lattice)?.is_some())
}

/// First column of `small` that is not in `big`.
pub fn first_non_member(
    small: &LatticeBasis,
    big: &LatticeBasis,
) -> Result<Option<usize>, LatticeError> {
    for (j, col) in small.columns.iter().enumerate() {
        if !is_member(col, big)? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

pub fn contains(big: &LatticeBasis, small: &LatticeBasis) -> Result<bool, LatticeError> {
    Ok(first_non_member(small, big)?.is_none())
}

/// Coordinates of every column of `small` in the basis of `big`, each scaled
/// by its unit denominator (so the result presents the same lattice).
pub fn relative_coordinates(
    small: &LatticeBasis,
    big: &LatticeBasis,
) -> Result<Vec<Vec<Poly>>, LatticeError> {
    small
        .columns
        .iter()
        .enumerate()
        .map(|(j, col)| {
            membership(col, big)?
                .map(|c| c.numerators)
                .ok_or(LatticeError::NotContained { column: j })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistDirection {
    /// `L(D)`: divide by the equation of `D`.
    Up,
    /// `L(-D)`: multiply by the equation of `D`.
    Down,
}

pub fn twist(lattice: &LatticeBasis, mu: &Monomial, direction: TwistDirection) -> LatticeBasis {
    let cols = lattice
        .columns
        .iter()
        .map(|c| {
            c.iter()
                .map(|e| match direction {
                    TwistDirection::Up => e.div_monomial(mu),
                    TwistDirection::Down => e.mul_monomial(mu),
                })
                .collect()
        })
        .collect();
    LatticeBasis::new(&lattice.ring, cols, lattice.label.clone())
        .expect("twist of a basis is a basis")
}

/// Mutual membership.
pub fn lattice_equal(a: &LatticeBasis, b: &LatticeBasis) -> Result<bool, LatticeError> {
    if a.rank() != b.rank() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rank(),
            found: b.rank(),
        });
    }
    if !a.ring.same(&b.ring) {
        return Err(LatticeError::RingMismatch);
    }
    // equal lattices have equal determinant divisors
    if a.det_divisor() != b.det_divisor() {
        return Ok(false);
    }
    Ok(contains(b, a)? && contains(a, b)?)
}

/// Determinant over the fraction field, with the monomial factor cancelled and
/// the numerator scaled to constant term 1 (local unit) or leading coefficient 1.
pub fn det_lattice(lattice: &LatticeBasis) -> FracEntry {
    let ring = &lattice.ring;
    let num = determinant(ring, &lattice.solver.cleared);
    let den = lattice.solver.common_den.pow(lattice.rank() as u32);
    let e = FracEntry::new(num, den)
        .expect("denominator of a lattice entry")
        .normalized();
    let scale = if e.numerator().is_local_unit() {
        e.numerator().constant_term()
    } else {
        e.numerator()
            .leading_term()
            .expect("nonzero determinant")
            .1
            .clone()
    };
    FracEntry::new(e.numerator().scale(&scale.inv()), e.denominator().clone())
        .expect("same denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_monomial, Field};

    fn ring() -> Ring {
        Ring::new(Field::Rational, &["x", "y"], &[("x", "y")]).unwrap()
    }

    fn lat(rows: &[&[&str]]) -> LatticeBasis {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        LatticeBasis::from_rows(&ring(), &rows, "t").unwrap()
    }

    fn vec_of(s: &[&str]) -> Vec<FracEntry> {
        s.iter()
            .map(|e| FracEntry::parse(&ring(), e).unwrap())
            .collect()
    }

    fn mono(s: &str) -> Monomial {
        parse_monomial(&ring(), s).unwrap()
    }

    fn poly(s: &str) -> Poly {
        crate::poly::parse_poly(&ring(), s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let std2 = LatticeBasis::standard(&ring(), 2);
        let c = membership(&vec_of(&["1", "0"]), &std2).unwrap().unwrap();
        assert_eq!(c.numerators, vec![poly("1"), poly("0")]);
        assert!(c.unit.is_one());

        // adjugate oracle: adj(diag(1, xy)) = diag(xy, 1), det = xy
        let l = lat(&[&["1", "0"], &["0", "xy"]]);
        let c = membership(&vec_of(&["1", "xy"]), &l).unwrap().unwrap();
        assert_eq!(c.numerators, vec![poly("1"), poly("1")]);

        assert!(membership(&vec_of(&["1/y", "0"]), &std2).unwrap().is_none());
        assert!(matches!(
            membership(&vec_of(&["1"]), &std2),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_through_unit_determinant() {
        // det = 1 + x, a local unit but not a polynomial unit
        let l = lat(&[&["1 + x", "0"], &["0", "1"]]);
        let c = membership(&vec_of(&["1", "0"]), &l).unwrap().unwrap();
        assert_eq!(c.unit, poly("1 + x"));
        assert_eq!(c.numerators, vec![poly("1"), poly("0")]);
        assert!(lattice_equal(&l, &LatticeBasis::standard(&ring(), 2)).unwrap());
    }

    #[test]
    fn rejects_non_monomial_determinant() {
        let rows = vec![vec!["x + y".to_string()]];
        assert!(matches!(
            LatticeBasis::from_rows(&ring(), &rows, "bad"),
            Err(LatticeError::NonMonomialDeterminant(_))
        ));
        let rows = vec![vec!["0".to_string()]];
        assert_eq!(
            LatticeBasis::from_rows(&ring(), &rows, "bad").unwrap_err(),
            LatticeError::SingularMatrix
        );
    }

    #[test]
    fn twist_examples() {
        let std2 = LatticeBasis::standard(&ring(), 2);
        let up = twist(&std2, &mono("y"), TwistDirection::Up);
        assert_eq!(up.to_rows(), vec![vec!["1/y", "0"], vec!["0", "1/y"]]);
        let back = twist(&up, &mono("y"), TwistDirection::Down);
        assert!(lattice_equal(&back, &std2).unwrap());

        let l = lat(&[&["1", "0"], &["0", "xy"]]);
        let down = twist(&l, &mono("xy"), TwistDirection::Down);
        assert!(lattice_equal(&down, &lat(&[&["xy", "0"], &["0", "x^2y^2"]])).unwrap());
    }

    #[test]
    fn equality_examples() {
        let b = lat(&[&["1", "x"], &["y", "1 + xy"]]);
        // B·U with U = elementary(col2 += (x + y^2)·col1)
        let u = lat(&[&["1", "x + y^2"], &["0", "1"]]);
        let bu = u
            .transform(&[vec![poly("1"), poly("x")], vec![poly("y"), poly("1 + xy")]])
            .unwrap();
        assert!(lattice_equal(&b, &bu).unwrap());

        let std2 = LatticeBasis::standard(&ring(), 2);
        assert!(!lattice_equal(&std2, &lat(&[&["1", "0"], &["0", "xy"]])).unwrap());
        let swapped = lat(&[&["x", "1"], &["1 + xy", "y"]]);
        assert!(lattice_equal(&b, &swapped).unwrap());
    }

    #[test]
    fn det_examples() {
        assert_eq!(
            det_lattice(&LatticeBasis::standard(&ring(), 2)).to_string(),
            "1"
        );
        assert_eq!(
            det_lattice(&lat(&[&["1", "0"], &["0", "xy"]])).to_string(),
            "xy"
        );
        assert_eq!(
            det_lattice(&lat(&[&["1/y", "0"], &["0", "1"]])).to_string(),
            "1/y"
        );
        assert_eq!(
            det_lattice(&lat(&[&["2", "0"], &["0", "2 + 2x"]])).to_string(),
            "x + 1"
        );
    }

    #[test]
    fn denominators_restricted_to_divisor_variables() {
        let r = Ring::new(Field::Rational, &["x", "y", "z"], &[("x", "y")]).unwrap();
        assert!(matches!(
            FracEntry::parse(&r, "1/z"),
            Err(LatticeError::IllegalDenominator(_))
        ));
        assert!(FracEntry::parse(&r, "z/xy").is_ok());
    }
}
