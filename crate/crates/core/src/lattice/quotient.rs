use serde::Serialize;

use crate::poly::{Monomial, Poly};

use super::{is_member, relative_coordinates, LatticeBasis, LatticeError};

/// A quotient of nested lattices that is free of rank `free_rank` over `R/(annihilator)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDescriptor {
    pub annihilator: String,
    #[serde(skip)]
    pub annihilator_monomial: Monomial,
    pub free_rank: usize,
    pub ambient_step: usize,
}

/// Column reduction over the local ring modulo `mu`, with unit pivots.
///
/// Rows are scanned in order; in each row the first remaining column whose
/// entry is a unit becomes the pivot and clears that row from every other
/// remaining column. Returns the number of pivots when every non-pivot column
/// ends up `≡ 0 mod mu` (the column span mod `mu` is then a free, split
/// submodule of that rank), `None` otherwise.
pub fn local_split_rank(columns: &[Vec<Poly>], mu: &Monomial) -> Option<usize> {
    let mut cols: Vec<Vec<Poly>> = columns
        .iter()
        .map(|c| c.iter().map(|p| p.reduce_mod_monomial(mu)).collect())
        .collect();
    let nrows = cols.first().map_or(0, Vec::len);
    let mut remaining: Vec<usize> = (0..cols.len()).collect();
    let mut pivots = 0;
    for row in 0..nrows {
        let Some(pos) = remaining.iter().position(|&c| cols[c][row].is_local_unit()) else {
            continue;
        };
        let pc = remaining.remove(pos);
        pivots += 1;
        let pivot_col = cols[pc].clone();
        let u = &pivot_col[row];
        for &c in &remaining {
            let a = cols[c][row].clone();
            if a.is_zero() {
                continue;
            }
            cols[c] = cols[c]
                .iter()
                .zip(&pivot_col)
                .map(|(x, p)| (&(u * x) - &(&a * p)).reduce_mod_monomial(mu))
                .collect();
        }
    }
    let clean = remaining.iter().all(|&c| cols[c].iter().all(Poly::is_zero));
    clean.then_some(pivots)
}

/// Certifies that `big / small` is annihilated by `mu` and free over `R/(mu)`.
pub fn quotient_structure(
    small: &LatticeBasis,
    big: &LatticeBasis,
    mu: &Monomial,
) -> Result<QuotientDescriptor, LatticeError> {
    let r = big.rank();
    if small.rank() != r {
        return Err(LatticeError::DimensionMismatch {
            expected: r,
            found: small.rank(),
        });
    }
    let coords = relative_coordinates(small, big)?;
    let ring = big.ring();
    let not_free = || LatticeError::NotFreeSplit {
        annihilator: ring.format_monomial(mu),
    };
    for col in big.columns() {
        let scaled: Vec<_> = col.iter().map(|e| e.mul_monomial(mu)).collect();
        if !is_member(&scaled, small)? {
            return Err(not_free());
        }
    }
    let free_rank = if mu.is_one() {
        0
    } else {
        r - local_split_rank(&coords, mu).ok_or_else(not_free)?
    };
    Ok(QuotientDescriptor {
        annihilator: ring.format_monomial(mu),
        annihilator_monomial: mu.clone(),
        free_rank,
        ambient_step: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{twist, TwistDirection};
    use crate::poly::{parse_monomial, Field, Ring};

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

    fn mono(s: &str) -> Monomial {
        parse_monomial(&ring(), s).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let std2 = LatticeBasis::standard(&ring(), 2);
        let q = quotient_structure(&lat(&[&["1", "0"], &["0", "xy"]]), &std2, &mono("xy")).unwrap();
        assert_eq!(q.free_rank, 1);
        assert_eq!(q.annihilator, "xy");

        let big = lat(&[&["1/y", "0"], &["0", "1"]]);
        let q = quotient_structure(&std2, &big, &mono("y")).unwrap();
        assert_eq!(q.free_rank, 1);

        // R^2 / <x e1, e2> = R/(x): killed by xy but not free over R/(xy)
        let err = quotient_structure(&lat(&[&["x", "0"], &["0", "1"]]), &std2, &mono("xy"));
        assert!(matches!(err, Err(LatticeError::NotFreeSplit { .. })));
    }

    #[test]
    fn not_contained_is_reported() {
        let std2 = LatticeBasis::standard(&ring(), 2);
        let big = lat(&[&["1/y", "0"], &["0", "1"]]);
        assert_eq!(
            quotient_structure(&big, &std2, &mono("y")),
            Err(LatticeError::NotContained { column: 0 })
        );
    }

    #[test]
    fn twist_up_quotient_has_full_rank() {
        let l = lat(&[&["1", "x"], &["y", "1 + x^2"]]);
        let up = twist(&l, &mono("xy"), TwistDirection::Up);
        let q = quotient_structure(&l, &up, &mono("xy")).unwrap();
        assert_eq!(q.free_rank, 2);
    }

    #[test]
    fn split_rank_detects_non_split_image() {
        let r = ring();
        let p = |s: &str| crate::poly::parse_poly(&r, s).unwrap();
        // column (x, 0) mod xy: nonzero but no unit entry
        assert_eq!(
            local_split_rank(&[vec![p("x"), p("0")], vec![p("0"), p("1")]], &mono("xy")),
            None
        );
        assert_eq!(
            local_split_rank(&[vec![p("1"), p("x")], vec![p("2"), p("2x")]], &mono("xy")),
            Some(1)
        );
    }
}
