//! Division-free determinants and adjugates of small polynomial matrices.
//!
//! Laplace expansion memoized over column subsets: `O(2^n · n)` products for
//! an `n × n` matrix, which is cheap at the ranks this crate targets.

use std::collections::HashMap;

use crate::poly::{Poly, Ring};

/// Determinant of the submatrix of row-major `m` on `rows × cols`.
pub(crate) fn minor(ring: &Ring, m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Poly {
    debug_assert_eq!(rows.len(), cols.len());
    let n = cols.len();
    if n == 0 {
        return Poly::one(ring);
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    expand(ring, m, rows, cols, full, &mut memo)
}

fn expand(
    ring: &Ring,
    m: &[Vec<Poly>],
    rows: &[usize],
    cols: &[usize],
    mask: u32,
    memo: &mut HashMap<u32, Poly>,
) -> Poly {
    let remaining = mask.count_ones() as usize;
    if remaining == 0 {
        return Poly::one(ring);
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let row = rows[rows.len() - remaining];
    let mut acc = Poly::zero(ring);
    let mut position = 0;
    for (k, &c) in cols.iter().enumerate() {
        if mask & (1 << k) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = expand(ring, m, rows, cols, mask & !(1 << k), memo);
            if !sub.is_zero() {
                let prod = entry * &sub;
                acc = if position % 2 == 0 {
                    &acc + &prod
                } else {
                    &acc - &prod
                };
            }
        }
        position += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Determinant of a square row-major matrix.
pub fn determinant(ring: &Ring, m: &[Vec<Poly>]) -> Poly {
    let idx: Vec<usize> = (0..m.len()).collect();
    minor(ring, m, &idx, &idx)
}

/// Adjugate, row-major: `adj[i][j] = (-1)^{i+j} · det(m without row j, col i)`.
pub(crate) fn adjugate(ring: &Ring, m: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![Poly::one(ring)]];
    }
    let mut adj = vec![vec![Poly::zero(ring); n]; n];
    for j in 0..n {
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        for (i, row) in adj.iter_mut().enumerate() {
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let d = minor(ring, m, &rows, &cols);
            row[j] = if (i + j) % 2 == 0 { d } else { -&d };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Field};

    fn mat(ring: &Ring, rows: &[&[&str]]) -> Vec<Vec<Poly>> {
        rows.iter()
            .map(|r| r.iter().map(|s| parse_poly(ring, s).unwrap()).collect())
            .collect()
    }

    #[allow(clippy::needless_range_loop)]
    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let ring = Ring::new::<&str>(Field::Rational, &["x", "y"], &[]).unwrap();
        let m = mat(
            &ring,
            &[&["1", "x", "0"], &["y", "2", "xy"], &["x+1", "0", "3"]],
        );
        let det = determinant(&ring, &m);
        let adj = adjugate(&ring, &m);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Poly::zero(&ring);
                for k in 0..3 {
                    s = &s + &(&adj[i][k] * &m[k][j]);
                }
                let expected = if i == j {
                    det.clone()
                } else {
                    Poly::zero(&ring)
                };
                assert_eq!(s, expected);
            }
        }
    }

    #[test]
    fn cofactor_example() {
        let ring = Ring::new::<&str>(Field::Rational, &["x", "y"], &[]).unwrap();
        let m = mat(&ring, &[&["1", "0"], &["0", "xy"]]);
        assert_eq!(determinant(&ring, &m), parse_poly(&ring, "xy").unwrap());
    }
}
