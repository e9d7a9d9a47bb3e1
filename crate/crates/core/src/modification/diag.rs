use crate::echelon::DivisorChain;
use crate::poly::{LaurentMonomial, Monomial};

/// A filtration that is diagonal in a fixed basis: `levels[i][k]` is the
/// Laurent monomial scaling basis vector `k` in `E^i`, `levels[0]` the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagDatum {
    pub chain: DivisorChain,
    pub levels: Vec<Vec<LaurentMonomial>>,
}

/// Output of the modification recursion in diagonal form.
///
/// `ladder[j][i]` is `E_j^i` for `0 ≤ i ≤ m - j`, with `ladder[j][0] = E_j`
/// and `ladder[0] = (E^0, …, E^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagRun {
    pub ladder: Vec<Vec<Vec<LaurentMonomial>>>,
}

impl DiagRun {
    pub fn stage(&self, j: usize) -> &[LaurentMonomial] {
        &self.ladder[j][0]
    }

    pub fn last(&self) -> &[LaurentMonomial] {
        self.stage(self.ladder.len() - 1)
    }

    pub fn stages(&self) -> Vec<Vec<LaurentMonomial>> {
        self.ladder.iter().map(|row| row[0].clone()).collect()
    }
}

pub fn twist_up(v: &[LaurentMonomial], mu: &Monomial) -> Vec<LaurentMonomial> {
    v.iter().map(|a| a.div_monomial(mu)).collect()
}

/// Intersection of diagonal lattices.
pub fn meet(a: &[LaurentMonomial], b: &[LaurentMonomial]) -> Vec<LaurentMonomial> {
    a.iter().zip(b).map(|(x, y)| x.lcm(y)).collect()
}

/// Sum of diagonal lattices; `Err(k)` when the `k`-th entries generate a
/// non-principal ideal.
pub fn join(a: &[LaurentMonomial], b: &[LaurentMonomial]) -> Result<Vec<LaurentMonomial>, usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| x.divisibility_cmp(y).map(|_| x.gcd(y)).ok_or(k))
        .collect()
}

/// `E_{j+1} = E_j^1(y_{j+1}) + E_j` and `E_j^i = E_{j-1}^{i+1}(t_j) ∩ E_j`.
///
/// `Err((j, k))` names the stage and coordinate where a sum failed to be principal.
pub fn run(d: &DiagDatum) -> Result<DiagRun, (usize, usize)> {
    let m = d.chain.len();
    let mut ladder = vec![d.levels.clone()];
    for j in 1..=m {
        let prev = &ladder[j - 1];
        let stage = join(&twist_up(&prev[1], d.chain.y(j)), &prev[0]).map_err(|k| (j, k))?;
        let mut row = Vec::with_capacity(m - j + 1);
        for i in 1..=m - j {
            row.push(meet(&twist_up(&prev[i + 1], d.chain.t(j)), &stage));
        }
        row.insert(0, stage);
        ladder.push(row);
    }
    Ok(DiagRun { ladder })
}

/// `1/D_{min(i, level)}` on each column of the given level.
pub fn closed_form(chain: &DivisorChain, levels: &[usize], i: usize) -> Vec<LaurentMonomial> {
    let n = chain.ring().nvars();
    levels
        .iter()
        .map(|&l| LaurentMonomial::one(n).div_monomial(&chain.big_d(i.min(l))))
        .collect()
}

/// The adapted form displayed for `E_1^i`: `1/y_1` on levels above `i`,
/// `t_{l+1}⋯t_{i+1}/y_1` on levels `1 ≤ l ≤ i`, `t_2⋯t_{i+1}` on level 0.
pub fn displayed_first_ladder(
    chain: &DivisorChain,
    levels: &[usize],
    i: usize,
) -> Vec<LaurentMonomial> {
    let n = chain.ring().nvars();
    let inv_y1 = LaurentMonomial::one(n).div_monomial(chain.y(1));
    levels
        .iter()
        .map(|&l| {
            if l > i {
                inv_y1.clone()
            } else if l >= 1 {
                inv_y1.mul_monomial(&chain.t_product(l, i + 1))
            } else {
                chain.t_product(1, i + 1).to_laurent()
            }
        })
        .collect()
}
