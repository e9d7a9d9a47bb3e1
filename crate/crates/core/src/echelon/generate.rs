use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lattice::{LatticeBasis, LatticeError};
use crate::poly::{Field, Monomial, Poly, Ring};

use super::{coefficient, ChainStep, DatumError, DivisorChain, EchelonDatum};

/// `Q[x, y]` for one pair, `Q[x1, y1, …, xn, yn]` otherwise, with the divisor
/// pairs declared.
pub fn default_ring(field: Field, npairs: usize) -> Ring {
    if npairs <= 1 {
        return Ring::new(field, &["x", "y"], &[("x", "y")]).expect("valid ring");
    }
    let names: Vec<(String, String)> = (1..=npairs)
        .map(|k| (format!("x{k}"), format!("y{k}")))
        .collect();
    let vars: Vec<&str> = names
        .iter()
        .flat_map(|(x, y)| [x.as_str(), y.as_str()])
        .collect();
    let pairs: Vec<(&str, &str)> = names
        .iter()
        .map(|(x, y)| (x.as_str(), y.as_str()))
        .collect();
    Ring::new(field, &vars, &pairs).expect("valid ring")
}

/// How the divisor chain of a generated datum is drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum ChainStyle {
    /// `t_i = xy`, `y_i = y` for every `i`.
    #[default]
    Scalar,
    /// `t_i = x^a y^b`, `y_i = y^b` with random small exponents.
    Random,
    /// `y_i = t_i`, so `D = δ`.
    FullD,
    /// `y_i = 1`.
    TrivialY,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub seed: u64,
    pub rank: usize,
    pub length: usize,
    /// Block ranks `r_0, …, r_m`; random when absent.
    pub ranks: Option<Vec<usize>>,
    pub degree_bound: u32,
    /// Number of elementary factors in the scrambling matrix.
    pub scramble_count: usize,
    pub chain: ChainStyle,
    /// Index of the divisor pair carrying the chain.
    pub pair: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            rank: 3,
            length: 2,
            ranks: None,
            degree_bound: 2,
            scramble_count: 1,
            chain: ChainStyle::Scalar,
            pair: 0,
        }
    }
}

/// Polynomial with up to four terms of total degree `≤ degree_bound` and
/// coefficients in `[-3, 3]`.
pub fn random_poly(ring: &Ring, rng: &mut impl Rng, degree_bound: u32) -> Poly {
    let n = ring.nvars();
    let nterms = rng.gen_range(1..=4);
    let terms = (0..nterms).map(|_| {
        let mut exps = vec![0u32; n];
        let deg = rng.gen_range(0..=degree_bound);
        for _ in 0..deg {
            exps[rng.gen_range(0..n)] += 1;
        }
        (
            Monomial::from_exponents(exps),
            ring.scalar(rng.gen_range(-3..=3)),
        )
    });
    Poly::from_terms(ring, terms.collect::<Vec<_>>())
}

/// An invertible matrix `U0` with constant determinant together with its
/// inverse, both row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scramble {
    pub matrix: Vec<Vec<Poly>>,
    pub inverse: Vec<Vec<Poly>>,
}

impl Scramble {
    pub fn identity(ring: &Ring, r: usize) -> Scramble {
        let id = identity(ring, r);
        Scramble {
            matrix: id.clone(),
            inverse: id,
        }
    }

    /// Product of `count` elementary matrices `row k += p·row l` with
    /// `deg p ≤ degree_bound`, followed by a diagonal of nonzero constants.
    /// `count = 0` gives the identity.
    pub fn random(
        ring: &Ring,
        r: usize,
        count: usize,
        degree_bound: u32,
        rng: &mut impl Rng,
    ) -> Scramble {
        let mut s = Scramble::identity(ring, r);
        if count == 0 {
            return s;
        }
        if r > 1 {
            for _ in 0..count {
                let k = rng.gen_range(0..r);
                let l = (k + rng.gen_range(1..r)) % r;
                let p = random_poly(ring, rng, degree_bound);
                s.add_row_multiple(k, l, &p);
            }
        }
        for k in 0..r {
            let c = loop {
                let c = ring.scalar(rng.gen_range(-3i64..=3));
                if !c.is_zero() {
                    break c;
                }
            };
            s.matrix[k] = s.matrix[k].iter().map(|p| p.scale(&c)).collect();
            let ci = c.inv();
            for row in &mut s.inverse {
                row[k] = row[k].scale(&ci);
            }
        }
        s
    }

    /// Row `k` += `p`·row `l`; the inverse absorbs the opposite column operation.
    fn add_row_multiple(&mut self, k: usize, l: usize, p: &Poly) {
        let row_l = self.matrix[l].clone();
        for (a, b) in self.matrix[k].iter_mut().zip(&row_l) {
            *a = &*a + &(p * b);
        }
        for row in &mut self.inverse {
            row[l] = &row[l] - &(p * &row[k]);
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// Columns of `U0`.
    pub fn columns(&self) -> Vec<Vec<Poly>> {
        let r = self.rank();
        (0..r)
            .map(|j| (0..r).map(|i| self.matrix[i][j].clone()).collect())
            .collect()
    }
}

fn identity(ring: &Ring, r: usize) -> Vec<Vec<Poly>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        Poly::one(ring)
                    } else {
                        Poly::zero(ring)
                    }
                })
                .collect()
        })
        .collect()
}

/// `E^i = U · diag(c(i, level_k))` for every `i = 1..=m`.
pub fn normal_form_levels(
    chain: &DivisorChain,
    basis: &[Vec<Poly>],
    levels: &[usize],
) -> Result<Vec<LatticeBasis>, LatticeError> {
    (1..=chain.len())
        .map(|i| {
            let diag: Vec<_> = levels
                .iter()
                .map(|&l| coefficient(chain, i, l).to_laurent())
                .collect();
            LatticeBasis::from_adapted(chain.ring(), basis, &diag, format!("E^{i}"))
        })
        .collect()
}

/// The length-`m` datum with constant chain `(t, y)` in normal form over `basis`.
pub fn scalar_datum(
    ring: &Ring,
    (t, y): (Monomial, Monomial),
    m: usize,
    basis: &[Vec<Poly>],
    levels: &[usize],
) -> Result<EchelonDatum, DatumError> {
    let chain = DivisorChain::scalar(ring, t, y, m);
    let lattices = normal_form_levels(&chain, basis, levels)?;
    EchelonDatum::new(chain, lattices)
}

/// A seeded datum together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Generated {
    pub datum: EchelonDatum,
    pub scramble: Scramble,
    /// Level of each column of the scramble.
    pub levels: Vec<usize>,
    pub ranks: Vec<usize>,
}

fn random_chain(
    ring: &Ring,
    params: &GenParams,
    rng: &mut impl Rng,
) -> Result<DivisorChain, DatumError> {
    let &(xv, yv) = ring
        .pairs()
        .get(params.pair)
        .ok_or_else(|| DatumError::BadParameters(format!("no divisor pair {}", params.pair)))?;
    let n = ring.nvars();
    let mono = |a: u32, b: u32| {
        let mut e = vec![0u32; n];
        e[xv] = a;
        e[yv] = b;
        Monomial::from_exponents(e)
    };
    let steps = (0..params.length)
        .map(|_| match params.chain {
            ChainStyle::Scalar => ChainStep {
                t: mono(1, 1),
                y: mono(0, 1),
            },
            ChainStyle::Random => {
                let (a, b) = loop {
                    let a = rng.gen_range(0..=2);
                    let b = rng.gen_range(0..=2);
                    if a + b > 0 {
                        break (a, b);
                    }
                };
                ChainStep {
                    t: mono(a, b),
                    y: mono(0, b),
                }
            }
            ChainStyle::FullD => {
                let b = rng.gen_range(1..=2);
                ChainStep {
                    t: mono(0, b),
                    y: mono(0, b),
                }
            }
            ChainStyle::TrivialY => {
                let a = rng.gen_range(1..=2);
                ChainStep {
                    t: mono(a, 0),
                    y: mono(0, 0),
                }
            }
        })
        .collect();
    Ok(DivisorChain::new(ring, steps))
}

fn block_ranks(params: &GenParams, rng: &mut impl Rng) -> Result<Vec<usize>, DatumError> {
    let m = params.length;
    let ranks = match &params.ranks {
        Some(r) => r.clone(),
        None => {
            let mut r = vec![0usize; m + 1];
            for _ in 0..params.rank {
                r[rng.gen_range(0..=m)] += 1;
            }
            r
        }
    };
    if ranks.len() != m + 1 {
        return Err(DatumError::BadParameters(format!(
            "{} block ranks for length {m}",
            ranks.len()
        )));
    }
    let total: usize = ranks.iter().sum();
    if total != params.rank {
        return Err(DatumError::RankMismatch {
            expected: params.rank,
            found: total,
        });
    }
    Ok(ranks)
}

fn check(params: &GenParams) -> Result<(), DatumError> {
    if params.rank == 0 || params.length == 0 {
        return Err(DatumError::BadParameters(
            "rank and length must be positive".into(),
        ));
    }
    Ok(())
}

/// A seeded echelon datum in scrambled normal form.
pub fn random_datum(ring: &Ring, params: &GenParams) -> Result<Generated, DatumError> {
    check(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let scramble = Scramble::random(
        ring,
        params.rank,
        params.scramble_count,
        params.degree_bound,
        &mut rng,
    );
    build(ring, params, scramble, false, &mut rng)
}

/// As [`random_datum`], over a prescribed scrambling matrix. Columns are
/// assigned levels in random order, so that data sharing a scramble differ in
/// their blocks.
pub fn random_datum_with_basis(
    ring: &Ring,
    params: &GenParams,
    scramble: &Scramble,
) -> Result<Generated, DatumError> {
    check(params)?;
    if scramble.rank() != params.rank {
        return Err(DatumError::RankMismatch {
            expected: params.rank,
            found: scramble.rank(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    build(ring, params, scramble.clone(), true, &mut rng)
}

fn build(
    ring: &Ring,
    params: &GenParams,
    scramble: Scramble,
    shuffle: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Generated, DatumError> {
    let chain = random_chain(ring, params, rng)?;
    let ranks = block_ranks(params, rng)?;
    let m = params.length;
    let mut levels: Vec<usize> = ranks
        .iter()
        .enumerate()
        .flat_map(|(j, &r)| std::iter::repeat_n(m - j, r))
        .collect();
    if shuffle {
        levels.shuffle(rng);
    }
    let lattices = normal_form_levels(&chain, &scramble.columns(), &levels)?;
    let datum = EchelonDatum::new(chain, lattices)?;
    Ok(Generated {
        datum,
        scramble,
        levels,
        ranks,
    })
}
