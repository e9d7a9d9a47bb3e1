use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::echelon::{ChainStep, DivisorChain, EchelonDatum, Scramble};
use crate::lattice::{determinant, lattice_equal, FracEntry, LatticeBasis};
use crate::poly::{Monomial, Poly, Ring, Scalar};

use super::{modify, ModError};

/// A substitution `v ↦ c_v·w_v` into a ring over the same field, with `c_v`
/// nonzero constants, injective on variables and sending divisor pairs to
/// divisor pairs.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<(usize, Scalar)>,
}

impl RingMap {
    pub fn new(
        source: &Ring,
        target: &Ring,
        images: Vec<(usize, Scalar)>,
    ) -> Result<RingMap, ModError> {
        let unsupported = |s: String| Err(ModError::MapUnsupported(s));
        if source.field() != target.field() {
            return unsupported(format!(
                "fields {} and {} differ",
                source.field(),
                target.field()
            ));
        }
        if images.len() != source.nvars() {
            return unsupported(format!(
                "{} images for {} variables",
                images.len(),
                source.nvars()
            ));
        }
        let mut hit = vec![false; target.nvars()];
        for (v, (w, c)) in images.iter().enumerate() {
            let name = &source.vars()[v];
            if *w >= target.nvars() || hit[*w] {
                return unsupported(format!("image of {name} is not a fresh target variable"));
            }
            hit[*w] = true;
            if c.is_zero() || c.field() != source.field() {
                return unsupported(format!("{name} is sent to a non-unit multiple"));
            }
            if !source.is_divisor_var(v) && target.is_divisor_var(*w) {
                return unsupported(format!("{name} is sent to a divisor variable"));
            }
        }
        for &(x, y) in source.pairs() {
            let (ix, iy) = (images[x].0, images[y].0);
            if !target.pairs().contains(&(ix, iy)) {
                return unsupported(format!(
                    "pair ({}, {}) is not sent to a pair",
                    source.vars()[x],
                    source.vars()[y]
                ));
            }
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(ring: &Ring) -> RingMap {
        let images = (0..ring.nvars()).map(|v| (v, ring.one())).collect();
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    /// Seeded composite of a unit rescaling of every variable, a random
    /// permutation of the divisor pairs and, with probability one half, the
    /// adjunction of a fresh variable.
    pub fn random(source: &Ring, seed: u64) -> RingMap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = source.nvars();
        let mut target_index: Vec<usize> = (0..n).collect();
        let pairs = source.pairs().to_vec();
        let mut perm: Vec<usize> = (0..pairs.len()).collect();
        perm.shuffle(&mut rng);
        for (k, &(x, y)) in pairs.iter().enumerate() {
            let (tx, ty) = pairs[perm[k]];
            target_index[x] = tx;
            target_index[y] = ty;
        }
        let target = if rng.gen_bool(0.5) {
            let fresh = (0..)
                .map(|k| format!("z{k}"))
                .find(|s| source.var_index(s).is_none())
                .expect("unbounded");
            let mut vars = source.vars().to_vec();
            vars.push(fresh);
            let names: Vec<(String, String)> = pairs
                .iter()
                .map(|&(x, y)| (source.vars()[x].clone(), source.vars()[y].clone()))
                .collect();
            Ring::new(source.field(), &vars, &names).expect("extension of a valid ring")
        } else {
            source.clone()
        };
        let images = target_index
            .into_iter()
            .map(|w| {
                let c = loop {
                    let c = source.scalar(rng.gen_range(-3i64..=3));
                    if !c.is_zero() {
                        break c;
                    }
                };
                (w, c)
            })
            .collect();
        RingMap::new(source, &target, images).expect("random maps preserve pairs")
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[(usize, Scalar)] {
        &self.images
    }

    /// Lines `v -> c*w`.
    pub fn describe(&self) -> Vec<String> {
        self.images
            .iter()
            .enumerate()
            .map(|(v, (w, c))| {
                let image = Poly::term(
                    &self.target,
                    Monomial::var(self.target.nvars(), *w, 1),
                    c.clone(),
                );
                format!("{} -> {image}", self.source.vars()[v])
            })
            .collect()
    }

    pub fn map_poly(&self, p: &Poly) -> Poly {
        p.substitute(&self.target, &self.images)
    }

    /// Image of a monomial as `(monomial, constant factor)`.
    pub fn map_monomial(&self, m: &Monomial) -> (Monomial, Scalar) {
        let mut exps = vec![0u32; self.target.nvars()];
        let mut c = self.target.one();
        for (v, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let (w, s) = &self.images[v];
                exps[*w] += e;
                c = c.mul(&s.pow(e));
            }
        }
        (Monomial::from_exponents(exps), c)
    }

    pub fn map_entry(&self, e: &FracEntry) -> FracEntry {
        let (den, c) = self.map_monomial(e.denominator());
        FracEntry::new(self.map_poly(e.numerator()).scale(&c.inv()), den)
            .expect("pairs are preserved")
    }

    pub fn map_lattice(&self, l: &LatticeBasis) -> Result<LatticeBasis, ModError> {
        let cols = l
            .columns()
            .iter()
            .map(|c| c.iter().map(|e| self.map_entry(e)).collect())
            .collect();
        Ok(LatticeBasis::new(
            &self.target,
            cols,
            l.label().to_string(),
        )?)
    }

    pub fn map_chain(&self, chain: &DivisorChain) -> DivisorChain {
        let steps = chain
            .steps()
            .iter()
            .map(|s| ChainStep {
                t: self.map_monomial(&s.t).0,
                y: self.map_monomial(&s.y).0,
            })
            .collect();
        DivisorChain::new(&self.target, steps)
    }

    pub fn map_datum(&self, d: &EchelonDatum) -> Result<EchelonDatum, ModError> {
        if !d.ring().same(&self.source) {
            return Err(crate::lattice::LatticeError::RingMismatch.into());
        }
        let levels = d
            .levels()
            .iter()
            .map(|l| self.map_lattice(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EchelonDatum::new(self.map_chain(d.chain()), levels)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub stage: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub map: Vec<String>,
    pub stages: Vec<StageCheck>,
    pub commute: bool,
}

/// Compares `f(Mod(d))` with `Mod(f(d))` at every stage and ladder entry.
pub fn pullback_commute(d: &EchelonDatum, f: &RingMap) -> Result<CommutationReport, ModError> {
    let c = modify(d)?;
    let fc = modify(&f.map_datum(d)?)?;
    let mut stages = Vec::new();
    for (j, (a, b)) in c.stages.iter().zip(&fc.stages).enumerate() {
        stages.push(StageCheck {
            stage: format!("E_{j}"),
            equal: lattice_equal(&f.map_lattice(a)?, b)?,
        });
    }
    for (j, (row_a, row_b)) in c.ladder.iter().zip(&fc.ladder).enumerate() {
        for (i, (a, b)) in row_a.iter().zip(row_b).enumerate() {
            let equal = lattice_equal(&f.map_lattice(a)?, b)?;
            stages.push(StageCheck {
                stage: format!("E_{}^{}", j + 1, i + 1),
                equal,
            });
        }
    }
    Ok(CommutationReport {
        map: f.describe(),
        commute: stages.iter().all(|s| s.equal),
        stages,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub stages: Vec<StageCheck>,
    /// `g₂·(g·Mod(d))` against `Mod((g₂g)·d)` for a seeded `g₂`.
    pub composition: Vec<StageCheck>,
    pub transported: bool,
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let ring = a[0][0].ring();
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Poly::zero(ring), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

/// `g·d`: every `E^i` replaced by `g·E^i`.
pub fn transport_datum(d: &EchelonDatum, g: &[Vec<Poly>]) -> Result<EchelonDatum, ModError> {
    let det = determinant(d.ring(), g);
    if !det.is_local_unit() {
        return Err(ModError::NotUnimodular(det.to_string()));
    }
    let levels = d
        .levels()
        .iter()
        .map(|l| l.transform(g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EchelonDatum::new(d.chain().clone(), levels)?)
}

/// Checks `g·Mod(d) = Mod(g·d)` stage by stage, and compatibility with
/// composition against a second automorphism drawn from `seed`.
pub fn functoriality_transport(
    d: &EchelonDatum,
    g: &[Vec<Poly>],
    seed: u64,
) -> Result<TransportReport, ModError> {
    let gd = transport_datum(d, g)?;
    let c = modify(d)?;
    let gc = modify(&gd)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g2 = Scramble::random(d.ring(), d.rank(), 2, 1, &mut rng).matrix;
    let hc = modify(&transport_datum(d, &mat_mul(&g2, g))?)?;
    let mut stages = Vec::new();
    let mut composition = Vec::new();
    for j in 0..c.stages.len() {
        let moved = c.stages[j].transform(g)?;
        stages.push(StageCheck {
            stage: format!("E_{j}"),
            equal: lattice_equal(&moved, &gc.stages[j])?,
        });
        let twice = moved.transform(&g2)?;
        composition.push(StageCheck {
            stage: format!("E_{j}"),
            equal: lattice_equal(&twice, &hc.stages[j])?,
        });
    }
    let transported = stages.iter().chain(&composition).all(|s| s.equal);
    Ok(TransportReport {
        stages,
        composition,
        transported,
    })
}
