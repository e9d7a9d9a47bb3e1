use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::echelon::{random_poly, EchelonDatum};
use crate::lattice::{
    first_non_member, is_member, lattice_equal, twist, FracEntry, LatticeBasis, TwistDirection,
};
use crate::poly::{Monomial, Poly};

use super::diag::{displayed_first_ladder, join, twist_up};
use super::{adapted, ModError, ModificationChain};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderEntry {
    pub j: usize,
    pub i: usize,
    pub lattice: Vec<Vec<String>>,
    /// Every basis column lies in both `E_{j-1}^{i+1}(t_j)` and `E_j`.
    pub columns_certified: bool,
    pub audit_samples: usize,
    /// Samples that landed in both intersectands (each then verified to lie in `E_j^i`).
    pub audit_common: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplayedComparison {
    pub i: usize,
    pub definitional: Vec<Vec<String>>,
    pub displayed: Vec<Vec<String>>,
    pub agrees: bool,
    pub displayed_contained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    pub entries: Vec<LadderEntry>,
    /// `E_1^i` against the adapted form displayed for it.
    pub displayed: Vec<DisplayedComparison>,
    pub mismatch_flagged: bool,
    /// Whether `E_2` computed from the displayed `E_1^1` still equals `E_2`.
    pub displayed_recursion_reproduces: Option<bool>,
    pub stages: Vec<Vec<Vec<String>>>,
}

fn random_divisor_monomial(vars: &[usize], n: usize, rng: &mut ChaCha8Rng) -> Monomial {
    let mut e = vec![0u32; n];
    for &v in vars {
        e[v] = rng.gen_range(0..=2);
    }
    Monomial::from_exponents(e)
}

fn sample(l: &LatticeBasis, vars: &[usize], rng: &mut ChaCha8Rng) -> Vec<FracEntry> {
    let ring = l.ring();
    let mut v = vec![FracEntry::zero(ring); l.rank()];
    for col in l.columns() {
        let c: Poly = random_poly(ring, rng, 1).mul_monomial(&random_divisor_monomial(
            vars,
            ring.nvars(),
            rng,
        ));
        for (a, e) in v.iter_mut().zip(col) {
            *a = a.add(&e.mul_poly(&c)).normalized();
        }
    }
    v
}

fn audit_failure(label: &str, witness: &[FracEntry]) -> ModError {
    ModError::AuditFailure {
        lattice: label.to_string(),
        witness: witness.iter().map(ToString::to_string).collect(),
    }
}

/// Certifies every `E_j^i` as the intersection `E_{j-1}^{i+1}(t_j) ∩ E_j`:
/// its columns lie in both, and `samples` seeded elements of each
/// intersectand that fall into the other also fall into `E_j^i`. Compares
/// each `E_1^i` with its displayed adapted form.
pub fn ladder(
    d: &EchelonDatum,
    c: &ModificationChain,
    seed: u64,
    samples: usize,
) -> Result<LadderReport, ModError> {
    let m = d.len();
    let chain = d.chain();
    let vars = chain.divisor_vars();
    let mut entries = Vec::new();
    for j in 1..=m {
        for i in 1..=m - j {
            let source = if j == 1 {
                d.level(i + 1)
            } else {
                c.ladder_entry(j - 1, i + 1)
            };
            let a = twist(source, chain.t(j), TwistDirection::Up);
            let b = &c.stages[j];
            let l = c.ladder_entry(j, i);
            let label = format!("E_{j}^{i}");
            for side in [&a, b] {
                if let Some(k) = first_non_member(l, side)? {
                    return Err(audit_failure(&label, &l.columns()[k]));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((j * (m + 1) + i) as u64));
            let mut common = 0;
            for s in 0..samples {
                let (from, other) = if s % 2 == 0 { (&a, b) } else { (b, &a) };
                let v = sample(from, &vars, &mut rng);
                if is_member(&v, other)? {
                    common += 1;
                    if !is_member(&v, l)? {
                        return Err(audit_failure(&label, &v));
                    }
                }
            }
            entries.push(LadderEntry {
                j,
                i,
                lattice: l.to_rows(),
                columns_certified: true,
                audit_samples: samples,
                audit_common: common,
            });
        }
    }

    let dec = &c.decomposition;
    let levels = dec.levels();
    let mut displayed = Vec::new();
    for i in 1..m {
        let def = c.ladder_entry(1, i);
        let shown = adapted(
            dec,
            d,
            &displayed_first_ladder(chain, &levels, i),
            format!("displayed E_1^{i}"),
        )?;
        displayed.push(DisplayedComparison {
            i,
            definitional: def.to_rows(),
            displayed: shown.to_rows(),
            agrees: lattice_equal(def, &shown)?,
            displayed_contained: crate::lattice::contains(def, &shown)?,
        });
    }
    let displayed_recursion_reproduces = if m >= 2 {
        let shown = displayed_first_ladder(chain, &levels, 1);
        match join(&twist_up(&shown, chain.y(2)), c.diagonal.stage(1)) {
            Ok(e2) => Some(lattice_equal(
                &adapted(dec, d, &e2, "E_2".into())?,
                &c.stages[2],
            )?),
            Err(_) => Some(false),
        }
    } else {
        None
    };
    Ok(LadderReport {
        entries,
        mismatch_flagged: displayed.iter().any(|x| !x.agrees),
        displayed,
        displayed_recursion_reproduces,
        stages: c.stages.iter().map(LatticeBasis::to_rows).collect(),
    })
}
