use serde::Serialize;

use crate::lattice::{
    contains, local_split_rank, quotient_structure, relative_coordinates, twist, LatticeError,
    TwistDirection,
};

use super::{EchelonDatum, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PersistenceVerdict {
    pub j: usize,
    /// Rank of the split free image of `E^i` in `E^j ⊗ R/(t_i)`, if it is split free.
    pub image_rank: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepVerdict {
    pub i: usize,
    pub containment: bool,
    pub twisted_containment: bool,
    pub effective: bool,
    pub no_common_component: bool,
    /// Rank of `H^i = E^i / t_i E^{i-1}` over `R/(t_i)`, when free.
    pub h_rank: Option<usize>,
    pub persistence: Vec<PersistenceVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub steps: Vec<StepVerdict>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// The least violating `(i, j)` of the persistence condition.
    pub fn persistence_violation(&self) -> Option<(usize, usize)> {
        self.violations.iter().find_map(|v| match v {
            Violation::Persistence { i, j } => Some((*i, *j)),
            _ => None,
        })
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Checks every clause of the echelon-datum definition, step by step.
///
/// Persistence is checked against every `j < i`: the image of `E^i` in
/// `E^j ⊗ R/(t_i)` must be split free of the same rank as `H^i`, which makes
/// the surjection `H^i → image` an isomorphism.
pub fn validate_datum(d: &EchelonDatum) -> Result<ValidationReport, LatticeError> {
    let chain = d.chain();
    let chain_violations = chain.violations();
    let mut steps = Vec::with_capacity(d.len());
    let mut violations = Vec::new();
    let mut nested_so_far = true;
    for i in 1..=d.len() {
        let prev = d.level(i - 1);
        let cur = d.level(i);
        let t = chain.t(i);
        let containment = contains(prev, cur)?;
        let lowered = twist(prev, t, TwistDirection::Down);
        let twisted_containment = contains(cur, &lowered)?;
        let effective = !chain_violations.contains(&Violation::Effectivity { i });
        let no_common_component = !chain_violations.contains(&Violation::CommonComponent { i });
        if !containment {
            violations.push(Violation::Containment { i });
        }
        if !twisted_containment {
            violations.push(Violation::TwistedContainment { i });
        }
        if !effective {
            violations.push(Violation::Effectivity { i });
        }
        if !no_common_component {
            violations.push(Violation::CommonComponent { i });
        }
        nested_so_far &= containment;

        let mut h_rank = None;
        let mut persistence = Vec::new();
        if nested_so_far && twisted_containment {
            h_rank = match quotient_structure(&lowered, cur, t) {
                Ok(q) => Some(q.free_rank),
                Err(LatticeError::NotFreeSplit { .. }) => None,
                Err(e) => return Err(e),
            };
            for j in 0..i {
                let image_rank = if t.is_one() {
                    Some(0)
                } else {
                    let coords = relative_coordinates(cur, d.level(j))?;
                    local_split_rank(&coords, t)
                };
                let ok = h_rank.is_some() && image_rank == h_rank;
                if !ok {
                    violations.push(Violation::Persistence { i, j });
                }
                persistence.push(PersistenceVerdict { j, image_rank, ok });
            }
        }
        steps.push(StepVerdict {
            i,
            containment,
            twisted_containment,
            effective,
            no_common_component,
            h_rank,
            persistence,
        });
    }
    Ok(ValidationReport {
        valid: violations.is_empty(),
        steps,
        violations,
    })
}
