//! Echelon modification: the ascending chain `E = E_0 ⊆ E_1 ⊆ … ⊆ E_m` and
//! its ladder `E_j^i`, computed by the defining recursion in adapted
//! coordinates, with closed-form certification, the extension property for
//! maps to a line, and compatibility with ring maps and automorphisms.

pub mod diag;
mod extend;
mod ladder;
mod maps;


use serde::Serialize;

use crate::echelon::{decompose, validate_datum, DatumError, EchelonDatum, EchelonDecomposition};
use crate::lattice::{
    contains, lattice_equal, quotient_structure, twist, LatticeBasis, LatticeError,
    QuotientDescriptor, TwistDirection,
};
use crate::poly::LaurentMonomial;

pub use diag::{DiagDatum, DiagRun};
pub use extend::{
    apply_map, check_hypothesis, extend_map, maximality_probe, probe_candidate, ExtensionReport,
    LevelCheck, MapToLine, ProbeRecord, ProbeReport,
};
pub use ladder::{ladder, DisplayedComparison, LadderEntry, LadderReport};
pub use maps::{
    functoriality_transport, pullback_commute, transport_datum, CommutationReport, RingMap,
    StageCheck, TransportReport,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModError {
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("ClosedFormMismatch at {stage}: {detail}")]
    ClosedFormMismatch { stage: String, detail: String },
    #[error("sum at stage {stage} is not principal in coordinate {column}")]
    NonPrincipalSum { stage: usize, column: usize },
    #[error("AuditFailure for {lattice}: witness {witness:?} lies in both intersectands but not in the intersection")]
    AuditFailure {
        lattice: String,
        witness: Vec<String>,
    },
    #[error(
        "HypothesisFail(i={i}, column={column}): φ({witness}) = {value} is not divisible by D_{i}"
    )]
    HypothesisFail {
        i: usize,
        column: usize,
        witness: String,
        value: String,
    },
    #[error("ExtensionFail: φ takes the non-polynomial value {value} on column {column} of Mod")]
    ExtensionFail { column: usize, value: String },
    #[error("MapUnsupported: {0}")]
    MapUnsupported(String),
    #[error("NotUnimodular: determinant {0} is not a local unit")]
    NotUnimodular(String),
}

impl ModError {
    /// Failures that contradict a proven statement rather than the input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ModError::ClosedFormMismatch { .. }
                | ModError::NonPrincipalSum { .. }
                | ModError::AuditFailure { .. }
                | ModError::ExtensionFail { .. }
                | ModError::Datum(DatumError::DecompositionBreach { .. })
        )
    }
}

/// `E_0 ⊆ … ⊆ E_m` with the ladder `E_j^i` and the adapted basis used.
#[derive(Clone, Debug)]
pub struct ModificationChain {
    pub stages: Vec<LatticeBasis>,
    /// `ladder[j - 1][i - 1] = E_j^i` for `j ≥ 1`, `1 ≤ i ≤ m - j`.
    pub ladder: Vec<Vec<LatticeBasis>>,
    pub decomposition: EchelonDecomposition,
    pub diagonal: DiagRun,
}

impl ModificationChain {
    pub fn len(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.stages.len() <= 1
    }

    pub fn last(&self) -> &LatticeBasis {
        &self.stages[self.len()]
    }

    pub fn ladder_entry(&self, j: usize, i: usize) -> &LatticeBasis {
        &self.ladder[j - 1][i - 1]
    }
}

pub(crate) fn adapted(
    dec: &EchelonDecomposition,
    d: &EchelonDatum,
    diag: &[LaurentMonomial],
    label: String,
) -> Result<LatticeBasis, LatticeError> {
    LatticeBasis::from_adapted(d.ring(), &dec.basis, diag, label)
}

/// Runs the modification recursion on a validated datum and certifies the
/// closed forms of every stage together with `E^i(D_i) ⊆ E_i`.
pub fn modify(d: &EchelonDatum) -> Result<ModificationChain, ModError> {
    let report = validate_datum(d)?;
    if let Some(v) = report.violations.into_iter().next() {
        return Err(DatumError::Invalid(v).into());
    }
    let dec = decompose(d)?;
    let levels = dec.levels();
    let chain = d.chain();
    let m = d.len();
    let diag_levels = (0..=m)
        .map(|i| {
            levels
                .iter()
                .map(|&l| crate::echelon::coefficient(chain, i, l).to_laurent())
                .collect()
        })
        .collect();
    let run = diag::run(&DiagDatum {
        chain: chain.clone(),
        levels: diag_levels,
    })
    .map_err(|(stage, column)| ModError::NonPrincipalSum { stage, column })?;

    let mut stages = Vec::with_capacity(m + 1);
    for j in 0..=m {
        stages.push(adapted(&dec, d, run.stage(j), format!("E_{j}"))?);
    }
    let mut ladder_lattices = Vec::with_capacity(m);
    for j in 1..=m {
        let row = (1..=m - j)
            .map(|i| adapted(&dec, d, &run.ladder[j][i], format!("E_{j}^{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        ladder_lattices.push(row);
    }

    let mismatch = |stage: String, detail: &str| ModError::ClosedFormMismatch {
        stage,
        detail: detail.to_string(),
    };
    if !lattice_equal(&stages[0], d.level(0))? {
        return Err(mismatch("E_0".into(), "differs from E"));
    }
    for i in 1..=m {
        let expected = adapted(
            &dec,
            d,
            &diag::closed_form(chain, &levels, i),
            format!("closed E_{i}"),
        )?;
        if !lattice_equal(&stages[i], &expected)? {
            return Err(mismatch(format!("E_{i}"), "differs from the closed form"));
        }
        if !contains(&stages[i], &stages[i - 1])? {
            return Err(mismatch(
                format!("E_{i}"),
                "does not contain the previous stage",
            ));
        }
        let twisted = twist(d.level(i), &chain.big_d(i), TwistDirection::Up);
        if !contains(&stages[i], &twisted)? {
            return Err(mismatch(format!("E_{i}"), "does not contain E^i(D_i)"));
        }
    }
    Ok(ModificationChain {
        stages,
        ladder: ladder_lattices,
        decomposition: dec,
        diagonal: run,
    })
}

/// One step `E_j ⊆ E_{j+1}` of the chain, certified free over `R/(y_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientStep {
    #[serde(flatten)]
    pub descriptor: QuotientDescriptor,
    pub expected_rank: usize,
}

/// Certifies `E_{j+1}/E_j` for every `j`: killed by `y_{j+1}` and free of rank
/// `r_0 + … + r_{m-j-1}` over `R/(y_{j+1})`.
pub fn quotient_report(
    d: &EchelonDatum,
    c: &ModificationChain,
) -> Result<Vec<QuotientStep>, ModError> {
    let m = d.len();
    let ranks = &c.decomposition.ranks;
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let y = d.chain().y(j + 1);
        let mut descriptor =
            quotient_structure(&c.stages[j], &c.stages[j + 1], y).map_err(|e| match e {
                LatticeError::NotFreeSplit { annihilator } => ModError::ClosedFormMismatch {
                    stage: format!("E_{}/E_{j}", j + 1),
                    detail: format!("not free over R/({annihilator})"),
                },
                e => e.into(),
            })?;
        descriptor.ambient_step = j;
        let expected_rank = if y.is_one() {
            0
        } else {
            ranks[..m - j].iter().sum()
        };
        if descriptor.free_rank != expected_rank {
            return Err(ModError::ClosedFormMismatch {
                stage: format!("E_{}/E_{j}", j + 1),
                detail: format!(
                    "free rank {} but expected {expected_rank}",
                    descriptor.free_rank
                ),
            });
        }
        out.push(QuotientStep {
            descriptor,
            expected_rank,
        });
    }
    Ok(out)
}
