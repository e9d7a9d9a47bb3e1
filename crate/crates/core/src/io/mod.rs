//! Datum files (TOML) and the command-line front end.

pub mod cli;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::echelon::{ChainStep, DivisorChain, EchelonDatum};
use crate::lattice::{LatticeBasis, LatticeError};
use crate::modification::MapToLine;
use crate::poly::{parse_monomial, parse_poly, Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(location: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepEntry {
    pub t: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumEntry {
    pub chain: Vec<StepEntry>,
    /// `E^1, …, E^m`, each a list of rows.
    pub filtration: Vec<Vec<Vec<String>>>,
}

/// The on-disk form of one or more echelon data sharing a variable table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub field: String,
    pub vars: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub datum: Vec<DatumEntry>,
}

/// A parsed datum file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub ring: Ring,
    pub data: Vec<EchelonDatum>,
    pub phi: Option<MapToLine>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

/// `Q` or `Fp:<p>` with `p` prime.
pub fn parse_field(text: &str) -> Option<Field> {
    match text.trim() {
        "Q" => Some(Field::Rational),
        s => s
            .strip_prefix("Fp:")
            .and_then(|p| p.parse().ok())
            .and_then(Field::prime),
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<DatumFile, ParseError> {
        toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let (l, c) = line_col(text, span.start);
                    format!("line {l}, column {c}")
                }
                None => "file".to_string(),
            };
            err(location, e.message().to_string())
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("datum files serialize")
    }

    /// Builds the objects, with the field optionally overridden.
    pub fn load(&self, field: Option<Field>) -> Result<Loaded, ParseError> {
        let field = match field {
            Some(f) => f,
            None => parse_field(&self.field)
                .ok_or_else(|| err("field", format!("unknown field {:?}", self.field)))?,
        };
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = self
            .pairs
            .iter()
            .map(|[x, y]| (x.as_str(), y.as_str()))
            .collect();
        let ring = Ring::new(field, &vars, &pairs).map_err(|e| err("vars", e.to_string()))?;
        if self.datum.is_empty() {
            return Err(err("datum", "at least one datum is required"));
        }
        let data = self
            .datum
            .iter()
            .enumerate()
            .map(|(k, entry)| load_datum(&ring, entry, &format!("datum[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let phi = match &self.phi {
            Some(row) => {
                let row = row
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        parse_poly(&ring, s).map_err(|e| {
                            err(format!("phi[{k}], character {}", e.position), e.message)
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != data[0].rank() {
                    return Err(err(
                        "phi",
                        format!("{} entries for rank {}", row.len(), data[0].rank()),
                    ));
                }
                Some(MapToLine { row })
            }
            None => None,
        };
        Ok(Loaded {
            ring,
            data,
            phi,
            seed: self.seed,
            trials: self.trials,
        })
    }

    /// The file describing the given data.
    pub fn from_data(data: &[EchelonDatum]) -> DatumFile {
        let ring = data[0].ring();
        DatumFile {
            field: ring.field().to_string(),
            vars: ring.vars().to_vec(),
            pairs: ring
                .pairs()
                .iter()
                .map(|&(x, y)| [ring.vars()[x].clone(), ring.vars()[y].clone()])
                .collect(),
            phi: None,
            seed: None,
            trials: None,
            datum: data
                .iter()
                .map(|d| DatumEntry {
                    chain: (1..=d.len())
                        .map(|i| {
                            let (t, y) = d.chain().format_step(i);
                            StepEntry { t, y }
                        })
                        .collect(),
                    filtration: d.levels().iter().map(LatticeBasis::to_rows).collect(),
                })
                .collect(),
        }
    }
}

fn load_datum(ring: &Ring, entry: &DatumEntry, at: &str) -> Result<EchelonDatum, ParseError> {
    if entry.chain.is_empty() {
        return Err(err(
            format!("{at}.chain"),
            "chain length must be at least 1",
        ));
    }
    if entry.filtration.len() != entry.chain.len() {
        return Err(err(
            format!("{at}.filtration"),
            format!(
                "{} levels for a chain of length {}",
                entry.filtration.len(),
                entry.chain.len()
            ),
        ));
    }
    let mono = |s: &str, loc: String| {
        parse_monomial(ring, s)
            .map_err(|e| err(format!("{loc}, character {}", e.position), e.message))
    };
    let steps = entry
        .chain
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(ChainStep {
                t: mono(&s.t, format!("{at}.chain[{i}].t"))?,
                y: mono(&s.y, format!("{at}.chain[{i}].y"))?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let chain = DivisorChain::new(ring, steps);
    let mut levels = Vec::with_capacity(entry.filtration.len());
    for (i, rows) in entry.filtration.iter().enumerate() {
        let loc = format!("{at}.filtration[{i}]");
        let r = rows.len();
        if let Some((k, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != r) {
            return Err(err(
                format!("{loc}[{k}]"),
                format!("{} entries in a {r}x{r} matrix", row.len()),
            ));
        }
        let lattice =
            LatticeBasis::from_rows(ring, rows, format!("E^{}", i + 1)).map_err(|e| match e {
                LatticeError::Syntax(text, s) => {
                    let (row, col) = locate(rows, &text);
                    err(
                        format!("{loc}[{row}][{col}], character {}", s.position),
                        format!("{} in {text:?}", s.message),
                    )
                }
                e => err(loc.clone(), e.to_string()),
            })?;
        levels.push(lattice);
    }
    EchelonDatum::new(chain, levels).map_err(|e| err(at, e.to_string()))
}

fn locate(rows: &[Vec<String>], text: &str) -> (usize, usize) {
    for (i, row) in rows.iter().enumerate() {
        if let Some(j) = row.iter().position(|s| s == text) {
            return (i, j);
        }
    }
    (0, 0)
}
