//! Determinant and K-class bookkeeping along a modification chain.

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::echelon::EchelonDatum;
use crate::modification::{quotient_report, ModError, ModificationChain};

/// Orders of a divisor class along each variable, in declared variable
/// order; zero entries are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorClassLedger {
    pub coefficients: Vec<(String, i64)>,
}

impl DivisorClassLedger {
    fn from_exponents(names: &[String], exps: &[i64]) -> DivisorClassLedger {
        let coefficients = names
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e != 0)
            .map(|(n, &e)| (n.clone(), e))
            .collect();
        DivisorClassLedger { coefficients }
    }

    pub fn get(&self, var: &str) -> i64 {
        self.coefficients
            .iter()
            .find(|(v, _)| v == var)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl Serialize for DivisorClassLedger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coefficients.len()))?;
        for (k, v) in &self.coefficients {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// `ord(det E_i / det E_0)` for every stage, checked against the count of
/// columns that each `y_k` has been divided out of.
pub fn det_ledger(
    d: &EchelonDatum,
    c: &ModificationChain,
) -> Result<Vec<DivisorClassLedger>, ModError> {
    let ring = d.ring();
    let n = ring.nvars();
    let chain = d.chain();
    let m = d.len();
    let ranks = &c.decomposition.ranks;
    let base = c.stages[0].det_divisor();
    let mut out = Vec::with_capacity(m + 1);
    for (i, stage) in c.stages.iter().enumerate() {
        let ratio = stage.det_divisor().div(&base);
        let exps: Vec<i64> = ratio.exponents().iter().map(|&e| e as i64).collect();
        let mut expected = vec![0i64; n];
        for k in 1..=i {
            let q: usize = ranks[..=m - k].iter().sum();
            for (v, &e) in chain.y(k).exponents().iter().enumerate() {
                expected[v] -= q as i64 * e as i64;
            }
        }
        if exps != expected {
            return Err(ModError::ClosedFormMismatch {
                stage: format!("det E_{i}"),
                detail: format!("ledger {exps:?} but expected {expected:?}"),
            });
        }
        out.push(DivisorClassLedger::from_exponents(ring.vars(), &exps));
    }
    Ok(out)
}

/// `[E_{j+1}] - [E_j]`: a free module of rank `rank` over `R/(annihilator)`
/// twisted by `1/(y_1⋯y_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KClass {
    pub step: usize,
    pub rank: usize,
    pub annihilator: String,
    pub twist: String,
}

/// The nonzero quotient classes of the chain, consistent with `quotient_report`.
pub fn k_class_report(d: &EchelonDatum, c: &ModificationChain) -> Result<Vec<KClass>, ModError> {
    let chain = d.chain();
    let ring = d.ring();
    let quotients = quotient_report(d, c)?;
    Ok(quotients
        .into_iter()
        .enumerate()
        .filter(|(j, q)| q.descriptor.free_rank > 0 && !chain.y(j + 1).is_one())
        .map(|(j, q)| KClass {
            step: j,
            rank: q.descriptor.free_rank,
            annihilator: q.descriptor.annihilator,
            twist: format!("1/{}", ring.format_monomial(&chain.big_d(j + 1))),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::echelon::{default_ring, random_datum, ChainStyle, DivisorChain, GenParams};
    use crate::lattice::LatticeBasis;
    use crate::modification::modify;
    use crate::poly::{parse_monomial, Field};
    use proptest::prelude::*;

    fn datum(t: &str, y: &str, levels: &[&[&[&str]]]) -> EchelonDatum {
        let r = default_ring(Field::Rational, 1);
        let chain = DivisorChain::scalar(
            &r,
            parse_monomial(&r, t).unwrap(),
            parse_monomial(&r, y).unwrap(),
            levels.len(),
        );
        let lats = levels
            .iter()
            .map(|rows| {
                let rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| r.iter().map(|s| s.to_string()).collect())
                    .collect();
                LatticeBasis::from_rows(&r, &rows, "E").unwrap()
            })
            .collect();
        EchelonDatum::new(chain, lats).unwrap()
    }

    fn r2() -> EchelonDatum {
        datum(
            "xy",
            "y",
            &[
                &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "xy"]],
                &[&["1", "0", "0"], &["0", "xy", "0"], &["0", "0", "x^2y^2"]],
            ],
        )
    }

    #[test]
    fn ledger_examples() {
        let r1 = datum("xy", "y", &[&[&["1", "0"], &["0", "xy"]]]);
        let l = det_ledger(&r1, &modify(&r1).unwrap()).unwrap();
        assert!(l[0].is_zero());
        assert_eq!(l[1].coefficients, vec![("y".to_string(), -1)]);

        let d = r2();
        let l = det_ledger(&d, &modify(&d).unwrap()).unwrap();
        assert_eq!(l[2].get("y"), -3);
        assert_eq!(serde_json::to_string(&l[2]).unwrap(), r#"{"y":-3}"#);

        let flat = datum("x", "1", &[&[&["1", "0"], &["0", "x"]]]);
        let l = det_ledger(&flat, &modify(&flat).unwrap()).unwrap();
        assert!(l.iter().all(DivisorClassLedger::is_zero));
    }

    #[test]
    fn k_class_examples() {
        let r1 = datum("xy", "y", &[&[&["1", "0"], &["0", "xy"]]]);
        let k = k_class_report(&r1, &modify(&r1).unwrap()).unwrap();
        assert_eq!(
            k,
            vec![KClass {
                step: 0,
                rank: 1,
                annihilator: "y".into(),
                twist: "1/y".into()
            }]
        );
        let d = r2();
        let k = k_class_report(&d, &modify(&d).unwrap()).unwrap();
        assert_eq!(k.iter().map(|c| c.rank).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(k[1].twist, "1/y^2");
        let flat = datum("x", "1", &[&[&["1", "0"], &["0", "x"]]]);
        assert!(k_class_report(&flat, &modify(&flat).unwrap())
            .unwrap()
            .is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn ledgers_telescope_and_match_classes(seed in any::<u64>(), rank in 1usize..=3, length in 1usize..=3) {
            let r = default_ring(Field::Rational, 1);
            let params = GenParams { seed, rank, length, chain: ChainStyle::Random, ..GenParams::default() };
            let d = random_datum(&r, &params).unwrap().datum;
            let c = modify(&d).unwrap();
            let ledgers = det_ledger(&d, &c).unwrap();
            let classes = k_class_report(&d, &c).unwrap();
            // each class of rank q over R/(y^e) lowers ord_y(det) by q·e
            let from_classes: i64 = classes
                .iter()
                .map(|k| k.rank as i64 * d.chain().y(k.step + 1).degree() as i64)
                .sum();
            prop_assert_eq!(ledgers[length].get("y"), -from_classes);
            prop_assert!(ledgers[length].coefficients.iter().all(|(v, _)| v == "y"));
        }
    }
}
