use proptest::prelude::*;
use rand::SeedableRng;

use super::*;
use crate::echelon::{default_ring, random_datum_with_basis, DivisorChain, GenParams, Scramble};
use crate::modification::modify;
use crate::poly::{parse_monomial, Field};

fn ring2() -> Ring {
    default_ring(Field::Rational, 3)
}

fn lat(rows: &[&[&str]]) -> LatticeBasis {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    LatticeBasis::from_rows(&ring2(), &rows, "E").unwrap()
}

fn datum(t: &str, y: &str, rows: &[&[&str]]) -> EchelonDatum {
    let r = ring2();
    let chain = DivisorChain::scalar(
        &r,
        parse_monomial(&r, t).unwrap(),
        parse_monomial(&r, y).unwrap(),
        1,
    );
    EchelonDatum::new(chain, vec![lat(rows)]).unwrap()
}

fn left() -> EchelonDatum {
    datum("x1*y1", "y1", &[&["1", "0"], &["0", "x1*y1"]])
}

fn right() -> EchelonDatum {
    datum("x2*y2", "y2", &[&["x2*y2", "0"], &["0", "1"]])
}

fn eq(a: &LatticeBasis, b: &LatticeBasis) -> bool {
    lattice_equal(a, b).unwrap()
}

#[test]
fn transversality_examples() {
    let p = PolyEchelonDatum::new(vec![left(), right()]).unwrap();
    assert!(check_transverse(&p).unwrap().transverse);

    let same_pair = datum("x1*y1", "y1", &[&["x1*y1", "0"], &["0", "1"]]);
    let p = PolyEchelonDatum::new(vec![left(), same_pair]).unwrap();
    let rep = check_transverse(&p).unwrap();
    assert!(!rep.transverse);
    assert_eq!(rep.shared_variables, vec![(0, 1)]);

    let p = PolyEchelonDatum::new(vec![left()]).unwrap();
    assert!(check_transverse(&p).unwrap().transverse);
}

#[test]
fn induced_examples() {
    // trivial χ′ induces the trivial datum on Mod(χ, E)
    let trivial = datum("1", "1", &[&["1", "0"], &["0", "1"]]);
    let ind = induced_datum(&left(), &trivial).unwrap();
    let m = modify(&left()).unwrap();
    assert!(eq(&ind.base, m.last()));
    assert!(eq(&ind.levels[0], m.last()));

    // χ with y = 1 leaves χ′ unchanged
    let flat = datum("x1", "1", &[&["1", "0"], &["0", "x1"]]);
    let ind = induced_datum(&flat, &right()).unwrap();
    assert!(eq(&ind.base, &LatticeBasis::standard(&ring2(), 2)));
    assert!(eq(&ind.levels[0], right().level(1)));

    // same blocks: level 1 is Mod(χ, E′^1), by the entrywise rule diag(x2y2/y1, 1)
    let ind = induced_datum(&left(), &right()).unwrap();
    assert!(eq(&ind.levels[0], &lat(&[&["x2*y2/y1", "0"], &["0", "1"]])));
    assert!(validate_datum(&ind.relative).unwrap().valid);
}

#[test]
fn poly_modify_examples() {
    let p = PolyEchelonDatum::new(vec![left()]).unwrap();
    let s = poly_modify(&p, &[0]).unwrap();
    assert!(eq(s.last(), modify(&left()).unwrap().last()));

    let p = PolyEchelonDatum::new(vec![left(), right()]).unwrap();
    let expected = lat(&[&["1/y1", "0"], &["0", "1/y2"]]);
    for order in [[0, 1], [1, 0]] {
        let s = poly_modify(&p, &order).unwrap();
        assert!(eq(s.last(), &expected));
        assert!(crate::lattice::contains(&s.stages[1], &s.stages[0]).unwrap());
        assert!(crate::lattice::contains(&s.stages[2], &s.stages[1]).unwrap());
    }

    let flat = datum("x3", "1", &[&["1", "0"], &["0", "x3"]]);
    let p = PolyEchelonDatum::new(vec![left(), flat, right()]).unwrap();
    assert!(eq(poly_modify(&p, &[1, 2, 0]).unwrap().last(), &expected));
    assert!(poly_modify(&p, &[0, 0, 1]).is_err());
}

#[test]
fn order_examples() {
    let p = PolyEchelonDatum::new(vec![left()]).unwrap();
    assert!(order_independence_check(&p, 0).unwrap().agree);
    let p = PolyEchelonDatum::new(vec![left(), right()]).unwrap();
    let rep = order_independence_check(&p, 0).unwrap();
    assert!(rep.agree);
    assert_eq!(rep.orders.len(), 2);
    assert_eq!(permutations(3).len(), 6);
}

#[test]
fn three_data_all_orders() {
    let r = default_ring(Field::Rational, 3);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let u0 = Scramble::random(&r, 3, 3, 1, &mut rng);
    let data = (0..3)
        .map(|k| {
            let params = GenParams {
                seed: 40 + k as u64,
                rank: 3,
                length: 2,
                pair: k,
                ..GenParams::default()
            };
            random_datum_with_basis(&r, &params, &u0).unwrap().datum
        })
        .collect();
    let p = PolyEchelonDatum::new(data).unwrap();
    let rep = order_independence_check(&p, 3).unwrap();
    assert_eq!(rep.orders.len(), 6);
    assert!(rep.agree);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transverse_pairs_commute(seed in any::<u64>(), rank in 1usize..=3, m1 in 1usize..=2, m2 in 1usize..=2) {
        let r = ring2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u0 = Scramble::random(&r, rank, 2, 1, &mut rng);
        let a = GenParams { seed, rank, length: m1, pair: 0, ..GenParams::default() };
        let b = GenParams { seed: seed ^ 1, rank, length: m2, pair: 1, ..GenParams::default() };
        let p = PolyEchelonDatum::new(vec![
            random_datum_with_basis(&r, &a, &u0).unwrap().datum,
            random_datum_with_basis(&r, &b, &u0).unwrap().datum,
        ]).unwrap();
        prop_assert!(check_transverse(&p).unwrap().transverse);
        prop_assert!(order_independence_check(&p, seed).unwrap().agree);
    }
}
