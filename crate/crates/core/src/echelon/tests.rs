use proptest::prelude::*;

use super::*;
use crate::lattice::lattice_equal;
use crate::poly::{parse_monomial, parse_poly, Field, Poly};

fn ring() -> Ring {
    default_ring(Field::Rational, 1)
}

fn lat(rows: &[&[&str]]) -> LatticeBasis {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    LatticeBasis::from_rows(&ring(), &rows, "E").unwrap()
}

fn scalar_chain(m: usize) -> DivisorChain {
    let r = ring();
    DivisorChain::scalar(
        &r,
        parse_monomial(&r, "xy").unwrap(),
        parse_monomial(&r, "y").unwrap(),
        m,
    )
}

fn r1() -> EchelonDatum {
    EchelonDatum::new(scalar_chain(1), vec![lat(&[&["1", "0"], &["0", "xy"]])]).unwrap()
}

fn r2() -> EchelonDatum {
    EchelonDatum::new(
        scalar_chain(2),
        vec![
            lat(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "xy"]]),
            lat(&[&["1", "0", "0"], &["0", "xy", "0"], &["0", "0", "x^2y^2"]]),
        ],
    )
    .unwrap()
}

fn round_trips(d: &EchelonDatum) -> EchelonDecomposition {
    let dec = decompose(d).unwrap();
    let back = reassemble(&dec, d.chain()).unwrap();
    for i in 1..=d.len() {
        assert!(
            lattice_equal(back.level(i), d.level(i)).unwrap(),
            "level {i}"
        );
    }
    dec
}

#[test]
fn validate_examples() {
    assert!(validate_datum(&r1()).unwrap().valid);
    assert!(validate_datum(&r2()).unwrap().valid);

    let d = EchelonDatum::new(scalar_chain(1), vec![lat(&[&["x", "0"], &["0", "1"]])]).unwrap();
    let rep = validate_datum(&d).unwrap();
    assert!(!rep.valid);
    assert_eq!(rep.persistence_violation(), Some((1, 0)));
    assert_eq!(
        rep.first_violation().unwrap().to_string(),
        "PersistenceViolation(i=1, j=0)"
    );

    let d = EchelonDatum::new(scalar_chain(1), vec![lat(&[&["1/y", "0"], &["0", "1"]])]).unwrap();
    let rep = validate_datum(&d).unwrap();
    assert_eq!(
        rep.first_violation(),
        Some(&Violation::Containment { i: 1 })
    );
}

#[test]
fn decompose_examples() {
    assert_eq!(round_trips(&r1()).ranks, vec![1, 1]);
    assert_eq!(round_trips(&r2()).ranks, vec![1, 1, 1]);

    let r = ring();
    let p = |s: &str| parse_poly(&r, s).unwrap();
    let g = vec![vec![p("1"), p("0")], vec![p("x"), p("1")]];
    let scrambled = r1().level(1).transform(&g).unwrap();
    let d = EchelonDatum::new(scalar_chain(1), vec![scrambled]).unwrap();
    assert_eq!(round_trips(&d).ranks, vec![1, 1]);
}

#[test]
fn decompose_reports_violation() {
    let d = EchelonDatum::new(scalar_chain(1), vec![lat(&[&["x", "0"], &["0", "1"]])]).unwrap();
    assert_eq!(
        decompose(&d),
        Err(DatumError::Invalid(Violation::Persistence { i: 1, j: 0 }))
    );
}

#[test]
fn reassemble_examples() {
    let r = ring();
    let id = Scramble::identity(&r, 2).columns();
    let dec = EchelonDecomposition {
        ranks: vec![1, 1],
        basis: id.clone(),
    };
    let d = reassemble(&dec, &scalar_chain(1)).unwrap();
    assert!(lattice_equal(d.level(1), r1().level(1)).unwrap());

    let dec = EchelonDecomposition {
        ranks: vec![2, 0],
        basis: id.clone(),
    };
    let d = reassemble(&dec, &scalar_chain(1)).unwrap();
    assert!(lattice_equal(d.level(1), &LatticeBasis::standard(&r, 2)).unwrap());

    let dec = EchelonDecomposition {
        ranks: vec![2, 1],
        basis: id,
    };
    assert_eq!(
        reassemble(&dec, &scalar_chain(1)).unwrap_err(),
        DatumError::RankMismatch {
            expected: 2,
            found: 3
        }
    );
}

#[test]
fn generator_examples() {
    let r = ring();
    let params = GenParams {
        seed: 1,
        rank: 2,
        length: 1,
        ranks: Some(vec![1, 1]),
        degree_bound: 1,
        scramble_count: 0,
        ..GenParams::default()
    };
    let g = random_datum(&r, &params).unwrap();
    assert_eq!(g.datum.level(1).to_rows(), r1().level(1).to_rows());

    let g = random_datum(
        &r,
        &GenParams {
            scramble_count: 3,
            ..params.clone()
        },
    )
    .unwrap();
    assert!(validate_datum(&g.datum).unwrap().valid);
    assert_eq!(round_trips(&g.datum).ranks, vec![1, 1]);

    // everything in the top block: E^i = (t_1⋯t_i) R^r
    let g = random_datum(
        &r,
        &GenParams {
            ranks: Some(vec![0, 0, 2]),
            length: 2,
            ..params
        },
    )
    .unwrap();
    let t2 = parse_monomial(&r, "x^2y^2").unwrap();
    let std = LatticeBasis::standard(&r, 2);
    let expected = crate::lattice::twist(&std, &t2, crate::lattice::TwistDirection::Down);
    assert!(lattice_equal(g.datum.level(2), &expected).unwrap());
}

#[test]
fn prime_field_round_trip() {
    let r = default_ring(Field::prime(101).unwrap(), 1);
    for seed in 0..5 {
        let params = GenParams {
            seed,
            rank: 3,
            length: 2,
            scramble_count: 4,
            ..GenParams::default()
        };
        let g = random_datum(&r, &params).unwrap();
        assert_eq!(round_trips(&g.datum).ranks, g.ranks);
    }
}

#[test]
fn scramble_inverse() {
    use rand::SeedableRng;
    let r = ring();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let s = Scramble::random(&r, 3, 5, 2, &mut rng);
    for i in 0..3 {
        for j in 0..3 {
            let e = (0..3).fold(Poly::zero(&r), |acc, k| {
                &acc + &(&s.matrix[i][k] * &s.inverse[k][j])
            });
            assert_eq!(
                e,
                if i == j {
                    Poly::one(&r)
                } else {
                    Poly::zero(&r)
                }
            );
        }
    }
}

fn style() -> impl Strategy<Value = ChainStyle> {
    prop_oneof![
        Just(ChainStyle::Scalar),
        Just(ChainStyle::Random),
        Just(ChainStyle::FullD),
        Just(ChainStyle::TrivialY)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_data_validate_and_round_trip(
        seed in any::<u64>(), rank in 1usize..=3, length in 1usize..=2, scrambles in 0usize..=3, chain in style()
    ) {
        let r = ring();
        let params = GenParams { seed, rank, length, scramble_count: scrambles, chain, ..GenParams::default() };
        let g = random_datum(&r, &params).unwrap();
        prop_assert!(validate_datum(&g.datum).unwrap().valid);
        let dec = decompose(&g.datum).unwrap();
        let back = reassemble(&dec, g.datum.chain()).unwrap();
        for i in 1..=length {
            prop_assert!(lattice_equal(back.level(i), g.datum.level(i)).unwrap());
        }
        // the rank vector does not depend on the decomposition found
        prop_assert_eq!(&decompose(&back).unwrap().ranks, &dec.ranks);
        if !g.datum.chain().steps().iter().any(|s| s.t.is_one()) {
            prop_assert_eq!(&dec.ranks, &g.ranks);
        }
    }
}
