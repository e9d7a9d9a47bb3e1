//! Exact multivariate polynomials over `Q` or `F_p`, with the monomial-ideal
//! and local-unit predicates used by the lattice layer.

mod monomial;
mod parse;
#[allow(clippy::module_inception)]
mod poly;
mod ring;
mod scalar;

pub use monomial::{LaurentMonomial, Monomial};
pub use parse::{parse_monomial, parse_poly, SyntaxError};
pub use poly::{poly_arith, ArithOp, Poly};
pub use ring::Ring;
pub use scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operands come from different variable tables")]
    VarTableMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("invalid variable name {0:?}")]
    BadVariable(String),
    #[error("invalid divisor pair ({0}, {1})")]
    BadPair(String, String),
}

/// `f` with every term divisible by `mu` deleted.
pub fn reduce_mod_monomial(f: &Poly, mu: &Monomial) -> Poly {
    f.reduce_mod_monomial(mu)
}

pub fn divide_exact(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    f.divide_exact(g)
}

pub fn is_local_unit(f: &Poly) -> bool {
    f.is_local_unit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Ring {
        Ring::new(Field::Rational, &["x", "y"], &[("x", "y")]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(&ring(), s).unwrap()
    }

    fn m(s: &str) -> Monomial {
        parse_monomial(&ring(), s).unwrap()
    }

    #[test]
    fn arith_examples() {
        assert_eq!(
            poly_arith(&p("x+y"), &p("x-y"), ArithOp::Add).unwrap(),
            p("2x")
        );
        assert!(poly_arith(&p("1+xy"), &p("0"), ArithOp::Mul)
            .unwrap()
            .is_zero());
        // distributivity: (1+xy)(1-xy) = 1 - xy + xy - x^2y^2
        let expanded = &(&(&p("1") - &p("xy")) + &p("xy")) - &p("x^2y^2");
        let prod = poly_arith(&p("1+xy"), &p("1-xy"), ArithOp::Mul).unwrap();
        assert_eq!(prod, expanded);
        assert_eq!(prod, p("1 - x^2y^2"));
    }

    #[test]
    fn arith_rejects_foreign_ring() {
        let other = Ring::new::<&str>(Field::Rational, &["x", "y", "z"], &[]).unwrap();
        let q = parse_poly(&other, "x").unwrap();
        assert_eq!(
            poly_arith(&p("x"), &q, ArithOp::Add),
            Err(PolyError::VarTableMismatch)
        );
    }

    #[test]
    fn divide_exact_examples() {
        assert_eq!(
            divide_exact(&p("x^2y + xy^2"), &p("xy")).unwrap(),
            p("x + y")
        );
        assert_eq!(
            divide_exact(&p("x^2 + y"), &p("x")),
            Err(PolyError::NotDivisible)
        );
        let q = divide_exact(&p("xy + x^2y"), &p("xy")).unwrap();
        assert_eq!(&q * &p("xy"), p("xy + x^2y"));
        assert_eq!(q, p("1 + x"));
        assert_eq!(
            divide_exact(&p("x"), &p("0")),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn divide_exact_by_non_monomial() {
        let f = &p("1 + x + y^2") * &p("x - 2y + 3");
        assert_eq!(
            divide_exact(&f, &p("x - 2y + 3")).unwrap(),
            p("1 + x + y^2")
        );
        assert_eq!(
            divide_exact(&(&f + &p("y")), &p("x - 2y + 3")),
            Err(PolyError::NotDivisible)
        );
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(
            reduce_mod_monomial(&p("1 + x + xy + x^2y^2"), &m("xy")),
            p("1 + x")
        );
        assert!(reduce_mod_monomial(&p("xy"), &m("xy")).is_zero());
        let sq = p("1+xy").pow(2);
        assert_eq!(sq, p("1 + 2xy + x^2y^2"));
        assert_eq!(reduce_mod_monomial(&sq, &m("xy")), p("1"));
    }

    #[test]
    fn local_unit_examples() {
        assert!(is_local_unit(&p("1 + x")));
        assert!(!is_local_unit(&p("x + y")));
        assert!(is_local_unit(&p("2 - xy")));
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_poly(&ring(), "x^").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_poly(&ring(), "").is_err());
        assert!(parse_poly(&ring(), "2z").is_err());
        assert!(parse_poly(&ring(), "x +").is_err());
    }

    #[test]
    fn canonical_serialization() {
        assert_eq!(p("1 + 2xy - x^2y^2").to_string(), "-x^2y^2 + 2xy + 1");
        assert_eq!(p("(1/2)y - (3/4)").to_string(), "(1/2)y - (3/4)");
        let fp = Ring::new::<&str>(Field::Prime(7), &["x"], &[]).unwrap();
        assert_eq!(parse_poly(&fp, "-x + 8").unwrap().to_string(), "6x + 1");
        let long = Ring::new::<&str>(Field::Rational, &["x1", "y1"], &[]).unwrap();
        let q = parse_poly(&long, "3x1y1^2 - y1").unwrap();
        assert_eq!(q.to_string(), "3*x1*y1^2 - y1");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
            let r = ring();
            Poly::from_terms(
                &r,
                ts.into_iter()
                    .map(|(c, a, b)| (Monomial::from_exponents(vec![a, b]), r.scalar(c))),
            )
        })
    }

    fn arb_monomial() -> impl Strategy<Value = Monomial> {
        (0u32..3, 0u32..3).prop_map(|(a, b)| Monomial::from_exponents(vec![a, b]))
    }

    proptest! {
        #[test]
        fn divide_exact_recovers_factor(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(divide_exact(&(&f * &g), &g).unwrap(), f);
        }

        #[test]
        fn reduce_is_idempotent_linear_multiplicative(f in arb_poly(), g in arb_poly(), mu in arb_monomial()) {
            let rf = reduce_mod_monomial(&f, &mu);
            prop_assert_eq!(reduce_mod_monomial(&rf, &mu), rf.clone());
            let rg = reduce_mod_monomial(&g, &mu);
            prop_assert_eq!(reduce_mod_monomial(&(&f + &g), &mu), &rf + &rg);
            prop_assert_eq!(
                reduce_mod_monomial(&(&f * &g), &mu),
                reduce_mod_monomial(&(&rf * &rg), &mu)
            );
        }

        #[test]
        fn local_units_closed_under_product(f in arb_poly(), g in arb_poly()) {
            if is_local_unit(&f) && is_local_unit(&g) {
                prop_assert!(is_local_unit(&(&f * &g)));
            }
        }

        #[test]
        fn display_parse_roundtrip(f in arb_poly()) {
            prop_assert_eq!(parse_poly(&ring(), &f.to_string()).unwrap(), f);
        }
    }
}
