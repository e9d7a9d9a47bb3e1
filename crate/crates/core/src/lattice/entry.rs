use std::fmt;

use crate::poly::{parse_monomial, parse_poly, LaurentMonomial, Monomial, Poly, Ring, SyntaxError};

use super::LatticeError;

/// A fraction `numerator / denominator` with a monomial denominator.
///
/// The representation is not canonical; use [`FracEntry::same_value`] or
/// [`FracEntry::normalized`] to compare.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracEntry {
    num: Poly,
    den: Monomial,
}

impl FracEntry {
    /// Denominators may only involve divisor-pair variables.
    pub fn new(num: Poly, den: Monomial) -> Result<FracEntry, LatticeError> {
        let ring = num.ring();
        if let Some(v) = den.support().find(|&v| !ring.is_divisor_var(v)) {
            return Err(LatticeError::IllegalDenominator(ring.vars()[v].clone()));
        }
        Ok(FracEntry { num, den })
    }

    pub fn poly(num: Poly) -> FracEntry {
        let den = num.ring().one_monomial();
        FracEntry { num, den }
    }

    pub fn zero(ring: &Ring) -> FracEntry {
        FracEntry::poly(Poly::zero(ring))
    }

    pub fn one(ring: &Ring) -> FracEntry {
        FracEntry::poly(Poly::one(ring))
    }

    /// `coeff · m` for a Laurent monomial `m`.
    pub(crate) fn from_laurent(coeff: &Poly, m: &LaurentMonomial) -> FracEntry {
        let (n, d) = m.split();
        FracEntry {
            num: coeff.mul_monomial(&n),
            den: d,
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Monomial {
        &self.den
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Polynomial value, when the denominator cancels.
    pub fn as_poly(&self) -> Option<Poly> {
        self.num.div_monomial(&self.den)
    }

    pub fn mul_poly(&self, p: &Poly) -> FracEntry {
        FracEntry {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> FracEntry {
        FracEntry {
            num: self.num.mul_monomial(m),
            den: self.den.clone(),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> FracEntry {
        FracEntry {
            num: self.num.clone(),
            den: self.den.mul(m),
        }
    }

    pub fn mul(&self, other: &FracEntry) -> FracEntry {
        FracEntry {
            num: &self.num * &other.num,
            den: self.den.mul(&other.den),
        }
    }

    pub fn add(&self, other: &FracEntry) -> FracEntry {
        let l = self.den.lcm(&other.den);
        let a = self.num.mul_monomial(&l.div(&self.den).expect("lcm"));
        let b = other.num.mul_monomial(&l.div(&other.den).expect("lcm"));
        FracEntry {
            num: &a + &b,
            den: l,
        }
    }

    /// Cancels the common monomial factor of numerator and denominator.
    pub fn normalized(&self) -> FracEntry {
        match self.num.monomial_content() {
            None => FracEntry::zero(self.ring()),
            Some(c) => {
                let g = c.gcd(&self.den);
                FracEntry {
                    num: self.num.div_monomial(&g).expect("content divides"),
                    den: self.den.div(&g).expect("gcd divides"),
                }
            }
        }
    }

    pub fn same_value(&self, other: &FracEntry) -> bool {
        self.num.mul_monomial(&other.den) == other.num.mul_monomial(&self.den)
    }

    /// Parses `<poly>` or `<poly>/<monomial>`, splitting at the last `/`
    /// outside parentheses.
    pub fn parse(ring: &Ring, text: &str) -> Result<FracEntry, LatticeError> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let syntax = |e: SyntaxError| LatticeError::Syntax(text.to_string(), e);
        match split {
            None => Ok(FracEntry::poly(parse_poly(ring, text).map_err(syntax)?)),
            Some(i) => {
                let num = parse_poly(ring, &text[..i]).map_err(syntax)?;
                let den = parse_monomial(ring, &text[i + 1..]).map_err(|e| {
                    syntax(SyntaxError {
                        position: e.position + i + 1,
                        message: e.message,
                    })
                })?;
                FracEntry::new(num, den)
            }
        }
    }
}

impl fmt::Display for FracEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.ring().format_monomial(&self.den))
        }
    }
}

impl fmt::Debug for FracEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FracEntry({self})")
    }
}
