use num::bigint::BigInt;

use super::monomial::Monomial;
use super::poly::Poly;
use super::ring::Ring;
use super::scalar::Scalar;

/// A syntax error at a byte offset of the whitespace-stripped input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at offset {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

struct Cursor<'a> {
    ring: &'a Ring,
    s: Vec<char>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(ring: &'a Ring, text: &str) -> Self {
        Cursor {
            ring,
            s: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn integer(&mut self) -> Result<BigInt, SyntaxError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits: String = self.s[start..self.pos].iter().collect();
        Ok(digits.parse().expect("digits"))
    }

    fn small_integer(&mut self) -> Result<u32, SyntaxError> {
        let start = self.pos;
        let n = self.integer()?;
        u32::try_from(n).or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })
    }

    /// `123` or `(a/b)`.
    fn coefficient(&mut self) -> Result<Option<Scalar>, SyntaxError> {
        let field = self.ring.field();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Some(
                    field
                        .from_ratio(&n, &BigInt::from(1))
                        .expect("unit denominator"),
                ))
            }
            Some('(') => {
                self.pos += 1;
                let neg = self.eat('-');
                let n = self.integer()?;
                if !self.eat('/') {
                    return self.err("expected '/' in rational coefficient");
                }
                let d_pos = self.pos;
                let d = self.integer()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                let n = if neg { -n } else { n };
                match field.from_ratio(&n, &d) {
                    Some(c) => Ok(Some(c)),
                    None => {
                        self.pos = d_pos;
                        self.err("denominator vanishes in the coefficient field")
                    }
                }
            }
            _ => Ok(None),
        }
    }

    /// Longest declared variable name at the cursor.
    fn variable(&mut self) -> Option<usize> {
        let rest: String = self.s[self.pos..].iter().collect();
        let mut best: Option<(usize, usize)> = None;
        for (i, v) in self.ring.vars().iter().enumerate() {
            if rest.starts_with(v.as_str()) && best.is_none_or(|(_, len)| v.len() > len) {
                best = Some((i, v.len()));
            }
        }
        let (i, len) = best?;
        self.pos += len;
        Some(i)
    }

    fn monomial_factors(&mut self, exps: &mut [u32]) -> Result<usize, SyntaxError> {
        let mut count = 0;
        loop {
            let save = self.pos;
            let star = self.eat('*');
            match self.variable() {
                Some(v) => {
                    let e = if self.eat('^') {
                        self.small_integer()?
                    } else {
                        1
                    };
                    exps[v] += e;
                    count += 1;
                }
                None => {
                    if star {
                        return self.err("expected variable after '*'");
                    }
                    self.pos = save;
                    if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                        return self.err("unknown variable");
                    }
                    return Ok(count);
                }
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Scalar), SyntaxError> {
        let start = self.pos;
        let coeff = self.coefficient()?;
        let mut exps = vec![0u32; self.ring.nvars()];
        let factors = self.monomial_factors(&mut exps)?;
        if coeff.is_none() && factors == 0 {
            self.pos = start;
            return self.err("expected term");
        }
        if let Some(c) = self.peek() {
            if c != '+' && c != '-' {
                return self.err(format!("unexpected '{c}'"));
            }
        }
        Ok((
            Monomial::from_exponents(exps),
            coeff.unwrap_or_else(|| self.ring.one()),
        ))
    }

    fn poly(&mut self) -> Result<Poly, SyntaxError> {
        if self.at_end() {
            return self.err("empty polynomial");
        }
        let mut terms = Vec::new();
        let mut first = true;
        while !self.at_end() {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    return self.err("expected '+' or '-'");
                }
                false
            };
            first = false;
            let (m, c) = self.term()?;
            terms.push((m, if neg { c.neg() } else { c }));
        }
        Ok(Poly::from_terms(self.ring, terms))
    }
}

/// Parses text such as `1 + 2xy - x^2y^2` or `(1/2)*x1*y1^2`.
///
/// Variables are matched greedily against the declared names; `*` and `^1`
/// are optional. Rational coefficients are written in parentheses.
pub fn parse_poly(ring: &Ring, text: &str) -> Result<Poly, SyntaxError> {
    Cursor::new(ring, text).poly()
}

/// Parses a monomial with unit coefficient, e.g. `xy^2` or `1`.
pub fn parse_monomial(ring: &Ring, text: &str) -> Result<Monomial, SyntaxError> {
    let mut c = Cursor::new(ring, text);
    if c.s == ['1'] {
        return Ok(ring.one_monomial());
    }
    let mut exps = vec![0u32; ring.nvars()];
    let n = c.monomial_factors(&mut exps)?;
    if n == 0 {
        return c.err("expected monomial");
    }
    if !c.at_end() {
        return c.err("trailing input after monomial");
    }
    Ok(Monomial::from_exponents(exps))
}
