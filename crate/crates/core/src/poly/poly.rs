use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::Monomial;
use super::ring::Ring;
use super::scalar::Scalar;
use super::PolyError;

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A multivariate polynomial with exact coefficients.
///
/// Terms are stored with nonzero coefficients only, sorted by descending
/// lexicographic monomial order, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, ring.one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Poly {
        Poly::term(ring, ring.one_monomial(), c)
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Poly {
        Poly::constant(ring, ring.scalar(n))
    }

    pub fn term(ring: &Ring, m: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn monomial(ring: &Ring, m: Monomial) -> Poly {
        Poly::term(ring, m, ring.one())
    }

    /// The variable with the given name, as a polynomial.
    pub fn var(ring: &Ring, name: &str) -> Option<Poly> {
        let i = ring.var_index(name)?;
        Some(Poly::monomial(ring, Monomial::var(ring.nvars(), i, 1)))
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Largest term in lexicographic order.
    pub fn leading_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.zero(),
        }
    }

    /// True iff the polynomial is a unit in the localization at the origin.
    pub fn is_local_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Componentwise minimum of the exponents of all terms: the largest
    /// monomial dividing the polynomial. `None` for zero.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.gcd(m)))
    }

    /// Every variable that occurs in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (m, _) in &self.terms {
            for v in m.support() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(PolyError::VarTableMismatch)
        }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { c.neg() } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        self.terms[i].1.sub(&other.terms[j].1)
                    } else {
                        self.terms[i].1.add(&other.terms[j].1)
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Multiplies by `c * m`. Monomial multiplication preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a.mul(c)))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a.clone()))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        self.mul_term(&self.ring.one_monomial(), c)
    }

    /// Exact division by a monomial, `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            terms.push((t.div(m)?, c.clone()));
        }
        Some(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn is_divisible_by_monomial(&self, m: &Monomial) -> bool {
        self.terms.iter().all(|(t, _)| m.divides(t))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical residue modulo the monomial ideal `(mu)`: drops every term
    /// divisible by `mu`.
    pub fn reduce_mod_monomial(&self, mu: &Monomial) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(t, _)| !mu.divides(t))
            .cloned()
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Exact quotient `f / g` in the polynomial ring.
    ///
    /// One-divisor multivariate division with lexicographic leading terms;
    /// `g` divides `f` iff the remainder vanishes.
    pub fn divide_exact(&self, g: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(g)?;
        let (lm, lc) = g.leading_term().ok_or(PolyError::DivisionByZero)?;
        if g.terms.len() == 1 {
            return self
                .div_monomial(lm)
                .map(|q| q.scale(&lc.inv()))
                .ok_or(PolyError::NotDivisible);
        }
        let lc_inv = lc.inv();
        let mut rest = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rest.terms.first().cloned() {
            // an undividable leading term lands in the remainder for good
            let qm = m.div(lm).ok_or(PolyError::NotDivisible)?;
            let qc = c.mul(&lc_inv);
            rest = rest.merge(&g.mul_term(&qm, &qc), true);
            quotient.push((qm, qc));
        }
        Ok(Poly::from_terms(&self.ring, quotient))
    }

    /// Evaluates every variable `v` as `scalars[v] * target[v]`, possibly in a
    /// larger ring. Used for unit rescalings, permutations, and variable adjunction.
    pub fn substitute(&self, target: &Ring, images: &[(usize, Scalar)]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u32; target.nvars()];
            let mut coeff = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let (tv, s) = &images[v];
                    exps[*tv] += e;
                    coeff = coeff.mul(&s.pow(e));
                }
            }
            (Monomial::from_exponents(exps), coeff)
        });
        Poly::from_terms(target, terms)
    }

    /// Embeds into a ring over the same field whose variables include ours.
    pub fn embed(&self, target: &Ring) -> Option<Poly> {
        let mut images = Vec::with_capacity(self.ring.nvars());
        for v in self.ring.vars() {
            images.push((target.var_index(v)?, target.one()));
        }
        Some(self.substitute(target, &images))
    }
}

/// Checked arithmetic with variable-table validation.
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly, PolyError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

/// Operator forms panic on a variable-table mismatch; library code only uses
/// them where both operands come from one ring.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.neg()))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl fmt::Display for Poly {
    /// Canonical text form: descending lex order, e.g. `-x^2y^2 + 2xy + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sep = if self.ring.short_names() { "" } else { "*" };
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", self.ring.format_monomial(m))?;
            } else {
                write!(f, "{abs}{sep}{}", self.ring.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
