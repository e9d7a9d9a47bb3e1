use std::cmp::Ordering;

/// A monomial as a dense exponent vector over the ring's declared variables.
///
/// The derived ordering is lexicographic on the declared variable order, so
/// `x > y^5` when `x` is declared first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, index: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[index] = exp;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn to_laurent(&self) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().map(|&e| e as i32).collect())
    }
}

/// A monomial with integer (possibly negative) exponents, i.e. a unit of the
/// Laurent ring. Used for the diagonal entries of lattices in adapted
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentMonomial(Vec<i32>);

impl LaurentMonomial {
    pub fn one(nvars: usize) -> Self {
        LaurentMonomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<i32>) -> Self {
        LaurentMonomial(exps)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn div_monomial(&self, m: &Monomial) -> LaurentMonomial {
        self.div(&m.to_laurent())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentMonomial {
        self.mul(&m.to_laurent())
    }

    /// Generator of the intersection `(a) ∩ (b)` of principal fractional ideals.
    pub fn lcm(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Divisibility order on fractional principal ideals: `Less` when `self`
    /// properly divides `other` (so `(self) ⊋ (other)`), `None` when incomparable.
    pub fn divisibility_cmp(&self, other: &LaurentMonomial) -> Option<Ordering> {
        let mut le = true;
        let mut ge = true;
        for (a, b) in self.0.iter().zip(&other.0) {
            le &= a <= b;
            ge &= a >= b;
        }
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Splits into `numerator / denominator` with disjoint supports.
    pub fn split(&self) -> (Monomial, Monomial) {
        let num = self.0.iter().map(|&e| e.max(0) as u32).collect();
        let den = self.0.iter().map(|&e| (-e).max(0) as u32).collect();
        (Monomial(num), Monomial(den))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_follows_declared_variables() {
        let x = Monomial::var(2, 0, 1);
        let y5 = Monomial::var(2, 1, 5);
        assert!(x > y5);
    }

    #[test]
    fn division_and_lcm() {
        let xy = Monomial::from_exponents(vec![1, 1]);
        let x2 = Monomial::from_exponents(vec![2, 0]);
        assert_eq!(
            xy.div(&Monomial::var(2, 1, 1)),
            Some(Monomial::var(2, 0, 1))
        );
        assert_eq!(xy.div(&x2), None);
        assert_eq!(xy.lcm(&x2), Monomial::from_exponents(vec![2, 1]));
        assert_eq!(xy.gcd(&x2), Monomial::var(2, 0, 1));
    }

    #[test]
    fn laurent_split_and_order() {
        let m = LaurentMonomial::from_exponents(vec![1, -2]);
        let (n, d) = m.split();
        assert_eq!(n.exponents(), &[1, 0]);
        assert_eq!(d.exponents(), &[0, 2]);
        let one = LaurentMonomial::one(2);
        assert_eq!(m.divisibility_cmp(&one), None);
        let inv_y = LaurentMonomial::from_exponents(vec![0, -1]);
        assert_eq!(inv_y.divisibility_cmp(&one), Some(Ordering::Less));
    }
}
