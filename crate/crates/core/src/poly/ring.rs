use std::fmt;
use std::sync::Arc;

use super::monomial::Monomial;
use super::scalar::{Field, Scalar};
use super::PolyError;

/// Variable table of a polynomial ring: declared variable order, the coefficient
/// field, and the divisor pairs `(x_k, y_k)`.
#[derive(Debug, PartialEq, Eq, Hash)]
struct RingInner {
    field: Field,
    vars: Vec<String>,
    pairs: Vec<(usize, usize)>,
}

/// Shared handle to a variable table. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<RingInner>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ring({}; {:?}; pairs {:?})",
            self.0.field, self.0.vars, self.0.pairs
        )
    }
}

impl Ring {
    /// Builds a ring from variable names and `(x, y)` pairs given by name.
    pub fn new<S: AsRef<str>>(
        field: Field,
        vars: &[S],
        pairs: &[(S, S)],
    ) -> Result<Ring, PolyError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(PolyError::BadVariable(v.clone()));
            }
            if !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(PolyError::BadVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::BadVariable(v.clone()));
            }
        }
        let index = |name: &str| {
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| PolyError::BadVariable(name.to_string()))
        };
        let mut resolved = Vec::with_capacity(pairs.len());
        let mut used = vec![false; vars.len()];
        for (x, y) in pairs {
            let (xi, yi) = (index(x.as_ref())?, index(y.as_ref())?);
            if xi == yi || used[xi] || used[yi] {
                return Err(PolyError::BadPair(
                    x.as_ref().to_string(),
                    y.as_ref().to_string(),
                ));
            }
            used[xi] = true;
            used[yi] = true;
            resolved.push((xi, yi));
        }
        Ok(Ring(Arc::new(RingInner {
            field,
            vars,
            pairs: resolved,
        })))
    }

    /// Same variables and pairs over another field.
    pub fn with_field(&self, field: Field) -> Ring {
        Ring(Arc::new(RingInner {
            field,
            vars: self.0.vars.clone(),
            pairs: self.0.pairs.clone(),
        }))
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0.pairs
    }

    /// Index of the pair a variable belongs to, if any.
    pub fn pair_of(&self, var: usize) -> Option<usize> {
        self.0.pairs.iter().position(|&(x, y)| x == var || y == var)
    }

    pub fn is_divisor_var(&self, var: usize) -> bool {
        self.pair_of(var).is_some()
    }

    pub fn is_y_var(&self, var: usize) -> bool {
        self.0.pairs.iter().any(|&(_, y)| y == var)
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    pub fn zero(&self) -> Scalar {
        self.field().zero()
    }

    pub fn one(&self) -> Scalar {
        self.field().one()
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.field().from_i64(n)
    }

    /// True when every variable name is a single character, which lets the
    /// serializer juxtapose factors (`x^2y`) without ambiguity.
    pub(crate) fn short_names(&self) -> bool {
        self.0.vars.iter().all(|v| v.len() == 1)
    }

    /// Renders a monomial; the unit monomial renders as `1`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        let sep = if self.short_names() { "" } else { "*" };
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.0.vars[i].clone()
                } else {
                    format!("{}^{}", self.0.vars[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(sep)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_must_be_disjoint() {
        let err = Ring::new(Field::Rational, &["x", "y", "z"], &[("x", "y"), ("y", "z")]);
        assert!(matches!(err, Err(PolyError::BadPair(..))));
    }

    #[test]
    fn rejects_duplicate_names() {
        assert!(Ring::new::<&str>(Field::Rational, &["x", "x"], &[]).is_err());
    }

    #[test]
    fn monomial_formatting() {
        let r = Ring::new::<&str>(Field::Rational, &["x", "y"], &[]).unwrap();
        let m = Monomial::from_exponents(vec![2, 1]);
        assert_eq!(r.format_monomial(&m), "x^2y");
        let r = Ring::new::<&str>(Field::Rational, &["x1", "y1"], &[]).unwrap();
        assert_eq!(r.format_monomial(&m), "x1^2*y1");
    }
}
