use crate::poly::{Monomial, Ring};

use super::Violation;

/// Local equations of one step: `t` for `dδ_i`, `y` for `dD_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub t: Monomial,
    pub y: Monomial,
}

/// Monomial equations `(t_i, y_i)`, `i = 1..=m`, of an ascending pair of
/// divisor chains `δ_i = Σ dδ_k`, `D_i = Σ dD_k`.
///
/// Indices are 1-based throughout, matching the filtration `E^0 ⊇ … ⊇ E^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorChain {
    ring: Ring,
    steps: Vec<ChainStep>,
}

impl DivisorChain {
    pub fn new(ring: &Ring, steps: Vec<ChainStep>) -> DivisorChain {
        DivisorChain {
            ring: ring.clone(),
            steps,
        }
    }

    /// `m` copies of `(t, y)`: the scalar case `δ_i = iδ`, `D_i = iD`.
    pub fn scalar(ring: &Ring, t: Monomial, y: Monomial, m: usize) -> DivisorChain {
        DivisorChain::new(ring, vec![ChainStep { t, y }; m])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    pub fn t(&self, i: usize) -> &Monomial {
        &self.steps[i - 1].t
    }

    pub fn y(&self, i: usize) -> &Monomial {
        &self.steps[i - 1].y
    }

    /// `x_i = t_i / y_i`, the equation of the complementary part of `dδ_i`.
    pub fn x(&self, i: usize) -> Option<Monomial> {
        self.t(i).div(self.y(i))
    }

    /// `∏_{lo < l ≤ hi} t_l`.
    pub fn t_product(&self, lo: usize, hi: usize) -> Monomial {
        (lo + 1..=hi).fold(self.ring.one_monomial(), |acc, l| acc.mul(self.t(l)))
    }

    /// `∏_{lo < l ≤ hi} y_l`.
    pub fn y_product(&self, lo: usize, hi: usize) -> Monomial {
        (lo + 1..=hi).fold(self.ring.one_monomial(), |acc, l| acc.mul(self.y(l)))
    }

    /// Equation of `δ_i`.
    pub fn delta(&self, i: usize) -> Monomial {
        self.t_product(0, i)
    }

    /// Equation of `D_i`.
    pub fn big_d(&self, i: usize) -> Monomial {
        self.y_product(0, i)
    }

    pub fn all_y_trivial(&self) -> bool {
        self.steps.iter().all(|s| s.y.is_one())
    }

    pub fn d_equals_delta(&self) -> bool {
        self.steps.iter().all(|s| s.y == s.t)
    }

    /// Effectivity (`y_i | t_i`) and the no-common-component condition
    /// between `D_i` and `δ_i − D_i`, for every `i`.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.ring.nvars();
        let mut y_vars = vec![false; n];
        let mut x_vars = vec![false; n];
        for i in 1..=self.len() {
            let Some(x) = self.x(i) else {
                out.push(Violation::Effectivity { i });
                continue;
            };
            for v in self.y(i).support() {
                y_vars[v] = true;
            }
            for v in x.support() {
                x_vars[v] = true;
            }
            if (0..n).any(|v| y_vars[v] && x_vars[v]) {
                out.push(Violation::CommonComponent { i });
            }
        }
        out
    }

    /// Variables occurring in some `t_i` (and hence in some `y_i` or `x_i`).
    pub fn divisor_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .steps
            .iter()
            .flat_map(|s| s.t.support().chain(s.y.support()))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn format_step(&self, i: usize) -> (String, String) {
        (
            self.ring.format_monomial(self.t(i)),
            self.ring.format_monomial(self.y(i)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_monomial, Field};

    fn ring() -> Ring {
        Ring::new(Field::Rational, &["x", "y"], &[("x", "y")]).unwrap()
    }

    fn step(t: &str, y: &str) -> ChainStep {
        let r = ring();
        ChainStep {
            t: parse_monomial(&r, t).unwrap(),
            y: parse_monomial(&r, y).unwrap(),
        }
    }

    #[test]
    fn scalar_chain_products() {
        let c = DivisorChain::new(&ring(), vec![step("xy", "y"), step("xy", "y")]);
        assert!(c.violations().is_empty());
        assert_eq!(ring().format_monomial(&c.delta(2)), "x^2y^2");
        assert_eq!(ring().format_monomial(&c.big_d(2)), "y^2");
        assert_eq!(ring().format_monomial(&c.x(1).unwrap()), "x");
    }

    #[test]
    fn chain_violations() {
        let c = DivisorChain::new(&ring(), vec![step("x", "y")]);
        assert_eq!(c.violations(), vec![Violation::Effectivity { i: 1 }]);
        // D_1 = y, D_1^dagger = xy shares the component y
        let c = DivisorChain::new(&ring(), vec![step("xy^2", "y")]);
        assert_eq!(c.violations(), vec![Violation::CommonComponent { i: 1 }]);
        // cumulative: y-part x at step 2 meets x-part x of step 1
        let c = DivisorChain::new(&ring(), vec![step("xy", "y"), step("x", "x")]);
        assert_eq!(c.violations(), vec![Violation::CommonComponent { i: 2 }]);
    }
}
