//! Exact quadratic forms `x' Q x + L x + c` over endpoint variables.
//!
//! `Q` is stored as a symmetric sparse matrix with both `(u,v)` and `(v,u)`
//! mirrored on write, which keeps the gradient formula at `2 Q x + L`.
//! Region areas and the pieces of the monochromatic fraction are values of
//! this type.

use crate::linear::{EvalError, LinearExpr, Var};
use crate::rational::Rational;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuadraticForm {
    quad: BTreeMap<(Var, Var), Rational>,
    linear: LinearExpr,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        QuadraticForm {
            quad: BTreeMap::new(),
            linear: LinearExpr::constant(c),
        }
    }

    pub fn from_linear(linear: LinearExpr) -> Self {
        QuadraticForm {
            quad: BTreeMap::new(),
            linear,
        }
    }

    /// The exact product of two linear expressions.
    pub fn product(a: &LinearExpr, b: &LinearExpr) -> Self {
        let mut out = QuadraticForm::from_linear(
            a.scale(b.constant_part()) + b.scale(a.constant_part())
                - LinearExpr::constant(a.constant_part() * b.constant_part()),
        );
        let half = Rational::new(1, 2);
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let prod = cu * cv;
                if u == v {
                    out.add_quad(u, v, prod);
                } else {
                    // split symmetrically so that eval (which sums both
                    // mirrored entries) recovers the full coefficient
                    out.add_quad(u, v, &prod * &half);
                }
            }
        }
        out
    }

    fn add_quad(&mut self, u: Var, v: Var, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        for key in if u == v { vec![(u, u)] } else { vec![(u, v), (v, u)] } {
            match self.quad.entry(key) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(coeff.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let next = slot.get() + &coeff;
                    if next.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = next;
                    }
                }
            }
        }
    }

    pub fn linear_part(&self) -> &LinearExpr {
        &self.linear
    }

    pub fn constant_part(&self) -> &Rational {
        self.linear.constant_part()
    }

    pub fn quad_coeff(&self, u: Var, v: Var) -> Rational {
        self.quad.get(&(u, v)).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.quad.is_empty() && self.linear.is_constant()
    }

    pub fn scale(&self, by: &Rational) -> QuadraticForm {
        if by.is_zero() {
            return QuadraticForm::zero();
        }
        QuadraticForm {
            quad: self.quad.iter().map(|(k, c)| (*k, c * by)).collect(),
            linear: self.linear.scale(by),
        }
    }

    /// All variables appearing with a nonzero coefficient.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out: BTreeSet<Var> = self.linear.vars().collect();
        for (u, v) in self.quad.keys() {
            out.insert(*u);
            out.insert(*v);
        }
        out
    }

    /// Exact value `x' Q x + L x + c` at a point.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, EvalError> {
        let mut acc = self.linear.eval(assignment)?;
        for ((u, v), q) in &self.quad {
            let xu = assignment.get(u).ok_or(EvalError::MissingVariable(*u))?;
            let xv = assignment.get(v).ok_or(EvalError::MissingVariable(*v))?;
            acc += &(&(q * xu) * xv);
        }
        Ok(acc)
    }

    /// Exact gradient `2 Q x + L`, keyed by variable. Variables of the form
    /// that are missing from the assignment are an error; variables absent
    /// from the form do not appear in the result.
    pub fn gradient(
        &self,
        assignment: &BTreeMap<Var, Rational>,
    ) -> Result<BTreeMap<Var, Rational>, EvalError> {
        let mut out: BTreeMap<Var, Rational> = BTreeMap::new();
        for v in self.vars() {
            out.insert(v, self.linear.coeff(v));
        }
        for ((u, v), q) in &self.quad {
            // gradient of x'Qx with symmetric Q is 2Qx; iterating the
            // mirrored entries row-wise, each contributes 2 q x_v to the
            // u-partial (diagonals included)
            let xv = assignment.get(v).ok_or(EvalError::MissingVariable(*v))?;
            *out.entry(*u).or_default() += &(&(q * xv) * &Rational::from_int(2));
        }
        Ok(out)
    }

    /// The gradient `2 Q x + L` as a symbolic linear expression per variable.
    pub fn gradient_exprs(&self) -> BTreeMap<Var, LinearExpr> {
        let mut out: BTreeMap<Var, LinearExpr> = BTreeMap::new();
        for v in self.vars() {
            out.insert(v, LinearExpr::constant(self.linear.coeff(v)));
        }
        for ((u, w), q) in &self.quad {
            out.get_mut(u)
                .expect("quad var present in vars()")
                .add_term(*w, q * &Rational::from_int(2));
        }
        out
    }

    /// Replace variables by linear images (as in the antisymmetry reduction
    /// `x_{n-k} -> 1 - x_k`); the result is again quadratic.
    pub fn substitute(&self, image: &impl Fn(Var) -> Option<LinearExpr>) -> QuadraticForm {
        let expand = |v: Var| image(v).unwrap_or_else(|| LinearExpr::var(v));
        let mut out = QuadraticForm::from_linear(self.linear.substitute(image));
        for ((u, v), q) in &self.quad {
            // mirrored storage visits (u,v) and (v,u) separately; each call
            // carries its own half of the coefficient, so summing products
            // of the images reconstructs the substituted form exactly
            out = out + QuadraticForm::product(&expand(*u), &expand(*v)).scale(q);
        }
        out
    }
}

impl Add for QuadraticForm {
    type Output = QuadraticForm;
    fn add(mut self, rhs: QuadraticForm) -> QuadraticForm {
        for ((u, v), q) in rhs.quad {
            // entries arrive already mirrored; add each slot directly
            match self.quad.entry((u, v)) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(q);
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let next = slot.get() + &q;
                    if next.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = next;
                    }
                }
            }
        }
        self.linear = self.linear + rhs.linear;
        self
    }
}

impl Sub for QuadraticForm {
    type Output = QuadraticForm;
    fn sub(self, rhs: QuadraticForm) -> QuadraticForm {
        self + rhs.scale(&Rational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn assign(pairs: &[(Var, Rational)]) -> BTreeMap<Var, Rational> {
        pairs.iter().cloned().collect()
    }

    #[test]
    fn single_square() {
        // q = x_1^2 at x_1 = 1/2: value 1/4, gradient (1)
        let q = QuadraticForm::product(&LinearExpr::var(1), &LinearExpr::var(1));
        let at = assign(&[(1, rat!(1, 2))]);
        assert_eq!(q.eval(&at).unwrap(), rat!(1, 4));
        assert_eq!(q.gradient(&at).unwrap()[&1], rat!(1));
    }

    #[test]
    fn affine_case() {
        // quad = 0, linear = (2, 3), constant 5 at (1,1): value 10, gradient (2,3)
        let q = QuadraticForm::from_linear(
            LinearExpr::term(1, rat!(2)) + LinearExpr::term(2, rat!(3))
                + LinearExpr::constant(rat!(5)),
        );
        let at = assign(&[(1, rat!(1)), (2, rat!(1))]);
        assert_eq!(q.eval(&at).unwrap(), rat!(10));
        let g = q.gradient(&at).unwrap();
        assert_eq!(g[&1], rat!(2));
        assert_eq!(g[&2], rat!(3));
    }

    #[test]
    fn symmetric_storage() {
        let a = LinearExpr::var(1) + LinearExpr::var(2);
        let b = LinearExpr::var(2);
        let q = QuadraticForm::product(&a, &b);
        assert_eq!(q.quad_coeff(1, 2), q.quad_coeff(2, 1));
        // (x1 + x2) x2 = x1 x2 + x2^2: off-diagonal halves sum to 1
        assert_eq!(q.quad_coeff(1, 2) + q.quad_coeff(2, 1), rat!(1));
        assert_eq!(q.quad_coeff(2, 2), rat!(1));
    }

    #[test]
    fn product_matches_pointwise() {
        let a = LinearExpr::term(1, rat!(2)) + LinearExpr::term(3, rat!(-1, 3))
            + LinearExpr::constant(rat!(5, 7));
        let b = LinearExpr::term(1, rat!(-1, 2)) + LinearExpr::term(2, rat!(4));
        let q = QuadraticForm::product(&a, &b);
        let at = assign(&[(1, rat!(3, 5)), (2, rat!(-2, 9)), (3, rat!(7, 4))]);
        let lhs = q.eval(&at).unwrap();
        let rhs = &a.eval(&at).unwrap() * &b.eval(&at).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_exact() {
        // f = (x1 + x3)^2 with x3 -> 1 - x1 becomes the constant 1
        let s = LinearExpr::var(1) + LinearExpr::var(3);
        let q = QuadraticForm::product(&s, &s);
        let reduced = q.substitute(&|v| {
            (v == 3).then(|| LinearExpr::constant(rat!(1)) - &LinearExpr::var(1))
        });
        assert!(reduced.is_constant());
        assert_eq!(*reduced.constant_part(), rat!(1));
    }

    #[test]
    fn gradient_matches_central_difference() {
        // central differences are exact for quadratics when computed in
        // exact arithmetic: (f(x+h) - f(x-h)) / 2h == grad f(x)
        let a = LinearExpr::term(1, rat!(3)) + LinearExpr::term(2, rat!(-2))
            + LinearExpr::constant(rat!(1, 3));
        let b = LinearExpr::term(1, rat!(1, 5)) + LinearExpr::term(2, rat!(7));
        let q = QuadraticForm::product(&a, &b) + QuadraticForm::from_linear(a.clone());
        let x = assign(&[(1, rat!(2, 11)), (2, rat!(-5, 13))]);
        let h = rat!(1, 97);
        let grad = q.gradient(&x).unwrap();
        for v in [1u32, 2] {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus.insert(v, &x[&v] + &h);
            minus.insert(v, &x[&v] - &h);
            let fd = &(&q.eval(&plus).unwrap() - &q.eval(&minus).unwrap())
                / &(&h * &rat!(2));
            assert_eq!(fd, grad[&v], "partial w.r.t. x{v}");
        }
    }
}
