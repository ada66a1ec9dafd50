//! Sparse linear expressions over endpoint variables.
//!
//! A `LinearExpr` is `sum(coeff_v * x_v) + constant` in canonical sparse
//! form: zero coefficients are never stored, so structural equality is
//! semantic equality.

use crate::rational::Rational;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable x{0} missing from the assignment")]
    MissingVariable(u32),
}

/// Variable index type: `x_v` for an endpoint index `v`.
pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearExpr {
    terms: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl LinearExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v, Rational::one());
        LinearExpr {
            terms,
            constant: Rational::zero(),
        }
    }

    pub fn term(v: Var, coeff: Rational) -> Self {
        let mut e = LinearExpr::zero();
        e.add_term(v, coeff);
        e
    }

    pub fn add_term(&mut self, v: Var, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(v) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
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

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, &Rational)> {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, by: &Rational) -> LinearExpr {
        if by.is_zero() {
            return LinearExpr::zero();
        }
        LinearExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, c * by)).collect(),
            constant: &self.constant * by,
        }
    }

    /// Exact evaluation; errors if the assignment misses a variable.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, EvalError> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            let x = assignment.get(v).ok_or(EvalError::MissingVariable(*v))?;
            acc += &(c * x);
        }
        Ok(acc)
    }

    /// Replace each variable by its image under `image`; `None` keeps the
    /// variable. Substituting linear images keeps the result linear.
    pub fn substitute(&self, image: &impl Fn(Var) -> Option<LinearExpr>) -> LinearExpr {
        let mut out = LinearExpr::constant(self.constant.clone());
        for (v, c) in &self.terms {
            match image(*v) {
                Some(e) => out = out + e.scale(c),
                None => out.add_term(*v, c.clone()),
            }
        }
        out
    }
}

impl Add for LinearExpr {
    type Output = LinearExpr;
    fn add(mut self, rhs: LinearExpr) -> LinearExpr {
        for (v, c) in rhs.terms {
            self.add_term(v, c);
        }
        self.constant += &rhs.constant;
        self
    }
}

impl Add<&LinearExpr> for LinearExpr {
    type Output = LinearExpr;
    fn add(mut self, rhs: &LinearExpr) -> LinearExpr {
        for (v, c) in &rhs.terms {
            self.add_term(*v, c.clone());
        }
        self.constant += &rhs.constant;
        self
    }
}

impl Sub for LinearExpr {
    type Output = LinearExpr;
    fn sub(mut self, rhs: LinearExpr) -> LinearExpr {
        for (v, c) in rhs.terms {
            self.add_term(v, -c);
        }
        self.constant -= &rhs.constant;
        self
    }
}

impl Sub<&LinearExpr> for LinearExpr {
    type Output = LinearExpr;
    fn sub(mut self, rhs: &LinearExpr) -> LinearExpr {
        for (v, c) in &rhs.terms {
            self.add_term(*v, -c);
        }
        self.constant -= &rhs.constant;
        self
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;
    fn neg(self) -> LinearExpr {
        self.scale(&Rational::from_int(-1))
    }
}

impl Mul<Rational> for LinearExpr {
    type Output = LinearExpr;
    fn mul(self, rhs: Rational) -> LinearExpr {
        self.scale(&rhs)
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            if first {
                write!(f, "{c}*x{v}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}*x{v}", -c)?;
            } else {
                write!(f, " + {c}*x{v}")?;
            }
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_zero() {
            Ok(())
        } else if self.constant.is_negative() {
            write!(f, " - {}", -&self.constant)
        } else {
            write!(f, " + {}", self.constant)
        }
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
    fn canonical_sparse_form() {
        let mut e = LinearExpr::var(1);
        e.add_term(1, rat!(-1));
        assert!(e.is_zero());
        assert_eq!(e, LinearExpr::zero());
    }

    #[test]
    fn eval_exact() {
        // 2x_1 - x_2 + 1/2 at (x_1, x_2) = (1/3, 1/6) -> 1
        let e = LinearExpr::term(1, rat!(2)) + LinearExpr::term(2, rat!(-1))
            + LinearExpr::constant(rat!(1, 2));
        let val = e.eval(&assign(&[(1, rat!(1, 3)), (2, rat!(1, 6))])).unwrap();
        assert_eq!(val, rat!(1));
        assert!(matches!(
            e.eval(&assign(&[(1, rat!(0))])),
            Err(EvalError::MissingVariable(2))
        ));
    }

    #[test]
    fn substitution() {
        // x_3 -> 1 - x_1 turns x_1 + x_3 into the constant 1
        let e = LinearExpr::var(1) + LinearExpr::var(3);
        let out = e.substitute(&|v| {
            (v == 3).then(|| LinearExpr::constant(rat!(1)) - &LinearExpr::var(1))
        });
        assert!(out.is_constant());
        assert_eq!(*out.constant_part(), rat!(1));
    }
}
