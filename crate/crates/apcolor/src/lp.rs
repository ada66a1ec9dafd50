//! Exact-rational linear programming.
//!
//! Feasibility of systems with *strict* inequalities is decided without any
//! floating-point threshold: one auxiliary slack variable is added to every
//! strict constraint and maximized; the system is strictly feasible exactly
//! when the optimum slack is positive. The simplex uses Bland's pivot rule
//! throughout, so it terminates on every input regardless of constraint
//! order.

use crate::linear::{LinearExpr, Var};
use crate::rational::Rational;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `lhs < 0`
    Lt,
    /// `lhs <= 0`
    Le,
    /// `lhs == 0`
    Eq,
}

/// A constraint in normal form `lhs REL 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: LinearExpr,
    pub relation: Relation,
}

impl Constraint {
    pub fn new(lhs: LinearExpr, relation: Relation) -> Self {
        Constraint { lhs, relation }
    }

    /// `lhs < rhs` as a normal-form strict constraint.
    pub fn strictly_less(lhs: LinearExpr, rhs: LinearExpr) -> Self {
        Constraint::new(lhs - &rhs, Relation::Lt)
    }

    pub fn less_equal(lhs: LinearExpr, rhs: LinearExpr) -> Self {
        Constraint::new(lhs - &rhs, Relation::Le)
    }

    pub fn equal(lhs: LinearExpr, rhs: LinearExpr) -> Self {
        Constraint::new(lhs - &rhs, Relation::Eq)
    }

    /// Relax a strict constraint to its closed version.
    pub fn closed(&self) -> Constraint {
        Constraint {
            lhs: self.lhs.clone(),
            relation: match self.relation {
                Relation::Lt => Relation::Le,
                other => other,
            },
        }
    }

    /// Exact satisfaction check at a point.
    pub fn satisfied_by(&self, point: &BTreeMap<Var, Rational>) -> bool {
        let Ok(v) = self.lhs.eval(point) else {
            return false;
        };
        match self.relation {
            Relation::Lt => v.is_negative(),
            Relation::Le => !v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }

    /// A scale-invariant key: two constraints are the same half-space /
    /// hyperplane statement exactly when their keys agree. The expression
    /// is divided by the absolute coefficient of its lowest variable.
    pub fn canonical_key(&self) -> (Relation, Vec<(Var, Rational)>, Rational) {
        let mut terms: Vec<(Var, Rational)> = self.lhs.terms().map(|(v, c)| (v, c.clone())).collect();
        let mut constant = self.lhs.constant_part().clone();
        if let Some((_, first)) = terms.first() {
            let scale = first.abs().recip().expect("canonical coeff nonzero");
            for (_, c) in terms.iter_mut() {
                *c = &*c * &scale;
            }
            constant = &constant * &scale;
        }
        (self.relation, terms, constant)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, "{} {} 0", self.lhs, rel)
    }
}

#[derive(Debug, Clone, Default)]
pub struct LpProblem {
    /// Per-variable finite box bounds, keyed by variable id.
    pub bounds: BTreeMap<Var, (Rational, Rational)>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<LinearExpr>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a variable with box bounds `[lo, hi]`.
    pub fn add_var(&mut self, v: Var, lo: Rational, hi: Rational) {
        self.bounds.insert(v, (lo, hi));
    }

    /// Declare a variable with the default unit-interval box.
    pub fn add_unit_var(&mut self, v: Var) {
        self.add_var(v, Rational::zero(), Rational::one());
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn set_objective(&mut self, obj: LinearExpr) {
        self.objective = Some(obj);
    }

    fn validate(&self) -> Result<(), LpError> {
        for c in &self.constraints {
            for v in c.lhs.vars() {
                if !self.bounds.contains_key(&v) {
                    return Err(LpError::UndeclaredVariable(v));
                }
            }
        }
        if let Some(obj) = &self.objective {
            for v in obj.vars() {
                if !self.bounds.contains_key(&v) {
                    return Err(LpError::UndeclaredVariable(v));
                }
            }
        }
        for (v, (lo, hi)) in &self.bounds {
            if lo > hi {
                return Err(LpError::EmptyBox(*v));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A strictly feasible point together with the maximal common slack.
    Feasible {
        witness: BTreeMap<Var, Rational>,
        slack: Rational,
    },
    Infeasible,
    Optimal {
        witness: BTreeMap<Var, Rational>,
        value: Rational,
    },
    Unbounded,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint references undeclared variable x{0}")]
    UndeclaredVariable(u32),
    #[error("variable x{0} has an empty box (lo > hi)")]
    EmptyBox(u32),
    #[error("maximize called without an objective")]
    MissingObjective,
    #[error("maximize does not accept strict constraints; use check_feasible_strict")]
    StrictConstraint,
    #[error("feasibility query must not carry an objective")]
    UnexpectedObjective,
    #[error("pivot budget exhausted after {pivots} pivots; system recorded for analysis:\n{system}")]
    PivotLimit { pivots: usize, system: String },
}

/// Hard stop so that a pathological system is reported verbatim instead of
/// spinning. Bland's rule terminates, so hitting this indicates a bug.
const PIVOT_BUDGET: usize = 1_000_000;

/// Decide strict feasibility of `p` exactly.
///
/// One auxiliary variable is added to every strict constraint
/// (`lhs + eps <= 0`) and `eps` is maximized over `[0, 1]`; the system is
/// strictly feasible iff the exact maximum is positive. The returned
/// witness satisfies every strict constraint with margin at least the
/// reported slack.
pub fn check_feasible_strict(p: &LpProblem) -> Result<LpOutcome, LpError> {
    if p.objective.is_some() {
        return Err(LpError::UnexpectedObjective);
    }
    p.validate()?;

    let eps_var: Var = p.bounds.keys().max().map(|v| v + 1).unwrap_or(0);
    let mut relaxed = LpProblem::new();
    relaxed.bounds = p.bounds.clone();
    relaxed.add_var(eps_var, Rational::zero(), Rational::one());
    for c in &p.constraints {
        match c.relation {
            Relation::Lt => {
                let mut lhs = c.lhs.clone();
                lhs.add_term(eps_var, Rational::one());
                relaxed.add_constraint(Constraint::new(lhs, Relation::Le));
            }
            _ => relaxed.add_constraint(c.clone()),
        }
    }
    relaxed.set_objective(LinearExpr::var(eps_var));

    let outcome = match maximize(&relaxed)? {
        LpOutcome::Optimal { mut witness, value } => {
            if value.is_positive() {
                witness.remove(&eps_var);
                LpOutcome::Feasible {
                    witness,
                    slack: value,
                }
            } else {
                LpOutcome::Infeasible
            }
        }
        LpOutcome::Infeasible => LpOutcome::Infeasible,
        // eps is boxed and every variable has finite bounds
        other => unreachable!("slack maximization cannot be {other:?}"),
    };

    if let LpOutcome::Feasible { witness, slack } = &outcome {
        debug_assert!(
            p.constraints.iter().all(|c| c.satisfied_by(witness)),
            "strict-feasibility witness fails exact substitution"
        );
        debug_assert!(slack.is_positive());
    }
    Ok(outcome)
}

/// Maximize the objective of `p` exactly over its closed constraint set.
pub fn maximize(p: &LpProblem) -> Result<LpOutcome, LpError> {
    let Some(objective) = &p.objective else {
        return Err(LpError::MissingObjective);
    };
    if p.constraints.iter().any(|c| c.relation == Relation::Lt) {
        return Err(LpError::StrictConstraint);
    }
    p.validate()?;

    let outcome = Simplex::build(p, objective)?.run()?;
    if let LpOutcome::Optimal { witness, value } = &outcome {
        debug_assert!(
            p.constraints.iter().all(|c| c.satisfied_by(witness)),
            "optimal witness fails exact substitution"
        );
        debug_assert_eq!(
            objective.eval(witness).expect("witness covers objective"),
            value.clone(),
            "reported optimum disagrees with objective at witness"
        );
    }
    Ok(outcome)
}

/// Dense-tableau two-phase primal simplex over exact rationals.
struct Simplex<'a> {
    problem: &'a LpProblem,
    /// column-major meaning: 0..n_structural are shifted problem variables,
    /// then slacks/surpluses, then artificials
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    first_artificial: usize,
    ncols: usize,
    /// problem variable ids in column order, with their lower bounds
    var_ids: Vec<Var>,
    shifts: Vec<Rational>,
    /// phase-2 objective over structural columns plus constant offset
    obj: Vec<Rational>,
    obj_offset: Rational,
    pivots: usize,
}

impl<'a> Simplex<'a> {
    fn build(p: &'a LpProblem, objective: &LinearExpr) -> Result<Simplex<'a>, LpError> {
        let var_ids: Vec<Var> = p.bounds.keys().copied().collect();
        let col_of: BTreeMap<Var, usize> =
            var_ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let d = var_ids.len();
        let shifts: Vec<Rational> = var_ids.iter().map(|v| p.bounds[v].0.clone()).collect();

        // rows in `A y (<=|=) b` form over shifted variables y = x - lo >= 0
        struct Row {
            coeffs: Vec<Rational>,
            rhs: Rational,
            eq: bool,
        }
        let mut raw: Vec<Row> = Vec::new();
        for c in &p.constraints {
            let mut coeffs = vec![Rational::zero(); d];
            let mut rhs = -c.lhs.constant_part();
            for (v, coeff) in c.lhs.terms() {
                let col = col_of[&v];
                rhs -= &(coeff * &shifts[col]);
                coeffs[col] = coeff.clone();
            }
            raw.push(Row {
                coeffs,
                rhs,
                eq: c.relation == Relation::Eq,
            });
        }
        // upper bounds of the box become ordinary rows
        for (col, v) in var_ids.iter().enumerate() {
            let (lo, hi) = &p.bounds[v];
            let mut coeffs = vec![Rational::zero(); d];
            coeffs[col] = Rational::one();
            raw.push(Row {
                coeffs,
                rhs: hi - lo,
                eq: false,
            });
        }

        let m = raw.len();
        // columns: structural | slack or surplus per row | artificials
        let n_slack = m;
        let mut n_artificial = 0;
        for row in &raw {
            if row.eq || row.rhs.is_negative() {
                n_artificial += 1;
            }
        }
        let ncols = d + n_slack + n_artificial;
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut next_artificial = d + n_slack;

        for (r, mut row) in raw.into_iter().enumerate() {
            let negate = row.rhs.is_negative();
            if negate {
                for c in row.coeffs.iter_mut() {
                    *c = -&*c;
                }
                row.rhs = -row.rhs;
            }
            let mut full = vec![Rational::zero(); ncols];
            full[..d].clone_from_slice(&row.coeffs);
            if row.eq {
                full[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            } else {
                // `<=` keeps a +1 slack; a negated row is `>=` with a -1 surplus
                full[d + r] = if negate {
                    Rational::from_int(-1)
                } else {
                    Rational::one()
                };
                if negate {
                    full[next_artificial] = Rational::one();
                    basis.push(next_artificial);
                    next_artificial += 1;
                } else {
                    basis.push(d + r);
                }
            }
            rows.push(full);
            rhs.push(row.rhs);
        }

        // phase-2 objective over shifted variables
        let mut obj = vec![Rational::zero(); d];
        let mut obj_offset = objective.constant_part().clone();
        for (v, coeff) in objective.terms() {
            let col = col_of[&v];
            obj_offset += &(coeff * &shifts[col]);
            obj[col] = coeff.clone();
        }

        Ok(Simplex {
            problem: p,
            rows,
            rhs,
            basis,

            first_artificial: d + n_slack,
            ncols,
            var_ids,
            shifts,
            obj,
            obj_offset,
            pivots: 0,
        })
    }

    fn run(mut self) -> Result<LpOutcome, LpError> {
        if self.basis.iter().any(|&b| b >= self.first_artificial) {
            // phase 1: drive sum of artificials to zero
            let mut zrow = vec![Rational::zero(); self.ncols];
            for c in self.first_artificial..self.ncols {
                zrow[c] = Rational::one();
            }
            let mut zval = Rational::zero();
            self.price_out_basis(&mut zrow, &mut zval);
            let bounded = self.optimize(&mut zrow, &mut zval, self.ncols)?;
            debug_assert!(bounded, "phase-1 objective is bounded by construction");
            if !zval.is_zero() {
                return Ok(LpOutcome::Infeasible);
            }
            self.expel_artificials()?;
        }

        // phase 2
        let mut zrow = vec![Rational::zero(); self.ncols];
        for (c, coeff) in self.obj.iter().enumerate() {
            zrow[c] = -coeff;
        }
        let mut zval = self.obj_offset.clone();
        self.price_out_basis(&mut zrow, &mut zval);
        if !self.optimize(&mut zrow, &mut zval, self.first_artificial)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut witness = BTreeMap::new();
        for (col, v) in self.var_ids.iter().enumerate() {
            let mut val = self.shifts[col].clone();
            if let Some(r) = self.basis.iter().position(|&b| b == col) {
                val += &self.rhs[r];
            }
            witness.insert(*v, val);
        }
        Ok(LpOutcome::Optimal {
            witness,
            value: zval,
        })
    }

    /// Make reduced costs of basic columns zero.
    fn price_out_basis(&self, zrow: &mut [Rational], zval: &mut Rational) {
        for (r, &b) in self.basis.iter().enumerate() {
            if !zrow[b].is_zero() {
                let factor = zrow[b].clone();
                for c in 0..self.ncols {
                    let delta = &factor * &self.rows[r][c];
                    zrow[c] = &zrow[c] - &delta;
                }
                *zval -= &(&factor * &self.rhs[r]);
            }
        }
    }

    /// Bland's rule iteration for maximization (zrow holds `z_j - c_j`).
    /// Columns at `col_limit` and beyond may not enter. Returns false when
    /// an improving column has no positive pivot entry (unbounded).
    fn optimize(
        &mut self,
        zrow: &mut [Rational],
        zval: &mut Rational,
        col_limit: usize,
    ) -> Result<bool, LpError> {
        loop {
            // entering: smallest column index with negative reduced cost
            let Some(enter) = (0..col_limit).find(|&c| zrow[c].is_negative()) else {
                return Ok(true);
            };
            // leaving: minimal ratio; ties broken by smallest basic index
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if a.is_positive() {
                    let ratio = &self.rhs[r] / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio
                                || (ratio == bratio && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((leave, _)) = best else {
                return Ok(false);
            };
            self.pivot(leave, enter, zrow, zval)?;
        }
    }

    fn pivot(
        &mut self,
        row: usize,
        col: usize,
        zrow: &mut [Rational],
        zval: &mut Rational,
    ) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > PIVOT_BUDGET {
            return Err(LpError::PivotLimit {
                pivots: self.pivots,
                system: format!("{:?}", self.problem),
            });
        }
        let inv = self.rows[row][col].recip().expect("pivot entry nonzero");
        for c in 0..self.ncols {
            self.rows[row][c] = &self.rows[row][c] * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for r in 0..self.rows.len() {
            if r != row && !self.rows[r][col].is_zero() {
                let factor = self.rows[r][col].clone();
                for c in 0..self.ncols {
                    let delta = &factor * &self.rows[row][c];
                    self.rows[r][c] = &self.rows[r][c] - &delta;
                }
                let delta = &factor * &self.rhs[row];
                self.rhs[r] = &self.rhs[r] - &delta;
            }
        }
        if !zrow[col].is_zero() {
            let factor = zrow[col].clone();
            for c in 0..self.ncols {
                let delta = &factor * &self.rows[row][c];
                zrow[c] = &zrow[c] - &delta;
            }
            *zval -= &(&factor * &self.rhs[row]);
        }
        self.basis[row] = col;
        Ok(())
    }

    /// After phase 1: pivot degenerate artificials out of the basis or drop
    /// their (redundant) rows entirely.
    fn expel_artificials(&mut self) -> Result<(), LpError> {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                debug_assert!(self.rhs[r].is_zero(), "artificial basic at nonzero level");
                if let Some(col) =
                    (0..self.first_artificial).find(|&c| !self.rows[r][c].is_zero())
                {
                    let mut dummy_z = vec![Rational::zero(); self.ncols];
                    let mut dummy_v = Rational::zero();
                    self.pivot(r, col, &mut dummy_z, &mut dummy_v)?;
                } else {
                    self.rows.swap_remove(r);
                    self.rhs.swap_remove(r);
                    self.basis.swap_remove(r);
                    continue;
                }
            }
            r += 1;
        }
        // artificials can no longer re-enter: zero out their columns
        for row in &mut self.rows {
            for c in self.first_artificial..self.ncols {
                row[c] = Rational::zero();
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn x(v: Var) -> LinearExpr {
        LinearExpr::var(v)
    }

    fn c(r: i64, q: i64) -> LinearExpr {
        LinearExpr::constant(rat!(r, q))
    }

    /// 0 < x1, x1 < x2, x2 < 1/2 over the unit box: the best common slack
    /// is 1/6 at (1/6, 1/3).
    #[test]
    fn strict_chain_slack() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_unit_var(2);
        p.add_constraint(Constraint::strictly_less(LinearExpr::zero(), x(1)));
        p.add_constraint(Constraint::strictly_less(x(1), x(2)));
        p.add_constraint(Constraint::strictly_less(x(2), c(1, 2)));
        match check_feasible_strict(&p).unwrap() {
            LpOutcome::Feasible { witness, slack } => {
                assert_eq!(slack, rat!(1, 6));
                assert_eq!(witness[&1], rat!(1, 6));
                assert_eq!(witness[&2], rat!(1, 3));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_pair_is_infeasible() {
        // 2x1 < 1 and 1/2 < x1
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_constraint(Constraint::strictly_less(x(1).scale(&rat!(2)), c(1, 1)));
        p.add_constraint(Constraint::strictly_less(c(1, 2), x(1)));
        assert_eq!(check_feasible_strict(&p).unwrap(), LpOutcome::Infeasible);
    }

    /// The reduced n=4 antisymmetric system: chain 0 < x1 < 1/2 plus the
    /// placement 2x1 < x1 + 1/2 < 1. Witness x1 = 1/3 verifies by
    /// substitution.
    #[test]
    fn antisymmetric_placement_feasible() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_constraint(Constraint::strictly_less(LinearExpr::zero(), x(1)));
        p.add_constraint(Constraint::strictly_less(x(1), c(1, 2)));
        p.add_constraint(Constraint::strictly_less(x(1).scale(&rat!(2)), x(1) + &c(1, 2)));
        p.add_constraint(Constraint::strictly_less(x(1) + &c(1, 2), c(1, 1)));
        let witness = match check_feasible_strict(&p).unwrap() {
            LpOutcome::Feasible { witness, .. } => witness,
            other => panic!("expected feasible, got {other:?}"),
        };
        for cst in &p.constraints {
            assert!(cst.satisfied_by(&witness));
        }
        // the hand witness x1 = 1/3 also satisfies everything
        let hand = BTreeMap::from([(1u32, rat!(1, 3))]);
        for cst in &p.constraints {
            assert!(cst.satisfied_by(&hand));
        }
    }

    #[test]
    fn maximize_single_bound() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_constraint(Constraint::less_equal(x(1), c(1, 2)));
        p.set_objective(x(1));
        match maximize(&p).unwrap() {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, rat!(1, 2));
                assert_eq!(witness[&1], rat!(1, 2));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn maximize_sum() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_unit_var(2);
        p.add_constraint(Constraint::less_equal(x(1) + &x(2), c(1, 1)));
        p.set_objective(x(1) + &x(2));
        match maximize(&p).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat!(1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    /// max eps for 0 < x1 < x2 < x3 < 1: equal spacing gives 1/4.
    #[test]
    fn chain_of_three_slack() {
        let mut p = LpProblem::new();
        for v in 1..=3 {
            p.add_unit_var(v);
        }
        p.add_constraint(Constraint::strictly_less(LinearExpr::zero(), x(1)));
        p.add_constraint(Constraint::strictly_less(x(1), x(2)));
        p.add_constraint(Constraint::strictly_less(x(2), x(3)));
        p.add_constraint(Constraint::strictly_less(x(3), c(1, 1)));
        match check_feasible_strict(&p).unwrap() {
            LpOutcome::Feasible { slack, .. } => assert_eq!(slack, rat!(1, 4)),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    /// Brute-force grid oracle for the chain slack: refine a uniform grid
    /// and confirm the best grid slack approaches the simplex value from
    /// below.
    #[test]
    fn chain_slack_grid_oracle() {
        let exact = rat!(1, 4);
        let mut last_best = rat!(0);
        for denom in [8i64, 16, 32, 64] {
            let mut best = rat!(0);
            for a in 1..denom {
                for b in (a + 1)..denom {
                    for cc in (b + 1)..denom {
                        let p1 = rat!(a, denom);
                        let p2 = rat!(b, denom);
                        let p3 = rat!(cc, denom);
                        let slack = [
                            p1.clone(),
                            &p2 - &p1,
                            &p3 - &p2,
                            &rat!(1) - &p3,
                        ]
                        .into_iter()
                        .min()
                        .unwrap();
                        if slack > best {
                            best = slack;
                        }
                    }
                }
            }
            assert!(best <= exact);
            assert!(best >= last_best);
            last_best = best;
        }
        assert_eq!(last_best, exact, "grid refinement converges to 1/4");
    }

    #[test]
    fn equality_constraints() {
        // x1 + x2 = 1, x1 - x2 <= 0, maximize x1 -> 1/2
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_unit_var(2);
        p.add_constraint(Constraint::equal(x(1) + &x(2), c(1, 1)));
        p.add_constraint(Constraint::less_equal(x(1), x(2)));
        p.set_objective(x(1));
        match maximize(&p).unwrap() {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, rat!(1, 2));
                assert_eq!(witness[&1], rat!(1, 2));
                assert_eq!(witness[&2], rat!(1, 2));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_equalities() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_constraint(Constraint::equal(x(1), c(1, 4)));
        p.add_constraint(Constraint::equal(x(1), c(1, 2)));
        p.set_objective(x(1));
        assert_eq!(maximize(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn rejects_strict_in_maximize() {
        let mut p = LpProblem::new();
        p.add_unit_var(1);
        p.add_constraint(Constraint::strictly_less(x(1), c(1, 2)));
        p.set_objective(x(1));
        assert_eq!(maximize(&p), Err(LpError::StrictConstraint));
    }

    #[test]
    fn deterministic_witness() {
        let build = || {
            let mut p = LpProblem::new();
            p.add_unit_var(1);
            p.add_unit_var(2);
            p.add_constraint(Constraint::strictly_less(LinearExpr::zero(), x(1)));
            p.add_constraint(Constraint::strictly_less(x(1), x(2)));
            p.add_constraint(Constraint::strictly_less(x(2), c(1, 1)));
            p
        };
        let a = check_feasible_strict(&build()).unwrap();
        let b = check_feasible_strict(&build()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_key_identifies_scaled_constraints() {
        let a = Constraint::strictly_less(x(1).scale(&rat!(2)), x(2).scale(&rat!(2)));
        let b = Constraint::strictly_less(x(1), x(2));
        assert_eq!(a.canonical_key(), b.canonical_key());
        let c1 = Constraint::strictly_less(x(1), x(2));
        let c2 = Constraint::strictly_less(x(2), x(1));
        assert_ne!(c1.canonical_key(), c2.canonical_key());
    }
}
