//! The block-coloring diagram engine.
//!
//! A block coloring of `[0,1]` with endpoints `x_0 < ... < x_n` induces a
//! unit-square diagram whose axes are the first and third terms of a
//! progression. Vertical strip `i`, horizontal strip `j` and diagonal strip
//! `k` (between the lines `x + y = 2x_k` and `x + y = 2x_{k+1}`) intersect
//! in a region that is empty or a closed polygon; the monochromatic measure
//! `f` is the sum of the areas of the regions whose three strip indices
//! share a parity.
//!
//! The region's polygon type is decided by comparing the four corner sums
//! `{x_i + x_j, x_i + x_{j+1}, x_{i+1} + x_j, x_{i+1} + x_{j+1}}` against
//! `2x_k` and `2x_{k+1}`; there are exactly twenty outcomes, each with a
//! quadratic area formula. Two independent evaluation paths are provided:
//! a direct numeric one ([`evaluate_f`]) and a symbolic one that assembles
//! the quadratic piece of `f` for a whole chamber
//! ([`mono_fraction_form`]); cross-checking them is one of the
//! correctness pillars of the crate.

use crate::linear::{LinearExpr, Var};
use crate::lp::{Constraint, Relation};
use crate::quadratic::QuadraticForm;
use crate::rational::{parse_rational, Rational};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("endpoint vector needs at least two entries")]
    TooShort,
    #[error("endpoints must start at 0 and end at 1")]
    BadEnds,
    #[error("endpoints must be non-decreasing (violated at index {0})")]
    NotMonotone(usize),
    #[error("operation requires strictly increasing endpoints (tie at index {0})")]
    NotStrict(usize),
    #[error("operation requires an antisymmetric endpoint vector")]
    NotAntisymmetric,
    #[error("pair sum x{i} + x{j} equals 2*x{k} exactly; perturb the input or handle the boundary explicitly")]
    Tie { i: u32, j: u32, k: u32 },
    #[error("configuration is missing pair ({0}, {1})")]
    MissingPair(u32, u32),
    #[error("kappa({i},{j}) = {k} outside the admissible range [{i}, {jm1}]", jm1 = j - 1)]
    KappaOutOfRange { i: u32, j: u32, k: u32 },
    #[error("mirror identity violated at pair ({0}, {1})")]
    MirrorViolation(u32, u32),
    #[error("comparison pattern matches no region case (corrupt configuration)")]
    NoMatchingCase,
    #[error("cannot parse configuration line: {0}")]
    BadLine(String),
    #[error("cannot parse endpoint list: {0}")]
    BadEndpointList(String),
}

// --- endpoints --------------------------------------------------------------

/// Block-coloring endpoints `(x_0, ..., x_n)` with `x_0 = 0`, `x_n = 1`,
/// non-decreasing. Blocks alternate in color; block `b` spans
/// `(x_{b-1}, x_b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoints {
    x: Vec<Rational>,
    antisymmetric: bool,
}

impl Endpoints {
    pub fn new(x: Vec<Rational>) -> Result<Self, DiagramError> {
        if x.len() < 2 {
            return Err(DiagramError::TooShort);
        }
        if !x[0].is_zero() || !x[x.len() - 1].is_one() {
            return Err(DiagramError::BadEnds);
        }
        for idx in 0..x.len() - 1 {
            if x[idx] > x[idx + 1] {
                return Err(DiagramError::NotMonotone(idx));
            }
        }
        let n = x.len() - 1;
        let one = Rational::one();
        let antisymmetric =
            n % 2 == 0 && (0..=n).all(|k| &x[k] + &x[n - k] == one);
        Ok(Endpoints { x, antisymmetric })
    }

    /// Parse a comma-separated list of rationals.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let vals: Result<Vec<Rational>, _> =
            text.split(',').map(|t| parse_rational(t.trim())).collect();
        let vals = vals.map_err(|_| DiagramError::BadEndpointList(text.to_string()))?;
        Endpoints::new(vals)
    }

    /// Block count.
    pub fn n(&self) -> u32 {
        (self.x.len() - 1) as u32
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn is_strict(&self) -> bool {
        self.x.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetric
    }

    /// The free coordinates `x_1 .. x_{n/2-1}` of an antisymmetric vector.
    pub fn free_assignment(&self) -> BTreeMap<Var, Rational> {
        let half = self.n() / 2;
        (1..half).map(|v| (v, self.x[v as usize].clone())).collect()
    }

    /// Rebuild a full antisymmetric vector from its free coordinates.
    pub fn from_free(n: u32, free: &BTreeMap<Var, Rational>) -> Result<Self, DiagramError> {
        assert!(n >= 2 && n % 2 == 0, "antisymmetric vectors need even n >= 2");
        let half = n / 2;
        let mut x = Vec::with_capacity(n as usize + 1);
        for v in 0..=n {
            x.push(if v == 0 {
                Rational::zero()
            } else if v == n {
                Rational::one()
            } else if v == half {
                Rational::new(1, 2)
            } else if v < half {
                free[&v].clone()
            } else {
                &Rational::one() - &free[&(n - v)]
            });
        }
        Endpoints::new(x)
    }

    /// The color-swap reflection `x -> reversed(1 - x)`.
    pub fn reflected(&self) -> Endpoints {
        let one = Rational::one();
        let x: Vec<Rational> = self.x.iter().rev().map(|v| &one - v).collect();
        Endpoints {
            x,
            antisymmetric: self.antisymmetric,
        }
    }
}

impl fmt::Display for Endpoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The antisymmetric 12-block coloring with block sizes
/// `(28, 6, 28, 37, 59, 116, 116, 59, 37, 28, 6, 28) / 548`; the unique
/// global minimizer among antisymmetric colorings with at most 12 blocks,
/// attaining `f = 117/548`.
pub fn twelve_block_minimizer() -> Endpoints {
    let cumulative = [0i64, 28, 34, 62, 99, 158, 274, 390, 449, 486, 514, 520, 548];
    Endpoints::new(
        cumulative
            .iter()
            .map(|&c| Rational::new(c, 548))
            .collect(),
    )
    .expect("hard-coded vector is valid")
}

// --- configurations ---------------------------------------------------------

/// A chamber of the pair-sum arrangement for an antisymmetric vector:
/// `kappa(i, j) = k` means `2x_k < x_i + x_j < 2x_{k+1}`. Pairs with
/// `i + j = n` are excluded (their sum is identically `1 = 2x_{n/2}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    n: u32,
    kappa: BTreeMap<(u32, u32), u32>,
}

impl Configuration {
    /// All pairs `0 <= i < j <= n` with `i + j != n`, in lexicographic order.
    pub fn pairs(n: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..=n {
            for j in (i + 1)..=n {
                if i + j != n {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn new(n: u32, kappa: BTreeMap<(u32, u32), u32>) -> Result<Self, DiagramError> {
        for (i, j) in Self::pairs(n) {
            let Some(&k) = kappa.get(&(i, j)) else {
                return Err(DiagramError::MissingPair(i, j));
            };
            if k < i || k >= j {
                return Err(DiagramError::KappaOutOfRange { i, j, k });
            }
        }
        let cfg = Configuration { n, kappa };
        for (i, j) in Self::pairs(n) {
            let mirror = (n - j, n - i);
            if cfg.kappa[&mirror] != n - 1 - cfg.kappa[&(i, j)] {
                return Err(DiagramError::MirrorViolation(i, j));
            }
        }
        Ok(cfg)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self, i: u32, j: u32) -> u32 {
        self.kappa[&(i.min(j), i.max(j))]
    }

    /// Bit-exact serialization: pairs in lexicographic order, `i,j:k`
    /// entries joined by `;`. The empty configuration (n = 0) is the empty
    /// string.
    pub fn to_line(&self) -> String {
        Self::pairs(self.n)
            .into_iter()
            .map(|(i, j)| format!("{i},{j}:{}", self.kappa[&(i, j)]))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_line(n: u32, line: &str) -> Result<Self, DiagramError> {
        let bad = || DiagramError::BadLine(line.to_string());
        let mut kappa = BTreeMap::new();
        if !line.trim().is_empty() {
            for entry in line.trim().split(';') {
                let (pair, k) = entry.split_once(':').ok_or_else(bad)?;
                let (i, j) = pair.split_once(',').ok_or_else(bad)?;
                let i: u32 = i.parse().map_err(|_| bad())?;
                let j: u32 = j.parse().map_err(|_| bad())?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                if kappa.insert((i, j), k).is_some() {
                    return Err(bad());
                }
            }
        }
        if kappa.keys().cloned().collect::<Vec<_>>() != Self::pairs(n) {
            return Err(bad());
        }
        Configuration::new(n, kappa)
    }

    /// The strict inequality system of this chamber, reduced to the free
    /// variables `x_1 .. x_{n/2-1}`: the endpoint chain plus both placement
    /// inequalities of every pair, deduplicated up to positive scaling.
    pub fn region_constraints(&self) -> Vec<Constraint> {
        let n = self.n;
        let image = antisym_image(n);
        let mut out: Vec<Constraint> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut push = |lhs: LinearExpr| {
            if lhs.is_constant() {
                debug_assert!(
                    lhs.constant_part().is_negative(),
                    "constant-true chain/placement constraint expected, got {lhs}"
                );
                return;
            }
            let c = Constraint::new(lhs, Relation::Lt);
            if seen.insert(c.canonical_key()) {
                out.push(c);
            }
        };
        for t in 0..n {
            // x_t < x_{t+1}
            let lhs = (LinearExpr::var(t) - &LinearExpr::var(t + 1)).substitute(&image);
            push(lhs);
        }
        for ((i, j), &k) in &self.kappa {
            let sum = (LinearExpr::var(*i) + &LinearExpr::var(*j)).substitute(&image);
            let lo = LinearExpr::var(k).scale(&Rational::from_int(2)).substitute(&image);
            let hi = LinearExpr::var(k + 1)
                .scale(&Rational::from_int(2))
                .substitute(&image);
            push(lo - &sum);
            push(sum - &hi);
        }
        out
    }

    fn cmp_sum_vs_double(&self, a: u32, b: u32, t: u32) -> Ordering {
        let n = self.n;
        if a == b {
            // degenerate pair: 2x_a vs 2x_t by index
            a.cmp(&t)
        } else if a + b == n {
            // forced pair: sum is identically 1 = 2x_{n/2}
            (n / 2).cmp(&t)
        } else {
            let k = self.kappa(a, b);
            // 2x_k < sum < 2x_{k+1}: below 2x_t iff k < t, above otherwise
            if k < t {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }

    fn position(&self, a: u32, b: u32, k: u32) -> Pos {
        // exact ties take the `<=` side of the case inequalities
        if self.cmp_sum_vs_double(a, b, k) != Ordering::Greater {
            Pos::Lo
        } else if self.cmp_sum_vs_double(a, b, k + 1) != Ordering::Greater {
            Pos::Mid
        } else {
            Pos::Hi
        }
    }
}

// --- the twenty region cases -------------------------------------------------

/// Position of a corner sum relative to the diagonal strip
/// `(2x_k, 2x_{k+1}]`: at or below the lower line, inside, or above the
/// upper line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pos {
    Lo,
    Mid,
    Hi,
}

/// One of the twenty polygon cases a strip intersection can form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionCase(pub u8);

/// Map the four corner-sum positions to the region case. Corner order:
/// `(x_i + x_j, x_i + x_{j+1}, x_{i+1} + x_j, x_{i+1} + x_{j+1})`.
fn case_from_pattern(p: (Pos, Pos, Pos, Pos)) -> Result<RegionCase, DiagramError> {
    use Pos::*;
    let id = match p {
        (Mid, Mid, Mid, Mid) => 1,
        (Lo, Mid, Mid, Mid) => 2,
        (Lo, Mid, Lo, Mid) => 3,
        (Lo, Lo, Mid, Mid) => 4,
        (Lo, Lo, Lo, Mid) => 5,
        (Mid, Mid, Mid, Hi) => 6,
        (Lo, Mid, Mid, Hi) => 7,
        (Lo, Mid, Lo, Hi) => 8,
        (Lo, Lo, Mid, Hi) => 9,
        (Lo, Lo, Lo, Hi) => 10,
        (Mid, Hi, Mid, Hi) => 11,
        (Lo, Hi, Mid, Hi) => 12,
        (Lo, Hi, Lo, Hi) => 13,
        (Mid, Mid, Hi, Hi) => 14,
        (Lo, Mid, Hi, Hi) => 15,
        (Lo, Lo, Hi, Hi) => 16,
        (Mid, Hi, Hi, Hi) => 17,
        (Lo, Hi, Hi, Hi) => 18,
        (Hi, Hi, Hi, Hi) => 19,
        (Lo, Lo, Lo, Lo) => 20,
        _ => return Err(DiagramError::NoMatchingCase),
    };
    Ok(RegionCase(id))
}

/// Classify the intersection of vertical strip `i`, horizontal strip `j`
/// and diagonal strip `k` under a configuration's implied comparisons.
pub fn classify_region(
    i: u32,
    j: u32,
    k: u32,
    cfg: &Configuration,
) -> Result<RegionCase, DiagramError> {
    let p = (
        cfg.position(i.min(j), i.max(j), k),
        cfg.position(i.min(j + 1), i.max(j + 1), k),
        cfg.position((i + 1).min(j), (i + 1).max(j), k),
        cfg.position(i + 1, j + 1, k),
    );
    case_from_pattern(p)
}

/// The exact area formula of a region case, as a quadratic form in the
/// full endpoint variables `x_0 .. x_n`. Cases 19 and 20 are the zero form.
pub fn region_area_form(case: RegionCase, i: u32, j: u32, k: u32) -> QuadraticForm {
    let x = LinearExpr::var;
    let two = Rational::from_int(2);
    let half = Rational::new(1, 2);

    let xi = x(i);
    let xi1 = x(i + 1);
    let xj = x(j);
    let xj1 = x(j + 1);
    let dk = x(k).scale(&two);
    let dk1 = x(k + 1).scale(&two);

    let rect = || QuadraticForm::product(&(xi1.clone() - &xi), &(xj1.clone() - &xj));
    // triangle cut at the lower-left corner by x + y = t
    let corner_lo = |t: &LinearExpr| {
        let side = t.clone() - &xi - &xj;
        QuadraticForm::product(&side, &side).scale(&half)
    };
    // triangle cut at the upper-right corner by x + y = t
    let corner_hi = |t: &LinearExpr| {
        let side = t.clone() - &xi1 - &xj1;
        QuadraticForm::product(&side, &side).scale(&half)
    };
    // trapezoid above the line x + y = t across the full vertical strip
    let trap_i_low = |t: &LinearExpr| {
        let height = xj1.clone() + &xi.scale(&half) + &xi1.scale(&half) - t;
        QuadraticForm::product(&(xi1.clone() - &xi), &height)
    };
    // trapezoid above the line x + y = t across the full horizontal strip
    let trap_j_low = |t: &LinearExpr| {
        let height = xi1.clone() + &xj.scale(&half) + &xj1.scale(&half) - t;
        QuadraticForm::product(&(xj1.clone() - &xj), &height)
    };
    // trapezoid below the line x + y = t across the full vertical strip
    let trap_i_high = |t: &LinearExpr| {
        let height = t.clone() - &xj - &xi.scale(&half) - &xi1.scale(&half);
        QuadraticForm::product(&(xi1.clone() - &xi), &height)
    };
    // trapezoid below the line x + y = t across the full horizontal strip
    let trap_j_high = |t: &LinearExpr| {
        let height = t.clone() - &xj.scale(&half) - &xj1.scale(&half) - &xi;
        QuadraticForm::product(&(xj1.clone() - &xj), &height)
    };

    match case.0 {
        1 => rect(),
        2 => rect() - corner_lo(&dk),
        3 => trap_i_low(&dk),
        4 => trap_j_low(&dk),
        5 => corner_hi(&dk),
        6 => rect() - corner_hi(&dk1),
        7 => rect() - corner_lo(&dk) - corner_hi(&dk1),
        8 => trap_i_low(&dk) - corner_hi(&dk1),
        9 => trap_j_low(&dk) - corner_hi(&dk1),
        10 => corner_hi(&dk) - corner_hi(&dk1),
        11 => trap_i_high(&dk1),
        12 => trap_i_high(&dk1) - corner_lo(&dk),
        13 => QuadraticForm::product(&(xi1 - &xi), &(dk1 - &dk)),
        14 => trap_j_high(&dk1),
        15 => trap_j_high(&dk1) - corner_lo(&dk),
        16 => QuadraticForm::product(&(xj1 - &xj), &(dk1 - &dk)),
        17 => corner_lo(&dk1),
        18 => corner_lo(&dk1) - corner_lo(&dk),
        19 | 20 => QuadraticForm::zero(),
        other => unreachable!("invalid region case {other}"),
    }
}

/// Substitution images implementing the antisymmetry reduction
/// `x_0 -> 0`, `x_n -> 1`, `x_{n/2} -> 1/2`, `x_v -> 1 - x_{n-v}` for
/// `v > n/2`; free variables `x_1 .. x_{n/2-1}` map to themselves.
pub fn antisym_image(n: u32) -> impl Fn(Var) -> Option<LinearExpr> {
    move |v: Var| {
        if v == 0 {
            Some(LinearExpr::zero())
        } else if v == n {
            Some(LinearExpr::constant(Rational::one()))
        } else if 2 * v == n {
            Some(LinearExpr::constant(Rational::new(1, 2)))
        } else if 2 * v > n {
            Some(LinearExpr::constant(Rational::one()) - &LinearExpr::var(n - v))
        } else {
            None
        }
    }
}

/// Assemble the quadratic piece of `f` for a chamber: the sum of region
/// areas over all ordered strip triples `(i, j, k)` with matching parities,
/// reduced by the antisymmetry substitution to the free variables
/// `x_1 .. x_{n/2-1}`.
pub fn mono_fraction_form(cfg: &Configuration) -> Result<QuadraticForm, DiagramError> {
    let n = cfg.n();
    assert!(n >= 1, "mono_fraction_form needs at least one block");
    let mut total = QuadraticForm::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i % 2 == j % 2 && j % 2 == k % 2 {
                    let case = classify_region(i, j, k, cfg)?;
                    total = total + region_area_form(case, i, j, k);
                }
            }
        }
    }
    Ok(total.substitute(&antisym_image(n)))
}

// --- direct numeric evaluation ------------------------------------------------

fn numeric_pos(s: &Rational, lo: &Rational, hi: &Rational) -> Pos {
    if s <= lo {
        Pos::Lo
    } else if s <= hi {
        Pos::Mid
    } else {
        Pos::Hi
    }
}

/// Numeric area of the strip intersection `(i, j, k)` at concrete
/// endpoints. Classification and the area formula are evaluated directly
/// in rational arithmetic, independent of the symbolic path.
fn region_area_at(x: &[Rational], i: usize, j: usize, k: usize) -> Rational {
    let two = Rational::from_int(2);
    let half = Rational::new(1, 2);
    let (xi, xi1, xj, xj1) = (&x[i], &x[i + 1], &x[j], &x[j + 1]);
    let dk = &two * &x[k];
    let dk1 = &two * &x[k + 1];

    let s00 = xi + xj;
    let s01 = xi + xj1;
    let s10 = xi1 + xj;
    let s11 = xi1 + xj1;
    let pattern = (
        numeric_pos(&s00, &dk, &dk1),
        numeric_pos(&s01, &dk, &dk1),
        numeric_pos(&s10, &dk, &dk1),
        numeric_pos(&s11, &dk, &dk1),
    );
    let case = case_from_pattern(pattern)
        .expect("monotone endpoints always match a case");

    let rect = || &(xi1 - xi) * &(xj1 - xj);
    let corner_lo = |t: &Rational| {
        let side = t - &s00;
        &(&side * &side) * &half
    };
    let corner_hi = |t: &Rational| {
        let side = t - &s11;
        &(&side * &side) * &half
    };
    let trap_i_low = |t: &Rational| {
        let height = xj1 + &(&half * &(xi + xi1)) - t;
        &(xi1 - xi) * &height
    };
    let trap_j_low = |t: &Rational| {
        let height = xi1 + &(&half * &(xj + xj1)) - t;
        &(xj1 - xj) * &height
    };
    let trap_i_high = |t: &Rational| {
        let height = t - xj - &(&half * &(xi + xi1));
        &(xi1 - xi) * &height
    };
    let trap_j_high = |t: &Rational| {
        let height = t - &(&half * &(xj + xj1)) - xi;
        &(xj1 - xj) * &height
    };

    match case.0 {
        1 => rect(),
        2 => &rect() - &corner_lo(&dk),
        3 => trap_i_low(&dk),
        4 => trap_j_low(&dk),
        5 => corner_hi(&dk),
        6 => &rect() - &corner_hi(&dk1),
        7 => &(&rect() - &corner_lo(&dk)) - &corner_hi(&dk1),
        8 => &trap_i_low(&dk) - &corner_hi(&dk1),
        9 => &trap_j_low(&dk) - &corner_hi(&dk1),
        10 => &corner_hi(&dk) - &corner_hi(&dk1),
        11 => trap_i_high(&dk1),
        12 => &trap_i_high(&dk1) - &corner_lo(&dk),
        13 => &(xi1 - xi) * &(&dk1 - &dk),
        14 => trap_j_high(&dk1),
        15 => &trap_j_high(&dk1) - &corner_lo(&dk),
        16 => &(xj1 - xj) * &(&dk1 - &dk),
        17 => corner_lo(&dk1),
        18 => &corner_lo(&dk1) - &corner_lo(&dk),
        19 | 20 => Rational::zero(),
        other => unreachable!("invalid region case {other}"),
    }
}

/// The fraction of monochromatic progressions of a block coloring,
/// evaluated directly at the endpoints (no configuration involved).
pub fn evaluate_f(e: &Endpoints) -> Rational {
    let n = e.n() as usize;
    let x = e.x();
    let mut total = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            if i % 2 != j % 2 {
                continue;
            }
            for k in (i % 2..n).step_by(2) {
                total += &region_area_at(x, i, j, k);
            }
        }
    }
    total
}

/// Sum of region areas over all ordered triples (no parity filter); the
/// regions partition the unit square, so the result must be exactly 1.
pub fn total_area_check(e: &Endpoints) -> Rational {
    let n = e.n() as usize;
    let x = e.x();
    let mut total = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                total += &region_area_at(x, i, j, k);
            }
        }
    }
    total
}

/// Locate the chamber containing a strictly monotone antisymmetric vector.
/// Fails with [`DiagramError::Tie`] if any pair sum equals a doubled
/// endpoint exactly.
pub fn derive_configuration(e: &Endpoints) -> Result<Configuration, DiagramError> {
    if !e.is_antisymmetric() {
        return Err(DiagramError::NotAntisymmetric);
    }
    if let Some(idx) = e.x().windows(2).position(|w| w[0] >= w[1]) {
        return Err(DiagramError::NotStrict(idx));
    }
    let n = e.n();
    let x = e.x();
    let two = Rational::from_int(2);
    let mut kappa = BTreeMap::new();
    for (i, j) in Configuration::pairs(n) {
        let sum = &x[i as usize] + &x[j as usize];
        let mut found = None;
        for k in i..j {
            let lo = &two * &x[k as usize];
            let hi = &two * &x[k as usize + 1];
            match sum.cmp(&lo) {
                Ordering::Equal => return Err(DiagramError::Tie { i, j, k }),
                Ordering::Less => break,
                Ordering::Greater => {}
            }
            match sum.cmp(&hi) {
                Ordering::Equal => return Err(DiagramError::Tie { i, j, k: k + 1 }),
                Ordering::Less => {
                    found = Some(k);
                    break;
                }
                Ordering::Greater => {}
            }
        }
        // 2x_i < x_i + x_j < 2x_j forces a slot inside [i, j-1]
        let k = found.expect("strictly monotone vector places every pair");
        kappa.insert((i, j), k);
    }
    Configuration::new(n, kappa)
}
