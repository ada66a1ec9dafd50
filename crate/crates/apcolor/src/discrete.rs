//! Exact counting over discrete colorings of `[N]`, the bead/block bridge
//! to the continuous setting, and circle colorings.
//!
//! A 3-AP is any triple `(a, a+d, a+2d)` inside `[N]` where `d` may be
//! zero or negative; an off-by-1 AP is a triple whose consecutive gaps
//! differ by exactly 1, i.e. `t1 + t3 - 2 t2 = +-1` (each sign a distinct
//! triple). For an `N`-bead coloring the monochromatic measure of the
//! induced block coloring is exactly `(m3 + m3'/2) / N^2`, which is the
//! bridge the convergence tests lean on.

use crate::diagram::Endpoints;
use crate::rational::Rational;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscreteError {
    #[error("coloring text may contain only 'R' and 'B' (got {0:?})")]
    BadColoring(char),
    #[error("coloring must be nonempty")]
    Empty,
    #[error("circle arcs must start at 0, be contiguous, have positive length, and sum to 1")]
    BadArcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub fn swapped(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// A two-coloring of `[N]`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteColoring {
    colors: Vec<Color>,
}

impl DiscreteColoring {
    pub fn new(colors: Vec<Color>) -> Result<Self, DiscreteError> {
        if colors.is_empty() {
            return Err(DiscreteError::Empty);
        }
        Ok(DiscreteColoring { colors })
    }

    /// Parse a string over `{R, B}`, e.g. `RRBB`.
    pub fn parse(text: &str) -> Result<Self, DiscreteError> {
        let colors: Result<Vec<Color>, DiscreteError> = text
            .trim()
            .chars()
            .map(|ch| match ch {
                'R' => Ok(Color::Red),
                'B' => Ok(Color::Blue),
                other => Err(DiscreteError::BadColoring(other)),
            })
            .collect();
        DiscreteColoring::new(colors?)
    }

    /// Number of beads; construction guarantees at least one.
    pub fn len(&self) -> u64 {
        self.colors.len() as u64
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Number of maximal monochromatic runs.
    pub fn block_count(&self) -> u64 {
        1 + self
            .colors
            .windows(2)
            .filter(|w| w[0] != w[1])
            .count() as u64
    }

    pub fn color_swapped(&self) -> DiscreteColoring {
        DiscreteColoring {
            colors: self.colors.iter().map(|c| c.swapped()).collect(),
        }
    }

    /// Endpoints of the induced block coloring on `[0,1]`, with adjacent
    /// same-color beads merged.
    pub fn merged_endpoints(&self) -> Endpoints {
        let n = self.colors.len() as i64;
        let mut x = vec![Rational::zero()];
        for (idx, w) in self.colors.windows(2).enumerate() {
            if w[0] != w[1] {
                x.push(Rational::new(idx as i64 + 1, n));
            }
        }
        x.push(Rational::one());
        Endpoints::new(x).expect("merged bead boundaries are monotone in [0,1]")
    }
}

impl fmt::Display for DiscreteColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            f.write_str(match c {
                Color::Red => "R",
                Color::Blue => "B",
            })?;
        }
        Ok(())
    }
}

/// Total number of 3-APs in `[N]` (d ranges over all integers, zero and
/// negative included): `ceil(N/2)^2 + floor(N/2)^2`.
pub fn count_ap3(n: u64) -> u64 {
    let odd = n.div_ceil(2);
    let even = n / 2;
    odd * odd + even * even
}

/// Monochromatic 3-AP count by scanning ordered same-parity pairs
/// `(t1, t3)`; the middle term is forced.
pub fn count_mono_ap3(c: &DiscreteColoring) -> u64 {
    let colors = c.colors();
    let n = colors.len();
    let mut count = 0u64;
    for t1 in 0..n {
        for t3 in (t1 % 2..n).step_by(2) {
            let mid = (t1 + t3) / 2;
            if colors[t1] == colors[t3] && colors[t1] == colors[mid] {
                count += 1;
            }
        }
    }
    count
}

/// Monochromatic off-by-1 count: ordered pairs `(t1, t3)` with odd sum
/// admit two middle terms, `(t1 + t3 -+ 1) / 2`, each a distinct triple.
pub fn count_mono_offby1(c: &DiscreteColoring) -> u64 {
    let colors = c.colors();
    let n = colors.len();
    let mut count = 0u64;
    for t1 in 0..n {
        for t3 in ((t1 + 1) % 2..n).step_by(2) {
            if colors[t1] != colors[t3] {
                continue;
            }
            // with indices 0-based, the two admissible middles floor both ways
            let down = (t1 + t3) / 2;
            let up = down + 1;
            if colors[down] == colors[t1] {
                count += 1;
            }
            if up < n && colors[up] == colors[t1] {
                count += 1;
            }
        }
    }
    count
}

/// Fraction of 3-APs that are monochromatic.
pub fn fraction_mono(c: &DiscreteColoring) -> Rational {
    Rational::new(count_mono_ap3(c) as i64, count_ap3(c.len()) as i64)
}

/// The monochromatic measure of the induced `N`-bead block coloring:
/// `(m3 + m3'/2) / N^2`, exactly.
pub fn bead_fraction(c: &DiscreteColoring) -> Rational {
    let n = c.len() as i64;
    let m3 = count_mono_ap3(c) as i64;
    let m3p = count_mono_offby1(c) as i64;
    (Rational::from_int(m3) + Rational::new(m3p, 2)) / Rational::from_int(n * n)
}

/// Color integer `i` by the block containing the bead midpoint
/// `(i - 1/2) / N`; a midpoint landing exactly on a block boundary takes
/// the left block. The first block is rendered `R`.
pub fn discretize(e: &Endpoints, n: u64) -> DiscreteColoring {
    assert!(n >= 1);
    let x = e.x();
    let mut colors = Vec::with_capacity(n as usize);
    let mut block = 1usize;
    for i in 1..=n {
        let mid = Rational::new(2 * i as i64 - 1, 2 * n as i64);
        while x[block] < mid {
            block += 1;
        }
        colors.push(if (block - 1) % 2 == 0 {
            Color::Red
        } else {
            Color::Blue
        });
    }
    DiscreteColoring { colors }
}

/// Both sides of the off-by-1 relation plus their difference; over block
/// colorings the defect grows at most like `block_count * N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OffBy1Relation {
    pub m3_prime: u64,
    pub twice_m3: u64,
    pub defect: i64,
}

pub fn offby1_relation_check(c: &DiscreteColoring) -> OffBy1Relation {
    let m3_prime = count_mono_offby1(c);
    let twice_m3 = 2 * count_mono_ap3(c);
    OffBy1Relation {
        m3_prime,
        twice_m3,
        defect: m3_prime as i64 - twice_m3 as i64,
    }
}

// --- circle colorings --------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleArc {
    pub start: Rational,
    pub length: Rational,
    pub color: Color,
}

/// A finite-arc two-coloring of the unit circle, as a partition of `[0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircleColoring {
    arcs: Vec<CircleArc>,
}

impl CircleColoring {
    pub fn new(arcs: Vec<CircleArc>) -> Result<Self, DiscreteError> {
        if arcs.is_empty() {
            return Err(DiscreteError::BadArcs);
        }
        let mut cursor = Rational::zero();
        for arc in &arcs {
            if arc.start != cursor || !arc.length.is_positive() {
                return Err(DiscreteError::BadArcs);
            }
            cursor = &cursor + &arc.length;
        }
        if !cursor.is_one() {
            return Err(DiscreteError::BadArcs);
        }
        Ok(CircleColoring { arcs })
    }

    /// Two arcs: `[0, p)` red and `[p, 1)` blue (or a single arc when `p`
    /// is 0 or 1).
    pub fn two_arc(p: &Rational) -> Result<Self, DiscreteError> {
        assert!(
            !p.is_negative() && p <= &Rational::one(),
            "red measure must lie in [0, 1]"
        );
        let mut arcs = Vec::new();
        if p.is_positive() {
            arcs.push(CircleArc {
                start: Rational::zero(),
                length: p.clone(),
                color: Color::Red,
            });
        }
        if p < &Rational::one() {
            arcs.push(CircleArc {
                start: p.clone(),
                length: &Rational::one() - p,
                color: Color::Blue,
            });
        }
        CircleColoring::new(arcs)
    }

    pub fn arcs(&self) -> &[CircleArc] {
        &self.arcs
    }

    pub fn red_measure(&self) -> Rational {
        self.arcs
            .iter()
            .filter(|a| a.color == Color::Red)
            .map(|a| a.length.clone())
            .sum()
    }

    pub fn from_json(text: &str) -> Result<Self, DiscreteError> {
        let arcs: Vec<CircleArc> =
            serde_json::from_str(text).map_err(|_| DiscreteError::BadArcs)?;
        CircleColoring::new(arcs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.arcs).expect("arc serialization cannot fail")
    }

    /// Exact color lookup of a point of `[0,1)`.
    fn color_at(&self, theta: &Rational) -> Color {
        debug_assert!(!theta.is_negative() && theta < &Rational::one());
        // last arc whose start is <= theta
        let idx = self
            .arcs
            .partition_point(|a| a.start <= *theta)
            .saturating_sub(1);
        self.arcs[idx].color
    }
}

/// The monochromatic fraction of a circle coloring with red measure `p`
/// depends only on `p`: it is `1 - 3p + 3p^2`.
pub fn circle_mono_fraction(p: &Rational) -> Rational {
    let three = Rational::from_int(3);
    &(&Rational::one() - &(&three * p)) + &(&three * &(p * p))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
}

/// Seeded Monte Carlo check of the circle formula: progressions are drawn
/// by sampling the start and increment uniformly (ChaCha8 keystream,
/// 64 fixed substreams so results do not depend on worker count), and each
/// point's color is looked up exactly after converting the dyadic sample
/// to a rational.
pub fn circle_monte_carlo(c: &CircleColoring, samples: u64, seed: u64) -> MonteCarloEstimate {
    assert!(samples >= 1);
    const SUBSTREAMS: u64 = 64;
    let per = samples / SUBSTREAMS;
    let extra = samples % SUBSTREAMS;

    let hits: u64 = (0..SUBSTREAMS)
        .into_par_iter()
        .map(|stream| {
            let quota = per + if stream < extra { 1 } else { 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(stream));
            let mut hits = 0u64;
            for _ in 0..quota {
                let x1: f64 = rng.random();
                let d: f64 = rng.random();
                let p1 = x1;
                let p2 = x1 + d;
                let p3 = x1 + 2.0 * d;
                let first = c.color_at(&Rational::from_f64_exact(p1 - p1.floor()));
                let second = c.color_at(&Rational::from_f64_exact(p2 - p2.floor()));
                let third = c.color_at(&Rational::from_f64_exact(p3 - p3.floor()));
                if first == second && second == third {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let estimate = hits as f64 / samples as f64;
    let std_error = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    MonteCarloEstimate {
        estimate,
        std_error,
        hits,
        samples,
        seed,
    }
}
