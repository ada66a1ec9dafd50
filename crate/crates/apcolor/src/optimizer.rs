//! Global minimization of the monochromatic fraction `f` over
//! antisymmetric block colorings with at most `n_max` blocks.
//!
//! For each even `n` and each chamber, the quadratic piece of `f` either
//! has no critical points, a unique one, or an affine space of them (on
//! which the value is constant). Unique candidates are kept when they lie
//! in the *closed* chamber (so facet critical points are not lost; `f` is
//! C1, so duplicates across adjacent chambers agree and are deduplicated
//! by point equality). Affine sets are intersected with the closed chamber
//! by an exact LP feasibility solve. Boundary strata of the endpoint
//! polytope are colorings with fewer blocks, covered by the smaller-`n`
//! iterations.

use crate::diagram::{
    derive_configuration, evaluate_f, mono_fraction_form, Configuration, DiagramError, Endpoints,
};
use crate::enumerator::{
    cache_file_name, enumerate_configurations, read_cache, write_cache, EnumError,
    EnumerateOptions,
};
use crate::linear::{LinearExpr, Var};
use crate::linsolve::{solve_linear, LinearSolveResult, SolveError};
use crate::lp::{maximize, Constraint, LpError, LpOutcome, LpProblem};
use crate::quadratic::QuadraticForm;
use crate::rational::Rational;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("n_max must be even (got {0})")]
    OddBlockCount(u32),
    #[error("n_max = {0} exceeds the certified range (<= 12); pass allow_uncertified to proceed")]
    UncertifiedRange(u32),
    #[error("cache for n={n} is inconsistent: {reason}")]
    CacheMismatch { n: u32, reason: String },
    #[error("offline run requested but no cache exists for n={0}")]
    MissingCache(u32),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// An exact critical point of one quadratic piece, certified to lie in the
/// closed chamber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPointRecord {
    pub n: u32,
    /// Line index of the configuration in canonical enumeration order.
    pub config_line: u64,
    /// Free coordinates `x_1 .. x_{n/2-1}`.
    pub point: Vec<Rational>,
    /// Full reconstructed endpoint vector `x_0 .. x_n`.
    pub endpoints: Vec<Rational>,
    pub value: Rational,
    /// FNV-1a hash of the configuration serialization; together with
    /// `config_line` this identifies the chamber.
    #[serde(skip)]
    pub config_hash: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerBlockCount {
    pub n: u32,
    pub config_count: u64,
    /// Best interior critical point at this block count, when one exists.
    pub minimum: Option<CriticalPointRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizationReport {
    pub n_max: u32,
    pub per_n: Vec<PerBlockCount>,
    pub global: CriticalPointRecord,
    /// Every record attaining the global minimum, deduplicated by endpoint
    /// vector; a singleton list is the uniqueness certificate.
    pub minimizers: Vec<CriticalPointRecord>,
    /// How uniqueness is established.
    pub uniqueness_method: String,
    pub uncertified: bool,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Default)]
pub struct MinimizeOptions {
    /// Directory of `configs_n{N}.txt` caches; missing caches are
    /// enumerated fresh and written back when the directory is set.
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    /// Permit `n_max > 12`, outside the certified range.
    pub allow_uncertified: bool,
    /// Fail instead of enumerating when a cache file is missing.
    pub offline: bool,
}

/// A critical-point candidate for a single quadratic piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub point: BTreeMap<Var, Rational>,
    pub value: Rational,
}

/// Find a critical point of `form` within the closed region, if any.
///
/// The gradient system is solved by exact elimination first; the LP is
/// used only when the critical set is affine of positive dimension, in
/// which case the value is additionally asserted constant on the set.
pub fn critical_points(
    form: &QuadraticForm,
    region_closed: &[Constraint],
    free_vars: &[Var],
) -> Result<Option<Candidate>, OptimizerError> {
    let grads = form.gradient_exprs();
    let zero = LinearExpr::zero();
    let rows: Vec<Vec<Rational>> = free_vars
        .iter()
        .map(|v| {
            let g = grads.get(v).unwrap_or(&zero);
            free_vars.iter().map(|w| g.coeff(*w)).collect()
        })
        .collect();
    let rhs: Vec<Rational> = free_vars
        .iter()
        .map(|v| -grads.get(v).unwrap_or(&zero).constant_part())
        .collect();

    match solve_linear(&rows, &rhs)? {
        LinearSolveResult::Inconsistent => Ok(None),
        LinearSolveResult::Unique(solution) => {
            let point: BTreeMap<Var, Rational> = free_vars
                .iter()
                .copied()
                .zip(solution.into_iter())
                .collect();
            if region_closed.iter().all(|c| c.satisfied_by(&point)) {
                let value = form.eval(&point).expect("point covers form variables");
                Ok(Some(Candidate { point, value }))
            } else {
                Ok(None)
            }
        }
        LinearSolveResult::Affine {
            particular,
            nullspace_basis,
        } => {
            // the value of the form is constant on the critical set; check
            // it exactly at translated points before searching the region
            let at = |coords: &[Rational]| -> Rational {
                let point: BTreeMap<Var, Rational> = free_vars
                    .iter()
                    .copied()
                    .zip(coords.iter().cloned())
                    .collect();
                form.eval(&point).expect("point covers form variables")
            };
            let base_value = at(&particular);
            for dir in &nullspace_basis {
                let shifted: Vec<Rational> = particular
                    .iter()
                    .zip(dir)
                    .map(|(p, d)| p + d)
                    .collect();
                if at(&shifted) != base_value {
                    return Err(OptimizerError::Internal(
                        "form not constant on its critical set".into(),
                    ));
                }
            }

            // feasibility of {gradient = 0} within the closed region
            let mut p = LpProblem::new();
            for &v in free_vars {
                p.add_unit_var(v);
            }
            for c in region_closed {
                p.add_constraint(c.clone());
            }
            for (v, g) in &grads {
                if !g.is_zero() {
                    p.add_constraint(Constraint::new(g.clone(), crate::lp::Relation::Eq));
                    debug_assert!(free_vars.contains(v));
                }
            }
            p.set_objective(LinearExpr::zero());
            match maximize(&p)? {
                LpOutcome::Optimal { witness, .. } => {
                    let value = form.eval(&witness).expect("witness covers form variables");
                    debug_assert_eq!(value, base_value);
                    Ok(Some(Candidate {
                        point: witness,
                        value,
                    }))
                }
                LpOutcome::Infeasible => Ok(None),
                other => Err(OptimizerError::Internal(format!(
                    "unexpected LP outcome {other:?} in critical-point search"
                ))),
            }
        }
    }
}

fn fnv1a_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in s.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn record_for(
    n: u32,
    config_line: u64,
    cfg: &Configuration,
    candidate: Candidate,
) -> CriticalPointRecord {
    let free_vars: Vec<Var> = (1..n / 2).collect();
    let point: Vec<Rational> = free_vars.iter().map(|v| candidate.point[v].clone()).collect();
    let endpoints = Endpoints::from_free(n, &candidate.point)
        .expect("critical point in closed chamber yields monotone endpoints");
    CriticalPointRecord {
        n,
        config_line,
        point,
        endpoints: endpoints.x().to_vec(),
        value: candidate.value,
        config_hash: fnv1a_str(&cfg.to_line()),
    }
}

/// The all-one-color stratum (no interior endpoints): every progression is
/// monochromatic.
fn zero_block_record() -> CriticalPointRecord {
    CriticalPointRecord {
        n: 0,
        config_line: 0,
        point: Vec::new(),
        endpoints: vec![Rational::zero(), Rational::one()],
        value: Rational::one(),
        config_hash: fnv1a_str(""),
    }
}

fn configurations_for(
    n: u32,
    opts: &MinimizeOptions,
) -> Result<Vec<Configuration>, OptimizerError> {
    if let Some(dir) = &opts.cache_dir {
        let path = dir.join(cache_file_name(n));
        if path.exists() {
            let cached = read_cache(&path)?;
            if cached.n != n {
                return Err(OptimizerError::CacheMismatch {
                    n,
                    reason: format!("cache file holds n={}", cached.n),
                });
            }
            return Ok(cached.configurations);
        }
    }
    if opts.offline {
        return Err(OptimizerError::MissingCache(n));
    }
    let enum_opts = EnumerateOptions {
        workers: opts.workers,
        ..EnumerateOptions::default()
    };
    let result = enumerate_configurations(n, &enum_opts)?;
    if let Some(dir) = &opts.cache_dir {
        std::fs::create_dir_all(dir).map_err(EnumError::Io)?;
        write_cache(&dir.join(cache_file_name(n)), &result)?;
    }
    Ok(result.configurations)
}

/// Sweep every chamber for every even block count up to `n_max`, tracking
/// the exact global minimum of `f` and every record attaining it.
pub fn global_minimize(
    n_max: u32,
    opts: &MinimizeOptions,
) -> Result<MinimizationReport, OptimizerError> {
    if n_max % 2 != 0 {
        return Err(OptimizerError::OddBlockCount(n_max));
    }
    if n_max > 12 && !opts.allow_uncertified {
        return Err(OptimizerError::UncertifiedRange(n_max));
    }
    let started = Instant::now();

    let run = || -> Result<MinimizationReport, OptimizerError> {
        let mut per_n = Vec::new();
        let mut all_records: Vec<CriticalPointRecord> = Vec::new();

        for n in (0..=n_max).step_by(2) {
            if n == 0 {
                let record = zero_block_record();
                per_n.push(PerBlockCount {
                    n,
                    config_count: 1,
                    minimum: Some(record.clone()),
                });
                all_records.push(record);
                continue;
            }
            let configs = configurations_for(n, opts)?;
            let free_vars: Vec<Var> = (1..n / 2).collect();
            let records: Result<Vec<Option<CriticalPointRecord>>, OptimizerError> = configs
                .par_iter()
                .enumerate()
                .map(|(line, cfg)| {
                    let form = mono_fraction_form(cfg)?;
                    let region: Vec<Constraint> = cfg
                        .region_constraints()
                        .iter()
                        .map(|c| c.closed())
                        .collect();
                    Ok(critical_points(&form, &region, &free_vars)?
                        .map(|cand| record_for(n, line as u64, cfg, cand)))
                })
                .collect();
            let mut records: Vec<CriticalPointRecord> =
                records?.into_iter().flatten().collect();
            // facet critical points appear in every adjacent closed
            // chamber; keep one record per point
            records.sort_by(|a, b| {
                a.endpoints
                    .cmp(&b.endpoints)
                    .then(a.config_line.cmp(&b.config_line))
            });
            records.dedup_by(|a, b| a.endpoints == b.endpoints);

            let minimum = records
                .iter()
                .min_by(|a, b| a.value.cmp(&b.value).then(a.endpoints.cmp(&b.endpoints)))
                .cloned();
            per_n.push(PerBlockCount {
                n,
                config_count: configs.len() as u64,
                minimum,
            });
            all_records.extend(records);
        }

        let global = all_records
            .iter()
            .min_by(|a, b| {
                a.value
                    .cmp(&b.value)
                    .then(a.n.cmp(&b.n))
                    .then(a.endpoints.cmp(&b.endpoints))
            })
            .cloned()
            .ok_or_else(|| OptimizerError::Internal("no records collected".into()))?;

        let mut minimizers: Vec<CriticalPointRecord> = all_records
            .into_iter()
            .filter(|r| r.value == global.value)
            .collect();
        minimizers.sort_by(|a, b| a.endpoints.cmp(&b.endpoints));
        minimizers.dedup_by(|a, b| a.endpoints == b.endpoints);

        Ok(MinimizationReport {
            n_max,
            per_n,
            global,
            minimizers,
            uniqueness_method:
                "collect every minimum-attaining critical-point record across all block counts \
                 and deduplicate by endpoint vector; a singleton list certifies uniqueness"
                    .into(),
            uncertified: n_max > 12,
            elapsed_ms: 0,
        })
    };

    let mut report = match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| OptimizerError::Internal(e.to_string()))?;
            pool.install(run)?
        }
        None => run()?,
    };
    report.elapsed_ms = started.elapsed().as_millis();

    // the global record is the minimum of the per-n minima (the running
    // minimum over "at most n blocks" is non-increasing by inclusion)
    let best = report
        .per_n
        .iter()
        .filter_map(|e| e.minimum.as_ref().map(|m| m.value.clone()))
        .min();
    debug_assert_eq!(best.as_ref(), Some(&report.global.value));

    Ok(report)
}

/// Exact certification of a single endpoint vector: the chamber is derived,
/// its quadratic piece is built, and the value and gradient are reported
/// exactly. `is_critical` holds exactly when the gradient vanishes.
#[derive(Debug, Clone, Serialize)]
pub struct Certification {
    pub n: u32,
    pub endpoints: Vec<Rational>,
    pub value: Rational,
    /// Gradient over the free coordinates `x_1 .. x_{n/2-1}`.
    pub gradient: Vec<Rational>,
    pub is_critical: bool,
}

pub fn certify_point(e: &Endpoints) -> Result<Certification, OptimizerError> {
    let cfg = derive_configuration(e)?;
    let n = e.n();
    let form = mono_fraction_form(&cfg)?;
    let at = e.free_assignment();
    let value = form.eval(&at).expect("assignment covers form variables");
    debug_assert_eq!(value, evaluate_f(e), "symbolic and numeric paths agree");
    let grad_map = form.gradient(&at).expect("assignment covers form variables");
    let gradient: Vec<Rational> = (1..n / 2)
        .map(|v| grad_map.get(&v).cloned().unwrap_or_default())
        .collect();
    let is_critical = gradient.iter().all(|g| g.is_zero());
    Ok(Certification {
        n,
        endpoints: e.x().to_vec(),
        value,
        gradient,
        is_critical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::twelve_block_minimizer;
    use crate::lp::Relation;
    use crate::rat;

    #[test]
    fn parabola_vertex_inside_region() {
        // form = (x1 - 1/4)^2 + 1/5 on 0 <= x1 <= 1/2
        let x1 = LinearExpr::var(1);
        let shifted = x1.clone() - &LinearExpr::constant(rat!(1, 4));
        let form = QuadraticForm::product(&shifted, &shifted)
            + QuadraticForm::constant(rat!(1, 5));
        let region = vec![
            Constraint::new(LinearExpr::zero() - &x1, Relation::Le),
            Constraint::new(x1.clone() - &LinearExpr::constant(rat!(1, 2)), Relation::Le),
        ];
        let cand = critical_points(&form, &region, &[1]).unwrap().unwrap();
        assert_eq!(cand.point[&1], rat!(1, 4));
        assert_eq!(cand.value, rat!(1, 5));
    }

    #[test]
    fn nonvanishing_gradient_has_no_critical_point() {
        // form = x1 + 1: gradient never zero
        let form = QuadraticForm::from_linear(
            LinearExpr::var(1) + &LinearExpr::constant(rat!(1)),
        );
        let region = vec![Constraint::new(
            LinearExpr::var(1) - &LinearExpr::constant(rat!(1)),
            Relation::Le,
        )];
        assert_eq!(critical_points(&form, &region, &[1]).unwrap(), None);
    }

    #[test]
    fn vertex_outside_region_rejected() {
        // minimum of (x1 - 3/4)^2 sits outside 0 <= x1 <= 1/2
        let shifted = LinearExpr::var(1) - &LinearExpr::constant(rat!(3, 4));
        let form = QuadraticForm::product(&shifted, &shifted);
        let region = vec![
            Constraint::new(LinearExpr::zero() - &LinearExpr::var(1), Relation::Le),
            Constraint::new(
                LinearExpr::var(1) - &LinearExpr::constant(rat!(1, 2)),
                Relation::Le,
            ),
        ];
        assert_eq!(critical_points(&form, &region, &[1]).unwrap(), None);
    }

    #[test]
    fn affine_critical_set() {
        // form = (x1 - x2)^2: critical on the diagonal, constant value 0
        let diff = LinearExpr::var(1) - &LinearExpr::var(2);
        let form = QuadraticForm::product(&diff, &diff);
        let region = vec![
            Constraint::new(
                LinearExpr::var(1) - &LinearExpr::constant(rat!(1, 2)),
                Relation::Le,
            ),
            Constraint::new(
                LinearExpr::var(2) - &LinearExpr::constant(rat!(1, 2)),
                Relation::Le,
            ),
        ];
        let cand = critical_points(&form, &region, &[1, 2]).unwrap().unwrap();
        assert_eq!(cand.point[&1], cand.point[&2]);
        assert_eq!(cand.value, rat!(0));
    }

    #[test]
    fn minimize_trivial_strata() {
        let report = global_minimize(0, &MinimizeOptions::default()).unwrap();
        assert_eq!(report.global.value, rat!(1));

        let report = global_minimize(2, &MinimizeOptions::default()).unwrap();
        assert_eq!(report.global.value, rat!(1, 2));
        assert_eq!(report.global.endpoints, vec![rat!(0), rat!(1, 2), rat!(1)]);
        // monotone in n: the n=0 stratum is strictly worse
        assert_eq!(report.per_n[0].minimum.as_ref().unwrap().value, rat!(1));
    }

    #[test]
    fn minimize_n4() {
        let report = global_minimize(4, &MinimizeOptions::default()).unwrap();
        assert!(report.global.value < rat!(1, 2));
        // exact value cross-checked against the direct evaluation path
        let e = Endpoints::new(report.global.endpoints.clone()).unwrap();
        assert_eq!(evaluate_f(&e), report.global.value);
    }

    #[test]
    fn certify_certificate_point() {
        let cert = certify_point(&twelve_block_minimizer()).unwrap();
        assert_eq!(cert.value, rat!(117, 548));
        assert!(cert.is_critical);
        assert_eq!(cert.gradient.len(), 5);
        assert!(cert.gradient.iter().all(|g| g.is_zero()));
    }

    #[test]
    fn certify_perturbed_point_not_critical() {
        // 29/548 in place of 28/548 (mirrored to stay antisymmetric)
        let mut x = twelve_block_minimizer().x().to_vec();
        x[1] = rat!(29, 548);
        x[11] = &rat!(1) - &x[1];
        let e = Endpoints::new(x).unwrap();
        let cert = certify_point(&e).unwrap();
        assert!(!cert.is_critical);
        assert!(cert.value > rat!(117, 548));
    }

    #[test]
    fn certify_half_half() {
        let e = Endpoints::new(vec![rat!(0), rat!(1, 2), rat!(1)]).unwrap();
        let cert = certify_point(&e).unwrap();
        assert_eq!(cert.value, rat!(1, 2));
        assert!(cert.gradient.is_empty());
        assert!(cert.is_critical);
    }

    #[test]
    fn certify_rejects_ties() {
        let e = Endpoints::new(vec![rat!(0), rat!(1, 4), rat!(1, 2), rat!(3, 4), rat!(1)])
            .unwrap();
        assert!(matches!(
            certify_point(&e),
            Err(OptimizerError::Diagram(DiagramError::Tie { .. }))
        ));
    }
}
