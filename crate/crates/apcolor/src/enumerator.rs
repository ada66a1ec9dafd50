//! Enumeration of all feasible configurations for a given even block count
//! under antisymmetry.
//!
//! The algorithm is branch-and-certify: pairs `(i, j)` are processed in
//! decreasing span order, and every placement `2x_k < x_i + x_j < 2x_{k+1}`
//! appended to a surviving partial system is certified by an exact
//! strict-feasibility LP solve. Two sound shortcuts avoid redundant solves:
//! a placement whose (deduplicated) constraints are already present in the
//! partial system inherits feasibility, and a placement whose constraints
//! the stored witness already satisfies strictly is feasible by
//! substitution. Infeasibility is always decided by the exact LP.
//!
//! Runs are checkpointed after each completed pair; resuming yields output
//! bit-identical to an uninterrupted run.

use crate::diagram::Configuration;
use crate::linear::{LinearExpr, Var};
use crate::lp::{check_feasible_strict, Constraint, LpError, LpOutcome, LpProblem, Relation};
use crate::rational::Rational;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("block count must be even (got {0})")]
    OddBlockCount(u32),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt checkpoint: {0}")]
    BadCheckpoint(String),
    #[error("checkpoint was written by an incompatible version ({0})")]
    VersionMismatch(String),
    #[error("checkpoint does not match the requested run: {0}")]
    RunMismatch(String),
    #[error("corrupt cache file: {0}")]
    BadCache(String),
    #[error("run halted after pair {completed_pairs}; checkpoint written, resume to continue")]
    Halted { completed_pairs: usize },
    #[error("lp failure: {0}")]
    Lp(#[from] LpError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrderKind {
    /// Decreasing span `j - i`, ties lexicographic. Several times faster
    /// than lexicographic order because wide pairs prune early.
    DecreasingSpan,
    /// Plain lexicographic order; same final set, slower.
    Lexicographic,
}

impl PairOrderKind {
    fn tag(self) -> &'static str {
        match self {
            PairOrderKind::DecreasingSpan => "span",
            PairOrderKind::Lexicographic => "lex",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Worker threads; `None` uses the current rayon pool.
    pub workers: Option<usize>,
    /// Checkpoint file, written atomically after every completed pair.
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint instead of starting fresh.
    pub resume: bool,
    /// Reconstruct forced mirror placements instead of solving them.
    pub mirror_symmetry: bool,
    pub pair_order: PairOrderKind,
    /// Halt (with a checkpoint) after this many pairs; used for budgeted
    /// runs and for exercising resume.
    pub halt_after_pairs: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            workers: None,
            checkpoint: None,
            resume: false,
            mirror_symmetry: false,
            pair_order: PairOrderKind::DecreasingSpan,
            halt_after_pairs: None,
        }
    }
}

#[derive(Debug)]
pub struct EnumerationResult {
    pub n: u32,
    pub count: u64,
    /// Complete feasible configurations in canonical (sorted serialization)
    /// order.
    pub configurations: Vec<Configuration>,
}

/// All pairs `0 <= i < j <= n` with `i + j != n`, sorted by decreasing
/// `j - i` with lexicographic tie-break. Span-1 pairs admit exactly one
/// placement (k = i) and carry no new constraints beyond the chain.
pub fn pair_processing_order(n: u32) -> Vec<(u32, u32)> {
    let mut pairs = Configuration::pairs(n);
    pairs.sort_by_key(|&(i, j)| (std::cmp::Reverse(j - i), i, j));
    pairs
}

/// A surviving partial assignment: placements for the first `ks.len()`
/// pairs of the processing order, plus (when available) a strictly
/// feasible witness of the induced system.
#[derive(Debug, Clone)]
struct Partial {
    ks: Vec<u8>,
    witness: Option<BTreeMap<Var, Rational>>,
}

/// The strict chain `0 < x_1 < ... < x_{n/2} = 1/2`, reduced to free
/// variables and deduplicated.
fn chain_constraints(n: u32) -> Vec<Constraint> {
    let image = crate::diagram::antisym_image(n);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for t in 0..n {
        let lhs = (LinearExpr::var(t) - &LinearExpr::var(t + 1)).substitute(&image);
        if lhs.is_constant() {
            debug_assert!(lhs.constant_part().is_negative());
            continue;
        }
        let c = Constraint::new(lhs, Relation::Lt);
        if seen.insert(c.canonical_key()) {
            out.push(c);
        }
    }
    out
}

/// The two reduced placement constraints `2x_k < x_i + x_j < 2x_{k+1}`.
/// `None` entries were constant-true; a constant-false reduction means the
/// placement is outright impossible.
fn placement_constraints(
    n: u32,
    i: u32,
    j: u32,
    k: u32,
) -> Result<Vec<Constraint>, ()> {
    let image = crate::diagram::antisym_image(n);
    let sum = (LinearExpr::var(i) + &LinearExpr::var(j)).substitute(&image);
    let two = Rational::from_int(2);
    let lo = LinearExpr::var(k).scale(&two).substitute(&image);
    let hi = LinearExpr::var(k + 1).scale(&two).substitute(&image);
    let mut out = Vec::new();
    for lhs in [lo - &sum, sum - &hi] {
        if lhs.is_constant() {
            if lhs.constant_part().is_negative() {
                continue; // vacuously true
            }
            return Err(()); // impossible placement
        }
        out.push(Constraint::new(lhs, Relation::Lt));
    }
    Ok(out)
}

/// Scale-invariant constraint identity, used to deduplicate systems.
type SysKey = (Relation, Vec<(Var, Rational)>, Rational);

struct PairContext {
    n: u32,
    order: Vec<(u32, u32)>,
    index_of: BTreeMap<(u32, u32), usize>,
    chain: Vec<Constraint>,
    free_vars: Vec<Var>,
}

impl PairContext {
    fn new(n: u32, kind: PairOrderKind) -> Self {
        let order = match kind {
            PairOrderKind::DecreasingSpan => pair_processing_order(n),
            PairOrderKind::Lexicographic => Configuration::pairs(n),
        };
        let index_of = order
            .iter()
            .enumerate()
            .map(|(t, p)| (*p, t))
            .collect();
        PairContext {
            n,
            order,
            index_of,
            chain: chain_constraints(n),
            free_vars: (1..n / 2).collect(),
        }
    }

    /// Full constraint system of a partial assignment, deduplicated, plus
    /// the key set for containment tests.
    fn system_of(&self, ks: &[u8]) -> (Vec<Constraint>, BTreeSet<SysKey>) {
        let mut constraints = self.chain.clone();
        let mut keys: BTreeSet<SysKey> =
            constraints.iter().map(|c| c.canonical_key()).collect();
        for (t, &k) in ks.iter().enumerate() {
            let (i, j) = self.order[t];
            let cs = placement_constraints(self.n, i, j, k as u32)
                .expect("admitted placements are never constant-false");
            for c in cs {
                if keys.insert(c.canonical_key()) {
                    constraints.push(c);
                }
            }
        }
        (constraints, keys)
    }

    fn problem_from(&self, constraints: &[Constraint]) -> LpProblem {
        let mut p = LpProblem::new();
        for &v in &self.free_vars {
            p.add_unit_var(v);
        }
        for c in constraints {
            p.add_constraint(c.clone());
        }
        p
    }

    /// Candidate window for pair `(i, j)` given the already-assigned
    /// prefix: monotonicity of pair sums against assigned neighbors (and
    /// against forced-sum neighbors, whose sum is identically 1) provably
    /// excludes candidates outside the window.
    fn candidate_window(&self, t: usize, ks: &[u8]) -> (u32, u32) {
        let n = self.n;
        let (i, j) = self.order[t];
        let mut lo = i;
        let mut hi = j - 1;
        let consider_lower = |a: i64, b: i64, lo: &mut u32| {
            if a < 0 || b <= a {
                return;
            }
            let (a, b) = (a as u32, b as u32);
            if a + b == n {
                *lo = (*lo).max(n / 2);
            } else if let Some(&idx) = self.index_of.get(&(a, b)) {
                if idx < ks.len() {
                    *lo = (*lo).max(ks[idx] as u32);
                }
            }
        };
        consider_lower(i as i64 - 1, j as i64, &mut lo);
        consider_lower(i as i64, j as i64 - 1, &mut lo);
        let consider_upper = |a: i64, b: i64, hi: &mut u32| {
            if a < 0 || b > n as i64 || b <= a {
                return;
            }
            let (a, b) = (a as u32, b as u32);
            if a + b == n {
                *hi = (*hi).min(n / 2 - 1);
            } else if let Some(&idx) = self.index_of.get(&(a, b)) {
                if idx < ks.len() {
                    *hi = (*hi).min(ks[idx] as u32);
                }
            }
        };
        consider_upper(i as i64 + 1, j as i64, &mut hi);
        consider_upper(i as i64, j as i64 + 1, &mut hi);
        (lo, hi)
    }
}

fn extend_partial(
    ctx: &PairContext,
    partial: &Partial,
    t: usize,
    mirror_symmetry: bool,
) -> Result<Vec<Partial>, EnumError> {
    let n = ctx.n;
    let (i, j) = ctx.order[t];
    let (lo, hi) = ctx.candidate_window(t, &partial.ks);

    let mirror = (n - j, n - i);
    let forced = ctx
        .index_of
        .get(&mirror)
        .filter(|&&idx| idx < partial.ks.len())
        .map(|&idx| n - 1 - partial.ks[idx] as u32);

    let mut out = Vec::new();
    let candidates: Vec<u32> = match forced {
        Some(k) if mirror_symmetry => {
            debug_assert!((lo..=hi).contains(&k), "forced mirror placement in window");
            vec![k]
        }
        _ => (lo..=hi).collect(),
    };

    // the partial system is only materialized when a candidate actually
    // needs an LP solve (or the duplicate check after a resume)
    let mut system: Option<(Vec<Constraint>, BTreeSet<SysKey>)> = None;

    for k in candidates {
        let Ok(new_constraints) = placement_constraints(n, i, j, k) else {
            continue;
        };
        let child = || {
            let mut ks = partial.ks.clone();
            ks.push(k as u8);
            ks
        };

        // a witness that satisfies the new constraints strictly certifies
        // the extension outright; this also covers duplicate constraints
        if let Some(w) = &partial.witness {
            if new_constraints.iter().all(|c| c.satisfied_by(w)) {
                out.push(Partial {
                    ks: child(),
                    witness: partial.witness.clone(),
                });
                continue;
            }
        }

        let (constraints, keys) =
            system.get_or_insert_with(|| ctx.system_of(&partial.ks));

        if new_constraints.iter().all(|c| keys.contains(&c.canonical_key())) {
            // system unchanged: feasibility is inherited
            out.push(Partial {
                ks: child(),
                witness: partial.witness.clone(),
            });
            continue;
        }

        let mut full = constraints.clone();
        full.extend(new_constraints);
        match check_feasible_strict(&ctx.problem_from(&full))? {
            LpOutcome::Feasible { witness, .. } => out.push(Partial {
                ks: child(),
                witness: Some(witness),
            }),
            LpOutcome::Infeasible => {}
            other => {
                return Err(EnumError::Internal(format!(
                    "unexpected LP outcome {other:?} during enumeration"
                )))
            }
        }
    }
    Ok(out)
}

/// Enumerate every feasible configuration for block count `n` exactly
/// once, in canonical order.
pub fn enumerate_configurations(
    n: u32,
    opts: &EnumerateOptions,
) -> Result<EnumerationResult, EnumError> {
    if n % 2 != 0 {
        return Err(EnumError::OddBlockCount(n));
    }
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| EnumError::Internal(e.to_string()))?;
            pool.install(|| enumerate_inner(n, opts))
        }
        None => enumerate_inner(n, opts),
    }
}

/// Continue a checkpointed run; the block count and pair order come from
/// the checkpoint header.
pub fn resume(checkpoint: &Path, opts: &EnumerateOptions) -> Result<EnumerationResult, EnumError> {
    let header = read_checkpoint_header(checkpoint)?;
    let mut opts = opts.clone();
    opts.checkpoint = Some(checkpoint.to_path_buf());
    opts.resume = true;
    opts.pair_order = header.order;
    enumerate_configurations(header.n, &opts)
}

fn enumerate_inner(n: u32, opts: &EnumerateOptions) -> Result<EnumerationResult, EnumError> {
    if n == 0 {
        // the empty configuration: the single coloring with no interior
        // endpoints
        return Ok(EnumerationResult {
            n: 0,
            count: 1,
            configurations: vec![Configuration::new(0, BTreeMap::new())
                .expect("empty configuration is valid")],
        });
    }

    let ctx = PairContext::new(n, opts.pair_order);
    let mut survivors: Vec<Partial>;
    let mut start = 0usize;

    if opts.resume {
        let path = opts
            .checkpoint
            .as_deref()
            .ok_or_else(|| EnumError::RunMismatch("resume requested without a checkpoint".into()))?;
        let ck = read_checkpoint(path)?;
        if ck.n != n {
            return Err(EnumError::RunMismatch(format!(
                "checkpoint is for n={}, requested n={n}",
                ck.n
            )));
        }
        if ck.order != opts.pair_order {
            return Err(EnumError::RunMismatch(
                "checkpoint uses a different pair order".into(),
            ));
        }
        if ck.pairs != ctx.order {
            return Err(EnumError::BadCheckpoint(
                "pair list does not match the processing order".into(),
            ));
        }
        for ks in &ck.survivors {
            if ks.len() != ck.next_pair_index {
                return Err(EnumError::BadCheckpoint(
                    "survivor length disagrees with progress index".into(),
                ));
            }
            for (t, &k) in ks.iter().enumerate() {
                let (i, j) = ctx.order[t];
                if (k as u32) < i || (k as u32) >= j {
                    return Err(EnumError::BadCheckpoint(format!(
                        "kappa({i},{j}) = {k} out of range"
                    )));
                }
            }
        }
        start = ck.next_pair_index;
        survivors = ck
            .survivors
            .into_iter()
            .map(|ks| Partial { ks, witness: None })
            .collect();
    } else {
        let base = match check_feasible_strict(&ctx.problem_from(&ctx.chain))? {
            LpOutcome::Feasible { witness, .. } => witness,
            other => {
                return Err(EnumError::Internal(format!(
                    "base chain system must be feasible, got {other:?}"
                )))
            }
        };
        survivors = vec![Partial {
            ks: Vec::new(),
            witness: Some(base),
        }];
    }

    for t in start..ctx.order.len() {
        if let Some(limit) = opts.halt_after_pairs {
            if t >= limit {
                if let Some(path) = &opts.checkpoint {
                    write_checkpoint(path, &ctx, t, &survivors)?;
                }
                return Err(EnumError::Halted { completed_pairs: t });
            }
        }
        let next: Result<Vec<Vec<Partial>>, EnumError> = survivors
            .par_iter()
            .map(|p| extend_partial(&ctx, p, t, opts.mirror_symmetry))
            .collect();
        survivors = next?.into_iter().flatten().collect();
        // deterministic generation order regardless of worker scheduling
        survivors.sort_by(|a, b| a.ks.cmp(&b.ks));
        if let Some(path) = &opts.checkpoint {
            write_checkpoint(path, &ctx, t + 1, &survivors)?;
        }
    }

    // emit: rebuild full configurations, re-certify each against its full
    // deduplicated system (exact witness substitution, or an LP solve when
    // no witness is at hand), sort canonically
    let emitted: Result<Vec<(String, Configuration)>, EnumError> = survivors
        .par_iter()
        .map(|p| {
            let kappa: BTreeMap<(u32, u32), u32> = ctx
                .order
                .iter()
                .zip(&p.ks)
                .map(|(&(i, j), &k)| ((i, j), k as u32))
                .collect();
            let cfg = Configuration::new(n, kappa)
                .map_err(|e| EnumError::Internal(format!("emitted configuration invalid: {e}")))?;
            let (constraints, _) = ctx.system_of(&p.ks);
            let witness_certifies = p
                .witness
                .as_ref()
                .is_some_and(|w| constraints.iter().all(|c| c.satisfied_by(w)));
            if !witness_certifies {
                match check_feasible_strict(&ctx.problem_from(&constraints))? {
                    LpOutcome::Feasible { .. } => {}
                    other => {
                        return Err(EnumError::Internal(format!(
                            "emission re-certification failed: {other:?}"
                        )))
                    }
                }
            }
            Ok((cfg.to_line(), cfg))
        })
        .collect();
    let mut emitted = emitted?;
    emitted.sort_by(|a, b| a.0.cmp(&b.0));
    for w in emitted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(EnumError::Internal(format!(
                "duplicate configuration emitted: {}",
                w[0].0
            )));
        }
    }

    Ok(EnumerationResult {
        n,
        count: emitted.len() as u64,
        configurations: emitted.into_iter().map(|(_, c)| c).collect(),
    })
}

// --- checkpoint files ---------------------------------------------------------

const CHECKPOINT_VERSION: u32 = 1;

struct CheckpointHeader {
    n: u32,
    order: PairOrderKind,
    next_pair_index: usize,
    survivor_count: usize,
    checksum: u64,
}

struct Checkpoint {
    n: u32,
    order: PairOrderKind,
    next_pair_index: usize,
    pairs: Vec<(u32, u32)>,
    survivors: Vec<Vec<u8>>,
}

fn fnv1a(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Survivor lines reuse the configuration serialization restricted to the
/// assigned pairs (lexicographic pair order).
fn survivors_blob(order: &[(u32, u32)], survivors: &[Partial]) -> (String, u64) {
    let mut blob = String::new();
    for p in survivors {
        let mut entries: Vec<((u32, u32), u8)> = order
            .iter()
            .zip(&p.ks)
            .map(|(&pair, &k)| (pair, k))
            .collect();
        entries.sort_by_key(|(pair, _)| *pair);
        let line: Vec<String> = entries
            .iter()
            .map(|((i, j), k)| format!("{i},{j}:{k}"))
            .collect();
        let _ = writeln!(blob, "{}", line.join(";"));
    }
    let sum = fnv1a(blob.as_bytes());
    (blob, sum)
}

/// Atomic write: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn write_checkpoint(
    path: &Path,
    ctx: &PairContext,
    next_pair_index: usize,
    survivors: &[Partial],
) -> Result<(), EnumError> {
    let (blob, sum) = survivors_blob(&ctx.order, survivors);
    let order_tag = if ctx.order == pair_processing_order(ctx.n) {
        PairOrderKind::DecreasingSpan.tag()
    } else {
        PairOrderKind::Lexicographic.tag()
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "apcolor-enum version={CHECKPOINT_VERSION} n={} order={order_tag} next={next_pair_index} survivors={} checksum={sum:016x}",
        ctx.n,
        survivors.len(),
    );
    let pairs: Vec<String> = ctx.order.iter().map(|(i, j)| format!("{i},{j}")).collect();
    let _ = writeln!(out, "pairs:{}", pairs.join(";"));
    out.push_str(&blob);
    write_atomic(path, &out)?;
    Ok(())
}

fn parse_checkpoint_header(line: &str) -> Result<CheckpointHeader, EnumError> {
    let bad = |m: &str| EnumError::BadCheckpoint(m.to_string());
    let mut fields = line.split_whitespace();
    if fields.next() != Some("apcolor-enum") {
        return Err(bad("missing magic"));
    }
    let mut n = None;
    let mut order = None;
    let mut next = None;
    let mut survivors = None;
    let mut checksum = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad("malformed header field"))?;
        match key {
            "version" => {
                if value != CHECKPOINT_VERSION.to_string() {
                    return Err(EnumError::VersionMismatch(value.to_string()));
                }
            }
            "n" => n = Some(value.parse().map_err(|_| bad("bad n"))?),
            "order" => {
                order = Some(match value {
                    "span" => PairOrderKind::DecreasingSpan,
                    "lex" => PairOrderKind::Lexicographic,
                    _ => return Err(bad("bad order")),
                })
            }
            "next" => next = Some(value.parse().map_err(|_| bad("bad next"))?),
            "survivors" => survivors = Some(value.parse().map_err(|_| bad("bad survivors"))?),
            "checksum" => {
                checksum = Some(u64::from_str_radix(value, 16).map_err(|_| bad("bad checksum"))?)
            }
            _ => return Err(bad("unknown header field")),
        }
    }
    Ok(CheckpointHeader {
        n: n.ok_or_else(|| bad("missing n"))?,
        order: order.ok_or_else(|| bad("missing order"))?,
        next_pair_index: next.ok_or_else(|| bad("missing next"))?,
        survivor_count: survivors.ok_or_else(|| bad("missing survivors"))?,
        checksum: checksum.ok_or_else(|| bad("missing checksum"))?,
    })
}

fn read_checkpoint_header(path: &Path) -> Result<CheckpointHeader, EnumError> {
    let text = fs::read_to_string(path)?;
    let first = text
        .lines()
        .next()
        .ok_or_else(|| EnumError::BadCheckpoint("empty file".into()))?;
    parse_checkpoint_header(first)
}

fn read_checkpoint(path: &Path) -> Result<Checkpoint, EnumError> {
    let bad = |m: &str| EnumError::BadCheckpoint(m.to_string());
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = parse_checkpoint_header(
        lines.next().ok_or_else(|| bad("empty file"))?,
    )?;
    let pair_line = lines.next().ok_or_else(|| bad("missing pair list"))?;
    let pair_body = pair_line
        .strip_prefix("pairs:")
        .ok_or_else(|| bad("missing pair list"))?;
    let mut pairs = Vec::new();
    if !pair_body.is_empty() {
        for entry in pair_body.split(';') {
            let (i, j) = entry.split_once(',').ok_or_else(|| bad("bad pair entry"))?;
            pairs.push((
                i.parse().map_err(|_| bad("bad pair entry"))?,
                j.parse().map_err(|_| bad("bad pair entry"))?,
            ));
        }
    }
    let rest: Vec<&str> = lines.collect();
    let blob = if rest.is_empty() {
        String::new()
    } else {
        let mut b = rest.join("\n");
        b.push('\n');
        b
    };
    if fnv1a(blob.as_bytes()) != header.checksum {
        return Err(bad("checksum mismatch (file tampered or truncated)"));
    }
    if rest.len() != header.survivor_count {
        return Err(bad("survivor count mismatch"));
    }
    // assigned pairs must be exactly the processed prefix of the order
    let mut expected: Vec<(u32, u32)> = pairs
        .get(..header.next_pair_index)
        .ok_or_else(|| bad("progress index exceeds pair list"))?
        .to_vec();
    expected.sort_unstable();
    let position_of: std::collections::BTreeMap<(u32, u32), usize> = pairs
        .iter()
        .take(header.next_pair_index)
        .enumerate()
        .map(|(t, p)| (*p, t))
        .collect();

    let mut survivors = Vec::with_capacity(rest.len());
    for line in rest {
        let mut seen: Vec<(u32, u32)> = Vec::new();
        let mut ks = vec![0u8; header.next_pair_index];
        if !line.is_empty() {
            for entry in line.split(';') {
                let (pair, k) = entry.split_once(':').ok_or_else(|| bad("bad survivor entry"))?;
                let (i, j) = pair.split_once(',').ok_or_else(|| bad("bad survivor entry"))?;
                let i: u32 = i.parse().map_err(|_| bad("bad survivor entry"))?;
                let j: u32 = j.parse().map_err(|_| bad("bad survivor entry"))?;
                let k: u8 = k.parse().map_err(|_| bad("bad survivor entry"))?;
                if (k as u32) < i || (k as u32) >= j {
                    return Err(bad("survivor placement out of range"));
                }
                let &t = position_of
                    .get(&(i, j))
                    .ok_or_else(|| bad("survivor assigns an unprocessed pair"))?;
                ks[t] = k;
                seen.push((i, j));
            }
        }
        if seen != expected {
            return Err(bad("survivor pair set disagrees with progress index"));
        }
        survivors.push(ks);
    }
    Ok(Checkpoint {
        n: header.n,
        order: header.order,
        next_pair_index: header.next_pair_index,
        pairs,
        survivors,
    })
}

// --- cache files ----------------------------------------------------------------

pub const CACHE_VERSION: u32 = 1;

/// Conventional cache file name for block count `n`.
pub fn cache_file_name(n: u32) -> String {
    format!("configs_n{n}.txt")
}

/// Write a configuration cache: header line plus one serialized
/// configuration per line, in canonical order. Atomic.
pub fn write_cache(path: &Path, result: &EnumerationResult) -> Result<(), EnumError> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={} count={} version={CACHE_VERSION}",
        result.n, result.count
    );
    for cfg in &result.configurations {
        let _ = writeln!(out, "{}", cfg.to_line());
    }
    write_atomic(path, &out)?;
    Ok(())
}

/// Read and fully validate a configuration cache.
pub fn read_cache(path: &Path) -> Result<EnumerationResult, EnumError> {
    let bad = |m: String| EnumError::BadCache(m);
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty cache".into()))?;
    let mut n = None;
    let mut count = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad("malformed cache header".into()))?;
        match key {
            "n" => n = Some(value.parse::<u32>().map_err(|_| bad("bad n".into()))?),
            "count" => count = Some(value.parse::<u64>().map_err(|_| bad("bad count".into()))?),
            "version" => {
                if value != CACHE_VERSION.to_string() {
                    return Err(EnumError::VersionMismatch(value.to_string()));
                }
            }
            _ => return Err(bad("unknown cache header field".into())),
        }
    }
    let n = n.ok_or_else(|| bad("missing n".into()))?;
    let count = count.ok_or_else(|| bad("missing count".into()))?;
    let mut configurations = Vec::new();
    let mut prev: Option<String> = None;
    for line in lines {
        let cfg = Configuration::from_line(n, line)
            .map_err(|e| bad(format!("invalid configuration line: {e}")))?;
        let serialized = cfg.to_line();
        if serialized != line.trim() {
            return Err(bad("non-canonical configuration line".into()));
        }
        if let Some(p) = &prev {
            if *p >= serialized {
                return Err(bad("cache lines not in canonical sorted order".into()));
            }
        }
        prev = Some(serialized);
        configurations.push(cfg);
    }
    if configurations.len() as u64 != count {
        return Err(bad(format!(
            "header count {count} disagrees with {} lines",
            configurations.len()
        )));
    }
    Ok(EnumerationResult {
        n,
        count,
        configurations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_order_examples() {
        // n=4: spans 3, 3, 2, 2, 1, 1, 1, 1 with (0,4) excluded
        let order = pair_processing_order(4);
        assert_eq!(order[0], (0, 3));
        assert_eq!(order[1], (1, 4));
        assert_eq!(
            order,
            vec![
                (0, 3),
                (1, 4),
                (0, 2),
                (2, 4),
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4)
            ]
        );
        // n=2: both span-1 pairs, each with a forced placement
        assert_eq!(pair_processing_order(2), vec![(0, 1), (1, 2)]);
        // n=6: 21 pairs minus 3 with i + j = 6
        assert_eq!(pair_processing_order(6).len(), 18);
    }

    #[test]
    fn tiny_counts() {
        let opts = EnumerateOptions::default();
        assert_eq!(enumerate_configurations(0, &opts).unwrap().count, 1);
        assert_eq!(enumerate_configurations(2, &opts).unwrap().count, 1);
        assert_eq!(enumerate_configurations(4, &opts).unwrap().count, 3);
        assert!(matches!(
            enumerate_configurations(3, &opts),
            Err(EnumError::OddBlockCount(3))
        ));
    }

    #[test]
    fn count_n6() {
        let opts = EnumerateOptions::default();
        assert_eq!(enumerate_configurations(6, &opts).unwrap().count, 23);
    }

    #[test]
    fn mirror_pruning_and_order_insensitivity() {
        let mut plain = EnumerateOptions::default();
        plain.workers = Some(2);
        let a = enumerate_configurations(6, &plain).unwrap();

        let mut mirrored = EnumerateOptions::default();
        mirrored.mirror_symmetry = true;
        let b = enumerate_configurations(6, &mirrored).unwrap();

        let mut lex = EnumerateOptions::default();
        lex.pair_order = PairOrderKind::Lexicographic;
        let c = enumerate_configurations(6, &lex).unwrap();

        let lines = |r: &EnumerationResult| -> Vec<String> {
            r.configurations.iter().map(|c| c.to_line()).collect()
        };
        assert_eq!(lines(&a), lines(&b));
        assert_eq!(lines(&a), lines(&c));
        assert_eq!(a.count, 23);
    }

    #[test]
    fn checkpoint_resume_bit_identical() {
        let dir = std::env::temp_dir().join(format!("apcolor-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let ck = dir.join("enum_n6.ckpt");

        let mut full = EnumerateOptions::default();
        let reference = enumerate_configurations(6, &full).unwrap();

        full.checkpoint = Some(ck.clone());
        full.halt_after_pairs = Some(7);
        match enumerate_configurations(6, &full) {
            Err(EnumError::Halted { completed_pairs }) => assert_eq!(completed_pairs, 7),
            other => panic!("expected halt, got {other:?}"),
        }

        let resumed = resume(&ck, &EnumerateOptions::default()).unwrap();
        assert_eq!(resumed.count, reference.count);
        let lines = |r: &EnumerationResult| -> Vec<String> {
            r.configurations.iter().map(|c| c.to_line()).collect()
        };
        assert_eq!(lines(&resumed), lines(&reference));

        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn tampered_checkpoint_detected() {
        let dir = std::env::temp_dir().join(format!("apcolor-tamper-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let ck = dir.join("enum_n4.ckpt");

        let mut opts = EnumerateOptions::default();
        opts.checkpoint = Some(ck.clone());
        opts.halt_after_pairs = Some(2);
        assert!(matches!(
            enumerate_configurations(4, &opts),
            Err(EnumError::Halted { .. })
        ));

        let text = fs::read_to_string(&ck).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // flip a digit inside the survivor block
        let mut tampered: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        let last = tampered.last_mut().unwrap();
        *last = if last.starts_with('0') {
            format!("1{}", &last[1..])
        } else {
            format!("0{}", &last[1..])
        };
        fs::write(&ck, tampered.join("\n") + "\n").unwrap();

        match resume(&ck, &EnumerateOptions::default()) {
            Err(EnumError::BadCheckpoint(msg)) => {
                assert!(msg.contains("checksum") || msg.contains("range"), "{msg}")
            }
            other => panic!("expected corruption error, got {other:?}"),
        }

        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("apcolor-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(cache_file_name(4));

        let result = enumerate_configurations(4, &EnumerateOptions::default()).unwrap();
        write_cache(&path, &result).unwrap();
        let back = read_cache(&path).unwrap();
        assert_eq!(back.n, 4);
        assert_eq!(back.count, 3);
        let lines = |r: &EnumerationResult| -> Vec<String> {
            r.configurations.iter().map(|c| c.to_line()).collect()
        };
        assert_eq!(lines(&back), lines(&result));

        // corrupting the body must be detected
        let mut text = fs::read_to_string(&path).unwrap();
        text = text.replace("count=3", "count=2");
        fs::write(&path, text).unwrap();
        assert!(matches!(read_cache(&path), Err(EnumError::BadCache(_))));

        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn emitted_configurations_contain_derived_chambers() {
        use crate::diagram::{derive_configuration, Endpoints};
        use crate::rat;
        let result = enumerate_configurations(4, &EnumerateOptions::default()).unwrap();
        let lines: BTreeSet<String> = result
            .configurations
            .iter()
            .map(|c| c.to_line())
            .collect();
        // the three chambers at n=4 are x1 in (0,1/4), (1/4,1/3), (1/3,1/2)
        for x1 in [rat!(1, 8), rat!(7, 24), rat!(2, 5)] {
            let e = Endpoints::from_free(4, &[(1u32, x1)].into_iter().collect()).unwrap();
            let cfg = derive_configuration(&e).unwrap();
            assert!(lines.contains(&cfg.to_line()));
        }
        assert_eq!(lines.len(), 3);
    }
}
