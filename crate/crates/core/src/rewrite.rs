//! Rewriting of cell sets by subdivision rules.
//!
//! A move replaces a cell `x` of a set `X` by the maximal cells of a
//! subdivision of `x`. Families of rules are terminating by construction in
//! this crate, so normal forms are computed by exhausting moves.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complexes::{Cell, CellComplex};

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const DEFAULT_JOIN_DEPTH: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("fuel exhausted after {moves} moves with {pending} cells pending")]
    FuelExhausted { moves: u64, pending: usize },
    #[error("rule {rule} failed on {cell}: {reason}")]
    RuleFailed { rule: String, cell: String, reason: String },
    #[error("framework violation: {0}")]
    Framework(String),
}

/// A single subdivision rule: a partial map from cells to subdivisions.
pub trait SubdivisionRule<C>: Send + Sync {
    fn name(&self) -> String;
    fn applies_to(&self, cell: &C) -> bool;
    /// Maximal cells of the subdivision of `cell`.
    fn apply(&self, cell: &C) -> Result<Vec<C>, RewriteError>;
}

/// A family of rules indexed by a parameter that depends on the cell, such
/// as the simplex entry a rule acts on.
pub trait RuleSchema<C>: Send + Sync {
    fn name(&self) -> String;
    /// Parameters at which the schema applies to `cell`, in priority order.
    fn params(&self, cell: &C) -> Vec<usize>;
    fn apply(&self, cell: &C, param: usize) -> Result<Vec<C>, RewriteError>;
}

/// Adapts a single rule to a schema with the one parameter `0`.
pub struct Single<R>(pub R);

impl<C, R: SubdivisionRule<C>> RuleSchema<C> for Single<R> {
    fn name(&self) -> String {
        self.0.name()
    }
    fn params(&self, cell: &C) -> Vec<usize> {
        if self.0.applies_to(cell) {
            vec![0]
        } else {
            Vec::new()
        }
    }
    fn apply(&self, cell: &C, _: usize) -> Result<Vec<C>, RewriteError> {
        self.0.apply(cell)
    }
}

/// A schema restricted to the cells satisfying a predicate.
pub struct Restricted<S, P> {
    pub schema: S,
    pub domain: P,
    pub label: &'static str,
}

impl<C, S: RuleSchema<C>, P: Fn(&C) -> bool + Send + Sync> RuleSchema<C> for Restricted<S, P> {
    fn name(&self) -> String {
        format!("{}{}", self.schema.name(), self.label)
    }
    fn params(&self, cell: &C) -> Vec<usize> {
        if (self.domain)(cell) {
            self.schema.params(cell)
        } else {
            Vec::new()
        }
    }
    fn apply(&self, cell: &C, param: usize) -> Result<Vec<C>, RewriteError> {
        self.schema.apply(cell, param)
    }
}

/// Identifies a rule instance within a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleInstance {
    pub schema: usize,
    pub param: usize,
}

/// An ordered collection of rule schemas.
pub struct RuleFamily<C> {
    schemas: Vec<Box<dyn RuleSchema<C>>>,
}

impl<C: Cell> RuleFamily<C> {
    pub fn new() -> Self {
        RuleFamily { schemas: Vec::new() }
    }

    pub fn with(mut self, schema: impl RuleSchema<C> + 'static) -> Self {
        self.schemas.push(Box::new(schema));
        self
    }

    pub fn with_rule(self, rule: impl SubdivisionRule<C> + 'static) -> Self {
        self.with(Single(rule))
    }

    pub fn name(&self, inst: RuleInstance) -> String {
        format!("{}[{}]", self.schemas[inst.schema].name(), inst.param)
    }

    /// Applicable rule instances at `cell`, lowest index first.
    pub fn instances(&self, cell: &C) -> Vec<RuleInstance> {
        self.schemas
            .iter()
            .enumerate()
            .flat_map(|(schema, s)| s.params(cell).into_iter().map(move |param| RuleInstance { schema, param }))
            .collect()
    }

    pub fn apply(&self, cell: &C, inst: RuleInstance) -> Result<Vec<C>, RewriteError> {
        self.schemas[inst.schema].apply(cell, inst.param)
    }

    /// Non-trivial moves at `cell`: instances whose subdivision is not `{cell}`.
    pub fn moves(&self, cell: &C) -> Result<Vec<(RuleInstance, Vec<C>)>, RewriteError> {
        let mut out = Vec::new();
        for inst in self.instances(cell) {
            let res = self.apply(cell, inst)?;
            if !is_trivial(cell, &res) {
                out.push((inst, res));
            }
        }
        Ok(out)
    }

    /// First non-trivial move in priority order.
    pub fn first_move(&self, cell: &C) -> Result<Option<(RuleInstance, Vec<C>)>, RewriteError> {
        for inst in self.instances(cell) {
            let res = self.apply(cell, inst)?;
            if !is_trivial(cell, &res) {
                return Ok(Some((inst, res)));
            }
        }
        Ok(None)
    }

    /// A cell is terminal if every applicable rule subdivides it trivially.
    pub fn is_terminal(&self, cell: &C) -> Result<bool, RewriteError> {
        Ok(self.first_move(cell)?.is_none())
    }
}

impl<C: Cell> Default for RuleFamily<C> {
    fn default() -> Self {
        Self::new()
    }
}

fn is_trivial<C: PartialEq>(cell: &C, result: &[C]) -> bool {
    result.len() == 1 && &result[0] == cell
}

/// Replaces `x` in `set` by the cells of `result`.
pub fn apply_move<C: Cell>(set: &BTreeSet<C>, x: &C, result: &[C]) -> BTreeSet<C> {
    let mut out = set.clone();
    out.remove(x);
    out.extend(result.iter().cloned());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Lowest-index rule on the smallest non-terminal cell.
    Deterministic,
    /// Uniformly random cell and move, from a seeded generator.
    Random(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    pub strategy: Strategy,
    pub fuel: u64,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { strategy: Strategy::Deterministic, fuel: DEFAULT_FUEL }
    }
}

/// Terminal set reached from `cells`, with the number of moves made.
pub fn normalize_set<C: Cell, I: IntoIterator<Item = C>>(
    cells: I,
    family: &RuleFamily<C>,
    opts: NormalizeOptions,
) -> Result<(BTreeSet<C>, u64), RewriteError> {
    match opts.strategy {
        Strategy::Deterministic => normalize_deterministic(cells, family, opts.fuel),
        Strategy::Random(seed) => normalize_random(cells, family, opts.fuel, seed),
    }
}

/// Normal form of `{x}`.
pub fn normalize<C: Cell>(x: &C, family: &RuleFamily<C>, opts: NormalizeOptions) -> Result<BTreeSet<C>, RewriteError> {
    Ok(normalize_set([x.clone()], family, opts)?.0)
}

fn normalize_deterministic<C: Cell, I: IntoIterator<Item = C>>(
    cells: I,
    family: &RuleFamily<C>,
    fuel: u64,
) -> Result<(BTreeSet<C>, u64), RewriteError> {
    let mut pending: BTreeSet<C> = cells.into_iter().collect();
    let mut done: BTreeSet<C> = BTreeSet::new();
    let mut moves = 0u64;
    while let Some(x) = pending.pop_first() {
        match family.first_move(&x)? {
            None => {
                done.insert(x);
            }
            Some((_, res)) => {
                if moves >= fuel {
                    return Err(RewriteError::FuelExhausted { moves, pending: pending.len() + 1 });
                }
                moves += 1;
                for c in res {
                    if !done.contains(&c) {
                        pending.insert(c);
                    }
                }
            }
        }
    }
    Ok((done, moves))
}

fn normalize_random<C: Cell, I: IntoIterator<Item = C>>(
    cells: I,
    family: &RuleFamily<C>,
    fuel: u64,
    seed: u64,
) -> Result<(BTreeSet<C>, u64), RewriteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending: Vec<C> = Vec::new();
    let mut in_pending: HashSet<C> = HashSet::new();
    for c in cells {
        if in_pending.insert(c.clone()) {
            pending.push(c);
        }
    }
    let mut done: BTreeSet<C> = BTreeSet::new();
    let mut moves = 0u64;
    while !pending.is_empty() {
        let i = rng.gen_range(0..pending.len());
        let x = pending.swap_remove(i);
        in_pending.remove(&x);
        let mut options = family.moves(&x)?;
        if options.is_empty() {
            done.insert(x);
            continue;
        }
        if moves >= fuel {
            return Err(RewriteError::FuelExhausted { moves, pending: pending.len() + 1 });
        }
        moves += 1;
        let k = rng.gen_range(0..options.len());
        let (_, res) = options.swap_remove(k);
        for c in res {
            if !done.contains(&c) && in_pending.insert(c.clone()) {
                pending.push(c);
            }
        }
    }
    Ok((done, moves))
}

/// The canonical subdivision of `x`: the complex generated by its normal form.
pub fn canonical_subdivision<C: Cell>(x: &C, family: &RuleFamily<C>, opts: NormalizeOptions) -> Result<CellComplex<C>, RewriteError> {
    Ok(CellComplex::closure_unchecked(normalize(x, family, opts)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinOutcome {
    Joinable,
    NotJoinable,
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct HarnessOptions {
    /// Maximal number of moves explored from each side in the search.
    pub depth: usize,
    /// Cap on the number of sets explored per side.
    pub max_states: usize,
    /// Fuel for the normal-form shortcut.
    pub fuel: u64,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { depth: DEFAULT_JOIN_DEPTH, max_states: 2_000, fuel: 100_000 }
    }
}

/// Whether two cell sets rewrite to a common set.
///
/// Tries the deterministic normal forms first: if they agree, that set is a
/// join. Otherwise explores moves breadth-first from both sides up to the
/// depth and state caps.
pub fn joinable<C: Cell>(a: &BTreeSet<C>, b: &BTreeSet<C>, family: &RuleFamily<C>, opts: HarnessOptions) -> JoinOutcome {
    if a == b {
        return JoinOutcome::Joinable;
    }
    let nf = NormalizeOptions { strategy: Strategy::Deterministic, fuel: opts.fuel };
    if let (Ok((na, _)), Ok((nb, _))) = (normalize_set(a.iter().cloned(), family, nf), normalize_set(b.iter().cloned(), family, nf)) {
        if na == nb {
            return JoinOutcome::Joinable;
        }
    }
    let (ra, complete_a) = reachable(a, family, opts);
    let (rb, complete_b) = reachable(b, family, opts);
    if ra.iter().any(|s| rb.contains(s)) {
        JoinOutcome::Joinable
    } else if complete_a && complete_b {
        JoinOutcome::NotJoinable
    } else {
        JoinOutcome::Inconclusive
    }
}

/// Sets reachable within the depth; the flag tells whether the search was
/// exhaustive.
fn reachable<C: Cell>(start: &BTreeSet<C>, family: &RuleFamily<C>, opts: HarnessOptions) -> (HashSet<BTreeSet<C>>, bool) {
    let mut seen: HashSet<BTreeSet<C>> = HashSet::new();
    let mut queue: VecDeque<(BTreeSet<C>, usize)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start.clone(), 0));
    let mut complete = true;
    while let Some((set, depth)) = queue.pop_front() {
        for x in &set {
            let Ok(moves) = family.moves(x) else {
                complete = false;
                continue;
            };
            if moves.is_empty() {
                continue;
            }
            if depth >= opts.depth || seen.len() >= opts.max_states {
                complete = false;
                continue;
            }
            for (_, res) in moves {
                let next = apply_move(&set, x, &res);
                if seen.insert(next.clone()) {
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    (seen, complete)
}

#[derive(Clone, Debug, Default)]
pub struct HarnessReport {
    pub checked: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub failures: Vec<String>,
}

impl HarnessReport {
    fn record(&mut self, outcome: JoinOutcome, what: impl FnOnce() -> String) {
        self.checked += 1;
        match outcome {
            JoinOutcome::Joinable => self.passed += 1,
            JoinOutcome::Inconclusive => self.inconclusive += 1,
            JoinOutcome::NotJoinable => self.failures.push(what()),
        }
    }

    /// Whether fewer than `percent` percent of the checks were inconclusive.
    pub fn inconclusive_below(&self, percent: usize) -> bool {
        self.inconclusive * 100 < percent * self.checked.max(1)
    }

    pub fn merge(&mut self, other: HarnessReport) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.inconclusive += other.inconclusive;
        self.failures.extend(other.failures);
    }
}

/// For each sample and each pair of distinct moves at it, checks that the
/// two results are joinable.
pub fn check_local_confluence<C: Cell>(family: &RuleFamily<C>, samples: &[C], opts: HarnessOptions) -> HarnessReport {
    let mut report = HarnessReport::default();
    for x in samples {
        let moves = match family.moves(x) {
            Ok(m) => m,
            Err(e) => {
                report.checked += 1;
                report.failures.push(format!("{x:?}: {e}"));
                continue;
            }
        };
        let start: BTreeSet<C> = [x.clone()].into();
        for i in 0..moves.len() {
            for j in i + 1..moves.len() {
                let a = apply_move(&start, x, &moves[i].1);
                let b = apply_move(&start, x, &moves[j].1);
                let out = joinable(&a, &b, family, opts);
                report.record(out, || format!("{x:?}: {} vs {}", family.name(moves[i].0), family.name(moves[j].0)));
            }
        }
    }
    report
}

/// For each sample `x`, move `σ` and proper face `y`, checks that the
/// restriction of `σ(x)` to `y` is joinable with `{y}`; also checks that
/// faces of terminal cells are terminal.
pub fn check_facial_compatibility<C: Cell>(family: &RuleFamily<C>, samples: &[C], opts: HarnessOptions) -> HarnessReport {
    let mut report = HarnessReport::default();
    for x in samples {
        let moves = match family.moves(x) {
            Ok(m) => m,
            Err(e) => {
                report.checked += 1;
                report.failures.push(format!("{x:?}: {e}"));
                continue;
            }
        };
        let faces: Vec<C> = x.faces().into_iter().filter(|f| f != x).collect();
        if moves.is_empty() {
            for y in &faces {
                let ok = matches!(family.is_terminal(y), Ok(true));
                report.record(if ok { JoinOutcome::Joinable } else { JoinOutcome::NotJoinable }, || {
                    format!("terminal {x:?} has non-terminal face {y:?}")
                });
            }
            continue;
        }
        for (inst, res) in &moves {
            let cx = CellComplex::closure_unchecked(res.iter().cloned());
            for y in &faces {
                let restricted: BTreeSet<C> = cx.restriction(y).maximal().into_iter().collect();
                let single: BTreeSet<C> = [y.clone()].into();
                let out = joinable(&restricted, &single, family, opts);
                report.record(out, || format!("{x:?} under {} restricted to {y:?}", family.name(*inst)));
            }
        }
    }
    report
}

/// Picks `k` distinct indices below `n` with a seeded generator.
pub fn sample_indices(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k.min(n));
    idx
}
