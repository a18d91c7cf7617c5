//! Rounds of dilation on pairs, and the triangulations of `(r c^N + s (d!)^N) P`
//! read off the final pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::boxpoints::BoxOracle;
use crate::cayley::{gamma_family, CayleyElt, CayleyError};
use crate::classic::pulling_triangulation;
use crate::geometry::{OrderedSimplex, Polytope};
use crate::kmw::{count_lattices, factorial, LatticeMultiset, DEFAULT_DIM_CAP};
use crate::lattice::{IntLattice, LatticeClass};
use crate::rewrite::{normalize, NormalizeOptions, RewriteError};

use super::rules::delta_family;
use super::{DElt, MixedError};

/// The least integer at least `d! + d` that is coprime to `d!`.
pub fn default_c(d: usize) -> u64 {
    let f = factorial(d);
    (f + d as u64..).find(|c| c.gcd(&f) == 1).expect("coprime integers exist")
}

/// `(a - 1)(b - 1)`: every integer from there on is a nonnegative combination
/// of the coprime `a` and `b`.
pub fn semigroup_threshold(a: &BigInt, b: &BigInt) -> Result<BigInt, MixedError> {
    if !a.gcd(b).is_one() {
        return Err(MixedError::NotCoprime(a.to_string(), b.to_string()));
    }
    if a.is_one() || b.is_one() {
        return Ok(BigInt::zero());
    }
    Ok((a - 1) * (b - 1))
}

/// Unit pairs `((0), (T), (1)) × ((0), (T), (1)) × 0` over a triangulation.
pub fn seed(cells: &[OrderedSimplex]) -> Vec<DElt> {
    cells.iter().cloned().map(DElt::unit_pair).collect()
}

fn require_terminal(e: &DElt) -> Result<(), MixedError> {
    if e.is_terminal_shape() {
        Ok(())
    } else {
        Err(MixedError::NotTerminal(format!("{e:?}")))
    }
}

fn scale_row(row: &[u64], k: u64) -> Result<Vec<u64>, MixedError> {
    row.iter().map(|x| x.checked_mul(k).ok_or(MixedError::Cayley(CayleyError::Overflow))).collect()
}

/// `(c p, S, c a) × (d! q, S, d! b) × |S|` for each terminal pair.
pub fn theta(cells: &[DElt], c: u64) -> Result<Vec<DElt>, MixedError> {
    let mut out = Vec::with_capacity(cells.len());
    for e in cells {
        require_terminal(e)?;
        let d = e.ambient_dim();
        let top = factorial(d);
        if c < top + d as u64 {
            return Err(MixedError::CTooSmall { c, min: top + d as u64 });
        }
        let p = vec![e.p[0].scale_u64(c)];
        let q = vec![e.q[0].scale_u64(top)];
        let a = vec![scale_row(&e.a[0], c)?];
        let b = vec![scale_row(&e.b[0], top)?];
        out.push(DElt::reduce_raw(p, q, e.s.clone(), a, b, e.n()));
    }
    Ok(out)
}

/// `(r p + s q, S, r a + s b)` for each terminal pair.
pub fn omega(cells: &[DElt], r: u64, s: u64) -> Result<Vec<CayleyElt>, MixedError> {
    if r == 0 && s == 0 {
        return Err(MixedError::ZeroPair);
    }
    let mut out = Vec::with_capacity(cells.len());
    for e in cells {
        require_terminal(e)?;
        let p = &e.p[0].scale_u64(r) + &e.q[0].scale_u64(s);
        let ra = scale_row(&e.a[0], r)?;
        let sb = scale_row(&e.b[0], s)?;
        let row = ra.iter().zip(&sb).map(|(x, y)| x.checked_add(*y).ok_or(MixedError::Cayley(CayleyError::Overflow))).collect::<Result<Vec<u64>, _>>()?;
        out.push(CayleyElt::reduce_raw(vec![p], e.s.clone(), vec![row]));
    }
    Ok(out)
}

/// Classes in the order a round tries them: lattices of index above one by
/// decreasing index, equal indices ordered by their smallest cell, and the
/// nonzero classes of each lattice in residue order.
pub fn class_candidates(cells: &[DElt]) -> Result<Vec<LatticeClass>, MixedError> {
    let indexed: Vec<(BigInt, &DElt, IntLattice)> = cells
        .par_iter()
        .map(|e| {
            let l = e.lattice();
            (l.index(), e, l)
        })
        .collect();
    let mut first: BTreeMap<IntLattice, (BigInt, &DElt)> = BTreeMap::new();
    for (index, e, l) in indexed {
        if index.is_one() {
            continue;
        }
        let slot = first.entry(l).or_insert((index, e));
        if e < slot.1 {
            slot.1 = e;
        }
    }
    let mut lattices: Vec<(BigInt, &DElt, IntLattice)> = first.into_iter().map(|(l, (index, e))| (index, e, l)).collect();
    lattices.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
    let mut out = Vec::new();
    for (_, _, l) in lattices {
        out.extend(LatticeClass::nonzero_classes(&l)?);
    }
    Ok(out)
}

/// The first candidate class: the first nonzero class of a lattice of the
/// largest index, choosing among equal indices the lattice of the smallest
/// cell.
pub fn choose_class(cells: &[DElt]) -> Result<Option<LatticeClass>, MixedError> {
    Ok(class_candidates(cells)?.into_iter().next())
}

pub const DEFAULT_MAX_CELLS: usize = 4_000_000;

#[derive(Clone, Copy, Debug)]
pub struct MixedOptions {
    pub normalize: NormalizeOptions,
    /// Dilation factor of the first component; defaults to [`default_c`].
    pub c: Option<u64>,
    pub dim_cap: usize,
    /// Rounds to run even after every lattice is `Z^d`; at least one round
    /// is always made.
    pub min_rounds: usize,
    /// Largest number of pairs a round may produce.
    pub max_cells: usize,
}

impl Default for MixedOptions {
    fn default() -> Self {
        MixedOptions { normalize: NormalizeOptions::default(), c: None, dim_cap: DEFAULT_DIM_CAP, min_rounds: 1, max_cells: DEFAULT_MAX_CELLS }
    }
}

#[derive(Clone, Debug)]
pub struct MixedRound {
    pub class: Option<LatticeClass>,
    /// Candidate classes tried first and dropped because their round left
    /// trapped or stuck cells.
    pub rejected: usize,
    /// Lattices of the pairs after the round, with multiplicities.
    pub lattices: LatticeMultiset,
    pub cells: usize,
}

/// Terminal pairs subdividing `(c^N P, (d!)^N P)` with every lattice `Z^d`.
#[derive(Clone, Debug)]
pub struct MainResult {
    pub dim: usize,
    pub c: u64,
    pub rounds: Vec<MixedRound>,
    pub initial_lattices: LatticeMultiset,
    pub cells: Vec<DElt>,
}

impl MainResult {
    pub fn n(&self) -> usize {
        self.rounds.len()
    }

    pub fn c_power(&self) -> BigInt {
        BigInt::from(self.c).pow(self.n() as u32)
    }

    pub fn factorial_power(&self) -> BigInt {
        BigInt::from(factorial(self.dim)).pow(self.n() as u32)
    }

    /// `r c^N + s (d!)^N`.
    pub fn dilation(&self, r: u64, s: u64) -> BigInt {
        BigInt::from(r) * self.c_power() + BigInt::from(s) * self.factorial_power()
    }

    /// Threshold beyond which every dilation factor is reached by some `(r, s)`.
    pub fn threshold(&self) -> Result<BigInt, MixedError> {
        semigroup_threshold(&self.c_power(), &self.factorial_power())
    }

    /// A unimodular triangulation of `dilation(r, s) * P`.
    pub fn triangulation(&self, r: u64, s: u64, opts: NormalizeOptions) -> Result<Vec<OrderedSimplex>, MixedError> {
        let cells = omega(&self.cells, r, s)?;
        let family = gamma_family();
        let parts: Result<Vec<BTreeSet<CayleyElt>>, RewriteError> = cells.par_iter().map(|e| normalize(e, &family, opts)).collect();
        let mut out = BTreeSet::new();
        for part in parts? {
            for e in part {
                let s = OrderedSimplex::lex(e.p().to_vec()).map_err(|err| RewriteError::Framework(format!("terminal cell {e:?}: {err}")))?;
                // pairs whose sum is lower-dimensional vanish under the chosen weights
                if s.dim() == self.dim {
                    out.insert(s);
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// Normalizes each pair under the family of `class` and merges the results.
/// Returns `None` once more than `budget` pairs have been produced.
pub fn delta_round(cells: &[DElt], class: Option<LatticeClass>, opts: NormalizeOptions, budget: usize) -> Result<Option<Vec<DElt>>, RewriteError> {
    let family = delta_family(BoxOracle::new(class));
    let produced = AtomicUsize::new(0);
    let parts: Result<Vec<Option<BTreeSet<DElt>>>, RewriteError> = cells
        .par_iter()
        .map(|e| {
            if produced.load(Ordering::Relaxed) > budget {
                return Ok(None);
            }
            let part = normalize(e, &family, opts)?;
            produced.fetch_add(part.len(), Ordering::Relaxed);
            Ok(Some(part))
        })
        .collect();
    let parts = parts?;
    if produced.load(Ordering::Relaxed) > budget || parts.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut out = BTreeSet::new();
    for part in parts.into_iter().flatten() {
        out.extend(part);
    }
    Ok(Some(out.into_iter().collect()))
}

/// Runs rounds `theta` then `Delta_x` until every lattice is `Z^d`.
pub fn main_pipeline(p: &Polytope, opts: MixedOptions) -> Result<MainResult, MixedError> {
    let d = p.ambient_dim();
    if p.dim() != d {
        return Err(MixedError::NotFullDimensional);
    }
    if d > opts.dim_cap {
        return Err(MixedError::DimensionCap { dim: d, cap: opts.dim_cap });
    }
    let c = opts.c.unwrap_or_else(|| default_c(d));
    let tri = pulling_triangulation(p.vertices(), opts.normalize)?;
    let mut cells = seed(&tri);
    let initial_lattices = count_lattices(cells.iter().map(|e| e.lattice()).collect());
    let mut rounds = Vec::new();
    loop {
        let candidates = class_candidates(&cells)?;
        if candidates.is_empty() && rounds.len() >= opts.min_rounds.max(1) {
            break;
        }
        let round = rounds.len();
        let dilated = theta(&cells, c)?;
        let tries: Vec<Option<LatticeClass>> = if candidates.is_empty() { vec![None] } else { candidates.into_iter().map(Some).collect() };
        let mut accepted = None;
        let mut trapped = None;
        for (rejected, class) in tries.into_iter().enumerate() {
            let out = delta_round(&dilated, class.clone(), opts.normalize, opts.max_cells)?.ok_or(MixedError::CellBudget { round, budget: opts.max_cells })?;
            let stuck = out.iter().find(|e| !e.is_terminal_shape());
            match (stuck, out.iter().find(|e| e.is_trapped())) {
                (Some(e), _) => {
                    trapped.get_or_insert_with(|| MixedError::Stuck { round, cell: format!("{e:?}") });
                }
                (None, Some(e)) => {
                    trapped.get_or_insert_with(|| MixedError::Trapped { round, index: e.lattice().index().to_string(), cell: format!("{e:?}") });
                }
                (None, None) => {
                    accepted = Some((class, rejected, out));
                    break;
                }
            }
        }
        let Some((class, rejected, out)) = accepted else {
            return Err(trapped.expect("some class was tried"));
        };
        cells = out;
        let lattices = count_lattices(cells.par_iter().map(|e| e.lattice()).collect());
        rounds.push(MixedRound { class, rejected, lattices, cells: cells.len() });
    }
    Ok(MainResult { dim: d, c, rounds, initial_lattices, cells })
}
