//! Unimodular triangulations of `(d!)^N P`: each round dilates a
//! triangulation by `d!` and subdivides every simplex with the gamma rules,
//! coning off one box point class by concentric shells first.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::boxpoints::{frak_f, shell_raw, BoxOracle};
use crate::cayley::{CayleyElt, GammaSchema, RawCell};
use crate::classic::pulling_triangulation;
use crate::geometry::{OrderedSimplex, Polytope};
use crate::lattice::{IntLattice, LatticeClass, LatticeError};
use crate::rewrite::{normalize, NormalizeOptions, Restricted, RewriteError, RuleFamily, Single, SubdivisionRule};

pub const DEFAULT_DIM_CAP: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmwError {
    #[error("the polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `d!` as a multiplicity.
pub fn factorial(d: usize) -> u64 {
    (1..=d as u64).product()
}

/// Whether the class is not a box point of the simplices of `e`.
pub fn is_circ(oracle: &BoxOracle, e: &CayleyElt) -> bool {
    !oracle.is_box_point(e.s())
}

/// A single simplex with multiplicity `d!` whose box point is the class.
pub fn is_bullet(oracle: &BoxOracle, e: &CayleyElt) -> bool {
    e.m() == 1 && e.n() == 1 && e.a()[0][0] == factorial(e.ambient_dim()) && oracle.is_box_point(e.s())
}

/// The stellar rule: cones the focus `N x0` off by `N = d!/c` concentric
/// shells over the facets avoiding the class.
#[derive(Clone, Debug)]
pub struct StellRule {
    pub oracle: Arc<BoxOracle>,
}

impl SubdivisionRule<CayleyElt> for StellRule {
    fn name(&self) -> String {
        "stell".into()
    }

    fn applies_to(&self, e: &CayleyElt) -> bool {
        is_bullet(&self.oracle, e)
    }

    fn apply(&self, e: &CayleyElt) -> Result<Vec<CayleyElt>, RewriteError> {
        let bp = self.oracle.query(e.s()).filter(|_| self.applies_to(e)).ok_or_else(|| RewriteError::RuleFailed {
            rule: self.name(),
            cell: format!("{e:?}"),
            reason: "not a bullet cell".into(),
        })?;
        let top = e.a()[0][0];
        let c = bp.c()[0];
        let frak = frak_f(&self.oracle, e.s(), 1);
        let cells: BTreeSet<CayleyElt> = shell_raw(&e.p()[0], &[top], &[c], bp.focus(), &frak, top / c).into_iter().map(RawCell::reduce).collect();
        Ok(cells.into_iter().collect())
    }
}

/// Gamma rules restricted to cells without the class, and the stellar rule.
pub fn kmw_family(oracle: Arc<BoxOracle>) -> RuleFamily<CayleyElt> {
    let o = oracle.clone();
    RuleFamily::new()
        .with(Restricted { schema: GammaSchema, domain: move |e: &CayleyElt| is_circ(&o, e), label: "°" })
        .with(Single(StellRule { oracle }))
}

/// Maximal cells of the canonical subdivision `Gamma_x(e)`.
pub fn gamma_x(e: &CayleyElt, oracle: Arc<BoxOracle>, opts: NormalizeOptions) -> Result<BTreeSet<CayleyElt>, RewriteError> {
    normalize(e, &kmw_family(oracle), opts)
}

#[derive(Clone, Copy, Debug)]
pub struct KmwOptions {
    pub normalize: NormalizeOptions,
    pub dim_cap: usize,
    /// Rounds to run even after every lattice is `Z^d`; at least one round
    /// is always made.
    pub min_rounds: usize,
}

impl Default for KmwOptions {
    fn default() -> Self {
        KmwOptions { normalize: NormalizeOptions::default(), dim_cap: DEFAULT_DIM_CAP, min_rounds: 1 }
    }
}

/// One dilation round.
#[derive(Clone, Debug)]
pub struct KmwRound {
    /// The class coned off in this round, if any lattice had index above one.
    pub class: Option<LatticeClass>,
    /// Lattices of the maximal simplices after the round, with multiplicities.
    pub lattices: LatticeMultiset,
    pub cells: usize,
}

#[derive(Clone, Debug)]
pub struct KmwResult {
    pub rounds: Vec<KmwRound>,
    /// Lattices of the starting triangulation, with multiplicities.
    pub initial_lattices: LatticeMultiset,
    /// A unimodular triangulation of `dilation * P`.
    pub triangulation: Vec<OrderedSimplex>,
    pub dilation: BigInt,
}

impl KmwResult {
    /// The number of rounds `N`, with `dilation = (d!)^N`.
    pub fn n(&self) -> usize {
        self.rounds.len()
    }
}

/// Lattices mapped to the number of cells having them.
pub type LatticeMultiset = BTreeMap<IntLattice, usize>;

pub fn count_lattices(lattices: Vec<IntLattice>) -> LatticeMultiset {
    let mut out = LatticeMultiset::new();
    for l in lattices {
        *out.entry(l).or_default() += 1;
    }
    out
}

/// Lattices of a set of full-dimensional simplices.
pub fn lattice_multiset(cells: &[OrderedSimplex]) -> LatticeMultiset {
    count_lattices(cells.par_iter().map(|s| s.lattice()).collect())
}

/// The class used for a round: the first nonzero class of a lattice of the
/// largest index, choosing among equal indices the lattice of the smallest
/// simplex.
pub fn choose_class(cells: &[OrderedSimplex]) -> Result<Option<LatticeClass>, LatticeError> {
    let indexed: Vec<(BigInt, &OrderedSimplex, IntLattice)> = cells
        .par_iter()
        .map(|s| {
            let l = s.lattice();
            (l.index(), s, l)
        })
        .collect();
    let Some(best) = indexed.iter().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(a.1))) else { return Ok(None) };
    if best.0.is_one() {
        return Ok(None);
    }
    Ok(LatticeClass::nonzero_classes(&best.2)?.into_iter().next())
}

/// Subdivides `d! X` for a triangulation `X`: every simplex becomes
/// `((0), (S), (d!))` and is normalized under the family for `class`.
pub fn kmw_round(cells: &[OrderedSimplex], class: Option<LatticeClass>, opts: NormalizeOptions) -> Result<Vec<OrderedSimplex>, RewriteError> {
    let d = cells.first().map(|s| s.ambient_dim()).unwrap_or(0);
    let oracle = BoxOracle::new(class);
    let family = kmw_family(oracle);
    let top = factorial(d);
    let parts: Result<Vec<BTreeSet<CayleyElt>>, RewriteError> =
        cells.par_iter().map(|s| normalize(&CayleyElt::dilated_simplex(s.clone(), top), &family, opts)).collect();
    let mut out = BTreeSet::new();
    for part in parts? {
        for e in part {
            let s = OrderedSimplex::lex(e.p().to_vec()).map_err(|err| RewriteError::Framework(format!("terminal cell {e:?}: {err}")))?;
            out.insert(s);
        }
    }
    Ok(out.into_iter().collect())
}

/// Runs rounds until every simplex is unimodular.
pub fn kmw_pipeline(p: &Polytope, opts: KmwOptions) -> Result<KmwResult, KmwError> {
    let d = p.ambient_dim();
    if p.dim() != d {
        return Err(KmwError::NotFullDimensional);
    }
    if d > opts.dim_cap {
        return Err(KmwError::DimensionCap { dim: d, cap: opts.dim_cap });
    }
    let mut cells = pulling_triangulation(p.vertices(), opts.normalize)?;
    let initial_lattices = lattice_multiset(&cells);
    let mut rounds = Vec::new();
    loop {
        let class = choose_class(&cells)?;
        if class.is_none() && rounds.len() >= opts.min_rounds.max(1) {
            break;
        }
        cells = kmw_round(&cells, class.clone(), opts.normalize)?;
        rounds.push(KmwRound { class, lattices: lattice_multiset(&cells), cells: cells.len() });
    }
    let dilation = BigInt::from(factorial(d)).pow(rounds.len() as u32);
    Ok(KmwResult { rounds, initial_lattices, triangulation: cells, dilation })
}

/// Numbers of cells by lattice index, largest index first.
pub fn index_profile(lattices: &LatticeMultiset) -> Vec<(BigInt, usize)> {
    let mut counts: HashMap<BigInt, usize> = HashMap::new();
    for (l, n) in lattices {
        *counts.entry(l.index()).or_default() += n;
    }
    let mut out: Vec<(BigInt, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}
