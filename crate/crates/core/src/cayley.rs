//! Cayley cells `(p, S, a)`: base points, independent ordered simplices and a
//! nonnegative multiplicity matrix, realized as the Cayley sum of the
//! polytopes `p_i + sum_j a_ij S_j`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::complexes::Cell;
use crate::geometry::{is_independent, nonempty_subsets, tuple_faces, OrderedSimplex, Polytope, RatPolytope};
use crate::lattice::{rank, IntLattice, IntVector};
use crate::rewrite::{normalize, NormalizeOptions, RewriteError, RuleFamily, RuleSchema, SubdivisionRule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("a Cayley cell needs at least one base point")]
    NoBasePoints,
    #[error("points of mixed dimension")]
    DimensionMismatch,
    #[error("multiplicity matrix has the wrong shape")]
    BadShape,
    #[error("simplices are not independent")]
    NotIndependent,
    #[error("summands are not in Cayley position")]
    NotCayleyPosition,
    #[error("multiplicity overflow")]
    Overflow,
}

/// A Cayley cell in standard form: every simplex has positive dimension and
/// every column of `a` is nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CayleyElt {
    p: Vec<IntVector>,
    s: Vec<OrderedSimplex>,
    a: Vec<Vec<u64>>,
}

impl fmt::Debug for CayleyElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={:?}, S={:?}, a={:?})", self.p, self.s, self.a)
    }
}

impl CayleyElt {
    /// Validates the data and brings it to standard form.
    pub fn new(p: Vec<IntVector>, s: Vec<OrderedSimplex>, a: Vec<Vec<u64>>) -> Result<Self, CayleyError> {
        let first = p.first().ok_or(CayleyError::NoBasePoints)?;
        let d = first.dim();
        if p.iter().any(|x| x.dim() != d) || s.iter().any(|t| t.ambient_dim() != d) {
            return Err(CayleyError::DimensionMismatch);
        }
        if a.len() != p.len() || a.iter().any(|row| row.len() != s.len()) {
            return Err(CayleyError::BadShape);
        }
        if !is_independent(&s) {
            return Err(CayleyError::NotIndependent);
        }
        let e = Self::reduce_raw(p, s, a);
        if !e.in_cayley_position() {
            return Err(CayleyError::NotCayleyPosition);
        }
        Ok(e)
    }

    /// A single simplex dilated by `k`: `((0), (t), (k))`.
    pub fn dilated_simplex(t: OrderedSimplex, k: u64) -> Self {
        let d = t.ambient_dim();
        Self::reduce_raw(vec![IntVector::zero(d)], vec![t], vec![vec![k]])
    }

    /// Absorbs point simplices and zero columns into the base points.
    pub(crate) fn reduce_raw(mut p: Vec<IntVector>, mut s: Vec<OrderedSimplex>, mut a: Vec<Vec<u64>>) -> Self {
        let mut j = 0;
        while j < s.len() {
            if s[j].is_point() || a.iter().all(|row| row[j] == 0) {
                let v = s[j].first().clone();
                for (pi, row) in p.iter_mut().zip(&a) {
                    if row[j] != 0 {
                        *pi = &*pi + &v.scale_u64(row[j]);
                    }
                }
                s.remove(j);
                for row in &mut a {
                    row.remove(j);
                }
            } else {
                j += 1;
            }
        }
        CayleyElt { p, s, a }
    }

    pub fn p(&self) -> &[IntVector] {
        &self.p
    }

    pub fn s(&self) -> &[OrderedSimplex] {
        &self.s
    }

    pub fn a(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.p[0].dim()
    }

    /// Position of `t` among the simplices.
    pub fn column_of(&self, t: &OrderedSimplex) -> Option<usize> {
        self.s.iter().position(|x| x == t)
    }

    /// Vertex `p_i + sum_j a_ij v_j` built from the first vertices.
    pub fn base_vertex(&self, i: usize) -> IntVector {
        let mut b = self.p[i].clone();
        for (t, &k) in self.s.iter().zip(&self.a[i]) {
            if k != 0 {
                b = &b + &t.first().scale_u64(k);
            }
        }
        b
    }

    fn in_cayley_position(&self) -> bool {
        raw_in_cayley_position(&self.p, &self.s, &self.a)
    }

    /// The summand polytopes `p_i + sum_j a_ij S_j`.
    pub fn summands(&self) -> Vec<Polytope> {
        (0..self.m()).map(|i| Polytope::new(&self.summand_points(i)).expect("nonempty")).collect()
    }

    fn summand_points(&self, i: usize) -> Vec<IntVector> {
        let choices: Vec<Vec<IntVector>> = self
            .s
            .iter()
            .zip(&self.a[i])
            .filter(|(_, &k)| k != 0)
            .map(|(t, &k)| t.vertices().iter().map(|v| v.scale_u64(k)).collect())
            .collect();
        if choices.is_empty() {
            return vec![self.p[i].clone()];
        }
        choices.into_iter().multi_cartesian_product().map(|vs| vs.iter().fold(self.p[i].clone(), |acc, v| &acc + v)).collect()
    }

    /// The Cayley sum: convex hull of all summands.
    pub fn cay(&self) -> Polytope {
        let mut pts: Vec<IntVector> = (0..self.m()).flat_map(|i| self.summand_points(i)).collect();
        pts.sort();
        pts.dedup();
        Polytope::from_sorted_vertices(pts)
    }

    /// Face `(p_I, S', a_I)` in standard form.
    pub fn face(&self, rows: &[usize], s: Vec<OrderedSimplex>) -> CayleyElt {
        let p = rows.iter().map(|&i| self.p[i].clone()).collect();
        let a = rows.iter().map(|&i| self.a[i].clone()).collect();
        Self::reduce_raw(p, s, a)
    }

    /// Simplex on the first vertices of the summands.
    pub fn s0(&self) -> OrderedSimplex {
        OrderedSimplex::new((0..self.m()).map(|i| self.base_vertex(i)).collect()).expect("Cayley position")
    }

    /// `L(A) = L(S_0(A)) + L(S_1) + ... + L(S_n)`.
    pub fn lattice(&self) -> IntLattice {
        let mut gens = self.s0().edges();
        gens.extend(self.s.iter().flat_map(|t| t.edges()));
        IntLattice::new(&gens, self.ambient_dim())
    }

    /// `(sum_j dim S_j, sum_ij a_ij)`, which drops lexicographically under
    /// every non-trivial move of the gamma family.
    pub fn gamma_metric(&self) -> (usize, u64) {
        (self.s.iter().map(|t| t.dim()).sum(), self.a.iter().flatten().sum())
    }

    /// Row with the largest entry in column `j`, the first among ties.
    pub fn pivot_row(&self, j: usize) -> usize {
        let max = self.a.iter().map(|r| r[j]).max().expect("nonempty");
        self.a.iter().position(|r| r[j] == max).expect("max exists")
    }
}

impl Cell for CayleyElt {
    fn faces(&self) -> Vec<Self> {
        let mut out = BTreeSet::new();
        let tuples = tuple_faces(&self.s);
        for rows in nonempty_subsets(self.m()) {
            for t in &tuples {
                out.insert(self.face(&rows, t.clone()));
            }
        }
        out.into_iter().collect()
    }

    fn realize(&self) -> Vec<RatPolytope> {
        vec![self.cay().to_rat()]
    }
}

/// The two halves `A'` and `A''` of the gamma split at column `j`, with `A'`
/// omitted when it is a face of `A''`.
pub(crate) fn gamma_parts(e: &CayleyElt, j: usize) -> (Option<CayleyElt>, CayleyElt) {
    let raw = RawCell::from(e);
    let i = raw.pivot_row(j);
    let (first, second) = raw.gamma_at(j, i);
    let first = (!raw.is_lone(j, i)).then(|| first.reduce());
    (first, second.reduce())
}

/// `gamma_T` at column `j`.
pub fn gamma_split(e: &CayleyElt, j: usize) -> Vec<CayleyElt> {
    let (first, second) = gamma_parts(e, j);
    first.into_iter().chain([second]).collect()
}

/// The gamma rule for one fixed ordered simplex `T`.
#[derive(Clone, Debug)]
pub struct GammaRule(pub OrderedSimplex);

impl SubdivisionRule<CayleyElt> for GammaRule {
    fn name(&self) -> String {
        format!("gamma{:?}", self.0)
    }

    fn applies_to(&self, e: &CayleyElt) -> bool {
        e.column_of(&self.0).is_some()
    }

    fn apply(&self, e: &CayleyElt) -> Result<Vec<CayleyElt>, RewriteError> {
        let j = e.column_of(&self.0).ok_or_else(|| RewriteError::RuleFailed {
            rule: self.name(),
            cell: format!("{e:?}"),
            reason: "simplex is not an entry".into(),
        })?;
        Ok(gamma_split(e, j))
    }
}

/// All gamma rules at once, indexed by the column of the simplex they act on.
#[derive(Clone, Copy, Debug, Default)]
pub struct GammaSchema;

impl RuleSchema<CayleyElt> for GammaSchema {
    fn name(&self) -> String {
        "gamma".into()
    }

    fn params(&self, e: &CayleyElt) -> Vec<usize> {
        (0..e.n()).collect()
    }

    fn apply(&self, e: &CayleyElt, j: usize) -> Result<Vec<CayleyElt>, RewriteError> {
        Ok(gamma_split(e, j))
    }
}

pub fn gamma_family() -> RuleFamily<CayleyElt> {
    RuleFamily::new().with(GammaSchema)
}

/// Maximal cells of `Gamma(e)`: every cell has no simplices left and the
/// same lattice as `e`.
pub fn gamma_normal_form(e: &CayleyElt, opts: NormalizeOptions) -> Result<BTreeSet<CayleyElt>, RewriteError> {
    normalize(e, &gamma_family(), opts)
}

/// Cell data before reduction: point simplices and zero columns allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawCell {
    pub p: Vec<IntVector>,
    pub s: Vec<OrderedSimplex>,
    pub a: Vec<Vec<u64>>,
}

impl From<&CayleyElt> for RawCell {
    fn from(e: &CayleyElt) -> Self {
        RawCell { p: e.p.clone(), s: e.s.clone(), a: e.a.clone() }
    }
}

impl RawCell {
    pub fn new(p: Vec<IntVector>, s: Vec<OrderedSimplex>, a: Vec<Vec<u64>>) -> Self {
        RawCell { p, s, a }
    }

    pub fn reduce(self) -> CayleyElt {
        CayleyElt::reduce_raw(self.p, self.s, self.a)
    }

    /// Row with the largest entry in column `j`, the first among ties.
    pub fn pivot_row(&self, j: usize) -> usize {
        let max = self.a.iter().map(|r| r[j]).max().expect("nonempty");
        self.a.iter().position(|r| r[j] == max).expect("max exists")
    }

    /// Whether row `i` holds the only nonzero entry of column `j` and it is 1.
    pub fn is_lone(&self, j: usize, i: usize) -> bool {
        self.a[i][j] == 1 && self.a.iter().enumerate().all(|(r, row)| r == i || row[j] == 0)
    }

    /// The gamma halves at column `j` pivoting on row `i`: `A'` moves the
    /// first vertex of `S_j` into `p_i`, and `A''` duplicates row `i` with
    /// `S_j` replaced by its facet opposite the first vertex.
    pub fn gamma_at(&self, j: usize, i: usize) -> (RawCell, RawCell) {
        let t = &self.s[j];
        let moved = &self.p[i] + t.first();
        let mut first = self.clone();
        first.p[i] = moved.clone();
        first.a[i][j] -= 1;
        let mut second = self.clone();
        second.p.insert(i, moved);
        second.s[j] = t.facet_opposite(0);
        second.a.insert(i, first.a[i].clone());
        (first, second)
    }

    pub fn with_tuple(mut self, s: Vec<OrderedSimplex>) -> RawCell {
        self.s = s;
        self
    }

    /// Inserts the base point `x` with multiplicity row `row` at position `i`.
    pub fn insert_row(mut self, i: usize, x: IntVector, row: Vec<u64>) -> RawCell {
        self.p.insert(i, x);
        self.a.insert(i, row);
        self
    }

    pub fn cay(&self) -> Polytope {
        self.clone().reduce().cay()
    }

    pub fn lattice(&self) -> IntLattice {
        self.clone().reduce().lattice()
    }
}

/// Cayley position of the summands `p_i + sum_j a_ij S_j`; zero columns
/// contribute no directions.
pub(crate) fn raw_in_cayley_position(p: &[IntVector], s: &[OrderedSimplex], a: &[Vec<u64>]) -> bool {
    let base = |i: usize| {
        let mut b = p[i].clone();
        for (t, &k) in s.iter().zip(&a[i]) {
            if k != 0 {
                b = &b + &t.first().scale_u64(k);
            }
        }
        b
    };
    let b0 = base(0);
    let mut rows: Vec<IntVector> = (1..p.len()).map(|i| &base(i) - &b0).collect();
    let live: Vec<&OrderedSimplex> = s.iter().enumerate().filter(|(j, _)| a.iter().any(|r| r[*j] != 0)).map(|(_, t)| t).collect();
    let total: usize = live.iter().map(|t| t.dim()).sum();
    rows.extend(live.iter().flat_map(|t| t.edges()));
    rows.is_empty() || rank(&rows) == total + p.len() - 1
}
