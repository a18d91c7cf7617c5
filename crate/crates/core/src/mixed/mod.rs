//! Pairs of Cayley cells `(p, S, a) × (q, S, b) × k` sharing their simplices,
//! whose rewriting subdivides two dilates of a polytope at once.
//!
//! The first `k` simplices are active; the remaining ones carry
//! multiplicity one in `a` and zero or one in `b`. Two shapes occur: the
//! lock-step shape with `|p| = |q|`, constant `p_i - q_i` and `a = b` on the
//! active columns, and the single-point shape with `|q| = 1` and `a >= b`.

mod pipeline;
mod rules;

pub use pipeline::{
    choose_class, class_candidates, default_c, delta_round, main_pipeline, omega, seed, semigroup_threshold, theta, MainResult, MixedOptions, MixedRound,
    DEFAULT_MAX_CELLS,
};
pub use rules::{
    delta_family, delta_x, epsilon_split, mu_split, nu_split, rho_split, sigma_split, tau_split, EpsilonRule, MuRule, MuSchema,
    NuRule, NuSchema, RhoRule, SigmaRule, TauRule,
};

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::boxpoints::{BoxOracle, BoxPoint};
use crate::cayley::{raw_in_cayley_position, CayleyError, RawCell};
use crate::complexes::Cell;
use crate::geometry::{is_independent, nonempty_subsets, tuple_faces, OrderedSimplex, RatPolytope};
use crate::kmw::factorial;
use crate::lattice::{IntLattice, IntVector, LatticeError};
use crate::rewrite::RewriteError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixedError {
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error("k exceeds the number of simplices")]
    BadK,
    #[error("data fits neither the lock-step nor the single-point shape")]
    NotInD,
    #[error("cell is not terminal: {0}")]
    NotTerminal(String),
    #[error("c = {c} is below d! + d = {min}")]
    CTooSmall { c: u64, min: u64 },
    #[error("(r, s) = (0, 0) collapses every cell to a point")]
    ZeroPair,
    #[error("gcd({0}, {1}) is not 1")]
    NotCoprime(String, String),
    #[error("the polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("round {round}: cell {cell} has lattice index {index} but every simplex of it is unimodular, so no class is a box point of it and its lattice can never be lowered")]
    Trapped { round: usize, index: String, cell: String },
    #[error("round {round}: cell {cell} left the domain of the class and is not terminal")]
    Stuck { round: usize, cell: String },
    #[error("round {round} would exceed the budget of {budget} cells")]
    CellBudget { round: usize, budget: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A cell `(p, S, a) × (q, S, b) × k` in standard form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DElt {
    p: Vec<IntVector>,
    q: Vec<IntVector>,
    s: Vec<OrderedSimplex>,
    a: Vec<Vec<u64>>,
    b: Vec<Vec<u64>>,
    k: usize,
}

impl fmt::Debug for DElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={:?}, q={:?}, S={:?}, a={:?}, b={:?}, k={})", self.p, self.q, self.s, self.a, self.b, self.k)
    }
}

impl DElt {
    /// Validates the data and brings it to standard form.
    pub fn new(
        p: Vec<IntVector>,
        q: Vec<IntVector>,
        s: Vec<OrderedSimplex>,
        a: Vec<Vec<u64>>,
        b: Vec<Vec<u64>>,
        k: usize,
    ) -> Result<Self, MixedError> {
        let first = p.first().ok_or(CayleyError::NoBasePoints)?;
        if q.is_empty() {
            return Err(CayleyError::NoBasePoints.into());
        }
        let d = first.dim();
        if p.iter().chain(&q).any(|x| x.dim() != d) || s.iter().any(|t| t.ambient_dim() != d) {
            return Err(CayleyError::DimensionMismatch.into());
        }
        if a.len() != p.len() || b.len() != q.len() || a.iter().chain(&b).any(|row| row.len() != s.len()) {
            return Err(CayleyError::BadShape.into());
        }
        if k > s.len() {
            return Err(MixedError::BadK);
        }
        if !is_independent(&s) {
            return Err(CayleyError::NotIndependent.into());
        }
        let e = Self::reduce_raw(p, q, s, a, b, k);
        if !(e.in_m() || e.in_n()) {
            return Err(MixedError::NotInD);
        }
        if !raw_in_cayley_position(&e.p, &e.s, &e.a) || !raw_in_cayley_position(&e.q, &e.s, &e.b) {
            return Err(CayleyError::NotCayleyPosition.into());
        }
        Ok(e)
    }

    /// `((0), (t), (1)) × ((0), (t), (1)) × 0`.
    pub fn unit_pair(t: OrderedSimplex) -> Self {
        let d = t.ambient_dim();
        Self::reduce_raw(vec![IntVector::zero(d)], vec![IntVector::zero(d)], vec![t], vec![vec![1]], vec![vec![1]], 0)
    }

    /// Absorbs point simplices, and zero columns among the active ones, into
    /// the base points.
    pub(crate) fn reduce_raw(
        mut p: Vec<IntVector>,
        mut q: Vec<IntVector>,
        mut s: Vec<OrderedSimplex>,
        mut a: Vec<Vec<u64>>,
        mut b: Vec<Vec<u64>>,
        mut k: usize,
    ) -> Self {
        let mut j = 0;
        while j < s.len() {
            let active = j < k;
            if s[j].is_point() || (active && a.iter().all(|row| row[j] == 0)) {
                let v = s[j].first().clone();
                for (pi, row) in p.iter_mut().zip(&a).chain(q.iter_mut().zip(&b)) {
                    if row[j] != 0 {
                        *pi = &*pi + &v.scale_u64(row[j]);
                    }
                }
                s.remove(j);
                for row in a.iter_mut().chain(b.iter_mut()) {
                    row.remove(j);
                }
                if active {
                    k -= 1;
                }
            } else {
                j += 1;
            }
        }
        DElt { p, q, s, a, b, k }
    }

    pub(crate) fn from_parts(u: RawCell, v: RawCell, k: usize) -> Self {
        debug_assert_eq!(u.s, v.s);
        Self::reduce_raw(u.p, v.p, u.s, u.a, v.a, k)
    }

    pub fn p(&self) -> &[IntVector] {
        &self.p
    }

    pub fn q(&self) -> &[IntVector] {
        &self.q
    }

    pub fn s(&self) -> &[OrderedSimplex] {
        &self.s
    }

    pub fn a(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<u64>] {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.k
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

    /// The active simplices `S_[k]`.
    pub fn active(&self) -> &[OrderedSimplex] {
        &self.s[..self.k]
    }

    /// The first component `(p, S, a)`.
    pub(crate) fn u(&self) -> RawCell {
        RawCell::new(self.p.clone(), self.s.clone(), self.a.clone())
    }

    /// The second component `(q, S, b)`.
    pub(crate) fn v(&self) -> RawCell {
        RawCell::new(self.q.clone(), self.s.clone(), self.b.clone())
    }

    fn passive_ok(&self) -> bool {
        (self.k..self.n()).all(|j| self.a.iter().all(|r| r[j] == 1))
    }

    /// The lock-step shape.
    pub fn in_m(&self) -> bool {
        if self.p.len() != self.q.len() || !self.passive_ok() {
            return false;
        }
        let shift = &self.p[0] - &self.q[0];
        if self.p.iter().zip(&self.q).any(|(x, y)| (x - y) != shift) {
            return false;
        }
        let active = (0..self.k).all(|j| self.a.iter().zip(&self.b).all(|(r, t)| r[j] == t[j]));
        let passive = (self.k..self.n()).all(|j| {
            let v = self.b[0][j];
            v <= 1 && self.b.iter().all(|t| t[j] == v)
        });
        active && passive
    }

    /// The single-point shape.
    pub fn in_n(&self) -> bool {
        if self.q.len() != 1 || !self.passive_ok() {
            return false;
        }
        let b = &self.b[0];
        self.a.iter().all(|r| r.iter().zip(b).all(|(x, y)| x >= y)) && (self.k..self.n()).all(|j| b[j] <= 1)
    }

    /// `L(A) = L(p, S, a)`.
    pub fn lattice(&self) -> IntLattice {
        self.u().lattice()
    }

    /// No rule of the family moves cells with one base point and no active
    /// simplex.
    pub fn is_terminal_shape(&self) -> bool {
        self.m() == 1 && self.k == 0
    }

    /// `(sum of active dimensions, sum of active entries of a, |p|)`, which
    /// drops lexicographically under every non-trivial move.
    pub fn metric(&self) -> (usize, u64, usize) {
        let dims = self.active().iter().map(|t| t.dim()).sum();
        let entries = self.a.iter().map(|r| r[..self.k].iter().sum::<u64>()).sum();
        (dims, entries, self.m())
    }

    /// A terminal cell of index above one all of whose simplices are
    /// unimodular. Its box point group is trivial, the lattice-preserving
    /// rules keep its lattice, and so no later round can lower it.
    pub fn is_trapped(&self) -> bool {
        self.is_terminal_shape() && !self.lattice().index().is_one() && self.s.iter().all(|t| t.index().is_one())
    }

    /// The class as a box point of the active simplices.
    pub fn box_point(&self, oracle: &BoxOracle) -> Option<BoxPoint> {
        oracle.query(self.active())
    }

    /// Cells without the class as a box point.
    pub fn in_d_circ(&self, oracle: &BoxOracle) -> bool {
        self.box_point(oracle).is_none()
    }

    /// Cells with the class as a box point in the single-point shape whose
    /// rows equal `b` or dominate `b + c` on the active columns, with `b`
    /// zero or `d!` there.
    pub fn in_d_bullet(&self, oracle: &BoxOracle) -> bool {
        let Some(bp) = self.box_point(oracle) else { return false };
        self.bullet_rows(&bp).is_some()
    }

    /// Row types of a bullet cell: `false` for rows equal to `b`, `true` for
    /// rows dominating `b + c`.
    pub(crate) fn bullet_rows(&self, bp: &BoxPoint) -> Option<Vec<bool>> {
        if !self.in_n() {
            return None;
        }
        let top = factorial(self.ambient_dim());
        let k = self.k;
        let b = &self.b[0][..k];
        if b.iter().any(|&v| v != 0 && v != top) {
            return None;
        }
        let c = bp.c();
        self.a
            .iter()
            .map(|r| {
                let r = &r[..k];
                if r == b {
                    Some(false)
                } else if r.iter().zip(b).zip(c).all(|((x, y), z)| *x >= y + z) {
                    Some(true)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn in_d_x(&self, oracle: &BoxOracle) -> bool {
        self.in_d_circ(oracle) || self.in_d_bullet(oracle)
    }

    /// The pair of Cayley sums.
    pub fn cay_pair(&self) -> (crate::geometry::Polytope, crate::geometry::Polytope) {
        (self.u().cay(), self.v().cay())
    }
}

impl Cell for DElt {
    fn faces(&self) -> Vec<Self> {
        let mut out = BTreeSet::new();
        let tuples = tuple_faces(&self.s);
        let single = self.q.len() == 1;
        for rows in nonempty_subsets(self.m()) {
            let p: Vec<IntVector> = rows.iter().map(|&i| self.p[i].clone()).collect();
            let a: Vec<Vec<u64>> = rows.iter().map(|&i| self.a[i].clone()).collect();
            let (q, b) = if single {
                (self.q.clone(), self.b.clone())
            } else {
                (rows.iter().map(|&i| self.q[i].clone()).collect(), rows.iter().map(|&i| self.b[i].clone()).collect())
            };
            for t in &tuples {
                out.insert(Self::reduce_raw(p.clone(), q.clone(), t.clone(), a.clone(), b.clone(), self.k));
            }
        }
        out.into_iter().collect()
    }

    fn realize(&self) -> Vec<RatPolytope> {
        let (u, v) = self.cay_pair();
        vec![u.to_rat(), v.to_rat()]
    }
}
