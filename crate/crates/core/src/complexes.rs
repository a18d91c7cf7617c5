//! Face-closed sets of cells realized as tuples of polytopes.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::linalg::Q;
use crate::geometry::{meet_properly, RatPolytope};

/// An element of a poset with a realization as an `n`-tuple of polytopes.
///
/// The derived ordering is the canonical key used for determinism.
pub trait Cell: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    /// All faces, the cell itself included.
    fn faces(&self) -> Vec<Self>;

    /// The tuple of polytopes realizing the cell.
    fn realize(&self) -> Vec<RatPolytope>;

    /// Minkowski sum of the realization.
    fn summed(&self) -> RatPolytope {
        let parts = self.realize();
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            acc = acc.minkowski_sum(p);
        }
        acc
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cells {0} and {1} have the same realization")]
    RealizeCollision(String, String),
    #[error("cells {0} and {1} do not meet in a common face")]
    InteriorOverlap(String, String),
    #[error("the support is not convex")]
    NonConvexSupport,
    #[error("not a valid mixed subdivision: {0}")]
    InvalidMixedSubdivision(String),
    #[error("framework violation: {0}")]
    Framework(String),
}

/// Support of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    Convex(RatPolytope),
    NonConvex,
}

/// A face-closed set of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex<C: Cell> {
    cells: BTreeSet<C>,
}

impl<C: Cell> CellComplex<C> {
    /// Face closure of the given cells, without geometric validation.
    pub fn closure_unchecked<I: IntoIterator<Item = C>>(cells: I) -> Self {
        let mut all = BTreeSet::new();
        for c in cells {
            if all.contains(&c) {
                continue;
            }
            for f in c.faces() {
                all.insert(f);
            }
        }
        CellComplex { cells: all }
    }

    /// Face closure of the given cells, checked to be a polytopal complex.
    pub fn closure<I: IntoIterator<Item = C>>(cells: I) -> Result<Self, ComplexError> {
        let cx = Self::closure_unchecked(cells);
        cx.validate()?;
        Ok(cx)
    }

    pub fn cells(&self) -> &BTreeSet<C> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &C) -> bool {
        self.cells.contains(c)
    }

    /// Cells that are not proper faces of other cells.
    pub fn maximal(&self) -> Vec<C> {
        maximal_cells(self.cells.iter().cloned())
    }

    /// Checks that realization is injective and that maximal cells pairwise
    /// meet in common faces.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let mut seen: HashMap<Vec<RatPolytope>, &C> = HashMap::new();
        for c in &self.cells {
            if let Some(o) = seen.insert(c.realize(), c) {
                return Err(ComplexError::RealizeCollision(format!("{o:?}"), format!("{c:?}")));
            }
        }
        let max = self.maximal();
        let summed: Vec<RatPolytope> = max.par_iter().map(|c| c.summed()).collect();
        let bad = (0..max.len())
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..max.len()).map(move |j| (i, j)))
            .find_any(|&(i, j)| !meet_properly(&summed[i], &summed[j]));
        match bad {
            Some((i, j)) => Err(ComplexError::InteriorOverlap(format!("{:?}", max[i]), format!("{:?}", max[j]))),
            None => Ok(()),
        }
    }

    /// The union of the summed realizations, if it is convex.
    pub fn support(&self) -> Support {
        let max = self.maximal();
        if max.is_empty() {
            return Support::NonConvex;
        }
        let summed: Vec<RatPolytope> = max.par_iter().map(|c| c.summed()).collect();
        convex_union(&summed)
    }

    /// The tuple `(Q_1, ..., Q_n)` of unions of the `k`-th components, which
    /// must be convex and sum to the support.
    pub fn n_support(&self) -> Result<Vec<RatPolytope>, ComplexError> {
        let max = self.maximal();
        let Some(first) = max.first() else { return Err(ComplexError::InvalidMixedSubdivision("empty complex".into())) };
        let n = first.realize().len();
        let Support::Convex(total) = self.support() else { return Err(ComplexError::NonConvexSupport) };
        let parts: Vec<Vec<RatPolytope>> = max.iter().map(|c| c.realize()).collect();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let pts: Vec<Vec<Q>> = parts.iter().flat_map(|p| p[k].vertices().to_vec()).collect();
            out.push(RatPolytope::new(&pts).expect("nonempty"));
        }
        let mut acc = out[0].clone();
        for p in &out[1..] {
            acc = acc.minkowski_sum(p);
        }
        if acc != total {
            return Err(ComplexError::InvalidMixedSubdivision("component hulls do not sum to the support".into()));
        }
        Ok(out)
    }

    /// Cells lying in the face realized by `y`.
    pub fn restriction(&self, y: &C) -> CellComplex<C> {
        let target = y.summed();
        let h = target.hull_data();
        let cells = self
            .cells
            .iter()
            .filter(|c| c.summed().vertices().iter().all(|v| h.equalities.iter().all(|(n, val)| &crate::geometry::linalg::dot(n, v) == val)))
            .cloned()
            .collect();
        CellComplex { cells }
    }

    /// Union of `sigma(x)` over the maximal cells, closed under faces.
    ///
    /// Distinct maximal cells of the result with equal realizations indicate
    /// that `sigma` is not canonical and are reported as a framework violation.
    pub fn refine<F>(&self, sigma: F) -> Result<CellComplex<C>, ComplexError>
    where
        F: Fn(&C) -> Result<Vec<C>, String> + Sync,
    {
        let max = self.maximal();
        let parts: Result<Vec<Vec<C>>, String> = max.par_iter().map(&sigma).collect();
        let cells: BTreeSet<C> = parts.map_err(ComplexError::Framework)?.into_iter().flatten().collect();
        let mut seen: HashMap<Vec<RatPolytope>, &C> = HashMap::new();
        for c in &cells {
            if let Some(o) = seen.insert(c.realize(), c) {
                return Err(ComplexError::Framework(format!("gluing inconsistency: {o:?} vs {c:?}")));
            }
        }
        Ok(Self::closure_unchecked(cells))
    }
}

/// Cells of the set that are not proper faces of other members.
pub fn maximal_cells<C: Cell, I: IntoIterator<Item = C>>(cells: I) -> Vec<C> {
    let cells: BTreeSet<C> = cells.into_iter().collect();
    let mut proper: BTreeSet<C> = BTreeSet::new();
    for c in &cells {
        for f in c.faces() {
            if &f != c {
                proper.insert(f);
            }
        }
    }
    cells.into_iter().filter(|c| !proper.contains(c)).collect()
}

/// Whether the union of polytopes with pairwise disjoint interiors is convex,
/// by comparing volumes with the hull.
pub fn convex_union(parts: &[RatPolytope]) -> Support {
    let pts: Vec<Vec<Q>> = parts.iter().flat_map(|p| p.vertices().to_vec()).collect();
    let hull = RatPolytope::new(&pts).expect("nonempty");
    let d = hull.dim();
    if parts.iter().any(|p| p.dim() != d) {
        return Support::NonConvex;
    }
    let total: Q = parts.iter().map(|p| p.frame_volume()).fold(Q::zero(), |a, b| a + b);
    if total == hull.frame_volume() {
        Support::Convex(hull)
    } else {
        Support::NonConvex
    }
}
