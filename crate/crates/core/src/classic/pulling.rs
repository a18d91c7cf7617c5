use std::collections::BTreeSet;
use std::fmt;

use crate::complexes::Cell;
use crate::geometry::linalg::dot;
use crate::geometry::{GeometryError, OrderedSimplex, Polytope, RatPolytope};
use crate::lattice::{rank, IntVector};
use crate::rewrite::{normalize, NormalizeOptions, RewriteError, RuleFamily, SubdivisionRule};

/// Finite point set, kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointConfig {
    points: Vec<IntVector>,
}

impl fmt::Debug for PointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, "}}")
    }
}

impl PointConfig {
    pub fn new(mut points: Vec<IntVector>) -> Result<Self, GeometryError> {
        let first = points.first().ok_or(GeometryError::Empty)?;
        let d = first.dim();
        if points.iter().any(|p| p.dim() != d) {
            return Err(GeometryError::DimensionMismatch);
        }
        points.sort();
        points.dedup();
        Ok(PointConfig { points })
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        affine_dim(&self.points)
    }

    pub fn polytope(&self) -> Polytope {
        Polytope::new(&self.points).expect("nonempty")
    }

    pub fn is_affinely_independent(&self) -> bool {
        self.dim() + 1 == self.points.len()
    }

    /// A point whose removal lowers the dimension.
    pub fn is_covector(&self, x: &IntVector) -> bool {
        let rest: Vec<IntVector> = self.points.iter().filter(|p| *p != x).cloned().collect();
        rest.is_empty() || affine_dim(&rest) < self.dim()
    }

    /// Faces `A ∩ F` for the faces `F` of the hull, the configuration included.
    pub fn config_faces(&self) -> Vec<PointConfig> {
        if self.is_affinely_independent() {
            return crate::geometry::nonempty_subsets(self.points.len())
                .into_iter()
                .map(|s| PointConfig { points: s.iter().map(|&i| self.points[i].clone()).collect() })
                .collect();
        }
        let h = self.polytope().hull_data();
        let rat: Vec<_> = self.points.iter().map(|p| p.to_rational()).collect();
        let mut out = BTreeSet::new();
        for face in h.face_sets() {
            let tight: Vec<_> = h.facets.iter().filter(|f| face.iter().all(|i| f.vertices.contains(i))).collect();
            let pts: Vec<IntVector> = self
                .points
                .iter()
                .zip(&rat)
                .filter(|(_, r)| tight.iter().all(|f| dot(&f.normal, r) == f.offset))
                .map(|(p, _)| p.clone())
                .collect();
            out.insert(PointConfig { points: pts });
        }
        out.into_iter().collect()
    }

    pub fn to_simplex(&self) -> Option<OrderedSimplex> {
        OrderedSimplex::new(self.points.clone()).ok()
    }
}

fn affine_dim(points: &[IntVector]) -> usize {
    let p0 = &points[0];
    let d: Vec<IntVector> = points[1..].iter().map(|p| p - p0).collect();
    rank(&d)
}

impl Cell for PointConfig {
    fn faces(&self) -> Vec<Self> {
        self.config_faces()
    }

    fn realize(&self) -> Vec<RatPolytope> {
        vec![self.polytope().to_rat()]
    }
}

/// Pulls the smallest point that is not a covector: the cells are the cones
/// from it over the faces that miss it.
#[derive(Clone, Copy, Debug, Default)]
pub struct PullRule;

impl PullRule {
    pub fn pivot(cfg: &PointConfig) -> Option<IntVector> {
        cfg.points.iter().find(|x| !cfg.is_covector(x)).cloned()
    }
}

impl SubdivisionRule<PointConfig> for PullRule {
    fn name(&self) -> String {
        "pull".into()
    }

    fn applies_to(&self, _: &PointConfig) -> bool {
        true
    }

    fn apply(&self, cfg: &PointConfig) -> Result<Vec<PointConfig>, RewriteError> {
        let Some(x) = Self::pivot(cfg) else { return Ok(vec![cfg.clone()]) };
        let d = cfg.dim();
        let mut out = Vec::new();
        for b in cfg.config_faces() {
            if b.dim() + 1 != d || b.points.contains(&x) {
                continue;
            }
            let mut pts = b.points.clone();
            pts.push(x.clone());
            out.push(PointConfig::new(pts).expect("nonempty"));
        }
        Ok(out)
    }
}

pub fn pulling_family() -> RuleFamily<PointConfig> {
    RuleFamily::new().with_rule(PullRule)
}

/// Pulling triangulation of a point set: simplices in lexicographic vertex order.
pub fn pulling_triangulation(points: &[IntVector], opts: NormalizeOptions) -> Result<Vec<OrderedSimplex>, RewriteError> {
    let cfg = PointConfig::new(points.to_vec()).map_err(|e| RewriteError::Framework(e.to_string()))?;
    let cells = normalize(&cfg, &pulling_family(), opts)?;
    cells
        .into_iter()
        .map(|c| c.to_simplex().ok_or_else(|| RewriteError::Framework(format!("terminal cell {c:?} is not a simplex"))))
        .collect()
}
