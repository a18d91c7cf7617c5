//! Lattice polytopes, ordered simplices and simplex tuples.

pub mod hull;
mod intersect;
pub mod linalg;

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{rank, IntLattice, IntMatrix, IntVector};
use linalg::{q, Q};

pub use intersect::{hulls_meet_properly, meet_properly, polytope_intersection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("points of mixed dimension")]
    DimensionMismatch,
    #[error("vertices are not affinely independent")]
    NotAffinelyIndependent,
    #[error("simplices are not independent")]
    NotIndependent,
    #[error("vertex index {0} out of range")]
    BadIndex(usize),
}

/// Rational point.
pub type RatPoint = Vec<BigRational>;

fn rat_point(v: &IntVector) -> RatPoint {
    v.to_rational()
}

/// Lattice polytope given by its vertices, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<IntVector>,
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

impl Polytope {
    /// Convex hull of the points, keeping extreme points only.
    pub fn new(points: &[IntVector]) -> Result<Self, GeometryError> {
        let first = points.first().ok_or(GeometryError::Empty)?;
        let ambient = first.dim();
        if points.iter().any(|p| p.dim() != ambient) {
            return Err(GeometryError::DimensionMismatch);
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 || rank(&diffs(&pts)) == pts.len() - 1 {
            return Ok(Polytope { ambient, vertices: pts });
        }
        let rat: Vec<RatPoint> = pts.iter().map(rat_point).collect();
        let h = hull::hull(&rat, ambient);
        let vertices = h.vertices.iter().map(|v| IntVector(v.iter().map(|x| x.to_integer()).collect())).collect();
        Ok(Polytope { ambient, vertices })
    }

    /// Wraps points already known to be the sorted extreme points.
    pub(crate) fn from_sorted_vertices(vertices: Vec<IntVector>) -> Self {
        let ambient = vertices[0].dim();
        Polytope { ambient, vertices }
    }

    pub fn point(p: IntVector) -> Self {
        Polytope { ambient: p.dim(), vertices: vec![p] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        rank(&diffs(&self.vertices))
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim() + 1
    }

    pub fn hull_data(&self) -> hull::HullData {
        hull::hull(&self.vertices.iter().map(rat_point).collect::<Vec<_>>(), self.ambient)
    }

    /// All nonempty faces, the polytope itself included.
    pub fn faces(&self) -> Vec<Polytope> {
        if self.is_simplex() {
            return nonempty_subsets(self.vertices.len())
                .into_iter()
                .map(|s| Polytope::from_sorted_vertices(s.iter().map(|&i| self.vertices[i].clone()).collect()))
                .collect();
        }
        let h = self.hull_data();
        h.face_sets()
            .into_iter()
            .map(|s| Polytope::from_sorted_vertices(s.iter().map(|&i| self.vertices[i].clone()).collect()))
            .collect()
    }

    pub fn facets(&self) -> Vec<Polytope> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        self.faces().into_iter().filter(|f| f.dim() + 1 == d).collect()
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.hull_data().contains(&x.to_rational())
    }

    /// Lattice of integer points in the linear span of `P - P`.
    pub fn n_lattice(&self) -> IntLattice {
        IntLattice::new(&diffs(&self.vertices), self.ambient).saturation()
    }

    /// Volume normalized so that a unimodular simplex in `N(P)` has volume one.
    pub fn normalized_volume(&self) -> BigInt {
        fan_triangulation(self).iter().map(|s| IntLattice::new(&diffs(s), self.ambient).index()).sum()
    }

    pub fn translate(&self, v: &IntVector) -> Polytope {
        Polytope { ambient: self.ambient, vertices: self.vertices.iter().map(|x| x + v).collect() }
    }

    pub fn dilate(&self, k: &BigInt) -> Polytope {
        assert!(!k.is_negative());
        if k.is_zero() {
            return Polytope::point(IntVector::zero(self.ambient));
        }
        Polytope { ambient: self.ambient, vertices: self.vertices.iter().map(|x| x.scale(k)).collect() }
    }

    pub fn to_rat(&self) -> RatPolytope {
        RatPolytope { ambient: self.ambient, vertices: self.vertices.iter().map(rat_point).collect() }
    }

    /// Face of points maximizing the functional.
    pub fn face_under(&self, phi: &[Q]) -> Polytope {
        let vals: Vec<Q> = self.vertices.iter().map(|v| linalg::dot(phi, &v.to_rational())).collect();
        let m = vals.iter().max().expect("nonempty").clone();
        Polytope::from_sorted_vertices(self.vertices.iter().zip(&vals).filter(|(_, x)| **x == m).map(|(v, _)| v.clone()).collect())
    }

    pub fn is_face_of(&self, other: &Polytope) -> bool {
        other.faces().contains(self)
    }
}

fn diffs(pts: &[IntVector]) -> Vec<IntVector> {
    match pts.split_first() {
        None => Vec::new(),
        Some((p0, rest)) => rest.iter().map(|p| p - p0).collect(),
    }
}

pub(crate) fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << n)).map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect()).collect()
}

/// Triangulation of `p` by coning from its first vertex over the facets that
/// miss it, recursively.
pub fn fan_triangulation(p: &Polytope) -> Vec<Vec<IntVector>> {
    if p.is_simplex() {
        return vec![p.vertices.clone()];
    }
    let v = &p.vertices[0];
    let mut out = Vec::new();
    for f in p.facets() {
        if f.vertices.contains(v) {
            continue;
        }
        for mut s in fan_triangulation(&f) {
            s.insert(0, v.clone());
            out.push(s);
        }
    }
    out
}

/// Minkowski sum of polytopes.
pub fn minkowski_sum(ps: &[Polytope]) -> Result<Polytope, GeometryError> {
    let first = ps.first().ok_or(GeometryError::Empty)?;
    let mut acc = first.clone();
    for p in &ps[1..] {
        let pts: Vec<IntVector> = acc.vertices.iter().cartesian_product(&p.vertices).map(|(a, b)| a + b).collect();
        acc = Polytope::new(&pts)?;
    }
    Ok(acc)
}

/// Whether the polytopes are in Cayley position: the dimension of the hull of
/// their union is the dimension of the sum of their direction spaces plus
/// their number minus one.
pub fn in_cayley_position(ps: &[Polytope]) -> bool {
    if ps.is_empty() {
        return true;
    }
    let all: Vec<IntVector> = ps.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
    let dim_union = rank(&diffs(&all));
    let mut dirs = Vec::new();
    for p in ps {
        dirs.extend(diffs(&p.vertices));
    }
    let dim_dirs = if dirs.is_empty() { 0 } else { rank(&dirs) };
    dim_union == dim_dirs + ps.len() - 1
}

/// Polytope with rational vertices, used where cuts create non-lattice points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPolytope {
    ambient: usize,
    vertices: Vec<RatPoint>,
}

impl fmt::Debug for RatPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({})", v.iter().map(|x| x.to_string()).join(","))?;
        }
        write!(f, "]")
    }
}

impl RatPolytope {
    pub fn new(points: &[RatPoint]) -> Result<Self, GeometryError> {
        let first = points.first().ok_or(GeometryError::Empty)?;
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(GeometryError::DimensionMismatch);
        }
        let h = hull::hull(points, ambient);
        Ok(RatPolytope { ambient, vertices: h.vertices })
    }

    pub(crate) fn from_sorted_vertices(vertices: Vec<RatPoint>) -> Self {
        RatPolytope { ambient: vertices[0].len(), vertices }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn hull_data(&self) -> hull::HullData {
        hull::hull(&self.vertices, self.ambient)
    }

    pub fn dim(&self) -> usize {
        let p0 = &self.vertices[0];
        let d: Vec<Vec<Q>> = self.vertices[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        linalg::rank(&d)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_integer()))
    }

    pub fn to_integral(&self) -> Option<Polytope> {
        self.is_integral().then(|| {
            Polytope::from_sorted_vertices(self.vertices.iter().map(|v| IntVector(v.iter().map(|x| x.to_integer()).collect())).collect())
        })
    }

    pub fn faces(&self) -> Vec<RatPolytope> {
        let h = self.hull_data();
        h.face_sets()
            .into_iter()
            .map(|s| RatPolytope::from_sorted_vertices(s.iter().map(|&i| self.vertices[i].clone()).collect()))
            .collect()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.hull_data().contains(x)
    }

    /// Volume in the coordinate frame of the affine hull, scaled by `dim!`.
    ///
    /// Cells spanning the same affine subspace share a frame, so these values
    /// are comparable between them.
    pub fn frame_volume(&self) -> Q {
        let h = self.hull_data();
        let k = h.dim;
        if k == 0 {
            return Q::from_integer(1.into());
        }
        let frame = h.frame.clone();
        let mut total = Q::zero();
        for s in rat_fan(self) {
            let rows: Vec<Vec<Q>> = s[1..].iter().map(|p| frame.iter().map(|&c| &p[c] - &s[0][c]).collect()).collect();
            total += rat_det(rows).abs();
        }
        total
    }

    pub fn minkowski_sum(&self, other: &RatPolytope) -> RatPolytope {
        let pts: Vec<RatPoint> =
            self.vertices.iter().cartesian_product(&other.vertices).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        RatPolytope::new(&pts).expect("nonempty")
    }
}

fn rat_fan(p: &RatPolytope) -> Vec<Vec<RatPoint>> {
    let d = p.dim();
    if p.vertices.len() == d + 1 {
        return vec![p.vertices.clone()];
    }
    let v = &p.vertices[0];
    let mut out = Vec::new();
    for f in p.faces() {
        if f.dim() + 1 != d || f.vertices.contains(v) {
            continue;
        }
        for mut s in rat_fan(&f) {
            s.insert(0, v.clone());
            out.push(s);
        }
    }
    out
}

fn rat_det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut det = Q::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Simplex with a distinguished order on its vertices.
///
/// Faces inherit the induced order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedSimplex {
    vertices: Vec<IntVector>,
}

impl fmt::Debug for OrderedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, ">")
    }
}

impl OrderedSimplex {
    pub fn new(vertices: Vec<IntVector>) -> Result<Self, GeometryError> {
        let first = vertices.first().ok_or(GeometryError::Empty)?;
        let d = first.dim();
        if vertices.iter().any(|v| v.dim() != d) {
            return Err(GeometryError::DimensionMismatch);
        }
        if rank(&diffs(&vertices)) + 1 != vertices.len() {
            return Err(GeometryError::NotAffinelyIndependent);
        }
        Ok(OrderedSimplex { vertices })
    }

    /// Simplex on the points in lexicographic order.
    pub fn lex(mut vertices: Vec<IntVector>) -> Result<Self, GeometryError> {
        vertices.sort();
        Self::new(vertices)
    }

    pub fn point(p: IntVector) -> Self {
        OrderedSimplex { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn first(&self) -> &IntVector {
        &self.vertices[0]
    }

    /// Edge vectors from the first vertex.
    pub fn edges(&self) -> Vec<IntVector> {
        diffs(&self.vertices)
    }

    /// Facet opposite the vertex at position `i`, in induced order.
    pub fn facet_opposite(&self, i: usize) -> OrderedSimplex {
        assert!(self.vertices.len() > 1, "a point has no facets");
        let mut v = self.vertices.clone();
        v.remove(i);
        OrderedSimplex { vertices: v }
    }

    /// Face on the given vertex positions (sorted), in induced order.
    pub fn face(&self, positions: &[usize]) -> OrderedSimplex {
        OrderedSimplex { vertices: positions.iter().map(|&i| self.vertices[i].clone()).collect() }
    }

    /// All nonempty faces, the simplex itself included.
    pub fn faces(&self) -> Vec<OrderedSimplex> {
        nonempty_subsets(self.vertices.len()).iter().map(|s| self.face(s)).collect()
    }

    pub fn is_face_of(&self, other: &OrderedSimplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.contains(v))
    }

    /// `L(S)`: the lattice generated by the edge vectors.
    pub fn lattice(&self) -> IntLattice {
        IntLattice::new(&self.edges(), self.ambient_dim())
    }

    /// `N(S)`: integer points in the linear span of the edge vectors.
    pub fn n_lattice(&self) -> IntLattice {
        self.lattice().saturation()
    }

    pub fn index(&self) -> BigInt {
        self.lattice().index()
    }

    pub fn translate(&self, v: &IntVector) -> OrderedSimplex {
        OrderedSimplex { vertices: self.vertices.iter().map(|x| x + v).collect() }
    }

    pub fn polytope(&self) -> Polytope {
        let mut v = self.vertices.clone();
        v.sort();
        Polytope::from_sorted_vertices(v)
    }
}

/// Whether the simplices are independent: their direction spaces form a
/// direct sum.
pub fn is_independent(simplices: &[OrderedSimplex]) -> bool {
    let edges: Vec<IntVector> = simplices.iter().flat_map(|s| s.edges()).collect();
    let total: usize = simplices.iter().map(|s| s.dim()).sum();
    edges.is_empty() || rank(&edges) == total
}

/// `L(S)` for a tuple: the sum of the simplex lattices.
pub fn tuple_lattice(simplices: &[OrderedSimplex], ambient: usize) -> IntLattice {
    let edges: Vec<IntVector> = simplices.iter().flat_map(|s| s.edges()).collect();
    IntLattice::new(&edges, ambient)
}

/// `N(S)` for a tuple: the sum of the saturated simplex lattices.
pub fn tuple_n_lattice(simplices: &[OrderedSimplex], ambient: usize) -> IntLattice {
    let gens: Vec<IntVector> = simplices.iter().flat_map(|s| s.n_lattice().basis().to_vec()).collect();
    IntLattice::new(&gens, ambient)
}

/// All face tuples `S' ≤ S` (entrywise nonempty faces), in a fixed order
/// starting from `S` itself and ending with vertex tuples.
pub fn tuple_faces(simplices: &[OrderedSimplex]) -> Vec<Vec<OrderedSimplex>> {
    let per: Vec<Vec<OrderedSimplex>> = simplices.iter().map(|s| {
        let mut f = s.faces();
        f.sort_by_key(|x| std::cmp::Reverse(x.vertices.len()));
        f
    }).collect();
    let mut out: Vec<Vec<OrderedSimplex>> = if per.is_empty() { vec![Vec::new()] } else { per.into_iter().multi_cartesian_product().collect() };
    out.sort_by_key(|t| std::cmp::Reverse(t.iter().map(|s| s.dim()).sum::<usize>()));
    out
}

/// A face tuple with a functional exhibiting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTuple {
    pub faces: Vec<Polytope>,
    pub witness: Vec<BigRational>,
}

/// The tuple of faces maximizing `phi` on each entry.
pub fn face_tuple_under(phi: &[Q], tuple: &[Polytope]) -> FaceTuple {
    FaceTuple { faces: tuple.iter().map(|p| p.face_under(phi)).collect(), witness: phi.to_vec() }
}

/// Facets of the polysimplex `S_1 + ... + S_n` for independent simplices: one
/// per choice of an entry `j` and a vertex of `S_j`, replacing `S_j` by the
/// facet opposite that vertex.
///
/// Returned as `(j, vertex position, tuple)`, ordered by `j` then position.
pub fn facets_of_polysimplex(simplices: &[OrderedSimplex]) -> Vec<(usize, usize, Vec<OrderedSimplex>)> {
    let mut out = Vec::new();
    for (j, s) in simplices.iter().enumerate() {
        if s.is_point() {
            continue;
        }
        for u in 0..s.vertices.len() {
            let mut t = simplices.to_vec();
            t[j] = s.facet_opposite(u);
            out.push((j, u, t));
        }
    }
    out
}

/// A functional whose maximal face on `S_1 + ... + S_n` is the facet that
/// replaces `S_j` by its facet opposite vertex `u`.
pub fn polysimplex_facet_witness(simplices: &[OrderedSimplex], j: usize, u: usize) -> Vec<Q> {
    let d = simplices[0].ambient_dim();
    let mut rows: Vec<IntVector> = Vec::new();
    for (l, s) in simplices.iter().enumerate() {
        if l != j {
            rows.extend(s.edges());
        }
    }
    let facet = simplices[j].facet_opposite(u);
    rows.extend(facet.edges());
    let kernel = crate::lattice::right_kernel(&rows, d);
    let apex = &simplices[j].vertices[u];
    let base = facet.first();
    let dir = apex - base;
    let phi = kernel.into_iter().find(|k| !k.dot(&dir).is_zero()).expect("independent simplices");
    let phi = if phi.dot(&dir).is_positive() { -&phi } else { phi };
    phi.0.iter().map(q).collect()
}

/// Determinant of edge vectors of a full-dimensional simplex.
pub fn simplex_det(vertices: &[IntVector]) -> BigInt {
    let d = vertices[0].dim();
    IntMatrix::from_vectors(&diffs(vertices), d).det()
}
