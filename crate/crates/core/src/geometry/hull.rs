//! Exact convex hulls of small point sets.
//!
//! Points are projected onto coordinates spanning their affine hull and scaled
//! to integers; facets are found by testing every hyperplane spanned by
//! affinely independent points. This is quadratic-to-quartic in the number of
//! points, which is fine for the cells this crate handles.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{independent_rows, solve_affine, Q};
use crate::lattice::IntMatrix;

/// A facet inequality `normal . x <= offset`, valid on the affine hull.
#[derive(Clone, Debug)]
pub struct Facet {
    /// Positions in the vertex list of the vertices on this facet.
    pub vertices: Vec<usize>,
    pub normal: Vec<Q>,
    pub offset: Q,
}

#[derive(Clone, Debug)]
pub struct HullData {
    pub dim: usize,
    /// Distinct extreme points, sorted.
    pub vertices: Vec<Vec<Q>>,
    pub facets: Vec<Facet>,
    /// Equations `normal . x == value` cutting out the affine hull.
    pub equalities: Vec<(Vec<Q>, Q)>,
    /// Coordinates onto which the affine hull projects isomorphically.
    pub frame: Vec<usize>,
}

impl HullData {
    pub fn contains(&self, x: &[Q]) -> bool {
        self.equalities.iter().all(|(n, v)| &super::linalg::dot(n, x) == v)
            && self.facets.iter().all(|f| super::linalg::dot(&f.normal, x) <= f.offset)
    }

    /// All nonempty faces as sorted vertex-position lists, the polytope included.
    pub fn face_sets(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(all);
        let facets: Vec<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
        let mut queue: Vec<Vec<usize>> = Vec::new();
        for f in &facets {
            if seen.insert(f.clone()) {
                queue.push(f.clone());
            }
        }
        while let Some(face) = queue.pop() {
            for f in &facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.binary_search(i).is_ok()).collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Coordinates `frame` such that projection onto them is injective on the
/// linear span of `dirs`.
pub fn coordinate_frame(dirs: &[Vec<Q>], ambient: usize) -> Vec<usize> {
    let cols: Vec<Vec<Q>> = (0..ambient).map(|c| dirs.iter().map(|d| d[c].clone()).collect()).collect();
    if dirs.is_empty() {
        return Vec::new();
    }
    independent_rows(&cols)
}

pub fn hull(points: &[Vec<Q>], ambient: usize) -> HullData {
    let mut pts: Vec<Vec<Q>> = points.to_vec();
    pts.sort();
    pts.dedup();
    assert!(!pts.is_empty(), "hull of empty point set");
    let p0 = pts[0].clone();
    let dirs: Vec<Vec<Q>> = pts[1..].iter().map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect()).collect();
    let basis_idx = independent_rows(&dirs);
    let k = basis_idx.len();
    let basis: Vec<Vec<Q>> = basis_idx.iter().map(|&i| dirs[i].clone()).collect();
    let frame = coordinate_frame(&basis, ambient);
    let equalities = affine_equalities(&basis, &p0, ambient);
    if k == 0 {
        return HullData { dim: 0, vertices: pts, facets: Vec::new(), equalities, frame };
    }
    // project and scale to integers
    let denom = pts.iter().flat_map(|p| frame.iter().map(move |&c| p[c].denom().clone())).fold(BigInt::one(), |a, b| a.lcm(&b));
    let proj: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|p| frame.iter().map(|&c| (&p[c] * Q::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let raw = integer_facets(&proj, k);
    let on_facets: Vec<Vec<usize>> = (0..pts.len()).map(|i| (0..raw.len()).filter(|&f| raw[f].2.contains(&i)).collect()).collect();
    let is_vertex: Vec<bool> = (0..pts.len())
        .map(|i| {
            let normals: Vec<Vec<Q>> = on_facets[i].iter().map(|&f| raw[f].0.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
            independent_rows(&normals).len() == k
        })
        .collect();
    let mut position = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    for i in 0..pts.len() {
        if is_vertex[i] {
            position[i] = vertices.len();
            vertices.push(pts[i].clone());
        }
    }
    let facets = raw
        .into_iter()
        .map(|(n, b, members)| {
            let mut normal = vec![Q::zero(); ambient];
            for (l, &c) in frame.iter().enumerate() {
                normal[c] = Q::from_integer(&n[l] * &denom);
            }
            let verts: Vec<usize> = members.iter().filter(|&&i| is_vertex[i]).map(|&i| position[i]).collect();
            Facet { vertices: verts, normal, offset: Q::from_integer(b) }
        })
        .collect();
    HullData { dim: k, vertices, facets, equalities, frame }
}

fn affine_equalities(basis: &[Vec<Q>], p0: &[Q], ambient: usize) -> Vec<(Vec<Q>, Q)> {
    let zeros = vec![Q::zero(); basis.len()];
    let (_, kernel) = solve_affine(basis, &zeros, ambient).expect("homogeneous system");
    kernel
        .into_iter()
        .map(|n| {
            let v = super::linalg::dot(&n, p0);
            (n, v)
        })
        .collect()
}

/// Facets of the integer point set `pts` spanning `Z^k`, as
/// `(outer normal, offset, members)`.
fn integer_facets(pts: &[Vec<BigInt>], k: usize) -> Vec<(Vec<BigInt>, BigInt, Vec<usize>)> {
    let n = pts.len();
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        if let Some(normal) = hyperplane_normal(pts, &combo, k) {
            let b: BigInt = dot_int(&normal, &pts[combo[0]]);
            let vals: Vec<BigInt> = pts.iter().map(|p| dot_int(&normal, p) - &b).collect();
            let below = vals.iter().all(|v| !v.is_positive());
            let above = vals.iter().all(|v| !v.is_negative());
            if below || above {
                let members: Vec<usize> = (0..n).filter(|&i| vals[i].is_zero()).collect();
                if seen.insert(members.clone()) {
                    let (normal, b) = if below { (normal, b) } else { (normal.iter().map(|x| -x).collect(), -b) };
                    out.push((normal, b, members));
                }
            }
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] < n - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normal of the hyperplane through the given `k` points of `Z^k` by
/// cofactor expansion; `None` if they are affinely dependent.
fn hyperplane_normal(pts: &[Vec<BigInt>], combo: &[usize], k: usize) -> Option<Vec<BigInt>> {
    let base = &pts[combo[0]];
    let diffs: Vec<Vec<BigInt>> = combo[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let mut normal = Vec::with_capacity(k);
    for j in 0..k {
        let minor: Vec<Vec<BigInt>> = diffs.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let det = IntMatrix::from_rows(minor, k - 1).det();
        normal.push(if j % 2 == 0 { det } else { -det });
    }
    if normal.iter().all(Zero::is_zero) {
        return None;
    }
    let g = normal.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    Some(normal.into_iter().map(|x| x / &g).collect())
}
