use itertools::Itertools;
use num_traits::Zero;

use super::hull::HullData;
use super::linalg::{dot, solve_affine, solve_square, Q};
use super::{RatPoint, RatPolytope};

/// Vertices of `P ∩ Q`, computed exactly; empty if they are disjoint.
pub fn polytope_intersection(p: &RatPolytope, q: &RatPolytope) -> Vec<RatPoint> {
    intersect_hulls(&p.hull_data(), &q.hull_data(), p.ambient_dim())
}

fn intersect_hulls(hp: &HullData, hq: &HullData, ambient: usize) -> Vec<RatPoint> {
    let (rows, rhs): (Vec<Vec<Q>>, Vec<Q>) = hp.equalities.iter().chain(&hq.equalities).cloned().unzip();
    let Some((origin, dirs)) = solve_affine(&rows, &rhs, ambient) else { return Vec::new() };
    let s = dirs.len();
    // inequalities in the parameters t of origin + sum t_l dirs_l
    let ineqs: Vec<(Vec<Q>, Q)> = hp
        .facets
        .iter()
        .chain(&hq.facets)
        .map(|f| {
            let a: Vec<Q> = dirs.iter().map(|d| dot(&f.normal, d)).collect();
            let b = &f.offset - dot(&f.normal, &origin);
            (a, b)
        })
        .collect();
    let point = |t: &[Q]| -> RatPoint {
        let mut x = origin.clone();
        for (tl, d) in t.iter().zip(&dirs) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += tl * di;
            }
        }
        x
    };
    let feasible = |t: &[Q]| ineqs.iter().all(|(a, b)| &dot(a, t) <= b);
    if s == 0 {
        return if feasible(&[]) { vec![origin] } else { Vec::new() };
    }
    let mut out: Vec<RatPoint> = Vec::new();
    for combo in (0..ineqs.len()).combinations(s) {
        let rows: Vec<Vec<Q>> = combo.iter().map(|&i| ineqs[i].0.clone()).collect();
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            continue;
        }
        let rhs: Vec<Q> = combo.iter().map(|&i| ineqs[i].1.clone()).collect();
        if let Some(t) = solve_square(&rows, &rhs) {
            if feasible(&t) {
                let x = point(&t);
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out
}

/// Whether `P ∩ Q` is empty or a common face of both.
pub fn meet_properly(p: &RatPolytope, q: &RatPolytope) -> bool {
    hulls_meet_properly(&p.hull_data(), &q.hull_data(), p.ambient_dim())
}

/// [`meet_properly`] on precomputed hulls.
pub fn hulls_meet_properly(hp: &HullData, hq: &HullData, ambient: usize) -> bool {
    if separated(hp, hq) || separated(hq, hp) {
        return true;
    }
    let meet = intersect_hulls(hp, hq, ambient);
    meet.is_empty() || (spans_face(hp, &meet) && spans_face(hq, &meet))
}

/// Whether every vertex of `hq` strictly violates one constraint of `hp`.
fn separated(hp: &HullData, hq: &HullData) -> bool {
    let outside = |n: &[Q], b: &Q| hq.vertices.iter().all(|x| &dot(n, x) > b);
    hp.facets.iter().any(|f| outside(&f.normal, &f.offset))
        || hp.equalities.iter().any(|(n, v)| outside(n, v) || hq.vertices.iter().all(|x| &dot(n, x) < v))
}

/// Whether `pts` (the vertex set of a subpolytope) is exactly the vertex set of
/// the smallest face of the hull containing it.
fn spans_face(h: &HullData, pts: &[RatPoint]) -> bool {
    let tight: Vec<&super::hull::Facet> =
        h.facets.iter().filter(|f| pts.iter().all(|x| dot(&f.normal, x) == f.offset)).collect();
    h.vertices
        .iter()
        .filter(|v| tight.iter().all(|f| dot(&f.normal, v) == f.offset))
        .all(|v| pts.contains(v))
}
