//! Certification of triangulations and mixed subdivisions, independent of the
//! rewriting machinery: reports list every violation found and never fail.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{maximal_cells, Cell};
use crate::geometry::hull::HullData;
use crate::geometry::linalg::{dot, Q};
use crate::geometry::{hulls_meet_properly, meet_properly, OrderedSimplex, Polytope, RatPolytope};
use crate::lattice::{IntLattice, IntMatrix, IntVector};

/// Kinds of defects a certificate can have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationClass {
    /// Not `d + 1` affinely independent points of the right dimension.
    Malformed,
    OutsidePolytope,
    /// Total volume below that of the polytope.
    Missing,
    /// Total volume above that of the polytope without a detected overlap.
    Excess,
    Duplicate,
    Overlap,
    NonUnimodular,
    WrongSupport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub class: ViolationClass,
    /// Offending cell positions in the input.
    pub cells: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked_cells: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn classes(&self) -> Vec<ViolationClass> {
        let mut out: Vec<ViolationClass> = self.violations.iter().map(|v| v.class).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.checked_cells = self.checked_cells.max(other.checked_cells);
        self.violations.extend(other.violations);
        self
    }

    fn push(&mut self, class: ViolationClass, cells: Vec<usize>, detail: impl Into<String>) {
        self.violations.push(Violation { class, cells, detail: detail.into() });
    }
}

fn det_of(base: &IntVector, rest: &[&IntVector], d: usize) -> BigInt {
    let rows: Vec<IntVector> = rest.iter().map(|v| *v - base).collect();
    IntMatrix::from_vectors(&rows, d).det()
}

fn fmt_cell(c: &[IntVector]) -> String {
    let parts: Vec<String> = c.iter().map(|v| format!("{v:?}")).collect();
    format!("[{}]", parts.join(" "))
}

/// Axis-aligned bounding box.
fn bbox(c: &[IntVector]) -> (IntVector, IntVector) {
    let d = c[0].dim();
    let lo = IntVector((0..d).map(|t| c.iter().map(|v| v[t].clone()).min().expect("nonempty")).collect());
    let hi = IntVector((0..d).map(|t| c.iter().map(|v| v[t].clone()).max().expect("nonempty")).collect());
    (lo, hi)
}

fn boxes_meet(a: &(IntVector, IntVector), b: &(IntVector, IntVector)) -> bool {
    (0..a.0.dim()).all(|t| a.0[t] <= b.1[t] && b.0[t] <= a.1[t])
}

fn on_boundary(h: &HullData, face: &[IntVector]) -> bool {
    h.facets.iter().any(|f| face.iter().all(|v| dot(&f.normal, &v.to_rational()) == f.offset))
}

/// Checks that `cells` triangulate `p`: every cell is a full-dimensional
/// integral simplex inside `p`, the normalized volumes add up to that of `p`,
/// and cells meet in common faces.
///
/// Cells meet properly once every facet of a cell is either shared with
/// exactly one other cell lying on the opposite side, or lies on the boundary
/// of `p`; together with the volume this certifies the triangulation. Where the
/// facet test fails, bounding-box candidates are checked pairwise exactly.
pub fn verify_triangulation(p: &Polytope, cells: &[Vec<IntVector>]) -> Report {
    let mut report = Report { checked_cells: cells.len(), violations: Vec::new() };
    let d = p.ambient_dim();
    if p.dim() != d {
        report.push(ViolationClass::Malformed, vec![], "the polytope is not full-dimensional");
        return report;
    }
    let hull = p.hull_data();

    let mut dets: Vec<Option<BigInt>> = vec![None; cells.len()];
    for (i, c) in cells.iter().enumerate() {
        if c.len() != d + 1 || c.iter().any(|v| v.dim() != d) {
            report.push(ViolationClass::Malformed, vec![i], format!("cell {} is not a {d}-simplex", fmt_cell(c)));
            continue;
        }
        let rest: Vec<&IntVector> = c[1..].iter().collect();
        let det = det_of(&c[0], &rest, d);
        if det.is_zero() {
            report.push(ViolationClass::Malformed, vec![i], format!("cell {} is degenerate", fmt_cell(c)));
            continue;
        }
        dets[i] = Some(det);
    }

    let mut inside: HashMap<&IntVector, bool> = HashMap::new();
    for c in cells.iter().filter(|c| c.iter().all(|v| v.dim() == d)) {
        for v in c {
            inside.entry(v).or_insert(false);
        }
    }
    let keys: Vec<&IntVector> = inside.keys().copied().collect();
    let flags: Vec<bool> = keys.par_iter().map(|v| hull.contains(&v.to_rational())).collect();
    for (v, ok) in keys.into_iter().zip(flags) {
        inside.insert(v, ok);
    }
    for (i, c) in cells.iter().enumerate() {
        if dets[i].is_some() && c.iter().any(|v| !inside[v]) {
            report.push(ViolationClass::OutsidePolytope, vec![i], format!("cell {} leaves the polytope", fmt_cell(c)));
        }
    }

    let good: Vec<usize> = (0..cells.len()).filter(|&i| dets[i].is_some()).collect();
    let mut by_key: HashMap<Vec<IntVector>, usize> = HashMap::new();
    let mut unique = Vec::new();
    for &i in &good {
        let mut key = cells[i].clone();
        key.sort();
        match by_key.get(&key) {
            Some(&j) => report.push(ViolationClass::Duplicate, vec![j, i], format!("cell {} appears twice", fmt_cell(&key))),
            None => {
                by_key.insert(key, i);
                unique.push(i);
            }
        }
    }

    let volume: BigInt = unique.iter().map(|&i| dets[i].as_ref().expect("checked").abs()).sum();
    let expected = p.normalized_volume();

    // facet -> (cell, side of the opposite vertex)
    let mut facets: HashMap<Vec<IntVector>, Vec<(usize, bool)>> = HashMap::new();
    for &i in &unique {
        let c = &cells[i];
        for skip in 0..=d {
            let mut f: Vec<IntVector> = c.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, v)| v.clone()).collect();
            f.sort();
            let rest: Vec<&IntVector> = f[1..].iter().chain(std::iter::once(&c[skip])).collect();
            let side = det_of(&f[0], &rest, d).is_positive();
            facets.entry(f).or_default().push((i, side));
        }
    }
    let mut suspects: Vec<usize> = Vec::new();
    let mut overlaps: Vec<(usize, usize)> = Vec::new();
    for (f, users) in &facets {
        let pos: Vec<usize> = users.iter().filter(|u| u.1).map(|u| u.0).collect();
        let neg: Vec<usize> = users.iter().filter(|u| !u.1).map(|u| u.0).collect();
        for side in [&pos, &neg] {
            for w in side.windows(2) {
                overlaps.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        if users.len() == 1 && !on_boundary(&hull, f) {
            suspects.push(users[0].0);
        }
    }

    if !suspects.is_empty() {
        // cells with an unmatched interior facet: find the cells they overlap
        let boxes: Vec<Option<(IntVector, IntVector)>> = (0..cells.len()).map(|i| dets[i].as_ref().map(|_| bbox(&cells[i]))).collect();
        suspects.sort();
        suspects.dedup();
        let rat = |i: usize| RatPolytope::new(&cells[i].iter().map(|v| v.to_rational()).collect::<Vec<_>>()).expect("nonempty");
        let found: Vec<(usize, usize)> = suspects
            .par_iter()
            .flat_map_iter(|&i| {
                let bi = boxes[i].clone().expect("valid cell");
                let pi = rat(i);
                unique
                    .iter()
                    .copied()
                    .filter(|&j| j != i && boxes_meet(&bi, boxes[j].as_ref().expect("valid cell")))
                    .filter(|&j| !meet_properly(&pi, &rat(j)))
                    .map(|j| (i.min(j), i.max(j)))
                    .collect::<Vec<_>>()
            })
            .collect();
        overlaps.extend(found);
    }
    overlaps.sort();
    overlaps.dedup();
    for (i, j) in &overlaps {
        report.push(ViolationClass::Overlap, vec![*i, *j], format!("cells {} and {} do not meet in a common face", fmt_cell(&cells[*i]), fmt_cell(&cells[*j])));
    }

    if volume < expected {
        report.push(ViolationClass::Missing, vec![], format!("cells cover volume {volume} of {expected}, a deficit of {}", &expected - &volume));
    } else if volume > expected && overlaps.is_empty() {
        report.push(ViolationClass::Excess, vec![], format!("cells have volume {volume}, above {expected}"));
    } else if volume == expected && overlaps.is_empty() && !suspects.is_empty() {
        report.push(ViolationClass::Missing, suspects.clone(), "interior facets without a neighbour");
    }
    report
}

/// Checks that every cell is a unimodular simplex.
pub fn verify_unimodular(cells: &[Vec<IntVector>]) -> Report {
    let mut report = Report { checked_cells: cells.len(), violations: Vec::new() };
    let indices: Vec<Option<BigInt>> = cells
        .par_iter()
        .map(|c| {
            let d = c.first()?.dim();
            let s = OrderedSimplex::new(c.clone()).ok()?;
            Some(IntLattice::new(&s.edges(), d).index())
        })
        .collect();
    for (i, (c, index)) in cells.iter().zip(indices).enumerate() {
        match index {
            None => report.push(ViolationClass::Malformed, vec![i], format!("cell {} is not a simplex", fmt_cell(c))),
            Some(k) if !k.is_one() => report.push(ViolationClass::NonUnimodular, vec![i], format!("cell {} has index {k}", fmt_cell(c))),
            Some(_) => {}
        }
    }
    report
}

/// Checks that the maximal cells meet in common faces and that the `n`-support
/// is `expected`: each component hull is the expected polytope and the summed
/// cells cover the expected Minkowski sum.
///
/// The check is geometric: cells that differ only by moving a simplex and
/// shifting the base points to compensate realize the same polytopes and are
/// accepted as the same face.
pub fn verify_mixed_support<C: Cell>(cells: &[C], expected: &[Polytope]) -> Report {
    let mut report = Report { checked_cells: cells.len(), violations: Vec::new() };
    let max = maximal_cells(cells.iter().cloned());
    let summed: Vec<RatPolytope> = max.par_iter().map(|c| c.summed()).collect();
    let hulls: Vec<HullData> = summed.par_iter().map(|s| s.hull_data()).collect();
    let mut total = expected[0].to_rat();
    for e in &expected[1..] {
        total = total.minkowski_sum(&e.to_rat());
    }
    let labels: Vec<String> = max.iter().map(|c| format!("{c:?}")).collect();
    check_overlaps(&mut report, &total.hull_data(), &summed, &hulls, &labels);
    // the components of the cells fill out the expected hulls, and the
    // summed cells, which do not overlap, have the volume of the expected sum
    let parts: Vec<Vec<RatPolytope>> = max.par_iter().map(|c| c.realize()).collect();
    if parts.iter().any(|p| p.len() != expected.len()) {
        report.push(ViolationClass::WrongSupport, vec![], format!("cells have {} components, expected {}", parts.first().map_or(0, |p| p.len()), expected.len()));
        return report;
    }
    for (k, want) in expected.iter().enumerate() {
        let h = want.hull_data();
        let mut seen: std::collections::HashSet<&Vec<Q>> = std::collections::HashSet::new();
        for p in &parts {
            for v in p[k].vertices() {
                if !h.contains(v) {
                    report.push(ViolationClass::WrongSupport, vec![], format!("component {k} reaches {v:?} outside {want:?}"));
                    return report;
                }
                seen.insert(v);
            }
        }
        if let Some(v) = want.to_rat().vertices().iter().find(|v| !seen.contains(v)) {
            report.push(ViolationClass::WrongSupport, vec![], format!("component {k} misses the vertex {v:?} of {want:?}"));
        }
    }
    let dim = total.dim();
    let covered: Q = summed.par_iter().filter(|s| s.dim() == dim).map(|s| s.frame_volume()).sum();
    if covered != total.frame_volume() {
        report.push(ViolationClass::WrongSupport, vec![], format!("summed cells cover volume {covered} of {}", total.frame_volume()));
    }
    report
}

/// Reports pairs of cells that do not meet in a common face.
fn check_overlaps(report: &mut Report, total: &HullData, summed: &[RatPolytope], hulls: &[HullData], labels: &[String]) {
    let ambient = total.vertices.first().map_or(0, Vec::len);
    // full-dimensional cells are matched across facets; lower-dimensional
    // ones, and cells with an unmatched facet, are checked pairwise
    let full: Vec<usize> = (0..hulls.len()).filter(|&i| hulls[i].dim == ambient).collect();
    let mut candidates: Vec<usize> = (0..hulls.len()).filter(|&i| hulls[i].dim != ambient).collect();
    if total.dim == ambient {
        let full_hulls: Vec<&HullData> = full.iter().map(|&i| &hulls[i]).collect();
        let (overlaps, suspects) = match_facets(total, &full_hulls);
        for (i, j) in overlaps {
            let (i, j) = (full[i], full[j]);
            report.push(ViolationClass::Overlap, vec![i, j], format!("cells {} and {} overlap across a shared facet", labels[i], labels[j]));
        }
        candidates.extend(suspects.into_iter().map(|i| full[i]));
    } else {
        candidates = (0..hulls.len()).collect();
    }
    let boxes: Vec<(Vec<Q>, Vec<Q>)> = summed.iter().map(rat_bbox).collect();
    let rough: Vec<(Vec<f64>, Vec<f64>)> = boxes.iter().map(float_box).collect();
    let mut bad: Vec<(usize, usize)> = candidates
        .par_iter()
        .flat_map_iter(|&i| (0..summed.len()).filter(move |&j| j != i).map(move |j| (i.min(j), i.max(j))))
        .filter(|&(i, j)| float_boxes_meet(&rough[i], &rough[j]) && rat_boxes_meet(&boxes[i], &boxes[j]))
        .filter(|&(i, j)| !hulls_meet_properly(&hulls[i], &hulls[j], ambient))
        .collect();
    bad.sort();
    bad.dedup();
    for (i, j) in bad {
        report.push(ViolationClass::Overlap, vec![i, j], format!("cells {} and {} do not meet in a common face", labels[i], labels[j]));
    }
}

/// Checks that polytopal `cells` subdivide `total`: every cell is
/// full-dimensional and inside `total`, cells meet in common faces, and the
/// volumes add up.
pub fn verify_subdivision(total: &RatPolytope, cells: &[RatPolytope]) -> Report {
    let mut report = Report { checked_cells: cells.len(), violations: Vec::new() };
    let th = total.hull_data();
    for (i, c) in cells.iter().enumerate() {
        if c.dim() != th.dim {
            report.push(ViolationClass::Malformed, vec![i], format!("cell {i} has dimension {}, expected {}", c.dim(), th.dim));
        } else if let Some(v) = c.vertices().iter().find(|v| !th.contains(v)) {
            report.push(ViolationClass::OutsidePolytope, vec![i], format!("cell {i} reaches {v:?}"));
        }
    }
    if !report.passed() {
        return report;
    }
    let hulls: Vec<HullData> = cells.par_iter().map(|c| c.hull_data()).collect();
    let labels: Vec<String> = (0..cells.len()).map(|i| i.to_string()).collect();
    check_overlaps(&mut report, &th, cells, &hulls, &labels);
    let covered: Q = cells.iter().map(|c| c.frame_volume()).sum();
    let want = total.frame_volume();
    if covered < want {
        report.push(ViolationClass::Missing, vec![], format!("cells cover volume {covered} of {want}"));
    } else if covered > want && report.passed() {
        report.push(ViolationClass::Excess, vec![], format!("cells cover volume {covered} of {want}"));
    }
    report
}

/// Pairs of full-dimensional cells sharing a facet from the same side, and
/// cells with a facet that is neither shared nor on the boundary of `total`.
fn match_facets(total: &HullData, hulls: &[&HullData]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut facets: HashMap<Vec<Vec<Q>>, Vec<(usize, bool)>> = HashMap::new();
    for (i, h) in hulls.iter().enumerate() {
        for f in &h.facets {
            let mut key: Vec<Vec<Q>> = f.vertices.iter().map(|&t| h.vertices[t].clone()).collect();
            key.sort();
            // outward normals of the two cells on a facet point in opposite directions
            let lead = f.normal.iter().find(|x| !x.is_zero()).expect("nonzero normal");
            facets.entry(key).or_default().push((i, lead.is_positive()));
        }
    }
    let mut overlaps = Vec::new();
    let mut suspects = Vec::new();
    for (key, users) in &facets {
        for side in [true, false] {
            let same: Vec<usize> = users.iter().filter(|u| u.1 == side).map(|u| u.0).collect();
            for w in same.windows(2) {
                overlaps.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        let boundary = total.facets.iter().any(|f| key.iter().all(|v| dot(&f.normal, v) == f.offset));
        if users.len() == 1 && !boundary {
            suspects.push(users[0].0);
        }
    }
    overlaps.sort();
    overlaps.dedup();
    suspects.sort();
    suspects.dedup();
    (overlaps, suspects)
}

fn rat_bbox(p: &RatPolytope) -> (Vec<Q>, Vec<Q>) {
    let vs = p.vertices();
    let d = vs[0].len();
    let lo = (0..d).map(|t| vs.iter().map(|v| v[t].clone()).min().expect("nonempty")).collect();
    let hi = (0..d).map(|t| vs.iter().map(|v| v[t].clone()).max().expect("nonempty")).collect();
    (lo, hi)
}

/// A box enclosing `b` in floating point, widened to absorb rounding.
fn float_box(b: &(Vec<Q>, Vec<Q>)) -> (Vec<f64>, Vec<f64>) {
    let widen = |x: &Q, sign: f64| {
        let f = x.to_f64().unwrap_or(sign * f64::INFINITY);
        f + sign * 1e-9 * (1.0 + f.abs())
    };
    (b.0.iter().map(|x| widen(x, -1.0)).collect(), b.1.iter().map(|x| widen(x, 1.0)).collect())
}

fn float_boxes_meet(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> bool {
    (0..a.0.len()).all(|t| a.0[t] <= b.1[t] && b.0[t] <= a.1[t])
}

fn rat_boxes_meet(a: &(Vec<Q>, Vec<Q>), b: &(Vec<Q>, Vec<Q>)) -> bool {
    (0..a.0.len()).all(|t| a.0[t] <= b.1[t] && b.0[t] <= a.1[t])
}

/// Vertex lists of simplices.
pub fn simplex_cells(cells: &[OrderedSimplex]) -> Vec<Vec<IntVector>> {
    cells.iter().map(|s| s.vertices().to_vec()).collect()
}
