use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use unimod::geometry::{
    facets_of_polysimplex, in_cayley_position, meet_properly, minkowski_sum, polysimplex_facet_witness, polytope_intersection,
    OrderedSimplex, Polytope, RatPolytope,
};
use unimod::ivec;
use unimod::lattice::IntVector;

fn cube() -> Polytope {
    let mut pts = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                pts.push(ivec![x, y, z]);
            }
        }
    }
    Polytope::new(&pts).unwrap()
}

// Oracle: twice the area of a convex polygon by the shoelace formula, with
// vertices sorted by angle around the lexicographically smallest one.
fn shoelace_twice_area(pts: &[(i64, i64)]) -> i64 {
    let mut v = pts.to_vec();
    v.sort();
    let o = v[0];
    let cross = |a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut rest = v[1..].to_vec();
    rest.sort_by(|&a, &b| 0.cmp(&cross(a, b)));
    let mut ring = vec![o];
    ring.extend(rest);
    let mut s = 0;
    for i in 0..ring.len() {
        let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
        s += a.0 * b.1 - a.1 * b.0;
    }
    s.abs()
}

// Oracle: a point of a finite 2D set is extreme iff it is not in any triangle
// of the others and not strictly between two others on a line.
fn brute_extreme_2d(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut uniq = pts.to_vec();
    uniq.sort();
    uniq.dedup();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let in_tri = |p: (i64, i64), a, b, c| {
        let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
        let neg = d1 < 0 || d2 < 0 || d3 < 0;
        let pos = d1 > 0 || d2 > 0 || d3 > 0;
        !(neg && pos)
    };
    let on_seg = |p: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        cross(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
    };
    let mut out = Vec::new();
    'outer: for &p in &uniq {
        let others: Vec<_> = uniq.iter().copied().filter(|&q| q != p).collect();
        for i in 0..others.len() {
            for j in i + 1..others.len() {
                if on_seg(p, others[i], others[j]) {
                    continue 'outer;
                }
                for k in j + 1..others.len() {
                    if cross(others[i], others[j], others[k]) != 0 && in_tri(p, others[i], others[j], others[k]) {
                        continue 'outer;
                    }
                }
            }
        }
        out.push(p);
    }
    out
}

#[test]
fn cube_faces_and_volume() {
    let c = cube();
    assert_eq!(c.vertices().len(), 8);
    let faces = c.faces();
    let count = |d: usize| faces.iter().filter(|f| f.dim() == d).count();
    assert_eq!((count(0), count(1), count(2), count(3)), (8, 12, 6, 1));
    assert_eq!(c.normalized_volume(), BigInt::from(6));
}

#[test]
fn hull_drops_interior_and_edge_points() {
    let p = Polytope::new(&[ivec![0, 0], ivec![2, 0], ivec![0, 2], ivec![2, 2], ivec![1, 1], ivec![1, 0]]).unwrap();
    assert_eq!(p.vertices(), &[ivec![0, 0], ivec![0, 2], ivec![2, 0], ivec![2, 2]]);
    assert_eq!(p.normalized_volume(), BigInt::from(8));
}

#[test]
fn lower_dimensional_volume_is_measured_in_its_lattice() {
    // segment of lattice length 3 inside a plane
    let s = Polytope::new(&[ivec![0, 0, 0], ivec![3, 6, 0]]).unwrap();
    assert_eq!(s.dim(), 1);
    assert_eq!(s.normalized_volume(), BigInt::from(3));
    let t = Polytope::new(&[ivec![0, 0, 1], ivec![2, 0, 1], ivec![0, 2, 1]]).unwrap();
    assert_eq!(t.normalized_volume(), BigInt::from(4));
}

#[test]
fn reeve_tetrahedron_index() {
    let s = OrderedSimplex::lex(vec![ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 2]]).unwrap();
    assert_eq!(s.index(), BigInt::from(2));
}

#[test]
fn polysimplex_facets_and_witnesses() {
    let t = OrderedSimplex::lex(vec![ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 1, 0]]).unwrap();
    let s = OrderedSimplex::lex(vec![ivec![0, 0, 0], ivec![0, 0, 1]]).unwrap();
    let tuple = vec![t.clone(), s.clone()];
    let facets = facets_of_polysimplex(&tuple);
    assert_eq!(facets.len(), 5);
    let prism = minkowski_sum(&[t.polytope(), s.polytope()]).unwrap();
    assert_eq!(prism.facets().len(), 5);
    for (j, u, f) in &facets {
        let phi = polysimplex_facet_witness(&tuple, *j, *u);
        let face = prism.face_under(&phi);
        let summed = minkowski_sum(&f.iter().map(|x| x.polytope()).collect::<Vec<_>>()).unwrap();
        assert_eq!(face, summed);
    }
}

#[test]
fn cayley_position_of_prism_rows() {
    let a = Polytope::new(&[ivec![0, 0], ivec![1, 0]]).unwrap();
    let b = Polytope::new(&[ivec![0, 1], ivec![2, 1]]).unwrap();
    assert!(in_cayley_position(&[a.clone(), b]));
    let c = Polytope::new(&[ivec![0, 0], ivec![3, 0]]).unwrap();
    assert!(!in_cayley_position(&[a, c]));
}

#[test]
fn proper_and_improper_meets() {
    let t1 = Polytope::new(&[ivec![0, 0], ivec![1, 0], ivec![0, 1]]).unwrap().to_rat();
    let t2 = Polytope::new(&[ivec![1, 0], ivec![0, 1], ivec![1, 1]]).unwrap().to_rat();
    let t3 = Polytope::new(&[ivec![0, 0], ivec![1, 1], ivec![1, 0]]).unwrap().to_rat();
    let far = Polytope::new(&[ivec![5, 5], ivec![6, 5], ivec![5, 6]]).unwrap().to_rat();
    assert!(meet_properly(&t1, &t2));
    assert!(!meet_properly(&t1, &t3));
    assert!(meet_properly(&t1, &far));
    // T-junction: the edge of one triangle is half an edge of the other
    let big = Polytope::new(&[ivec![0, 0], ivec![2, 0], ivec![0, 2]]).unwrap().to_rat();
    let small = Polytope::new(&[ivec![0, 0], ivec![1, 0], ivec![0, -1]]).unwrap().to_rat();
    assert!(!meet_properly(&big, &small));
    let pts = polytope_intersection(&big, &small);
    assert_eq!(pts.len(), 2);
    // lower-dimensional cells in 3-space
    let e1 = Polytope::new(&[ivec![0, 0, 0], ivec![2, 0, 0]]).unwrap().to_rat();
    let e2 = Polytope::new(&[ivec![1, -1, 0], ivec![1, 1, 0]]).unwrap().to_rat();
    assert!(!meet_properly(&e1, &e2));
    let e3 = Polytope::new(&[ivec![1, -1, 1], ivec![1, 1, 1]]).unwrap().to_rat();
    assert!(meet_properly(&e1, &e3));
}

#[test]
fn rational_polytope_frame_volume() {
    let half = BigRational::new(1.into(), 2.into());
    let z = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let p = RatPolytope::new(&[vec![z.clone(), z.clone()], vec![half.clone(), z.clone()], vec![z.clone(), one.clone()], vec![half, one]]).unwrap();
    assert_eq!(p.frame_volume(), BigRational::from_integer(1.into()));
    assert!(!p.is_integral());
}

proptest! {
    #[test]
    fn hull_matches_brute_force_in_plane(pts in prop::collection::vec((-4i64..=4, -4i64..=4), 3..10)) {
        let ext = brute_extreme_2d(&pts);
        let vs: Vec<IntVector> = pts.iter().map(|&(x, y)| ivec![x, y]).collect();
        let p = Polytope::new(&vs).unwrap();
        let mut got: Vec<(i64, i64)> = p.vertices().iter().map(|v| (i64::try_from(&v[0]).unwrap(), i64::try_from(&v[1]).unwrap())).collect();
        got.sort();
        let mut want = ext.clone();
        want.sort();
        prop_assert_eq!(&got, &want);
        if p.dim() == 2 {
            prop_assert_eq!(p.normalized_volume(), BigInt::from(shoelace_twice_area(&ext)));
        }
    }

    #[test]
    fn faces_of_faces_are_faces(pts in prop::collection::vec((0i64..=3, 0i64..=3, 0i64..=3), 4..9)) {
        let vs: Vec<IntVector> = pts.iter().map(|&(x, y, z)| ivec![x, y, z]).collect();
        let p = Polytope::new(&vs).unwrap();
        let faces = p.faces();
        for f in &faces {
            for g in f.faces() {
                prop_assert!(faces.contains(&g));
            }
        }
        // triangulation volumes add up and are positive
        let vol = p.normalized_volume();
        prop_assert!(!vol.is_negative());
    }
}
