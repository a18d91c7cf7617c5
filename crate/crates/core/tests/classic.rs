use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use unimod::classic::{dice, dicing_family, pulling_family, pulling_triangulation, Hyperplane, PointConfig, PullRule};
use unimod::complexes::CellComplex;
use unimod::geometry::{Polytope, RatPolytope};
use unimod::ivec;
use unimod::lattice::IntVector;
use unimod::rewrite::{check_facial_compatibility, check_local_confluence, normalize, HarnessOptions, NormalizeOptions, Strategy, SubdivisionRule};

fn det() -> NormalizeOptions {
    NormalizeOptions::default()
}

fn cube_points() -> Vec<IntVector> {
    let mut pts = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                pts.push(ivec![x, y, z]);
            }
        }
    }
    pts
}

#[test]
fn pulling_square_gives_two_triangles_on_a_diagonal() {
    let tri = pulling_triangulation(&[ivec![0, 0], ivec![1, 0], ivec![0, 1], ivec![1, 1]], det()).unwrap();
    assert_eq!(tri.len(), 2);
    // (0,0) is pulled, so both triangles contain it
    assert!(tri.iter().all(|s| s.vertices().contains(&ivec![0, 0])));
}

#[test]
fn pulling_cube_gives_six_unimodular_tetrahedra() {
    let tri = pulling_triangulation(&cube_points(), det()).unwrap();
    assert_eq!(tri.len(), 6);
    assert!(tri.iter().all(|s| s.dim() == 3 && s.index() == BigInt::one()));
    let total: BigInt = tri.iter().map(|s| s.polytope().normalized_volume()).sum();
    assert_eq!(total, BigInt::from(6));
}

#[test]
fn pulling_affinely_independent_set_is_trivial() {
    let cfg = PointConfig::new(vec![ivec![0, 0], ivec![3, 0], ivec![0, 5]]).unwrap();
    assert_eq!(PullRule::pivot(&cfg), None);
    assert_eq!(PullRule.apply(&cfg).unwrap(), vec![cfg.clone()]);
}

#[test]
fn pulling_collinear_points_drops_the_middle_one() {
    // the smallest point is not a covector and is pulled; the middle point
    // lies on no face missing it
    let tri = pulling_triangulation(&[ivec![0], ivec![1], ivec![2]], det()).unwrap();
    assert_eq!(tri.len(), 1);
    assert_eq!(tri[0].vertices(), &[ivec![0], ivec![2]]);
}

#[test]
fn pulling_uses_interior_points_when_pulled() {
    // (0,0) is a vertex; pulling it first leaves (1,1) in the far cells
    let tri = pulling_triangulation(&[ivec![0, 0], ivec![2, 0], ivec![0, 2], ivec![2, 2], ivec![1, 1]], det()).unwrap();
    let total: BigInt = tri.iter().map(|s| s.polytope().normalized_volume()).sum();
    assert_eq!(total, BigInt::from(8));
    let cx = CellComplex::closure(tri.iter().map(|s| PointConfig::new(s.vertices().to_vec()).unwrap())).unwrap();
    assert!(cx.len() > tri.len());
}

fn square(k: i64) -> RatPolytope {
    Polytope::new(&[ivec![0, 0], ivec![k, 0], ivec![0, k], ivec![k, k]]).unwrap().to_rat()
}

fn h(n: &[i64], b: i64) -> Hyperplane {
    Hyperplane::new(IntVector::from_i64s(n), BigInt::from(b)).unwrap()
}

#[test]
fn dicing_square_by_axes() {
    let p = square(2);
    assert_eq!(dice(&p, &[h(&[1, 0], 1)], det()).unwrap().len(), 2);
    let cells = dice(&p, &[h(&[1, 0], 1), h(&[0, 1], 1)], det()).unwrap();
    assert_eq!(cells.len(), 4);
    for c in &cells {
        assert_eq!(c.frame_volume(), BigRational::from_integer(2.into()));
        assert_eq!(c.vertices().len(), 4);
    }
    assert_eq!(dice(&p, &[h(&[1, 0], 7)], det()).unwrap(), vec![p.clone()]);
    // a hyperplane through a vertex only does not cut
    assert_eq!(dice(&p, &[h(&[1, 1], 0)], det()).unwrap(), vec![p]);
}

#[test]
fn hyperplane_normals_are_primitive() {
    let hp = Hyperplane::new(ivec![2, 4], BigInt::from(6)).unwrap();
    assert_eq!(hp.normal(), &ivec![1, 2]);
    assert_eq!(hp.offset(), &BigInt::from(3));
    assert!(Hyperplane::new(ivec![2, 4], BigInt::from(3)).is_none());
    assert!(Hyperplane::new(ivec![0, 0], BigInt::from(0)).is_none());
}

// Oracle: every region of a line arrangement inside the box is a convex
// polygon whose vertices are box corners, pairwise line crossings or
// line-edge crossings, so the centroids of triples of such points realize
// exactly the regions' sign vectors.
fn region_count(hs: &[(i64, i64, i64)], k: i64) -> usize {
    type R = BigRational;
    let r = |x: i64| R::from_integer(x.into());
    let mut lines: Vec<(R, R, R)> = hs.iter().map(|&(a, b, c)| (r(a), r(b), r(c))).collect();
    let edges = [(r(1), r(0), r(0)), (r(1), r(0), r(k)), (r(0), r(1), r(0)), (r(0), r(1), r(k))];
    lines.extend(edges.iter().cloned());
    let inside = |x: &R, y: &R| *x >= r(0) && *x <= r(k) && *y >= r(0) && *y <= r(k);
    let mut cand: Vec<(R, R)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = &lines[i];
            let (a2, b2, c2) = &lines[j];
            let d = a1 * b2 - a2 * b1;
            if d == r(0) {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / &d;
            let y = (a1 * c2 - a2 * c1) / &d;
            if inside(&x, &y) && !cand.contains(&(x.clone(), y.clone())) {
                cand.push((x, y));
            }
        }
    }
    let three = r(3);
    let mut signs = BTreeSet::new();
    for i in 0..cand.len() {
        for j in i + 1..cand.len() {
            for l in j + 1..cand.len() {
                let x = (&cand[i].0 + &cand[j].0 + &cand[l].0) / &three;
                let y = (&cand[i].1 + &cand[j].1 + &cand[l].1) / &three;
                if x == r(0) || y == r(0) || x == r(k) || y == r(k) {
                    continue;
                }
                let v: Vec<std::cmp::Ordering> = hs.iter().map(|&(a, b, c)| (r(a) * &x + r(b) * &y).cmp(&r(c))).collect();
                if v.iter().all(|s| *s != std::cmp::Ordering::Equal) {
                    signs.insert(v);
                }
            }
        }
    }
    signs.len()
}

#[test]
fn classic_families_pass_the_harness() {
    let opts = HarnessOptions::default();
    let pulls = vec![
        PointConfig::new(cube_points()).unwrap(),
        PointConfig::new(vec![ivec![0, 0], ivec![2, 0], ivec![0, 2], ivec![2, 2], ivec![1, 1]]).unwrap(),
        PointConfig::new(vec![ivec![0], ivec![1], ivec![2], ivec![3]]).unwrap(),
    ];
    let fam = pulling_family();
    let r = check_local_confluence(&fam, &pulls, opts);
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    let r = check_facial_compatibility(&fam, &pulls, opts);
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    assert_eq!(r.inconclusive, 0);

    let hs = [h(&[1, 0], 1), h(&[0, 1], 1), h(&[1, 1], 2)];
    let fam = dicing_family(&hs);
    let samples = vec![square(2), square(3)];
    let r = check_local_confluence(&fam, &samples, opts);
    assert!(r.failures.is_empty() && r.checked > 0, "{r:?}");
    let r = check_facial_compatibility(&fam, &samples, opts);
    assert!(r.failures.is_empty(), "{:?}", r.failures);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dicing_matches_region_oracle(lines in prop::collection::vec((-2i64..=2, -2i64..=2, -2i64..=6), 1..4)) {
        let lines: Vec<(i64, i64, i64)> = lines.into_iter().filter(|&(a, b, _)| (a, b) != (0, 0)).collect();
        let hs: Vec<Hyperplane> = lines.iter().filter_map(|&(a, b, c)| Hyperplane::new(ivec![a, b], BigInt::from(c))).collect();
        let lines: Vec<(i64, i64, i64)> = hs.iter().map(|h| {
            let n = h.normal();
            (i64::try_from(&n[0]).unwrap(), i64::try_from(&n[1]).unwrap(), i64::try_from(h.offset()).unwrap())
        }).collect();
        let p = square(3);
        let cells = dice(&p, &hs, det()).unwrap();
        prop_assert_eq!(cells.len(), region_count(&lines, 3));
        let random = normalize(&p, &dicing_family(&hs), NormalizeOptions { strategy: Strategy::Random(7), ..det() }).unwrap();
        prop_assert_eq!(random.into_iter().collect::<Vec<_>>(), cells);
    }

    #[test]
    fn pulling_cells_are_simplices_from_the_input(pts in prop::collection::vec((0i64..=3, 0i64..=3), 3..8)) {
        let pts: Vec<IntVector> = pts.iter().map(|&(x, y)| ivec![x, y]).collect();
        let tri = pulling_triangulation(&pts, det()).unwrap();
        let hull = Polytope::new(&pts).unwrap();
        let mut total = BigInt::from(0);
        for s in &tri {
            prop_assert!(s.vertices().iter().all(|v| pts.contains(v)));
            total += s.polytope().normalized_volume();
        }
        if hull.dim() == 2 {
            prop_assert_eq!(total, hull.normalized_volume());
        }
        let cfg = PointConfig::new(pts).unwrap();
        let random = normalize(&cfg, &pulling_family(), NormalizeOptions { strategy: Strategy::Random(3), ..det() }).unwrap();
        prop_assert_eq!(random.len(), tri.len());
    }
}
