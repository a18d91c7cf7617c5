use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use unimod::ivec;
use unimod::lattice::{hnf, lattice_distance, snf, IntLattice, IntMatrix, IntVector, QuotientGroup};

fn is_unimodular(m: &IntMatrix) -> bool {
    m.det().abs().is_one()
}

fn is_hnf(h: &IntMatrix, rank: usize) -> bool {
    let mut last_pivot: Option<usize> = None;
    for i in 0..h.nrows() {
        let row = h.row(i);
        let piv = row.iter().position(|x| !x.is_zero());
        match piv {
            None => {
                if i < rank {
                    return false;
                }
            }
            Some(p) => {
                if i >= rank || !row[p].is_positive() {
                    return false;
                }
                if let Some(lp) = last_pivot {
                    if p <= lp {
                        return false;
                    }
                }
                for k in 0..i {
                    let x = h.get(k, p);
                    if x.is_negative() || x >= &row[p] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

// Oracle: index of a full-rank sublattice of Z^d is |det| of any basis.
fn det_index(vs: &[IntVector]) -> BigInt {
    IntMatrix::from_vectors(vs, vs[0].dim()).det().abs()
}

// Oracle: count integer points of the half-open fundamental parallelepiped of
// a full-rank basis by brute force over its bounding box.
fn parallelepiped_points(basis: &[IntVector]) -> Vec<IntVector> {
    let d = basis.len();
    let mut lo = vec![BigInt::zero(); d];
    let mut hi = vec![BigInt::zero(); d];
    for mask in 0..(1u32 << d) {
        let mut corner = IntVector::zero(d);
        for (k, b) in basis.iter().enumerate() {
            if mask & (1 << k) != 0 {
                corner = &corner + b;
            }
        }
        for i in 0..d {
            lo[i] = lo[i].clone().min(corner[i].clone());
            hi[i] = hi[i].clone().max(corner[i].clone());
        }
    }
    let m = IntMatrix::from_vectors(basis, d);
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = lo.clone();
    loop {
        let p = IntVector(cur.clone());
        if let Some(c) = solve_rational(&m, &p) {
            if c.iter().all(|x| !x.is_negative() && x < &BigRational::one()) {
                out.push(p);
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= hi[i] {
                break;
            }
            cur[i] = lo[i].clone();
            i += 1;
        }
    }
}

// Cramer's rule for x * m = p.
fn solve_rational(m: &IntMatrix, p: &IntVector) -> Option<Vec<BigRational>> {
    let d = m.nrows();
    let det = m.det();
    if det.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    for k in 0..d {
        let mut rows: Vec<Vec<BigInt>> = (0..d).map(|i| m.row(i).to_vec()).collect();
        rows[k] = p.0.clone();
        let dk = IntMatrix::from_rows(rows, d).det();
        out.push(BigRational::new(dk, det.clone()));
    }
    Some(out)
}

#[test]
fn hnf_of_small_example() {
    let m = IntMatrix::from_i64s(&[&[2, 1], &[1, 2]]);
    let h = hnf(&m);
    assert_eq!(h.basis(), vec![ivec![1, 2], ivec![0, 3]]);
    assert_eq!(h.u.mul(&m), h.h);
}

#[test]
fn snf_of_small_example() {
    let m = IntMatrix::from_i64s(&[&[2, 1], &[1, 2]]);
    let s = snf(&m);
    assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(3)]);
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
}

#[test]
fn index_and_quotient_of_triangle_lattice() {
    let l = IntLattice::new(&[ivec![2, 1], ivec![1, 2]], 2);
    assert_eq!(l.index(), BigInt::from(3));
    let q = QuotientGroup::new(&IntLattice::full(2), &l).unwrap();
    assert_eq!(q.cyclic_factors(), vec![BigInt::from(3)]);
    for e in q.elements() {
        let v = q.section(&e).unwrap();
        assert_eq!(q.to_quotient(&v).unwrap(), e);
    }
    // (1,1) and (2,2) represent distinct nonzero classes; (3,0) is trivial
    let a = q.to_quotient(&ivec![1, 1]).unwrap();
    let b = q.to_quotient(&ivec![2, 2]).unwrap();
    assert_ne!(a, b);
    assert!(a.iter().all(|x| !x.is_zero()));
    assert!(q.to_quotient(&ivec![3, 0]).unwrap().iter().all(Zero::is_zero));
}

#[test]
fn saturation_of_lower_rank_lattice() {
    let l = IntLattice::new(&[ivec![2, 4, 6]], 3);
    assert_eq!(l.index(), BigInt::from(2));
    assert_eq!(l.saturation(), IntLattice::new(&[ivec![1, 2, 3]], 3));
    let l2 = IntLattice::new(&[ivec![1, 1, 0], ivec![1, -1, 0]], 3);
    assert_eq!(l2.index(), BigInt::from(2));
    assert_eq!(l2.saturation(), IntLattice::new(&[ivec![1, 0, 0], ivec![0, 1, 0]], 3));
}

#[test]
fn lattice_distance_to_edge() {
    let n = IntLattice::full(2);
    let face = [ivec![0, 0], ivec![4, 2]];
    let d = lattice_distance(&ivec![2, 2], &face, &n).unwrap();
    assert_eq!(d, BigRational::from_integer(BigInt::from(2)));
    let d = lattice_distance(&ivec![1, 2], &[ivec![0, 0], ivec![2, 1]], &n).unwrap();
    assert_eq!(d, BigRational::from_integer(BigInt::from(3)));
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
}

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
}

proptest! {
    #[test]
    fn hnf_is_normal_and_row_equivalent(data in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        let cols = data[0].len();
        let m = to_matrix(&data, cols);
        let h = hnf(&m);
        prop_assert!(is_unimodular(&h.u));
        prop_assert_eq!(h.u.mul(&m), h.h.clone());
        prop_assert!(is_hnf(&h.h, h.rank));
    }

    #[test]
    fn snf_is_diagonal_with_divisibility(data in small_matrix(3, 4)) {
        let m = to_matrix(&data, 4);
        let s = snf(&m);
        prop_assert!(is_unimodular(&s.u));
        prop_assert!(is_unimodular(&s.v));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(4));
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        for i in 0..3 {
            for j in 0..4 {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn index_matches_determinant_and_point_count(data in small_matrix(3, 3)) {
        let vs: Vec<IntVector> = data.iter().map(|r| IntVector::from_i64s(r)).collect();
        let det = det_index(&vs);
        prop_assume!(!det.is_zero());
        let l = IntLattice::new(&vs, 3);
        prop_assert_eq!(l.index(), det.clone());
        if det <= BigInt::from(60) {
            let pts = parallelepiped_points(&vs);
            prop_assert_eq!(BigInt::from(pts.len()), det.clone());
            let q = QuotientGroup::new(&IntLattice::full(3), &l).unwrap();
            prop_assert_eq!(q.order(), det);
            // every parallelepiped point is a distinct class
            let mut seen = std::collections::BTreeSet::new();
            for p in &pts {
                prop_assert!(seen.insert(q.to_quotient(p).unwrap()));
            }
        }
    }

    #[test]
    fn saturation_is_saturated_and_contains(data in small_matrix(2, 3)) {
        let vs: Vec<IntVector> = data.iter().map(|r| IntVector::from_i64s(r)).collect();
        let l = IntLattice::new(&vs, 3);
        let s = l.saturation();
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert!(s.index().is_one());
        prop_assert!(s.contains_lattice(&l));
    }
}
