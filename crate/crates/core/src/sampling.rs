//! Seeded random generators for cells and simplex tuples, used by the test
//! harnesses.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::boxpoints::{box_point_of, BoxOracle};
use crate::cayley::CayleyElt;
use crate::geometry::{is_independent, OrderedSimplex};
use crate::lattice::{IntVector, LatticeClass};
use crate::mixed::{default_c, delta_family, theta, DElt};

/// Bounds for random Cayley cells.
#[derive(Clone, Copy, Debug)]
pub struct CellShape {
    pub max_dim: usize,
    pub max_simplices: usize,
    pub max_entry: u64,
    pub max_points: usize,
    /// Coordinates of edge vectors are drawn from `[-coord, coord]`.
    pub coord: i64,
}

impl Default for CellShape {
    fn default() -> Self {
        CellShape { max_dim: 3, max_simplices: 2, max_entry: 3, max_points: 2, coord: 2 }
    }
}

fn random_vector<R: Rng>(rng: &mut R, d: usize, coord: i64) -> IntVector {
    IntVector((0..d).map(|_| BigInt::from(rng.gen_range(-coord..=coord))).collect())
}

/// Independent ordered simplices of the given dimensions with shuffled vertex
/// orders, each of index at most `max_index`.
pub fn random_tuple<R: Rng>(rng: &mut R, d: usize, dims: &[usize], coord: i64, max_index: u64) -> Vec<OrderedSimplex> {
    loop {
        let mut out = Vec::new();
        for &k in dims {
            let base = random_vector(rng, d, coord);
            let mut verts = vec![base.clone()];
            for _ in 0..k {
                verts.push(&base + &random_vector(rng, d, coord));
            }
            verts.shuffle(rng);
            match OrderedSimplex::new(verts) {
                Ok(s) if s.index() <= BigInt::from(max_index) => out.push(s),
                _ => break,
            }
        }
        if out.len() == dims.len() && is_independent(&out) {
            return out;
        }
    }
}

/// Dimensions of a random tuple: between one and `max_simplices` entries,
/// each of positive dimension, summing to at most `budget`.
pub fn random_dims<R: Rng>(rng: &mut R, budget: usize, max_simplices: usize) -> Vec<usize> {
    if budget == 0 || max_simplices == 0 {
        return Vec::new();
    }
    let n = rng.gen_range(1..=max_simplices.min(budget));
    let mut dims = vec![1; n];
    let mut left = budget - n;
    for d in dims.iter_mut() {
        let extra = rng.gen_range(0..=left);
        *d += extra;
        left -= extra;
    }
    dims
}

/// A random Cayley cell in standard form within the shape bounds.
pub fn random_cayley<R: Rng>(rng: &mut R, shape: CellShape) -> CayleyElt {
    loop {
        let d = rng.gen_range(1..=shape.max_dim);
        let m = rng.gen_range(1..=shape.max_points.min(d + 1));
        let dims = random_dims(rng, d + 1 - m, shape.max_simplices);
        let s = random_tuple(rng, d, &dims, shape.coord, u64::MAX);
        let p: Vec<IntVector> = (0..m).map(|_| random_vector(rng, d, shape.coord)).collect();
        let a: Vec<Vec<u64>> = (0..m).map(|_| (0..s.len()).map(|_| rng.gen_range(0..=shape.max_entry)).collect()).collect();
        if (0..s.len()).any(|j| a.iter().all(|r| r[j] == 0)) {
            continue;
        }
        if let Ok(e) = CayleyElt::new(p, s, a) {
            return e;
        }
    }
}

/// A random Cayley cell whose lattice has full rank and index above one,
/// with a nonzero class of `Z^d / L(A)` that is a box point of its simplices.
pub fn random_box_cell<R: Rng>(rng: &mut R, shape: CellShape) -> (CayleyElt, LatticeClass) {
    loop {
        let e = random_cayley(rng, shape);
        let l = e.lattice();
        if l.rank() != e.ambient_dim() || l.index() == BigInt::from(1) {
            continue;
        }
        let classes: Vec<LatticeClass> = LatticeClass::nonzero_classes(&l)
            .expect("full rank")
            .into_iter()
            .filter(|x| box_point_of(x, e.s()).is_some())
            .collect();
        if let Some(x) = classes.choose(rng) {
            return (e, x.clone());
        }
    }
}

/// A cell of the domain of a class, reached from `theta` of a random unit
/// pair by a random walk of at most `steps` moves. The class is usually one
/// of the simplex's own lattice, so the walk starts on a bullet cell, and
/// otherwise one of an unrelated lattice.
pub fn random_mixed_cell<R: Rng>(rng: &mut R, max_dim: usize, max_index: u64, steps: usize) -> (DElt, Option<LatticeClass>) {
    let d = rng.gen_range(1..=max_dim);
    let t = random_tuple(rng, d, &[d], 2, max_index).remove(0);
    let lattice = if rng.gen_bool(0.75) { t.lattice() } else { random_tuple(rng, d, &[d], 2, max_index).remove(0).lattice() };
    let classes = LatticeClass::nonzero_classes(&lattice).expect("full rank");
    let class = classes.choose(rng).cloned();
    let family = delta_family(BoxOracle::new(class.clone()));
    let mut e = theta(&[DElt::unit_pair(t)], default_c(d)).expect("unit pairs are terminal").remove(0);
    for _ in 0..steps {
        let moves = family.moves(&e).expect("rules apply on their domains");
        let Some((_, out)) = moves.choose(rng) else { break };
        e = out.choose(rng).expect("nonempty subdivision").clone();
    }
    (e, class)
}
