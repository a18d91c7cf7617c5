//! Small exact rational linear algebra used by the hull and intersection code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(x: &BigInt) -> Q {
    Q::from_integer(x.clone())
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the affine system `rows[i] . x == rhs[i]`.
///
/// Returns a particular solution and a basis of the solution directions, or
/// `None` if the system is inconsistent.
pub fn solve_affine(rows: &[Vec<Q>], rhs: &[Q], n: usize) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Q::one() / &a[r][col];
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut dirs = Vec::new();
    for &f in &free {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -a[i][f].clone();
        }
        dirs.push(v);
    }
    Some((x, dirs))
}

/// Unique solution of a square system, if it is nonsingular.
pub fn solve_square(rows: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = rows.len();
    let (x, dirs) = solve_affine(rows, rhs, n)?;
    dirs.is_empty().then_some(x)
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily.
pub fn independent_rows(rows: &[Vec<Q>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Q>)> = Vec::new();
    let mut out = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (piv, b) in &basis {
            if !v[*piv].is_zero() {
                let f = &v[*piv] / &b[*piv];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
            basis.push((piv, v));
            out.push(idx);
        }
    }
    out
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    independent_rows(rows).len()
}
