//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use unimod::geometry::OrderedSimplex;

type R = Ratio<i64>;

fn to_i64(v: &unimod::lattice::IntVector) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("small coordinates")).collect()
}

/// Coefficients of `y` in the basis `cols`, by Gaussian elimination over
/// `Ratio<i64>`; `None` if `y` is outside their span.
pub fn coefficients(cols: &[Vec<i64>], y: &[i64]) -> Option<Vec<R>> {
    let d = y.len();
    let n = cols.len();
    let mut m: Vec<Vec<R>> = (0..d)
        .map(|t| {
            let mut row: Vec<R> = cols.iter().map(|c| R::from_integer(c[t])).collect();
            row.push(R::from_integer(y[t]));
            row
        })
        .collect();
    let mut r = 0;
    let mut piv = Vec::new();
    for col in 0..n {
        let Some(p) = (r..d).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = R::from_integer(1) / m[r][col];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..d {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col];
                for j in 0..=n {
                    let t = f * m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        piv.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![R::zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = m[i][n];
    }
    Some(x)
}

/// Integer points of the half-open parallelepiped spanned by the edges of
/// `t`, with the sum of their coefficients.
fn simplex_box(t: &OrderedSimplex) -> Vec<(Vec<i64>, R)> {
    let d = t.ambient_dim();
    let cols: Vec<Vec<i64>> = t.edges().iter().map(to_i64).collect();
    let lo: Vec<i64> = (0..d).map(|k| cols.iter().map(|c| c[k].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..d).map(|k| cols.iter().map(|c| c[k].max(0)).sum()).collect();
    let mut out = Vec::new();
    let mut y = lo.clone();
    loop {
        if let Some(x) = coefficients(&cols, &y) {
            if x.iter().all(|v| !v.is_negative() && *v < R::from_integer(1)) {
                out.push((y.clone(), x.iter().fold(R::zero(), |a, b| a + b)));
            }
        }
        let mut k = 0;
        while k < d {
            y[k] += 1;
            if y[k] <= hi[k] {
                break;
            }
            y[k] = lo[k];
            k += 1;
        }
        if k == d {
            break;
        }
    }
    out
}

/// Box-point data of a tuple by brute force: sums of integer points of the
/// half-open edge parallelepipeds of the entries, with the tuple
/// `c_j = ceil(sum of coefficients on S_j)`. The origin is included.
pub fn brute_box_points(s: &[OrderedSimplex]) -> Vec<(Vec<i64>, Vec<u64>)> {
    let d = s[0].ambient_dim();
    let mut acc: Vec<(Vec<i64>, Vec<u64>)> = vec![(vec![0; d], Vec::new())];
    for t in s {
        let pts = simplex_box(t);
        let mut next = Vec::new();
        for (y, c) in &acc {
            for (z, sum) in &pts {
                let w: Vec<i64> = y.iter().zip(z).map(|(a, b)| a + b).collect();
                let mut c2 = c.clone();
                c2.push(sum.ceil().to_integer() as u64);
                next.push((w, c2));
            }
        }
        acc = next;
    }
    acc.sort();
    acc
}
