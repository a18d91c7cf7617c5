use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntVector;

/// Dense integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_vectors(vs: &[IntVector], cols: usize) -> Self {
        Self::from_rows(vs.iter().map(|v| v.0.clone()).collect(), cols)
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector(self.data[i].clone())
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += vi * &self.data[i][j];
            }
        }
        out
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.data[i].iter().all(Zero::is_zero)
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.data.swap(i, j);
    }

    /// row_i -= q * row_j
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (ri, rj) = two_rows(&mut self.data, i, j);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            *x -= q * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.data[i].iter_mut() {
            *x = -&*x;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.data.iter_mut() {
            r.swap(i, j);
        }
    }

    /// col_i -= q * col_j
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in self.data.iter_mut() {
            let t = q * &r[j];
            r[i] -= t;
        }
    }
}

fn two_rows<T>(data: &mut [Vec<T>], i: usize, j: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = data.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = data.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form: `u * m == h`, `u` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    /// Same shape as the input; the first `rank` rows are nonzero.
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Hnf {
    /// The nonzero rows.
    pub fn basis(&self) -> Vec<IntVector> {
        (0..self.rank).map(|i| self.h.row_vector(i)).collect()
    }
}

/// Hermite normal form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let best = (r..m.rows)
                .filter(|&i| !h.data[i][col].is_zero())
                .min_by(|&a, &b| h.data[a][col].abs().cmp(&h.data[b][col].abs()).then(a.cmp(&b)));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h.data[i][col].is_zero() {
                    continue;
                }
                let q = h.data[i][col].div_floor(&h.data[r][col]);
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
                if !h.data[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.data[r][col].is_zero() {
            continue;
        }
        if h.data[r][col].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.data[i][col].div_floor(&h.data[r][col]);
            h.sub_row(i, r, &q);
            u.sub_row(i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    Hnf { h, u, rank: r, pivots }
}

/// Smith normal form: `u * m * v == d` with `d` diagonal, nonnegative and
/// each nonzero entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.data[i][i].clone()).collect()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().take(self.rank).collect()
    }
}

/// Smith normal form. The pivot at each stage is the entry of smallest
/// absolute value, ties broken by lowest row and then lowest column.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut rank = 0;
    'outer: for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a.data[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a.data[i][j].abs() < a.data[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            if pi != t {
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a.data[i][t].is_zero() {
                    continue;
                }
                let q = a.data[i][t].div_floor(&a.data[t][t]);
                a.sub_row(i, t, &q);
                u.sub_row(i, t, &q);
                if !a.data[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.data[t][j].is_zero() {
                    continue;
                }
                let q = a.data[t][j].div_floor(&a.data[t][t]);
                a.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                // inverse of the column operation acts on rows of v_inv
                v_inv.sub_row(t, j, &(-&q));
                if !a.data[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = a.data[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.data[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t
                    a.sub_row(t, i, &BigInt::from(-1));
                    u.sub_row(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a.data[t][t].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    Snf { d: a, u, v, v_inv, rank }
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[IntVector]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.dim();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let (x, y) = (a[r][col].clone(), a[i][col].clone());
            let g = x.gcd(&y);
            let (fx, fy) = (&x / &g, &y / &g);
            for j in col..cols {
                let t = &a[i][j] * &fx - &a[r][j] * &fy;
                a[i][j] = t;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Integer basis of `{y : sum_j y_j * rows[j] == 0}` (left kernel).
pub fn left_kernel(rows: &[IntVector], cols: usize) -> Vec<IntVector> {
    let m = IntMatrix::from_vectors(rows, cols);
    let h = hnf(&m);
    (h.rank..m.rows).map(|i| h.u.row_vector(i)).collect()
}

/// Integer basis of `{y : rows[i] . y == 0 for all i}` (right kernel).
pub fn right_kernel(rows: &[IntVector], cols: usize) -> Vec<IntVector> {
    let t = IntMatrix::from_vectors(rows, cols).transpose();
    let h = hnf(&t);
    (h.rank..t.rows).map(|i| h.u.row_vector(i)).collect()
}
