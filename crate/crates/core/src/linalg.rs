//! Dense exact linear algebra over the rationals.
//!
//! Everything downstream (cohomology ranks, Lefschetz decompositions, exact
//! sequence checks) reduces to row echelon computations on small dense
//! matrices, so a plain Gauss-Jordan kit over `BigRational` is all we need.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Column-major would buy nothing here; rows are `Vec<Q>` and the matrix owns them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Mat::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let sub = &factor * &self[(row, j)];
                        self[(r, j)] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right nullspace, deterministic (free columns in order).
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Q::zero(); self.cols];
            vec[free] = Q::one();
            for (c, p) in pivot_set.iter().enumerate() {
                if let Some(r) = p {
                    vec[c] = -m[(*r, free)].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let ia = a * self.cols + j;
            let ib = b * self.cols + j;
            self.data.swap(ia, ib);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Repeated-solve helper: factor `A` once, then answer `A x = b` queries.
pub struct Solver {
    rref: Mat,
    pivots: Vec<usize>,
    /// Row operations as a transform: `transform * A = rref`.
    transform: Mat,
}

impl Solver {
    pub fn new(a: &Mat) -> Self {
        let n = a.rows;
        let mut aug = Mat::zero(n, a.cols + n);
        for i in 0..n {
            for j in 0..a.cols {
                aug[(i, j)] = a[(i, j)].clone();
            }
            aug[(i, a.cols + i)] = Q::one();
        }
        // Echelonize only over the A-block so the identity block records row ops.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == n {
                break;
            }
            let Some(pr) = (row..n).find(|&r| !aug[(r, col)].is_zero()) else {
                continue;
            };
            aug.swap_rows(row, pr);
            let inv = aug[(row, col)].recip();
            for j in 0..aug.cols {
                let v = &aug[(row, j)] * &inv;
                aug[(row, j)] = v;
            }
            for r in 0..n {
                if r != row && !aug[(r, col)].is_zero() {
                    let factor = aug[(r, col)].clone();
                    for j in 0..aug.cols {
                        let sub = &factor * &aug[(row, j)];
                        aug[(r, j)] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut rref = Mat::zero(n, a.cols);
        let mut transform = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..a.cols {
                rref[(i, j)] = aug[(i, j)].clone();
            }
            for j in 0..n {
                transform[(i, j)] = aug[(i, a.cols + j)].clone();
            }
        }
        Solver {
            rref,
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One solution of `A x = b`, or `None` if inconsistent. Free variables are zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let tb = self.transform.mul_vec(b);
        // Rows beyond the rank must vanish for consistency; the pivot rows
        // are then satisfied by reading coordinates straight off (rref rows
        // carry a single pivot and free columns, and free variables are 0).
        if tb[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Q::zero(); self.rref.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = tb[r].clone();
        }
        Some(x)
    }
}

/// Deterministic basis for the span of `vectors` (RREF rows, nonzero).
pub fn span_basis(vectors: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Mat::zero(vectors.len(), dim);
    for (i, v) in vectors.iter().enumerate() {
        assert_eq!(v.len(), dim);
        for j in 0..dim {
            m[(i, j)] = v[j].clone();
        }
    }
    let pivots = m.rref_in_place();
    (0..pivots.len())
        .map(|i| (0..dim).map(|j| m[(i, j)].clone()).collect())
        .collect()
}

/// Representatives completing `sub` to a basis of `space` (both subspaces of Q^dim,
/// with `sub` contained in `space`): echelonize `sub`, then sweep `space` vectors,
/// keeping those that enlarge the span. Deterministic in the order of `space`.
pub fn quotient_representatives(sub: &[Vec<Q>], space: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = sub.to_vec();
    let mut current_rank = span_basis(sub, dim).len();
    let mut reps = Vec::new();
    for v in space {
        rows.push(v.clone());
        let r = span_basis(&rows, dim).len();
        if r > current_rank {
            current_rank = r;
            reps.push(v.clone());
        } else {
            rows.pop();
        }
    }
    reps
}
