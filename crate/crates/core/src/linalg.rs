//! Dense exact linear algebra over any [`Field`].
//!
//! Pivoting always takes the first nonzero entry in column order, so every
//! result is deterministic.

use std::fmt;

use crate::exactmath::Field;

/// A rectangular matrix stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged matrix columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<F> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn trace(&self) -> F {
        self.diagonal().iter().fold(F::zero(), |acc, x| acc.add(x))
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Matrix product. Zero entries of `self` are skipped, which keeps
    /// sparse operators cheap.
    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    fn echelon(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let t = f.mul(&m[(r, j)]);
                        m[(i, j)] = m[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Determinant by elimination. Panics on non-square input.
    pub fn determinant(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m[(c, c)].clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    let t = f.mul(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (e, pivots) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| e[(i, j + n)].clone()))
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.data[i * self.cols..(i + 1) * self.cols].iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x:?}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

pub fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn scale_vec<F: Field>(c: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| c.mul(x)).collect()
}

/// Bilinear form `xᵀ G y`.
pub fn bilinear<F: Field>(g: &Matrix<F>, x: &[F], y: &[F]) -> F {
    dot(x, &g.mul_vec(y))
}

/// Rank of a matrix.
pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    a.rank()
}

/// Solves `A x = b`. Returns `None` when the system is inconsistent; for
/// underdetermined systems the free variables are set to zero.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let aug = Matrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (e, pivots) = aug.echelon();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = e[(r, n)].clone();
    }
    Some(x)
}

/// Congruence diagonalization of a symmetric form: returns `C` and `d` with
/// `Cᵀ G C = diag(d)`.
///
/// This is symmetric Gaussian elimination without normalization, so no
/// square roots appear. A zero pivot is repaired by `v_i ← v_i ± v_j`, with
/// `j` the first later index where the form pairs nontrivially with `v_i`;
/// the sign is chosen so the new pivot is nonzero (one of the two always
/// works in characteristic zero). Degenerate directions give zero entries
/// in `d`.
pub fn congruence_diagonalize<F: Field>(g: &Matrix<F>) -> (Matrix<F>, Vec<F>) {
    assert!(g.is_symmetric(), "congruence_diagonalize needs a symmetric matrix");
    let n = g.rows();
    let mut a = g.clone();
    let mut c = Matrix::identity(n);
    for i in 0..n {
        if a[(i, i)].is_zero() {
            let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) else {
                continue;
            };
            // B(v_i ± v_j, v_i ± v_j) = ±2 B(v_i, v_j) + B(v_j, v_j).
            let two_bij = a[(i, j)].add(&a[(i, j)]);
            let sign = if two_bij.add(&a[(j, j)]).is_zero() {
                F::one().neg()
            } else {
                F::one()
            };
            add_multiple(&mut a, &mut c, i, j, &sign);
        }
        let pivot = a[(i, i)].clone();
        let inv = pivot.inv().expect("repaired pivot is nonzero");
        for k in i + 1..n {
            if a[(k, i)].is_zero() {
                continue;
            }
            let f = a[(k, i)].mul(&inv).neg();
            add_multiple(&mut a, &mut c, k, i, &f);
        }
    }
    let d = a.diagonal();
    (c, d)
}

/// Result of fraction-free elimination on a square system `A X = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionFree<F> {
    /// `±det A`: the last Bareiss pivot.
    pub scale: F,
    /// `scale · X`, one vector per right-hand side.
    pub scaled_solutions: Vec<Vec<F>>,
}

/// Bareiss elimination for square `a` against the columns `rhs`.
///
/// Every division is exact, so when the entries lie in a polynomial
/// subring they stay there and no normalization happens until the caller
/// divides by `scale`. `None` iff `a` is singular. Pivots are the first
/// nonzero entry of each column.
pub fn fraction_free_solve<F: Field>(a: &Matrix<F>, rhs: &[Vec<F>]) -> Option<FractionFree<F>> {
    assert!(a.is_square(), "fraction_free_solve needs a square matrix");
    let n = a.rows();
    let w = n + rhs.len();
    let mut m: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    let mut prev = F::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..w {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_quotient(&prev);
            }
            m[i][k] = F::zero();
        }
        prev = m[k][k].clone();
    }
    let scale = prev;
    let scaled_solutions = (n..w)
        .map(|c| {
            let mut x = vec![F::zero(); n];
            for i in (0..n).rev() {
                let mut acc = scale.mul(&m[i][c]);
                for j in i + 1..n {
                    acc = acc.sub(&m[i][j].mul(&x[j]));
                }
                x[i] = acc.exact_quotient(&m[i][i]);
            }
            x
        })
        .collect();
    Some(FractionFree { scale, scaled_solutions })
}

/// `a` is invertible, decided by fraction-free elimination.
pub fn is_nonsingular<F: Field>(a: &Matrix<F>) -> bool {
    fraction_free_solve(a, &[]).is_some()
}

/// Basis change `v_target ← v_target + f·v_source`, applied to the form
/// (as a row and column operation) and to the basis matrix.
fn add_multiple<F: Field>(a: &mut Matrix<F>, c: &mut Matrix<F>, target: usize, source: usize, f: &F) {
    let n = a.rows();
    for r in 0..n {
        let t = a[(r, source)].mul(f);
        a[(r, target)] = a[(r, target)].add(&t);
    }
    for col in 0..n {
        let t = a[(source, col)].mul(f);
        a[(target, col)] = a[(target, col)].add(&t);
    }
    for r in 0..n {
        let t = c[(r, source)].mul(f);
        c[(r, target)] = c[(r, target)].add(&t);
    }
}
