//! Dense exact linear algebra over `Q`, plus a sparse column-reduction
//! kernel used for the large coalgebra maps.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let mut out = vec![zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = &self[(r, c)];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let columns: Vec<_> = cols.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(self.rows, &columns)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|&r| self.row(r).to_vec()).collect())
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let r = rref(self);
        (r.pivots.len() == self.rows).then_some(r.transform)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    /// Invertible `rows x rows` matrix with `transform * m = reduced`.
    pub transform: Matrix,
}

/// Reduced row-echelon form. The pivot in each column is the first
/// nonzero entry at or below the current pivot row.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut t = Matrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..a.cols {
        if prow == a.rows {
            break;
        }
        let Some(found) = (prow..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        swap_rows(&mut a, prow, found);
        swap_rows(&mut t, prow, found);
        let inv = one() / a[(prow, col)].clone();
        scale_row(&mut a, prow, &inv);
        scale_row(&mut t, prow, &inv);
        for r in 0..a.rows {
            if r != prow && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                axpy_row(&mut a, r, prow, &f);
                axpy_row(&mut t, r, prow, &f);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Rref {
        reduced: a,
        pivots,
        transform: t,
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn scale_row(m: &mut Matrix, r: usize, s: &Rational) {
    for c in 0..m.cols {
        let v = &m[(r, c)] * s;
        m[(r, c)] = v;
    }
}

// row[r] -= f * row[src]
fn axpy_row(m: &mut Matrix, r: usize, src: usize, f: &Rational) {
    for c in 0..m.cols {
        if m[(src, c)].is_zero() {
            continue;
        }
        let v = &m[(src, c)] * f;
        m[(r, c)] -= v;
    }
}

/// Columns span `ker m`; one column per free variable, with that variable
/// set to 1 and the other free variables set to 0.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let r = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivots.contains(c)).collect();
    let mut k = Matrix::zeros(m.cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k[(f, j)] = one();
        for (i, &p) in r.pivots.iter().enumerate() {
            k[(p, j)] = -r.reduced[(i, f)].clone();
        }
    }
    k
}

/// Free columns of `m` in the order [`kernel_basis`] uses them.
pub fn free_columns(m: &Matrix) -> Vec<usize> {
    let r = rref(m);
    (0..m.cols).filter(|c| !r.pivots.contains(c)).collect()
}

/// Particular solution of `m x = b` with all free variables set to zero.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if b.len() != m.rows {
        return Err(Error::Shape(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let r = rref(m);
    let c = r.transform.mul_vec(b);
    let rank = r.pivots.len();
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![zero(); m.cols];
    for (i, &p) in r.pivots.iter().enumerate() {
        x[p] = c[i].clone();
    }
    Ok(x)
}

/// Indices of a maximal independent prefix-greedy subset of the columns.
pub fn independent_columns(m: &Matrix) -> Vec<usize> {
    rref(m).pivots
}

/// Reduced echelon basis of the column span: each returned vector has a
/// leading 1 in a distinct coordinate (returned alongside it).
pub fn echelon_span(rows: usize, vectors: &[Vec<Rational>]) -> Vec<(usize, Vec<Rational>)> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols(), rows);
    let r = rref(&m);
    r.pivots
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, r.reduced.row(i).to_vec()))
        .collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Sparse vector keyed by a basis index.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn sparse_axpy(target: &mut SparseVec, f: &Rational, x: &SparseVec) {
    for (k, v) in x {
        let e = target.entry(*k).or_insert_with(zero);
        *e += f * v;
        if e.is_zero() {
            target.remove(k);
        }
    }
}

/// Kernel of a sparse linear map given by its columns (rows are arbitrary
/// ordered keys). Returns kernel vectors in the column space as sparse
/// vectors; their number equals `columns.len() - rank`.
///
/// Column reduction: each column is reduced against earlier pivots, keyed by
/// the largest row index, while tracking the combination of original
/// columns that produced it. Pivot columns are scaled to a unit lead.
pub fn sparse_kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut c = col.clone();
        let mut comb = SparseVec::new();
        comb.insert(j, one());
        loop {
            let Some((&p, lead)) = c.iter().next_back() else {
                kernel.push(comb);
                break;
            };
            match pivots.get(&p) {
                Some((pc, pcomb)) => {
                    let f = -lead.clone();
                    sparse_axpy(&mut c, &f, pc);
                    sparse_axpy(&mut comb, &f, pcomb);
                }
                None => {
                    let inv = lead.recip();
                    c.values_mut().for_each(|v| *v *= &inv);
                    comb.values_mut().for_each(|v| *v *= &inv);
                    pivots.insert(p, (c, comb));
                    break;
                }
            }
        }
    }
    kernel
}

/// Rank of a sparse column family.
pub fn sparse_rank(columns: &[SparseVec]) -> usize {
    columns.len() - sparse_kernel(columns).len()
}
