//! Small dense matrices over an exact field.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::field::{scalar_to_f64, Field, Scalar};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T: Field = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        Error::check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from a list of rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            Error::check_dim(c, row.len())?;
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Build from column vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Result<Self> {
        for c in cols {
            Error::check_dim(rows, c.len())?;
        }
        Ok(Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(Field::neg)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Field::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Field::sub)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        Error::check_dim(self.rows, other.rows)?;
        Error::check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Matrix product; zero entries of `self` are skipped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        Error::check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect())
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        Ok((0..self.rows).fold(T::zero(), |acc, i| acc.add(&self[(i, i)])))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.rows, other.rows)?;
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)].clone(),
                (false, false) => other[(i - self.rows, j - self.cols)].clone(),
                _ => T::zero(),
            }
        })
    }

    /// Sub-block with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
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
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = m[(r, j)].mul(&factor);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{x : self·x = 0}` as a subspace of the column space dimension.
    pub fn kernel(&self) -> Subspace<T> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<T>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r[(row, f)].neg();
                }
                v
            })
            .collect();
        Subspace::from_independent(self.cols, basis)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(T::zero());
                };
                m.swap_rows(k, p);
                sign_flip = !sign_flip;
            }
            let pivot = m[(k, k)].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = pivot.mul(&m[(i, j)]).sub(&m[(i, k)].mul(&m[(k, j)]));
                    m[(i, j)] = t.div(&prev).expect("previous Bareiss pivot is nonzero");
                }
                m[(i, k)] = T::zero();
            }
            prev = pivot;
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign_flip { d.neg() } else { d })
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// One solution of `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>> {
        Error::check_dim(self.rows, b.len())?;
        let bm = Self::from_cols(self.rows, &[b.to_vec()])?;
        let (r, pivots) = self.hstack(&bm)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Matrix<Scalar> {
    /// Float view; only used on the far side of the exact/float barrier.
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(scalar_to_f64).collect()).collect()
    }
}

impl<T: Field> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Field> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Vector helpers shared across modules.
pub mod vec_ops {
    use super::Field;

    pub fn add<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    pub fn scale<T: Field>(a: &[T], c: &T) -> Vec<T> {
        a.iter().map(|x| x.mul(c)).collect()
    }

    pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
        a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
    }

    pub fn is_zero<T: Field>(a: &[T]) -> bool {
        a.iter().all(Field::is_zero)
    }

    pub fn unit<T: Field>(dim: usize, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); dim];
        v[i] = T::one();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::field::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, p) = Matrix::<Scalar>::identity(2).rref();
        assert!(r.is_identity());
        assert_eq!(p, vec![0, 1]);

        let (r, p) = Matrix::<Scalar>::zeros(3, 3).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());

        let (r, p) = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::<Scalar>::identity(3).kernel().dim(), 0);
        let full = Matrix::<Scalar>::zeros(4, 4).kernel();
        assert_eq!(full.dim(), 4);
        assert_eq!(full, Subspace::full(4));

        let k = m(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k, Subspace::span(2, &[vec![rat(1), rat(-1)]]));
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::<Scalar>::identity(5).det().unwrap(), rat(1));
        assert_eq!(m(&[&[0, 1], &[-1, 0]]).det().unwrap(), rat(1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), rat(0));
        assert_eq!(m(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]).det().unwrap(), rat(-6));
        assert_eq!(
            Matrix::<Scalar>::zeros(2, 3).det(),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));

        let x = a.solve(&[rat(3), rat(2)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        assert!(m(&[&[1, 2], &[2, 4]]).solve(&[rat(1), rat(0)]).unwrap().is_none());
        let x = m(&[&[2, 4]]).solve(&[rat(1)]).unwrap().unwrap();
        assert_eq!(x, vec![ratio(1, 2), rat(0)]);
    }

    #[test]
    fn display_is_row_list() {
        let a = Matrix::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(-3), rat(1)]]).unwrap();
        assert_eq!(a.to_string(), "[[1/2,0],[-3,1]]");
    }
}
