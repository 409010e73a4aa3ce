use std::fmt;

use super::field::{Field, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Subspace of `T^d` held by a basis of linearly independent columns.
///
/// Equality compares spans, not bases.
#[derive(Clone, Debug)]
pub struct Subspace<T: Field = Scalar> {
    ambient_dim: usize,
    basis: Matrix<T>,
}

impl<T: Field> Subspace<T> {
    /// Trusted constructor; callers guarantee independence.
    pub(crate) fn from_independent(ambient_dim: usize, basis: Vec<Vec<T>>) -> Self {
        let basis = Matrix::from_cols(ambient_dim, &basis).expect("basis vectors have ambient length");
        Self { ambient_dim, basis }
    }

    /// Span of arbitrary vectors; a maximal independent subset is kept.
    pub fn span(ambient_dim: usize, vectors: &[Vec<T>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let m = Matrix::from_cols(ambient_dim, vectors).expect("vectors have ambient length");
        let (_, pivots) = m.rref();
        let kept: Vec<Vec<T>> = pivots.iter().map(|&p| vectors[p].clone()).collect();
        Self::from_independent(ambient_dim, kept)
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix<T>) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Matrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Matrix::identity(ambient_dim) }
    }

    /// `span{e_i : i ∈ indices}`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vec<T>> =
            indices.iter().map(|&i| super::matrix::vec_ops::unit(ambient_dim, i)).collect();
        Self::span(ambient_dim, &vs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut vs = self.basis_vectors();
        vs.push(v.to_vec());
        Matrix::from_cols(self.ambient_dim, &vs).expect("same ambient").rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Ok(Self::span(self.ambient_dim, &vs))
    }

    /// Image `m(self)`.
    pub fn image(&self, m: &Matrix<T>) -> Result<Self> {
        Error::check_dim(self.ambient_dim, m.cols())?;
        let vs: Vec<Vec<T>> =
            self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect::<Result<_>>()?;
        Ok(Self::span(m.rows(), &vs))
    }

    /// Same span with the basis given by the reduced row echelon form of the
    /// transposed basis; two equal subspaces have identical canonical bases.
    pub fn canonical(&self) -> Self {
        let (r, pivots) = self.basis.transpose().rref();
        let vs: Vec<Vec<T>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self::from_independent(self.ambient_dim, vs)
    }
}

impl<T: Field> PartialEq for Subspace<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        if self.dim() == 0 {
            return true;
        }
        self.basis.hstack(&other.basis).expect("same ambient").rank() == self.dim()
    }
}

/// Column list, e.g. `[[1,0],[0,1]]` for the full plane.
impl<T: Field> fmt::Display for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, col) in self.basis_vectors().iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", VecDisplay(col))?;
        }
        write!(f, "]")
    }
}

/// `[a,b,c]` formatting for a vector of exact scalars.
pub struct VecDisplay<'a, T: Field>(pub &'a [T]);

impl<T: Field> fmt::Display for VecDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
