//! Fraction-free integer images of rational matrices.
//!
//! A family `A_1..A_m` over `Q` is rescaled by the lcm `D` of all entry
//! denominators, giving integer matrices `D·A_i`. Polynomial identities that
//! are homogeneous in the `A_i` (commutators, products, sums) vanish iff they
//! vanish on the integer images, and `BigInt` arithmetic avoids the gcd
//! reductions that dominate rational matrix products.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::Scalar;
use super::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Product with zero entries skipped; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Pivot columns of the row echelon form, found by fraction-free
    /// (Bareiss) elimination; they index a basis of the column space.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

impl IntMatrix {
    /// Columns of the given matrices side by side.
    pub fn hstack_all(mats: &[IntMatrix]) -> Self {
        let rows = mats.first().map_or(0, |m| m.rows);
        let cols = mats.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for m in mats {
            for i in 0..rows {
                for j in 0..m.cols {
                    out.data[i * cols + off + j] = m.get(i, j).clone();
                }
            }
            off += m.cols;
        }
        out
    }
}

/// Integer images `D·A_i` and the common denominator `D`.
pub fn integer_family(mats: &[Matrix]) -> (Vec<IntMatrix>, BigInt) {
    let denom = mats
        .iter()
        .flat_map(|m| m.entries())
        .fold(BigInt::one(), |acc, x: &Scalar| acc.lcm(x.denom()));
    let images = mats
        .iter()
        .map(|m| IntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|x| x.numer() * (&denom / x.denom())).collect(),
        })
        .collect();
    (images, denom)
}
