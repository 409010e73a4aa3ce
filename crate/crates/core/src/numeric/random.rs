use rand::Rng;

use super::field::{ratio, Field, GaussianScalar, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Bounds for random rational sampling: numerators uniform in
/// `[-max_num, max_num]`, denominators uniform in `[1, max_den]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalRange {
    pub max_num: i64,
    pub max_den: i64,
}

impl Default for RationalRange {
    fn default() -> Self {
        Self { max_num: 10, max_den: 10 }
    }
}

const MAX_INVERTIBLE_ATTEMPTS: usize = 64;

impl RationalRange {
    pub fn new(max_num: i64, max_den: i64) -> Self {
        assert!(max_num >= 1 && max_den >= 1, "rational range must be nonempty");
        Self { max_num, max_den }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let n = rng.gen_range(-self.max_num..=self.max_num);
        let d = rng.gen_range(1..=self.max_den);
        ratio(n, d)
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.sample(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn sample_gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> GaussianScalar {
        GaussianScalar::new(self.sample(rng), self.sample(rng))
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<Scalar> {
        (0..len).map(|_| self.sample(rng)).collect()
    }

    pub fn sample_matrix<R: Rng + ?Sized>(&self, rng: &mut R, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.sample(rng))
    }

    pub fn sample_gaussian_matrix<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        rows: usize,
        cols: usize,
    ) -> Matrix<GaussianScalar> {
        Matrix::from_fn(rows, cols, |_, _| self.sample_gaussian(rng))
    }

    /// Random element of `GL(n, Q)` (rejection on singular draws).
    pub fn sample_invertible<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Matrix> {
        for _ in 0..MAX_INVERTIBLE_ATTEMPTS {
            let m = self.sample_matrix(rng, n, n);
            if !m.det()?.is_zero() {
                return Ok(m);
            }
        }
        Err(Error::SamplingExhausted(MAX_INVERTIBLE_ATTEMPTS))
    }

    /// Random element of `GL(n, Q(i))`.
    pub fn sample_invertible_gaussian<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: usize,
    ) -> Result<Matrix<GaussianScalar>> {
        for _ in 0..MAX_INVERTIBLE_ATTEMPTS {
            let m = self.sample_gaussian_matrix(rng, n, n);
            if !m.det()?.is_zero() {
                return Ok(m);
            }
        }
        Err(Error::SamplingExhausted(MAX_INVERTIBLE_ATTEMPTS))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_bounds() {
        let range = RationalRange::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let s = range.sample(&mut rng);
            // reduction can only shrink numerator and denominator
            assert!(s.numer() <= &BigInt::from(10) && s.numer() >= &BigInt::from(-10));
            assert!(s.denom() >= &BigInt::from(1) && s.denom() <= &BigInt::from(10));
        }
    }

    #[test]
    fn invertible_samples_have_nonzero_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            let m = RationalRange::default().sample_invertible(&mut rng, n).unwrap();
            assert!(!m.det().unwrap().is_zero());
        }
    }
}
