//! Multivariate polynomials over `Q(i)` in holomorphic variables `z_1..z_n`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{Field, GaussianScalar, Matrix, RationalRange};

/// Sparse polynomial: exponent vector ↦ nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussianScalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianScalar) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The coordinate function `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, GaussianScalar::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: GaussianScalar) -> Self {
        let nvars = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, GaussianScalar)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            Error::check_dim(nvars, e.len())?;
            p.add_term(e, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: &GaussianScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            Entry::Occupied(mut slot) => {
                let v = slot.get().add(c);
                if v.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = v;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, GaussianScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as usize).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&GaussianScalar::one().neg()))
    }

    pub fn scale(&self, c: &GaussianScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, GaussianScalar::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `∂/∂z_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, &c.mul(&GaussianScalar::from_i64(i64::from(e[i]))));
        }
        out
    }

    pub fn derivative_multi(&self, vars: &[usize]) -> Self {
        vars.iter().fold(self.clone(), |p, &i| p.derivative(i))
    }

    pub fn evaluate(&self, z: &[GaussianScalar]) -> Result<GaussianScalar> {
        Error::check_dim(self.nvars, z.len())?;
        let mut acc = GaussianScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (zi, &k) in z.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(zi);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn evaluate_c64(&self, z: &[Complex64]) -> Result<Complex64> {
        Error::check_dim(self.nvars, z.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| z.iter().zip(e).fold(c.to_c64(), |t, (zi, &k)| t * zi.powu(k)))
            .sum())
    }

    /// `Q(z) = P(λ z)` for `λ` of shape `nvars × m`.
    pub fn compose_linear(&self, lambda: &Matrix<GaussianScalar>) -> Result<Self> {
        Error::check_dim(self.nvars, lambda.rows())?;
        let m = lambda.cols();
        let forms: Vec<Self> = (0..self.nvars)
            .map(|a| {
                (0..m).fold(Self::zero(m), |acc, j| acc.add(&Self::var(m, j).scale(&lambda[(a, j)])))
            })
            .collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (form, &k) in forms.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&form.pow(k));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Random polynomial with every monomial of degree `min_degree..=max_degree`.
    pub fn random<R: Rng + ?Sized>(
        nvars: usize,
        min_degree: u32,
        max_degree: u32,
        rng: &mut R,
        range: &RationalRange,
    ) -> Self {
        let mut out = Self::zero(nvars);
        for e in exponents_up_to(nvars, max_degree) {
            if e.iter().sum::<u32>() >= min_degree {
                out.add_term(e, &range.sample_gaussian(rng));
            }
        }
        out
    }
}

/// All exponent vectors of total degree `≤ max`, in lexicographic order.
fn exponents_up_to(nvars: usize, max: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in exponents_up_to(nvars - 1, max - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·z{}", i + 1)?,
                    _ => write!(f, "·z{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn g(re: i64, im: i64) -> GaussianScalar {
        GaussianScalar::new(rat(re), rat(im))
    }

    #[test]
    fn cube_derivatives() {
        let z1 = Polynomial::var(2, 0);
        let f = z1.pow(3);
        assert_eq!(f.derivative_multi(&[0, 0, 0]), Polynomial::constant(2, g(6, 0)));
        assert!(f.derivative_multi(&[0, 0, 1]).is_zero());
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn mixed_term_at_point() {
        // f = z1³ z2 at (0, 1)
        let f = Polynomial::var(2, 0).pow(3).mul(&Polynomial::var(2, 1));
        let z = [g(0, 0), g(1, 0)];
        assert_eq!(f.derivative_multi(&[0, 0, 0]).evaluate(&z).unwrap(), g(6, 0));
        assert_eq!(f.derivative_multi(&[0, 0, 1]).evaluate(&z).unwrap(), g(0, 0));
        assert_eq!(f.derivative_multi(&[0, 0, 0, 1]).evaluate(&z).unwrap(), g(6, 0));
    }

    #[test]
    fn binomial_expansion() {
        let s = Polynomial::var(2, 0).add(&Polynomial::var(2, 1));
        let cube = s.pow(3);
        assert_eq!(cube.terms().len(), 4);
        assert_eq!(cube.terms()[&vec![2, 1]], g(3, 0));
        assert!(cube.sub(&cube).is_zero());
    }

    #[test]
    fn compose_linear_substitution() {
        // P(y) = y², y = z1 + i z2
        let p = Polynomial::var(1, 0).pow(2);
        let lambda = Matrix::from_rows(vec![vec![g(1, 0), g(0, 1)]]).unwrap();
        let q = p.compose_linear(&lambda).unwrap();
        let z = [g(2, 1), g(-1, 3)];
        let y = z[0].add(&g(0, 1).mul(&z[1]));
        assert_eq!(q.evaluate(&z).unwrap(), y.mul(&y));
    }

    #[test]
    fn float_evaluation_matches_exact() {
        let f = Polynomial::var(2, 0).pow(2).mul(&Polynomial::var(2, 1)).scale(&g(1, -2));
        let z = [g(1, 1), g(2, -1)];
        let exact = f.evaluate(&z).unwrap().to_c64();
        let approx = f.evaluate_c64(&[z[0].to_c64(), z[1].to_c64()]).unwrap();
        assert!((exact - approx).norm() < 1e-12);
    }
}
