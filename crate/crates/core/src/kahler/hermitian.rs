//! The standard pseudo-Hermitian space `C^n = R^{2n}` of signature `(p, q)`.
//!
//! Real coordinates `x` correspond to `z_j = x_j + i·x_{n+j}`. Then
//! `J = [[0, -I], [I, 0]]`, `g = diag(η, η)` with `η = diag(1^p, (-1)^q)`,
//! and `ω = g(J·, ·)` has Gram matrix `[[0, η], [-η, 0]]`. On complex
//! vectors `h(z, w) = Σ η_j z_j w̄_j`, `g = Re h`, `ω = -Im h`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{Field, GaussianScalar, Matrix, RationalRange, Scalar, Subspace};
use crate::symplectic::SymplecticSpace;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpace {
    p: usize,
    q: usize,
    j: Matrix,
    g: Matrix,
    symplectic: Arc<SymplecticSpace>,
}

impl HermitianSpace {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n == 0 {
            return Err(Error::InvalidDimension("signature (0,0)".into()));
        }
        let one = Scalar::one();
        let eta = |i: usize| if i % n < p { one.clone() } else { one.neg() };
        let j = Matrix::from_fn(2 * n, 2 * n, |r, c| {
            if r + n == c {
                one.neg()
            } else if c + n == r {
                one.clone()
            } else {
                Scalar::zero()
            }
        });
        let g = Matrix::from_fn(2 * n, 2 * n, |r, c| if r == c { eta(r) } else { Scalar::zero() });
        let omega = j.transpose().mul(&g)?;
        let symplectic = Arc::new(SymplecticSpace::with_gram(omega)?);
        Ok(Self { p, q, j, g, symplectic })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n()
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn omega(&self) -> &Matrix {
        self.symplectic.gram()
    }

    pub fn symplectic(&self) -> &Arc<SymplecticSpace> {
        &self.symplectic
    }

    /// Largest complex dimension of an isotropic complex subspace.
    pub fn max_isotropic_dim(&self) -> usize {
        self.p.min(self.q)
    }

    fn eta(&self, i: usize) -> Scalar {
        if i < self.p {
            Scalar::one()
        } else {
            Scalar::one().neg()
        }
    }

    /// `J² = -id`, `g` symmetric and `J`-invariant, `ω` antisymmetric and
    /// `J`-invariant, `ω = g(J·,·)` and `g = ω(·, J·)`.
    pub fn check_consistency(&self) -> bool {
        let (j, g, o) = (&self.j, &self.g, self.omega());
        let jt = j.transpose();
        let checks = || -> Result<bool> {
            Ok(j.mul(j)?.neg().is_identity()
                && g.transpose() == *g
                && !g.det()?.is_zero()
                && jt.mul(g)?.mul(j)? == *g
                && o.transpose() == o.neg()
                && jt.mul(o)?.mul(j)? == *o
                && *o == jt.mul(g)?
                && *g == o.mul(j)?)
        };
        checks().unwrap_or(false)
    }

    /// `ζ(x) = (x_j + i·x_{n+j})_j`.
    pub fn to_complex(&self, x: &[Scalar]) -> Result<Vec<GaussianScalar>> {
        let n = self.n();
        Error::check_dim(2 * n, x.len())?;
        Ok((0..n).map(|j| GaussianScalar::new(x[j].clone(), x[n + j].clone())).collect())
    }

    pub fn to_real(&self, z: &[GaussianScalar]) -> Result<Vec<Scalar>> {
        Error::check_dim(self.n(), z.len())?;
        Ok(z.iter().map(|c| c.re.clone()).chain(z.iter().map(|c| c.im.clone())).collect())
    }

    /// `h(z, w) = Σ η_j z_j w̄_j`.
    pub fn hermitian(&self, z: &[GaussianScalar], w: &[GaussianScalar]) -> Result<GaussianScalar> {
        Error::check_dim(self.n(), z.len())?;
        Error::check_dim(self.n(), w.len())?;
        Ok(z.iter().zip(w).enumerate().fold(GaussianScalar::zero(), |acc, (i, (a, b))| {
            acc.add(&a.mul(&b.conj()).mul(&GaussianScalar::real(self.eta(i))))
        }))
    }

    pub fn is_isotropic_complex(&self, w: &Subspace<GaussianScalar>) -> Result<bool> {
        let vs = w.basis_vectors();
        for a in &vs {
            for b in &vs {
                if !self.hermitian(a, b)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Real subspace underlying a complex subspace: `span_R{ζ⁻¹(w), ζ⁻¹(i·w)}`.
    pub fn realify(&self, w: &Subspace<GaussianScalar>) -> Result<Subspace> {
        let mut vs = Vec::with_capacity(2 * w.dim());
        for v in w.basis_vectors() {
            vs.push(self.to_real(&v)?);
            let iv: Vec<GaussianScalar> = v.iter().map(|c| c.mul_i_pow(1)).collect();
            vs.push(self.to_real(&iv)?);
        }
        Ok(Subspace::span(self.real_dim(), &vs))
    }

    /// Complex span of `ζ(v)` for `v` in a real subspace.
    pub fn complexify(&self, w: &Subspace) -> Result<Subspace<GaussianScalar>> {
        let vs = w.basis_vectors().iter().map(|v| self.to_complex(v)).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.n(), &vs))
    }

    /// Real matrix of the complex-linear map `z ↦ M z`.
    pub fn realify_matrix(&self, m: &Matrix<GaussianScalar>) -> Result<Matrix> {
        let n = self.n();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.rows().max(m.cols()) });
        }
        Ok(Matrix::from_fn(2 * n, 2 * n, |r, c| {
            let z = &m[(r % n, c % n)];
            match (r < n, c < n) {
                (true, true) | (false, false) => z.re.clone(),
                (true, false) => z.im.neg(),
                (false, true) => z.im.clone(),
            }
        }))
    }

    /// `Mᴴ η M = η`.
    pub fn is_unitary(&self, m: &Matrix<GaussianScalar>) -> bool {
        let n = self.n();
        let eta = Matrix::from_fn(n, n, |r, c| {
            if r == c {
                GaussianScalar::real(self.eta(r))
            } else {
                GaussianScalar::zero()
            }
        });
        let mh = m.transpose().map(GaussianScalar::conj);
        m.rows() == n && m.cols() == n && mh.mul(&eta).and_then(|a| a.mul(m)).is_ok_and(|a| a == eta)
    }

    /// Random isotropic complex subspace of dimension `m ≤ min(p, q)`,
    /// `span{(U_p e_i, U_q e_i)}` for rational unitaries `U_p`, `U_q`.
    /// The Cayley generators are Gaussian integers bounded by
    /// `min(range.max_num, 2)`, which keeps coordinates small.
    pub fn random_isotropic_complex<R: Rng + ?Sized>(
        &self,
        m: usize,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Subspace<GaussianScalar>> {
        if m > self.max_isotropic_dim() {
            return Err(Error::InvalidDimension(format!(
                "isotropic complex dimension {m} exceeds min(p,q) = {}",
                self.max_isotropic_dim()
            )));
        }
        let generators = RationalRange::new(range.max_num.min(2), 1);
        let up = cayley_unitary(self.p, rng, &generators)?;
        let uq = cayley_unitary(self.q, rng, &generators)?;
        let cols: Vec<Vec<GaussianScalar>> =
            (0..m).map(|i| up.column(i).into_iter().chain(uq.column(i)).collect()).collect();
        Ok(Subspace::span(self.n(), &cols))
    }

    /// Isotropic `W′` with `h(w_a, u_b) = δ_ab` for an isotropic `W`.
    pub fn isotropic_dual(&self, w: &Subspace<GaussianScalar>) -> Result<Vec<Vec<GaussianScalar>>> {
        if !self.is_isotropic_complex(w)? {
            return Err(Error::NotIsotropic);
        }
        let ws = w.basis_vectors();
        let k = ws.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        // h(w_b, u) = Σ_c η_c w_bc ū_c is linear in ū
        let rows: Vec<Vec<GaussianScalar>> = ws
            .iter()
            .map(|v| v.iter().enumerate().map(|(c, x)| x.mul(&GaussianScalar::real(self.eta(c)))).collect())
            .collect();
        let lin = Matrix::from_rows(rows)?;
        let mut us = Vec::with_capacity(k);
        for a in 0..k {
            let mut rhs = vec![GaussianScalar::zero(); k];
            rhs[a] = GaussianScalar::one();
            let y = lin.solve(&rhs)?.ok_or(Error::Singular)?;
            us.push(y.iter().map(GaussianScalar::conj).collect::<Vec<_>>());
        }
        // u_a ← u_a − ½ Σ_b h(u_a, u_b) w_b
        let half = GaussianScalar::real(crate::numeric::ratio(1, 2));
        let mut fixed = Vec::with_capacity(k);
        for a in 0..k {
            let mut u = us[a].clone();
            for b in 0..k {
                let c = self.hermitian(&us[a], &us[b])?.mul(&half);
                if !c.is_zero() {
                    u = u.iter().zip(&ws[b]).map(|(x, y)| x.sub(&c.mul(y))).collect();
                }
            }
            fixed.push(u);
        }
        Ok(fixed)
    }

    /// `h`-orthogonal complement of a complex subspace.
    pub fn orthogonal_complement(&self, w: &Subspace<GaussianScalar>) -> Result<Subspace<GaussianScalar>> {
        let n = self.n();
        if w.is_zero() {
            return Ok(Subspace::full(n));
        }
        let rows: Vec<Vec<GaussianScalar>> = w
            .basis_vectors()
            .iter()
            .map(|v| v.iter().enumerate().map(|(c, x)| x.conj().mul(&GaussianScalar::real(self.eta(c)))).collect())
            .collect();
        Ok(Matrix::from_rows(rows)?.kernel())
    }

    /// Extend `h ∈ GL_C(W)` on an isotropic `W` to an element of `U(p, q)`:
    /// `w_a ↦ Σ_b h_ba w_b`, the dual `W′` transforms by `(hᴴ)⁻¹`, and the
    /// orthogonal complement of `W ⊕ W′` is fixed.
    pub fn unitary_extension(
        &self,
        w: &Subspace<GaussianScalar>,
        h: &Matrix<GaussianScalar>,
    ) -> Result<Matrix<GaussianScalar>> {
        let k = w.dim();
        Error::check_dim(k, h.rows())?;
        Error::check_dim(k, h.cols())?;
        let ws = w.basis_vectors();
        let us = self.isotropic_dual(w)?;
        let v1 = Subspace::span(self.n(), &ws.iter().chain(&us).cloned().collect::<Vec<_>>());
        let v0 = self.orthogonal_complement(&v1)?.basis_vectors();
        let hh_inv = h.transpose().map(GaussianScalar::conj).inverse()?;

        let combine = |vs: &[Vec<GaussianScalar>], coeffs: &Matrix<GaussianScalar>, a: usize| {
            (0..self.n())
                .map(|r| (0..k).fold(GaussianScalar::zero(), |acc, b| acc.add(&coeffs[(b, a)].mul(&vs[b][r]))))
                .collect::<Vec<_>>()
        };
        let mut src = Vec::with_capacity(self.n());
        let mut dst = Vec::with_capacity(self.n());
        for a in 0..k {
            src.push(ws[a].clone());
            dst.push(combine(&ws, h, a));
        }
        for a in 0..k {
            src.push(us[a].clone());
            dst.push(combine(&us, &hh_inv, a));
        }
        for v in v0 {
            src.push(v.clone());
            dst.push(v);
        }
        let src = Matrix::from_cols(self.n(), &src)?;
        let dst = Matrix::from_cols(self.n(), &dst)?;
        dst.mul(&src.inverse()?)
    }
}

/// Rational unitary `(I − K)(I + K)⁻¹` for a random skew-Hermitian `K`.
pub fn cayley_unitary<R: Rng + ?Sized>(
    k: usize,
    rng: &mut R,
    range: &RationalRange,
) -> Result<Matrix<GaussianScalar>> {
    if k == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let a = range.sample_gaussian_matrix(rng, k, k);
    let skew = a.sub(&a.transpose().map(GaussianScalar::conj))?;
    let id = Matrix::identity(k);
    id.sub(&skew)?.mul(&id.add(&skew)?.inverse()?)
}
