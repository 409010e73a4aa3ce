//! The symplectic vector space `(V, ω)`, `dim V = 2n`.
//!
//! The canonical space uses the Darboux Gram matrix `ω(e_i, e_{n+i}) = 1`,
//! i.e. `Ω = [[0, I], [-I, 0]]`. Other Gram matrices (for instance a Kähler
//! form of indefinite signature) are accepted through [`SymplecticSpace::with_gram`]
//! and carry a computed Darboux basis, so no other module needs to know signs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{vec_ops, Field, Matrix, RationalRange, Scalar, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace {
    n: usize,
    omega: Matrix,
    /// `(Ωᵀ)⁻¹`: turns the covector `ω(v, ·)` back into `v`.
    omega_inv_t: Matrix,
    /// Columns `(e'_1..e'_n, f'_1..f'_n)` with `ω(e'_i, f'_j) = δ_ij`, all
    /// other pairings zero.
    darboux: Matrix,
    darboux_inv: Matrix,
}

/// Darboux Gram matrix of half-dimension `n`.
pub fn darboux_gram(n: usize) -> Matrix {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = Scalar::one();
        m[(n + i, i)] = Scalar::one().neg();
    }
    m
}

impl SymplecticSpace {
    /// Standard space `R^{2n}` in Darboux form.
    pub fn darboux(n: usize) -> Self {
        let omega = darboux_gram(n);
        Self {
            n,
            omega_inv_t: omega.transpose().inverse().expect("Darboux form is invertible"),
            omega,
            darboux: Matrix::identity(2 * n),
            darboux_inv: Matrix::identity(2 * n),
        }
    }

    /// Space with an arbitrary antisymmetric nondegenerate Gram matrix.
    pub fn with_gram(omega: Matrix) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::NonSquare { rows: omega.rows(), cols: omega.cols() });
        }
        let d = omega.rows();
        if d % 2 != 0 {
            return Err(Error::InvalidDimension(format!("symplectic space has odd dimension {d}")));
        }
        if omega.transpose() != omega.neg() {
            return Err(Error::InvalidDimension("Gram matrix is not antisymmetric".into()));
        }
        let omega_inv_t = omega.transpose().inverse()?;
        let mut sp = Self {
            n: d / 2,
            omega,
            omega_inv_t,
            darboux: Matrix::identity(d),
            darboux_inv: Matrix::identity(d),
        };
        let p = sp.complete_isotropic(&Subspace::zero(d))?;
        sp.darboux_inv = p.inverse()?;
        sp.darboux = p;
        Ok(sp)
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn gram(&self) -> &Matrix {
        &self.omega
    }

    pub fn darboux_basis(&self) -> &Matrix {
        &self.darboux
    }

    /// `ω(x, y) = xᵀ Ω y`.
    pub fn omega_eval(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        Error::check_dim(self.dim(), x.len())?;
        Error::check_dim(self.dim(), y.len())?;
        Ok(vec_ops::dot(x, &self.omega.mul_vec(y)?))
    }

    /// Covector `ω(v, ·)` as a coefficient vector.
    pub fn lower(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.omega.transpose().mul_vec(v)
    }

    /// The unique `v` with `ω(v, e_k) = c_k` for all `k`.
    pub fn raise(&self, c: &[Scalar]) -> Result<Vec<Scalar>> {
        self.omega_inv_t.mul_vec(c)
    }

    pub(crate) fn omega_inv_t(&self) -> &Matrix {
        &self.omega_inv_t
    }

    /// First pair of basis indices `(a, b)` with `ω(w_a, w_b) ≠ 0`.
    pub fn isotropy_witness(&self, w: &Subspace) -> Result<Option<(usize, usize)>> {
        Error::check_dim(self.dim(), w.ambient_dim())?;
        let b = w.basis_vectors();
        for a in 0..b.len() {
            for c in a + 1..b.len() {
                if !self.omega_eval(&b[a], &b[c])?.is_zero() {
                    return Ok(Some((a, c)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_isotropic(&self, w: &Subspace) -> Result<bool> {
        Ok(self.isotropy_witness(w)?.is_none())
    }

    pub fn is_lagrangian(&self, w: &Subspace) -> Result<bool> {
        Ok(w.dim() == self.n && self.is_isotropic(w)?)
    }

    /// `W^ω = {v : ω(w, v) = 0 for all w ∈ W}`.
    pub fn symplectic_complement(&self, w: &Subspace) -> Result<Subspace> {
        Error::check_dim(self.dim(), w.ambient_dim())?;
        if w.is_zero() {
            return Ok(Subspace::full(self.dim()));
        }
        let rows: Vec<Vec<Scalar>> =
            w.basis_vectors().iter().map(|v| self.lower(v)).collect::<Result<_>>()?;
        Ok(Matrix::from_rows(rows)?.kernel())
    }

    /// `gᵀ Ω g = Ω`.
    pub fn is_symplectic(&self, g: &Matrix) -> bool {
        g.rows() == self.dim()
            && g.cols() == self.dim()
            && g.transpose().mul(&self.omega).and_then(|m| m.mul(g)).is_ok_and(|m| m == self.omega)
    }

    /// `g⁻¹ = Ω⁻¹ gᵀ Ω` for symplectic `g`.
    pub fn symplectic_inverse(&self, g: &Matrix) -> Result<Matrix> {
        if !self.is_symplectic(g) {
            return Err(Error::NotSymplectic);
        }
        self.omega_inv_t.transpose().mul(&g.transpose())?.mul(&self.omega)
    }

    /// Extend a basis of the isotropic subspace `w` to a Darboux basis.
    ///
    /// Returns `P` with columns `(e'_1..e'_n, f'_1..f'_n)`, where
    /// `e'_1..e'_k` are exactly the basis vectors of `w`, and `Pᵀ Ω P` is
    /// the standard Darboux Gram matrix.
    pub fn complete_isotropic(&self, w: &Subspace) -> Result<Matrix> {
        Error::check_dim(self.dim(), w.ambient_dim())?;
        if !self.is_isotropic(w)? {
            return Err(Error::NotIsotropic);
        }
        let d = self.dim();
        let es = w.basis_vectors();
        let k = es.len();

        // Dual vectors: ω(e_b, f_a) = δ_ab.
        let mut fs = Vec::with_capacity(k);
        if k > 0 {
            let lowered = Matrix::from_rows(es.iter().map(|e| self.lower(e)).collect::<Result<_>>()?)?;
            for a in 0..k {
                let f = lowered.solve(&vec_ops::unit(k, a))?.ok_or(Error::Singular)?;
                fs.push(f);
            }
        }
        // f_a ← f_a − ½ Σ_b ω(f_a, f_b) e_b makes the f's mutually isotropic.
        let half = crate::numeric::ratio(1, 2);
        let mut fixed = Vec::with_capacity(k);
        for a in 0..k {
            let mut f = fs[a].clone();
            for b in 0..k {
                let c = self.omega_eval(&fs[a], &fs[b])?.mul(&half);
                if !c.is_zero() {
                    f = vec_ops::sub(&f, &vec_ops::scale(&es[b], &c));
                }
            }
            fixed.push(f);
        }

        let mut pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = es.into_iter().zip(fixed).collect();
        let mut candidates: Vec<Vec<Scalar>> = (0..d).map(|i| vec_ops::unit(d, i)).collect();
        while pairs.len() < self.n {
            candidates = candidates
                .iter()
                .map(|v| self.project_off(v, &pairs))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|v| !vec_ops::is_zero(v))
                .collect();
            let x = candidates.first().cloned().ok_or(Error::Singular)?;
            let mut found = None;
            for y in &candidates[1..] {
                let c = self.omega_eval(&x, y)?;
                if !c.is_zero() {
                    found = Some(vec_ops::scale(y, &c.inv().expect("nonzero")));
                    break;
                }
            }
            let y = found.ok_or(Error::Singular)?;
            pairs.push((x, y));
        }

        let mut cols: Vec<Vec<Scalar>> = pairs.iter().map(|(e, _)| e.clone()).collect();
        cols.extend(pairs.into_iter().map(|(_, f)| f));
        Matrix::from_cols(d, &cols)
    }

    /// Projection of `v` onto the symplectic complement of the given pairs.
    fn project_off(&self, v: &[Scalar], pairs: &[(Vec<Scalar>, Vec<Scalar>)]) -> Result<Vec<Scalar>> {
        let mut out = v.to_vec();
        for (e, f) in pairs {
            let vf = self.omega_eval(v, f)?;
            let ve = self.omega_eval(v, e)?;
            out = vec_ops::sub(&out, &vec_ops::scale(e, &vf));
            out = vec_ops::add(&out, &vec_ops::scale(f, &ve));
        }
        Ok(out)
    }

    /// Darboux-coordinate generator `diag(A, A^{-T})`.
    fn gl_embedding(a: &Matrix) -> Result<Matrix> {
        Ok(a.block_diag(&a.inverse()?.transpose()))
    }

    /// Darboux-coordinate shear `[[I, B], [0, I]]` (or its transpose-type
    /// lower shear), `B` symmetric.
    fn shear(n: usize, b: &Matrix, upper: bool) -> Matrix {
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i == j {
                Scalar::one()
            } else if upper && i < n && j >= n {
                b[(i, j - n)].clone()
            } else if !upper && i >= n && j < n {
                b[(i - n, j)].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, range: &RationalRange, n: usize) -> Matrix {
        let mut b = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = range.sample(rng);
                b[(i, j)] = v.clone();
                b[(j, i)] = v;
            }
        }
        b
    }

    /// Random symplectic matrix built as a product of generators: an upper
    /// symmetric shear, a lower symmetric shear, a `GL(n)` embedding, and a
    /// Darboux swap with probability ½.
    pub fn random_symplectic<R: Rng + ?Sized>(&self, rng: &mut R, range: &RationalRange) -> Result<Matrix> {
        let n = self.n;
        let upper = Self::shear(n, &Self::random_symmetric(rng, range, n), true);
        let lower = Self::shear(n, &Self::random_symmetric(rng, range, n), false);
        let a = range.sample_invertible(rng, n)?;
        let mut g0 = upper.mul(&lower)?.mul(&Self::gl_embedding(&a)?)?;
        if rng.gen_bool(0.5) {
            g0 = g0.mul(&darboux_gram(n))?;
        }
        self.darboux.mul(&g0)?.mul(&self.darboux_inv)
    }

    /// `g · span{e'_1..e'_k}` for a random symplectic `g`; exactly isotropic.
    pub fn random_isotropic<R: Rng + ?Sized>(
        &self,
        k: usize,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Subspace> {
        if k > self.n {
            return Err(Error::InvalidDimension(format!("isotropic dimension {k} exceeds n = {}", self.n)));
        }
        let g = self.random_symplectic(rng, range)?;
        let cols: Vec<Vec<Scalar>> = (0..k).map(|i| self.darboux.column(i)).collect();
        Subspace::span(self.dim(), &cols).image(&g)
    }

    /// Random `k`-dimensional subspace on which `ω` does not vanish, `2 ≤ k ≤ 2n`.
    pub fn random_non_isotropic<R: Rng + ?Sized>(
        &self,
        k: usize,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Subspace> {
        if k < 2 || k > self.dim() {
            return Err(Error::InvalidDimension(format!("no non-isotropic subspace of dimension {k}")));
        }
        for _ in 0..64 {
            let vs: Vec<Vec<Scalar>> = (0..k).map(|_| range.sample_vec(rng, self.dim())).collect();
            let w = Subspace::span(self.dim(), &vs);
            if w.dim() == k && !self.is_isotropic(&w)? {
                return Ok(w);
            }
        }
        Err(Error::SamplingExhausted(64))
    }

    /// Extend `h ∈ GL(W)` to `g ∈ Sp(V)` with `g|_W = h`.
    ///
    /// `h` acts on the basis of `w`: `g(w_a) = Σ_b h[b][a] w_b`. On the
    /// Darboux completion the dual vectors transform by `h^{-T}` and the
    /// complementary pairs are fixed.
    pub fn extend_from_isotropic(&self, w: &Subspace, h: &Matrix) -> Result<Matrix> {
        let k = w.dim();
        Error::check_dim(k, h.rows())?;
        Error::check_dim(k, h.cols())?;
        let p = self.complete_isotropic(w)?;
        let upper = h.block_diag(&Matrix::identity(self.n - k));
        let d = Self::gl_embedding(&upper)?;
        p.mul(&d)?.mul(&p.inverse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, Vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn omega_eval_examples() {
        let sp = SymplecticSpace::darboux(1);
        assert_eq!(sp.omega_eval(&v(&[1, 0]), &v(&[0, 1])).unwrap(), rat(1));
        assert_eq!(sp.omega_eval(&v(&[1, 0]), &v(&[1, 0])).unwrap(), rat(0));
        assert_eq!(sp.omega_eval(&v(&[1, 2]), &v(&[3, 4])).unwrap(), rat(-2));
        assert_eq!(
            sp.omega_eval(&v(&[1, 2, 3]), &v(&[3, 4])),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn darboux_gram_squares_to_minus_identity() {
        for n in 1..5 {
            let sp = SymplecticSpace::darboux(n);
            let o = sp.gram();
            assert_eq!(o.transpose(), o.neg());
            assert!(o.mul(o).unwrap().neg().is_identity());
        }
    }

    #[test]
    fn isotropy_examples() {
        let sp = SymplecticSpace::darboux(2);
        let w = Subspace::coordinate(4, &[0, 1]);
        assert!(sp.is_isotropic(&w).unwrap());
        assert!(sp.is_lagrangian(&w).unwrap());
        let w = Subspace::coordinate(4, &[0, 2]);
        assert!(!sp.is_isotropic(&w).unwrap());
        let w = Subspace::coordinate(4, &[0]);
        assert!(sp.is_isotropic(&w).unwrap());
        assert!(!sp.is_lagrangian(&w).unwrap());
        assert!(sp.is_isotropic(&Subspace::full(2)).is_err());
    }

    #[test]
    fn random_isotropic_edge_cases() {
        let sp = SymplecticSpace::darboux(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let range = RationalRange::default();
        assert!(sp.random_isotropic(0, &mut rng, &range).unwrap().is_zero());
        assert!(matches!(sp.random_isotropic(4, &mut rng, &range), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn symplectic_inverse_rejects_non_symplectic() {
        let sp = SymplecticSpace::darboux(1);
        let g = Matrix::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(sp.symplectic_inverse(&g), Err(Error::NotSymplectic));
    }

    #[test]
    fn darboux_completion_of_isotropic_subspace() {
        let sp = SymplecticSpace::darboux(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let range = RationalRange::default();
        for k in 0..=3 {
            let w = sp.random_isotropic(k, &mut rng, &range).unwrap();
            let p = sp.complete_isotropic(&w).unwrap();
            assert_eq!(p.transpose().mul(sp.gram()).unwrap().mul(&p).unwrap(), darboux_gram(3));
            for a in 0..k {
                assert_eq!(p.column(a), w.basis().column(a));
            }
        }
        assert_eq!(sp.complete_isotropic(&Subspace::coordinate(6, &[0, 3])), Err(Error::NotIsotropic));
    }

    #[test]
    fn non_darboux_gram_gets_a_darboux_basis() {
        // ω = [[0, η], [-η, 0]] with η = diag(1, -1)
        let omega = Matrix::from_i64_rows(&[
            &[0, 0, 1, 0],
            &[0, 0, 0, -1],
            &[-1, 0, 0, 0],
            &[0, 1, 0, 0],
        ])
        .unwrap();
        let sp = SymplecticSpace::with_gram(omega).unwrap();
        let p = sp.darboux_basis();
        assert_eq!(p.transpose().mul(sp.gram()).unwrap().mul(p).unwrap(), darboux_gram(2));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = sp.random_symplectic(&mut rng, &RationalRange::default()).unwrap();
        assert!(sp.is_symplectic(&g));
        assert!(SymplecticSpace::with_gram(Matrix::identity(2)).is_err());
    }

    #[test]
    fn gl_extension_restricts_to_h() {
        let sp = SymplecticSpace::darboux(3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let range = RationalRange::default();
        let w = sp.random_isotropic(2, &mut rng, &range).unwrap();
        let h = range.sample_invertible(&mut rng, 2).unwrap();
        let g = sp.extend_from_isotropic(&w, &h).unwrap();
        assert!(sp.is_symplectic(&g));
        let basis = w.basis_vectors();
        for a in 0..2 {
            let image = g.mul_vec(&basis[a]).unwrap();
            let expected = vec_ops::add(
                &vec_ops::scale(&basis[0], &h[(0, a)]),
                &vec_ops::scale(&basis[1], &h[(1, a)]),
            );
            assert_eq!(image, expected);
        }
    }
}
