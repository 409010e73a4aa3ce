//! The Abelian simply transitive affine group attached to a cubic form in
//! `C(sp(V))`, in the chart `V ∋ X ↦ exp(S_X, X)`.

use rand::Rng;

use crate::cubic::{CubicForm, EndoFamily};
use crate::error::{Error, Result};
use crate::numeric::{ratio, vec_ops, Field, Matrix, RationalRange, Scalar, Subspace, Vector};

/// Affine transformation `v ↦ linear·v + translation`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: Vector,
}

impl AffineMap {
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::NonSquare { rows: linear.rows(), cols: linear.cols() });
        }
        Error::check_dim(linear.rows(), translation.len())?;
        Ok(Self { linear, translation })
    }

    pub fn identity(dim: usize) -> Self {
        Self { linear: Matrix::identity(dim), translation: vec![Scalar::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `(A, t)·(B, s) = (AB, As + t)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let linear = self.linear.mul(&other.linear)?;
        let translation = vec_ops::add(&self.linear.mul_vec(&other.translation)?, &self.translation);
        Ok(Self { linear, translation })
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        Ok(vec_ops::add(&self.linear.mul_vec(v)?, &self.translation))
    }

    /// `g ∘ self ∘ g⁻¹` for a linear `g`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> Result<Self> {
        Ok(Self { linear: g.mul(&self.linear)?.mul(g_inv)?, translation: g.mul_vec(&self.translation)? })
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && vec_ops::is_zero(&self.translation)
    }
}

/// The group `H = {exp ρ(X)}`, `ρ(X) = (S_X, X)`, parametrized by `X ∈ V`.
#[derive(Clone, Debug)]
pub struct GroupChart {
    cubic: CubicForm,
    family: EndoFamily,
}

/// Outcome of sampling the orbit-map differential at random points.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitivityReport {
    pub samples: usize,
    pub passed: bool,
    /// First point where `det(X ↦ X + S_X v) ≠ 1`.
    pub witness: Option<Vector>,
}

impl GroupChart {
    pub fn new(cubic: CubicForm) -> Result<Self> {
        let report = cubic.in_c_sp();
        if !report.in_variety {
            let msg = match (report.commutator_witness, report.trace_witness) {
                (Some((i, j)), _) => format!("[S_e{i}, S_e{j}] ≠ 0"),
                (None, Some(i)) => format!("tr S_e{i} ≠ 0"),
                (None, None) => unreachable!("not in variety without witness"),
            };
            return Err(Error::NotInVariety(msg));
        }
        let family = cubic.endo_family();
        Ok(Self { cubic, family })
    }

    pub fn cubic(&self) -> &CubicForm {
        &self.cubic
    }

    pub fn family(&self) -> &EndoFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.cubic.dim()
    }

    /// `exp ρ(x) = (id + S_x, x + ½ S_x x)`; exact since `S_x² = 0`.
    pub fn exp_element(&self, x: &[Scalar]) -> Result<AffineMap> {
        let s = self.family.s_x(x)?;
        let sx = s.mul_vec(x)?;
        let linear = Matrix::identity(self.dim()).add(&s)?;
        let translation = vec_ops::add(x, &vec_ops::scale(&sx, &ratio(1, 2)));
        Ok(AffineMap { linear, translation })
    }

    /// `x ↦ exp ρ(x) · 0 = x + ½ S_x x`.
    pub fn orbit_map(&self, x: &[Scalar]) -> Result<Vector> {
        let sx = self.family.apply(x, x)?;
        Ok(vec_ops::add(x, &vec_ops::scale(&sx, &ratio(1, 2))))
    }

    /// `y ↦ y − ½ S_y y`.
    pub fn orbit_map_inverse(&self, y: &[Scalar]) -> Result<Vector> {
        let sy = self.family.apply(y, y)?;
        Ok(vec_ops::sub(y, &vec_ops::scale(&sy, &ratio(1, 2))))
    }

    /// Matrix of `X ↦ X + S_X v`, columns `e_i + S_{e_i} v`.
    pub fn differential(&self, v: &[Scalar]) -> Result<Matrix> {
        let d = self.dim();
        Error::check_dim(d, v.len())?;
        let cols = self
            .family
            .matrices()
            .iter()
            .enumerate()
            .map(|(i, m)| Ok(vec_ops::add(&vec_ops::unit(d, i), &m.mul_vec(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_cols(d, &cols)
    }

    /// Checks `det(X ↦ X + S_X v) = 1` at the given points.
    pub fn verify_at(&self, points: &[Vector]) -> Result<TransitivityReport> {
        for v in points {
            if !self.differential(v)?.det()?.is_one() {
                return Ok(TransitivityReport { samples: points.len(), passed: false, witness: Some(v.clone()) });
            }
        }
        Ok(TransitivityReport { samples: points.len(), passed: true, witness: None })
    }

    pub fn verify_simply_transitive<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<TransitivityReport> {
        let points: Vec<Vector> = (0..samples).map(|_| range.sample_vec(rng, self.dim())).collect();
        self.verify_at(&points)
    }

    /// Kernel of `X ↦ S_X`; its exponentials are the translations in `H`.
    pub fn translation_subgroup(&self) -> Subspace {
        self.family.kernel()
    }
}

/// Solution space of `S_X Y = S_Y X`, `S_X ∈ so(g)` for a symmetric
/// nondegenerate Gram matrix `g`, as a subspace of the `d³` coefficients
/// `s[(i·d + j)·d + k] = (S_{e_i} e_j)_k`.
pub fn orthogonal_prolongation(gram: &Matrix) -> Result<Subspace> {
    if !gram.is_square() {
        return Err(Error::NonSquare { rows: gram.rows(), cols: gram.cols() });
    }
    if gram.transpose() != *gram {
        return Err(Error::InvalidDimension("Gram matrix is not symmetric".into()));
    }
    if gram.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let d = gram.rows();
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    let mut rows = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let mut r = vec![Scalar::zero(); d * d * d];
                r[idx(i, j, k)] = Scalar::one();
                r[idx(j, i, k)] = Scalar::one().neg();
                rows.push(r);
            }
        }
    }
    // g(S_i e_a, e_b) + g(e_a, S_i e_b) = 0
    for i in 0..d {
        for a in 0..d {
            for b in a..d {
                let mut r = vec![Scalar::zero(); d * d * d];
                for c in 0..d {
                    r[idx(i, a, c)] = r[idx(i, a, c)].add(&gram[(c, b)]);
                    r[idx(i, b, c)] = r[idx(i, b, c)].add(&gram[(a, c)]);
                }
                rows.push(r);
            }
        }
    }
    Ok(Matrix::from_rows(rows)?.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::symplectic::SymplecticSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn basic() -> GroupChart {
        let s = CubicForm::from_entries(Arc::new(SymplecticSpace::darboux(1)), [([1, 1, 1], rat(1))]).unwrap();
        GroupChart::new(s).unwrap()
    }

    #[test]
    fn exp_examples() {
        let g = basic();
        assert!(g.exp_element(&v(&[0, 0])).unwrap().is_identity());
        let e = g.exp_element(&v(&[0, 1])).unwrap();
        assert_eq!(e.linear, Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap());
        assert_eq!(e.translation, vec![ratio(1, 2), rat(1)]);
    }

    #[test]
    fn orbit_map_examples() {
        let g = basic();
        assert_eq!(g.orbit_map(&v(&[0, 0])).unwrap(), v(&[0, 0]));
        // (x, y) ↦ (x + ½y², y)
        assert_eq!(g.orbit_map(&v(&[1, 3])).unwrap(), vec![ratio(11, 2), rat(3)]);
        assert_eq!(g.orbit_map_inverse(&vec![ratio(11, 2), rat(3)]).unwrap(), v(&[1, 3]));
    }

    #[test]
    fn transitivity_and_translations() {
        let g = basic();
        assert_eq!(g.differential(&v(&[3, 5])).unwrap(), Matrix::from_i64_rows(&[&[1, 5], &[0, 1]]).unwrap());
        assert!(g.verify_at(&[v(&[3, 5])]).unwrap().passed);
        assert_eq!(g.translation_subgroup(), Subspace::coordinate(2, &[0]));

        let zero = GroupChart::new(CubicForm::zero(Arc::new(SymplecticSpace::darboux(2)))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(zero.verify_simply_transitive(10, &mut rng, &RationalRange::default()).unwrap().passed);
        assert_eq!(zero.translation_subgroup().dim(), 4);
    }

    #[test]
    fn non_variety_rejected() {
        let s = CubicForm::from_entries(
            Arc::new(SymplecticSpace::darboux(1)),
            [([0, 0, 0], rat(1)), ([1, 1, 1], rat(1))],
        )
        .unwrap();
        assert!(matches!(GroupChart::new(s), Err(Error::NotInVariety(_))));
    }

    #[test]
    fn affine_composition() {
        let a = AffineMap::new(Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap(), v(&[1, 2])).unwrap();
        let b = AffineMap::new(Matrix::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap(), v(&[0, 1])).unwrap();
        let ab = a.compose(&b).unwrap();
        let x = v(&[3, -1]);
        assert_eq!(ab.apply(&x).unwrap(), a.apply(&b.apply(&x).unwrap()).unwrap());
        assert_eq!(AffineMap::identity(2).compose(&a).unwrap(), a);
    }

    #[test]
    fn definite_orthogonal_prolongation_is_trivial() {
        for d in 1..4 {
            assert!(orthogonal_prolongation(&Matrix::identity(d)).unwrap().is_zero());
        }
        let g = Matrix::from_i64_rows(&[&[2, 1], &[1, 3]]).unwrap();
        assert!(orthogonal_prolongation(&g).unwrap().is_zero());
    }
}
