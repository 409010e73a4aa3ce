//! Flat special Kähler structures `(V, J, g, ∇ = D + S_f)`.

use std::sync::Arc;

use rand::Rng;

use super::hermitian::HermitianSpace;
use super::potential::HoloPotential;
use crate::cubic::{CubicForm, Tensor3};
use crate::error::{Error, Result};
use crate::numeric::intmat::integer_family;
use crate::numeric::{Field, Matrix, RationalRange, Scalar, Subspace, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct SKStructure {
    potential: HoloPotential,
}

/// Per-point verdicts. Witnesses are basis indices.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub point: Vector,
    /// `S` totally symmetric.
    pub symmetry_witness: Option<[usize; 3]>,
    /// `[S_X, S_Y] = 0`.
    pub commutator_witness: Option<(usize, usize)>,
    /// `DS` totally symmetric.
    pub ds_symmetry_witness: Option<[usize; 4]>,
    /// `S_X J = -J S_X`.
    pub anticommutation_witness: Option<usize>,
    /// `R^∇(e_i, e_j) = 0`.
    pub curvature_witness: Option<(usize, usize)>,
    /// `J ∇_X J = 2 S_X` with `∇_X J = [S_X, J]`.
    pub levi_civita_witness: Option<usize>,
    /// `DS ≠ 0` although `deg f ≤ 3`.
    pub nonconstant_witness: Option<[usize; 4]>,
    pub support_dim: usize,
    pub support_isotropic: bool,
}

impl PointCheck {
    pub fn passed(&self) -> bool {
        self.symmetry_witness.is_none()
            && self.commutator_witness.is_none()
            && self.ds_symmetry_witness.is_none()
            && self.anticommutation_witness.is_none()
            && self.curvature_witness.is_none()
            && self.levi_civita_witness.is_none()
            && self.nonconstant_witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkReport {
    pub points: Vec<PointCheck>,
}

impl SkReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(PointCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&PointCheck> {
        self.points.iter().find(|p| !p.passed())
    }
}

/// Outcome of the trivial-factor test for a constant cubic form.
#[derive(Clone, Debug, PartialEq)]
pub enum TrivialFactor {
    /// `V = V₀ ⊕ V₁`, complex and `g`-orthogonal, with `V₀ ⊆ ker S`.
    Split { v0: Subspace, v1: Subspace },
    NoTrivialFactor,
}

fn dense4_get(t: &[Scalar], d: usize, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
    &t[((i * d + j) * d + k) * d + l]
}

fn symmetry_witness4(t: &[Scalar], d: usize) -> Option<[usize; 4]> {
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v = dense4_get(t, d, i, j, k, l);
                    if v != dense4_get(t, d, j, i, k, l) || v != dense4_get(t, d, i, k, j, l) || v != dense4_get(t, d, i, j, l, k)
                    {
                        return Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    None
}

impl SKStructure {
    pub fn new(potential: HoloPotential) -> Self {
        Self { potential }
    }

    pub fn potential(&self) -> &HoloPotential {
        &self.potential
    }

    pub fn space(&self) -> &Arc<HermitianSpace> {
        self.potential.space()
    }

    pub fn s_at(&self, x: &[Scalar]) -> Result<CubicForm> {
        self.potential.realize_s(x)
    }

    /// Conditions (i)–(iv), flatness of `∇` and `2 S_X = J ∇_X J` at `x`.
    pub fn check_point(&self, x: &[Scalar]) -> Result<PointCheck> {
        let space = self.space();
        let d = space.real_dim();
        let j = space.j();

        let tensor = self.potential.realize_tensor(x)?;
        let symmetry_witness = tensor.symmetry_witness();
        let s = CubicForm::from_tensor(space.symplectic().clone(), &tensor)?;
        let family = s.endo_family();
        let mats = family.matrices();
        let commutator_witness = family.commutator_witness();

        let ds = self.potential.derivative_tensor(x)?;
        let ds_symmetry_witness = symmetry_witness4(&ds, d);
        let nonconstant_witness = if self.potential.has_constant_cubic() {
            (0..d * d * d * d).find(|&idx| !ds[idx].is_zero()).map(|idx| {
                [idx / (d * d * d), (idx / (d * d)) % d, (idx / d) % d, idx % d]
            })
        } else {
            None
        };

        let (ints, s_den) = integer_family(mats);
        let j_int = integer_family(std::slice::from_ref(j)).0.remove(0);
        let mut anticommutation_witness = None;
        let mut levi_civita_witness = None;
        for (i, m) in ints.iter().enumerate() {
            let (mj, jm) = (m.mul(&j_int), j_int.mul(m));
            if anticommutation_witness.is_none() && !mj.add(&jm).is_zero() {
                anticommutation_witness = Some(i);
            }
            if levi_civita_witness.is_none() && j_int.mul(&mj.sub(&jm)) != m.add(m) {
                levi_civita_witness = Some(i);
            }
        }

        // (D_{e_i} S)_{e_j} from the cubic form τ_i = D_{e_i} σ
        let derivs: Vec<Matrix> = (0..d)
            .map(|i| {
                let slice = Tensor3::from_fn(d, |a, b, c| dense4_get(&ds, d, i, a, b, c).clone());
                let tau = CubicForm::from_tensor(space.symplectic().clone(), &slice)?;
                Ok(tau.endo_family().matrices().to_vec())
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        let (dints, d_den) = integer_family(&derivs);
        let s_den2 = &s_den * &s_den;
        let mut curvature_witness = None;
        'outer: for a in 0..d {
            for b in a + 1..d {
                // R(e_a, e_b) scaled by s_den²·d_den
                let r = dints[a * d + b]
                    .sub(&dints[b * d + a])
                    .scale(&s_den2)
                    .add(&ints[a].commutator(&ints[b]).scale(&d_den));
                if !r.is_zero() {
                    curvature_witness = Some((a, b));
                    break 'outer;
                }
            }
        }

        let support = family.support();
        Ok(PointCheck {
            point: x.to_vec(),
            symmetry_witness,
            commutator_witness,
            ds_symmetry_witness,
            anticommutation_witness,
            curvature_witness,
            levi_civita_witness,
            nonconstant_witness,
            support_dim: support.dim(),
            support_isotropic: space.symplectic().is_isotropic(&support)?,
        })
    }

    pub fn check_flat_sk(&self, points: &[Vector]) -> Result<SkReport> {
        Ok(SkReport { points: points.iter().map(|x| self.check_point(x)).collect::<Result<_>>()? })
    }

    pub fn check_flat_sk_random<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<SkReport> {
        let d = self.space().real_dim();
        let points: Vec<Vector> = (0..samples).map(|_| range.sample_vec(rng, d)).collect();
        self.check_flat_sk(&points)
    }

    /// Splits off the flat factor when `dim_R Σ_S < n`.
    pub fn trivial_factor_split(&self) -> Result<TrivialFactor> {
        if !self.potential.has_constant_cubic() {
            return Err(Error::NonConstantCubic(self.potential.degree()));
        }
        let space = self.space();
        let origin = vec![Scalar::zero(); space.real_dim()];
        let support = self.s_at(&origin)?.support();
        if support.dim() >= space.n() {
            return Ok(TrivialFactor::NoTrivialFactor);
        }
        let w = space.complexify(&support)?;
        if !space.is_isotropic_complex(&w)? {
            return Err(Error::NotIsotropic);
        }
        let mut vs = w.basis_vectors();
        vs.extend(space.isotropic_dual(&w)?);
        let v1 = Subspace::span(space.n(), &vs);
        let v0 = space.orthogonal_complement(&v1)?;
        Ok(TrivialFactor::Split { v0: space.realify(&v0)?, v1: space.realify(&v1)? })
    }

    /// Checks a split: complementary, `J`-invariant, `g`-orthogonal,
    /// `g|_{V₀}` nondegenerate and `S_X = 0` for `X ∈ V₀`.
    pub fn verify_split(&self, v0: &Subspace, v1: &Subspace) -> Result<bool> {
        let space = self.space();
        let d = space.real_dim();
        if v0.dim() + v1.dim() != d || v0.sum(v1)?.dim() != d {
            return Ok(false);
        }
        let j = space.j();
        if v0.image(j)? != *v0 || v1.image(j)? != *v1 {
            return Ok(false);
        }
        let g = space.g();
        let b0 = v0.basis();
        let cross = b0.transpose().mul(g)?.mul(v1.basis())?;
        let restricted = b0.transpose().mul(g)?.mul(b0)?;
        if !cross.is_zero() || (v0.dim() > 0 && restricted.det()?.is_zero()) {
            return Ok(false);
        }
        let family = self.s_at(&vec![Scalar::zero(); d])?.endo_family();
        for v in v0.basis_vectors() {
            if !family.s_x(&v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Linear part of the `C_J` constraints and the quadratic obstruction on it.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport {
    /// `dim {σ : S_X J = -J S_X ∀X}`.
    pub anticommuting_dim: usize,
    /// `Q(S) = Σ_i tr(S_{e_i}²)` restricted to that space is positive definite.
    pub trace_form_definite: bool,
    /// `C_J = {0}`.
    pub trivial: bool,
}

/// Computes the space `A` of cubic forms whose endomorphisms anticommute with
/// `J`, and the Gram matrix of `B(S, T) = Σ_i tr(S_{e_i} T_{e_i})` on it.
///
/// Every `S ∈ C(sp(V))` has `S_X S_X = 0`, hence `Q(S) = 0`; if `Q` is
/// definite on `A` then `C_J = C(sp(V)) ∩ A = {0}`.
pub fn rigidity(space: &HermitianSpace) -> Result<RigidityReport> {
    let d = space.real_dim();
    let j = space.j();
    let sp = space.symplectic().clone();
    let triples: Vec<[usize; 3]> = (0..d)
        .flat_map(|a| (a..d).flat_map(move |b| (b..d).map(move |c| [a, b, c])))
        .collect();
    let families: Vec<Vec<Matrix>> = triples
        .iter()
        .map(|&t| Ok(CubicForm::from_entries(sp.clone(), [(t, Scalar::one())])?.endo_family().matrices().to_vec()))
        .collect::<Result<_>>()?;

    // one column per triple: all entries of S_{e_i} J + J S_{e_i}
    let cols: Vec<Vec<Scalar>> = families
        .iter()
        .map(|mats| {
            let mut col = Vec::with_capacity(d * d * d);
            for m in mats {
                col.extend_from_slice(m.mul(j)?.add(&j.mul(m)?)?.entries());
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let constraints = Matrix::from_cols(d * d * d, &cols)?;
    let a = constraints.kernel();
    let basis: Vec<Vec<Matrix>> = a
        .basis_vectors()
        .iter()
        .map(|coeffs| combine(&families, coeffs, d))
        .collect::<Result<_>>()?;

    let r = basis.len();
    let mut gram = Matrix::zeros(r, r);
    for u in 0..r {
        for v in u..r {
            let mut acc = Scalar::zero();
            for i in 0..d {
                acc = acc.add(&basis[u][i].mul(&basis[v][i])?.trace()?);
            }
            gram[(u, v)] = acc.clone();
            gram[(v, u)] = acc;
        }
    }
    let definite = is_positive_definite(&gram) || is_positive_definite(&gram.neg());
    Ok(RigidityReport { anticommuting_dim: r, trace_form_definite: definite, trivial: r == 0 || definite })
}

fn combine(families: &[Vec<Matrix>], coeffs: &[Scalar], d: usize) -> Result<Vec<Matrix>> {
    let mut out = vec![Matrix::zeros(d, d); d];
    for (fam, c) in families.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (slot, m) in out.iter_mut().zip(fam) {
            *slot = slot.add(&m.scale(c))?;
        }
    }
    Ok(out)
}

/// Exact `LDLᵀ`: all pivots positive.
fn is_positive_definite(m: &Matrix) -> bool {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        if pivot <= Scalar::zero() {
            return false;
        }
        let inv = pivot.inv().expect("positive pivot");
        for i in k + 1..n {
            let f = a[(i, k)].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for jj in k..n {
                let v = a[(i, jj)].sub(&f.mul(&a[(k, jj)]));
                a[(i, jj)] = v;
            }
        }
    }
    true
}
