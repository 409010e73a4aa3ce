//! Cubic forms `σ ∈ S³V*`, identified with the first prolongation of `sp(V)`
//! through `σ(X, Y, Z) = ω(S_X Y, Z)`.
//!
//! The trilinear form is the stored representation (one value per sorted
//! index triple), so `S_X Y = S_Y X` holds by construction and the
//! commutator and trace conditions are the meaningful membership tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::intmat::{integer_family, IntMatrix};
use crate::numeric::{parse_scalar, Field, Matrix, RationalRange, Scalar, Subspace};
use crate::symplectic::SymplecticSpace;

/// Attempts made by [`CubicForm::sample_regular`] before giving up.
pub const SAMPLE_REGULAR_ATTEMPTS: usize = 32;

const FILE_MAGIC: &str = "cubicform v1";

/// Dense `d×d×d` tensor, row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Scalar::zero(); dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    fn get_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Scalar {
        &mut self.data[(i * self.dim + j) * self.dim + k]
    }

    /// First index triple whose six permutations disagree.
    pub fn symmetry_witness(&self) -> Option<[usize; 3]> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.get(i, j, k);
                    if v != self.get(j, i, k) || v != self.get(i, k, j) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// `T'_{abc} = Σ T_{ijk} m_{ia} m_{jb} m_{kc}` for `m` of shape
    /// `dim × d_out`, one mode at a time.
    pub fn contract(&self, m: &Matrix) -> Result<Self> {
        Error::check_dim(self.dim, m.rows())?;
        let (din, dout) = (self.dim, m.cols());
        // mode 1: [a][j][k]
        let mut t1 = vec![Scalar::zero(); dout * din * din];
        for i in 0..din {
            for a in 0..dout {
                let h = &m[(i, a)];
                if h.is_zero() {
                    continue;
                }
                for jk in 0..din * din {
                    let s = &self.data[i * din * din + jk];
                    if !s.is_zero() {
                        let idx = a * din * din + jk;
                        t1[idx] = t1[idx].add(&s.mul(h));
                    }
                }
            }
        }
        // mode 2: [a][b][k]
        let mut t2 = vec![Scalar::zero(); dout * dout * din];
        for a in 0..dout {
            for j in 0..din {
                for b in 0..dout {
                    let h = &m[(j, b)];
                    if h.is_zero() {
                        continue;
                    }
                    for k in 0..din {
                        let s = &t1[(a * din + j) * din + k];
                        if !s.is_zero() {
                            let idx = (a * dout + b) * din + k;
                            t2[idx] = t2[idx].add(&s.mul(h));
                        }
                    }
                }
            }
        }
        // mode 3: [a][b][c]
        let mut out = Self::zeros(dout);
        for ab in 0..dout * dout {
            for k in 0..din {
                let s = &t2[ab * din + k];
                if s.is_zero() {
                    continue;
                }
                for c in 0..dout {
                    let h = &m[(k, c)];
                    if !h.is_zero() {
                        let idx = ab * dout + c;
                        out.data[idx] = out.data[idx].add(&s.mul(h));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Totally symmetric trilinear form on a symplectic space.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicForm {
    space: Arc<SymplecticSpace>,
    coeffs: BTreeMap<[usize; 3], Scalar>,
}

fn sorted(i: usize, j: usize, k: usize) -> [usize; 3] {
    let mut t = [i, j, k];
    t.sort_unstable();
    t
}

impl CubicForm {
    pub fn zero(space: Arc<SymplecticSpace>) -> Self {
        Self { space, coeffs: BTreeMap::new() }
    }

    /// From `(i, j, k) ↦ value` entries; indices are sorted, later entries
    /// for the same triple overwrite earlier ones.
    pub fn from_entries(
        space: Arc<SymplecticSpace>,
        entries: impl IntoIterator<Item = ([usize; 3], Scalar)>,
    ) -> Result<Self> {
        let mut s = Self::zero(space);
        for ([i, j, k], v) in entries {
            s.set(i, j, k, v)?;
        }
        Ok(s)
    }

    /// From a dense tensor, which must be totally symmetric.
    pub fn from_tensor(space: Arc<SymplecticSpace>, t: &Tensor3) -> Result<Self> {
        Error::check_dim(space.dim(), t.dim())?;
        if let Some(w) = t.symmetry_witness() {
            return Err(Error::InvalidDimension(format!("tensor is not totally symmetric at {w:?}")));
        }
        let d = t.dim();
        let mut coeffs = BTreeMap::new();
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    let v = t.get(i, j, k);
                    if !v.is_zero() {
                        coeffs.insert([i, j, k], v.clone());
                    }
                }
            }
        }
        Ok(Self { space, coeffs })
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) -> Result<()> {
        let d = self.dim();
        if i >= d || j >= d || k >= d {
            return Err(Error::InvalidDimension(format!("index triple ({i},{j},{k}) out of range for dim {d}")));
        }
        let key = sorted(i, j, k);
        if v.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, v);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.coeffs.get(&sorted(i, j, k)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn space(&self) -> &Arc<SymplecticSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients keyed by sorted triple.
    pub fn coefficients(&self) -> &BTreeMap<[usize; 3], Scalar> {
        &self.coeffs
    }

    pub fn tensor(&self) -> Tensor3 {
        let mut t = Tensor3::zeros(self.dim());
        for (&[i, j, k], v) in &self.coeffs {
            for [a, b, c] in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                *t.get_mut(a, b, c) = v.clone();
            }
        }
        t
    }

    /// `σ(x, y, z)`.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Scalar> {
        let d = self.dim();
        for v in [x, y, z] {
            Error::check_dim(d, v.len())?;
        }
        let t = self.tensor();
        let mut acc = Scalar::zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul(&y[j]);
                for k in 0..d {
                    let s = t.get(i, j, k);
                    if !s.is_zero() && !z[k].is_zero() {
                        acc = acc.add(&s.mul(&xy).mul(&z[k]));
                    }
                }
            }
        }
        Ok(acc)
    }

    /// The family `X ↦ S_X` with `ω(S_X Y, Z) = σ(X, Y, Z)`.
    pub fn endo_family(&self) -> EndoFamily {
        let d = self.dim();
        let t = self.tensor();
        let raise = self.space.omega_inv_t();
        let mats = (0..d)
            .map(|i| {
                let slice = Matrix::from_fn(d, d, |a, b| t.get(i, a, b).clone());
                raise.mul(&slice).expect("square of ambient dimension")
            })
            .collect();
        EndoFamily { space: self.space.clone(), mats }
    }

    /// `Σ_S = span{S_X Y}`.
    pub fn support(&self) -> Subspace {
        self.endo_family().support()
    }

    /// Membership in `C(sp(V))` together with the stratum data.
    pub fn in_c_sp(&self) -> StratumReport {
        StratumReport::from_family(&self.endo_family())
    }

    /// Membership in `C_J(sp(V))`: commuting, traceless, and `S_X J = -J S_X`.
    pub fn in_c_j(&self, j: &Matrix) -> Result<CjReport> {
        check_complex_structure(&self.space, j)?;
        let family = self.endo_family();
        let stratum = StratumReport::from_family(&family);
        let mut anticommutation_witness = None;
        for (i, m) in family.mats.iter().enumerate() {
            if !m.mul(j)?.add(&j.mul(m)?)?.is_zero() {
                anticommutation_witness = Some(i);
                break;
            }
        }
        let support_j_invariant = stratum.support.image(j)? == stratum.support;
        Ok(CjReport {
            member: stratum.in_variety && anticommutation_witness.is_none(),
            support_isotropic: stratum.isotropic,
            support_j_invariant,
            anticommutation_witness,
            stratum,
        })
    }

    /// `(g·S)_X = g S_{g⁻¹X} g⁻¹`, i.e. `σ'(X,Y,Z) = σ(g⁻¹X, g⁻¹Y, g⁻¹Z)`.
    pub fn act(&self, g: &Matrix) -> Result<Self> {
        let inv = self.space.symplectic_inverse(g)?;
        Self::from_tensor(self.space.clone(), &self.tensor().contract(&inv)?)
    }

    /// The element of `S³W ⊂ S³V` with coordinates `c` in the basis of `w`:
    /// `σ = Σ c_{abc} ω(w_a,·) ω(w_b,·) ω(w_c,·)`, so that
    /// `S_X Y = Σ c_{abc} ω(w_a, X) ω(w_b, Y) w_c ∈ W`.
    pub fn from_subspace_coords(space: Arc<SymplecticSpace>, w: &Subspace, c: &Tensor3) -> Result<Self> {
        Error::check_dim(space.dim(), w.ambient_dim())?;
        Error::check_dim(w.dim(), c.dim())?;
        if w.is_zero() {
            return Ok(Self::zero(space));
        }
        let rows: Vec<Vec<Scalar>> =
            w.basis_vectors().iter().map(|v| space.lower(v)).collect::<Result<_>>()?;
        let lowering = Matrix::from_rows(rows)?;
        Self::from_tensor(space, &c.contract(&lowering)?)
    }

    /// Random symmetric coordinates over `w` (no regularity or isotropy
    /// requirement); the support is contained in `w`.
    pub fn sample_supported<R: Rng + ?Sized>(
        space: Arc<SymplecticSpace>,
        w: &Subspace,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Self> {
        let c = random_symmetric_tensor(w.dim(), rng, range);
        Self::from_subspace_coords(space, w, &c)
    }

    /// Random element of `S³W_reg = {S ∈ S³W : Σ_S = W}` for isotropic `w`.
    pub fn sample_regular<R: Rng + ?Sized>(
        space: Arc<SymplecticSpace>,
        w: &Subspace,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Self> {
        if !space.is_isotropic(w)? {
            return Err(Error::NotIsotropic);
        }
        for _ in 0..SAMPLE_REGULAR_ATTEMPTS {
            let s = Self::sample_supported(space.clone(), w, rng, range)?;
            if s.support() == *w {
                return Ok(s);
            }
        }
        Err(Error::SamplingExhausted(SAMPLE_REGULAR_ATTEMPTS))
    }

    /// Canonical text form: header line, then one `i j k p/q` line per
    /// nonzero coefficient in sorted order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{FILE_MAGIC} dim={}\n", self.dim());
        for (&[i, j, k], v) in &self.coeffs {
            let _ = writeln!(out, "{i} {j} {k} {v}");
        }
        out
    }

    /// Parse the text form onto the Darboux space of the declared dimension.
    /// Unsorted and duplicate triples are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dim = header
            .trim()
            .strip_prefix(FILE_MAGIC)
            .and_then(|rest| rest.trim().strip_prefix("dim="))
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(1, format!("expected `{FILE_MAGIC} dim=<2n>`")))?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::parse(1, format!("dimension {dim} is not a positive even number")));
        }
        let mut form = Self::zero(Arc::new(SymplecticSpace::darboux(dim / 2)));
        for (idx, line) in lines {
            let lineno = idx + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(Error::parse(lineno, "expected `i j k p/q`"));
            }
            let mut ijk = [0usize; 3];
            for (slot, tok) in ijk.iter_mut().zip(&toks[..3]) {
                *slot = tok.parse().map_err(|_| Error::parse(lineno, format!("bad index `{tok}`")))?;
            }
            let [i, j, k] = ijk;
            if !(i <= j && j <= k) {
                return Err(Error::parse(lineno, format!("unsorted triple {i} {j} {k}")));
            }
            if k >= dim {
                return Err(Error::parse(lineno, format!("index {k} out of range for dim {dim}")));
            }
            if form.coeffs.contains_key(&ijk) {
                return Err(Error::parse(lineno, format!("duplicate triple {i} {j} {k}")));
            }
            let v = parse_scalar(toks[3]).map_err(|_| Error::parse(lineno, format!("bad coefficient `{}`", toks[3])))?;
            form.coeffs.insert(ijk, v);
        }
        form.coeffs.retain(|_, v| !v.is_zero());
        Ok(form)
    }
}

/// Checks `J² = -id` and `ω(J·, J·) = ω`.
pub fn check_complex_structure(space: &SymplecticSpace, j: &Matrix) -> Result<()> {
    if j.rows() != space.dim() || j.cols() != space.dim() {
        return Err(Error::IncompatibleJ(format!("expected {0}x{0} matrix", space.dim())));
    }
    if !j.mul(j)?.neg().is_identity() {
        return Err(Error::IncompatibleJ("J² ≠ -id".into()));
    }
    if !space.is_symplectic(j) {
        return Err(Error::IncompatibleJ("J does not preserve ω".into()));
    }
    Ok(())
}

pub(crate) fn random_symmetric_tensor<R: Rng + ?Sized>(k: usize, rng: &mut R, range: &RationalRange) -> Tensor3 {
    let mut t = Tensor3::zeros(k);
    for a in 0..k {
        for b in a..k {
            for c in b..k {
                let v = range.sample(rng);
                for [x, y, z] in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                    *t.get_mut(x, y, z) = v.clone();
                }
            }
        }
    }
    t
}

/// `mats[i] = S_{e_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoFamily {
    space: Arc<SymplecticSpace>,
    mats: Vec<Matrix>,
}

impl EndoFamily {
    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn space(&self) -> &Arc<SymplecticSpace> {
        &self.space
    }

    /// `S_X = Σ x_i S_{e_i}`.
    pub fn s_x(&self, x: &[Scalar]) -> Result<Matrix> {
        let d = self.space.dim();
        Error::check_dim(d, x.len())?;
        let mut acc = Matrix::zeros(d, d);
        for (xi, m) in x.iter().zip(&self.mats) {
            if !xi.is_zero() {
                acc = acc.add(&m.scale(xi))?;
            }
        }
        Ok(acc)
    }

    /// `S_X Y`, which is also the product `X ∘ Y`.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.s_x(x)?.mul_vec(y)
    }

    pub fn support(&self) -> Subspace {
        let vs: Vec<Vec<Scalar>> = self.mats.iter().flat_map(Matrix::columns).collect();
        let (ints, _) = integer_family(&self.mats);
        let chosen: Vec<Vec<Scalar>> =
            IntMatrix::hstack_all(&ints).pivot_columns().into_iter().map(|c| vs[c].clone()).collect();
        Subspace::span(self.space.dim(), &chosen)
    }

    /// First `(i, j)` with `S_{e_i} e_j ≠ S_{e_j} e_i`.
    pub fn symmetry_witness(&self) -> Option<(usize, usize)> {
        let d = self.mats.len();
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .find(|&(i, j)| self.mats[i].column(j) != self.mats[j].column(i))
    }

    /// First `i` with `S_{e_i} ∉ sp(V)`, i.e. `S_iᵀ Ω + Ω S_i ≠ 0`.
    pub fn sp_witness(&self) -> Option<usize> {
        let o = self.space.gram();
        self.mats.iter().position(|m| {
            let lhs = m.transpose().mul(o).and_then(|a| Ok(a.add(&o.mul(m)?)?));
            !lhs.is_ok_and(|a| a.is_zero())
        })
    }

    /// First `(i, j)`, `i < j`, with `[S_{e_i}, S_{e_j}] ≠ 0`.
    pub fn commutator_witness(&self) -> Option<(usize, usize)> {
        let (ints, _) = integer_family(&self.mats);
        let d = ints.len();
        (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).find(|&(i, j)| !ints[i].commutator(&ints[j]).is_zero())
    }

    /// First `i` with `tr S_{e_i} ≠ 0`.
    pub fn trace_witness(&self) -> Option<usize> {
        self.mats.iter().position(|m| !m.trace().expect("square").is_zero())
    }

    /// First `(i, j)` with `S_{e_i} S_{e_j} ≠ 0`.
    pub fn product_witness(&self) -> Option<(usize, usize)> {
        let (ints, _) = integer_family(&self.mats);
        let d = ints.len();
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find(|&(i, j)| !ints[i].mul(&ints[j]).is_zero())
    }

    /// Kernel of `X ↦ S_X`.
    pub fn kernel(&self) -> Subspace {
        let d = self.space.dim();
        // rows indexed by (a, b): X ↦ (S_X)_{ab} = Σ_i x_i (S_{e_i})_{ab}
        let rows: Vec<Vec<Scalar>> = (0..d * d)
            .map(|ab| self.mats.iter().map(|m| m.entries()[ab].clone()).collect())
            .collect();
        Matrix::from_rows(rows).expect("rectangular").kernel()
    }
}

/// Stratum data for `S` with respect to `C(sp(V)) = ⋃_k C(sp(V))_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport {
    pub support: Subspace,
    pub k: usize,
    pub isotropic: bool,
    pub in_variety: bool,
    /// `2n − k` when `in_variety`.
    pub translation_dim: Option<usize>,
    pub commutator_witness: Option<(usize, usize)>,
    pub trace_witness: Option<usize>,
    pub isotropy_witness: Option<(usize, usize)>,
}

impl StratumReport {
    fn from_family(family: &EndoFamily) -> Self {
        let space = family.space();
        let support = family.support();
        let isotropy_witness = space.isotropy_witness(&support).expect("same ambient");
        let commutator_witness = family.commutator_witness();
        let trace_witness = family.trace_witness();
        let in_variety = commutator_witness.is_none() && trace_witness.is_none();
        let k = support.dim();
        Self {
            translation_dim: in_variety.then(|| space.dim() - k),
            isotropic: isotropy_witness.is_none(),
            support,
            k,
            in_variety,
            commutator_witness,
            trace_witness,
            isotropy_witness,
        }
    }

    /// The algebraic test and the support test must give the same verdict.
    pub fn criteria_agree(&self) -> bool {
        self.in_variety == self.isotropic
    }
}

/// Membership data for `C_J(sp(V))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CjReport {
    pub member: bool,
    pub stratum: StratumReport,
    pub anticommutation_witness: Option<usize>,
    pub support_isotropic: bool,
    pub support_j_invariant: bool,
}
