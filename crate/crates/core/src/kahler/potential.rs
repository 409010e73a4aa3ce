//! Holomorphic polynomial potentials `f` and the real cubic form
//! `S_f = ∂³f + conj(∂³f)`.
//!
//! A real vector `X` enters holomorphic derivatives through `ζ(X)`, so
//! `S_f(X, Y, Z) = 2·Re F(ζX, ζY, ζZ)` with `F = ∂³f` at the base point.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::hermitian::HermitianSpace;
use super::polynomial::Polynomial;
use crate::cubic::{CubicForm, Tensor3};
use crate::error::{Error, Result};
use crate::numeric::{parse_scalar, scalar_to_f64, Field, GaussianScalar, Matrix, RationalRange, Scalar, Subspace};

const FILE_MAGIC: &str = "potential v1";

#[derive(Clone, Debug)]
pub struct HoloPotential {
    space: Arc<HermitianSpace>,
    poly: Polynomial,
    third: BTreeMap<[usize; 3], Polynomial>,
    fourth: BTreeMap<[usize; 4], Polynomial>,
}

impl PartialEq for HoloPotential {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.poly == other.poly
    }
}

fn sorted_tuples<const K: usize>(n: usize) -> Vec<[usize; K]> {
    let mut out = Vec::new();
    let mut cur = [0usize; K];
    fn rec<const K: usize>(pos: usize, start: usize, n: usize, cur: &mut [usize; K], out: &mut Vec<[usize; K]>) {
        if pos == K {
            out.push(*cur);
            return;
        }
        for v in start..n {
            cur[pos] = v;
            rec(pos + 1, v, n, cur, out);
        }
    }
    rec(0, 0, n, &mut cur, &mut out);
    out
}

fn sort_key<const K: usize>(mut idx: [usize; K]) -> [usize; K] {
    idx.sort_unstable();
    idx
}

/// `i^k` factor picked up by real basis vector `e_r` under `ζ`.
fn i_power(idx: &[usize], n: usize) -> usize {
    idx.iter().filter(|&&r| r >= n).count()
}

impl HoloPotential {
    pub fn new(space: Arc<HermitianSpace>, poly: Polynomial) -> Result<Self> {
        let n = space.n();
        Error::check_dim(n, poly.nvars())?;
        let third = sorted_tuples::<3>(n).into_iter().map(|t| (t, poly.derivative_multi(&t))).collect();
        let fourth = sorted_tuples::<4>(n).into_iter().map(|t| (t, poly.derivative_multi(&t))).collect();
        Ok(Self { space, poly, third, fourth })
    }

    pub fn zero(space: Arc<HermitianSpace>) -> Self {
        let n = space.n();
        Self::new(space, Polynomial::zero(n)).expect("matching variable count")
    }

    pub fn space(&self) -> &Arc<HermitianSpace> {
        &self.space
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `∂³f` is constant exactly when `deg f ≤ 3`.
    pub fn has_constant_cubic(&self) -> bool {
        self.degree() <= 3
    }

    /// Dense `n×n×n` tensor `∂_a∂_b∂_c f(z)`.
    pub fn third_derivative_tensor(&self, z: &[GaussianScalar]) -> Result<Vec<GaussianScalar>> {
        let n = self.space.n();
        Error::check_dim(n, z.len())?;
        let mut values = BTreeMap::new();
        for (k, p) in &self.third {
            values.insert(*k, p.evaluate(z)?);
        }
        let mut out = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push(values[&sort_key([a, b, c])].clone());
                }
            }
        }
        Ok(out)
    }

    /// `S_f` at the real point `x`.
    pub fn realize_s(&self, x: &[Scalar]) -> Result<CubicForm> {
        CubicForm::from_tensor(self.space.symplectic().clone(), &self.realize_tensor(x)?)
    }

    /// `S_f(x)` as a dense real tensor, before the symmetry check.
    pub fn realize_tensor(&self, x: &[Scalar]) -> Result<Tensor3> {
        let z = self.space.to_complex(x)?;
        let n = self.space.n();
        let mut values = BTreeMap::new();
        for (k, p) in &self.third {
            values.insert(*k, p.evaluate(&z)?);
        }
        let two = Scalar::from_i64(2);
        Ok(Tensor3::from_fn(2 * n, |r, s, t| {
            let f = &values[&sort_key([r % n, s % n, t % n])];
            f.mul_i_pow(i_power(&[r, s, t], n)).re.mul(&two)
        }))
    }

    /// `(D_X S_f)(Y, Z, W) = 2·Re ∂⁴f(ζX, ζY, ζZ, ζW)` at `x`, dense
    /// `(2n)⁴` row-major.
    pub fn derivative_tensor(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        let z = self.space.to_complex(x)?;
        let n = self.space.n();
        let d = 2 * n;
        let mut values = BTreeMap::new();
        for (k, p) in &self.fourth {
            values.insert(*k, p.evaluate(&z)?);
        }
        let two = Scalar::from_i64(2);
        let mut out = Vec::with_capacity(d * d * d * d);
        for r in 0..d {
            for s in 0..d {
                for t in 0..d {
                    for u in 0..d {
                        let f = &values[&sort_key([r % n, s % n, t % n, u % n])];
                        out.push(f.mul_i_pow(i_power(&[r, s, t, u], n)).re.mul(&two));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Complex span `span_C{∂_a∂_b∂ f(z)}` of the holomorphic cubic at `z`.
    pub fn holomorphic_support(&self, z: &[GaussianScalar]) -> Result<Subspace<GaussianScalar>> {
        let n = self.space.n();
        let t = self.third_derivative_tensor(z)?;
        let vs: Vec<Vec<GaussianScalar>> = (0..n * n).map(|ab| t[ab * n..ab * n + n].to_vec()).collect();
        Ok(Subspace::span(n, &vs))
    }

    /// `S_{f_x} v` in floating point: `ζ(S_v v)_c = -2i·η_c·conj(Σ F_abc w_a w_b)`
    /// with `w = ζ(v)` and `F` evaluated at `ζ(x)`.
    pub fn quadratic_f64(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let n = self.space.n();
        Error::check_dim(2 * n, x.len())?;
        Error::check_dim(2 * n, v.len())?;
        let z: Vec<Complex64> = (0..n).map(|j| Complex64::new(x[j], x[n + j])).collect();
        let w: Vec<Complex64> = (0..n).map(|j| Complex64::new(v[j], v[n + j])).collect();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (&[a, b, c], p) in &self.third {
            if p.is_zero() {
                continue;
            }
            let val = p.evaluate_c64(&z)?;
            // every distinct permutation of (a, b, c) contributes to the slot of its last index
            for [i, j, k] in distinct_permutations([a, b, c]) {
                g[k] += val * w[i] * w[j];
            }
        }
        let (p, _) = self.space.signature();
        let mut out = vec![0.0; 2 * n];
        for c in 0..n {
            let eta = if c < p { 1.0 } else { -1.0 };
            let s = Complex64::new(0.0, -2.0) * eta * g[c].conj();
            out[c] = s.re;
            out[n + c] = s.im;
        }
        Ok(out)
    }

    /// `f ∘ M⁻¹` for an invertible complex matrix `M`.
    pub fn transform(&self, m: &Matrix<GaussianScalar>) -> Result<Self> {
        Self::new(self.space.clone(), self.poly.compose_linear(&m.inverse()?)?)
    }

    /// `f = P(λ z)` for a random `P` in `λ.rows()` variables with monomials of
    /// degree `min_degree..=max_degree`; the support of `∂³f` lies in
    /// `span{λ rows}` at every point.
    pub fn sample_with_rows<R: Rng + ?Sized>(
        space: Arc<HermitianSpace>,
        lambda: &Matrix<GaussianScalar>,
        min_degree: u32,
        max_degree: u32,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Self> {
        Error::check_dim(space.n(), lambda.cols())?;
        let p = Polynomial::random(lambda.rows(), min_degree, max_degree, rng, range);
        Self::new(space, p.compose_linear(lambda)?)
    }

    /// Random potential whose realized support lies in the realification of
    /// the isotropic complex subspace `w` (rows `η ⊙ conj(w_a)`).
    pub fn sample_on<R: Rng + ?Sized>(
        space: Arc<HermitianSpace>,
        w: &Subspace<GaussianScalar>,
        min_degree: u32,
        max_degree: u32,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Self> {
        if !space.is_isotropic_complex(w)? {
            return Err(Error::NotIsotropic);
        }
        let lambda = Self::rows_for(&space, w)?;
        Self::sample_with_rows(space, &lambda, min_degree, max_degree, rng, range)
    }

    fn rows_for(space: &HermitianSpace, w: &Subspace<GaussianScalar>) -> Result<Matrix<GaussianScalar>> {
        let (p, _) = space.signature();
        let rows: Vec<Vec<GaussianScalar>> = w
            .basis_vectors()
            .iter()
            .map(|v| v.iter().enumerate().map(|(c, x)| if c < p { x.conj() } else { x.conj().neg() }).collect())
            .collect();
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, space.n()));
        }
        Matrix::from_rows(rows)
    }

    /// Homogeneous cubic with realized support exactly the realification of `w`.
    pub fn sample_regular_cubic<R: Rng + ?Sized>(
        space: Arc<HermitianSpace>,
        w: &Subspace<GaussianScalar>,
        rng: &mut R,
        range: &RationalRange,
    ) -> Result<Self> {
        let target = space.realify(w)?;
        let origin = vec![Scalar::zero(); space.real_dim()];
        for _ in 0..crate::cubic::SAMPLE_REGULAR_ATTEMPTS {
            let f = Self::sample_on(space.clone(), w, 3, 3, rng, range)?;
            if f.realize_s(&origin)?.support() == target {
                return Ok(f);
            }
        }
        Err(Error::SamplingExhausted(crate::cubic::SAMPLE_REGULAR_ATTEMPTS))
    }

    /// Canonical text form: header, then `a1 .. an  re im` per monomial.
    pub fn to_text(&self) -> String {
        let (p, q) = self.space.signature();
        let mut out = format!("{FILE_MAGIC} n={} p={p} q={q}\n", self.space.n());
        for (e, c) in self.poly.terms() {
            let exps: Vec<String> = e.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}  {} {}", exps.join(" "), c.re, c.im);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let bad_header = || Error::parse(1, format!("expected `{FILE_MAGIC} n=<n> p=<p> q=<q>`"));
        let rest = header.trim().strip_prefix(FILE_MAGIC).ok_or_else(bad_header)?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(bad_header());
        }
        let mut nums = [0usize; 3];
        for ((slot, field), key) in nums.iter_mut().zip(&fields).zip(["n=", "p=", "q="]) {
            *slot = field.strip_prefix(key).and_then(|v| v.parse().ok()).ok_or_else(bad_header)?;
        }
        let [n, p, q] = nums;
        if p + q != n || n == 0 {
            return Err(Error::parse(1, format!("signature ({p},{q}) does not match n={n}")));
        }
        let space = Arc::new(HermitianSpace::new(p, q).map_err(|e| Error::parse(1, e.to_string()))?);
        let mut terms: BTreeMap<Vec<u32>, GaussianScalar> = BTreeMap::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != n + 2 {
                return Err(Error::parse(lineno, format!("expected {n} exponents and a coefficient `re im`")));
            }
            let exps = toks[..n]
                .iter()
                .map(|t| t.parse::<u32>().map_err(|_| Error::parse(lineno, format!("bad exponent `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            let re = parse_scalar(toks[n]).map_err(|_| Error::parse(lineno, format!("bad real part `{}`", toks[n])))?;
            let im = parse_scalar(toks[n + 1])
                .map_err(|_| Error::parse(lineno, format!("bad imaginary part `{}`", toks[n + 1])))?;
            if terms.contains_key(&exps) {
                return Err(Error::parse(lineno, "duplicate monomial"));
            }
            terms.insert(exps, GaussianScalar::new(re, im));
        }
        Self::new(space, Polynomial::from_terms(n, terms)?)
    }
}

fn distinct_permutations(t: [usize; 3]) -> Vec<[usize; 3]> {
    let [a, b, c] = t;
    let mut out = vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
    out.sort_unstable();
    out.dedup();
    out
}

/// Float view of a real point.
pub fn point_to_f64(x: &[Scalar]) -> Vec<f64> {
    x.iter().map(scalar_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> GaussianScalar {
        GaussianScalar::new(rat(re), rat(im))
    }

    fn space(p: usize, q: usize) -> Arc<HermitianSpace> {
        Arc::new(HermitianSpace::new(p, q).unwrap())
    }

    #[test]
    fn third_derivatives_of_simple_potentials() {
        let sp = space(2, 0);
        let cube = HoloPotential::new(sp.clone(), Polynomial::var(2, 0).pow(3)).unwrap();
        let t = cube.third_derivative_tensor(&[g(3, 1), g(-2, 5)]).unwrap();
        assert_eq!(t[0], g(6, 0));
        assert!(t[1..].iter().all(GaussianScalar::is_zero));

        let quad = HoloPotential::new(sp, Polynomial::var(2, 0).mul(&Polynomial::var(2, 1))).unwrap();
        assert!(quad.third_derivative_tensor(&[g(1, 1), g(2, 0)]).unwrap().iter().all(GaussianScalar::is_zero));
    }

    #[test]
    fn zero_potential_realizes_to_zero() {
        let f = HoloPotential::zero(space(1, 1));
        assert!(f.realize_s(&[rat(1), rat(2), rat(3), rat(4)]).unwrap().is_zero());
    }

    #[test]
    fn realized_form_anticommutes_with_j() {
        let sp = space(2, 1);
        let f = HoloPotential::new(
            sp.clone(),
            Polynomial::var(3, 0).pow(2).mul(&Polynomial::var(3, 2)).scale(&g(1, 2)).add(&Polynomial::var(3, 1).pow(4)),
        )
        .unwrap();
        let x = vec![rat(1), rat(-1), ratio(2, 3), rat(0), rat(3), ratio(-1, 2)];
        let s = f.realize_s(&x).unwrap();
        let j = sp.j();
        for m in s.endo_family().matrices() {
            assert!(m.mul(j).unwrap().add(&j.mul(m).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn realized_support_doubles_complex_dimension() {
        let sp = space(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let range = RationalRange::default();
        for m in 0..=2 {
            let w = sp.random_isotropic_complex(m, &mut rng, &range).unwrap();
            let f = HoloPotential::sample_regular_cubic(sp.clone(), &w, &mut rng, &range).unwrap();
            let x = vec![Scalar::zero(); 8];
            let real = f.realize_s(&x).unwrap().support();
            assert_eq!(real.dim(), 2 * m);
            assert_eq!(real, sp.realify(&w).unwrap());
            let hol = f.holomorphic_support(&sp.to_complex(&x).unwrap()).unwrap();
            assert_eq!(hol.dim(), m);
        }
    }

    #[test]
    fn float_quadratic_matches_exact_family() {
        let sp = space(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let range = RationalRange::default();
        let w = sp.random_isotropic_complex(1, &mut rng, &range).unwrap();
        let f = HoloPotential::sample_on(sp.clone(), &w, 3, 4, &mut rng, &range).unwrap();
        let x = range.sample_vec(&mut rng, 4);
        let v = range.sample_vec(&mut rng, 4);
        let exact = f.realize_s(&x).unwrap().endo_family().apply(&v, &v).unwrap();
        let approx = f.quadratic_f64(&point_to_f64(&x), &point_to_f64(&v)).unwrap();
        for (e, a) in exact.iter().zip(&approx) {
            let e = scalar_to_f64(e);
            assert!((e - a).abs() <= 1e-9 * (1.0 + e.abs()), "{e} vs {a}");
        }
    }

    #[test]
    fn text_round_trip() {
        let sp = space(1, 1);
        let poly = Polynomial::from_terms(
            2,
            [(vec![3, 0], g(1, 0)), (vec![1, 2], GaussianScalar::new(ratio(-1, 2), rat(3)))],
        )
        .unwrap();
        let f = HoloPotential::new(sp, poly).unwrap();
        let text = f.to_text();
        assert_eq!(text, "potential v1 n=2 p=1 q=1\n1 2  -1/2 3\n3 0  1 0\n");
        assert_eq!(HoloPotential::parse(&text).unwrap(), f);
        assert!(HoloPotential::parse("potential v1 n=2 p=1 q=0\n").is_err());
        assert!(HoloPotential::parse("potential v1 n=2 p=1 q=1\n1 2  1\n").is_err());
        assert!(HoloPotential::parse("potential v1 n=2 p=1 q=1\n1 2  1 0\n1 2  3 0\n").is_err());
    }
}
