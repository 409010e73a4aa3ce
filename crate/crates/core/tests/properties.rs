use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symtrans_core::numeric::{ratio, vec_ops, Field, RationalRange, Scalar};
use symtrans_core::{CubicForm, GroupChart, Matrix, Subspace, SymplecticSpace};

fn rational() -> impl Strategy<Value = Scalar> {
    (-10i64..=10, 1i64..=10).prop_map(|(n, d)| ratio(n, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(rational(), rows * cols).prop_map(move |v| Matrix::new(rows, cols, v).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        let (r, _) = m.rref();
        prop_assert_eq!(r.rref().0, r.clone());
        for v in m.kernel().basis_vectors() {
            prop_assert!(vec_ops::is_zero(&m.mul_vec(&v).unwrap()));
        }
    }

    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=5).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap().mul(&b.det().unwrap()));
    }

    #[test]
    fn span_of_rref_rows_is_unchanged(m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = Subspace::column_space(&m);
        prop_assert_eq!(s.canonical(), s.clone());
        let t = Subspace::column_space(&m.transpose().rref().0.transpose());
        prop_assert_eq!(t, s);
    }

    #[test]
    fn sampled_symplectic_matrices(seed in any::<u64>(), n in 1usize..=4) {
        let sp = SymplecticSpace::darboux(n);
        let mut r = rng(seed);
        let range = RationalRange::default();
        let g = sp.random_symplectic(&mut r, &range).unwrap();
        prop_assert!(sp.is_symplectic(&g));
        prop_assert!(g.det().unwrap().is_one());
        let x = range.sample_vec(&mut r, 2 * n);
        let y = range.sample_vec(&mut r, 2 * n);
        prop_assert_eq!(
            sp.omega_eval(&g.mul_vec(&x).unwrap(), &g.mul_vec(&y).unwrap()).unwrap(),
            sp.omega_eval(&x, &y).unwrap()
        );
        let k = (seed % (n as u64 + 1)) as usize;
        let w = sp.random_isotropic(k, &mut r, &range).unwrap();
        prop_assert_eq!(w.dim(), k);
        prop_assert!(sp.is_isotropic(&w).unwrap());
    }

    #[test]
    fn prolongation_identities(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let s = CubicForm::sample_supported(sp.clone(), &Subspace::full(2 * n), &mut r, &RationalRange::default()).unwrap();
        let fam = s.endo_family();
        prop_assert_eq!(fam.symmetry_witness(), None);
        prop_assert_eq!(fam.sp_witness(), None);
        prop_assert_eq!(fam.trace_witness(), None);
        let range = RationalRange::default();
        let (x, y, z) = (range.sample_vec(&mut r, 2 * n), range.sample_vec(&mut r, 2 * n), range.sample_vec(&mut r, 2 * n));
        let sxy = fam.apply(&x, &y).unwrap();
        prop_assert_eq!(sp.omega_eval(&sxy, &z).unwrap(), s.eval(&x, &y, &z).unwrap());
        for (a, b, c) in [(&y, &x, &z), (&z, &y, &x), (&x, &z, &y)] {
            prop_assert_eq!(s.eval(a, b, c).unwrap(), s.eval(&x, &y, &z).unwrap());
        }
    }

    #[test]
    fn isotropic_support_means_variety(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let range = RationalRange::default();
        let k = 1 + (seed % n as u64) as usize;
        let w = sp.random_isotropic(k, &mut r, &range).unwrap();
        let s = CubicForm::sample_regular(sp.clone(), &w, &mut r, &range).unwrap();
        let rep = s.in_c_sp();
        prop_assert!(rep.in_variety && rep.isotropic);
        prop_assert_eq!(rep.k, k);
        prop_assert!(rep.k <= n);
        prop_assert_eq!(rep.translation_dim, Some(2 * n - k));
        let fam = s.endo_family();
        prop_assert_eq!(fam.product_witness(), None);
        let (x, y, z) = (range.sample_vec(&mut r, 2 * n), range.sample_vec(&mut r, 2 * n), range.sample_vec(&mut r, 2 * n));
        let left = fam.apply(&fam.apply(&x, &y).unwrap(), &z).unwrap();
        let right = fam.apply(&x, &fam.apply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn non_isotropic_support_has_commutator(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let range = RationalRange::default();
        let w = sp.random_non_isotropic(2, &mut r, &range).unwrap();
        let s = CubicForm::sample_supported(sp.clone(), &w, &mut r, &range).unwrap();
        let rep = s.in_c_sp();
        prop_assume!(!rep.isotropic);
        prop_assert!(rep.commutator_witness.is_some());
        prop_assert!(!rep.in_variety);
        prop_assert!(rep.criteria_agree());
    }

    #[test]
    fn action_is_equivariant(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let range = RationalRange::default();
        let w = sp.random_isotropic(n, &mut r, &range).unwrap();
        let s = CubicForm::sample_supported(sp.clone(), &w, &mut r, &range).unwrap();
        let g = sp.random_symplectic(&mut r, &range).unwrap();
        let gs = s.act(&g).unwrap();
        prop_assert_eq!(gs.support(), s.support().image(&g).unwrap());

        let g_inv = sp.symplectic_inverse(&g).unwrap();
        let (h, hg) = (GroupChart::new(s).unwrap(), GroupChart::new(gs).unwrap());
        let x = range.sample_vec(&mut r, 2 * n);
        let lhs = hg.exp_element(&g.mul_vec(&x).unwrap()).unwrap();
        let rhs = h.exp_element(&x).unwrap().conjugate(&g, &g_inv).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gl_w_extension_matches_restriction(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let range = RationalRange::default();
        let k = 1 + (seed % n as u64) as usize;
        let w = sp.random_isotropic(k, &mut r, &range).unwrap();
        let s = CubicForm::sample_regular(sp.clone(), &w, &mut r, &range).unwrap();
        let h = range.sample_invertible(&mut r, k).unwrap();
        let g = sp.extend_from_isotropic(&w, &h).unwrap();
        prop_assert!(sp.is_symplectic(&g));
        let basis = w.basis_vectors();
        for a in 0..k {
            let expect = (0..k).fold(vec![Scalar::zero(); 2 * n], |acc, b| {
                vec_ops::add(&acc, &vec_ops::scale(&basis[b], &h[(b, a)]))
            });
            prop_assert_eq!(g.mul_vec(&basis[a]).unwrap(), expect);
        }
        let gs = s.act(&g).unwrap();
        prop_assert_eq!(gs.support(), w);
        prop_assert!(gs.in_c_sp().in_variety);
    }

    #[test]
    fn group_law_and_orbit_inverse(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let range = RationalRange::default();
        let w = sp.random_isotropic(n, &mut r, &range).unwrap();
        let chart = GroupChart::new(CubicForm::sample_supported(sp, &w, &mut r, &range).unwrap()).unwrap();
        let x = range.sample_vec(&mut r, 2 * n);
        let y = range.sample_vec(&mut r, 2 * n);
        let (ex, ey) = (chart.exp_element(&x).unwrap(), chart.exp_element(&y).unwrap());
        let sum = chart.exp_element(&vec_ops::add(&x, &y)).unwrap();
        prop_assert_eq!(ex.compose(&ey).unwrap(), sum.clone());
        prop_assert_eq!(ey.compose(&ex).unwrap(), sum);
        prop_assert_eq!(chart.orbit_map(&chart.orbit_map_inverse(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(chart.orbit_map_inverse(&chart.orbit_map(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(chart.exp_element(&x).unwrap().apply(&vec![Scalar::zero(); 2 * n]).unwrap(), chart.orbit_map(&x).unwrap());
        prop_assert!(chart.verify_simply_transitive(5, &mut r, &range).unwrap().passed);
        let k = chart.cubic().support().dim();
        prop_assert_eq!(chart.translation_subgroup().dim(), 2 * n - k);
    }

    #[test]
    fn cubic_text_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let sp = Arc::new(SymplecticSpace::darboux(n));
        let mut r = rng(seed);
        let s = CubicForm::sample_supported(sp, &Subspace::full(2 * n), &mut r, &RationalRange::default()).unwrap();
        let text = s.to_text();
        let back = CubicForm::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, s);
    }
}
