use gausskit::covariance::{extreme_decompose, kn_membership, split_diagonal};
use gausskit::linalg::{max_abs, symmetrize};
use gausskit::purification::{marginal, purify};
use gausskit::sample::{random_member, random_spd, random_state, random_symmetry};
use gausskit::state::{chf, entropy_purity, state_spectrum, GaussianState};
use gausskit::symmetry::{act_on_state, compose, im_inner, inverse, tilde_action, GaussianSymmetry};
use gausskit::symplectic::random_symplectic;
use gausskit::tol::Tolerances;
use gausskit::williamson::{symplectic_spectrum, williamson_decompose};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn state_gap(a: &GaussianState, b: &GaussianState) -> f64 {
    max_abs(&(a.s() - b.s()))
        .max((a.l() - b.l()).amax())
        .max((a.m() - b.m()).amax())
}

fn same_symmetry(a: &GaussianSymmetry, b: &GaussianSymmetry) -> f64 {
    let da = a.alpha().iter().zip(b.alpha()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    da.max(max_abs(&(a.l().matrix() - b.l().matrix())))
        .max((a.phase() - b.phase()).norm())
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn williamson_reconstructs_and_is_congruence_invariant(n in 1usize..=4, seed in any::<u64>()) {
        let a = random_spd(n, seed, 1e4).unwrap();
        let w = williamson_decompose(&a, 1e-9).unwrap();
        prop_assert!(max_abs(&(w.reconstruct() - &a)) <= 1e-8 * max_abs(&a));
        prop_assert!(w.d.windows(2).all(|p| p[0] <= p[1] + 1e-12) || w.d.windows(2).all(|p| p[0] >= p[1] - 1e-12));

        let l = random_symplectic(n, seed.wrapping_add(1), 0.3).unwrap();
        let b = symmetrize(&(l.matrix().transpose() * &a * l.matrix()));
        let mut da = symplectic_spectrum(&a, 1e-9).unwrap();
        let mut db = symplectic_spectrum(&b, 1e-9).unwrap();
        da.sort_by(f64::total_cmp);
        db.sort_by(f64::total_cmp);
        for (x, y) in da.iter().zip(&db) {
            prop_assert!((x - y).abs() <= 1e-7 * x.max(1.0));
        }
    }

    #[test]
    fn membership_matches_symplectic_spectrum(n in 1usize..=3, seed in any::<u64>(), c in 0.3..1.5f64) {
        let s = random_member(n, seed).unwrap() * c;
        let r = kn_membership(&s, &tol()).unwrap();
        let d_min = symplectic_spectrum(&s, 1e-9).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        if (d_min - 0.5).abs() > 1e-6 {
            prop_assert_eq!(r.member, d_min > 0.5);
        }
        prop_assert!(r.tests_agree);
    }

    #[test]
    fn split_identities_hold(d in prop::collection::vec(1.0..50.0f64, 1..6)) {
        let (d1, d2) = split_diagonal(&d, 1e-12).unwrap();
        for k in 0..d.len() {
            prop_assert!(d1[k] <= 1.0 && d2[k] >= 1.0);
            prop_assert!((0.5 * (d1[k] + d2[k]) - d[k]).abs() <= 1e-12 * d[k]);
            prop_assert!((0.5 * (1.0 / d1[k] + 1.0 / d2[k]) - d[k]).abs() <= 1e-12 * d[k]);
        }
    }

    #[test]
    fn extreme_factors_reconstruct(n in 1usize..=3, seed in any::<u64>()) {
        let s = random_member(n, seed).unwrap();
        let e = extreme_decompose(&s, &tol()).unwrap();
        prop_assert!(e.residual <= 1e-8);
        prop_assert!(e.l.residual() <= 1e-9 && e.m.residual() <= 1e-9);
    }

    #[test]
    fn spectrum_and_entropy_are_symmetry_invariant(n in 1usize..=2, seed in any::<u64>()) {
        let st = random_state(n, seed).unwrap();
        let g = random_symmetry(n, seed.wrapping_mul(31).wrapping_add(7)).unwrap();
        let moved = act_on_state(&g, &st).unwrap();
        let a = state_spectrum(&st, 8, &tol()).unwrap();
        let b = state_spectrum(&moved, 8, &tol()).unwrap();
        for (x, y) in a.top_eigenvalues.iter().zip(&b.top_eigenvalues) {
            prop_assert!((x.eigenvalue - y.eigenvalue).abs() <= 1e-8);
        }
        prop_assert!(a.top_eigenvalues.windows(2).all(|p| p[0].eigenvalue >= p[1].eigenvalue));
        let total: f64 = a.top_eigenvalues.iter().map(|e| e.eigenvalue).sum();
        prop_assert!(total <= 1.0 + 1e-12);

        let (ea, eb) = (entropy_purity(&st, &tol()).unwrap(), entropy_purity(&moved, &tol()).unwrap());
        prop_assert!((ea.entropy - eb.entropy).abs() <= 1e-8);
        prop_assert!((ea.purity - eb.purity).abs() <= 1e-8);
        prop_assert!(ea.purity > 0.0 && ea.purity <= 1.0 + 1e-12 && ea.entropy >= -1e-12);
    }

    #[test]
    fn group_laws(n in 1usize..=3, seed in any::<u64>()) {
        let g1 = random_symmetry(n, seed).unwrap();
        let g2 = random_symmetry(n, seed ^ 0x55).unwrap();
        let g3 = random_symmetry(n, seed ^ 0xaa).unwrap();
        let left = compose(&compose(&g1, &g2).unwrap(), &g3).unwrap();
        let right = compose(&g1, &compose(&g2, &g3).unwrap()).unwrap();
        prop_assert!(same_symmetry(&left, &right) <= 1e-10);
        let e = GaussianSymmetry::identity(n).unwrap();
        prop_assert!(same_symmetry(&compose(&g1, &inverse(&g1)).unwrap(), &e) <= 1e-10);
        prop_assert!(same_symmetry(&compose(&inverse(&g1), &g1).unwrap(), &e) <= 1e-10);
        prop_assert!(same_symmetry(&compose(&e, &g1).unwrap(), &g1) <= 1e-12);
    }

    #[test]
    fn tilde_action_preserves_symplectic_form(
        (n, a, b) in (1usize..=3).prop_flat_map(|n| (Just(n), complex_vec(n), complex_vec(n))),
        seed in any::<u64>(),
    ) {
        let l = random_symplectic(n, seed, 0.5).unwrap();
        let ta = tilde_action(&l, &a).unwrap();
        let tb = tilde_action(&l, &b).unwrap();
        prop_assert!((im_inner(&ta, &tb) - im_inner(&a, &b)).abs() <= 1e-10);
    }

    #[test]
    fn marginal_restricts_chf(
        (n, alpha) in (2usize..=3).prop_flat_map(|n| (Just(n), complex_vec(n))),
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let st = random_state(n, seed).unwrap();
        let j = pick.index(n);
        let keep: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let sub = marginal(&st, &keep).unwrap();
        let mut full = alpha.clone();
        full[j] = Complex64::new(0.0, 0.0);
        let short: Vec<Complex64> = keep.iter().map(|&k| alpha[k]).collect();
        let (x, y) = (chf(&st, &full).unwrap(), chf(&sub, &short).unwrap());
        prop_assert!((x - y).norm() <= 1e-12);
    }

    #[test]
    fn purification_round_trip(n in 1usize..=3, seed in any::<u64>()) {
        let st = random_state(n, seed).unwrap();
        let p = purify(&st, &tol()).unwrap();
        let back = marginal(&p.pure_state, &(0..n).collect::<Vec<_>>()).unwrap();
        prop_assert!(state_gap(&back, &st) <= 1e-10);
        let vac = GaussianState::vacuum(2 * n).unwrap();
        let image = act_on_state(&p.symmetry, &vac).unwrap();
        prop_assert!(state_gap(&image, &p.pure_state) <= 1e-9);
        let d = symplectic_spectrum(p.pure_state.s(), 1e-9).unwrap();
        prop_assert!(d.iter().all(|x| (x - 0.5).abs() <= 1e-7));
    }
}
