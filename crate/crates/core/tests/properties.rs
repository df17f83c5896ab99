use mbqg_core::algebra::check_algebra;
use mbqg_core::bundle::Bundle;
use mbqg_core::calculus::FirstOrderCalculus;
use mbqg_core::covariant::{
    close_ideal, find_isomorphism, reconstruct_left, solve_left_action, solve_right_action, IdealSide,
};
use mbqg_core::bicov::solve_kappa;
use mbqg_core::fixtures::{self, Fixture};
use mbqg_core::group::MultiBraidedGroup;
use mbqg_core::linalg::factor_through;
use mbqg_core::scalar::Q;
use mbqg_core::suite::{self, SuiteOpts};
use mbqg_core::{id, LinMap, Scalar, SparseVec, Subspace};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn cfg(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x6d62_7167), failure_persistence: None, ..Config::default() }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::frac(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (small_q(), small_q(), any::<bool>()).prop_map(|(re, im, real)| if real { Scalar::new(re, Q::from_int(0)) } else { Scalar::new(re, im) })
}

fn matrix(cod: usize, dom: usize) -> impl Strategy<Value = LinMap> {
    // Sparse-ish entries keep ranks varied.
    proptest::collection::vec(prop_oneof![3 => Just(Scalar::from_int(0)), 2 => scalar()], cod * dom)
        .prop_map(move |v| LinMap::from_fn(cod, dom, |i, j| v[i * dom + j].clone()))
}

fn group(f: &Fixture) -> MultiBraidedGroup {
    MultiBraidedGroup::new(f.group.clone()).unwrap()
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, Scalar::from_int(1));
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn kron_mixed_product(f in matrix(2, 3), u in matrix(3, 2), g in matrix(2, 2), v in matrix(2, 3)) {
        let lhs = &f.kron(&g) * &u.kron(&v);
        let rhs = (&f * &u).kron(&(&g * &v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn factor_through_solves_exactly(f in matrix(4, 3), h in matrix(2, 4)) {
        let g = &h * &f;
        let x = factor_through(&f, &g).unwrap();
        prop_assert_eq!(&x * &f, g);
    }

    #[test]
    fn factor_through_rejects_with_kernel_witness(f in matrix(2, 3), g in matrix(2, 3)) {
        match factor_through(&f, &g) {
            Ok(x) => prop_assert_eq!(&x * &f, g),
            Err(e) => {
                let w = e.witness().unwrap();
                prop_assert!(f.apply(&w.input).is_zero());
                prop_assert!(!g.apply(&w.input).is_zero());
                prop_assert_eq!(&g.apply(&w.input), &w.residual);
            }
        }
    }

    #[test]
    fn rank_nullity_and_inverse(m in matrix(4, 4)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), 4);
        for v in m.kernel().basis() {
            prop_assert!(m.apply(v).is_zero());
        }
        match m.invert() {
            Ok(inv) => {
                prop_assert_eq!(&m * &inv, id(4));
                prop_assert_eq!(&inv * &m, id(4));
            }
            Err(_) => prop_assert!(m.rank() < 4),
        }
    }

    #[test]
    fn quotient_kills_the_subspace(m in matrix(5, 3)) {
        let s = m.image();
        let q = s.quotient();
        prop_assert!((&q.proj * &s.inclusion()).is_zero());
        prop_assert_eq!(q.proj.rank(), 5 - s.dim());
        prop_assert_eq!(&q.proj * &q.section, id(5 - s.dim()));
    }

    #[test]
    fn subspace_lattice(a in matrix(4, 2), b in matrix(4, 2)) {
        let (sa, sb) = (a.image(), b.image());
        let (sum, meet) = (sa.sum(&sb), sa.intersect(&sb));
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        prop_assert!(meet.is_subspace_of(&sa) && meet.is_subspace_of(&sb));
        prop_assert!(sa.is_subspace_of(&sum) && sb.is_subspace_of(&sum));
    }
}

/// Random generator sets inside `ker ε`, closed to an ideal when possible.
fn ideal_case(f: Fixture) -> impl Strategy<Value = (MultiBraidedGroup, Vec<SparseVec>)> {
    let g = group(&f);
    let ker = g.eps().kernel();
    let basis: Vec<SparseVec> = ker.basis().to_vec();
    let k = basis.len();
    proptest::collection::vec(proptest::collection::vec(-2i64..=2, k), 0..=2).prop_map(move |coeffs| {
        let gens = coeffs
            .iter()
            .map(|cs| {
                cs.iter().zip(&basis).fold(SparseVec::new(), |acc, (c, b)| acc.add_scaled(&Scalar::from_int(*c), b))
            })
            .collect();
        (MultiBraidedGroup::new(g.data.clone()).unwrap(), gens)
    })
}

fn fixture_ideal_cases() -> impl Strategy<Value = (MultiBraidedGroup, Vec<SparseVec>)> {
    prop_oneof![ideal_case(fixtures::k2()), ideal_case(fixtures::z3()), ideal_case(fixtures::h4()), ideal_case(fixtures::gr())]
}

proptest! {
    #![proptest_config(cfg(48))]

    /// ideal -> calculus -> ideal is the identity, the dimension law holds,
    /// and the independent decision procedures agree.
    #[test]
    fn reconstruction_laws((g, gens) in fixture_ideal_cases()) {
        let n = g.dim();
        let Ok(ideal) = close_ideal(&g, &gens, IdealSide::Right) else { return Ok(()) };
        let c = reconstruct_left(&g, &ideal).unwrap();
        let lc = solve_left_action(&g, &c).unwrap();
        prop_assert_eq!(&lc.ideal, &ideal);
        let ker = g.eps().kernel();
        prop_assert_eq!(lc.k(), ker.dim() - ideal.dim());
        prop_assert_eq!(c.gdim, n * lc.k());
        let right = solve_right_action(&g, &c).is_ok();
        let kappa = solve_kappa(&g, &c).is_ok();
        prop_assert_eq!(kappa, right);
        let ad_stable = ideal.image_under(&g.ad()).is_subspace_of(&ideal.tensor(&Subspace::full(n)));
        prop_assert_eq!(ad_stable, right);
    }

    /// A calculus transported along a random change of basis of Γ is found
    /// isomorphic to the original.
    #[test]
    fn transported_calculus_is_isomorphic(t in matrix(2, 2)) {
        prop_assume!(t.is_invertible());
        let f = fixtures::k2();
        let g = group(&f);
        let c = reconstruct_left(&g, &Subspace::zero(2)).unwrap();
        let (n, q) = (c.n, c.gdim);
        let ti = t.invert().unwrap();
        let c2 = FirstOrderCalculus::new(
            n,
            q,
            &(&t * &c.mgl) * &id(n).kron(&ti),
            &(&t * &c.mgr) * &ti.kron(&id(n)),
            &t * &c.d,
        )
        .unwrap();
        let iso = find_isomorphism(&c, &c2).unwrap();
        prop_assert_eq!(&iso * &c.d, c2.d);
    }

    #[test]
    fn bundle_round_trip(s in scalar(), which in 0usize..5) {
        let f = fixtures::all().swap_remove(which);
        let mut b = Bundle::from_fixture(&f);
        b.group.counit[0][0] = mbqg_core::bundle::Num(s);
        let text = b.to_canonical();
        let back = Bundle::parse(&text).unwrap();
        prop_assert_eq!(&back, &b);
        prop_assert_eq!(back.to_canonical(), text);
    }
}

#[test]
fn simplified_algebra_is_an_algebra() {
    for f in fixtures::all() {
        let g = group(&f);
        assert!(check_algebra(&g.data.alg).is_ok(), "{}", f.name);
        assert!(check_algebra(&g.simplified_algebra()).is_ok(), "{} A0", f.name);
    }
}

#[test]
fn classical_groups_have_constant_sigma_family() {
    for f in [fixtures::k2(), fixtures::gr()] {
        let g = group(&f);
        assert_eq!(g.tau, *g.sigma(), "{}", f.name);
        for n in -4..=4 {
            assert_eq!(g.sigma_n(n), *g.sigma(), "{} n={n}", f.name);
        }
        assert_eq!(g.m0(), *g.m());
    }
}

#[test]
fn suite_is_deterministic_and_paranoid_agrees() {
    for f in fixtures::all() {
        let b = Bundle::from_fixture(&f);
        let a = suite::run(&b, None, SuiteOpts::default()).unwrap().finish("x");
        let again = suite::run(&b, None, SuiteOpts::default()).unwrap().finish("x");
        let paranoid = suite::run(&b, None, SuiteOpts { paranoid: true, ..SuiteOpts::default() }).unwrap().finish("x");
        assert_eq!(a.to_json(), again.to_json(), "{}", f.name);
        // Paranoid mode adds cross-checks of the cached maps; everything
        // else must come out the same.
        let extra: Vec<_> = paranoid.entries.iter().filter(|e| !a.entries.contains(e)).collect();
        assert!(extra.iter().all(|e| e.id.starts_with("SIGMA_N_FRESH")), "{}: {extra:?}", f.name);
        assert_eq!(a.entries.len() + extra.len(), paranoid.entries.len(), "{}", f.name);
    }
}
