mod common;

use std::cmp::Ordering;

use fjpop::bounds::{bit, bound_c, compare, TowerBound};
use fjpop::certify::{build_certificate_q, lagrange_basis, verify_certificate, Certificate, GramTerm};
use fjpop::fjkkt::{build, products, PopProblem, SystemVariant};
use fjpop::poly::{binomial, Monomial, MonomialBasis, Polynomial, Rational};
use fjpop::relax::build_moment_sdp;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::names;

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A random polynomial in `n` variables of degree at most `deg`.
fn poly_strategy(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let monomials: Vec<Monomial> = MonomialBasis::new(n, deg).unwrap().elements().to_vec();
    let len = monomials.len();
    prop::collection::vec(-5i64..=5, len).prop_map(move |coeffs| {
        Polynomial::from_terms(n, monomials.iter().cloned().zip(coeffs.into_iter().map(|c| Rational::from_integer(c.into()))))
    })
}

fn ball_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_map(|v| {
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1.0 { v.iter().map(|x| x / r * 0.99).collect() } else { v }
    })
}

fn tower_strategy() -> impl Strategy<Value = TowerBound> {
    let leaf = (0u64..5000).prop_map(TowerBound::from);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TowerBound::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TowerBound::mul(a, b)),
            (1u32..3, inner.clone()).prop_map(|(h, t)| TowerBound::tower(h, t)),
            inner.clone().prop_map(TowerBound::half),
            inner.prop_map(TowerBound::bit_length),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_mass_is_feasible_for_the_moment_relaxation(
        f in poly_strategy(2, 3),
        u in ball_point(2),
        k in 2u32..=3,
    ) {
        let g = Polynomial::one(2) - Polynomial::var(2, 0).pow(2) - Polynomial::var(2, 1).pow(2);
        let pop = PopProblem::new(names(&["x1", "x2"]), f.clone(), vec![g], vec![], None).unwrap();
        let sdp = build_moment_sdp(&pop, k).unwrap();
        let y = sdp.point_mass(&u);
        for block in &sdp.blocks {
            prop_assert!(block.evaluate(&y).symmetric_eigenvalues().min() >= -1e-9);
        }
        prop_assert!((sdp.normalization.eval_f64(&y) - 1.0).abs() < 1e-12);
        let fu = f.eval_f64(&u).unwrap();
        prop_assert!((sdp.objective_value(&y) - fu).abs() <= 1e-9 * (1.0 + fu.abs()));
    }

    #[test]
    fn lagrange_basis_is_a_kronecker_delta(raw in prop::collection::btree_set(-20i64..20, 1..6)) {
        let values: Vec<Rational> = raw.iter().map(|&v| rational(v, 3)).collect();
        let basis = lagrange_basis(&Polynomial::var(1, 0), &values).unwrap();
        for (i, p) in basis.iter().enumerate() {
            for (j, t) in values.iter().enumerate() {
                let expected = if i == j { Rational::one() } else { Rational::zero() };
                prop_assert_eq!(p.evaluate(std::slice::from_ref(t)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn certificate_q_is_nonnegative_and_interpolates(
        f in poly_strategy(2, 2),
        raw in prop::collection::btree_set(0i64..30, 1..5),
        x in prop::collection::vec(-3i64..=3, 2),
    ) {
        let values: Vec<Rational> = raw.iter().map(|&v| rational(v, 2)).collect();
        prop_assume!(!f.is_zero() || values.len() == 1);
        let q = build_certificate_q(&f, &values).unwrap();
        let point: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let qv = q.evaluate(&point).unwrap();
        prop_assert!(qv >= Rational::zero());
        let fv = f.evaluate(&point).unwrap();
        if values.contains(&fv) {
            prop_assert_eq!(qv, fv);
        }
    }

    #[test]
    fn optimality_systems_respect_degree_caps(
        (n, d, f, g) in (1usize..=3, 1usize..=3, 1u32..=3).prop_flat_map(|(n, m, d)| {
            (Just(n), Just(d), poly_strategy(n, d), prop::collection::vec(poly_strategy(n, d), m))
        }),
    ) {
        let m = g.len();
        let var_names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let pop = PopProblem::new(var_names, f, g, vec![], None).unwrap();
        let fj = build(&pop, SystemVariant::Fj);
        prop_assert_eq!(fj.polynomials.len(), n + m + 1);
        prop_assert!(fj.polynomials.iter().all(|p| p.degree().or_zero() <= d + 1));
        let fj_plus = build(&pop, SystemVariant::FjPlus);
        prop_assert!(fj_plus.polynomials.iter().all(|p| p.degree().or_zero() <= d + 2));
        prop_assert_eq!(products(&pop.g, 64).unwrap().len(), (1usize << m) - 1);
    }

    #[test]
    fn basis_length_is_binomial(n in 1usize..=5, k in 0u32..=5) {
        prop_assert_eq!(MonomialBasis::new(n, k).unwrap().len() as u128, binomial(n as u64 + u64::from(k), u64::from(k)));
    }

    #[test]
    fn certificates_are_sound(
        l0 in prop::collection::vec(-4i64..=4, 3),
        l1 in -4i64..=4,
        xi in -10i64..=10,
        u in ball_point(1),
    ) {
        // σ0 = (a + b x)² + c², σ1 = e², target = ξ + σ0 + (1 − x²) σ1.
        let basis = vec![Monomial::one(1), Monomial::var(1, 0)];
        let r = |v: i64| Rational::from_integer(v.into());
        let (a, b, c) = (r(l0[0]), r(l0[1]), r(l0[2]));
        let g0 = vec![
            vec![&a * &a + &c * &c, &a * &b],
            vec![&a * &b, &b * &b],
        ];
        let g1 = vec![vec![r(l1 * l1)]];
        let x = Polynomial::var(1, 0);
        let constraint = Polynomial::one(1) - x.pow(2);
        let sigma0 = (Polynomial::constant(1, a.clone()) + x.scale(&b)).pow(2) + Polynomial::constant(1, &c * &c);
        let target = Polynomial::constant(1, r(xi)) + sigma0 + &constraint * &Polynomial::constant(1, r(l1 * l1));
        let cert = Certificate {
            var_names: names(&["x"]),
            target: target.clone(),
            xi_weight: Polynomial::one(1),
            xi: r(xi),
            gram: vec![
                GramTerm { generator: Polynomial::one(1), basis: basis.clone(), matrix: g0 },
                GramTerm { generator: constraint, basis: vec![Monomial::one(1)], matrix: g1 },
            ],
            ideal: vec![],
        };
        let report = verify_certificate(&cert, 1e-9).unwrap();
        prop_assert!(report.passed);
        prop_assert!(report.residual == 0.0);
        prop_assert!(target.eval_f64(&u).unwrap() >= xi as f64 - 1e-9);
    }

    #[test]
    fn c_is_monotone(n in 1u64..=4, d in 1u64..=6, s in 1u64..=4) {
        let base = bound_c(n, d, s).unwrap();
        prop_assert!(bound_c(n + 1, d, s).unwrap() >= base);
        prop_assert!(bound_c(n, d + 1, s).unwrap() >= base);
        prop_assert!(bound_c(n, d, s + 1).unwrap() >= base);
    }

    #[test]
    fn bit_brackets_its_argument(d in 1u64..u64::MAX) {
        let k = bit(d);
        prop_assert!(k >= 1 && k <= 64);
        prop_assert!(u128::from(d) >= 1u128 << (k - 1));
        prop_assert!(u128::from(d) < 1u128 << k);
    }

    #[test]
    fn compare_is_a_total_order(a in tower_strategy(), b in tower_strategy(), c in tower_strategy()) {
        prop_assert_eq!(compare(&a, &a), Ordering::Equal);
        prop_assert_eq!(compare(&a, &b), compare(&b, &a).reverse());
        if compare(&a, &b) != Ordering::Greater && compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare(&a, &c), Ordering::Greater);
        }
        if let (Some(x), Some(y)) = (a.materialize(4096), b.materialize(4096)) {
            prop_assert_eq!(compare(&a, &b), x.cmp(&y));
        }
    }
}
