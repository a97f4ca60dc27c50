use latpoly::counting::{brute_force, count, verify_decomposition};
use latpoly::ehrhart::{dedekind_direct, dedekind_sum, ehrhart_by_interpolation};
use latpoly::fourier::{ft_closed_form, ft_residues, PoleConfiguration};
use latpoly::mainterm::{build_p, build_q};
use latpoly::poisson::{fejer_weights, literal_weights};
use latpoly::polytope::{AxisLengths, CornerSimplex, CrossPolytope, GeneralSimplex, Polytope};
use latpoly::scalar::{rat, AlgebraicScalar, Rational};
use num_integer::Integer;
use proptest::prelude::*;

fn axis() -> impl Strategy<Value = AlgebraicScalar> {
    prop_oneof![
        (1i64..=8, 1i64..=4).prop_map(|(p, q)| AlgebraicScalar::rational(rat(p, q))),
        (0i64..=2, 1i64..=2, 1i64..=3).prop_map(|(u, v, w)| AlgebraicScalar::quadratic(rat(u, w), rat(v, w), 2)),
        (1i64..=3, 1i64..=3).prop_map(|(u, w)| AlgebraicScalar::quadratic(rat(0, 1), rat(u, w), 3)),
    ]
}

fn dilation() -> impl Strategy<Value = AlgebraicScalar> {
    (1000i64..=6000).prop_map(|k| AlgebraicScalar::rational(rat(k, 1000)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cross_count_matches_enumeration(a in prop::collection::vec(axis(), 1..=3), t in dilation()) {
        let p = Polytope::Cross(CrossPolytope::new(AxisLengths::new(a).unwrap()));
        prop_assert_eq!(count(&p, &t).unwrap().count, brute_force(&p, &t).unwrap().count);
    }

    #[test]
    fn simplex_count_matches_enumeration(a in prop::collection::vec(axis(), 1..=3), t in dilation()) {
        let p = Polytope::Simplex(CornerSimplex::standard(AxisLengths::new(a).unwrap()));
        prop_assert_eq!(count(&p, &t).unwrap().count, brute_force(&p, &t).unwrap().count);
    }

    #[test]
    fn decomposition_holds(a in prop::collection::vec(axis(), 1..=4), t in dilation()) {
        prop_assert!(verify_decomposition(&AxisLengths::new(a).unwrap(), &t).unwrap());
    }

    #[test]
    fn main_terms_have_parity(a in prop::collection::vec(axis(), 1..=5)) {
        let axes = AxisLengths::new(a).unwrap();
        let d = axes.dim();
        for (k, c) in build_p(&axes).symbolic.iter().enumerate() {
            if (d - k) % 2 == 1 {
                prop_assert!(c.is_zero(), "coefficient {} of degree-{} polynomial", k, d);
            }
        }
        let q = build_q(&axes);
        prop_assert_eq!(q.symbolic[d].eval(&axes).to_f64(), build_p(&axes).symbolic[d].eval(&axes).to_f64() / 2f64.powi(d as i32));
    }

    #[test]
    fn dedekind_reciprocity(a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(a.gcd(&b) == 1);
        let lhs = dedekind_direct(a as i64, b).unwrap() + dedekind_direct(b as i64, a).unwrap();
        let (aq, bq) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
        let rhs = rat(-1, 4) + (&aq / &bq + &bq / &aq + rat(1, 1) / (&aq * &bq)) / rat(12, 1);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(dedekind_sum(a as i64, b).unwrap().value, dedekind_direct(a as i64, b).unwrap());
    }

    #[test]
    fn dedekind_sum_is_odd_and_periodic(a in -3000i64..3000, b in 2u64..3000) {
        prop_assume!(a.gcd(&(b as i64)) == 1);
        let s = dedekind_direct(a, b).unwrap();
        prop_assert_eq!(dedekind_direct(-a, b).unwrap(), -s.clone());
        prop_assert_eq!(dedekind_direct(a + b as i64, b).unwrap(), s);
    }

    #[test]
    fn ft_is_conjugate_symmetric(
        v in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 3),
        y in prop::collection::vec(-6i64..=6, 2),
        k in 5i64..=25,
    ) {
        let verts: Vec<Vec<Rational>> = v.iter().map(|p| p.iter().map(|&x| rat(x, 4)).collect()).collect();
        let Ok(s) = GeneralSimplex::from_rational(&verts) else { return Ok(()) };
        let y: Vec<Rational> = y.iter().map(|&x| rat(x, 3)).collect();
        let neg: Vec<Rational> = y.iter().map(|x| -x).collect();
        let t = AlgebraicScalar::rational(rat(k, 10));
        let a = ft_residues(&s, &y, &t).unwrap();
        let b = ft_residues(&s, &neg, &t).unwrap();
        prop_assert!((a.value() - b.value().conj()).norm() <= 1e-10 + a.error_bound + b.error_bound);
        if PoleConfiguration::new(&s, &y).unwrap().all_distinct() {
            let c = ft_closed_form(&s, &y, &t).unwrap();
            prop_assert!((a.value() - c.value()).norm() <= 1e-9 + a.error_bound + c.error_bound);
        }
    }

    #[test]
    fn ehrhart_polynomial_counts(a in prop::collection::vec(1u64..=6, 2..=3), t in 1u64..=9) {
        let e = ehrhart_by_interpolation(&a).unwrap();
        let axes = AxisLengths::new(a.iter().map(|&x| AlgebraicScalar::from_int(x as i64)).collect()).unwrap();
        let p = Polytope::Simplex(CornerSimplex::standard(axes));
        let c = brute_force(&p, &AlgebraicScalar::from_int(t as i64)).unwrap().count_u128().unwrap();
        prop_assert_eq!(e.eval(&rat(t as i64, 1)), rat(c as i64, 1));
    }
}

#[test]
fn fejer_collapse_is_exact_for_small_cases() {
    for d in 1..=3 {
        for n in 2..=4 {
            assert_eq!(literal_weights(d, n).unwrap(), fejer_weights(d, n).unwrap(), "d={d} N={n}");
        }
    }
}

#[test]
fn scalars_round_trip_through_text() {
    for s in ["7/3", "sqrt(2)", "(1+sqrt(5))/2", "3 - 2*sqrt(7)", "root(1, 0, 0, -2; 1, 2)"] {
        let x: AlgebraicScalar = s.parse().unwrap();
        let y: AlgebraicScalar = x.to_string().parse().unwrap();
        assert_eq!(x.to_f64(), y.to_f64(), "{s} -> {x}");
    }
}
