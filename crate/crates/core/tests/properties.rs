use proptest::prelude::*;
use wres_core::boundary::XiRational;
use wres_core::clifford::Word;
use wres_core::scalars::{parse_expr, FuncBase, GaussRational, GeomKind, ScalarExpr};
use wres_core::specialize::Specialization;
use wres_core::symbols::{SymbolExpr, XiMonomial};

const CAP: usize = 4;

fn pool() -> Vec<ScalarExpr> {
    vec![
        ScalarExpr::f(),
        ScalarExpr::h(),
        ScalarExpr::fh_pow(-2),
        ScalarExpr::d(FuncBase::F, &[1]),
        ScalarExpr::d(FuncBase::H, &[2]),
        ScalarExpr::d(FuncBase::F, &[1, 3]),
        ScalarExpr::geom(GeomKind::ScalarCurvature),
    ]
}

fn gauss(re: i64, im: i64, den: i64) -> GaussRational {
    &GaussRational::ratio(re, den) + &(&GaussRational::ratio(im, den) * &GaussRational::i())
}

prop_compose! {
    fn expr()(terms in prop::collection::vec((-4i64..=4, -4i64..=4, 1i64..=3, prop::collection::vec(0usize..7, 0..3)), 1..4)) -> ScalarExpr {
        let pool = pool();
        let mut acc = ScalarExpr::zero();
        for (re, im, den, atoms) in terms {
            let mut t = ScalarExpr::constant(gauss(re, im, den));
            for a in atoms {
                t = &t * &pool[a];
            }
            acc += &t;
        }
        acc
    }
}

prop_compose! {
    fn rational()(a in 0u32..=4, b in 0u32..=3, coeffs in prop::collection::vec((-5i64..=5, -5i64..=5), 0..9)) -> XiRational {
        let num = coeffs.into_iter().map(|(re, im)| ScalarExpr::constant(gauss(re, im, 1))).collect();
        XiRational::new(num, a, b)
    }
}

prop_compose! {
    /// Homogeneous symbol of degree `2p + Σe` per term.
    fn symbol()(terms in prop::collection::vec((prop::array::uniform6(0u8..=2), -3i32..=1, 0u8..64, -3i64..=3), 1..5)) -> SymbolExpr {
        let mut s = SymbolExpr::zero();
        for (e, p, w, c) in terms {
            s.add_term(XiMonomial::new(e, p), Word::from_mask(w), ScalarExpr::int(c));
        }
        s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in expr(), b in expr(), j in 1u8..=6) {
        let d = |e: &ScalarExpr| e.derive_x_capped(j, CAP).unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn mixed_partials_commute(a in expr(), j in 1u8..=6, k in 1u8..=6) {
        let jk = a.derive_multi(&[j, k], CAP).unwrap();
        let kj = a.derive_multi(&[k, j], CAP).unwrap();
        prop_assert_eq!(jk, kj);
    }

    #[test]
    fn display_parse_round_trip(a in expr()) {
        prop_assert_eq!(parse_expr(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn specialization_commutes_with_derivatives(a in expr(), j in 1u8..=6, p in -3i32..=3, q in -3i32..=3) {
        let sp = Specialization::Powers { p, q };
        let lhs = sp.apply(&a.derive_x_capped(j, CAP).unwrap()).unwrap();
        let rhs = sp.apply(&a).unwrap().derive_x_capped(j, CAP).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_homogeneity(s in symbol()) {
        for deg in s.orders() {
            let part = s.part(deg);
            let mut euler = SymbolExpr::zero();
            for mu in 1..=6u8 {
                euler += &(&SymbolExpr::xi(mu) * &part.derive_xi(mu));
            }
            prop_assert!(euler.equiv(&part.scale(&ScalarExpr::int(deg as i64))));
        }
    }

    #[test]
    fn pi_plus_is_a_projection(r in rational()) {
        let p = r.pi_plus();
        prop_assert_eq!(p.pi_plus(), p.clone());
        prop_assert_eq!(p.add(&r.pi_minus()), r.clone());
        prop_assert_eq!(r.pi_minus().poles().0, 0);
        prop_assert!(r.pi_minus().pi_plus().is_zero());
        prop_assert_eq!(r.derive().pi_plus(), p.derive());
    }

    #[test]
    fn residue_routes_agree(r in rational()) {
        prop_assert_eq!(r.residue_cauchy(), r.residue_partial_fraction());
    }

    #[test]
    fn integration_by_parts(a in rational(), b in rational()) {
        let ab = a.mul(&b);
        let decays = ab.is_zero() || ab.numerator().len() < (ab.poles().0 + ab.poles().1) as usize;
        prop_assume!(decays);
        let lhs = a.derive().mul(&b).contour_integral().unwrap();
        let rhs = a.mul(&b.derive()).contour_integral().unwrap();
        prop_assert_eq!(lhs, -rhs);
    }
}
