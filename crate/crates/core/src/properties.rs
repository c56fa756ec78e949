//! Randomized invariants across modules.

use proptest::prelude::*;

use crate::annihilators::op_u0;
use crate::charvar::{decompose_in_minors, eta, minors, recombine_minors, rewrite_eta_product};
use crate::json::{PolyJson, WeylJson};
use crate::numerics::{rel_err, trace_contour, Complex64, QuadratureSpec, TestFn};
use crate::poly::{Exp, Poly};
use crate::rational::Rational;
use crate::space::{VarSpace, Weight};
use crate::symfun::{derived_newton, newton, newton_varouchas, reduce_to_sigma, to_x, NewtonFamily};
use crate::transport::{symmetrize_operator, xi_defining_check, xi_transport};
use crate::weyl::WeylOp;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn exp(n: usize, max_deg: u32) -> impl Strategy<Value = Exp> {
    prop::collection::vec(0..=max_deg, n).prop_map(Exp)
}

fn poly(space: VarSpace, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((exp(space.nvars(), max_deg), rational()), 0..=max_terms)
        .prop_map(move |terms| Poly::from_terms(space, terms))
}

fn weyl(space: VarSpace, max_order: u32, max_terms: usize) -> impl Strategy<Value = WeylOp> {
    prop::collection::vec((exp(space.nvars(), max_order), poly(space, 1, 2)), 0..=max_terms)
        .prop_map(move |terms| WeylOp::from_terms(space, terms).unwrap())
}

fn sigma_point(k: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(-8i32..=8, k)
        .prop_map(|v| v.into_iter().map(|a| Complex64::new(a as f64 / 4.0, 0.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_product_is_associative(a in weyl(VarSpace::Sigma(2), 1, 3), b in weyl(VarSpace::Sigma(2), 1, 3), c in weyl(VarSpace::Sigma(2), 1, 3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn action_is_a_module_action(a in weyl(VarSpace::Sigma(3), 2, 3), b in weyl(VarSpace::Sigma(3), 2, 3), f in poly(VarSpace::Sigma(3), 3, 4)) {
        prop_assert_eq!((&a * &b).apply(&f).unwrap(), a.apply(&b.apply(&f).unwrap()).unwrap());
    }

    #[test]
    fn symbol_is_multiplicative(a in weyl(VarSpace::Sigma(3), 2, 3), b in weyl(VarSpace::Sigma(3), 2, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!((&a * &b).symbol().unwrap(), &a.symbol().unwrap() * &b.symbol().unwrap());
    }

    #[test]
    fn json_roundtrip(p in poly(VarSpace::Mixed(2), 3, 5), op in weyl(VarSpace::X(3), 2, 4)) {
        let text = serde_json::to_string(&PolyJson::from(&p)).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Poly::try_from(&back).unwrap(), p);
        let text = serde_json::to_string(&WeylJson::from(&op)).unwrap();
        let back: WeylJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(WeylOp::try_from(&back).unwrap(), op);
    }

    #[test]
    fn u0_measures_weight(e in exp(3, 2), b in exp(3, 2), c in rational()) {
        prop_assume!(!c.is_zero());
        let g = WeylOp::monomial(Poly::monomial(VarSpace::Sigma(3), e, c), b);
        let Weight::Pure(w) = g.weight() else { panic!("monomial without pure weight") };
        let u0 = op_u0(3);
        prop_assert_eq!(u0.commutator(&g).unwrap(), g.scale(&Rational::from_int(w)));
    }

    #[test]
    fn eta_products_rewrite(k in 2usize..=6, i in 1usize..=6, j in 1usize..=6) {
        prop_assume!(i <= k && j <= k);
        prop_assert_eq!(rewrite_eta_product(k, i, j).unwrap().recombine(k).unwrap(), &eta(k, i) * &eta(k, j));
    }

    #[test]
    fn ideal_elements_decompose(k in 2usize..=4, seeds in prop::collection::vec((poly(VarSpace::Sigma(4), 1, 2), 0usize..6, 0usize..4, 0u32..=2), 1..4)) {
        let ms = minors(k).unwrap().minors;
        let space = VarSpace::Mixed(k);
        let mut f = Poly::zero(space);
        for (c, which, h, d) in seeds {
            let (_, m) = &ms[which % ms.len()];
            let sig = Poly::from_terms(space, c.terms().map(|(e, r)| {
                let mut x = Exp::zero(2 * k);
                for h in 0..k { x.0[h] = e.0[h]; }
                (x, r.clone())
            }));
            let cof = &sig * &eta(k, 1 + h % k).pow(d);
            f = &f + &(&cof * m);
        }
        let coeffs = decompose_in_minors(&f).unwrap();
        prop_assert_eq!(recombine_minors(k, &coeffs).unwrap(), f);
    }

    #[test]
    fn newton_matches_power_sums(k in 1usize..=4, m in 0usize..=12, xs in prop::collection::vec(rational(), 4)) {
        let point = &xs[..k];
        let sigma: Vec<Rational> = (1..=k).map(|h| crate::symfun::elementary_symmetric(k, h).unwrap().eval(point)).collect();
        let power: Rational = point.iter().map(|x| x.pow(m as u32)).sum();
        prop_assert_eq!(newton(k, m).eval(&sigma), power);
    }

    #[test]
    fn derived_newton_matches_residues(k in 1usize..=4, m in 0i64..=8, xs in prop::collection::vec(-20i64..=20, 4)) {
        let mut point: Vec<Rational> = xs[..k].iter().map(|&a| Rational::new(a, 3)).collect();
        point.sort();
        point.dedup();
        prop_assume!(point.len() == k);
        let sigma: Vec<Rational> = (1..=k).map(|h| crate::symfun::elementary_symmetric(k, h).unwrap().eval(&point)).collect();
        let oracle: Rational = point.iter().enumerate().map(|(j, x)| {
            let dp: Rational = point.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, y)| x - y).product();
            x.pow((m + k as i64 - 1) as u32) / dp
        }).sum();
        prop_assert_eq!(derived_newton(k, m).unwrap().eval(&sigma), oracle);
    }

    #[test]
    fn reduction_inverts_substitution(f in poly(VarSpace::Sigma(3), 3, 5)) {
        prop_assert_eq!(reduce_to_sigma(&to_x(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn contour_forms_agree(k in 1usize..=5, s in sigma_point(5), which in 0usize..3) {
        let sigma = &s[..k];
        let f = [TestFn::Exp, TestFn::Sin, TestFn::Pow(5)][which];
        let tv = trace_contour(&f, sigma, &QuadratureSpec::auto(sigma)).unwrap();
        prop_assert!(rel_err(tv.value, tv.log_derivative_form) <= 1e-9, "{tv:?}");
    }

    #[test]
    fn quadrature_converges_geometrically(k in 1usize..=3, s in sigma_point(3), m in 0u32..=8) {
        let sigma = &s[..k];
        let exact = NewtonFamily::new(k).newton(m as usize).eval_complex(sigma);
        let radius = QuadratureSpec::auto(sigma).radius;
        let floor = 1e-12 * radius.powi(m as i32).max(1.0);
        let err = |nodes| (trace_contour(&TestFn::Pow(m), sigma, &QuadratureSpec { radius, nodes }).unwrap().value - exact).norm();
        let mut nodes = 8;
        let mut e = err(nodes);
        while e > floor && nodes < 1 << 12 {
            let next = err(2 * nodes);
            prop_assert!(next <= e / 100.0 || next <= floor, "n={nodes}: {e:e} -> {next:e}");
            nodes *= 2;
            e = next;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn xi_satisfies_its_definition(op in weyl(VarSpace::X(2), 2, 3), op2 in weyl(VarSpace::X(2), 1, 2)) {
        let p = symmetrize_operator(&op).unwrap();
        let q = xi_transport(&p).unwrap();
        prop_assert!(xi_defining_check(&p, &q, 4).unwrap());

        let p2 = symmetrize_operator(&op2).unwrap();
        let prod = symmetrize_operator(&(p.op() * p2.op())).unwrap();
        prop_assert_eq!(xi_transport(&prod).unwrap(), &q * &xi_transport(&p2).unwrap());
    }
}

#[test]
fn newton_families_agree() {
    for k in 1..=4 {
        for m in 1..=10 {
            assert_eq!(newton(k, m), newton_varouchas(k, m).unwrap(), "k={k} m={m}");
        }
    }
}
