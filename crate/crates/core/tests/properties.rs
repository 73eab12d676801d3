use proptest::prelude::*;

use residue_core::cli::{parse_form, parse_poly};
use residue_core::forms::DiffForm;
use residue_core::groebner::{buchberger, default_order, normal_form};
use residue_core::projective::{coboundary, CechCochain};
use residue_core::residue::{residue_monomial, residue_of_function, residue_symbol, DenomTuple};
use residue_core::ring::{Coeff, CoeffField, Ctx, Monomial, Poly, RingContext};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn ctx2() -> Ctx {
    RingContext::absolute(CoeffField::Rationals, &["x", "y"]).unwrap()
}

fn ctx3() -> Ctx {
    RingContext::absolute(CoeffField::Rationals, &["x", "y", "z"]).unwrap()
}

fn poly_in(ctx: Ctx, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let n = ctx.n_vars();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -5i64..=5), 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(&ctx, terms.into_iter().map(|(e, c)| (Monomial(e), ctx.field().from_i64(c))))
    })
}

/// `T_i^{d_i} + lower-degree terms`, zero-dimensional by construction.
fn ci_in(ctx: Ctx) -> impl Strategy<Value = Vec<Poly>> {
    let n = ctx.n_vars();
    prop::collection::vec((1u32..=3, poly_in(ctx.clone(), 1, 3)), n).prop_map(move |parts| {
        parts
            .into_iter()
            .enumerate()
            .map(|(i, (d, g))| {
                let low = if d == 1 { Poly::from_i64(&ctx, g.constant_coeff().is_zero() as i64) } else { g };
                &Poly::var(&ctx, i).pow(d) + &low
            })
            .collect()
    })
}

fn form_in(ctx: Ctx, degree: usize) -> impl Strategy<Value = DiffForm> {
    let n = ctx.n_vars();
    prop::collection::vec((prop::sample::subsequence((0..n).collect::<Vec<_>>(), degree), poly_in(ctx.clone(), 2, 3)), 1..=3)
        .prop_map(move |parts| {
            parts.into_iter().fold(DiffForm::zero(&ctx, degree), |acc, (idx, c)| acc.add(&DiffForm::basis(&ctx, &idx, c)).unwrap())
        })
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn polynomial_ring_axioms(a in poly_in(ctx3(), 2, 4), b in poly_in(ctx3(), 2, 4), c in poly_in(ctx3(), 2, 4)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn printed_polynomials_parse_back(p in poly_in(ctx3(), 3, 5)) {
        let c = ctx3();
        let text = p.to_string();
        let q = parse_poly(&text, &c).unwrap();
        prop_assert_eq!(q.to_string(), text);
        prop_assert_eq!(q, p);
    }

    #[test]
    fn printed_forms_parse_back(f in form_in(ctx3(), 2)) {
        prop_assume!(!f.is_zero());
        let c = ctx3();
        let g = parse_form(&f.to_string(), &c).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn exterior_derivative_squares_to_zero(f in form_in(ctx3(), 1), p in poly_in(ctx3(), 3, 4)) {
        prop_assert!(f.exterior_derivative().exterior_derivative().is_zero());
        prop_assert!(DiffForm::function(p).exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(a in form_in(ctx3(), 1), b in form_in(ctx3(), 2), c in form_in(ctx3(), 1)) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(f in poly_in(ctx3(), 2, 3), w in form_in(ctx3(), 1)) {
        let fw = w.scale(&f);
        let df = DiffForm::function(f.clone()).exterior_derivative();
        let rhs = df.wedge(&w).unwrap().add(&w.exterior_derivative().scale(&f)).unwrap();
        prop_assert_eq!(fw.exterior_derivative(), rhs);
    }

    #[test]
    fn groebner_reduction(gens in prop::collection::vec(poly_in(ctx2(), 2, 3), 1..=3), p in poly_in(ctx2(), 3, 4)) {
        let c = ctx2();
        let gb = buchberger(&gens, default_order(&c)).unwrap();
        prop_assert!(gb.verify_transitions());
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        let r = gb.reduce(&p);
        prop_assert_eq!(gb.reduce(&r), r.clone());
        let (rem, witness) = normal_form(&p, &gb).unwrap();
        prop_assert_eq!(rem, r.clone());
        prop_assert!(witness.holds(&gens));
        prop_assert_eq!(&witness.target + &r, p);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn residue_is_linear_and_kills_the_ideal(
        f in ci_in(ctx2()),
        a in poly_in(ctx2(), 3, 3),
        b in poly_in(ctx2(), 3, 3),
        k in -4i64..=4,
        g in poly_in(ctx2(), 2, 2),
    ) {
        let c = ctx2();
        let d = DenomTuple::new(f.clone()).unwrap();
        let kp = Poly::from_i64(&c, k);
        let lhs = residue_of_function(&(&(&kp * &a) + &b), &d).unwrap();
        let rhs = &(&kp * &residue_of_function(&a, &d).unwrap()) + &residue_of_function(&b, &d).unwrap();
        prop_assert_eq!(lhs, rhs);
        let in_ideal = &(&g * &f[0]) + &(&a * &f[1]);
        prop_assert!(residue_of_function(&in_ideal, &d).unwrap().is_zero());
    }

    #[test]
    fn residue_alternates(f in ci_in(ctx2()), a in poly_in(ctx2(), 3, 3)) {
        let d = DenomTuple::new(f.clone()).unwrap();
        let swapped = DenomTuple::new(vec![f[1].clone(), f[0].clone()]).unwrap();
        prop_assert_eq!(residue_of_function(&a, &swapped).unwrap(), -&residue_of_function(&a, &d).unwrap());
    }

    #[test]
    fn monomial_denominators_extract_coefficients(a in poly_in(ctx3(), 4, 6), alpha in prop::collection::vec(1u32..=3, 3)) {
        let c = ctx3();
        let dens: Vec<Poly> = alpha.iter().enumerate().map(|(i, &e)| Poly::var(&c, i).pow(e)).collect();
        let omega = DiffForm::fiber_top(a.clone());
        let engine = residue_symbol(&omega, &DenomTuple::new(dens).unwrap()).unwrap();
        let extracted = residue_monomial(&omega, &alpha).unwrap();
        prop_assert_eq!(engine.constant_coeff(), extracted.constant_coeff());
        let shifted: Vec<u32> = alpha.iter().map(|e| e - 1).collect();
        prop_assert_eq!(extracted.constant_coeff(), a.coefficient_of(&shifted).unwrap());
    }

    #[test]
    fn trace_of_one_is_the_rank(f in ci_in(ctx2()), a in poly_in(ctx2(), 2, 3), b in poly_in(ctx2(), 2, 3)) {
        let c = ctx2();
        let d = DenomTuple::new(f).unwrap();
        let q = d.quotient().unwrap();
        prop_assert_eq!(q.canonical_trace(&Poly::one(&c)), Poly::from_i64(&c, q.rank() as i64));
        prop_assert_eq!(q.canonical_trace(&(&a + &b)), &q.canonical_trace(&a) + &q.canonical_trace(&b));
    }

    #[test]
    fn prime_field_inverses(v in 1u64..100_000, p in prop::sample::select(vec![2u64, 3, 7, 101, 65_521])) {
        let f = CoeffField::prime(p).unwrap();
        let a = f.from_i64(v as i64);
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn cech_coboundary_squares_to_zero(
        twist in -5i64..=3,
        terms in prop::collection::vec((0usize..3, prop::collection::vec(-3i64..=3, 3), -3i64..=3), 1..=6),
    ) {
        let field = CoeffField::Rationals;
        let mut c = CechCochain::zero(field.clone(), 2, twist, 0);
        for (i, mut exps, k) in terms {
            for (j, e) in exps.iter_mut().enumerate() {
                if j != i {
                    *e = e.abs();
                }
            }
            let rest: i64 = exps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e).sum();
            exps[i] = twist - rest;
            c.add_term(&[i], exps, field.from_i64(k)).unwrap();
        }
        let dc = coboundary(&c).unwrap();
        prop_assert!(coboundary(&dc).unwrap().is_zero());
    }
}

#[test]
fn coefficient_arithmetic_matches_rationals() {
    let f = CoeffField::Rationals;
    let half: Coeff = f.from_ratio(&1.into(), &2.into()).unwrap();
    let third: Coeff = f.from_ratio(&1.into(), &3.into()).unwrap();
    assert_eq!((&half + &third).to_string(), "5/6");
    assert_eq!((&half - &third).to_string(), "1/6");
    assert_eq!(f.from_ratio(&4.into(), &(-6).into()).unwrap().to_string(), "-2/3");
}
