use std::sync::Arc;

use proptest::prelude::*;
use tvb_core::exact::rat;
use tvb_core::poly::{
    buchberger, eliminate, ideal_equal, normal_form, normal_form_by, GbCaps, Ideal, Monomial,
    Polynomial, RingMap, TermOrder, VarTable,
};

const NV: usize = 3;

fn poly(nv: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_deg, nv), -3i64..=3),
        1..=3,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            nv,
            terms.into_iter().map(|(e, c)| (Monomial::from_exponents(e), rat(c))),
        )
    })
}

fn orders() -> impl Strategy<Value = TermOrder> {
    prop_oneof![
        Just(TermOrder::lex(NV)),
        Just(TermOrder::grevlex(NV)),
        Just(TermOrder::weighted(vec![vec![1, 2, 3]], TermOrder::grevlex(NV))),
    ]
}

fn caps() -> GbCaps {
    GbCaps { max_degree: 24, max_basis: 400 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_ignores_divisor_choice(
        gens in proptest::collection::vec(poly(NV, 2), 1..=3),
        f in poly(NV, 3),
        order in orders(),
    ) {
        let Ok(gb) = buchberger(&gens, &order, caps()) else { return Ok(()) };
        let first = normal_form_by(&f, &gb, &order, &mut |c| c[0]).unwrap();
        let last = normal_form_by(&f, &gb, &order, &mut |c| c[c.len() - 1]).unwrap();
        prop_assert_eq!(&first, &last);
        prop_assert_eq!(first, normal_form(&f, &gb, &order).unwrap());
    }

    #[test]
    fn ideal_combinations_reduce_to_zero(
        gens in proptest::collection::vec(poly(NV, 2), 1..=3),
        cofactors in proptest::collection::vec(poly(NV, 1), 3),
        order in orders(),
    ) {
        let Ok(gb) = buchberger(&gens, &order, caps()) else { return Ok(()) };
        let f = gens
            .iter()
            .zip(&cofactors)
            .fold(Polynomial::zero(NV), |acc, (g, c)| &acc + &(g * c));
        prop_assert!(normal_form(&f, &gb, &order).unwrap().is_zero());
    }

    #[test]
    fn reduced_basis_is_canonical(
        gens in proptest::collection::vec(poly(NV, 2), 1..=3),
        order in orders(),
    ) {
        let Ok(a) = buchberger(&gens, &order, caps()) else { return Ok(()) };
        let mut rev = gens.clone();
        rev.reverse();
        let b = buchberger(&rev, &order, caps()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weight_initial_is_multiplicative(
        f in poly(NV, 3),
        g in poly(NV, 3),
        w in proptest::collection::vec(-2i64..=3, NV),
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let lhs = (&f * &g).weight_initial(&w);
        let rhs = &f.weight_initial(&w) * &g.weight_initial(&w);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn elimination_is_idempotent(
        gens in proptest::collection::vec(poly(NV, 2), 1..=2),
        drop in 0usize..NV,
    ) {
        let i = Ideal::new(NV, gens).unwrap();
        let Ok(once) = eliminate(&i, &[drop], caps()) else { return Ok(()) };
        let twice = eliminate(&once, &[drop], caps()).unwrap();
        prop_assert!(ideal_equal(&once, &twice, &TermOrder::grevlex(NV), caps()).unwrap());
        for g in once.gens() {
            prop_assert!(!g.support_vars().contains(&drop));
        }
    }

    #[test]
    fn kernel_elements_map_to_zero(
        exps in proptest::collection::vec(proptest::collection::vec(0u32..=2, 2), NV),
    ) {
        let source = VarTable::new(["a", "b", "c"]).unwrap();
        let target: Arc<VarTable> = VarTable::new(["s", "t"]).unwrap();
        let images = exps
            .into_iter()
            .map(|e| Polynomial::monomial(Monomial::from_exponents(e), rat(1)))
            .collect();
        let phi = RingMap::new(source, target, images, vec![]).unwrap();
        let k = phi.kernel(caps()).unwrap();
        // three monomials in two variables are algebraically dependent
        prop_assert!(!k.gens().is_empty());
        for g in k.gens() {
            prop_assert!(phi.apply(g).is_zero());
        }
    }
}
