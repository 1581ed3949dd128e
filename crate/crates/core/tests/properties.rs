use std::collections::BTreeSet;
use std::sync::Arc;

use gliderep_core::cyclo::CycNumber;
use gliderep_core::glider::{restrict_module, Glider};
use gliderep_core::nilpotent::{
    glider_triple, is_tensor_decomposable, product_chains, search_tensor_factorization, tensor_rep, ProductChain,
    ProductModule,
};
use gliderep_core::registry::{build_named, parse_chain};
use gliderep_core::rep::{character_table, LabeledModule};
use once_cell::sync::Lazy;
use proptest::prelude::*;

const CONDUCTORS: [u32; 7] = [1, 3, 4, 5, 8, 9, 12];

fn cyc() -> impl Strategy<Value = CycNumber> {
    (0..CONDUCTORS.len(), prop::collection::vec(-4i64..=4, 12), 1i64..=6).prop_map(|(k, counts, d)| {
        let n = CONDUCTORS[k];
        let x = CycNumber::from_exponent_counts(n, &counts[..n as usize]);
        let q = num_rational::BigRational::new(1.into(), d.into());
        x.scale_rational(&q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_form_round_trips(x in cyc()) {
        let back: CycNumber = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_operations_are_consistent(x in cyc(), y in cyc(), z in cyc()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn lifting_preserves_value(x in cyc(), m in 1u32..4) {
        let n = x.conductor() * m;
        prop_assert_eq!(x.lift(n), x);
    }
}

static Q8_C3: Lazy<ProductChain> = Lazy::new(|| ProductChain::from_specs("Q8", "Z2,Z4i", "C3", "e,C3,=").unwrap());

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tensor_character_is_pointwise_product(i in 0usize..5, j in 0usize..3) {
        let pc = &*Q8_C3;
        let (tg, th) = (pc.g_table().unwrap(), pc.h_table().unwrap());
        let t = tensor_rep(&tg.irreps()[i], &th.irreps()[j], pc.product.clone()).unwrap();
        let chi = t.character();
        let (x, y) = (&tg.characters()[i], &th.characters()[j]);
        let nh = pc.h.order();
        for g in 0..pc.g.order() {
            for h in 0..nh {
                prop_assert_eq!(chi.value_at(g * nh + h), &(x.value_at(g) * y.value_at(h)));
            }
        }
    }
}

/// V4 × C3 with every product chain, and all twelve product characters.
static V4_C3: Lazy<Vec<ProductChain>> = Lazy::new(|| {
    let g = Arc::new(build_named("V4", 64).unwrap());
    let h = Arc::new(build_named("C3", 64).unwrap());
    product_chains(&g, &h).unwrap()
});

fn linear_ambient() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<bool>)> {
    (
        0..V4_C3.len(),
        prop::sample::subsequence((0..12).map(|k| (k / 3, k % 3)).collect::<Vec<_>>(), 1..=6),
        prop::collection::vec(any::<bool>(), 6),
    )
        .prop_map(|(c, pairs, signs)| (c, pairs, signs))
}

fn build(pc: &ProductChain, pairs: &[(usize, usize)], signs: &[bool]) -> (ProductModule, Glider) {
    let pm = ProductModule::new(pc, pairs.iter().map(|&p| (p, 1)).collect()).unwrap();
    let n = pm.module.conductor();
    let a = pairs
        .iter()
        .zip(signs)
        .map(|(_, &s)| CycNumber::from_i64(n, if s { 1 } else { -1 }))
        .collect();
    let m = Glider::build(&pc.chain, pm.module.clone(), a).unwrap();
    (pm, m)
}

fn distinct_characters(module: &LabeledModule) -> usize {
    module
        .components()
        .iter()
        .map(|(r, _)| r.character().sort_key())
        .collect::<BTreeSet<_>>()
        .len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn triple_bounds_and_decomposability((c, pairs, signs) in linear_ambient()) {
        let pc = &V4_C3[c];
        let (pm, m) = build(pc, &pairs, &signs);
        let t = glider_triple(pc, &pm).unwrap();
        prop_assert!(t.a <= t.b * t.c);
        prop_assert!(t.b <= t.a && t.c <= t.a);
        let d = is_tensor_decomposable(pc, &pm, &m).unwrap();
        prop_assert_eq!(d.decomposable, t.a == t.b * t.c);
        if d.decomposable {
            prop_assert_eq!(d.round_trip, Some(true));
        }
        let oracle = search_tensor_factorization(pc, &pm, &m).unwrap();
        prop_assert_eq!(oracle.is_some(), d.decomposable);
    }

    #[test]
    fn factor_counts_match_restrictions((c, pairs, _s) in linear_ambient()) {
        let pc = &V4_C3[c];
        let pm = ProductModule::new(pc, pairs.iter().map(|&p| (p, 1)).collect()).unwrap();
        let t = glider_triple(pc, &pm).unwrap();
        let top_g = pc.g_side().last().unwrap().clone();
        let top_h = pc.h_side().last().unwrap().clone();
        prop_assert_eq!(distinct_characters(&restrict_module(&pm.module, &top_g).unwrap().0), t.b);
        prop_assert_eq!(distinct_characters(&restrict_module(&pm.module, &top_h).unwrap().0), t.c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn quaternion_gliders_are_monotone_and_tests_agree(
        comps in prop::collection::vec(0usize..5, 1..=3),
        coeffs in prop::collection::vec(-2i64..=2, 8),
    ) {
        let g = Arc::new(build_named("Q8", 8).unwrap());
        let chain = parse_chain(&g, "Z2,Z4j").unwrap();
        let t = character_table(&g).unwrap();
        let parts = comps.iter().map(|&i| (Arc::new(t.irreps()[i].clone()), 1)).collect();
        let module = Arc::new(LabeledModule::new(g.clone(), parts).unwrap());
        let n = module.conductor();
        let a: Vec<CycNumber> = (0..module.dim()).map(|k| CycNumber::from_i64(n, coeffs[k % coeffs.len()])).collect();
        prop_assume!(a.iter().any(|x| !x.is_zero()));
        let m = Glider::build(&chain, module.clone(), a.clone()).unwrap();
        let dims = m.dimension_vector();
        prop_assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(dims[dims.len() - 1], module.dim());
        let kga = module.cyclic_module(&a).unwrap().dim();
        prop_assert!(dims[dims.len() - 2] <= kga && kga <= module.dim());
        prop_assert_eq!(m.anti_diagonal_test(), m.is_irreducible_certified().unwrap());
        prop_assert_eq!(m.is_irreducible(), m.anti_diagonal_test());
    }
}
