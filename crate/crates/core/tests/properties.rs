use std::collections::BTreeMap;

use meshforge::dg::{
    apply_differential, check_d_squared, dg_auslander, h0, perturb_gamma, GammaTerm,
};
use meshforge::homology::{cy_duality_check, ext_table_from_quiver};
use meshforge::path::{IndexedQuiver, TruncatedElement, Word};
use meshforge::quiver::{
    ade_translation_quiver, canonical_form, export_translation_quiver, parse_quiver,
    validate_translation_quiver, Family, Format, TranslationQuiver,
};
use meshforge::{Dg, Field, Rational};
use proptest::prelude::*;

fn member() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![
        (1usize..=12).prop_map(|n| (Family::A, n)),
        (4usize..=12).prop_map(|n| (Family::D, n)),
        prop::sample::select(vec![6usize, 7, 8]).prop_map(|n| (Family::E, n)),
    ]
}

fn generator() -> impl Strategy<Value = TranslationQuiver> {
    (member(), 0usize..=3).prop_map(|((f, n), d)| ade_translation_quiver(f, n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_validate_and_obey_the_mesh_target_law(tq in generator()) {
        prop_assert!(validate_translation_quiver(&tq).ok);
        for (a, b) in &tq.sigma {
            let src = &tq.quiver.arrow(a).unwrap().src;
            prop_assert_eq!(Some(tq.quiver.arrow(b).unwrap().tgt.as_str()), tq.tau_inverse(src));
        }
    }

    #[test]
    fn json_round_trip(tq in generator()) {
        let back = parse_quiver(&export_translation_quiver(&tq, Format::Json)).unwrap();
        prop_assert_eq!(back, tq);
    }

    #[test]
    fn knorrer_parity((f, n) in member(), d in 0usize..=3) {
        let a = canonical_form(&ade_translation_quiver(f, n, d).unwrap());
        let b = canonical_form(&ade_translation_quiver(f, n, d + 2).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn calabi_yau_duality(tq in generator()) {
        prop_assert!(cy_duality_check(&ext_table_from_quiver(&tq, 1, &BTreeMap::new()).unwrap()));
    }

    #[test]
    fn one_rho_per_vertex(tq in generator()) {
        let dg: Dg = dg_auslander(&tq, 6).unwrap();
        let q = &dg.quiver().quiver;
        for v in &tq.quiver.vertices {
            let rhos: Vec<_> = q.arrows_from(&v.id).filter(|a| a.degree == -1).collect();
            prop_assert_eq!(rhos.len(), 1);
            prop_assert_eq!(Some(rhos[0].tgt.as_str()), tq.tau_inverse(&v.id));
        }
        prop_assert!(check_d_squared(&dg));
    }
}

/// Random homogeneous element of the dg quiver of even A_3, built from
/// word indices and small coefficients; degree fixed by the first word.
fn homogeneous(
    words: &[Word],
    iq: &IndexedQuiver,
    picks: &[(usize, i64)],
    bound: usize,
    iqa: &std::sync::Arc<IndexedQuiver>,
) -> TruncatedElement<Rational> {
    let mut x = TruncatedElement::zero(iqa, bound);
    let deg = words[picks[0].0 % words.len()].degree(iq);
    for &(k, c) in picks {
        let w = &words[k % words.len()];
        if w.degree(iq) == deg && c != 0 {
            x.add_term(w.clone(), Rational::from_i64(c));
        }
    }
    x
}

fn even_a3() -> Dg {
    dg_auslander(&ade_translation_quiver(Family::A, 3, 0).unwrap(), 7).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leibniz_rule_and_d_squared(
        xs in prop::collection::vec((0usize..10_000, -2i64..=2), 1..4),
        ys in prop::collection::vec((0usize..10_000, -2i64..=2), 1..4),
    ) {
        let dg = even_a3();
        let iqa = dg.quiver().clone();
        let words = iqa.words(3, 100_000, |_| true).unwrap();
        let x = homogeneous(&words, &iqa, &xs, 7, &iqa);
        let y = homogeneous(&words, &iqa, &ys, 7, &iqa);
        prop_assume!(!x.is_zero());
        let sx = x.degrees()[0];
        let lhs = apply_differential(&dg, &x.mul(&y).unwrap()).unwrap();
        let mut rhs = apply_differential(&dg, &x).unwrap().mul(&y).unwrap();
        let t = x.mul(&apply_differential(&dg, &y).unwrap()).unwrap();
        rhs = if sx % 2 == 0 { rhs.add(&t).unwrap() } else { rhs.sub(&t).unwrap() };
        prop_assert_eq!(lhs, rhs);
        let dx = apply_differential(&dg, &x).unwrap();
        prop_assert!(apply_differential(&dg, &dx).unwrap().is_zero());
    }

    #[test]
    fn unit_rescaling_preserves_h0(cs in prop::collection::vec(prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5]), 3)) {
        let dg = dg_auslander::<Rational>(&ade_translation_quiver(Family::A, 3, 0).unwrap(), 12).unwrap();
        let terms: Vec<_> = cs.iter().enumerate()
            .map(|(k, &c)| GammaTerm { vertex: (k + 1).to_string(), c: Rational::from_i64(c), padding: vec![] })
            .collect();
        let p = perturb_gamma(&dg, &terms).unwrap();
        prop_assert_eq!(h0(&p, 12).unwrap().block_dims(), h0(&dg, 12).unwrap().block_dims());
    }
}
