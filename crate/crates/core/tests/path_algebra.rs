mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use meshforge::dg::mesh_relation;
use meshforge::path::{
    cartan_matrix, corner_algebra, minimal_relations_defect, quotient_algebra, restrict_module,
    truncated_block_dims, IndexedQuiver, Module, RelationSet, TruncatedElement,
};
use meshforge::quiver::fixtures::{conifold, even_a_curve, intro_a1};
use meshforge::quiver::{
    ade_translation_quiver, Arrow, Family, GradedQuiver, TranslationQuiver, Vertex,
};
use meshforge::{Error, Field, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn loop_quiver() -> Arc<IndexedQuiver> {
    IndexedQuiver::new(
        GradedQuiver::new(
            vec![Vertex::new("1")],
            vec![Arrow::new("x", "x", "1", "1", 0)],
        )
        .unwrap(),
    )
}

fn rels(iq: &Arc<IndexedQuiver>, texts: &[&str], bound: usize) -> RelationSet<Rational> {
    RelationSet::new(
        texts
            .iter()
            .enumerate()
            .map(|(k, t)| {
                (
                    format!("r{k}"),
                    TruncatedElement::parse(iq, t, bound).unwrap(),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// Mesh relations of a translation quiver over its own quiver.
fn mesh_set(tq: &TranslationQuiver, bound: usize) -> (Arc<IndexedQuiver>, RelationSet<Rational>) {
    let iq = IndexedQuiver::new(tq.quiver.clone());
    let mut out = Vec::new();
    for v in &tq.quiver.vertices {
        if tq.tau_inverse(&v.id).is_none() {
            continue;
        }
        let r = mesh_relation::<Rational>(tq, &v.id, bound).unwrap();
        if !r.is_zero() {
            out.push((
                v.id.clone(),
                TruncatedElement::parse(&iq, &r.to_text(), bound).unwrap(),
            ));
        }
    }
    (iq, RelationSet::new(out).unwrap())
}

fn even(n: usize) -> TranslationQuiver {
    ade_translation_quiver(Family::A, n, 0).unwrap()
}

#[test]
fn multiplication_examples() {
    let iq = IndexedQuiver::new(even(2).quiver);
    let e = |v: &str| TruncatedElement::<Rational>::parse(&iq, &format!("e({v})"), 5).unwrap();
    assert_eq!(e("1").mul(&e("1")).unwrap(), e("1"));
    assert!(e("1").mul(&e("2")).unwrap().is_zero());

    let a = TruncatedElement::<Rational>::parse(&iq, "a1", 5).unwrap();
    let b = TruncatedElement::<Rational>::parse(&iq, "a1*", 5).unwrap();
    let ba = b.mul(&a).unwrap();
    let w = ba.terms().keys().next().unwrap();
    assert_eq!(
        (w.len(), iq.vertex_id(w.src), iq.vertex_id(w.tgt)),
        (2, "1", "1")
    );
    assert!(a.mul(&a).unwrap().is_zero());

    let lq = loop_quiver();
    let x3 = TruncatedElement::<Rational>::parse(&lq, "x x x", 5).unwrap();
    let x4 = TruncatedElement::<Rational>::parse(&lq, "x x x x", 5).unwrap();
    assert!(x3.mul(&x4).unwrap().is_zero());
    assert!(matches!(
        x3.mul(&x4.with_bound(6)),
        Err(Error::BoundMismatch(5, 6))
    ));
    assert!(matches!(x3.mul(&a), Err(Error::QuiverMismatch)));
}

#[test]
fn quotient_examples() {
    let lq = loop_quiver();
    let a = quotient_algebra(&lq, &rels(&lq, &["x x"], 6), 6, 2).unwrap();
    assert!(a.stabilized);
    assert_eq!(a.dim(), 2);
    assert_eq!(
        (0..2).map(|b| a.label(b)).collect::<Vec<_>>(),
        vec!["e(1)", "x"]
    );

    for (n, dim) in [(2, 4), (3, 10)] {
        let (iq, r) = mesh_set(&even(n), 12);
        let a = quotient_algebra(&iq, &r, 12, 2).unwrap();
        assert!(a.stabilized);
        assert_eq!(a.dim(), dim);
        // oracle at the stabilization bound and three past it
        for l in [a.l_used, a.l_used + 3] {
            let oracle = common::mesh_quotient(&even(n), l, false);
            assert_eq!(common::total(&oracle), dim);
            assert_eq!(a.block_dims(), oracle);
        }
    }
    assert!(matches!(
        quotient_algebra(&lq, &rels(&lq, &["x x"], 6), 1, 2),
        Err(Error::BoundTooSmall { .. })
    ));
}

#[test]
fn minimal_relation_examples() {
    let (iq, r) = mesh_set(&even(2), 8);
    for l in [6, 8] {
        assert_eq!(
            minimal_relations_defect(&iq, &r, "1", "1", l).unwrap(),
            (1, 1)
        );
    }
    let lq = loop_quiver();
    assert_eq!(
        minimal_relations_defect(&lq, &rels(&lq, &["x x"], 8), "1", "1", 6).unwrap(),
        (1, 1)
    );
    assert_eq!(
        minimal_relations_defect(&lq, &rels(&lq, &["x x", "2*x x"], 8), "1", "1", 6).unwrap(),
        (2, 1)
    );
    assert!(matches!(
        minimal_relations_defect(&lq, &rels(&lq, &["x x"], 8), "1", "1", 3),
        Err(Error::BoundTooSmall { needed: 4, got: 3 })
    ));
}

#[test]
fn mesh_relations_are_minimal() {
    let mut cases: Vec<TranslationQuiver> = (2..=5).map(even).collect();
    cases.push(intro_a1());
    cases.push(conifold());
    for tq in cases {
        let (iq, r) = mesh_set(&tq, 8);
        let bound = r.max_len() + 2;
        for rel in &r.relations {
            let (s, t) = rel.element.endpoints().unwrap();
            let (count, dim) =
                minimal_relations_defect(&iq, &r, iq.vertex_id(t), iq.vertex_id(s), bound).unwrap();
            assert_eq!(count, dim, "relation {}", rel.id);
            assert_eq!(count, 1);
        }
    }
}

#[test]
fn cartan_examples() {
    let kk = IndexedQuiver::new(
        GradedQuiver::new(vec![Vertex::new("1"), Vertex::new("2")], vec![]).unwrap(),
    );
    let a = quotient_algebra(&kk, &RelationSet::<Rational>::new(vec![]).unwrap(), 4, 2).unwrap();
    assert_eq!(cartan_matrix(&a).unwrap(), vec![vec![1, 0], vec![0, 1]]);

    let lq = loop_quiver();
    let a = quotient_algebra(&lq, &rels(&lq, &["x x"], 6), 6, 2).unwrap();
    assert_eq!(cartan_matrix(&a).unwrap(), vec![vec![2]]);

    let (iq, r) = mesh_set(&even(2), 10);
    let a = quotient_algebra(&iq, &r, 10, 2).unwrap();
    assert_eq!(cartan_matrix(&a).unwrap(), vec![vec![1, 1], vec![1, 1]]);

    let lq2 = loop_quiver();
    let free = quotient_algebra(&lq2, &rels(&lq2, &["x x x x x x x x"], 8), 3, 2).unwrap();
    assert!(!free.stabilized);
    assert_eq!(cartan_matrix(&free), Err(Error::NotStabilizedInput));
}

#[test]
fn corner_examples() {
    let (iq, r) = mesh_set(&intro_a1(), 10);
    let a = quotient_algebra(&iq, &r, 10, 2).unwrap();
    assert_eq!(a.dim(), 5);
    let all: BTreeSet<String> = ["1", "2"].map(String::from).into();
    assert_eq!(corner_algebra(&a, &all).unwrap().dim(), 5);
    let one: BTreeSet<String> = ["1".to_string()].into();
    let c = corner_algebra(&a, &one).unwrap();
    assert_eq!(c.dim(), 2);
    assert!(c.is_associative());
    assert_eq!(
        corner_algebra(&a, &BTreeSet::new()).unwrap_err(),
        Error::EmptyIdempotent
    );

    let s2 = Module::simple(&a, "2").unwrap();
    assert_eq!(restrict_module(&a, &s2, &one).unwrap().total_dim(), 0);
    assert_eq!(restrict_module(&a, &s2, &all).unwrap().total_dim(), 1);
}

fn random_element(
    iq: &Arc<IndexedQuiver>,
    rng: &mut ChaCha8Rng,
    bound: usize,
) -> TruncatedElement<Rational> {
    let words = iq.words(3, 10_000, |_| true).unwrap();
    let mut x = TruncatedElement::zero(iq, bound);
    for _ in 0..rng.gen_range(1..=4) {
        let w = words[rng.gen_range(0..words.len())].clone();
        x.add_term(w, q(rng.gen_range(-3..=3)));
    }
    x
}

#[test]
fn associativity_of_truncated_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for tq in [even(3), intro_a1(), conifold(), even_a_curve(2)] {
        let iq = IndexedQuiver::new(tq.quiver.clone());
        for _ in 0..200 {
            let (x, y, z) = (
                random_element(&iq, &mut rng, 10),
                random_element(&iq, &mut rng, 10),
                random_element(&iq, &mut rng, 10),
            );
            assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
        }
    }
    for n in [2, 3] {
        let (iq, r) = mesh_set(&even(n), 10);
        assert!(quotient_algebra(&iq, &r, 10, 2).unwrap().is_associative());
    }
}

#[test]
fn truncation_coherence() {
    let lq = loop_quiver();
    let cases: Vec<(Arc<IndexedQuiver>, RelationSet<Rational>, usize)> = vec![
        (lq.clone(), rels(&lq, &["x x"], 24), 24),
        {
            let (a, b) = mesh_set(&even(2), 24);
            (a, b, 24)
        },
        {
            let (a, b) = mesh_set(&intro_a1(), 24);
            (a, b, 24)
        },
        {
            let (a, b) = mesh_set(&even(3), 12);
            (a, b, 12)
        },
    ];
    for (iq, r, top) in cases {
        let mut prev: Option<BTreeMap<(String, String), usize>> = None;
        let a = quotient_algebra(&iq, &r, top, 2).unwrap();
        assert!(a.stabilized);
        for l in r.max_len()..=top {
            let d = truncated_block_dims(&iq, &r, l).unwrap();
            if let Some(p) = &prev {
                // truncations of a finite quotient can only grow until they settle
                assert!(d.iter().all(|(k, v)| p.get(k).is_none_or(|pv| pv <= v)));
            }
            if l >= a.l_used {
                assert_eq!(d, a.block_dims(), "L = {l}");
            }
            prev = Some(d);
        }
    }
}

#[test]
fn ideal_span_matches_saturation() {
    let cases = [
        (even(2), 6),
        (even(3), 6),
        (even(4), 5),
        (intro_a1(), 6),
        (even_a_curve(2), 6),
        (conifold(), 4),
    ];
    for (tq, l) in cases {
        for bound in [l - 1, l] {
            let (iq, r) = mesh_set(&tq, bound);
            assert_eq!(
                truncated_block_dims(&iq, &r, bound).unwrap(),
                common::mesh_quotient(&tq, bound, false)
            );
        }
    }
}
