//! Acceptance criteria 1-11, one line each. Exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use meshforge::complexes::{brutal_truncate, std_truncate, BrutalSide, Complex, StdSide};
use meshforge::dg::{
    check_d_squared, dg_auslander, dg_cohomology_dims, h0, perturb_gamma, shipped_perturbations,
};
use meshforge::homology::{
    auslander_algebra, cy_duality_check, cy_fraction, ext_table, ext_table_from_quiver, k0_rank,
    min_proj_resolution, stable_quotient,
};
use meshforge::koszul::{koszul_cohomology, koszul_dual, AugmentedDgAlgebra};
use meshforge::path::{
    minimal_relations_defect, quotient_algebra, IndexedQuiver, RelationSet, TruncatedElement,
};
use meshforge::quiver::fixtures::{by_name, conifold, even_a_curve, intro_a1, NAMES};
use meshforge::quiver::{
    ade_translation_quiver, canonical_form, validate_translation_quiver, Arrow, Family,
    GradedQuiver, TranslationQuiver, Vertex,
};
use meshforge::{Algebra, Dg, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn generators() -> Vec<(Family, usize)> {
    let mut out: Vec<_> = (1..=12).map(|n| (Family::A, n)).collect();
    out.extend((4..=12).map(|n| (Family::D, n)));
    out.extend([6, 7, 8].map(|n| (Family::E, n)));
    out
}

/// Known vertex and solid-arrow counts; `None` where only the
/// vertex count is pinned down.
fn expected_counts(f: Family, n: usize, odd: bool) -> (usize, Option<usize>) {
    match (f, odd) {
        (_, false) => (n, Some(2 * (n - 1))),
        (Family::A, true) if n == 1 => (2, Some(0)),
        (Family::A, true) if n.is_multiple_of(2) => (n / 2, Some(2 * (n / 2 - 1) + 1)),
        (Family::A, true) => (n.div_ceil(2) + 1, Some(n + 1)),
        (Family::D, true) if n % 2 == 1 => (4 * (n / 2) - 1, None),
        (Family::D, true) => (2 * n, None),
        (Family::E, true) => (
            [(6, 6), (7, 14), (8, 16)]
                .into_iter()
                .find(|x| x.0 == n)
                .unwrap()
                .1,
            None,
        ),
    }
}

fn generator_structure() -> Check {
    for (f, n) in generators() {
        for d in [0, 1] {
            let tq = ade_translation_quiver(f, n, d).map_err(|e| e.to_string())?;
            let report = validate_translation_quiver(&tq);
            ensure!(report.ok, "{f:?}{n} d={d}: {:?}", report.messages());
            let (nv, na) = expected_counts(f, n, d == 1);
            ensure!(
                tq.quiver.vertices.len() == nv,
                "{f:?}{n} d={d}: {} vertices",
                tq.quiver.vertices.len()
            );
            if let Some(na) = na {
                ensure!(
                    tq.quiver.solid_count() == na,
                    "{f:?}{n} d={d}: {} solid arrows",
                    tq.quiver.solid_count()
                );
            }
            let dg: Dg = dg_auslander(&tq, 20).map_err(|e| e.to_string())?;
            let q = &dg.quiver().quiver;
            ensure!(
                q.degree_zero_part().arrows.len() == tq.quiver.arrows.len(),
                "{f:?}{n}: degree-0 part differs"
            );
            for v in &tq.quiver.vertices {
                let rhos: Vec<_> = q.arrows_from(&v.id).filter(|a| a.degree == -1).collect();
                ensure!(
                    rhos.len() == 1 && Some(rhos[0].tgt.as_str()) == tq.tau_inverse(&v.id),
                    "{f:?}{n} d={d}: rho at {}",
                    v.id
                );
            }
            ensure!(check_d_squared(&dg), "{f:?}{n} d={d}: d² ≠ 0");
        }
    }
    Ok(())
}

fn knorrer() -> Check {
    for (f, n) in generators() {
        for d in 0..=3 {
            let a = canonical_form(&ade_translation_quiver(f, n, d).unwrap());
            let b = canonical_form(&ade_translation_quiver(f, n, d + 2).unwrap());
            ensure!(
                a == b,
                "{f:?}{n}: canonical forms differ between d={d} and d={}",
                d + 2
            );
        }
    }
    Ok(())
}

fn h0_dims() -> Check {
    for n in 1..=6 {
        let tq = ade_translation_quiver(Family::A, n, 0).unwrap();
        let dg: Dg = dg_auslander(&tq, 20).unwrap();
        let a = h0(&dg, 20).map_err(|e| e.to_string())?;
        let want = n * (n + 1) * (n + 2) / 6;
        ensure!(
            a.stabilized && a.dim() == want,
            "even A{n}: dim {} (stabilized {})",
            a.dim(),
            a.stabilized
        );
        for bound in [a.l_used, a.l_used + 1] {
            let oracle = common::mesh_quotient(&tq, bound, false);
            ensure!(
                oracle == a.block_dims(),
                "even A{n}: oracle disagrees at L={bound}"
            );
        }
    }
    let odd: Dg = dg_auslander(&ade_translation_quiver(Family::A, 1, 1).unwrap(), 10).unwrap();
    let d = h0(&odd, 10).unwrap().dim();
    ensure!(d == 2, "odd A1: dim {d}");
    Ok(())
}

fn bridge() -> Check {
    for (name, dim) in [("intro_a1", 1), ("conifold", 2), ("curve_a2", 4)] {
        let tq = by_name(name).unwrap();
        let st = stable_quotient::<Rational>(&tq, 20).map_err(|e| e.to_string())?;
        let dg: Dg = dg_auslander(&tq.stable_part(), 20).unwrap();
        let h = h0(&dg, 20).unwrap();
        ensure!(st.dim() == dim, "{name}: stable algebra dim {}", st.dim());
        ensure!(
            st.block_dims() == h.block_dims(),
            "{name}: blocks differ from H⁰"
        );
        let oracle = common::mesh_quotient(&tq, st.l_used + 1, true);
        ensure!(oracle == st.block_dims(), "{name}: oracle disagrees");
    }
    Ok(())
}

fn fractional_cy() -> Check {
    let none = BTreeMap::new();
    for (f, n) in generators() {
        for d in [0, 1] {
            let tq = ade_translation_quiver(f, n, d).unwrap();
            ensure!(
                cy_duality_check(&ext_table_from_quiver(&tq, 1, &none).unwrap()),
                "{f:?}{n} d={d}: duality"
            );
            if d == 0 {
                for v in tq.non_projective_vertices() {
                    let fr = cy_fraction(&tq, &v, 1).unwrap();
                    ensure!(fr == (2, 1), "{f:?}{n} vertex {v}: {fr:?}");
                }
            }
        }
    }
    let odd = ade_translation_quiver(Family::A, 1, 1).unwrap();
    for v in ["1", "2"] {
        ensure!(
            cy_fraction(&odd, v, 1).unwrap() == (4, 2),
            "odd A1 vertex {v}"
        );
    }
    for name in NAMES {
        let tq = by_name(name).unwrap();
        ensure!(
            cy_duality_check(&ext_table_from_quiver(&tq, 1, &none).unwrap()),
            "{name}: duality"
        );
    }
    Ok(())
}

fn mesh_set(
    tq: &TranslationQuiver,
    bound: usize,
) -> (std::sync::Arc<IndexedQuiver>, RelationSet<Rational>) {
    let iq = IndexedQuiver::new(tq.quiver.clone());
    let mut rels = Vec::new();
    for v in &tq.quiver.vertices {
        if tq.tau_inverse(&v.id).is_none() {
            continue;
        }
        let r = meshforge::dg::mesh_relation::<Rational>(tq, &v.id, bound).unwrap();
        if !r.is_zero() {
            rels.push((
                v.id.clone(),
                TruncatedElement::parse(&iq, &r.to_text(), bound).unwrap(),
            ));
        }
    }
    (iq.clone(), RelationSet::new(rels).unwrap())
}

fn dg_ext() -> Check {
    let mut cases = vec![intro_a1(), conifold()];
    cases.extend((1..=4).map(even_a_curve));
    for tq in cases {
        let ap = auslander_algebra::<Rational>(&tq, 6).unwrap();
        let t = ext_table(&ap).unwrap();
        let dg: Dg = dg_auslander(&tq.stable_part(), 6).unwrap();
        let q = &dg.quiver().quiver;
        // second route to Ext² of the Auslander algebra: minimal relations
        let (iq, rs) = mesh_set(&tq, 6);
        let verts = tq.non_projective_vertices();
        for i in &verts {
            for j in &verts {
                let (e1, e2) = (t.get(1, i, j), t.get(2, i, j));
                ensure!(q.count_arrows(i, j, 0) == e1, "Ext¹({i},{j}) = {e1}");
                ensure!(q.count_arrows(i, j, -1) == e2, "Ext²({i},{j}) = {e2}");
                ensure!(
                    tq.quiver.count_arrows(i, j, 0) == e1,
                    "Ext¹({i},{j}) vs the Gabriel quiver"
                );
                let (_, dim) = minimal_relations_defect(&iq, &rs, j, i, 6).unwrap();
                ensure!(dim == e2, "Ext²({i},{j}) = {e2} vs {dim} minimal relations");
            }
        }
        if ap.algebra.stabilized {
            let ap = auslander_algebra::<Rational>(&tq, 16).unwrap();
            for i in &verts {
                let r = min_proj_resolution(&ap.algebra, i, 2).map_err(|e| e.to_string())?;
                for j in &verts {
                    ensure!(
                        r.ext(1, j) == t.get(1, i, j) && r.ext(2, j) == t.get(2, i, j),
                        "resolution at {i},{j}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn minimal_relations() -> Check {
    for n in 2..=5 {
        let tq = ade_translation_quiver(Family::A, n, 0).unwrap();
        let (iq, rs) = mesh_set(&tq, 8);
        for l in [4, 6] {
            for i in tq.non_projective_vertices() {
                for j in tq.non_projective_vertices() {
                    let (count, dim) = minimal_relations_defect(&iq, &rs, &i, &j, l).unwrap();
                    ensure!(
                        count == dim,
                        "A{n} block ({i},{j}) at L={l}: {count} relations, dim {dim}"
                    );
                }
            }
        }
        let bound = n + 2;
        let space = common::PathSpace::new(&tq.quiver, bound, &BTreeSet::new());
        let gens = common::mesh_generators(&tq, &space);
        let full = common::total(&space.quotient_dims(&gens));
        for k in 0..gens.len() {
            let mut fewer = gens.clone();
            fewer.remove(k);
            let d = common::total(&space.quotient_dims(&fewer));
            ensure!(
                d > full,
                "A{n}: dropping relation {k} gives {d}, full {full}"
            );
        }
    }
    Ok(())
}

fn family(f: &str) -> Family {
    match f {
        "A" => Family::A,
        "D" => Family::D,
        _ => Family::E,
    }
}

fn gamma() -> Check {
    let specs = shipped_perturbations();
    ensure!(specs.len() == 10, "{} perturbation specs", specs.len());
    for spec in specs {
        let tq = ade_translation_quiver(family(&spec.family), spec.index, spec.dim).unwrap();
        let dg: Dg = dg_auslander(&tq, 16).unwrap();
        let p = perturb_gamma(&dg, &spec.resolve(&dg).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let (a, b) = (h0(&dg, 16).unwrap(), h0(&p, 16).unwrap());
        ensure!(
            a.stabilized && b.stabilized && a.block_dims() == b.block_dims(),
            "{}: H⁰ blocks",
            spec.name
        );
        let (ca, cb) = (
            dg_cohomology_dims(&dg, -2, 0, 7).unwrap(),
            dg_cohomology_dims(&p, -2, 0, 7).unwrap(),
        );
        let dims = |c: &BTreeMap<i32, (usize, bool)>| c.values().map(|x| x.0).collect::<Vec<_>>();
        ensure!(
            dims(&ca) == dims(&cb),
            "{}: window {:?} vs {:?}",
            spec.name,
            dims(&ca),
            dims(&cb)
        );
    }
    Ok(())
}

fn loop_algebra(rel: Option<&str>, bound: usize) -> Algebra {
    let g = GradedQuiver::new(
        vec![Vertex::new("1")],
        vec![Arrow::new("x", "x", "1", "1", 0)],
    )
    .unwrap();
    let iq = IndexedQuiver::new(g);
    let rels = rel
        .map(|r| {
            vec![(
                "r".to_string(),
                TruncatedElement::parse(&iq, r, bound).unwrap(),
            )]
        })
        .unwrap_or_default();
    quotient_algebra(&iq, &RelationSet::new(rels).unwrap(), bound, 2).unwrap()
}

fn koszul() -> Check {
    let kk = GradedQuiver::new(vec![Vertex::new("1"), Vertex::new("2")], vec![]).unwrap();
    let kk: Algebra = quotient_algebra(
        &IndexedQuiver::new(kk),
        &RelationSet::new(vec![]).unwrap(),
        4,
        2,
    )
    .unwrap();
    let mut algebras = vec![
        ("kxk".to_string(), kk, None),
        ("dual_numbers".into(), loop_algebra(Some("x x"), 6), None),
    ];
    for name in ["intro_a1", "conifold", "curve_a2", "curve_a3"] {
        let tq = by_name(name).unwrap();
        let st = stable_quotient::<Rational>(&tq, 20).map_err(|e| e.to_string())?;
        algebras.push((name.to_string(), st, Some(tq.stable_part())));
    }
    for (name, a, stable) in algebras {
        let e = koszul_dual(&AugmentedDgAlgebra::from_algebra(&a).unwrap(), 12).unwrap();
        let h = koszul_cohomology(&e, 0, 4, 12).unwrap();
        let defect = stable.as_ref().map(|tq| mesh_set(tq, 10));
        for i in a.vertex_ids() {
            let r = min_proj_resolution(&a, &i, 4).unwrap();
            for j in a.vertex_ids() {
                for n in 0..=4usize {
                    let k = h[&(n as i32)]
                        .blocks
                        .get(&(i.clone(), j.clone()))
                        .copied()
                        .unwrap_or(0);
                    ensure!(
                        k == r.ext(n, &j),
                        "{name}: Ext^{n}({i},{j}) Koszul {k}, resolution {}",
                        r.ext(n, &j)
                    );
                }
                if let Some((iq, rs)) = &defect {
                    let (_, dim) = minimal_relations_defect(iq, rs, &j, &i, 8).unwrap();
                    ensure!(
                        dim == r.ext(2, &j),
                        "{name}: Ext²({i},{j}) vs minimal relations {dim}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn random_known(rng: &mut ChaCha8Rng) -> common::Known {
    let lo = rng.gen_range(-4..=0);
    let pieces: Vec<(i32, bool)> = (0..rng.gen_range(1..=8))
        .map(|_| (rng.gen_range(0..4), rng.gen_bool(0.5)))
        .collect();
    let moves: Vec<_> = (0..rng.gen_range(0..=20))
        .map(|_| {
            (
                rng.gen_range(-4..=4),
                rng.gen_range(0..5),
                rng.gen_range(0..5),
                rng.gen_range(-3..=3),
            )
        })
        .collect();
    common::split_complex(lo, &pieces, &moves)
}

fn is_complex(c: &Complex<Rational>) -> bool {
    let Some((lo, hi)) = c.support() else {
        return true;
    };
    Complex::from_dims(
        &(lo..=hi).map(|j| (j, c.dim(j))).collect(),
        (lo..hi).map(|j| (j, c.d(j))).collect(),
    )
    .is_ok()
}

fn truncations() -> Check {
    let nonzero = |m: BTreeMap<i32, usize>| {
        m.into_iter()
            .filter(|x| x.1 > 0)
            .collect::<BTreeMap<_, _>>()
    };
    for seed in 0..100 {
        let k = random_known(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = nonzero(k.h.clone());
        ensure!(
            nonzero(k.cx.cohomology_dims()) == h,
            "seed {seed}: cohomology"
        );
        for i in -6..=6 {
            let le = std_truncate(&k.cx, i, StdSide::Leq);
            let gt = std_truncate(&k.cx, i, StdSide::Gt);
            let below: BTreeMap<_, _> = h
                .iter()
                .filter(|x| *x.0 <= i)
                .map(|(a, b)| (*a, *b))
                .collect();
            let above: BTreeMap<_, _> = h
                .iter()
                .filter(|x| *x.0 > i)
                .map(|(a, b)| (*a, *b))
                .collect();
            ensure!(
                nonzero(le.cohomology_dims()) == below,
                "seed {seed}: H(σ≤{i})"
            );
            ensure!(
                nonzero(gt.cohomology_dims()) == above,
                "seed {seed}: H(σ>{i})"
            );
            let ge = brutal_truncate(&k.cx, i, BrutalSide::Geq);
            let lt = brutal_truncate(&k.cx, i - 1, BrutalSide::Leq);
            ensure!(
                (-8..=8).all(|j| ge.dim(j) + lt.dim(j) == k.cx.dim(j)),
                "seed {seed}: β additivity at {i}"
            );
            ensure!(
                [&le, &gt, &ge, &lt].iter().all(|c| is_complex(c)),
                "seed {seed}: d² after truncating at {i}"
            );
        }
    }
    Ok(())
}

fn k0() -> Check {
    for (tq, rank) in [(intro_a1(), 1), (conifold(), 2), (even_a_curve(2), 2)] {
        let r = k0_rank(&auslander_algebra::<Rational>(&tq, 4).unwrap());
        ensure!(r == rank, "rank {r}, expected {rank}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("generator structure", generator_structure),
        ("Knörrer parity of canonical forms", knorrer),
        ("H⁰ dimensions of even A_n and A_1", h0_dims),
        ("stable algebra equals H⁰ on fixtures", bridge),
        ("fractional Calabi-Yau duality and fractions", fractional_cy),
        ("dg quiver arrows count Ext¹ and Ext²", dg_ext),
        ("mesh relations are minimal", minimal_relations),
        ("γ-perturbations preserve invariants", gamma),
        ("Koszul cohomology equals resolution Ext", koszul),
        ("truncation laws on random complexes", truncations),
        ("K₀ rank counts non-projective vertices", k0),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] {} {name} ({secs:.2}s)", n + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {} {name} ({secs:.2}s): {e}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
