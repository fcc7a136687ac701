//! Shipped full translation quivers and stored odd D/E quivers.

use std::collections::BTreeMap;

use super::types::{Arrow, GradedQuiver, TranslationQuiver, Vertex};
use super::{parse_quiver, Family};

const INTRO_A1: &str = include_str!("../../fixtures/intro_a1.json");
const CONIFOLD: &str = include_str!("../../fixtures/conifold.json");

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["intro_a1", "conifold", "curve_a2", "curve_a3", "curve_a4"];

/// Full quiver of the A_1 curve singularity: `R` at vertex 1, one more
/// indecomposable at vertex 2, relation `pi`.
pub fn intro_a1() -> TranslationQuiver {
    parse_quiver(INTRO_A1).expect("shipped fixture parses")
}

/// Full quiver of the conifold: projective vertex `⋆` between `+` and `-`.
pub fn conifold() -> TranslationQuiver {
    parse_quiver(CONIFOLD).expect("shipped fixture parses")
}

/// Doubled chain `1 - 2 - ... - (n+1)` with `n+1` projective and tau the
/// identity elsewhere: the even A_n mesh category with its projective
/// attached at the end of the chain.
pub fn even_a_curve(n: usize) -> TranslationQuiver {
    let vertices = (1..=n + 1)
        .map(|i| Vertex {
            id: i.to_string(),
            projective: i == n + 1,
        })
        .collect();
    let mut arrows = Vec::new();
    let mut sigma = BTreeMap::new();
    for k in 1..=n {
        let (a, b) = (format!("a{k}"), format!("a{k}*"));
        arrows.push(Arrow::new(
            &a,
            &format!("α{k}"),
            &k.to_string(),
            &(k + 1).to_string(),
            0,
        ));
        arrows.push(Arrow::new(
            &b,
            &format!("α{k}*"),
            &(k + 1).to_string(),
            &k.to_string(),
            0,
        ));
        sigma.insert(a.clone(), b.clone());
        if k < n {
            sigma.insert(b, a);
        }
    }
    TranslationQuiver {
        quiver: GradedQuiver::new(vertices, arrows).expect("unique ids"),
        tau: (1..=n).map(|i| (i.to_string(), i.to_string())).collect(),
        sigma,
        mesh_coeff: BTreeMap::new(),
    }
}

pub fn by_name(name: &str) -> Option<TranslationQuiver> {
    match name {
        "intro_a1" => Some(intro_a1()),
        "conifold" => Some(conifold()),
        _ => {
            let n: usize = name.strip_prefix("curve_a")?.parse().ok()?;
            (n >= 1).then(|| even_a_curve(n))
        }
    }
}

/// Odd-dimensional D and E quivers, checked in as data.
pub fn odd_transcriptions() -> Vec<(Family, usize, TranslationQuiver)> {
    [
        (Family::D, 4, include_str!("../../fixtures/odd_d4.json")),
        (Family::D, 5, include_str!("../../fixtures/odd_d5.json")),
        (Family::D, 6, include_str!("../../fixtures/odd_d6.json")),
        (Family::D, 7, include_str!("../../fixtures/odd_d7.json")),
        (Family::E, 6, include_str!("../../fixtures/odd_e6.json")),
        (Family::E, 7, include_str!("../../fixtures/odd_e7.json")),
        (Family::E, 8, include_str!("../../fixtures/odd_e8.json")),
    ]
    .into_iter()
    .map(|(f, n, text)| (f, n, parse_quiver(text).expect("shipped fixture parses")))
    .collect()
}
