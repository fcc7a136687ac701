use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::types::TranslationQuiver;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub id: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn messages(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| format!("{} {}: {}", v.rule, v.id, v.message))
            .collect()
    }
}

/// Checks every translation-quiver law and reports all violations.
pub fn validate_translation_quiver(tq: &TranslationQuiver) -> ValidationReport {
    let mut out = Vec::new();
    let mut flag = |rule: &'static str, id: &str, message: String| {
        out.push(Violation {
            rule,
            id: id.to_string(),
            message,
        })
    };
    let q = &tq.quiver;

    let mut ids = BTreeSet::new();
    for v in &q.vertices {
        if !ids.insert(v.id.as_str()) {
            flag("duplicate-id", &v.id, "vertex declared twice".into());
        }
    }
    let mut aids = BTreeSet::new();
    for a in &q.arrows {
        if !aids.insert(a.id.as_str()) {
            flag("duplicate-id", &a.id, "arrow declared twice".into());
        }
        for end in [&a.src, &a.tgt] {
            if !ids.contains(end.as_str()) {
                flag(
                    "undeclared-vertex",
                    &a.id,
                    format!("endpoint `{end}` not declared"),
                );
            }
        }
        if a.degree != 0 && a.degree != -1 {
            flag(
                "degree",
                &a.id,
                format!("degree {} outside {{0, -1}}", a.degree),
            );
        } else if a.degree != 0 {
            flag(
                "solid-only",
                &a.id,
                "translation quivers carry degree-0 arrows only".into(),
            );
        }
    }

    let projective: BTreeMap<&str, bool> = q
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), v.projective))
        .collect();
    for v in &q.vertices {
        if !v.projective && !tq.tau.contains_key(&v.id) {
            flag(
                "tau-domain",
                &v.id,
                "tau undefined on a non-projective vertex".into(),
            );
        }
    }
    let mut images: BTreeMap<&str, &str> = BTreeMap::new();
    for (k, v) in &tq.tau {
        match projective.get(k.as_str()) {
            None => flag(
                "tau-domain",
                k,
                "tau defined on an undeclared vertex".into(),
            ),
            Some(true) => flag("tau-domain", k, "tau defined on a projective vertex".into()),
            _ => {}
        }
        match projective.get(v.as_str()) {
            None => flag("tau-image", k, format!("image `{v}` not declared")),
            Some(true) => flag("tau-image", k, format!("image `{v}` is projective")),
            _ => {}
        }
        if let Some(prev) = images.insert(v.as_str(), k.as_str()) {
            flag(
                "tau-injective",
                k,
                format!("`{prev}` and `{k}` both map to `{v}`"),
            );
        }
    }
    let tau_inv = |i: &str| images.get(i).copied();

    for a in q.arrows.iter().filter(|a| a.degree == 0) {
        let target = tau_inv(&a.src);
        match (target, tq.sigma.get(&a.id)) {
            (Some(_), None) => flag("sigma-domain", &a.id, "mesh pairing missing".into()),
            (None, Some(_)) => flag(
                "sigma-domain",
                &a.id,
                "paired arrow starts where tau^-1 is undefined".into(),
            ),
            _ => {}
        }
    }
    for (a_id, b_id) in &tq.sigma {
        let (Some(a), Some(b)) = (q.arrow(a_id), q.arrow(b_id)) else {
            flag(
                "sigma-domain",
                a_id,
                format!("pairing `{a_id}` -> `{b_id}` names an unknown arrow"),
            );
            continue;
        };
        if b.src != a.tgt || Some(b.tgt.as_str()) != tau_inv(&a.src) {
            flag(
                "mesh-target",
                a_id,
                format!(
                    "sigma image {}: {} -> {} should run {} -> {}",
                    b.id,
                    b.src,
                    b.tgt,
                    a.tgt,
                    tau_inv(&a.src).unwrap_or("?")
                ),
            );
        }
    }
    for v in &q.vertices {
        let Some(t) = tau_inv(&v.id) else { continue };
        let outs: Vec<_> = q.arrows_from(&v.id).filter(|a| a.degree == 0).collect();
        let mut hit = BTreeSet::new();
        for a in &outs {
            if let Some(b) = tq.sigma.get(&a.id) {
                if !hit.insert(b.as_str()) {
                    flag("sigma-injective", &v.id, format!("`{b}` paired twice"));
                }
            }
        }
        let middles: BTreeSet<&str> = outs.iter().map(|a| a.tgt.as_str()).collect();
        for b in q
            .arrows
            .iter()
            .filter(|b| b.degree == 0 && b.tgt == t && middles.contains(b.src.as_str()))
        {
            if !hit.contains(b.id.as_str()) {
                flag(
                    "sigma-surjective",
                    &v.id,
                    format!("arrow `{}` into {t} is not paired", b.id),
                );
            }
        }
    }
    for (k, c) in &tq.mesh_coeff {
        if q.arrow(k).is_none() {
            flag("mesh-coeff", k, "coefficient for an unknown arrow".into());
        } else if c.is_zero() {
            flag("mesh-coeff", k, "zero coefficient".into());
        }
    }

    ValidationReport {
        ok: out.is_empty(),
        violations: out,
    }
}
