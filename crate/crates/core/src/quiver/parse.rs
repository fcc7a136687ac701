use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::types::{Arrow, GradedQuiver, TranslationQuiver, Vertex};
use crate::error::{Error, Result};
use crate::scalar::{big_to_string, parse_big};

/// On-disk shape of a quiver document.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct QuiverDoc {
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub tau: BTreeMap<String, String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mesh_coeff: BTreeMap<String, String>,
}

impl QuiverDoc {
    pub fn from_tq(tq: &TranslationQuiver) -> Self {
        QuiverDoc {
            vertices: tq.quiver.vertices.clone(),
            arrows: tq.quiver.arrows.clone(),
            tau: tq.tau.clone(),
            sigma: tq.sigma.clone(),
            mesh_coeff: tq
                .mesh_coeff
                .iter()
                .map(|(k, v)| (k.clone(), big_to_string(v)))
                .collect(),
        }
    }

    pub fn into_tq(self) -> Result<TranslationQuiver> {
        let mut arrows = self.arrows;
        for a in &mut arrows {
            if a.label.is_empty() {
                a.label = a.id.clone();
            }
        }
        let quiver = GradedQuiver::new(self.vertices, arrows)?;
        for (k, v) in &self.tau {
            for id in [k, v] {
                if quiver.vertex(id).is_none() {
                    return Err(Error::UndeclaredVertex(id.clone()));
                }
            }
        }
        for (k, v) in &self.sigma {
            for id in [k, v] {
                if quiver.arrow(id).is_none() {
                    return Err(Error::UnknownArrow(id.clone()));
                }
            }
        }
        let mut mesh_coeff = BTreeMap::new();
        for (k, v) in self.mesh_coeff {
            if quiver.arrow(&k).is_none() {
                return Err(Error::UnknownArrow(k));
            }
            let q = parse_big(&v).ok_or_else(|| Error::Syntax(format!("bad rational `{v}`")))?;
            mesh_coeff.insert(k, q);
        }
        Ok(TranslationQuiver {
            quiver,
            tau: self.tau,
            sigma: self.sigma,
            mesh_coeff,
        })
    }
}

/// Parses the JSON quiver format. Mesh laws are not checked here; see
/// [`validate_translation_quiver`](super::validate_translation_quiver).
pub fn parse_quiver(text: &str) -> Result<TranslationQuiver> {
    let doc: QuiverDoc = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    doc.into_tq()
}

pub(crate) fn parse_value(value: serde_json::Value) -> Result<TranslationQuiver> {
    let doc: QuiverDoc = serde_json::from_value(value).map_err(|e| Error::Syntax(e.to_string()))?;
    doc.into_tq()
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTRO: &str = r#"{
        "vertices": [{"id": "1", "projective": true}, {"id": "2", "projective": false}],
        "arrows": [
            {"id": "p", "label": "p", "src": "1", "tgt": "2", "degree": 0},
            {"id": "i", "label": "i", "src": "2", "tgt": "1", "degree": 0}
        ],
        "tau": {"2": "2"},
        "sigma": {"i": "p"}
    }"#;

    #[test]
    fn intro_example() {
        let tq = parse_quiver(INTRO).unwrap();
        assert_eq!(tq.quiver.vertices.len(), 2);
        assert_eq!(tq.quiver.arrows.len(), 2);
        assert_eq!(tq.tau_inverse("2"), Some("2"));
    }

    #[test]
    fn empty_quiver() {
        let tq = parse_quiver(r#"{"vertices": [], "arrows": []}"#).unwrap();
        assert!(tq.quiver.vertices.is_empty() && tq.quiver.arrows.is_empty());
    }

    #[test]
    fn errors() {
        let undeclared = r#"{"vertices": [{"id": "1"}],
            "arrows": [{"id": "x", "label": "x", "src": "9", "tgt": "1", "degree": 0}]}"#;
        assert_eq!(
            parse_quiver(undeclared),
            Err(Error::UndeclaredVertex("9".into()))
        );
        let dup = r#"{"vertices": [{"id": "1"}, {"id": "1"}], "arrows": []}"#;
        assert_eq!(parse_quiver(dup), Err(Error::DuplicateId("1".into())));
        assert!(matches!(parse_quiver("{"), Err(Error::Syntax(_))));
    }
}
