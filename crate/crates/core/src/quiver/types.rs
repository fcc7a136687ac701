use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub projective: bool,
}

impl Vertex {
    pub fn new(id: impl Into<String>) -> Self {
        Vertex {
            id: id.into(),
            projective: false,
        }
    }

    pub fn projective(id: impl Into<String>) -> Self {
        Vertex {
            id: id.into(),
            projective: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub degree: i32,
}

impl Arrow {
    pub fn new(id: &str, label: &str, src: &str, tgt: &str, degree: i32) -> Self {
        Arrow {
            id: id.to_string(),
            label: label.to_string(),
            src: src.to_string(),
            tgt: tgt.to_string(),
            degree,
        }
    }

    pub fn is_solid(&self) -> bool {
        self.degree == 0
    }
}

/// A quiver whose arrows carry a cohomological degree (0 solid, -1 dashed).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedQuiver {
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
}

impl GradedQuiver {
    /// Checks id uniqueness and that arrow endpoints are declared.
    pub fn new(vertices: Vec<Vertex>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        let mut aseen = HashSet::new();
        for a in &arrows {
            if !aseen.insert(a.id.as_str()) {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            for end in [&a.src, &a.tgt] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::UndeclaredVertex(end.clone()));
                }
            }
        }
        Ok(GradedQuiver { vertices, arrows })
    }

    pub fn vertex_position(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    pub fn arrows_from<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.src == v)
    }

    pub fn count_arrows(&self, src: &str, tgt: &str, degree: i32) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.src == src && a.tgt == tgt && a.degree == degree)
            .count()
    }

    pub fn solid_count(&self) -> usize {
        self.arrows.iter().filter(|a| a.degree == 0).count()
    }

    pub fn dashed_count(&self) -> usize {
        self.arrows.iter().filter(|a| a.degree == -1).count()
    }

    /// Subquiver on the kept vertices, keeping the arrows between them that
    /// pass the filter.
    pub fn restrict(&self, keep: &BTreeSet<String>, arrow_ok: impl Fn(&Arrow) -> bool) -> Self {
        GradedQuiver {
            vertices: self
                .vertices
                .iter()
                .filter(|v| keep.contains(&v.id))
                .cloned()
                .collect(),
            arrows: self
                .arrows
                .iter()
                .filter(|a| keep.contains(&a.src) && keep.contains(&a.tgt) && arrow_ok(a))
                .cloned()
                .collect(),
        }
    }

    pub fn degree_zero_part(&self) -> Self {
        GradedQuiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .filter(|a| a.degree == 0)
                .cloned()
                .collect(),
        }
    }
}

/// A quiver with translation `tau` (defined on the non-projective vertices)
/// and mesh pairing `sigma`, sending an arrow `i -> m` to an arrow
/// `m -> tau^{-1}(i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationQuiver {
    pub quiver: GradedQuiver,
    pub tau: BTreeMap<String, String>,
    pub sigma: BTreeMap<String, String>,
    pub mesh_coeff: BTreeMap<String, BigRational>,
}

impl TranslationQuiver {
    pub fn tau_inverse(&self, v: &str) -> Option<&str> {
        self.tau
            .iter()
            .find(|(_, t)| t.as_str() == v)
            .map(|(k, _)| k.as_str())
    }

    pub fn coeff(&self, arrow: &str) -> BigRational {
        self.mesh_coeff
            .get(arrow)
            .cloned()
            .unwrap_or_else(BigRational::one)
    }

    pub fn projective_vertices(&self) -> Vec<String> {
        self.quiver
            .vertices
            .iter()
            .filter(|v| v.projective)
            .map(|v| v.id.clone())
            .collect()
    }

    pub fn non_projective_vertices(&self) -> Vec<String> {
        self.quiver
            .vertices
            .iter()
            .filter(|v| !v.projective)
            .map(|v| v.id.clone())
            .collect()
    }

    /// Length of the tau-orbit through `v`, if the orbit closes up.
    pub fn tau_orbit_len(&self, v: &str) -> Option<usize> {
        let mut cur = self.tau.get(v)?;
        let mut n = 1;
        while cur != v {
            cur = self.tau.get(cur)?;
            n += 1;
            if n > self.quiver.vertices.len() {
                return None;
            }
        }
        Some(n)
    }

    /// Full subquiver on the non-projective vertices with tau, sigma and the
    /// coefficients restricted to what survives.
    pub fn stable_part(&self) -> TranslationQuiver {
        let keep: BTreeSet<String> = self.non_projective_vertices().into_iter().collect();
        let quiver = self.quiver.restrict(&keep, |_| true);
        let alive: BTreeSet<&str> = quiver.arrows.iter().map(|a| a.id.as_str()).collect();
        TranslationQuiver {
            tau: self
                .tau
                .iter()
                .filter(|(k, v)| keep.contains(*k) && keep.contains(*v))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            sigma: self
                .sigma
                .iter()
                .filter(|(k, v)| alive.contains(k.as_str()) && alive.contains(v.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            mesh_coeff: self
                .mesh_coeff
                .iter()
                .filter(|(k, _)| alive.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            quiver,
        }
    }
}
