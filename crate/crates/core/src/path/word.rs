use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quiver::GradedQuiver;

/// A graded quiver with integer indices for vertices and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedQuiver {
    pub quiver: GradedQuiver,
    src: Vec<usize>,
    tgt: Vec<usize>,
    degree: Vec<i32>,
    out: Vec<Vec<usize>>,
    vpos: HashMap<String, usize>,
    apos: HashMap<String, usize>,
}

impl IndexedQuiver {
    pub fn new(quiver: GradedQuiver) -> Arc<Self> {
        let vpos: HashMap<String, usize> = quiver
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        let mut apos = HashMap::new();
        for (i, a) in quiver.arrows.iter().enumerate().rev() {
            apos.insert(a.label.clone(), i);
        }
        for (i, a) in quiver.arrows.iter().enumerate() {
            apos.insert(a.id.clone(), i);
        }
        let src: Vec<usize> = quiver.arrows.iter().map(|a| vpos[&a.src]).collect();
        let tgt: Vec<usize> = quiver.arrows.iter().map(|a| vpos[&a.tgt]).collect();
        let mut out = vec![Vec::new(); quiver.vertices.len()];
        for (a, &s) in src.iter().enumerate() {
            out[s].push(a);
        }
        Arc::new(IndexedQuiver {
            degree: quiver.arrows.iter().map(|a| a.degree).collect(),
            quiver,
            src,
            tgt,
            out,
            vpos,
            apos,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.quiver.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.quiver.arrows.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vpos
            .get(id)
            .copied()
            .ok_or_else(|| Error::UndeclaredVertex(id.to_string()))
    }

    /// Resolves an arrow by id first, then by label.
    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.apos
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.quiver.vertices[v].id
    }

    pub fn arrow_id(&self, a: usize) -> &str {
        &self.quiver.arrows[a].id
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.degree[a]
    }

    pub fn arrows_out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// All words of length at most `bound` accepted by `keep`, in word
    /// order. Extension happens on the left, so `keep` must be closed under
    /// dropping the leftmost arrow for the enumeration to be complete.
    pub fn words(
        &self,
        bound: usize,
        budget: usize,
        keep: impl Fn(&Word) -> bool,
    ) -> Result<Vec<Word>> {
        let mut layer: Vec<Word> = (0..self.n_vertices())
            .map(Word::trivial)
            .filter(|w| keep(w))
            .collect();
        let mut all = layer.clone();
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &layer {
                for &a in &self.out[w.tgt] {
                    let mut arrows = Vec::with_capacity(w.len() + 1);
                    arrows.push(a);
                    arrows.extend_from_slice(&w.arrows);
                    let nw = Word {
                        arrows,
                        src: w.src,
                        tgt: self.tgt[a],
                    };
                    if keep(&nw) {
                        next.push(nw);
                    }
                }
            }
            if all.len() + next.len() > budget {
                return Err(Error::OutOfMemoryBudget {
                    needed: all.len() + next.len(),
                    budget,
                });
            }
            all.extend(next.iter().cloned());
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        all.sort();
        Ok(all)
    }
}

/// A path, stored in written (right-to-left) order: `arrows[0]` is applied
/// last. The trivial path at `v` has no arrows and `src == tgt == v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub arrows: Vec<usize>,
    pub src: usize,
    pub tgt: usize,
}

impl Word {
    pub fn trivial(v: usize) -> Self {
        Word {
            arrows: Vec::new(),
            src: v,
            tgt: v,
        }
    }

    pub fn arrow(q: &IndexedQuiver, a: usize) -> Self {
        Word {
            arrows: vec![a],
            src: q.src(a),
            tgt: q.tgt(a),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn degree(&self, q: &IndexedQuiver) -> i32 {
        self.arrows.iter().map(|&a| q.degree(a)).sum()
    }

    /// `self ∘ right`: apply `right` first. `None` if not composable.
    pub fn compose(&self, right: &Word) -> Option<Word> {
        if self.src != right.tgt {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + right.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&right.arrows);
        Some(Word {
            arrows,
            src: right.src,
            tgt: self.tgt,
        })
    }

    pub fn visits(&self, q: &IndexedQuiver, v: usize) -> bool {
        self.src == v || self.arrows.iter().any(|&a| q.tgt(a) == v)
    }

    pub fn to_text(&self, q: &IndexedQuiver) -> String {
        if self.arrows.is_empty() {
            format!("e({})", q.vertex_id(self.src))
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrow_id(a))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.src.cmp(&other.src))
            .then_with(|| self.tgt.cmp(&other.tgt))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
