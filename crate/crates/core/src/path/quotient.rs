//! Truncated quotients `kQ / (I + J^{L+1})` by span computations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::algebra::FinDimAlgebra;
use super::element::{RelationSet, TruncatedElement};
use super::word::{IndexedQuiver, Word};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Field;

/// Default cap on the number of words enumerated for one truncation.
pub const DEFAULT_WORD_BUDGET: usize = 2_000_000;

/// Word space of lengths `<= bound` together with the echelonized ideal.
pub(crate) struct TruncatedIdeal<F> {
    pub quiver: Arc<IndexedQuiver>,
    pub bound: usize,
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    pub ideal: Echelon<F>,
}

impl<F: Field> TruncatedIdeal<F> {
    /// Span of all `u·g·v` for generators `g` and words `u`, `v`.
    pub fn build(
        quiver: &Arc<IndexedQuiver>,
        gens: &[TruncatedElement<F>],
        bound: usize,
        budget: usize,
    ) -> Result<Self> {
        let words = quiver.words(bound, budget, |_| true)?;
        let index: HashMap<Word, usize> = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let mut by_src: Vec<Vec<&Word>> = vec![Vec::new(); quiver.n_vertices()];
        let mut by_tgt: Vec<Vec<&Word>> = vec![Vec::new(); quiver.n_vertices()];
        for w in &words {
            by_src[w.src].push(w);
            by_tgt[w.tgt].push(w);
        }
        let mut ideal = Echelon::new();
        for g in gens {
            let Some(min) = g.min_len() else { continue };
            let Some((s, t)) = g.endpoints() else {
                return Err(Error::InvalidRelation(
                    "generator spans several vertex pairs".into(),
                ));
            };
            for v in &by_tgt[s] {
                if v.len() + min > bound {
                    continue;
                }
                for u in &by_src[t] {
                    if u.len() + v.len() + min > bound {
                        continue;
                    }
                    let mut vec = SparseVec::new();
                    for (w, c) in g.terms() {
                        if u.len() + w.len() + v.len() > bound {
                            continue;
                        }
                        let uw = u.compose(w).expect("endpoint checked");
                        let full = uw.compose(v).expect("endpoint checked");
                        vec.insert(index[&full], c.clone());
                    }
                    ideal.insert(vec);
                }
            }
        }
        Ok(TruncatedIdeal {
            quiver: quiver.clone(),
            bound,
            words,
            index,
            ideal,
        })
    }

    /// Quotient dimension of each `(src, tgt)` block, by vertex index.
    pub fn block_dims(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (i, w) in self.words.iter().enumerate() {
            if !self.ideal.is_pivot(i) {
                *out.entry((w.src, w.tgt)).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn into_algebra(self, stabilized: bool) -> FinDimAlgebra<F> {
        let basis_idx: Vec<usize> = (0..self.words.len())
            .filter(|&i| !self.ideal.is_pivot(i))
            .collect();
        let pos: HashMap<usize, usize> =
            basis_idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let basis: Vec<Word> = basis_idx.iter().map(|&i| self.words[i].clone()).collect();
        let mut mult = HashMap::new();
        for (p, x) in basis.iter().enumerate() {
            for (q, y) in basis.iter().enumerate() {
                if x.len() + y.len() > self.bound {
                    continue;
                }
                let Some(w) = x.compose(y) else { continue };
                let v: SparseVec<F> = [(self.index[&w], F::one())].into();
                let r = self.ideal.reduce(v);
                if !r.is_empty() {
                    mult.insert((p, q), r.into_iter().map(|(i, c)| (pos[&i], c)).collect());
                }
            }
        }
        FinDimAlgebra::from_parts(self.quiver, basis, mult, stabilized, self.bound)
    }
}

/// Shared stabilization loop: grows `L` from `start` to `l_max` and stops
/// once the block dimensions agree over `window` consecutive bounds.
pub(crate) fn stabilize<F: Field>(
    quiver: &Arc<IndexedQuiver>,
    gens: &[TruncatedElement<F>],
    start: usize,
    l_max: usize,
    window: usize,
    budget: usize,
) -> Result<FinDimAlgebra<F>> {
    let window = window.max(1);
    let mut history: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    let mut last = None;
    for l in start.min(l_max)..=l_max {
        let gens_l: Vec<_> = gens.iter().map(|g| g.with_bound(l)).collect();
        let t = TruncatedIdeal::build(quiver, &gens_l, l, budget)?;
        history.push(t.block_dims());
        let n = history.len();
        if n >= window && history[n - window..].iter().all(|d| *d == history[n - 1]) {
            return Ok(t.into_algebra(true));
        }
        last = Some(t);
    }
    Ok(last.expect("at least one bound").into_algebra(false))
}

/// Finite-dimensional quotient `kQ/(R)` read off at the smallest bound where
/// block dimensions stay constant over `window` consecutive bounds. When that
/// never happens up to `l_max`, the `l_max` truncation is returned with
/// `stabilized == false`.
pub fn quotient_algebra<F: Field>(
    quiver: &Arc<IndexedQuiver>,
    relations: &RelationSet<F>,
    l_max: usize,
    window: usize,
) -> Result<FinDimAlgebra<F>> {
    quotient_algebra_with_budget(quiver, relations, l_max, window, DEFAULT_WORD_BUDGET)
}

pub fn quotient_algebra_with_budget<F: Field>(
    quiver: &Arc<IndexedQuiver>,
    relations: &RelationSet<F>,
    l_max: usize,
    window: usize,
    budget: usize,
) -> Result<FinDimAlgebra<F>> {
    if l_max < 2 {
        return Err(Error::BoundTooSmall {
            needed: 2,
            got: l_max,
        });
    }
    let start = relations.max_len().max(2);
    stabilize(quiver, &relations.elements(), start, l_max, window, budget)
}

/// Block dimensions of `kQ/(R)` modulo words longer than `bound`, keyed by
/// `(src id, tgt id)`, without any stabilization search.
pub fn truncated_block_dims<F: Field>(
    quiver: &Arc<IndexedQuiver>,
    relations: &RelationSet<F>,
    bound: usize,
) -> Result<BTreeMap<(String, String), usize>> {
    let gens: Vec<_> = relations
        .elements()
        .iter()
        .map(|g| g.with_bound(bound))
        .collect();
    let t = TruncatedIdeal::build(quiver, &gens, bound, DEFAULT_WORD_BUDGET)?;
    Ok(t.block_dims()
        .into_iter()
        .map(|((s, e), d)| {
            (
                (
                    quiver.vertex_id(s).to_string(),
                    quiver.vertex_id(e).to_string(),
                ),
                d,
            )
        })
        .collect())
}

/// `(count, dim)` for the block `e_i (I/(IJ+JI)) e_j`, i.e. paths from `j`
/// to `i`: `count` relations of `R` run from `j` to `i`, and `dim` is the
/// dimension of that block of `I/(IJ+JI)` at truncation `L`. The relations
/// are minimal on the block exactly when the two agree.
pub fn minimal_relations_defect<F: Field>(
    quiver: &Arc<IndexedQuiver>,
    relations: &RelationSet<F>,
    i: &str,
    j: &str,
    bound: usize,
) -> Result<(usize, usize)> {
    let needed = relations.max_len() + 2;
    if bound < needed {
        return Err(Error::BoundTooSmall { needed, got: bound });
    }
    let (ti, sj) = (quiver.vertex_index(i)?, quiver.vertex_index(j)?);
    let words = quiver.words(bound, DEFAULT_WORD_BUDGET, |_| true)?;
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut all = Echelon::<F>::new();
    let mut deep = Echelon::<F>::new();
    let mut count = 0;
    for r in &relations.relations {
        let g = r.element.with_bound(bound);
        let (s, t) = g.endpoints().expect("relation sets are single-block");
        if s == sj && t == ti {
            count += 1;
        }
        let min = g.min_len().unwrap_or(0);
        for v in words.iter().filter(|v| v.src == sj && v.tgt == s) {
            for u in words.iter().filter(|u| u.src == t && u.tgt == ti) {
                if u.len() + v.len() + min > bound {
                    continue;
                }
                let mut vec = SparseVec::new();
                for (w, c) in g.terms() {
                    if u.len() + w.len() + v.len() <= bound {
                        let full = u.compose(w).and_then(|x| x.compose(v)).expect("composable");
                        vec.insert(index[&full], c.clone());
                    }
                }
                if !u.is_empty() || !v.is_empty() {
                    deep.insert(vec.clone());
                }
                all.insert(vec);
            }
        }
    }
    Ok((count, all.rank() - deep.rank()))
}
