//! dg Auslander algebras: one degree -1 arrow per vertex, differential given
//! by the mesh relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::path::{
    stabilize, FinDimAlgebra, IndexedQuiver, TruncatedElement, Word, DEFAULT_WORD_BUDGET,
};
use crate::quiver::{
    parse_value, to_json_value, validate_translation_quiver, Arrow, GradedQuiver, TranslationQuiver,
};
use crate::scalar::{sign, Field};

/// Graded quiver in degrees 0 and -1 with the images of the degree -1
/// generators.
#[derive(Clone, Debug)]
pub struct DgPresentation<F = BigRational> {
    quiver: Arc<IndexedQuiver>,
    diff: BTreeMap<usize, TruncatedElement<F>>,
    bound: usize,
}

impl<F: Field> PartialEq for DgPresentation<F> {
    fn eq(&self, other: &Self) -> bool {
        self.quiver.quiver == other.quiver.quiver
            && self.bound == other.bound
            && self.diff == other.diff
    }
}

impl<F: Field> DgPresentation<F> {
    /// Checks that every image sits in degree 0, shares its generator's
    /// endpoints, and that only degree -1 arrows have images.
    pub fn new(quiver: GradedQuiver, diff: BTreeMap<String, String>, bound: usize) -> Result<Self> {
        let dg = Self::parse_unchecked(quiver, diff, bound)?;
        for (&a, x) in &dg.diff {
            let q = &dg.quiver;
            if q.degree(a) != -1 {
                return Err(Error::Degree(format!(
                    "`{}` has degree {}",
                    q.arrow_id(a),
                    q.degree(a)
                )));
            }
            if x.degrees().iter().any(|&d| d != 0) {
                return Err(Error::Degree(format!(
                    "d({}) is not of degree 0",
                    q.arrow_id(a)
                )));
            }
            if x.terms()
                .keys()
                .any(|w| w.src != q.src(a) || w.tgt != q.tgt(a))
            {
                return Err(Error::IncompatibleEndpoints(format!(
                    "d({}) leaves its block",
                    q.arrow_id(a)
                )));
            }
        }
        for a in &dg.quiver.quiver.arrows {
            if a.degree != 0 && a.degree != -1 {
                return Err(Error::Degree(format!("`{}` has degree {}", a.id, a.degree)));
            }
        }
        Ok(dg)
    }

    /// No degree or endpoint checks; for building deliberately broken
    /// presentations.
    pub fn parse_unchecked(
        quiver: GradedQuiver,
        diff: BTreeMap<String, String>,
        bound: usize,
    ) -> Result<Self> {
        let iq = IndexedQuiver::new(quiver);
        let mut out = BTreeMap::new();
        for (id, text) in diff {
            let a = iq.arrow_index(&id)?;
            let x = TruncatedElement::parse(&iq, &text, bound)?;
            if !x.is_zero() {
                out.insert(a, x);
            }
        }
        Ok(DgPresentation {
            quiver: iq,
            diff: out,
            bound,
        })
    }

    pub fn quiver(&self) -> &Arc<IndexedQuiver> {
        &self.quiver
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn diff_of(&self, arrow: &str) -> Result<TruncatedElement<F>> {
        let a = self.quiver.arrow_index(arrow)?;
        Ok(self
            .diff
            .get(&a)
            .cloned()
            .unwrap_or_else(|| TruncatedElement::zero(&self.quiver, self.bound)))
    }

    /// Nonzero images keyed by arrow id.
    pub fn differentials(&self) -> BTreeMap<String, TruncatedElement<F>> {
        self.diff
            .iter()
            .map(|(&a, x)| (self.quiver.arrow_id(a).to_string(), x.clone()))
            .collect()
    }

    /// The degree -1 arrow starting at `v`.
    pub fn rho(&self, v: &str) -> Result<usize> {
        let vi = self.quiver.vertex_index(v)?;
        (0..self.quiver.n_arrows())
            .find(|&a| self.quiver.degree(a) == -1 && self.quiver.src(a) == vi)
            .ok_or_else(|| Error::MeshUndefined(v.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = to_json_value(&TranslationQuiver {
            quiver: self.quiver.quiver.clone(),
            ..Default::default()
        });
        let obj = v.as_object_mut().expect("object");
        obj.remove("tau");
        obj.remove("sigma");
        obj.insert(
            "diff".into(),
            json!(self
                .diff
                .iter()
                .map(|(&a, x)| (self.quiver.arrow_id(a).to_string(), x.to_text()))
                .collect::<BTreeMap<_, _>>()),
        );
        obj.insert("L".into(), json!(self.bound));
        v
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| Error::Syntax("expected an object".into()))?;
        let diff: BTreeMap<String, String> = match obj.remove("diff") {
            Some(d) => serde_json::from_value(d).map_err(|e| Error::Syntax(e.to_string()))?,
            None => BTreeMap::new(),
        };
        let bound = match obj.remove("L") {
            Some(l) => l
                .as_u64()
                .ok_or_else(|| Error::Syntax("L must be a non-negative integer".into()))?
                as usize,
            None => 20,
        };
        let tq = parse_value(v)?;
        Self::new(tq.quiver, diff, bound)
    }
}

fn mesh_relation_in<F: Field>(
    iq: &Arc<IndexedQuiver>,
    tq: &TranslationQuiver,
    i: &str,
    bound: usize,
) -> Result<TruncatedElement<F>> {
    let target = tq
        .tau_inverse(i)
        .ok_or_else(|| Error::MeshUndefined(i.to_string()))?;
    let mut out = TruncatedElement::zero(iq, bound);
    for a in tq.quiver.arrows_from(i).filter(|a| a.degree == 0) {
        let b = tq
            .sigma
            .get(&a.id)
            .ok_or_else(|| Error::PairingMissing(a.id.clone()))?;
        let (ai, bi) = (iq.arrow_index(&a.id)?, iq.arrow_index(b)?);
        let w = Word::arrow(iq, bi).compose(&Word::arrow(iq, ai));
        let w = w.filter(|w| iq.vertex_id(w.tgt) == target).ok_or_else(|| {
            Error::IncompatibleEndpoints(format!("sigma({}) = {b} does not end at {target}", a.id))
        })?;
        let c = F::from_big(&tq.coeff(&a.id)).ok_or(Error::Overflow)?;
        out.add_term(w, c);
    }
    Ok(out)
}

/// `Σ coeff(a)·σ(a)·a` over the solid arrows `a` leaving `i`: a combination
/// of paths `i -> τ⁻¹(i)`, zero when nothing leaves `i`.
pub fn mesh_relation<F: Field>(
    tq: &TranslationQuiver,
    i: &str,
    bound: usize,
) -> Result<TruncatedElement<F>> {
    mesh_relation_in(&IndexedQuiver::new(tq.quiver.clone()), tq, i, bound)
}

fn fresh_id(taken: &BTreeSet<String>, base: String) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

/// Adds `ρ_i: i -> τ⁻¹(i)` in degree -1 for every vertex, with `d(ρ_i)` the
/// mesh relation at `i`.
pub fn dg_auslander<F: Field>(tq: &TranslationQuiver, bound: usize) -> Result<DgPresentation<F>> {
    let proj = tq.projective_vertices();
    if !proj.is_empty() {
        return Err(Error::NotStable(proj));
    }
    let report = validate_translation_quiver(tq);
    if !report.ok {
        return Err(Error::ValidationFailed(report.messages()));
    }
    let mut taken: BTreeSet<String> = tq.quiver.arrows.iter().map(|a| a.id.clone()).collect();
    let mut arrows = tq.quiver.arrows.clone();
    let mut rhos = Vec::new();
    for v in &tq.quiver.vertices {
        let t = tq
            .tau_inverse(&v.id)
            .ok_or_else(|| Error::MeshUndefined(v.id.clone()))?;
        let id = fresh_id(&taken, format!("r{}", v.id));
        taken.insert(id.clone());
        arrows.push(Arrow::new(&id, &format!("ρ{}", v.id), &v.id, t, -1));
        rhos.push((id, v.id.clone()));
    }
    let quiver = GradedQuiver::new(tq.quiver.vertices.clone(), arrows)?;
    let iq = IndexedQuiver::new(quiver);
    let mut diff = BTreeMap::new();
    for (id, v) in rhos {
        let x = mesh_relation_in(&iq, tq, &v, bound)?;
        if !x.is_zero() {
            diff.insert(iq.arrow_index(&id)?, x);
        }
    }
    Ok(DgPresentation {
        quiver: iq,
        diff,
        bound,
    })
}

/// Extends the differential by linearity and the Leibniz rule
/// `d(xy) = d(x)y + (-1)^{|x|} x d(y)`.
pub fn apply_differential<F: Field>(
    dg: &DgPresentation<F>,
    x: &TruncatedElement<F>,
) -> Result<TruncatedElement<F>> {
    if !crate::path::same_quiver(x.quiver(), &dg.quiver) {
        return Err(Error::QuiverMismatch);
    }
    if x.bound() > dg.bound {
        return Err(Error::BoundMismatch(x.bound(), dg.bound));
    }
    let q = &dg.quiver;
    let mut out = TruncatedElement::zero(q, x.bound());
    for (w, c) in x.terms() {
        let mut left_degree = 0;
        for (k, &a) in w.arrows.iter().enumerate() {
            if let Some(img) = dg.diff.get(&a) {
                let prefix = Word {
                    arrows: w.arrows[..k].to_vec(),
                    src: q.tgt(a),
                    tgt: w.tgt,
                };
                let suffix = Word {
                    arrows: w.arrows[k + 1..].to_vec(),
                    src: w.src,
                    tgt: q.src(a),
                };
                let s = sign::<F>(left_degree % 2 != 0) * c.clone();
                for (m, cm) in img.terms() {
                    let Some(nw) = prefix.compose(m).and_then(|pm| pm.compose(&suffix)) else {
                        continue;
                    };
                    out.add_term(nw, s.clone() * cm.clone());
                }
            }
            left_degree += q.degree(a);
        }
    }
    Ok(out)
}

/// Whether `d(d(g)) = 0` for every generator `g`.
pub fn check_d_squared<F: Field>(dg: &DgPresentation<F>) -> bool {
    dg.diff.values().all(|x| {
        apply_differential(dg, x)
            .map(|y| y.is_zero())
            .unwrap_or(false)
    })
}

/// Degree-0 subquiver and the differential images transported onto it.
fn degree_zero_relations<F: Field>(
    dg: &DgPresentation<F>,
) -> Result<(Arc<IndexedQuiver>, Vec<TruncatedElement<F>>)> {
    let q = &dg.quiver;
    let sub = IndexedQuiver::new(q.quiver.degree_zero_part());
    let map: HashMap<usize, usize> = (0..q.n_arrows())
        .filter(|&a| q.degree(a) == 0)
        .enumerate()
        .map(|(new, old)| (old, new))
        .collect();
    let mut rels = Vec::new();
    for (&a, x) in &dg.diff {
        let mut y = TruncatedElement::zero(&sub, x.bound());
        for (w, c) in x.terms() {
            let arrows = w
                .arrows
                .iter()
                .map(|b| map.get(b).copied())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| {
                    Error::Degree(format!("d({}) involves a dashed arrow", q.arrow_id(a)))
                })?;
            y.add_term(
                Word {
                    arrows,
                    src: w.src,
                    tgt: w.tgt,
                },
                c.clone(),
            );
        }
        rels.push(y);
    }
    Ok((sub, rels))
}

/// `H⁰ = kQ⁰ / (d(ρ_i))`, computed as a stabilized truncated quotient.
pub fn h0<F: Field>(dg: &DgPresentation<F>, l_max: usize) -> Result<FinDimAlgebra<F>> {
    h0_with_window(dg, l_max, 2)
}

pub fn h0_with_window<F: Field>(
    dg: &DgPresentation<F>,
    l_max: usize,
    window: usize,
) -> Result<FinDimAlgebra<F>> {
    let (sub, rels) = degree_zero_relations(dg)?;
    let start = rels
        .iter()
        .filter_map(|r| r.max_len())
        .max()
        .unwrap_or(0)
        .max(2);
    stabilize(
        &sub,
        &rels,
        start,
        l_max.max(2),
        window,
        DEFAULT_WORD_BUDGET,
    )
}

/// Weight of each arrow: 1 for solid arrows, and for a dashed arrow the
/// shortest word in its image (2 when the image is zero). The differential
/// never lowers weight, so words above a weight bound span a subcomplex and
/// the truncation below is a quotient complex.
fn weights<F: Field>(dg: &DgPresentation<F>) -> (Vec<usize>, bool) {
    let q = &dg.quiver;
    let w: Vec<usize> = (0..q.n_arrows())
        .map(|a| {
            if q.degree(a) < 0 {
                dg.diff
                    .get(&a)
                    .and_then(|x| x.min_len())
                    .unwrap_or(2)
                    .max(1)
            } else {
                1
            }
        })
        .collect();
    let homogeneous = dg.diff.iter().all(|(&a, x)| {
        x.terms()
            .keys()
            .all(|t| t.arrows.iter().map(|&b| w[b]).sum::<usize>() == w[a])
    });
    (w, homogeneous)
}

type BlockKey = (usize, usize, usize);

fn truncated_cohomology<F: Field>(
    dg: &DgPresentation<F>,
    lo: i32,
    bound: usize,
) -> Result<BTreeMap<i32, usize>> {
    let q = &dg.quiver;
    let (wt, homogeneous) = weights(dg);
    let word_weight = |w: &Word| w.arrows.iter().map(|&a| wt[a]).sum::<usize>();
    let max_dashed = (1 - lo) as usize;
    // Words of weight <= bound with at most `max_dashed` dashed arrows.
    let mut by_degree: BTreeMap<i32, BTreeMap<BlockKey, Vec<Word>>> = BTreeMap::new();
    let mut layer: Vec<(Word, usize, usize)> = (0..q.n_vertices())
        .map(|v| (Word::trivial(v), 0, 0))
        .collect();
    let mut total = 0usize;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (w, weight, dashed) in layer {
            let key = (w.src, w.tgt, if homogeneous { weight } else { 0 });
            by_degree
                .entry(-(dashed as i32))
                .or_default()
                .entry(key)
                .or_default()
                .push(w.clone());
            for &a in q.arrows_out(w.tgt) {
                let nd = dashed + (q.degree(a) < 0) as usize;
                let nwt = weight + wt[a];
                if nwt > bound || nd > max_dashed || q.degree(a) > 0 {
                    continue;
                }
                let mut arrows = vec![a];
                arrows.extend_from_slice(&w.arrows);
                next.push((
                    Word {
                        arrows,
                        src: w.src,
                        tgt: q.tgt(a),
                    },
                    nwt,
                    nd,
                ));
            }
        }
        total += next.len();
        if total > DEFAULT_WORD_BUDGET {
            return Err(Error::OutOfMemoryBudget {
                needed: total,
                budget: DEFAULT_WORD_BUDGET,
            });
        }
        layer = next;
    }
    let empty = BTreeMap::new();
    let unbounded = dg.with_bound(usize::MAX);
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    for k in lo - 1..0 {
        let src_blocks = by_degree.get(&k).unwrap_or(&empty);
        let tgt_blocks = by_degree.get(&(k + 1)).unwrap_or(&empty);
        let mut rank = 0;
        for (key, words) in src_blocks {
            let Some(targets) = tgt_blocks.get(key) else {
                continue;
            };
            let index: HashMap<&Word, usize> =
                targets.iter().enumerate().map(|(i, w)| (w, i)).collect();
            rank += block_rank(&unbounded, words, &index, |w| word_weight(w) <= bound)?;
        }
        ranks.insert(k, rank);
    }
    let dims: BTreeMap<i32, usize> = (lo..=0)
        .map(|k| {
            (
                k,
                by_degree
                    .get(&k)
                    .map_or(0, |b| b.values().map(Vec::len).sum()),
            )
        })
        .collect();
    Ok((lo..=0)
        .map(|k| {
            let out_rank = ranks.get(&k).copied().unwrap_or(0);
            let in_rank = ranks.get(&(k - 1)).copied().unwrap_or(0);
            (k, dims[&k] - out_rank - in_rank)
        })
        .collect())
}

fn block_rank<F: Field>(
    dg: &DgPresentation<F>,
    words: &[Word],
    index: &HashMap<&Word, usize>,
    keep: impl Fn(&Word) -> bool,
) -> Result<usize> {
    let mut ech = Echelon::new();
    for w in words {
        let x = TruncatedElement::from_word(&dg.quiver, w.clone(), F::one(), usize::MAX);
        let dx = apply_differential(dg, &x)?;
        let mut v = SparseVec::new();
        for (t, c) in dx.terms() {
            if keep(t) {
                if let Some(&i) = index.get(t) {
                    v.insert(i, c.clone());
                }
            }
        }
        ech.insert(v);
    }
    Ok(ech.rank())
}

impl<F: Field> DgPresentation<F> {
    fn with_bound(&self, bound: usize) -> Self {
        DgPresentation {
            quiver: self.quiver.clone(),
            diff: self
                .diff
                .iter()
                .map(|(&a, x)| (a, x.with_bound(bound)))
                .collect(),
            bound,
        }
    }
}

/// Cohomology of the weight-truncated complex in degrees `lo..=hi` (within
/// `[-4, 0]`), each paired with whether bound `L - 1` gave the same value.
pub fn dg_cohomology_dims<F: Field>(
    dg: &DgPresentation<F>,
    lo: i32,
    hi: i32,
    bound: usize,
) -> Result<BTreeMap<i32, (usize, bool)>> {
    if lo > hi || lo < -4 || hi > 0 {
        return Err(Error::InvalidWindow(lo, hi));
    }
    let now = truncated_cohomology(dg, lo, bound)?;
    let before = truncated_cohomology(dg, lo, bound.saturating_sub(1))?;
    Ok((lo..=hi)
        .map(|k| (k, (now[&k], now[&k] == before[&k])))
        .collect())
}

/// One term `left · d(ρ_j) · right` of a perturbation.
#[derive(Clone, Debug)]
pub struct Padding<F = BigRational> {
    pub left: TruncatedElement<F>,
    pub j: String,
    pub right: TruncatedElement<F>,
}

/// `d'(ρ_i) = c · d(ρ_i) + Σ left · d(ρ_j) · right`.
#[derive(Clone, Debug)]
pub struct GammaTerm<F = BigRational> {
    pub vertex: String,
    pub c: F,
    pub padding: Vec<Padding<F>>,
}

/// Perturbation with the element texts unparsed, as stored in fixtures.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub name: String,
    pub family: String,
    pub index: usize,
    pub dim: usize,
    pub terms: Vec<GammaTermSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaTermSpec {
    pub vertex: String,
    pub c: String,
    #[serde(default)]
    pub padding: Vec<PaddingSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PaddingSpec {
    pub left: String,
    pub j: String,
    pub right: String,
}

impl PerturbationSpec {
    pub fn resolve<F: Field>(&self, dg: &DgPresentation<F>) -> Result<Vec<GammaTerm<F>>> {
        let parse = |s: &str| TruncatedElement::parse(&dg.quiver, s, dg.bound);
        self.terms
            .iter()
            .map(|t| {
                Ok(GammaTerm {
                    vertex: t.vertex.clone(),
                    c: F::parse_q(&t.c)
                        .ok_or_else(|| Error::Syntax(format!("bad scalar `{}`", t.c)))?,
                    padding: t
                        .padding
                        .iter()
                        .map(|p| {
                            Ok(Padding {
                                left: parse(&p.left)?,
                                j: p.j.clone(),
                                right: parse(&p.right)?,
                            })
                        })
                        .collect::<Result<_>>()?,
                })
            })
            .collect()
    }
}

pub fn shipped_perturbations() -> Vec<PerturbationSpec> {
    serde_json::from_str(include_str!("../fixtures/perturbations.json"))
        .expect("shipped fixture parses")
}

fn check_endpoints<F: Field>(
    x: &TruncatedElement<F>,
    src: usize,
    tgt: usize,
    what: &str,
) -> Result<()> {
    if x.terms().keys().any(|w| w.src != src || w.tgt != tgt) || x.degrees().iter().any(|&d| d != 0)
    {
        return Err(Error::IncompatibleEndpoints(what.to_string()));
    }
    Ok(())
}

/// Replaces `d(ρ_i)` by a unit multiple plus padded images of other
/// generators, each padding having a factor inside the arrow ideal.
pub fn perturb_gamma<F: Field>(
    dg: &DgPresentation<F>,
    spec: &[GammaTerm<F>],
) -> Result<DgPresentation<F>> {
    let q = &dg.quiver;
    let mut out = dg.clone();
    for term in spec {
        if term.c.is_zero() {
            return Err(Error::NonUnitScalar(term.vertex.clone()));
        }
        let ri = dg.rho(&term.vertex)?;
        let mut img = dg.diff_of(q.arrow_id(ri))?.scale(&term.c);
        for p in &term.padding {
            let rj = dg.rho(&p.j)?;
            check_endpoints(&p.right, q.src(ri), q.src(rj), "right factor")?;
            check_endpoints(&p.left, q.tgt(rj), q.tgt(ri), "left factor")?;
            if p.left.min_len().unwrap_or(1) == 0 && p.right.min_len().unwrap_or(1) == 0 {
                return Err(Error::IncompatibleEndpoints(format!(
                    "padding of {} by d(ρ{}) has no factor in the arrow ideal",
                    term.vertex, p.j
                )));
            }
            let dj = dg.diff_of(q.arrow_id(rj))?;
            img = img.add(&p.left.mul(&dj)?.mul(&p.right)?)?;
        }
        if img.is_zero() {
            out.diff.remove(&ri);
        } else {
            out.diff.insert(ri, img);
        }
    }
    Ok(out)
}

/// Presentation with `d(ρ)` removed for the arrow starting at `v`.
pub fn drop_relation<F: Field>(dg: &DgPresentation<F>, v: &str) -> Result<DgPresentation<F>> {
    let mut out = dg.clone();
    out.diff.remove(&dg.rho(v)?);
    Ok(out)
}
