//! Koszul duals through the bar construction.
//!
//! The bar complex `BA` is spanned by composable tensors `[sa_1|…|sa_n]` of
//! radical basis elements, written in composition order: `src(a_k) =
//! tgt(a_{k+1})`. `E(A)` is its graded dual, so `dim H^n(E(A))` is computed
//! as `dim H^{-n}(BA)`, split by the block `(src(a_n), tgt(a_1))`. On that
//! block it is `Ext^n_A(S_i, S_j)` with `i = src(a_n)`, `j = tgt(a_1)`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::path::FinDimAlgebra;
use crate::quiver::{Arrow, GradedQuiver, Vertex};
use crate::scalar::{sign, Field};

/// Radical basis element of an augmented algebra, living in `e_tgt Ā e_src`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarElement {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
    #[serde(default)]
    pub degree: i32,
}

/// `A = K ⊕ Ā` with `K` the product of one field per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedDgAlgebra<F = BigRational> {
    pub vertices: Vec<String>,
    pub basis: Vec<BarElement>,
    /// `b_2` restricted to `Ā ⊗ Ā`; the product `x·y` means `x` after `y`.
    pub mult: HashMap<(usize, usize), Vec<(usize, F)>>,
    /// `b_1` on `Ā`.
    pub diff: Vec<Vec<(usize, F)>>,
}

impl<F: Field> AugmentedDgAlgebra<F> {
    pub fn new(
        vertices: Vec<String>,
        basis: Vec<BarElement>,
        mult: HashMap<(usize, usize), Vec<(usize, F)>>,
        diff: Vec<Vec<(usize, F)>>,
    ) -> Result<Self> {
        let n = basis.len();
        let r = vertices.len();
        if diff.len() != n {
            return Err(Error::Shape(format!(
                "diff has {} rows for {} basis elements",
                diff.len(),
                n
            )));
        }
        for b in &basis {
            if b.src >= r || b.tgt >= r {
                return Err(Error::NotAugmented(format!(
                    "{} has an endpoint outside the vertex set",
                    b.label
                )));
            }
            if b.degree > 0 {
                return Err(Error::Degree(format!(
                    "{} has positive degree {}",
                    b.label, b.degree
                )));
            }
        }
        let in_block =
            |x: usize, s: usize, t: usize| x < n && basis[x].src == s && basis[x].tgt == t;
        for (&(x, y), terms) in &mult {
            if x >= n || y >= n || basis[x].src != basis[y].tgt {
                return Err(Error::NotAugmented(format!(
                    "product ({x}, {y}) is not composable"
                )));
            }
            let deg = basis[x].degree + basis[y].degree;
            if terms
                .iter()
                .any(|(z, _)| !in_block(*z, basis[y].src, basis[x].tgt) || basis[*z].degree != deg)
            {
                return Err(Error::NotAugmented(format!(
                    "product ({x}, {y}) leaves its block"
                )));
            }
        }
        for (x, terms) in diff.iter().enumerate() {
            let b = &basis[x];
            if terms
                .iter()
                .any(|(z, _)| !in_block(*z, b.src, b.tgt) || basis[*z].degree != b.degree + 1)
            {
                return Err(Error::NotAugmented(format!(
                    "diff of {} leaves its block",
                    b.label
                )));
            }
        }
        Ok(AugmentedDgAlgebra {
            vertices,
            basis,
            mult,
            diff,
        })
    }

    /// Degree-0 algebra split as semisimple part plus radical (paths of
    /// length at least one).
    pub fn from_algebra(a: &FinDimAlgebra<F>) -> Result<Self> {
        if !a.stabilized {
            return Err(Error::InfiniteDimensional);
        }
        let q = a.quiver();
        let verts = a.vertices().to_vec();
        let vpos: HashMap<usize, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut rad = Vec::new();
        let mut pos = HashMap::new();
        for (b, w) in a.basis().iter().enumerate() {
            if w.is_empty() {
                continue;
            }
            let (Some(&s), Some(&t)) = (vpos.get(&w.src), vpos.get(&w.tgt)) else {
                return Err(Error::NotAugmented(format!(
                    "{} touches a vertex without idempotent",
                    a.label(b)
                )));
            };
            pos.insert(b, rad.len());
            rad.push((
                b,
                BarElement {
                    label: a.label(b),
                    src: s,
                    tgt: t,
                    degree: w.degree(q),
                },
            ));
        }
        let mut mult = HashMap::new();
        for (x, (bx, _)) in rad.iter().enumerate() {
            for (y, (by, _)) in rad.iter().enumerate() {
                let mut terms = Vec::new();
                for (z, c) in a.product(*bx, *by) {
                    let z = pos
                        .get(z)
                        .ok_or_else(|| Error::NotAugmented("radical not closed".into()))?;
                    terms.push((*z, c.clone()));
                }
                if !terms.is_empty() {
                    mult.insert((x, y), terms);
                }
            }
        }
        let n = rad.len();
        Self::new(
            verts.iter().map(|&v| q.vertex_id(v).to_string()).collect(),
            rad.into_iter().map(|(_, e)| e).collect(),
            mult,
            vec![Vec::new(); n],
        )
    }

    /// `k × … × k` with `r` factors.
    pub fn semisimple(r: usize) -> Self {
        AugmentedDgAlgebra {
            vertices: (1..=r).map(|k| k.to_string()).collect(),
            basis: Vec::new(),
            mult: HashMap::new(),
            diff: Vec::new(),
        }
    }

    /// `k[x]/x²` in degree 0.
    pub fn dual_numbers() -> Self {
        AugmentedDgAlgebra {
            vertices: vec!["1".into()],
            basis: vec![BarElement {
                label: "x".into(),
                src: 0,
                tgt: 0,
                degree: 0,
            }],
            mult: HashMap::new(),
            diff: vec![Vec::new()],
        }
    }

    pub fn radical_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut mult: Vec<_> = self.mult.iter().collect();
        mult.sort_by_key(|(k, _)| **k);
        let terms = |t: &[(usize, F)]| -> Vec<serde_json::Value> {
            t.iter()
                .map(|(z, c)| json!({"basis": z, "coeff": c.to_q_string()}))
                .collect()
        };
        json!({
            "vertices": self.vertices,
            "basis": self.basis,
            "mult": mult.iter().map(|((x, y), t)| json!({"left": x, "right": y, "terms": terms(t)})).collect::<Vec<_>>(),
            "diff": self.diff.iter().map(|t| terms(t)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Term {
            basis: usize,
            coeff: String,
        }
        #[derive(Deserialize)]
        struct Prod {
            left: usize,
            right: usize,
            terms: Vec<Term>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            vertices: Vec<String>,
            #[serde(default)]
            basis: Vec<BarElement>,
            #[serde(default)]
            mult: Vec<Prod>,
            #[serde(default)]
            diff: Vec<Vec<Term>>,
        }
        let doc: Doc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Syntax(e.to_string()))?;
        let conv = |ts: Vec<Term>| -> Result<Vec<(usize, F)>> {
            ts.into_iter()
                .map(|t| {
                    Ok((
                        t.basis,
                        F::parse_q(&t.coeff)
                            .ok_or_else(|| Error::Syntax(format!("bad coefficient {}", t.coeff)))?,
                    ))
                })
                .collect()
        };
        let mut mult = HashMap::new();
        for p in doc.mult {
            mult.insert((p.left, p.right), conv(p.terms)?);
        }
        let mut diff = doc.diff.into_iter().map(conv).collect::<Result<Vec<_>>>()?;
        if diff.is_empty() {
            diff = vec![Vec::new(); doc.basis.len()];
        }
        Self::new(doc.vertices, doc.basis, mult, diff)
    }

    /// Degree of `[sa_1|…|sa_n]`.
    fn tensor_degree(&self, t: &[usize]) -> i32 {
        t.iter().map(|&a| self.basis[a].degree - 1).sum()
    }

    /// The bar differential. Every sign of the construction lives here:
    /// with `ε_i = Σ_{k<i} (|a_k| - 1)`,
    /// `b[…|sa_i|…] = Σ (-1)^{ε_i} […|-s(da_i)|…] + Σ (-1)^{ε_i + |a_i|} […|s(a_i a_{i+1})|…]`.
    pub fn bar_differential(&self, t: &[usize]) -> BTreeMap<Vec<usize>, F> {
        let mut out: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        let mut push = |key: Vec<usize>, c: F| {
            let e = out.entry(key).or_insert_with(F::zero);
            *e = e.clone() + c;
        };
        let mut eps = 0i32;
        for i in 0..t.len() {
            let a = t[i];
            for (z, c) in &self.diff[a] {
                let mut key = t.to_vec();
                key[i] = *z;
                push(key, -(sign::<F>(eps % 2 != 0) * c.clone()));
            }
            if i + 1 < t.len() {
                if let Some(terms) = self.mult.get(&(a, t[i + 1])) {
                    let s = sign::<F>((eps + self.basis[a].degree) % 2 != 0);
                    for (z, c) in terms {
                        let mut key = Vec::with_capacity(t.len() - 1);
                        key.extend_from_slice(&t[..i]);
                        key.push(*z);
                        key.extend_from_slice(&t[i + 2..]);
                        push(key, s.clone() * c.clone());
                    }
                }
            }
            eps += self.basis[a].degree - 1;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// All composable tensors of length `1..=max_len`, grouped by length.
    fn tensors(&self, max_len: usize) -> Vec<Vec<Vec<usize>>> {
        let mut by_tgt: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.basis.iter().enumerate() {
            by_tgt[b.tgt].push(a);
        }
        let mut layers: Vec<Vec<Vec<usize>>> = vec![vec![]];
        if max_len == 0 {
            return layers;
        }
        layers.push((0..self.basis.len()).map(|a| vec![a]).collect());
        for _ in 2..=max_len {
            let mut next = Vec::new();
            for t in layers.last().expect("nonempty") {
                // Append on the right: a_{n+1} must end where a_n starts.
                let s = self.basis[*t.last().expect("nonempty")].src;
                for &a in &by_tgt[s] {
                    let mut u = t.clone();
                    u.push(a);
                    next.push(u);
                }
            }
            layers.push(next);
        }
        layers
    }

    /// `b² = 0` on every tensor of length at most `w`.
    pub fn check_bar_d_squared(&self, w: usize) -> bool {
        self.tensors(w).iter().flatten().all(|t| {
            let mut total: BTreeMap<Vec<usize>, F> = BTreeMap::new();
            for (u, c) in self.bar_differential(t) {
                for (v, c2) in self.bar_differential(&u) {
                    let e = total.entry(v).or_insert_with(F::zero);
                    *e = e.clone() + c.clone() * c2;
                }
            }
            total.values().all(|c| c.is_zero())
        })
    }

    fn endpoints(&self, t: &[usize]) -> (usize, usize) {
        (
            self.basis[*t.last().expect("nonempty")].src,
            self.basis[t[0]].tgt,
        )
    }

    /// `dim H^p` of the length-truncated bar complex for `p` in `[lo, hi]`,
    /// keyed by `(p, i, j)` with `i = src(a_n)`, `j = tgt(a_1)`.
    fn bar_cohomology(
        &self,
        lo: i32,
        hi: i32,
        max_len: usize,
    ) -> BTreeMap<(i32, usize, usize), usize> {
        let mut cells: HashMap<(i32, usize, usize), Vec<Vec<usize>>> = HashMap::new();
        for t in self.tensors(max_len).into_iter().flatten() {
            let p = self.tensor_degree(&t);
            if t.is_empty() || p < lo - 1 || p > hi + 1 {
                continue;
            }
            let (s, e) = self.endpoints(&t);
            cells.entry((p, s, e)).or_default().push(t);
        }
        let index: HashMap<&Vec<usize>, usize> = cells
            .values()
            .flat_map(|c| c.iter().enumerate().map(|(k, t)| (t, k)))
            .collect();
        // rank of b leaving degree p on each block
        let mut rank_out: HashMap<(i32, usize, usize), usize> = HashMap::new();
        for (&(p, s, e), ts) in &cells {
            if p > hi {
                continue;
            }
            let mut ech = Echelon::new();
            for t in ts {
                let img: SparseVec<F> = self
                    .bar_differential(t)
                    .into_iter()
                    .map(|(u, c)| {
                        (
                            *index.get(&u).expect("image stays in the enumerated range"),
                            c,
                        )
                    })
                    .collect();
                ech.insert(img);
            }
            rank_out.insert((p, s, e), ech.rank());
        }
        let mut out = BTreeMap::new();
        let r = self.vertices.len();
        for p in lo..=hi {
            for s in 0..r {
                for e in 0..r {
                    let mut dim = cells.get(&(p, s, e)).map_or(0, Vec::len);
                    if p == 0 && s == e {
                        dim += 1;
                    }
                    let d = dim
                        - rank_out.get(&(p, s, e)).copied().unwrap_or(0)
                        - rank_out.get(&(p - 1, s, e)).copied().unwrap_or(0);
                    out.insert((p, s, e), d);
                }
            }
        }
        out
    }
}

/// Generator of `E(A)` dual to `s(a)`; it has degree `1 - |a|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulGenerator {
    pub label: String,
    pub src: String,
    pub tgt: String,
    pub degree: i32,
}

/// `E(A) = T_K(D(Ā[1]))` truncated at tensor length `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulPresentation<F = BigRational> {
    pub algebra: AugmentedDgAlgebra<F>,
    pub generators: Vec<KoszulGenerator>,
    /// `d(ξ_c)` as words in the generators, linear and quadratic parts.
    pub diff: Vec<Vec<(Vec<usize>, F)>>,
    pub w: usize,
}

pub fn koszul_dual<F: Field>(a: &AugmentedDgAlgebra<F>, w: usize) -> Result<KoszulPresentation<F>> {
    if w < 2 {
        return Err(Error::BoundTooSmall { needed: 2, got: w });
    }
    let n = a.basis.len();
    let generators = a
        .basis
        .iter()
        .map(|b| KoszulGenerator {
            label: format!("D({})", b.label),
            src: a.vertices[b.src].clone(),
            tgt: a.vertices[b.tgt].clone(),
            degree: 1 - b.degree,
        })
        .collect();
    // d(f) = f ∘ b on tensors of length one and two.
    let mut diff: Vec<Vec<(Vec<usize>, F)>> = vec![Vec::new(); n];
    for x in 0..n {
        for (u, c) in a.bar_differential(&[x]) {
            diff[u[0]].push((vec![x], c));
        }
    }
    let mut pairs: Vec<_> = a.mult.keys().copied().collect();
    pairs.sort();
    for (x, y) in pairs {
        for (u, c) in a.bar_differential(&[x, y]) {
            if u.len() == 1 {
                diff[u[0]].push((vec![x, y], c));
            }
        }
    }
    Ok(KoszulPresentation {
        algebra: a.clone(),
        generators,
        diff,
        w,
    })
}

/// One degree of `H^*(E(A))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulDegree {
    pub dim: usize,
    pub stabilized: bool,
    /// `(i, j) ↦ dim`, matching `Ext^n(S_i, S_j)`; zero blocks omitted.
    pub blocks: BTreeMap<(String, String), usize>,
}

impl<F: Field> KoszulPresentation<F> {
    pub fn check_d_squared(&self) -> bool {
        self.algebra.check_bar_d_squared(self.w)
    }

    /// Graded quiver of the generators on the vertices of `K`.
    pub fn generator_quiver(&self) -> Result<GradedQuiver> {
        let arrows = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| Arrow::new(&format!("x{k}"), &g.label, &g.src, &g.tgt, g.degree))
            .collect();
        GradedQuiver::new(
            self.algebra.vertices.iter().map(Vertex::new).collect(),
            arrows,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "generators": self.generators,
            "W": self.w,
            "diff": self.diff.iter().map(|terms| terms.iter().map(|(u, c)| json!({
                "word": u.iter().map(|&x| self.generators[x].label.clone()).collect::<Vec<_>>(),
                "coeff": c.to_q_string(),
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// `H^n(E(A))` for `n` in `[lo, hi]`, with `w` bounding tensor length. A
/// degree is stabilized when truncating at `w - 1` gives the same blocks.
pub fn koszul_cohomology<F: Field>(
    e: &KoszulPresentation<F>,
    lo: i32,
    hi: i32,
    w: usize,
) -> Result<BTreeMap<i32, KoszulDegree>> {
    if lo < 0 || hi < lo || hi as i64 > w as i64 - 1 {
        return Err(Error::InvalidWindow(lo, hi));
    }
    let a = &e.algebra;
    // Degree -n only involves tensors of length at most n + 1.
    let need = hi as usize + 1;
    let at = |len: usize| a.bar_cohomology(-hi, -lo, len.min(need));
    let cur = at(w);
    let prev = if w > need { cur.clone() } else { at(w - 1) };
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let mut blocks = BTreeMap::new();
        let mut dim = 0;
        let mut stabilized = true;
        for (&(p, s, t), &d) in cur.range((-n, 0, 0)..=(-n, usize::MAX, usize::MAX)) {
            stabilized &= prev.get(&(p, s, t)) == Some(&d);
            if d > 0 {
                blocks.insert((a.vertices[s].clone(), a.vertices[t].clone()), d);
                dim += d;
            }
        }
        out.insert(
            n,
            KoszulDegree {
                dim,
                stabilized,
                blocks,
            },
        );
    }
    Ok(out)
}

/// Gabriel quiver read off `H^1(E(A))`: one degree-1 arrow `i -> j` per
/// dimension of `Ext^1(S_i, S_j)`.
pub fn recovered_quiver<F: Field>(e: &KoszulPresentation<F>) -> Result<GradedQuiver> {
    let h = koszul_cohomology(e, 1, 1, e.w.max(2))?;
    let mut arrows = Vec::new();
    for ((i, j), &m) in &h[&1].blocks {
        for k in 0..m {
            let id = format!("x{}", arrows.len());
            arrows.push(Arrow::new(&id, &format!("ξ({i},{j},{k})"), i, j, 1));
        }
    }
    GradedQuiver::new(e.algebra.vertices.iter().map(Vertex::new).collect(), arrows)
}
