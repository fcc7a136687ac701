use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::json;

use super::word::{IndexedQuiver, Word};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::scalar::Field;

/// A finite-dimensional algebra with a basis of normal-form words, graded by
/// `(src, tgt)` and by length.
#[derive(Clone, Debug)]
pub struct FinDimAlgebra<F = BigRational> {
    quiver: Arc<IndexedQuiver>,
    vertices: Vec<usize>,
    basis: Vec<Word>,
    mult: HashMap<(usize, usize), Vec<(usize, F)>>,
    pub stabilized: bool,
    pub l_used: usize,
}

impl<F: Field> FinDimAlgebra<F> {
    pub(crate) fn from_parts(
        quiver: Arc<IndexedQuiver>,
        basis: Vec<Word>,
        mult: HashMap<(usize, usize), Vec<(usize, F)>>,
        stabilized: bool,
        l_used: usize,
    ) -> Self {
        let vertices = (0..quiver.n_vertices())
            .filter(|&v| basis.iter().any(|w| w.is_empty() && w.src == v))
            .collect();
        FinDimAlgebra {
            quiver,
            vertices,
            basis,
            mult,
            stabilized,
            l_used,
        }
    }

    pub fn quiver(&self) -> &Arc<IndexedQuiver> {
        &self.quiver
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// Quiver vertex indices carrying a nonzero idempotent, in quiver order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> Vec<String> {
        self.vertices
            .iter()
            .map(|&v| self.quiver.vertex_id(v).to_string())
            .collect()
    }

    pub fn label(&self, b: usize) -> String {
        self.basis[b].to_text(&self.quiver)
    }

    /// Basis position of `e_v`.
    pub fn idempotent(&self, v: usize) -> Option<usize> {
        self.basis.iter().position(|w| w.is_empty() && w.src == v)
    }

    /// `b_p · b_q` in basis coordinates.
    pub fn product(&self, p: usize, q: usize) -> &[(usize, F)] {
        self.mult.get(&(p, q)).map_or(&[], |v| v.as_slice())
    }

    pub fn mul_vec(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (&p, a) in x {
            for (&q, b) in y {
                for (r, c) in self.product(p, q) {
                    let t = a.clone() * b.clone() * c.clone();
                    crate::linalg::axpy(&mut out, &t, &[(*r, F::one())].into());
                }
            }
        }
        out
    }

    /// Dimensions keyed by `(src id, tgt id)`; zero blocks are omitted.
    pub fn block_dims(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for w in &self.basis {
            let key = (
                self.quiver.vertex_id(w.src).to_string(),
                self.quiver.vertex_id(w.tgt).to_string(),
            );
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab: SparseVec<F> = self.product(a, b).iter().cloned().collect();
                for c in 0..n {
                    let bc: SparseVec<F> = self.product(b, c).iter().cloned().collect();
                    let left = self.mul_vec(&ab, &[(c, F::one())].into());
                    let right = self.mul_vec(&[(a, F::one())].into(), &bc);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Machine-readable dump: basis labels, block dimensions and structure
    /// constants as rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut mult: Vec<_> = self.mult.iter().collect();
        mult.sort_by_key(|(k, _)| **k);
        json!({
            "basis": (0..self.dim()).map(|b| self.label(b)).collect::<Vec<_>>(),
            "blocks": self.block_dims().into_iter()
                .map(|((s, t), d)| json!({"src": s, "tgt": t, "dim": d})).collect::<Vec<_>>(),
            "mult": mult.into_iter().map(|((p, q), v)| json!({
                "left": p, "right": q,
                "value": v.iter().map(|(r, c)| json!([r, c.to_q_string()])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "stabilized": self.stabilized,
            "L_used": self.l_used,
        })
    }
}

/// Entry `(j, i)` is `dim e_j A e_i`, the number of basis paths `i -> j`;
/// rows and columns follow the algebra's vertex order.
pub fn cartan_matrix<F: Field>(a: &FinDimAlgebra<F>) -> Result<Vec<Vec<usize>>> {
    if !a.stabilized {
        return Err(Error::NotStabilizedInput);
    }
    let pos: HashMap<usize, usize> = a
        .vertices
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k))
        .collect();
    let n = a.vertices.len();
    let mut c = vec![vec![0; n]; n];
    for w in &a.basis {
        c[pos[&w.tgt]][pos[&w.src]] += 1;
    }
    Ok(c)
}

fn vertex_set<F: Field>(a: &FinDimAlgebra<F>, e: &BTreeSet<String>) -> Result<BTreeSet<usize>> {
    if e.is_empty() {
        return Err(Error::EmptyIdempotent);
    }
    e.iter().map(|id| a.quiver.vertex_index(id)).collect()
}

/// `eAe` on the union of blocks between vertices of `e`.
pub fn corner_algebra<F: Field>(
    a: &FinDimAlgebra<F>,
    e: &BTreeSet<String>,
) -> Result<FinDimAlgebra<F>> {
    let keep = vertex_set(a, e)?;
    let idx: Vec<usize> = (0..a.dim())
        .filter(|&b| keep.contains(&a.basis[b].src) && keep.contains(&a.basis[b].tgt))
        .collect();
    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let mut mult = HashMap::new();
    for (&p, &np) in &pos {
        for (&q, &nq) in &pos {
            let v = a.product(p, q);
            if !v.is_empty() {
                mult.insert(
                    (np, nq),
                    v.iter().map(|(r, c)| (pos[r], c.clone())).collect(),
                );
            }
        }
    }
    let basis = idx.iter().map(|&b| a.basis[b].clone()).collect();
    Ok(FinDimAlgebra::from_parts(
        a.quiver.clone(),
        basis,
        mult,
        a.stabilized,
        a.l_used,
    ))
}

/// A finite-dimensional left module: a space `e_v M` per algebra vertex and,
/// for every basis element `b: s -> t`, its action `e_s M -> e_t M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module<F = BigRational> {
    pub dims: BTreeMap<usize, usize>,
    pub action: Vec<Matrix<F>>,
}

impl<F: Field> Module<F> {
    pub fn simple(a: &FinDimAlgebra<F>, v: &str) -> Result<Self> {
        let v = a.quiver.vertex_index(v)?;
        let dims = a
            .vertices
            .iter()
            .map(|&u| (u, (u == v) as usize))
            .collect::<BTreeMap<_, _>>();
        let action = a
            .basis
            .iter()
            .map(|w| {
                let (s, t) = (
                    dims.get(&w.src).copied().unwrap_or(0),
                    dims.get(&w.tgt).copied().unwrap_or(0),
                );
                if w.is_empty() {
                    Matrix::identity(s)
                } else {
                    Matrix::zeros(t, s)
                }
            })
            .collect();
        Ok(Module { dims, action })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }
}

/// `M ↦ eM` with the action of `eAe`; the result is a module over
/// [`corner_algebra`]`(a, e)`.
pub fn restrict_module<F: Field>(
    a: &FinDimAlgebra<F>,
    m: &Module<F>,
    e: &BTreeSet<String>,
) -> Result<Module<F>> {
    let keep = vertex_set(a, e)?;
    Ok(Module {
        dims: m
            .dims
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(v, d)| (*v, *d))
            .collect(),
        action: (0..a.dim())
            .filter(|&b| keep.contains(&a.basis[b].src) && keep.contains(&a.basis[b].tgt))
            .map(|b| m.action[b].clone())
            .collect(),
    })
}
