//! Independent oracles for the integration tests. Nothing here goes through
//! the crate's linear algebra or quotient code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use meshforge::complexes::Complex;
use meshforge::linalg::Matrix;
use meshforge::quiver::{GradedQuiver, TranslationQuiver};
use meshforge::{Field, Rational};
use num_traits::{One, Zero};

/// Path in written order (`w[0]` applied last) with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub arrows: Vec<usize>,
    pub src: usize,
    pub tgt: usize,
}

pub type Vector = BTreeMap<usize, Rational>;

/// All paths of length at most `bound` avoiding `forbidden` vertices.
pub struct PathSpace {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, usize, usize)>,
    pub paths: Vec<Path>,
    index: HashMap<Path, usize>,
    pub bound: usize,
}

impl PathSpace {
    pub fn new(q: &GradedQuiver, bound: usize, forbidden: &BTreeSet<String>) -> Self {
        let vertices: Vec<String> = q.vertices.iter().map(|v| v.id.clone()).collect();
        let pos = |id: &str| vertices.iter().position(|v| v == id).unwrap();
        let arrows: Vec<(String, usize, usize)> = q
            .arrows
            .iter()
            .filter(|a| a.degree == 0)
            .map(|a| (a.id.clone(), pos(&a.src), pos(&a.tgt)))
            .collect();
        let allowed: Vec<bool> = vertices.iter().map(|v| !forbidden.contains(v)).collect();
        let mut layer: Vec<Path> = (0..vertices.len())
            .filter(|&v| allowed[v])
            .map(|v| Path {
                arrows: vec![],
                src: v,
                tgt: v,
            })
            .collect();
        let mut paths = layer.clone();
        for _ in 0..bound {
            let mut next = Vec::new();
            for p in &layer {
                for (k, (_, s, t)) in arrows.iter().enumerate() {
                    if *s == p.tgt && allowed[*t] {
                        let mut w = vec![k];
                        w.extend(&p.arrows);
                        next.push(Path {
                            arrows: w,
                            src: p.src,
                            tgt: *t,
                        });
                    }
                }
            }
            paths.extend(next.iter().cloned());
            layer = next;
        }
        let index = paths
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        PathSpace {
            vertices,
            arrows,
            paths,
            index,
            bound,
        }
    }

    pub fn arrow(&self, id: &str) -> usize {
        self.arrows.iter().position(|a| a.0 == id).unwrap()
    }

    /// Vector of the word with the given arrow ids in written order.
    pub fn word(&self, ids: &[&str], c: Rational) -> Vector {
        let arrows: Vec<usize> = ids.iter().map(|id| self.arrow(id)).collect();
        let src = self.arrows[*arrows.last().unwrap()].1;
        let tgt = self.arrows[arrows[0]].2;
        let mut v = Vector::new();
        if let Some(&i) = self.index.get(&Path { arrows, src, tgt }) {
            v.insert(i, c);
        }
        v
    }

    fn times_arrow(&self, v: &Vector, a: usize, left: bool) -> Vector {
        let (_, s, t) = self.arrows[a];
        let mut out = Vector::new();
        for (&i, c) in v {
            let p = &self.paths[i];
            let q = if left {
                if p.tgt != s {
                    continue;
                }
                let mut w = vec![a];
                w.extend(&p.arrows);
                Path {
                    arrows: w,
                    src: p.src,
                    tgt: t,
                }
            } else {
                if p.src != t {
                    continue;
                }
                let mut w = p.arrows.clone();
                w.push(a);
                Path {
                    arrows: w,
                    src: s,
                    tgt: p.tgt,
                }
            };
            if let Some(&j) = self.index.get(&q) {
                out.insert(j, c.clone());
            }
        }
        out
    }

    /// Block dimensions of the quotient by the two-sided ideal generated by
    /// `gens`, found by closing the span under arrow multiplication.
    pub fn quotient_dims(&self, gens: &[Vector]) -> BTreeMap<(String, String), usize> {
        let mut basis: Vec<(usize, Vector)> = Vec::new();
        let mut queue: Vec<Vector> = gens.to_vec();
        while let Some(v) = queue.pop() {
            let v = reduce(&basis, v);
            let Some((&p, _)) = v.iter().next() else {
                continue;
            };
            for a in 0..self.arrows.len() {
                queue.push(self.times_arrow(&v, a, true));
                queue.push(self.times_arrow(&v, a, false));
            }
            basis.push((p, v));
        }
        let mut dims = BTreeMap::new();
        for p in &self.paths {
            *dims
                .entry((self.vertices[p.src].clone(), self.vertices[p.tgt].clone()))
                .or_insert(0usize) += 1;
        }
        for (p, _) in &basis {
            let path = &self.paths[*p];
            *dims
                .get_mut(&(
                    self.vertices[path.src].clone(),
                    self.vertices[path.tgt].clone(),
                ))
                .unwrap() -= 1;
        }
        dims.retain(|_, d| *d > 0);
        dims
    }
}

/// Pivot at the smallest index; rows are normalized to a leading 1.
fn reduce(basis: &[(usize, Vector)], mut v: Vector) -> Vector {
    for (p, row) in basis {
        if let Some(c) = v.get(p).cloned() {
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(Rational::zero);
                *e -= c.clone() * x;
            }
            v.retain(|_, x| !x.is_zero());
        }
    }
    if let Some((_, lead)) = v.iter().next() {
        let inv = Rational::one() / lead.clone();
        for x in v.values_mut() {
            *x *= inv.clone();
        }
    }
    v
}

/// Mesh relations read straight off `τ` and `σ`: for each vertex `i` with
/// `τ⁻¹(i)`, the sum over solid arrows `a` out of `i` of `coeff(a)·σ(a) a`.
pub fn mesh_generators(tq: &TranslationQuiver, space: &PathSpace) -> Vec<Vector> {
    let mut out = Vec::new();
    for v in &tq.quiver.vertices {
        if tq.tau_inverse(&v.id).is_none() {
            continue;
        }
        let mut r = Vector::new();
        for a in tq
            .quiver
            .arrows
            .iter()
            .filter(|a| a.src == v.id && a.degree == 0)
        {
            let s = &tq.sigma[&a.id];
            for (k, c) in space.word(&[s, &a.id], tq.coeff(&a.id)) {
                let e = r.entry(k).or_insert_with(Rational::zero);
                *e += c;
            }
        }
        r.retain(|_, c| !c.is_zero());
        if !r.is_empty() {
            out.push(r);
        }
    }
    out
}

pub fn total(d: &BTreeMap<(String, String), usize>) -> usize {
    d.values().sum()
}

/// Mesh quotient of `tq` at `bound`, with the projective vertices killed
/// when `stable` is set.
pub fn mesh_quotient(
    tq: &TranslationQuiver,
    bound: usize,
    stable: bool,
) -> BTreeMap<(String, String), usize> {
    let forbidden = if stable {
        tq.projective_vertices().into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let space = PathSpace::new(&tq.quiver, bound, &forbidden);
    space.quotient_dims(&mesh_generators(tq, &space))
}

/// Transport a crate element into the oracle's path space by arrow ids.
pub fn element_vector(space: &PathSpace, x: &meshforge::Element) -> Vector {
    let q = x.quiver();
    let mut out = Vector::new();
    for (w, c) in x.terms() {
        let ids: Vec<&str> = w.arrows.iter().map(|&a| q.arrow_id(a)).collect();
        for (i, v) in space.word(&ids, c.clone()) {
            let s = out.remove(&i).unwrap_or_else(Rational::zero) + v;
            if !s.is_zero() {
                out.insert(i, s);
            }
        }
    }
    out
}

/// A complex assembled from `k` in degree j (cohomology) and `k -> k` in
/// degrees j, j+1 (acyclic), then scrambled by elementary base changes.
/// Its cohomology is known without any rank computation.
#[derive(Debug, Clone)]
pub struct Known {
    pub cx: Complex<Rational>,
    pub h: BTreeMap<i32, usize>,
}

pub fn split_complex(lo: i32, pieces: &[(i32, bool)], moves: &[(i32, usize, usize, i64)]) -> Known {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut h: BTreeMap<i32, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for &(off, acyclic) in pieces {
        let j = lo + off;
        let a = *dims.entry(j).or_default();
        dims.insert(j, a + 1);
        if acyclic {
            let b = *dims.entry(j + 1).or_default();
            dims.insert(j + 1, b + 1);
            edges.push((j, a, b));
        } else {
            *h.entry(j).or_default() += 1;
        }
    }
    let mut diffs: BTreeMap<i32, Matrix<Rational>> = BTreeMap::new();
    for (&j, &n) in &dims {
        if let Some(&m) = dims.get(&(j + 1)) {
            diffs.insert(j, Matrix::zeros(m, n));
        }
    }
    for &(j, a, b) in &edges {
        diffs.get_mut(&j).unwrap().set(b, a, Rational::from_i64(1));
    }
    // base change x_s -> x_s + c x_t in degree j: d^j gets E^{-1} on the
    // right, d^{j-1} gets E on the left
    for &(j, s, t, c) in moves {
        let n = dims.get(&j).copied().unwrap_or(0);
        if n < 2 || s % n == t % n {
            continue;
        }
        let (s, t, c) = (s % n, t % n, Rational::from_i64(c));
        if let Some(d) = diffs.get_mut(&j) {
            for r in 0..d.rows {
                let v = d.get(r, t).clone() - c.clone() * d.get(r, s).clone();
                d.set(r, t, v);
            }
        }
        if let Some(d) = diffs.get_mut(&(j - 1)) {
            for col in 0..d.cols {
                let v = d.get(s, col).clone() + c.clone() * d.get(t, col).clone();
                d.set(s, col, v);
            }
        }
    }
    Known {
        cx: Complex::from_dims(&dims, diffs).expect("d² = 0"),
        h,
    }
}
