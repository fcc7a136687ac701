//! Canonical labeling by colour refinement with individualization.
//!
//! Vertices and arrows are coloured jointly. Colours are refined along
//! source/target incidence, tau and sigma until stable; remaining ties are
//! broken by trying every member of the first non-singleton cell and keeping
//! the lexicographically smallest relabelled quiver. This is exact (not a
//! heuristic) for any input, at a cost exponential in the symmetry.

use std::collections::{BTreeMap, HashMap};

use super::types::{Arrow, GradedQuiver, TranslationQuiver, Vertex};
use crate::scalar::big_to_string;

struct Shape {
    n: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    tau: Vec<Option<usize>>,
    tau_inv: Vec<Option<usize>>,
    sigma: Vec<Option<usize>>,
    sigma_inv: Vec<Option<usize>>,
    base: Vec<Vec<String>>,
}

impl Shape {
    fn new(tq: &TranslationQuiver) -> Self {
        let q = &tq.quiver;
        let n = q.vertices.len();
        let vpos: HashMap<&str, usize> = q
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let apos: HashMap<&str, usize> = q
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), i))
            .collect();
        let mut tau = vec![None; n];
        let mut tau_inv = vec![None; n];
        for (k, v) in &tq.tau {
            if let (Some(&a), Some(&b)) = (vpos.get(k.as_str()), vpos.get(v.as_str())) {
                tau[a] = Some(b);
                tau_inv[b] = Some(a);
            }
        }
        let m = q.arrows.len();
        let mut sigma = vec![None; m];
        let mut sigma_inv = vec![None; m];
        for (k, v) in &tq.sigma {
            if let (Some(&a), Some(&b)) = (apos.get(k.as_str()), apos.get(v.as_str())) {
                sigma[a] = Some(b);
                sigma_inv[b] = Some(a);
            }
        }
        let mut base: Vec<Vec<String>> = q
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                vec![
                    "v".into(),
                    (v.projective as u8).to_string(),
                    format!("{}", tau[i].map_or(2, |t| (t == i) as u8)),
                ]
            })
            .collect();
        base.extend(q.arrows.iter().map(|a| {
            vec![
                "a".into(),
                a.degree.to_string(),
                big_to_string(&tq.coeff(&a.id)),
                ((a.src == a.tgt) as u8).to_string(),
            ]
        }));
        Shape {
            n,
            src: q.arrows.iter().map(|a| vpos[a.src.as_str()]).collect(),
            tgt: q.arrows.iter().map(|a| vpos[a.tgt.as_str()]).collect(),
            tau,
            tau_inv,
            sigma,
            sigma_inv,
            base,
        }
    }

    fn len(&self) -> usize {
        self.base.len()
    }

    fn initial(&self) -> Vec<usize> {
        rank_by(&self.base)
    }

    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        let opt = |x: Option<usize>, c: &[usize]| x.map_or(usize::MAX, |i| c[i]);
        loop {
            let classes = count_classes(&colour);
            let mut sig: Vec<Vec<usize>> = Vec::with_capacity(self.len());
            for v in 0..self.n {
                let mut outs: Vec<usize> = Vec::new();
                let mut ins: Vec<usize> = Vec::new();
                for (a, (&s, &t)) in self.src.iter().zip(&self.tgt).enumerate() {
                    if s == v {
                        outs.push(colour[self.n + a]);
                    }
                    if t == v {
                        ins.push(colour[self.n + a]);
                    }
                }
                outs.sort_unstable();
                ins.sort_unstable();
                let mut s = vec![
                    colour[v],
                    opt(self.tau[v], &colour),
                    opt(self.tau_inv[v], &colour),
                ];
                s.push(outs.len());
                s.extend(outs);
                s.push(ins.len());
                s.extend(ins);
                sig.push(s);
            }
            for a in 0..self.src.len() {
                sig.push(vec![
                    colour[self.n + a],
                    colour[self.src[a]],
                    colour[self.tgt[a]],
                    self.sigma[a].map_or(usize::MAX, |b| colour[self.n + b]),
                    self.sigma_inv[a].map_or(usize::MAX, |b| colour[self.n + b]),
                ]);
            }
            let next = rank_by(&sig);
            if count_classes(&next) == classes {
                return next;
            }
            colour = next;
        }
    }

    /// Relabelled quiver for a discrete colouring, together with a sort key.
    fn relabel(&self, tq: &TranslationQuiver, colour: &[usize]) -> TranslationQuiver {
        let q = &tq.quiver;
        let mut vorder: Vec<usize> = (0..self.n).collect();
        vorder.sort_by_key(|&v| colour[v]);
        let mut vname = vec![String::new(); self.n];
        for (k, &v) in vorder.iter().enumerate() {
            vname[v] = k.to_string();
        }
        let m = self.src.len();
        let mut aorder: Vec<usize> = (0..m).collect();
        aorder.sort_by_key(|&a| colour[self.n + a]);
        let mut aname = vec![String::new(); m];
        for (k, &a) in aorder.iter().enumerate() {
            aname[a] = format!("x{k}");
        }
        let vertices = vorder
            .iter()
            .map(|&v| Vertex {
                id: vname[v].clone(),
                projective: q.vertices[v].projective,
            })
            .collect();
        let arrows = aorder
            .iter()
            .map(|&a| {
                let arr = &q.arrows[a];
                Arrow {
                    id: aname[a].clone(),
                    label: aname[a].clone(),
                    src: vname[self.src[a]].clone(),
                    tgt: vname[self.tgt[a]].clone(),
                    degree: arr.degree,
                }
            })
            .collect();
        let tau = (0..self.n)
            .filter_map(|v| self.tau[v].map(|t| (vname[v].clone(), vname[t].clone())))
            .collect();
        let sigma = (0..m)
            .filter_map(|a| self.sigma[a].map(|b| (aname[a].clone(), aname[b].clone())))
            .collect();
        let mesh_coeff = q
            .arrows
            .iter()
            .enumerate()
            .filter_map(|(a, arr)| {
                tq.mesh_coeff
                    .get(&arr.id)
                    .map(|c| (aname[a].clone(), c.clone()))
            })
            .collect();
        TranslationQuiver {
            quiver: GradedQuiver { vertices, arrows },
            tau,
            sigma,
            mesh_coeff,
        }
    }

    fn search(
        &self,
        tq: &TranslationQuiver,
        colour: Vec<usize>,
        best: &mut Option<(Vec<String>, TranslationQuiver)>,
    ) {
        let colour = self.refine(colour);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, &c) in colour.iter().enumerate() {
            cells.entry(c).or_default().push(x);
        }
        let Some(cell) = cells.values().find(|c| c.len() > 1) else {
            let cand = self.relabel(tq, &colour);
            let key = encode(&cand);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                *best = Some((key, cand));
            }
            return;
        };
        for &x in cell {
            // Doubling leaves room for a fresh colour just below x's cell.
            let mut c: Vec<usize> = colour.iter().map(|&c| 2 * c + 1).collect();
            c[x] -= 1;
            self.search(tq, c, best);
        }
    }
}

fn rank_by<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut distinct: Vec<&T> = sig.iter().collect();
    distinct.sort();
    distinct.dedup();
    sig.iter()
        .map(|s| distinct.binary_search(&s).unwrap())
        .collect()
}

fn count_classes(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn encode(tq: &TranslationQuiver) -> Vec<String> {
    let mut out: Vec<String> = tq
        .quiver
        .vertices
        .iter()
        .map(|v| {
            format!(
                "v{}:{}:{}",
                v.id,
                v.projective as u8,
                tq.tau.get(&v.id).map_or("-", |s| s)
            )
        })
        .collect();
    out.extend(tq.quiver.arrows.iter().map(|a| {
        format!(
            "a{}:{}>{}:{}:{}:{}",
            a.id,
            a.src,
            a.tgt,
            a.degree,
            tq.sigma.get(&a.id).map_or("-", |s| s),
            tq.mesh_coeff
                .get(&a.id)
                .map_or(String::new(), big_to_string)
        )
    }));
    out
}

/// Canonical relabelling: vertices become `0, 1, ...` and arrows `x0, x1, ...`
/// (labels equal ids). Isomorphic inputs, meaning isomorphisms of quivers
/// commuting with tau and sigma and preserving projectivity, degrees and
/// mesh coefficients, give equal outputs.
pub fn canonical_form(tq: &TranslationQuiver) -> TranslationQuiver {
    let shape = Shape::new(tq);
    let mut best = None;
    shape.search(tq, shape.initial(), &mut best);
    best.map(|(_, q)| q).unwrap_or_default()
}
