//! Stable translation quivers of the simple singularities, one per parity of
//! the Krull dimension.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::types::{Arrow, GradedQuiver, TranslationQuiver, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            other => Err(Error::InvalidDynkinIndex {
                family: other.to_string(),
                index: 0,
            }),
        }
    }
}

pub fn is_dynkin(family: Family, index: usize) -> bool {
    match family {
        Family::A => index >= 1,
        Family::D => index >= 4,
        Family::E => (6..=8).contains(&index),
    }
}

/// All Dynkin types with `A_n` for `n <= max_a` and `D_n` for `n <= max_d`.
pub fn dynkin_types(max_a: usize, max_d: usize) -> Vec<(Family, usize)> {
    let mut out: Vec<_> = (1..=max_a).map(|n| (Family::A, n)).collect();
    out.extend((4..=max_d).map(|n| (Family::D, n)));
    out.extend((6..=8).map(|n| (Family::E, n)));
    out
}

#[derive(Default)]
struct Builder {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    tau: BTreeMap<String, String>,
    sigma: BTreeMap<String, String>,
}

fn greek(id: &str) -> String {
    match id.strip_prefix('a') {
        Some(rest) => format!("α{rest}"),
        None if id == "g" => "γ".to_string(),
        None => id.to_string(),
    }
}

impl Builder {
    fn vertices(&mut self, ids: impl IntoIterator<Item = usize>) {
        self.vertices
            .extend(ids.into_iter().map(|i| Vertex::new(i.to_string())));
    }

    fn arrow(&mut self, id: &str, src: usize, tgt: usize) {
        self.arrows.push(Arrow::new(
            id,
            &greek(id),
            &src.to_string(),
            &tgt.to_string(),
            0,
        ));
    }

    /// Arrows `a{k}: i -> j` and `a{k}*: j -> i`, paired with each other.
    fn edge(&mut self, k: usize, i: usize, j: usize) {
        let (a, b) = (format!("a{k}"), format!("a{k}*"));
        self.arrow(&a, i, j);
        self.arrow(&b, j, i);
        self.sigma.insert(a.clone(), b.clone());
        self.sigma.insert(b, a);
    }

    fn tau_identity(&mut self) {
        for v in &self.vertices {
            self.tau.insert(v.id.clone(), v.id.clone());
        }
    }

    fn tau_swap(&mut self, i: usize, j: usize) {
        self.tau.insert(i.to_string(), j.to_string());
        self.tau.insert(j.to_string(), i.to_string());
    }

    /// Pairs each arrow `i -> m` with the unique arrow `m -> tau^{-1}(i)`.
    /// Only used for quivers without multiple arrows, where the pairing is
    /// forced.
    fn pair_forced(&mut self) {
        let inv: BTreeMap<&str, &str> = self
            .tau
            .iter()
            .map(|(k, v)| (v.as_str(), k.as_str()))
            .collect();
        for a in &self.arrows {
            let Some(t) = inv.get(a.src.as_str()) else {
                continue;
            };
            let cands: Vec<&Arrow> = self
                .arrows
                .iter()
                .filter(|b| b.src == a.tgt && b.tgt == *t)
                .collect();
            assert_eq!(cands.len(), 1, "mesh partner of {} is not unique", a.id);
            self.sigma.insert(a.id.clone(), cands[0].id.clone());
        }
    }

    fn finish(self) -> TranslationQuiver {
        TranslationQuiver {
            quiver: GradedQuiver::new(self.vertices, self.arrows).expect("builder ids are unique"),
            tau: self.tau,
            sigma: self.sigma,
            mesh_coeff: BTreeMap::new(),
        }
    }
}

/// Stable translation quiver of type `(family, index)` in Krull dimension
/// `krull_dim`. Only the parity of the dimension matters.
pub fn ade_translation_quiver(
    family: Family,
    index: usize,
    krull_dim: usize,
) -> Result<TranslationQuiver> {
    if !is_dynkin(family, index) {
        return Err(Error::InvalidDynkinIndex {
            family: family.to_string(),
            index,
        });
    }
    let mut b = Builder::default();
    if krull_dim.is_multiple_of(2) {
        b.vertices(1..=index);
        match family {
            Family::A => (1..index).for_each(|k| b.edge(k, k, k + 1)),
            Family::D => {
                b.edge(1, 1, 3);
                b.edge(2, 2, 3);
                (3..index).for_each(|k| b.edge(k, k, k + 1));
            }
            Family::E => {
                b.edge(1, 1, 4);
                (2..index).for_each(|k| b.edge(k, k, k + 1));
            }
        }
        b.tau_identity();
        return Ok(b.finish());
    }
    match (family, index) {
        (Family::A, 1) => {
            b.vertices(1..=2);
            b.tau_swap(1, 2);
        }
        (Family::A, n) if n % 2 == 0 => {
            let m = n / 2;
            b.vertices(1..=m);
            (1..m).for_each(|k| b.edge(k, k, k + 1));
            b.arrow("g", m, m);
            b.sigma.insert("g".into(), "g".into());
            b.tau_identity();
        }
        (Family::A, n) => {
            let m = n.div_ceil(2);
            b.vertices(1..=m + 1);
            b.arrow("a1", 1, 3);
            b.arrow("a1*", 3, 1);
            b.arrow("a2", 2, 3);
            b.arrow("a2*", 3, 2);
            for (x, y) in [("a1", "a2*"), ("a2", "a1*"), ("a1*", "a1"), ("a2*", "a2")] {
                b.sigma.insert(x.into(), y.into());
            }
            (3..=m).for_each(|j| b.edge(j, j, j + 1));
            b.tau_identity();
            b.tau_swap(1, 2);
        }
        (Family::D, n) if n % 2 == 1 => {
            let m = (n - 1) / 2;
            b.vertices(0..=4 * m - 2);
            chain(&mut b, 4 * m - 6);
            let (e, t, x) = (4 * m - 2, 4 * m - 4, 4 * m - 3);
            b.arrow(&format!("a{t}"), e, t);
            b.arrow(&format!("a{t}*"), t, e);
            b.arrow(&format!("a{x}*"), e, x);
            b.arrow(&format!("a{x}"), x, e);
            (0..=t).step_by(2).for_each(|k| b.tau_swap(k, k + 1));
            b.tau.insert(e.to_string(), e.to_string());
            b.pair_forced();
        }
        (Family::D, n) => {
            let m = n / 2;
            b.vertices(0..4 * m);
            if m >= 3 {
                chain(&mut b, 4 * m - 8);
            }
            let end = [
                (format!("a{}*", 4 * m - 4), 4 * m - 5, 4 * m - 4),
                (format!("a{}*", 4 * m - 1), 4 * m - 6, 4 * m - 1),
                (format!("a{}", 4 * m - 4), 4 * m - 4, 4 * m - 6),
                (format!("a{}", 4 * m - 6), 4 * m - 6, 4 * m - 3),
                (format!("a{}", 4 * m - 5), 4 * m - 5, 4 * m - 2),
                (format!("a{}", 4 * m - 1), 4 * m - 1, 4 * m - 5),
                (format!("a{}", 4 * m - 2), 4 * m - 2, 4 * m - 6),
                (format!("a{}", 4 * m - 3), 4 * m - 3, 4 * m - 5),
            ];
            for (id, s, t) in end {
                b.arrow(&id, s, t);
            }
            (0..4 * m).step_by(2).for_each(|k| b.tau_swap(k, k + 1));
            b.pair_forced();
        }
        (Family::E, 6) => {
            b.vertices(1..=6);
            for (id, s, t) in [
                ("a1*", 3, 1),
                ("a2*", 4, 2),
                ("a3", 3, 5),
                ("a3*", 5, 3),
                ("a4", 4, 5),
                ("a4*", 5, 4),
                ("a2", 2, 3),
                ("a1", 1, 4),
                ("a5", 5, 6),
                ("a5*", 6, 5),
            ] {
                b.arrow(id, s, t);
            }
            b.tau_swap(1, 2);
            b.tau_swap(3, 4);
            b.tau.insert("5".into(), "5".into());
            b.tau.insert("6".into(), "6".into());
            b.pair_forced();
        }
        (Family::E, n) => {
            // Two interleaved rows of width `rows`, plus a pendant tau-pair
            // attached to the middle.
            let (top, extra) = if n == 7 { (12, 13) } else { (14, 15) };
            b.vertices(1..=top + 2);
            for k in 1..=top - 2 {
                b.arrow(&format!("a{k}*"), k + 2, k);
                let t = if k % 2 == 1 { k + 3 } else { k + 1 };
                b.arrow(&format!("a{k}"), k, t);
            }
            let (p, q) = if n == 7 { (6, 5) } else { (10, 9) };
            let (x, y) = (extra, extra + 1);
            b.arrow(&format!("a{x}"), x, p);
            b.arrow(&format!("a{y}*"), p, y);
            b.arrow(&format!("a{y}"), y, q);
            b.arrow(&format!("a{x}*"), q, x);
            (1..=top + 1).step_by(2).for_each(|k| b.tau_swap(k, k + 1));
            b.pair_forced();
        }
    }
    Ok(b.finish())
}

/// Interleaved top/bottom chains of the odd D quivers, for indices up to
/// `last` on the top row.
fn chain(b: &mut Builder, last: usize) {
    for k2 in (0..=last).step_by(2) {
        b.arrow(&format!("a{k2}"), k2, k2 + 2);
        b.arrow(&format!("a{}", k2 + 1), k2 + 1, k2 + 3);
        b.arrow(&format!("a{}*", k2 + 1), k2 + 2, k2 + 1);
        b.arrow(&format!("a{k2}*"), k2 + 3, k2);
    }
}
