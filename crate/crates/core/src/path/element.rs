use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::word::{IndexedQuiver, Word};
use crate::error::{Error, Result};
use crate::scalar::{is_negative, Field};

/// A finite combination of words with exact coefficients, modulo words
/// longer than `bound`.
#[derive(Clone, Debug)]
pub struct TruncatedElement<F = BigRational> {
    quiver: Arc<IndexedQuiver>,
    terms: BTreeMap<Word, F>,
    bound: usize,
}

impl<F: Field> PartialEq for TruncatedElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
            && same_quiver(&self.quiver, &other.quiver)
            && self.terms == other.terms
    }
}

pub(crate) fn same_quiver(a: &Arc<IndexedQuiver>, b: &Arc<IndexedQuiver>) -> bool {
    Arc::ptr_eq(a, b) || a.quiver == b.quiver
}

impl<F: Field> TruncatedElement<F> {
    pub fn zero(quiver: &Arc<IndexedQuiver>, bound: usize) -> Self {
        TruncatedElement {
            quiver: quiver.clone(),
            terms: BTreeMap::new(),
            bound,
        }
    }

    pub fn from_word(quiver: &Arc<IndexedQuiver>, word: Word, coeff: F, bound: usize) -> Self {
        let mut e = Self::zero(quiver, bound);
        e.add_term(word, coeff);
        e
    }

    pub fn trivial(quiver: &Arc<IndexedQuiver>, v: usize, bound: usize) -> Self {
        Self::from_word(quiver, Word::trivial(v), F::one(), bound)
    }

    pub fn arrow(quiver: &Arc<IndexedQuiver>, a: usize, bound: usize) -> Self {
        Self::from_word(quiver, Word::arrow(quiver, a), F::one(), bound)
    }

    pub fn quiver(&self) -> &Arc<IndexedQuiver> {
        &self.quiver
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Word, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `c·w`, dropping it if `w` is longer than the bound.
    pub fn add_term(&mut self, w: Word, c: F) {
        if w.len() > self.bound || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(self.bound, other.bound));
        }
        if !same_quiver(&self.quiver, &other.quiver) {
            return Err(Error::QuiverMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.quiver, self.bound);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.clone() * c.clone());
        }
        out
    }

    /// `self · other`, meaning `other` is applied first.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.quiver, self.bound);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > self.bound {
                    continue;
                }
                if let Some(w) = u.compose(v) {
                    out.add_term(w, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Same element under a different bound (truncating if smaller).
    pub fn with_bound(&self, bound: usize) -> Self {
        let mut out = Self::zero(&self.quiver, bound);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// The same terms over another quiver whose first arrows and vertices
    /// coincide with this one's.
    pub(crate) fn rehome(&self, quiver: &Arc<IndexedQuiver>) -> Self {
        TruncatedElement {
            quiver: quiver.clone(),
            terms: self.terms.clone(),
            bound: self.bound,
        }
    }

    /// Common `(src, tgt)` of all terms, if there is one.
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        it.all(|w| w.src == first.src && w.tgt == first.tgt)
            .then_some((first.src, first.tgt))
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).min()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Degrees occurring among the terms.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(|w| w.degree(&self.quiver)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Parses the element syntax: terms joined by `+`/`-`, an optional
    /// coefficient prefix `p/q*`, words as arrow ids or labels separated by
    /// spaces and read right to left (`a b` applies `b` first), and `e(v)`
    /// for trivial paths. `0` is the zero element.
    pub fn parse(quiver: &Arc<IndexedQuiver>, text: &str, bound: usize) -> Result<Self> {
        let mut out = Self::zero(quiver, bound);
        let text = text.replace('\u{2212}', "-");
        if text.trim() == "0" {
            return Ok(out);
        }
        for (negative, term) in split_terms(&text)? {
            let (coeff, body) = split_coeff::<F>(term)?;
            let word = parse_word(quiver, body)?;
            let c = if negative { -coeff } else { coeff };
            out.add_term(word, c);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if !mag.is_one() {
                s.push_str(&mag.to_q_string());
                s.push('*');
            }
            s.push_str(&w.to_text(&self.quiver));
        }
        s
    }
}

impl<F: Field> fmt::Display for TruncatedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn split_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let piece = text[start..i].trim();
                if !piece.is_empty() {
                    out.push((negative, piece));
                    negative = false;
                } else if !out.is_empty() || i > 0 && !text[..i].trim().is_empty() {
                    return Err(Error::Syntax(format!("dangling sign in `{text}`")));
                }
                negative ^= ch == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Syntax(format!("unbalanced parentheses in `{text}`")));
    }
    let piece = text[start..].trim();
    if piece.is_empty() {
        return Err(Error::Syntax(format!("empty term in `{text}`")));
    }
    out.push((negative, piece));
    Ok(out)
}

fn split_coeff<F: Field>(term: &str) -> Result<(F, &str)> {
    if let Some((head, rest)) = term.split_once('*') {
        if !head.is_empty() && head.trim().chars().all(|c| c.is_ascii_digit() || c == '/') {
            let c = F::parse_q(head.trim())
                .ok_or_else(|| Error::Syntax(format!("bad coefficient `{head}`")))?;
            return Ok((c, rest.trim()));
        }
    }
    Ok((F::one(), term))
}

fn parse_word(q: &IndexedQuiver, body: &str) -> Result<Word> {
    let mut word: Option<Word> = None;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Syntax("coefficient without a path".into()));
    }
    // Compose right to left so the error names the first offending pair.
    for tok in tokens.iter().rev() {
        let w = if let Some(v) = tok.strip_prefix("e(").and_then(|t| t.strip_suffix(')')) {
            Word::trivial(q.vertex_index(v)?)
        } else {
            Word::arrow(q, q.arrow_index(tok)?)
        };
        word = Some(match word {
            None => w,
            Some(right) => w
                .compose(&right)
                .ok_or_else(|| Error::Syntax(format!("`{tok}` does not compose in `{body}`")))?,
        });
    }
    Ok(word.expect("nonempty"))
}

/// Named relations, each lying in a single `(src, tgt)` block with all words
/// of length at least 2.
#[derive(Clone, Debug)]
pub struct Relation<F = BigRational> {
    pub id: String,
    pub element: TruncatedElement<F>,
}

#[derive(Clone, Debug)]
pub struct RelationSet<F = BigRational> {
    pub relations: Vec<Relation<F>>,
}

impl<F: Field> PartialEq for Relation<F> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.element == other.element
    }
}

impl<F: Field> PartialEq for RelationSet<F> {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl<F: Field> RelationSet<F> {
    pub fn new(relations: Vec<(String, TruncatedElement<F>)>) -> Result<Self> {
        for (id, r) in &relations {
            if r.is_zero() {
                return Err(Error::InvalidRelation(format!("`{id}` is zero")));
            }
            if r.endpoints().is_none() {
                return Err(Error::InvalidRelation(format!(
                    "`{id}` spans several vertex pairs"
                )));
            }
            if r.min_len() < Some(2) {
                return Err(Error::InvalidRelation(format!(
                    "`{id}` has a word shorter than 2"
                )));
            }
        }
        Ok(RelationSet {
            relations: relations
                .into_iter()
                .map(|(id, element)| Relation { id, element })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn elements(&self) -> Vec<TruncatedElement<F>> {
        self.relations.iter().map(|r| r.element.clone()).collect()
    }

    pub fn max_len(&self) -> usize {
        self.relations
            .iter()
            .filter_map(|r| r.element.max_len())
            .max()
            .unwrap_or(0)
    }
}
