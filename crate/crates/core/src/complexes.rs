//! Bounded complexes of finite-dimensional spaces and their truncations.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Field;

/// Cochain complex with `d^j: C^j -> C^{j+1}` stored as a
/// `dim C^{j+1} × dim C^j` matrix. Missing differentials are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<F = BigRational> {
    components: BTreeMap<i32, Vec<String>>,
    differentials: BTreeMap<i32, Matrix<F>>,
    /// Reporting tag for windows cut out of periodic complexes.
    pub periodicity: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdSide {
    Leq,
    Gt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrutalSide {
    Leq,
    Geq,
}

impl<F: Field> Complex<F> {
    pub fn new(
        components: BTreeMap<i32, Vec<String>>,
        differentials: BTreeMap<i32, Matrix<F>>,
    ) -> Result<Self> {
        let c = Complex {
            components,
            differentials,
            periodicity: None,
        };
        for (&j, d) in &c.differentials {
            if d.cols != c.dim(j) || d.rows != c.dim(j + 1) {
                return Err(Error::Shape(format!(
                    "d^{j} is {}x{}, expected {}x{}",
                    d.rows,
                    d.cols,
                    c.dim(j + 1),
                    c.dim(j)
                )));
            }
        }
        for (&j, d) in &c.differentials {
            if let Some(next) = c.differentials.get(&(j + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(Error::NotAComplex(j + 1));
                }
            }
        }
        Ok(c)
    }

    /// Components named `x{j}_{k}` from dimensions alone.
    pub fn from_dims(
        dims: &BTreeMap<i32, usize>,
        differentials: BTreeMap<i32, Matrix<F>>,
    ) -> Result<Self> {
        let components = dims
            .iter()
            .map(|(&j, &n)| (j, (0..n).map(|k| format!("x{j}_{k}")).collect()))
            .collect();
        Self::new(components, differentials)
    }

    pub fn dim(&self, j: i32) -> usize {
        self.components.get(&j).map_or(0, Vec::len)
    }

    pub fn labels(&self, j: i32) -> &[String] {
        self.components.get(&j).map_or(&[], |v| v.as_slice())
    }

    pub fn d(&self, j: i32) -> Matrix<F> {
        self.differentials
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(j + 1), self.dim(j)))
    }

    /// Smallest and largest degree with a nonzero component.
    pub fn support(&self) -> Option<(i32, i32)> {
        let mut it = self
            .components
            .iter()
            .filter(|(_, b)| !b.is_empty())
            .map(|(j, _)| *j);
        let lo = it.next()?;
        Some((lo, it.next_back().unwrap_or(lo)))
    }

    /// `dim H^j = dim ker d^j - rank d^{j-1}` over the support.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let Some((lo, hi)) = self.support() else {
            return BTreeMap::new();
        };
        let ranks: BTreeMap<i32, usize> = (lo - 1..=hi).map(|j| (j, self.d(j).rank())).collect();
        (lo..=hi)
            .map(|j| (j, self.dim(j) - ranks[&j] - ranks[&(j - 1)]))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "components": self.components.iter().map(|(j, b)| (j.to_string(), b.len())).collect::<BTreeMap<_, _>>(),
            "differentials": self.differentials.iter()
                .map(|(j, d)| (j.to_string(), d.to_strings())).collect::<BTreeMap<_, _>>(),
        })
    }
}

/// Standard truncations: `σ^{≤i}` keeps `ker d^i` in degree `i`, `σ^{>i}`
/// keeps `M^i / ker d^i` (realized as the image of `d^i`).
pub fn std_truncate<F: Field>(m: &Complex<F>, i: i32, side: StdSide) -> Complex<F> {
    let mut components = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    let di = m.d(i);
    match side {
        StdSide::Leq => {
            let (_, free) = di.kernel();
            for (&j, b) in m.components.range(..i) {
                components.insert(j, b.clone());
            }
            let labels = m.labels(i);
            components.insert(
                i,
                free.iter()
                    .map(|&f| format!("ker({})", labels[f]))
                    .collect(),
            );
            for (&j, d) in m.differentials.range(..i - 1) {
                differentials.insert(j, d.clone());
            }
            // Kernel coordinates are the free coordinates.
            differentials.insert(i - 1, m.d(i - 1).select_rows(&free));
        }
        StdSide::Gt => {
            let cols = di.independent_columns();
            let labels = m.labels(i);
            components.insert(
                i,
                cols.iter().map(|&c| format!("[{}]", labels[c])).collect(),
            );
            for (&j, b) in m.components.range(i + 1..) {
                components.insert(j, b.clone());
            }
            differentials.insert(i, di.select_cols(&cols));
            for (&j, d) in m.differentials.range(i + 1..) {
                differentials.insert(j, d.clone());
            }
        }
    }
    Complex {
        components,
        differentials,
        periodicity: m.periodicity,
    }
}

/// Brutal truncations: components outside the window are replaced by zero.
pub fn brutal_truncate<F: Field>(m: &Complex<F>, i: i32, side: BrutalSide) -> Complex<F> {
    let keep = |j: i32| match side {
        BrutalSide::Leq => j <= i,
        BrutalSide::Geq => j >= i,
    };
    Complex {
        components: m
            .components
            .iter()
            .filter(|(j, _)| keep(**j))
            .map(|(j, b)| (*j, b.clone()))
            .collect(),
        differentials: m
            .differentials
            .iter()
            .filter(|(j, _)| keep(**j) && keep(**j + 1))
            .map(|(j, d)| (*j, d.clone()))
            .collect(),
        periodicity: m.periodicity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn two_term_identity() -> Complex<Q> {
        Complex::from_dims(&[(0, 1), (1, 1)].into(), [(0, Matrix::identity(1))].into()).unwrap()
    }

    #[test]
    fn exact_identity_complex() {
        assert_eq!(
            two_term_identity().cohomology_dims(),
            [(0, 0), (1, 0)].into()
        );
    }

    #[test]
    fn zero_differentials() {
        let c = Complex::<Q>::from_dims(&[(-1, 2), (0, 3)].into(), BTreeMap::new()).unwrap();
        assert_eq!(c.cohomology_dims(), [(-1, 2), (0, 3)].into());
    }

    #[test]
    fn not_a_complex() {
        let d = Matrix::from_rows(1, 1, vec![vec![q(1)]]);
        let r = Complex::from_dims(
            &[(0, 1), (1, 1), (2, 1)].into(),
            [(0, d.clone()), (1, d)].into(),
        );
        assert_eq!(r, Err(Error::NotAComplex(1)));
    }

    #[test]
    fn truncation_examples() {
        let m = two_term_identity();
        let low = std_truncate(&m, 0, StdSide::Leq);
        assert_eq!(low.dim(0), 0);
        assert!(low.support().is_none());
        let above = Complex::<Q>::from_dims(&[(3, 2)].into(), BTreeMap::new()).unwrap();
        assert!(std_truncate(&above, 1, StdSide::Leq).support().is_none());
        let top = brutal_truncate(&m, 1, BrutalSide::Geq);
        assert_eq!(top.support(), Some((1, 1)));
        assert_eq!(top.cohomology_dims(), [(1, 1)].into());
        assert_eq!(brutal_truncate(&m, -5, BrutalSide::Geq), m);
    }
}
