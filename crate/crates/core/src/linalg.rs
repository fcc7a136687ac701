//! Exact linear algebra: a sparse echelon form keyed on the largest column of
//! each row, and small dense matrices.

use std::collections::BTreeMap;

use crate::scalar::Field;

pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn axpy<F: Field>(y: &mut SparseVec<F>, a: &F, x: &SparseVec<F>) {
    for (&k, v) in x {
        let t = a.clone() * v.clone();
        match y.get_mut(&k) {
            Some(e) => {
                *e = e.clone() + t;
                if e.is_zero() {
                    y.remove(&k);
                }
            }
            None => {
                if !t.is_zero() {
                    y.insert(k, t);
                }
            }
        }
    }
}

/// Rows in semi-echelon form: each row is monic in its largest column and no
/// two rows share that column. Full reduction against it therefore leaves a
/// vector supported on non-pivot columns only, which is a normal form.
#[derive(Clone, Debug, Default)]
pub struct Echelon<F> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        let mut bound = usize::MAX;
        loop {
            let next = v
                .range(..bound)
                .rev()
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { return v };
            axpy(&mut v, &-c, &self.rows[&k]);
            bound = k;
        }
    }

    /// Inserts `v`, returning whether the span grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let v = self.reduce(v);
        let Some((&piv, lead)) = v.iter().next_back() else {
            return false;
        };
        let inv = F::one() / lead.clone();
        let row = v.into_iter().map(|(k, c)| (k, c * inv.clone())).collect();
        self.rows.insert(piv, row);
        true
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<F>>) -> Self {
        assert_eq!(entries.len(), rows);
        let data: Vec<F> = entries.into_iter().flatten().collect();
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<F> {
        let mut out = Matrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix<F> {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = F::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space as columns of a `cols × k` matrix. Column `t`
    /// has a 1 in the `t`-th free coordinate and 0 in the other free ones.
    pub fn kernel(&self) -> (Matrix<F>, Vec<usize>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, F::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, t, -r.get(row, f).clone());
            }
        }
        (k, free)
    }

    /// Indices of a maximal independent set of columns, greedy left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).to_q_string())
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn echelon_normal_form() {
        let mut e = Echelon::<BigRational>::new();
        assert!(e.insert([(0, q(1)), (2, q(1))].into()));
        assert!(!e.insert([(0, q(2)), (2, q(2))].into()));
        assert!(e.is_pivot(2));
        let r = e.reduce([(2, q(3)), (1, q(1))].into());
        assert_eq!(r, [(0, q(-3)), (1, q(1))].into());
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(2, 3, vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(m.rank(), 1);
        let (k, free) = m.kernel();
        assert_eq!(free, vec![1, 2]);
        assert!(m.mul(&k).is_zero());
    }
}
