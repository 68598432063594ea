//! Small dense matrices over exact rings, division-free determinants and
//! adjugates, and Gaussian elimination over exact fields.

use std::fmt;

use num_traits::{One, Zero};

use crate::field::{CycloNum, Rational};

/// Commutative ring element whose zero and one are obtained from a sample
/// value (cyclotomic numbers and polynomials carry their ring with them).
pub trait RingElem: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

pub trait FieldElem: RingElem {
    /// Inverse of a nonzero element.
    fn inv_ref(&self) -> Self;
}

impl RingElem for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl FieldElem for Rational {
    fn inv_ref(&self) -> Self {
        self.recip()
    }
}

impl RingElem for CycloNum {
    fn zero_like(&self) -> Self {
        CycloNum::zero(self.conductor())
    }
    fn one_like(&self) -> Self {
        CycloNum::one(self.conductor())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl FieldElem for CycloNum {
    fn inv_ref(&self) -> Self {
        self.inv().expect("pivot is nonzero")
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<T> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Entries with their (row, col) positions.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, v)| (k / c, k % c, v))
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        let c = self.cols.max(1);
        let mut out = Vec::with_capacity(self.rows);
        let mut it = self.data.into_iter();
        for _ in 0..self.rows {
            out.push(it.by_ref().take(c).collect());
        }
        out
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }
}

impl<T: RingElem> Matrix<T> {
    pub fn identity_like(sample: &T, n: usize) -> Self {
        let (z, o) = (sample.zero_like(), sample.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0).zero_like();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero_elem() && !b.is_zero_elem() {
                    acc = acc.add_ref(&a.mul_ref(b));
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_ref(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub_ref(other.get(i, j)))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.mul_ref(s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero_elem)
    }

    /// Determinant by cofactor expansion along the first row (division free).
    pub fn det(&self) -> T {
        assert!(self.is_square() && self.rows > 0, "determinant of non-square or empty matrix");
        match self.rows {
            1 => self.data[0].clone(),
            2 => self.get(0, 0).mul_ref(self.get(1, 1)).sub_ref(&self.get(0, 1).mul_ref(self.get(1, 0))),
            n => {
                let mut acc = self.data[0].zero_like();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero_elem() {
                        continue;
                    }
                    let term = a.mul_ref(&self.minor(0, j).det());
                    acc = if j % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
                }
                acc
            }
        }
    }

    /// Transpose of the cofactor matrix, so that `M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square() && self.rows > 0);
        let n = self.rows;
        if n == 1 {
            return Matrix::identity_like(&self.data[0], 1);
        }
        Matrix::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 { c } else { c.neg_ref() }
        })
    }
}

impl<T: FieldElem> Matrix<T> {
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<T>> = self.clone().into_rows();
        row_reduce(&mut rows, self.cols).len()
    }

    /// Inverse via adjugate and determinant; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero_elem() {
            return None;
        }
        let dinv = d.inv_ref();
        Some(self.adjugate().scale(&dinv))
    }
}

/// Brings `rows` into reduced row-echelon form over the first `ncols` columns,
/// pivoting on the first nonzero entry. Returns the pivot columns.
pub fn row_reduce<T: FieldElem>(rows: &mut [Vec<T>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv_ref();
        for v in rows[r].iter_mut() {
            if !v.is_zero_elem() {
                *v = v.mul_ref(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_elem() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_elem() {
                    *v = v.sub_ref(&factor.mul_ref(pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Outcome of solving `A·c = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    Inconsistent,
    /// Consistent but the columns of `A` are dependent.
    Underdetermined,
}

/// Solves the system whose rows are `[a_1 … a_k | b]`.
pub fn solve_augmented<T: FieldElem>(mut rows: Vec<Vec<T>>, nunknowns: usize) -> Solution<T> {
    let pivots = row_reduce(&mut rows, nunknowns + 1);
    if pivots.last() == Some(&nunknowns) {
        return Solution::Inconsistent;
    }
    if pivots.len() < nunknowns {
        return Solution::Underdetermined;
    }
    Solution::Unique(rows.into_iter().take(nunknowns).map(|mut r| r.pop().expect("augmented row")).collect())
}

/// Rational coordinates of `target` in the ℚ-span of `basis` (elements of one ℚ(ζ_N)).
pub fn solve_rational_coords(basis: &[CycloNum], target: &CycloNum) -> Option<Vec<Rational>> {
    let dim = target.coeffs().len();
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|k| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b.coeffs()[k].clone()).collect();
            row.push(target.coeffs()[k].clone());
            row
        })
        .collect();
    match solve_augmented(rows, basis.len()) {
        Solution::Unique(v) => Some(v),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn adjugate_identity() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1), q(0)], vec![q(1), q(3), q(1)], vec![q(0), q(1), q(4)]]);
        let d = m.det();
        assert_eq!(d, q(18));
        let prod = m.mul(&m.adjugate());
        assert_eq!(prod, Matrix::identity_like(&q(0), 3).scale(&d));
    }

    #[test]
    fn rank_and_solve() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(m.rank(), 1);
        assert!(m.inverse().is_none());
        let sol = solve_augmented(vec![vec![q(1), q(1), q(3)], vec![q(1), q(-1), q(1)]], 2);
        assert_eq!(sol, Solution::Unique(vec![q(2), q(1)]));
        let bad = solve_augmented(vec![vec![q(1), q(1)], vec![q(2), q(3)]], 1);
        assert_eq!(bad, Solution::Inconsistent);
        let under = solve_augmented(vec![vec![q(1), q(1), q(2)]], 2);
        assert_eq!(under, Solution::Underdetermined);
    }

    #[test]
    fn cyclotomic_inverse() {
        let z = CycloNum::zeta(12);
        let m = Matrix::from_rows(vec![vec![z.clone(), CycloNum::one(12)], vec![CycloNum::zero(12), z.clone()]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity_like(&z, 2));
    }
}
