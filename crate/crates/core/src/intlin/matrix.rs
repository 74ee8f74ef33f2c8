//! Dense matrices over arbitrary-precision integers, plus the exact
//! rational solvers the lattice routines are built on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = BigRational;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.entry(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Int::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from machine integers (tests, builtins).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_rows(data).expect("literal rows have equal length")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<Int>>) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut m = Self::zero(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.entry_mut(i, j) = v.clone();
            }
        }
        Ok(m)
    }

    /// Builds a matrix with explicit shape (handles zero-row/zero-column cases
    /// that `from_rows`/`from_cols` cannot infer).
    pub fn from_shape(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch("entry count does not match shape".into()));
        }
        Ok(IntMatrix { rows, cols, data: entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.entry_mut(c, r) = self.entry(r, c).clone();
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.entry(k, j);
                    *out.entry_mut(i, j) += add;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length does not match column count".into()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Returns the submatrix formed by the given columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                *m.entry_mut(i, jj) = self.entry(i, j).clone();
            }
        }
        m
    }

    /// Returns the submatrix formed by the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let data = idx.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        IntMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Rank over the rationals, via fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rank, _) = bareiss(&mut m);
        rank
    }

    /// Determinant of a square matrix, via Bareiss elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Int::one());
        }
        let mut m = self.clone();
        let (rank, det) = bareiss(&mut m);
        if rank < self.rows {
            return Ok(Int::zero());
        }
        Ok(det)
    }
}

/// Fraction-free Gaussian elimination in place.  Returns `(rank, det)`;
/// `det` is meaningful only when the matrix is square and has full rank.
fn bareiss(m: &mut IntMatrix) -> (usize, Int) {
    let rows = m.rows();
    let cols = m.cols();
    let mut prev = Int::one();
    let mut sign = Int::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| !m.entry(i, c).is_zero());
        let Some(p) = pivot else { continue };
        if p != r {
            m.swap_rows(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = m.entry(r, c) * m.entry(i, j) - m.entry(i, c) * m.entry(r, j);
                *m.entry_mut(i, j) = &num / &prev;
            }
            *m.entry_mut(i, c) = Int::zero();
        }
        prev = m.entry(r, c).clone();
        r += 1;
    }
    (r, sign * prev)
}

/// Dot product of two equal-length integer slices.
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greatest common divisor of a slice (nonnegative; 0 for the zero vector).
pub fn vec_gcd(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| num_integer::gcd(acc, x.abs()))
}

/// Divides a nonzero integer vector by its gcd, preserving direction.
/// The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = vec_gcd(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Int::is_zero)
}

/// Clears denominators: returns the primitive integer vector with the same
/// direction as the rational input (zero maps to zero).
pub fn rational_to_primitive(v: &[Rat]) -> Vec<Int> {
    let lcm = v
        .iter()
        .fold(Int::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Picks a maximal set of linearly independent columns, greedily from the left.
/// Returns the chosen column indices; their count is the matrix rank.
pub fn independent_cols(m: &IntMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for j in 0..m.cols() {
        let mut idx = chosen.clone();
        idx.push(j);
        let sub = m.select_cols(&idx);
        if sub.rank() == rank + 1 {
            chosen.push(j);
            rank += 1;
        }
        if rank == m.rows() {
            break;
        }
    }
    chosen
}

/// Solves `A x = b` over the rationals by Gaussian elimination.
/// Returns one solution (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Rat>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch("right-hand side length does not match row count".into()));
    }
    let rows = a.rows();
    let cols = a.cols();
    let mut aug: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> =
                a.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect();
            row.push(Rat::from_integer(b[i].clone()));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(p, r);
        let inv = aug[r][c].clone();
        for v in aug[r][c..=cols].iter_mut() {
            *v = &*v / &inv;
        }
        let pivot_row: Vec<Rat> = aug[r][c..=cols].to_vec();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row[c..=cols].iter_mut().zip(&pivot_row) {
                    *v = &*v - &factor * p;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if aug.iter().skip(r).any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); cols];
    for &(pr, pc) in &pivots {
        x[pc] = aug[pr][cols].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn multiplies_and_transposes() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4], &[5, 6]]);
        let b = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), a);
        assert_eq!(a.transpose().rows(), 2);
        assert_eq!(*a.transpose().entry(1, 2), i(6));
    }

    #[test]
    fn bareiss_rank_and_det() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(a.det().unwrap(), i(6));
        assert_eq!(a.rank(), 2);

        let b = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(b.rank(), 2);
        assert_eq!(b.det().unwrap(), i(0));

        let c = IntMatrix::from_i64(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        assert_eq!(c.det().unwrap(), i(-90));
    }

    #[test]
    fn solves_rational_systems() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        let x = solve_rational(&a, &[i(1), i(2)]).unwrap().unwrap();
        assert_eq!(x[0], Rat::new(i(1), i(2)));
        assert_eq!(x[1], Rat::new(i(1), i(2)));

        let inconsistent = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(solve_rational(&inconsistent, &[i(0), i(1)]).unwrap().is_none());
    }

    #[test]
    fn primitive_normalization() {
        assert_eq!(primitive(&[i(2), i(-4), i(6)]), vec![i(1), i(-2), i(3)]);
        assert_eq!(primitive(&[i(0), i(0)]), vec![i(0), i(0)]);
        let r = |n: i64, d: i64| Rat::new(i(n), i(d));
        assert_eq!(rational_to_primitive(&[r(1, 2), r(-1, 3)]), vec![i(3), i(-2)]);
    }

    #[test]
    fn independent_columns_are_greedy_from_left() {
        let a = IntMatrix::from_i64(&[&[1, 2, 0], &[2, 4, 1]]);
        assert_eq!(independent_cols(&a), vec![0, 2]);
    }
}
