//! Dense linear algebra over a prime field F_p.
//!
//! Vectors are plain `Vec<u64>` with entries in `0..p`. Matrices act on
//! column vectors: column `c` of a module's σ-matrix holds the coordinates
//! of the image of basis vector `c`.

use crate::arith::inv_mod;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(p: u64, dim: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zero(p, dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<u64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p;
        let mut out = Matrix::zero(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| (acc + self.get(i, j) * v[j]) % self.p)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + self.p - b) % self.p;
        }
        out
    }

    pub fn scale(&self, k: u64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * (k % self.p) % self.p;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = inv_mod(m.get(row, col), p);
            for c in 0..m.cols {
                let v = m.get(row, c) * inv % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = (m.get(r, c) + p * p - f * m.get(row, c)) % p;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self · x = b`. Among all solutions, returns the one whose
    /// free (non-pivot) coordinates are zero, pivots taken in column order.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.p, self.rows, self.cols + 1);
        for (r, &rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols);
        }
        Some(x)
    }

    /// A functional y with yᵀ·self = 0 and yᵀ·b ≠ 0, witnessing that
    /// `self · x = b` has no solution.
    pub fn certificate(&self, b: &[u64]) -> Option<Vec<u64>> {
        self.transpose()
            .kernel()
            .into_iter()
            .find(|y| y.iter().zip(b).fold(0, |acc, (a, c)| (acc + a * c) % self.p) != 0)
    }

    /// A basis of the null space, one vector per free column (in order).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (red, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - red.get(r, free)) % p;
            }
            out.push(v);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let mut m = self.clone();
        let mut det = 1;
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = (p - det) % p;
            }
            let d = m.get(col, col);
            det = det * d % p;
            let inv = inv_mod(d, p);
            for r in col + 1..m.rows {
                let f = m.get(r, col) * inv % p;
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m.get(r, c) + p * p - f * m.get(col, c)) % p;
                    m.set(r, c, v);
                }
            }
        }
        det
    }
}

/// Incrementally maintained subspace of F_p^n with an echelon basis.
#[derive(Clone, Debug)]
pub struct Span {
    p: u64,
    dim: usize,
    // (pivot column, row normalised so the pivot entry is 1)
    rows: Vec<(usize, Vec<u64>)>,
}

impl Span {
    pub fn new(p: u64, dim: usize) -> Self {
        Span {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (piv, row) in &self.rows {
            let f = w[*piv];
            if f != 0 {
                for (a, b) in w.iter_mut().zip(row) {
                    *a = (*a + p * p - f * b) % p;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[piv], p);
        for a in w.iter_mut() {
            *a = *a * inv % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[piv];
            if f != 0 {
                for (a, b) in row.iter_mut().zip(&w) {
                    *a = (*a + p * p - f * b) % p;
                }
            }
        }
        self.rows.push((piv, w));
        true
    }

    pub fn basis(&self) -> Vec<Vec<u64>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(piv, _)| *piv);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

pub fn is_zero_vec(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn add_vec(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub fn sub_vec(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + p - y % p) % p).collect()
}

pub fn scale_vec(a: &[u64], k: u64, p: u64) -> Vec<u64> {
    a.iter().map(|x| x * (k % p) % p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_prefers_pivot_columns() {
        // columns: 0, 0, v, v, v with v = (1,1,1)
        let v = vec![1, 1, 1];
        let m = Matrix::from_columns(3, 3, &[vec![0; 3], vec![0; 3], v.clone(), v.clone(), v.clone()]);
        assert_eq!(m.solve(&v), Some(vec![0, 0, 1, 0, 0]));
        assert_eq!(m.solve(&[1, 0, 0]), None);
        assert_eq!(m.kernel().len(), 4);
    }

    #[test]
    fn determinant_and_rank() {
        let m = Matrix::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.determinant(), (4 + 5 * 5 - 6) % 5);
        assert_eq!(m.rank(), 2);
        let sing = Matrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.determinant(), 0);
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new(3, 3);
        assert!(s.insert(&[1, 2, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 0, 1]));
        assert!(s.contains(&[2, 1, 0]));
        assert!(!s.contains(&[0, 0, 1]));
    }
}
