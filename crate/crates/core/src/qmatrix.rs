//! Dense matrices over the rationals with exact Gaussian elimination,
//! plus the two congruence normalizations used for middle-degree pairings:
//! symmetric diagonalization and skew reduction to symplectic blocks.

use num_traits::{One, Zero};

use crate::scalar::{scalar, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| crate::scalar::format_scalar(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        QMatrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols)
                .map(|k| self.get(r, k) * other.get(k, c))
                .sum()
        })
    }

    pub fn scale(&self, s: &Scalar) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !m.get(r, col).is_zero()) {
                Some(p) => p,
                None => return Scalar::zero(),
            };
            if pivot != col {
                for c in 0..n {
                    m.data.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = m.get(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                let factor = m.get(r, col) / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &factor * m.get(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.determinant().is_zero()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            let pivot = match (row..m.rows).find(|&r| !m.get(r, col).is_zero()) {
                Some(p) => p,
                None => continue,
            };
            if pivot != row {
                for c in 0..m.cols {
                    m.data.swap(pivot * m.cols + c, row * m.cols + c);
                }
            }
            let p = m.get(row, col).clone();
            for r in row + 1..m.rows {
                let factor = m.get(r, col) / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &factor * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    m.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let p = m.get(col, col).clone();
            for c in 0..n {
                let v = m.get(col, c) / &p;
                m.set(col, c, v);
                let v = inv.get(col, c) / &p;
                inv.set(col, c, v);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..n {
                    let v = m.get(r, c) - &factor * m.get(col, c);
                    m.set(r, c, v);
                    let v = inv.get(r, c) - &factor * inv.get(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }

    /// Solves `self * x = b` for a square invertible `self`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let inv = self.inverse()?;
        assert_eq!(b.len(), self.rows);
        Some(
            (0..inv.rows)
                .map(|r| (0..inv.cols).map(|c| inv.get(r, c) * &b[c]).sum())
                .collect(),
        )
    }

    fn congruence_col_op(&mut self, target: usize, source: usize, factor: &Scalar) {
        // col_target += factor * col_source, then the same on rows.
        for r in 0..self.rows {
            let v = self.get(r, target) + factor * self.get(r, source);
            self.set(r, target, v);
        }
        for c in 0..self.cols {
            let v = self.get(target, c) + factor * self.get(source, c);
            self.set(target, c, v);
        }
    }

    fn congruence_swap(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            let a = self.get(r, i).clone();
            let b = self.get(r, j).clone();
            self.set(r, i, b);
            self.set(r, j, a);
        }
        for c in 0..self.cols {
            let a = self.get(i, c).clone();
            let b = self.get(j, c).clone();
            self.set(i, c, b);
            self.set(j, c, a);
        }
    }

    /// Congruence-diagonalizes a nondegenerate symmetric matrix.
    ///
    /// Returns `(c, d)` with `c^T * self * c = d` diagonal and `c` invertible.
    /// Diagonal entries are not normalized; over Q they generally cannot be.
    pub fn symmetric_diagonalize(&self) -> Option<(QMatrix, QMatrix)> {
        assert!(self.is_square());
        if *self != self.transpose() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut c = QMatrix::identity(n);
        for i in 0..n {
            if m.get(i, i).is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !m.get(j, j).is_zero()) {
                    m.congruence_swap(i, j);
                    c.swap_cols(i, j);
                } else {
                    // All remaining diagonal entries vanish; bring a nonzero
                    // off-diagonal entry onto the diagonal.
                    let j = (i + 1..n).find(|&j| !m.get(i, j).is_zero())?;
                    let one = Scalar::one();
                    m.congruence_col_op(i, j, &one);
                    c.col_op(i, j, &one);
                }
            }
            let pivot = m.get(i, i).clone();
            if pivot.is_zero() {
                return None;
            }
            for j in i + 1..n {
                if m.get(i, j).is_zero() {
                    continue;
                }
                let factor = -(m.get(i, j) / &pivot);
                m.congruence_col_op(j, i, &factor);
                c.col_op(j, i, &factor);
            }
        }
        for r in 0..n {
            for q in 0..n {
                if r != q && !m.get(r, q).is_zero() {
                    return None;
                }
            }
            if m.get(r, r).is_zero() {
                return None;
            }
        }
        Some((c, m))
    }

    /// Reduces a nondegenerate skew-symmetric matrix to symplectic block form
    /// with 2x2 blocks `[[0, -l], [l, 0]]`, `l != 0`.
    ///
    /// Returns `(c, d)` with `c^T * self * c = d`.
    pub fn skew_symplectic_form(&self) -> Option<(QMatrix, QMatrix)> {
        assert!(self.is_square());
        if *self != self.transpose().scale(&scalar(-1)) {
            return None;
        }
        let n = self.rows;
        if n % 2 != 0 {
            return None;
        }
        let mut m = self.clone();
        let mut c = QMatrix::identity(n);
        let mut k = 0;
        while k < n {
            let (p, q) = {
                let mut found = None;
                'outer: for p in k..n {
                    for q in p + 1..n {
                        if !m.get(p, q).is_zero() {
                            found = Some((p, q));
                            break 'outer;
                        }
                    }
                }
                found?
            };
            if p != k {
                m.congruence_swap(p, k);
                c.swap_cols(p, k);
            }
            if q != k + 1 {
                m.congruence_swap(q, k + 1);
                c.swap_cols(q, k + 1);
            }
            let pivot = m.get(k, k + 1).clone();
            for l in k + 2..n {
                let a = m.get(k + 1, l) / &pivot;
                let b = -(m.get(k, l) / &pivot);
                if !a.is_zero() {
                    m.congruence_col_op(l, k, &a);
                    c.col_op(l, k, &a);
                }
                if !b.is_zero() {
                    m.congruence_col_op(l, k + 1, &b);
                    c.col_op(l, k + 1, &b);
                }
            }
            k += 2;
        }
        for r in 0..n {
            for q in 0..n {
                let expected_nonzero = (r / 2 == q / 2) && r != q;
                if expected_nonzero {
                    if m.get(r, q).is_zero() {
                        return None;
                    }
                } else if !m.get(r, q).is_zero() {
                    return None;
                }
            }
        }
        Some((c, m))
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            let a = self.get(r, i).clone();
            let b = self.get(r, j).clone();
            self.set(r, i, b);
            self.set(r, j, a);
        }
    }

    fn col_op(&mut self, target: usize, source: usize, factor: &Scalar) {
        for r in 0..self.rows {
            let v = self.get(r, target) + factor * self.get(r, source);
            self.set(r, target, v);
        }
    }
}
