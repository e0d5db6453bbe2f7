//! Dense integer matrices acting on character lattices.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A lattice vector in the fixed standard basis of a character (or cocharacter) lattice.
pub type Weight = Vec<i64>;

/// Standard dot product; with coroots stored in the dual basis this is the root-datum pairing.
pub fn pairing(x: &[i64], y: &[i64]) -> i64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Square-or-rectangular integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
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

    /// Row-major entries.
    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Weight {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| pairing(&self.data[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        (sign * a[n * n - 1]) as i64
    }

    /// Inverse of a unimodular matrix (det = ±1), computed through the adjugate.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        let n = self.rows;
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        let mut inv = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                inv[(i, j)] = sign * minor.det() * d;
            }
        }
        Some(inv)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| (0..self.cols).filter(|&j| j != skip_col).map(|j| self[(i, j)]).collect())
            .collect();
        if rows.is_empty() {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_rows(&rows)
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vecs())
    }
}

/// Index of the sublattice of `Z^k` spanned by `gens` (each of length `k`), or 0 when the
/// span has lower rank. Computed from a Hermite normal form by integer column operations.
pub fn lattice_index(k: usize, gens: &[Vec<i64>]) -> u64 {
    let diag = hermite_diagonal(k, gens);
    diag.iter().map(|&d| d as u64).product()
}

/// Diagonal of a lower-triangular Hermite basis of the span of `gens` in `Z^k`.
/// Entry `i` is 0 if the span has no pivot in row `i`.
pub fn hermite_diagonal(k: usize, gens: &[Vec<i64>]) -> Vec<i64> {
    hermite_basis(k, gens).into_iter().map(|(d, _)| d).collect()
}

/// Lower-triangular basis: for each row `i`, the pivot value and the basis column with pivot there.
pub(crate) fn hermite_basis(k: usize, gens: &[Vec<i64>]) -> Vec<(i64, Vec<i64>)> {
    let mut cols: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    let mut basis = Vec::with_capacity(k);
    for row in 0..k {
        // Euclid on the `row` entries of all remaining columns.
        loop {
            let mut nz: Vec<usize> = (0..cols.len()).filter(|&c| cols[c][row] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&c| cols[c][row].abs());
            let p = nz[0];
            for &c in &nz[1..] {
                let f = cols[c][row] / cols[p][row];
                let pivot = cols[p].clone();
                for (x, y) in cols[c].iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
        match (0..cols.len()).find(|&c| cols[c][row] != 0) {
            Some(c) => {
                let mut col = cols.swap_remove(c);
                if col[row] < 0 {
                    col.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push((col[row], col));
            }
            None => basis.push((0, vec![0; k])),
        }
        cols.retain(|c| c.iter().any(|&x| x != 0));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det(), 1);
        let inv = m.unimodular_inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(s.unimodular_inverse().is_none());
        let big = IntMatrix::from_rows(&[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]);
        assert_eq!(big.det(), 1);
    }

    #[test]
    fn index_of_sublattices() {
        assert_eq!(lattice_index(1, &[vec![4], vec![6]]), 2);
        assert_eq!(lattice_index(2, &[vec![2, 0], vec![0, 3], vec![2, 3]]), 6);
        assert_eq!(lattice_index(2, &[vec![1, 1]]), 0);
        assert_eq!(lattice_index(2, &[vec![2, 1], vec![0, 2]]), 4);
    }
}
