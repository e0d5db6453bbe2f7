//! Dense matrices over a finite field and the preset matrix groups with their forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::finite_field::{FieldPoly, FiniteField, Fq};
use crate::root_datum::{Family, Preset};

/// Row-major matrix of field elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.concat() }
    }

    /// Integer entries reduced into the field.
    pub fn from_ints(field: &FiniteField, rows: &[Vec<i64>]) -> Mat {
        let rows: Vec<Vec<Fq>> = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Mat::from_rows(&rows)
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Fq>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn diagonal(d: &[Fq]) -> Mat {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fq] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fq>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn add(&self, other: &Mat, f: &FiniteField) -> Mat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat, f: &FiniteField) -> Mat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Fq, f: &FiniteField) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Mat, f: &FiniteField) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = f.mul(a, other[(k, j)]);
                    out[(i, j)] = f.add(out[(i, j)], p);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Fq], f: &FiniteField) -> Vec<Fq> {
        (0..self.rows).map(|i| f.sum((0..self.cols).map(|j| f.mul(self[(i, j)], v[j])))).collect()
    }

    /// `self^e` for `e >= 0` by repeated squaring.
    pub fn pow(&self, mut e: u64, f: &FiniteField) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.rows)
    }

    /// Whether `self` is `c * I` for some `c`.
    pub fn is_scalar(&self) -> bool {
        let c = self[(0, 0)];
        *self == Mat::diagonal(&vec![c; self.rows])
    }

    pub fn trace(&self, f: &FiniteField) -> Fq {
        f.sum((0..self.rows).map(|i| self[(i, i)]))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &FiniteField) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m[(i, c)] != 0) else { continue };
            m.swap_rows(p, r);
            let inv = f.inv(m[(r, c)]).expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let factor = m[(i, c)];
                    for j in 0..m.cols {
                        let t = f.mul(factor, m[(r, j)]);
                        m[(i, j)] = f.sub(m[(i, j)], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right kernel, and the free columns: basis vector `k` has a 1 in free column
    /// `k` and 0 in the other free columns, so coordinates of a kernel vector can be read off at
    /// the free columns.
    pub fn nullspace(&self, f: &FiniteField) -> (Vec<Vec<Fq>>, Vec<usize>) {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r[(row, fc)]);
                }
                v
            })
            .collect();
        (basis, free)
    }

    pub fn det(&self, f: &FiniteField) -> Fq {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m[(i, c)] != 0) else { return 0 };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(det);
            }
            det = f.mul(det, m[(c, c)]);
            let inv = f.inv(m[(c, c)]).expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)] != 0 {
                    let factor = f.mul(m[(i, c)], inv);
                    for j in c..n {
                        let t = f.mul(factor, m[(c, j)]);
                        m[(i, j)] = f.sub(m[(i, j)], t);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Mat> {
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - self)` via reduction to Hessenberg form.
    pub fn char_poly(&self, f: &FiniteField) -> FieldPoly {
        let n = self.rows;
        let mut h = self.clone();
        // Similarity transform to upper Hessenberg form.
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| h[(i, c)] != 0) else { continue };
            if p != c + 1 {
                h.swap_rows(p, c + 1);
                h.swap_cols(p, c + 1);
            }
            let inv = f.inv(h[(c + 1, c)]).expect("nonzero pivot");
            for i in c + 2..n {
                let factor = f.mul(h[(i, c)], inv);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul(factor, h[(c + 1, j)]);
                    h[(i, j)] = f.sub(h[(i, j)], t);
                }
                for j in 0..n {
                    let t = f.mul(factor, h[(j, i)]);
                    h[(j, c + 1)] = f.add(h[(j, c + 1)], t);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}.
        let mut polys: Vec<FieldPoly> = vec![FieldPoly::new(vec![1])];
        for k in 0..n {
            let x_minus = FieldPoly::new(vec![f.neg(h[(k, k)]), 1]);
            let mut pk = x_minus.mul(&polys[k], f);
            let mut prod = 1;
            for i in (0..k).rev() {
                prod = f.mul(prod, h[(i + 1, i)]);
                let c = f.mul(prod, h[(i, k)]);
                if c != 0 {
                    let term = polys[i].mul(&FieldPoly::new(vec![c]), f);
                    pk = poly_sub(&pk, &term, f);
                }
            }
            polys.push(pk);
        }
        polys.pop().expect("nonempty")
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn format(&self, f: &FiniteField) -> Vec<Vec<String>> {
        self.row_vecs().iter().map(|r| r.iter().map(|&x| f.format(x)).collect()).collect()
    }
}

fn poly_sub(a: &FieldPoly, b: &FieldPoly, f: &FiniteField) -> FieldPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let get = |p: &FieldPoly, i: usize| p.coeffs.get(i).copied().unwrap_or(0);
    FieldPoly::new((0..n).map(|i| f.sub(get(a, i), get(b, i))).collect())
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Fq;
    fn index(&self, (i, j): (usize, usize)) -> &Fq {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fq {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vecs())
    }
}

/// Antidiagonal symplectic form: `+1` in the first half of the rows, `-1` in the second.
pub fn symplectic_form(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i + j == n - 1 {
                        if i < n / 2 {
                            1
                        } else {
                            -1
                        }
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Antidiagonal form with alternating signs, used for the unitary Frobenius.
pub fn unitary_form(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i + j == n - 1 {
                        if i % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// The matrix group of a preset over a finite field.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub preset: Preset,
    pub field: FiniteField,
    /// `J` for `GSp` and for the unitary Frobenius.
    pub form: Option<Mat>,
    form_inverse: Option<Mat>,
}

impl MatrixGroup {
    pub fn new(preset: Preset, field: FiniteField) -> MatrixGroup {
        let n = preset.n;
        let form = match preset.family {
            Family::GSp => Some(Mat::from_ints(&field, &symplectic_form(n))),
            Family::U => Some(Mat::from_ints(&field, &unitary_form(n))),
            Family::GL | Family::SL => None,
        };
        let form_inverse = form.as_ref().map(|j| j.inverse(&field).expect("forms are invertible"));
        MatrixGroup { preset, field, form, form_inverse }
    }

    /// A group over an explicit form; used to check matrices written in another basis.
    pub fn with_form(preset: Preset, field: FiniteField, form: Mat) -> Result<MatrixGroup> {
        let form_inverse = form.inverse(&field).ok_or_else(|| AtlasError::InvalidInput("form is singular".into()))?;
        Ok(MatrixGroup { preset, field, form: Some(form), form_inverse: Some(form_inverse) })
    }

    pub fn dim(&self) -> usize {
        self.preset.n
    }

    /// Similitude factor `nu` with `g^T J g = nu J`, for `GSp`.
    pub fn similitude(&self, g: &Mat) -> Option<Fq> {
        let j = self.form.as_ref()?;
        let f = &self.field;
        let lhs = g.transpose().mul(j, f).mul(g, f);
        let (i0, j0) = (0..j.rows()).flat_map(|i| (0..j.cols()).map(move |k| (i, k))).find(|&(i, k)| j[(i, k)] != 0)?;
        let nu = f.div(lhs[(i0, j0)], j[(i0, j0)])?;
        (nu != 0 && lhs == j.scale(nu, f)).then_some(nu)
    }

    pub fn contains(&self, g: &Mat) -> bool {
        let f = &self.field;
        if g.rows() != self.dim() || g.cols() != self.dim() {
            return false;
        }
        match self.preset.family {
            Family::GL | Family::U => g.det(f) != 0,
            Family::SL => g.det(f) == 1,
            Family::GSp => self.similitude(g).is_some(),
        }
    }

    pub fn check(&self, g: &Mat, what: &str) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(AtlasError::NotInGroup(format!("{what} is not in {}", self.preset)))
        }
    }

    /// Frobenius action on the group: identity for split presets, `g -> J g^-T J^-1` for `U_n`.
    pub fn frobenius(&self, g: &Mat) -> Mat {
        match self.preset.family {
            Family::U => {
                let f = &self.field;
                let j = self.form.as_ref().expect("unitary form");
                let jinv = self.form_inverse.as_ref().expect("unitary form");
                let ginv = g.inverse(f).expect("group element is invertible");
                j.mul(&ginv.transpose(), f).mul(jinv, f)
            }
            _ => g.clone(),
        }
    }

    /// Dimension of the group as a variety.
    pub fn variety_dim(&self) -> usize {
        let n = self.dim();
        match self.preset.family {
            Family::GL | Family::U => n * n,
            Family::SL => n * n - 1,
            Family::GSp => {
                let m = n / 2;
                m * (2 * m + 1) + 1
            }
        }
    }

    /// `|G(F)|` from the classical order formulas.
    pub fn order(&self) -> u128 {
        let q = self.field.size() as u128;
        let n = self.dim() as u32;
        let gl: u128 = (0..n).map(|i| q.pow(n) - q.pow(i)).product();
        match self.preset.family {
            Family::GL | Family::U => gl,
            Family::SL => gl / (q - 1),
            Family::GSp => {
                let m = n / 2;
                let sp: u128 = q.pow(m * m) * (1..=m).map(|i| q.pow(2 * i) - 1).product::<u128>();
                sp * (q - 1)
            }
        }
    }

    /// Every element of the group, by enumerating all matrices; only for tiny fields.
    pub fn elements(&self, budget: u128) -> Result<Vec<Mat>> {
        let n = self.dim();
        let size = self.field.size() as u128;
        let required = size.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
        if required > budget {
            return Err(AtlasError::BudgetExceeded { required, budget });
        }
        let mut out = Vec::new();
        let mut data = vec![0 as Fq; n * n];
        loop {
            let m = Mat::from_data(n, n, data.clone());
            if self.contains(&m) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == data.len() {
                    return Ok(out);
                }
                data[i] += 1;
                if (data[i] as u128) < size {
                    break;
                }
                data[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let f7 = f(7);
        let m = Mat::from_ints(&f7, &[vec![2, 1], vec![5, 3]]);
        assert_eq!(m.det(&f7), 1);
        assert!(m.mul(&m.inverse(&f7).unwrap(), &f7).is_identity());
        let s = Mat::from_ints(&f7, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse(&f7).is_none());
        assert_eq!(s.rank(&f7), 1);
    }

    #[test]
    fn char_poly_matches_cayley_hamilton() {
        let f5 = f(5);
        let m = Mat::from_ints(&f5, &[vec![1, 2, 0, 3], vec![4, 0, 1, 1], vec![2, 2, 3, 0], vec![0, 1, 1, 4]]);
        let p = m.char_poly(&f5);
        assert_eq!(p.degree(), Some(4));
        let mut acc = Mat::zeros(4, 4);
        for (k, &c) in p.coeffs.iter().enumerate() {
            acc = acc.add(&m.pow(k as u64, &f5).scale(c, &f5), &f5);
        }
        assert!(acc.is_zero());
        // det(-m) equals the constant term.
        assert_eq!(p.coeffs[0], m.scale(f5.neg(1), &f5).det(&f5));
    }

    #[test]
    fn nullspace_coordinates() {
        let f3 = f(3);
        let m = Mat::from_ints(&f3, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let (basis, free) = m.nullspace(&f3);
        assert_eq!(free, vec![1]);
        assert_eq!(basis, vec![vec![2, 1, 0]]);
    }

    #[test]
    fn small_group_orders() {
        let gl2 = MatrixGroup::new(Preset::parse("GL2").unwrap(), f(3));
        assert_eq!(gl2.elements(1 << 20).unwrap().len() as u128, gl2.order());
        let sl2 = MatrixGroup::new(Preset::parse("SL2").unwrap(), f(3));
        assert_eq!(sl2.elements(1 << 20).unwrap().len(), 24);
        let gsp4 = MatrixGroup::new(Preset::parse("GSp4").unwrap(), f(2));
        assert_eq!(gsp4.elements(1 << 20).unwrap().len() as u128, gsp4.order());
    }

    #[test]
    fn unitary_frobenius_inverts_torus() {
        let f7 = f(7);
        let u3 = MatrixGroup::new(Preset::parse("U3").unwrap(), f7.clone());
        let t = Mat::diagonal(&[2, 3, 5]);
        let fr = u3.frobenius(&t);
        let expect = Mat::diagonal(&[f7.inv(5).unwrap(), f7.inv(3).unwrap(), f7.inv(2).unwrap()]);
        assert_eq!(fr, expect);
        assert_eq!(u3.frobenius(&fr), t);
    }
}
