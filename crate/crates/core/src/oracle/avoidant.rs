//! Pointwise avoidance predicate for an element of a standard Levi, computed from
//! characteristic polynomials of `ad_m` on the Levi and the two opposite unipotent radicals.

use serde::{Deserialize, Serialize};

use crate::coverage::StandardLevi;
use crate::error::{AtlasError, Result};
use crate::finite_field::{FieldPoly, FiniteField, Fq};
use crate::oracle::commutant::solve_intertwiners;
use crate::oracle::matrix::{Mat, MatrixGroup};
use crate::root_datum::Family;

/// Block index of each diagonal coordinate for the Levi.
pub fn coordinate_blocks(family: Family, levi: &StandardLevi) -> Vec<usize> {
    levi.composition(family).iter().enumerate().flat_map(|(b, &size)| std::iter::repeat_n(b, size)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    Levi,
    Upper,
    Lower,
    LeviUpper,
    LeviLower,
}

impl Piece {
    fn allows(self, bi: usize, bj: usize) -> bool {
        match self {
            Piece::Levi => bi == bj,
            Piece::Upper => bi < bj,
            Piece::Lower => bi > bj,
            Piece::LeviUpper => bi <= bj,
            Piece::LeviLower => bi >= bj,
        }
    }
}

/// Basis of the Lie algebra intersected with a block pattern, with coordinate columns.
fn lie_subspace(group: &MatrixGroup, blocks: &[usize], piece: Piece) -> (Vec<Mat>, Vec<usize>) {
    let f = &group.field;
    let n = group.dim();
    let nn = n * n;
    let mut rows: Vec<Vec<Fq>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !piece.allows(blocks[i], blocks[j]) {
                let mut r = vec![0; nn];
                r[i * n + j] = 1;
                rows.push(r);
            }
        }
    }
    match group.preset.family {
        Family::SL => rows.push((0..nn).map(|k| Fq::from(k / n == k % n)).collect()),
        Family::GSp => {
            // X^T J + J X must be a multiple of J.
            let j = group.form.as_ref().expect("symplectic form");
            let images: Vec<Mat> = (0..nn)
                .map(|k| {
                    let mut e = Mat::zeros(n, n);
                    e[(k / n, k % n)] = 1;
                    e.transpose().mul(j, f).add(&j.mul(&e, f), f)
                })
                .collect();
            let entry = |a: usize, b: usize| -> Vec<Fq> { images.iter().map(|m| m[(a, b)]).collect() };
            for a in 0..n {
                for b in 0..n {
                    if j[(a, b)] == 0 {
                        rows.push(entry(a, b));
                    } else if a > 0 {
                        let ja = f.inv(j[(a, b)]).expect("unit");
                        let j0 = f.inv(j[(0, n - 1)]).expect("unit");
                        let (ra, r0) = (entry(a, b), entry(0, n - 1));
                        rows.push(ra.iter().zip(&r0).map(|(&x, &y)| f.sub(f.mul(x, ja), f.mul(y, j0))).collect());
                    }
                }
            }
        }
        Family::GL | Family::U => {}
    }
    let constraints = if rows.is_empty() { Mat::zeros(1, nn) } else { Mat::from_rows(&rows) };
    let (basis, free) = constraints.nullspace(f);
    (basis.into_iter().map(|v| Mat::from_data(n, n, v)).collect(), free)
}

/// Matrix of `X -> m X m^-1` on a subspace it preserves.
fn ad_on(m: &Mat, m_inv: &Mat, space: &(Vec<Mat>, Vec<usize>), f: &FiniteField) -> Mat {
    let (basis, free) = space;
    let d = basis.len();
    let mut a = Mat::zeros(d, d);
    for (k, b) in basis.iter().enumerate() {
        let img = m.mul(b, f).mul(m_inv, f);
        for (i, &c) in free.iter().enumerate() {
            a[(i, k)] = img.data()[c];
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceReport {
    pub avoidant: bool,
    /// Exponent used for the separation condition.
    pub r: u32,
    pub ad_minus_one_invertible: bool,
    pub ad_minus_q_invertible: bool,
    pub separated: bool,
    pub levi_dim: usize,
    pub u_dim: usize,
    pub u_minus_dim: usize,
}

fn coprime(a: &FieldPoly, b: &FieldPoly, f: &FiniteField) -> bool {
    a.gcd(b, f).degree() == Some(0)
}

/// Whether `m` (an element of the Levi) is avoidant: `ad_m - 1` and `ad_m - q` invertible on
/// `Lie(U)` and `Lie(U^-)`, and the characteristic polynomial of `ad_{m^r}` on
/// `Lie(M) + Lie(U)` coprime to that on `Lie(U^-)`, and likewise with `U`, `U^-` swapped.
/// `r` defaults to the order of Frobenius on the preset. Split presets only.
pub fn avoidant_check(
    group: &MatrixGroup,
    levi: &StandardLevi,
    m: &Mat,
    q: u64,
    r: Option<u32>,
) -> Result<AvoidanceReport> {
    let family = group.preset.family;
    if family == Family::U {
        return Err(AtlasError::InvalidInput("avoidance check supports split presets only".into()));
    }
    if !levi.gamma_stable {
        return Err(AtlasError::LeviNotGammaStable { subset: levi.simple_root_subset.clone() });
    }
    let f = &group.field;
    let n = group.dim();
    let blocks = coordinate_blocks(family, levi);
    if blocks.len() != n {
        return Err(AtlasError::InvalidInput("Levi does not match the group".into()));
    }
    group.check(m, "m")?;
    let outside = (0..n).any(|i| (0..n).any(|j| blocks[i] != blocks[j] && m[(i, j)] != 0));
    if outside {
        return Err(AtlasError::NotInLevi("m has entries outside the Levi blocks".into()));
    }
    let r = r.unwrap_or(1).max(1);
    let m_inv = m.inverse(f).expect("group element");
    let spaces = [Piece::Levi, Piece::Upper, Piece::Lower, Piece::LeviUpper, Piece::LeviLower]
        .map(|p| lie_subspace(group, &blocks, p));
    let [levi_space, upper, lower, levi_upper, levi_lower] = &spaces;
    let qf = f.from_int(q as i64);
    let cp_u = ad_on(m, &m_inv, upper, f).char_poly(f);
    let cp_l = ad_on(m, &m_inv, lower, f).char_poly(f);
    let ad_minus_one_invertible = cp_u.eval(f, 1) != 0 && cp_l.eval(f, 1) != 0;
    let ad_minus_q_invertible = cp_u.eval(f, qf) != 0 && cp_l.eval(f, qf) != 0;
    let mr = m.pow(r as u64, f);
    let mr_inv = mr.inverse(f).expect("group element");
    let cp = |s: &(Vec<Mat>, Vec<usize>)| ad_on(&mr, &mr_inv, s, f).char_poly(f);
    let separated = coprime(&cp(levi_upper), &cp(lower), f) && coprime(&cp(levi_lower), &cp(upper), f);
    Ok(AvoidanceReport {
        avoidant: ad_minus_one_invertible && ad_minus_q_invertible && separated,
        r,
        ad_minus_one_invertible,
        ad_minus_q_invertible,
        separated,
        levi_dim: levi_space.0.len(),
        u_dim: upper.0.len(),
        u_minus_dim: lower.0.len(),
    })
}

/// Conjugators `g` in `G(F)` with `g a g^-1 = b` that are not in the Levi. Empty whenever the
/// separation hypothesis forces every conjugator into the Levi.
pub fn conjugators_outside_levi(
    group: &MatrixGroup,
    levi: &StandardLevi,
    a: &Mat,
    b: &Mat,
    budget: u128,
) -> Result<Vec<Mat>> {
    let blocks = coordinate_blocks(group.preset.family, levi);
    let n = group.dim();
    let sols = solve_intertwiners(group, a, b, budget)?;
    Ok(sols.into_iter().filter(|g| (0..n).any(|i| (0..n).any(|j| blocks[i] != blocks[j] && g[(i, j)] != 0))).collect())
}
