//! Exhaustive solutions of `Phi Fr(Sigma) Phi^-1 = Sigma^q` in a matrix group over a finite
//! field. The equation is linear in `Phi`, so candidates range over the kernel of
//! `Phi -> Phi A - B Phi` and are filtered by group membership.

use std::thread;

use crate::error::{AtlasError, Result};
use crate::finite_field::{FiniteField, Fq};
use crate::oracle::matrix::{Mat, MatrixGroup};

/// Default enumeration budget for exhaustive searches.
pub const DEFAULT_ORACLE_BUDGET: u128 = 10_000_000;

/// Matrix of `Phi -> Phi a - b Phi` on row-major vectorizations.
fn intertwiner_map(a: &Mat, b: &Mat, f: &FiniteField) -> Mat {
    let n = a.rows();
    let mut l = Mat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                l[(row, i * n + k)] = f.add(l[(row, i * n + k)], a[(k, j)]);
                l[(row, k * n + j)] = f.sub(l[(row, k * n + j)], b[(i, k)]);
            }
        }
    }
    l
}

/// Basis of `{Phi in M_n : Phi a = b Phi}` as matrices.
pub fn intertwiner_basis(a: &Mat, b: &Mat, f: &FiniteField) -> Vec<Mat> {
    let n = a.rows();
    intertwiner_map(a, b, f).nullspace(f).0.into_iter().map(|v| Mat::from_data(n, n, v)).collect()
}

/// All `Phi` in the group with `Phi a = b Phi`, sorted by entries.
pub fn solve_intertwiners(group: &MatrixGroup, a: &Mat, b: &Mat, budget: u128) -> Result<Vec<Mat>> {
    let f = &group.field;
    let basis = intertwiner_basis(a, b, f);
    let size = f.size() as u128;
    let required = size.checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(AtlasError::BudgetExceeded { required, budget });
    }
    let n = a.rows();
    if basis.is_empty() {
        return Ok(vec![]);
    }
    // Split on the coefficient of the first basis vector.
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(f.size() as usize);
    let chunks: Vec<Vec<Fq>> =
        (0..workers).map(|w| f.elements().filter(|x| *x as usize % workers == w).collect()).collect();
    let mut out: Vec<Mat> = thread::scope(|s| {
        let handles: Vec<_> =
            chunks.iter().map(|firsts| s.spawn(|| enumerate_span(group, &basis, firsts, n))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    out.sort();
    Ok(out)
}

fn enumerate_span(group: &MatrixGroup, basis: &[Mat], firsts: &[Fq], n: usize) -> Vec<Mat> {
    let f = &group.field;
    let d = basis.len();
    let size = f.size();
    let mut out = Vec::new();
    let mut coeffs = vec![0 as Fq; d];
    for &first in firsts {
        coeffs.iter_mut().for_each(|c| *c = 0);
        coeffs[0] = first;
        loop {
            let mut data = vec![0 as Fq; n * n];
            for (c, b) in coeffs.iter().zip(basis) {
                if *c == 0 {
                    continue;
                }
                for (x, &y) in data.iter_mut().zip(b.data()) {
                    *x = f.add(*x, f.mul(*c, y));
                }
            }
            let m = Mat::from_data(n, n, data);
            if group.contains(&m) {
                out.push(m);
            }
            let mut i = 1;
            loop {
                if i == d {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < size {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    out
}

/// Solutions `Phi` of `Phi Fr(Sigma) Phi^-1 = Sigma^q`: empty, or a coset of the centralizer.
pub fn solve_commutant(group: &MatrixGroup, sigma: &Mat, q: u64, budget: u128) -> Result<Vec<Mat>> {
    group.check(sigma, "Sigma")?;
    let f = &group.field;
    solve_intertwiners(group, &group.frobenius(sigma), &sigma.pow(q, f), budget)
}

/// Centralizer of `Sigma` in the group.
pub fn centralizer(group: &MatrixGroup, sigma: &Mat, budget: u128) -> Result<Vec<Mat>> {
    group.check(sigma, "Sigma")?;
    solve_intertwiners(group, sigma, sigma, budget)
}

/// Whether `Phi Fr(Sigma) = Sigma^q Phi` holds exactly.
pub fn satisfies_commutation(group: &MatrixGroup, sigma: &Mat, phi: &Mat, q: u64) -> bool {
    let f = &group.field;
    phi.mul(&group.frobenius(sigma), f) == sigma.pow(q, f).mul(phi, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Preset;

    fn group(tag: &str, ell: u64, k: u32) -> MatrixGroup {
        MatrixGroup::new(Preset::parse(tag).unwrap(), FiniteField::new(ell, k).unwrap())
    }

    #[test]
    fn identity_sigma_gives_whole_group() {
        let g = group("SL2", 3, 1);
        let sols = solve_commutant(&g, &Mat::identity(2), 5, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(sols.len(), 24);
    }

    #[test]
    fn sl2_unipotent_needs_square_root_of_q() {
        let g5 = group("SL2", 5, 1);
        let u = Mat::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(solve_commutant(&g5, &u, 7, DEFAULT_ORACLE_BUDGET).unwrap().is_empty());
        let g25 = group("SL2", 5, 2);
        let sols = solve_commutant(&g25, &u, 7, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(sols.len(), 50);
        assert_eq!(centralizer(&g25, &u, DEFAULT_ORACLE_BUDGET).unwrap().len(), 50);
    }

    #[test]
    fn agrees_with_full_enumeration() {
        for (tag, ell) in [("GL2", 3), ("SL2", 3), ("SL2", 2), ("U2", 3)] {
            let g = group(tag, ell, 1);
            let all = g.elements(DEFAULT_ORACLE_BUDGET).unwrap();
            for sigma in all.iter().step_by(5) {
                for q in [2, 4, 5] {
                    if q % ell == 0 {
                        continue;
                    }
                    let mut brute: Vec<Mat> =
                        all.iter().filter(|phi| satisfies_commutation(&g, sigma, phi, q)).cloned().collect();
                    brute.sort();
                    assert_eq!(solve_commutant(&g, sigma, q, DEFAULT_ORACLE_BUDGET).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = group("GL2", 11, 1);
        let err = solve_commutant(&g, &Mat::identity(2), 3, 1000).unwrap_err();
        assert!(matches!(err, AtlasError::BudgetExceeded { required: 14641, budget: 1000 }));
    }

    #[test]
    fn rejects_non_members() {
        let g = group("SL2", 5, 1);
        let m = Mat::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(matches!(solve_commutant(&g, &m, 2, 100), Err(AtlasError::NotInGroup(_))));
    }
}
