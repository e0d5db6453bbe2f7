//! Jacobian-criterion probe of `Ch_Sigma` at Σ-regular points of the tame parameter variety for
//! `SL_2` and `GL_2`, using dual numbers for exact derivatives over the field.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::finite_field::{eval_laurent, FiniteField, Fq};
use crate::invariant_rings::bg_presentation;
use crate::oracle::commutant::solve_commutant;
use crate::oracle::matrix::{Mat, MatrixGroup};
use crate::root_datum::{build_preset, Family};

/// `re + eps * du` with `eps^2 = 0`.
#[derive(Clone, Debug)]
struct DualMat {
    re: Mat,
    du: Mat,
}

impl DualMat {
    fn mul(&self, o: &DualMat, f: &FiniteField) -> DualMat {
        DualMat { re: self.re.mul(&o.re, f), du: self.re.mul(&o.du, f).add(&self.du.mul(&o.re, f), f) }
    }

    fn pow(&self, mut e: u64, f: &FiniteField) -> DualMat {
        let n = self.re.rows();
        let mut acc = DualMat { re: Mat::identity(n), du: Mat::zeros(n, n) };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// `(det, d det)`; the derivative replaces one row at a time by the tangent row.
    fn det(&self, f: &FiniteField) -> (Fq, Fq) {
        let n = self.re.rows();
        let d = f.sum((0..n).map(|i| {
            let mut m = self.re.clone();
            for j in 0..n {
                m[(i, j)] = self.du[(i, j)];
            }
            m.det(f)
        }));
        (self.re.det(f), d)
    }

    fn trace(&self, f: &FiniteField) -> (Fq, Fq) {
        (self.re.trace(f), self.du.trace(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub equations: usize,
    pub variables: usize,
    pub jacobian_rank: usize,
    pub tangent_dim: usize,
    pub group_dim: usize,
    /// Dimension of the Zariski tangent space of `B_G` at `Ch(Sigma)`.
    pub base_tangent_dim: usize,
    /// Rank of `dCh` restricted to the tangent space of the variety.
    pub ch_rank: usize,
    pub submersive: bool,
}

/// Equations of the variety and the coordinates of `Ch`, as dual numbers along one direction.
/// Value and derivative of each equation component.
type DualEquations = Vec<(Fq, Fq)>;

fn equations(
    family: Family,
    q: u64,
    sigma: &DualMat,
    phi: &DualMat,
    f: &FiniteField,
) -> (DualEquations, DualEquations) {
    let lhs = phi.mul(sigma, f);
    let rhs = sigma.pow(q, f).mul(phi, f);
    let mut eqs: Vec<(Fq, Fq)> = lhs
        .re
        .data()
        .iter()
        .zip(rhs.re.data())
        .zip(lhs.du.data().iter().zip(rhs.du.data()))
        .map(|((&a, &b), (&da, &db))| (f.sub(a, b), f.sub(da, db)))
        .collect();
    let det_s = sigma.det(f);
    let ch = match family {
        Family::SL => {
            let det_p = phi.det(f);
            eqs.push((f.sub(det_s.0, 1), det_s.1));
            eqs.push((f.sub(det_p.0, 1), det_p.1));
            vec![sigma.trace(f)]
        }
        _ => vec![sigma.trace(f), det_s],
    };
    (eqs, ch)
}

/// Jacobian rank report at `(sigma, phi)`.
pub fn jacobian_probe(group: &MatrixGroup, q: u64, sigma: &Mat, phi: &Mat) -> Result<JacobianReport> {
    let family = group.preset.family;
    let n = group.dim();
    if n != 2 || !matches!(family, Family::SL | Family::GL) {
        return Err(AtlasError::InvalidInput(format!("jacobian probe supports SL2 and GL2, not {}", group.preset)));
    }
    let f = &group.field;
    group.check(sigma, "Sigma")?;
    group.check(phi, "Phi")?;
    if sigma.is_scalar() {
        return Err(AtlasError::NotRegular("Sigma is central".into()));
    }
    let nvars = 2 * n * n;
    let zero = Mat::zeros(n, n);
    let point = |k: Option<usize>| -> (DualMat, DualMat) {
        let mut ds = zero.clone();
        let mut dp = zero.clone();
        if let Some(k) = k {
            if k < n * n {
                ds[(k / n, k % n)] = 1;
            } else {
                dp[((k - n * n) / n, (k - n * n) % n)] = 1;
            }
        }
        (DualMat { re: sigma.clone(), du: ds }, DualMat { re: phi.clone(), du: dp })
    };
    let (s0, p0) = point(None);
    let (eq0, ch0) = equations(family, q, &s0, &p0, f);
    if eq0.iter().any(|e| e.0 != 0) {
        return Err(AtlasError::NotOnVariety("Phi Sigma Phi^-1 != Sigma^q".into()));
    }
    let neq = eq0.len();
    let nch = ch0.len();
    let mut jac = Mat::zeros(neq, nvars);
    let mut dch = Mat::zeros(nch, nvars);
    for k in 0..nvars {
        let (s, p) = point(Some(k));
        let (eqs, ch) = equations(family, q, &s, &p, f);
        for (i, e) in eqs.iter().enumerate() {
            jac[(i, k)] = e.1;
        }
        for (i, c) in ch.iter().enumerate() {
            dch[(i, k)] = c.1;
        }
    }
    let jacobian_rank = jac.rank(f);
    let tangent = jac.nullspace(f).0;
    let tangent_dim = tangent.len();
    let ch_rank = if tangent.is_empty() {
        0
    } else {
        let cols: Vec<Vec<Fq>> = tangent.iter().map(|v| dch.apply(v, f)).collect();
        Mat::from_rows(&cols).rank(f)
    };

    // Tangent space of B_G at b = Ch(Sigma).
    let datum = build_preset(group.preset)?;
    let pres = bg_presentation(&datum, q)?;
    let b: Vec<Fq> = ch0.iter().map(|c| c.0).collect();
    if pres.relations.iter().any(|r| eval_laurent(r, f, &b) != Some(0)) {
        return Err(AtlasError::NotOnVariety("Ch(Sigma) is not a point of B_G".into()));
    }
    let k = pres.ngens();
    let mut rel_jac = Mat::zeros(pres.relations.len(), k);
    for (i, r) in pres.relations.iter().enumerate() {
        for j in 0..k {
            rel_jac[(i, j)] = eval_laurent(&r.derivative(j), f, &b).expect("b has unit coordinates");
        }
    }
    let base_tangent_dim = k - rel_jac.rank(f);
    let group_dim = group.variety_dim();
    Ok(JacobianReport {
        equations: neq,
        variables: nvars,
        jacobian_rank,
        tangent_dim,
        group_dim,
        base_tangent_dim,
        ch_rank,
        submersive: tangent_dim == group_dim + base_tangent_dim && ch_rank == base_tangent_dim,
    })
}

/// Random non-central `Sigma` in the group with a random solution `Phi`, or `None` when the
/// drawn `Sigma` admits no solution.
pub fn construct_sample(group: &MatrixGroup, q: u64, rng: &mut ChaCha8Rng, budget: u128) -> Result<Option<(Mat, Mat)>> {
    let f = &group.field;
    let n = group.dim();
    let sigma = loop {
        let data: Vec<Fq> = (0..n * n).map(|_| rng.gen_range(0..f.size())).collect();
        let m = Mat::from_data(n, n, data);
        if group.contains(&m) && !m.is_scalar() {
            break m;
        }
    };
    let sols = solve_commutant(group, &sigma, q, budget)?;
    Ok(sols.choose(rng).cloned().map(|phi| (sigma, phi)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub attempts: usize,
    pub constructed: usize,
    pub submersive: usize,
    pub failures: Vec<JacobianReport>,
}

/// Probes `attempts` random samples.
pub fn probe_random(group: &MatrixGroup, q: u64, attempts: usize, seed: u64, budget: u128) -> Result<ProbeSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = ProbeSummary { attempts, constructed: 0, submersive: 0, failures: vec![] };
    for _ in 0..attempts {
        let Some((sigma, phi)) = construct_sample(group, q, &mut rng, budget)? else { continue };
        summary.constructed += 1;
        let rep = jacobian_probe(group, q, &sigma, &phi)?;
        if rep.submersive {
            summary.submersive += 1;
        } else {
            summary.failures.push(rep);
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Preset;

    fn group(tag: &str, p: u64) -> MatrixGroup {
        MatrixGroup::new(Preset::parse(tag).unwrap(), FiniteField::prime(p).unwrap())
    }

    #[test]
    fn sl2_unipotent_sample_is_submersive() {
        let g = group("SL2", 7);
        let u = Mat::from_rows(&[vec![1, 1], vec![0, 1]]);
        // q = 8 is 1 mod 7; Phi = I solves the equation.
        let rep = jacobian_probe(&g, 8, &u, &Mat::identity(2)).unwrap();
        assert!(rep.submersive, "{rep:?}");
        assert_eq!(rep.base_tangent_dim, 1);
        assert_eq!(rep.tangent_dim, 4);
    }

    #[test]
    fn central_sigma_is_rejected() {
        let g = group("SL2", 7);
        let err = jacobian_probe(&g, 8, &Mat::identity(2), &Mat::identity(2)).unwrap_err();
        assert!(matches!(err, AtlasError::NotRegular(_)));
    }

    #[test]
    fn off_variety_sample_is_rejected() {
        let g = group("GL2", 5);
        let s = Mat::diagonal(&[2, 3]);
        let err = jacobian_probe(&g, 2, &s, &Mat::identity(2)).unwrap_err();
        assert!(matches!(err, AtlasError::NotOnVariety(_)));
    }

    #[test]
    fn gl2_semisimple_sample() {
        let g = group("GL2", 5);
        // Sigma^3 = diag(3, 2), so the coordinate swap solves the equation.
        let s = Mat::diagonal(&[2, 3]);
        let phi = Mat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let rep = jacobian_probe(&g, 3, &s, &phi).unwrap();
        assert!(rep.submersive, "{rep:?}");
        assert_eq!(rep.group_dim, 4);
    }
}
