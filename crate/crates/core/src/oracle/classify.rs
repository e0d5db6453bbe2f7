//! Component detectors: label solutions `Phi` by the component of the centralizer coset they
//! lie in.

use serde::{Deserialize, Serialize};

use crate::census::{component_group, Partition, UnipotentClass};
use crate::error::{AtlasError, Result};
use crate::finite_field::{FiniteField, Fq};
use crate::oracle::matrix::{Mat, MatrixGroup};
use crate::root_datum::{build_preset, prime_to_part, ArithmeticContext, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detector {
    /// Connected centralizer: a single label.
    Connected,
    /// `SL_2` regular unipotent: which square root of `q` `Phi` acts by on `ker(Sigma - 1)`.
    RegularUnipotentSl2,
    /// `GSp_4` class `(2,2)`: sign of `det(Phi | ker(Sigma - 1)) / (q nu(Phi))`, i.e. which
    /// component of the orthogonal group of the multiplicity space.
    PairedBlocksGsp4,
}

/// Jordan type of a unipotent matrix, or `None` if `sigma` is not unipotent.
pub fn jordan_type(sigma: &Mat, f: &FiniteField) -> Option<Partition> {
    let n = sigma.rows();
    let nil = sigma.sub(&Mat::identity(n), f);
    let mut ranks = vec![n];
    let mut power = Mat::identity(n);
    for _ in 0..n {
        power = power.mul(&nil, f);
        ranks.push(power.rank(f));
    }
    if ranks[n] != 0 {
        return None;
    }
    // Number of blocks of size >= k is rank(N^{k-1}) - rank(N^k).
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = vec![];
    for k in 1..=n {
        let next = at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, at_least[k - 1] - next));
    }
    Partition::new(parts).ok()
}

/// Detector for the centralizer component group of a unipotent `sigma`.
pub fn detector_for(group: &MatrixGroup, sigma: &Mat, q: u64) -> Result<Detector> {
    let f = &group.field;
    let partition =
        jordan_type(sigma, f).ok_or_else(|| AtlasError::DetectorUndefined("Sigma is not unipotent".into()))?;
    let datum = build_preset(group.preset)?;
    let class = UnipotentClass {
        regular: partition.len() == 1,
        distinguished: false,
        partition: partition.clone(),
        group: group.preset,
    };
    let ell = f.characteristic() as u64;
    let ctx = ArithmeticContext { q, ell: Some(ell) };
    let a = component_group(&datum, &class, &ctx).map_err(|e| AtlasError::DetectorUndefined(e.to_string()))?;
    let points = match &a {
        crate::census::ComponentGroup::Mu { d, .. } => prime_to_part(*d, Some(ell)),
        other => other.order(),
    };
    let n = group.dim();
    match (group.preset.family, n, partition.parts()) {
        _ if points == 1 => Ok(Detector::Connected),
        (Family::SL, 2, [2]) => Ok(Detector::RegularUnipotentSl2),
        (Family::GSp, 4, [2, 2]) => Ok(Detector::PairedBlocksGsp4),
        _ => Err(AtlasError::DetectorUndefined(format!(
            "{} class {partition} with component group {}",
            group.preset,
            a.describe()
        ))),
    }
}

/// Matrix of `phi` restricted to `ker(sigma - 1)`, in the kernel basis whose coordinates sit at
/// the free columns.
fn restrict_to_fixed_space(sigma: &Mat, phi: &Mat, f: &FiniteField) -> Mat {
    let n = sigma.rows();
    let (basis, free) = sigma.sub(&Mat::identity(n), f).nullspace(f);
    let d = basis.len();
    let mut r = Mat::zeros(d, d);
    for (j, v) in basis.iter().enumerate() {
        let image = phi.apply(v, f);
        for (i, &c) in free.iter().enumerate() {
            r[(i, j)] = image[c];
        }
    }
    r
}

/// Component label of one solution.
pub fn detect(detector: Detector, group: &MatrixGroup, sigma: &Mat, q: u64, phi: &Mat) -> Result<usize> {
    let f = &group.field;
    let qf = f.from_int(q as i64);
    match detector {
        Detector::Connected => Ok(0),
        Detector::RegularUnipotentSl2 => {
            let a = restrict_to_fixed_space(sigma, phi, f)[(0, 0)];
            f.sqrt_all(qf).iter().position(|&s| s == a).ok_or_else(|| {
                AtlasError::NotOnVariety("eigenvalue on the fixed line is not a square root of q".into())
            })
        }
        Detector::PairedBlocksGsp4 => {
            let det = restrict_to_fixed_space(sigma, phi, f).det(f);
            let nu = group.similitude(phi).ok_or_else(|| AtlasError::NotInGroup("Phi".into()))?;
            let sign = f.div(det, f.mul(qf, nu)).expect("nu and q are units");
            match sign {
                1 => Ok(0),
                s if s == f.neg(1) => Ok(1),
                _ => Err(AtlasError::NotOnVariety("determinant ratio is not a sign".into())),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistClassification {
    pub detector: Detector,
    /// Label per solution, aligned with the input.
    pub labels: Vec<usize>,
    /// Number of solutions carrying each label.
    pub class_sizes: Vec<usize>,
}

impl TwistClassification {
    pub fn class_count(&self) -> usize {
        self.class_sizes.iter().filter(|&&s| s > 0).count()
    }
}

/// Labels every solution of the commutation equation by its component class.
pub fn classify_twist(group: &MatrixGroup, sigma: &Mat, q: u64, solutions: &[Mat]) -> Result<TwistClassification> {
    let detector = detector_for(group, sigma, q)?;
    let labels = solutions.iter().map(|phi| detect(detector, group, sigma, q, phi)).collect::<Result<Vec<_>>>()?;
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut class_sizes = vec![0; classes];
    for &l in &labels {
        class_sizes[l] += 1;
    }
    Ok(TwistClassification { detector, labels, class_sizes })
}

/// Entries of the explicit `GSp_4` matrices: `u` of type `(2,2)` and the two Frobenius images
/// `diag(lambda q, lambda, q, 1)` and its antidiagonal-block partner.
pub fn gsp4_paired_examples(f: &FiniteField, q: u64, lambda: Fq) -> (Mat, Mat, Mat) {
    let u = Mat::from_ints(f, &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, -1], vec![0, 0, 0, 1]]);
    let qf = f.from_int(q as i64);
    let lq = f.mul(lambda, qf);
    let phi_a = Mat::diagonal(&[lq, lambda, qf, 1]);
    let mut phi_b = Mat::zeros(4, 4);
    phi_b[(0, 2)] = f.neg(lq);
    phi_b[(1, 3)] = lambda;
    phi_b[(2, 0)] = f.neg(qf);
    phi_b[(3, 1)] = 1;
    (u, phi_a, phi_b)
}
