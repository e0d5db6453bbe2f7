//! Root data of the preset groups, their Weyl groups as lattice automorphism groups, and the
//! Frobenius action on the character lattice.
//!
//! All lattices use dense coordinates in a fixed standard basis of diagonal-torus characters:
//!
//! * `GL_n`, `U_n`: `X*(T) = Z^n`, basis `e_1..e_n`.
//! * `SL_n`: `X*(T) = Z^n / Z(1,..,1)` with basis the images of `e_1..e_{n-1}`
//!   (so `e_n = -(e_1 + .. + e_{n-1})`).
//! * `GSp_2m`: torus `diag(t_1..t_m, nu/t_m..nu/t_1)`, basis `e_1..e_m, nu` with the similitude
//!   character last.
//!
//! Coroots are stored in the dual basis, so the pairing is the standard dot product.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::lattice::{pairing, IntMatrix, Weight};

/// Preset family tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    GSp,
    U,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::GSp => "GSp",
            Family::U => "U",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        match name.to_ascii_lowercase().as_str() {
            "gl" => Some(Family::GL),
            "sl" => Some(Family::SL),
            "gsp" => Some(Family::GSp),
            "u" => Some(Family::U),
            _ => None,
        }
    }

    /// Symplectic-type families label unipotent classes by symplectic partitions of `n`.
    pub fn is_symplectic(self) -> bool {
        self == Family::GSp
    }
}

/// A supported `(family, n)` pair, with `n` the size of the defining matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Preset {
    pub family: Family,
    pub n: usize,
}

pub const SUPPORTED_PRESETS: &str = "GL_n (n>=1), SL_n (n>=2), GSp_4, GSp_6, U_n (n>=2)";

impl Preset {
    pub fn new(family: Family, n: usize) -> Result<Preset> {
        let ok = match family {
            Family::GL => n >= 1,
            Family::SL | Family::U => n >= 2,
            Family::GSp => n == 4 || n == 6,
        };
        if ok {
            Ok(Preset { family, n })
        } else {
            Err(unsupported(&format!("{}{}", family.tag(), n)))
        }
    }

    /// Parses compact tags such as `gl3`, `sl2`, `gsp4`, `u3` (case-insensitive, optional `_`).
    pub fn parse(tag: &str) -> Result<Preset> {
        let t = tag.trim().to_ascii_lowercase().replace('_', "");
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(|| unsupported(tag))?;
        let (name, digits) = t.split_at(split);
        let family = Family::parse(name).ok_or_else(|| unsupported(tag))?;
        let n: usize = digits.parse().map_err(|_| unsupported(tag))?;
        Preset::new(family, n).map_err(|_| unsupported(tag))
    }

    /// Half the matrix size for symplectic presets.
    pub fn symplectic_rank(self) -> usize {
        self.n / 2
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.tag(), self.n)
    }
}

fn unsupported(requested: &str) -> AtlasError {
    AtlasError::UnsupportedPreset { requested: requested.to_string(), supported: SUPPORTED_PRESETS.to_string() }
}

/// Root datum with Frobenius action for a preset reductive group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDatum {
    pub preset: Preset,
    pub torus_rank: usize,
    /// Roots; the first half are the positive roots, the second half their negatives.
    pub roots: Vec<Weight>,
    /// Coroots in the dual basis, index-aligned with `roots`.
    pub coroots: Vec<Weight>,
    /// Indices into `roots` of the simple roots, in Dynkin order.
    pub simple_roots: Vec<usize>,
    pub gamma_order: u8,
    /// Fr* on the character lattice, acting on column vectors.
    pub frobenius_dual: IntMatrix,
}

/// Element of the Weyl group: a lattice automorphism together with a reduced word in the
/// simple reflections (indices into `GroupDatum::simple_roots`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn apply(&self, v: &[i64]) -> Weight {
        self.matrix.apply(v)
    }
}

/// The pair `(q, ell)`: residue field size and the coefficient characteristic of interest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticContext {
    pub q: u64,
    pub ell: Option<u64>,
}

impl ArithmeticContext {
    pub fn new(q: u64, ell: Option<u64>) -> Result<ArithmeticContext> {
        if q < 2 {
            return Err(AtlasError::InvalidContext(format!("q = {q} must be at least 2")));
        }
        let p =
            prime_power_base(q).ok_or_else(|| AtlasError::InvalidContext(format!("q = {q} is not a prime power")))?;
        if let Some(l) = ell {
            if !is_prime(l) {
                return Err(AtlasError::InvalidContext(format!("ell = {l} is not prime")));
            }
            if l == p {
                return Err(AtlasError::InvalidContext(format!("ell = {l} divides q = {q}")));
            }
        }
        Ok(ArithmeticContext { q, ell })
    }

    /// Largest divisor of `d` prime to `ell` (all of `d` in characteristic zero).
    pub fn prime_to_ell_part(&self, d: u64) -> u64 {
        prime_to_part(d, self.ell)
    }
}

pub fn prime_to_part(mut d: u64, ell: Option<u64>) -> u64 {
    if let Some(l) = ell {
        while d > 0 && d.is_multiple_of(l) {
            d /= l;
        }
    }
    d
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime `p` with `q = p^k`, if `q` is a prime power.
pub fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

fn unit(dim: usize, i: usize) -> Weight {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

fn sub(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

/// Builds the datum for a preset; `name` is a family tag (`GL`, `SL`, `GSp`, `U`).
pub fn build_group(name: &str, n: usize) -> Result<GroupDatum> {
    let family = Family::parse(name).ok_or_else(|| unsupported(&format!("{name}{n}")))?;
    build_preset(Preset::new(family, n)?)
}

pub fn build_preset(preset: Preset) -> Result<GroupDatum> {
    let n = preset.n;
    let (torus_rank, pos, simple, frob) = match preset.family {
        Family::GL | Family::U => {
            let mut pos = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let r = sub(&unit(n, i), &unit(n, j));
                    pos.push((r.clone(), r));
                }
            }
            let simple: Vec<Weight> = (0..n - 1).map(|i| sub(&unit(n, i), &unit(n, i + 1))).collect();
            let frob = if preset.family == Family::U {
                // e_i -> -e_{n+1-i}: the diagonal torus under g -> J g^{-T} J^{-1}.
                let mut m = IntMatrix::zeros(n, n);
                for i in 0..n {
                    m[(n - 1 - i, i)] = -1;
                }
                m
            } else {
                IntMatrix::identity(n)
            };
            (n, pos, simple, frob)
        }
        Family::SL => {
            let d = n - 1;
            let e = |i: usize| if i < d { unit(d, i) } else { vec![-1; d] };
            let co = |i: usize, j: usize| {
                let mut v = vec![0; d];
                if i < d {
                    v[i] += 1;
                }
                if j < d {
                    v[j] -= 1;
                }
                v
            };
            let mut pos = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    pos.push((sub(&e(i), &e(j)), co(i, j)));
                }
            }
            let simple = (0..n - 1).map(|i| sub(&e(i), &e(i + 1))).collect();
            (d, pos, simple, IntMatrix::identity(d))
        }
        Family::GSp => {
            let m = preset.symplectic_rank();
            let d = m + 1;
            let nu = unit(d, m);
            let e = |i: usize| unit(d, i);
            let mut pos = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    pos.push((sub(&e(i), &e(j)), sub(&e(i), &e(j))));
                    pos.push((sub(&add(&e(i), &e(j)), &nu), add(&e(i), &e(j))));
                }
                let two_ei: Weight = e(i).iter().map(|x| 2 * x).collect();
                pos.push((sub(&two_ei, &nu), e(i)));
            }
            let mut simple: Vec<Weight> = (0..m - 1).map(|i| sub(&e(i), &e(i + 1))).collect();
            let two_em: Weight = e(m - 1).iter().map(|x| 2 * x).collect();
            simple.push(sub(&two_em, &nu));
            (d, pos, simple, IntMatrix::identity(d))
        }
    };
    let mut roots: Vec<Weight> = pos.iter().map(|(r, _)| r.clone()).collect();
    let mut coroots: Vec<Weight> = pos.iter().map(|(_, c)| c.clone()).collect();
    roots.extend(pos.iter().map(|(r, _)| neg(r)));
    coroots.extend(pos.iter().map(|(_, c)| neg(c)));
    let simple_roots =
        simple.iter().map(|s| roots.iter().position(|r| r == s).expect("simple root is a root")).collect();
    Ok(GroupDatum {
        preset,
        torus_rank,
        roots,
        coroots,
        simple_roots,
        gamma_order: if preset.family == Family::U { 2 } else { 1 },
        frobenius_dual: frob,
    })
}

impl GroupDatum {
    pub fn rank_n(&self) -> usize {
        self.preset.n
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.roots[..self.roots.len() / 2]
    }

    pub fn positive_coroots(&self) -> &[Weight] {
        &self.coroots[..self.coroots.len() / 2]
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.roots[self.simple_roots[i]]
    }

    pub fn simple_coroot(&self, i: usize) -> &Weight {
        &self.coroots[self.simple_roots[i]]
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Matrix of `x -> x - <x, a^vee> a` for the root with index `root`.
    pub fn reflection(&self, root: usize) -> IntMatrix {
        let a = &self.roots[root];
        let c = &self.coroots[root];
        let mut m = IntMatrix::identity(self.torus_rank);
        for i in 0..self.torus_rank {
            for j in 0..self.torus_rank {
                m[(i, j)] -= a[i] * c[j];
            }
        }
        m
    }

    pub fn simple_reflection(&self, i: usize) -> IntMatrix {
        self.reflection(self.simple_roots[i])
    }

    pub fn is_dominant(&self, weight: &[i64]) -> bool {
        (0..self.semisimple_rank()).all(|i| pairing(weight, self.simple_coroot(i)) >= 0)
    }

    /// `<weight, 2 rho^vee>`; strictly increasing along the dominance order.
    pub fn height(&self, weight: &[i64]) -> i64 {
        self.positive_coroots().iter().map(|c| pairing(weight, c)).sum()
    }

    /// `|W|` from the classical order formula for the type.
    pub fn weyl_order_formula(&self) -> usize {
        let factorial = |k: usize| (1..=k).product::<usize>();
        match self.preset.family {
            Family::GL | Family::SL | Family::U => factorial(self.preset.n),
            Family::GSp => {
                let m = self.preset.symplectic_rank();
                (1usize << m) * factorial(m)
            }
        }
    }

    /// Permutation of simple-root indices induced by Fr*; `None` if Fr* does not preserve the
    /// set of simple roots.
    pub fn frobenius_simple_permutation(&self) -> Option<Vec<usize>> {
        (0..self.semisimple_rank())
            .map(|i| {
                let image = self.frobenius_dual.apply(self.simple_root(i));
                (0..self.semisimple_rank()).find(|&j| self.simple_root(j) == &image)
            })
            .collect()
    }

    /// Lattice-basis matrix of the fundamental weights of the derived group together with a
    /// basis of the central characters. Every preset has simply connected derived group, so
    /// these weights form a Z-basis of the character lattice.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let d = self.torus_rank;
        let prefix = |k: usize| -> Weight { (0..d).map(|i| i64::from(i < k)).collect() };
        match self.preset.family {
            Family::GL | Family::U => (1..=self.preset.n).map(prefix).collect(),
            Family::SL => (1..self.preset.n).map(prefix).collect(),
            Family::GSp => {
                let m = self.preset.symplectic_rank();
                let mut w: Vec<Weight> = (1..=m).map(prefix).collect();
                w.push(unit(d, m));
                w
            }
        }
    }

    /// Index of the root equal to `v`, if any.
    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }
}

/// All Weyl group elements by breadth-first closure over the simple reflections; words are
/// reduced because BFS reaches each element first at its minimal length.
pub fn weyl_elements(datum: &GroupDatum) -> Vec<WeylElement> {
    let gens: Vec<IntMatrix> = (0..datum.semisimple_rank()).map(|i| datum.simple_reflection(i)).collect();
    let id = IntMatrix::identity(datum.torus_rank);
    let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
    let mut out = vec![WeylElement { matrix: id.clone(), word: vec![] }];
    seen.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for (i, s) in gens.iter().enumerate() {
            let m = out[idx].matrix.mul(s);
            if seen.contains_key(&m) {
                continue;
            }
            let mut word = out[idx].word.clone();
            word.push(i);
            seen.insert(m.clone(), out.len());
            queue.push_back(out.len());
            out.push(WeylElement { matrix: m, word });
        }
    }
    out
}

/// Fr* on the character lattice (identity for split presets).
pub fn frobenius_on_lattice(datum: &GroupDatum) -> IntMatrix {
    datum.frobenius_dual.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_examples() {
        let gl3 = build_group("GL", 3).unwrap();
        assert_eq!((gl3.torus_rank, gl3.roots.len(), weyl_elements(&gl3).len()), (3, 6, 6));
        let gsp4 = build_group("GSp", 4).unwrap();
        assert_eq!((gsp4.torus_rank, gsp4.roots.len(), weyl_elements(&gsp4).len()), (3, 8, 8));
        assert_eq!(weyl_elements(&build_group("SL", 2).unwrap()).len(), 2);
    }

    #[test]
    fn unitary_frobenius_is_reversal_negation() {
        // diag(t) -> J diag(t)^{-T} J^{-1} = diag(t_3^{-1}, t_2^{-1}, t_1^{-1}), so the character
        // e_i pulls back to -e_{4-i}.
        let u3 = build_group("U", 3).unwrap();
        let expected = IntMatrix::from_rows(&[vec![0, 0, -1], vec![0, -1, 0], vec![-1, 0, 0]]);
        assert_eq!(frobenius_on_lattice(&u3), expected);
        assert!(u3.frobenius_dual.mul(&u3.frobenius_dual).is_identity());
        let u2 = build_group("U", 2).unwrap();
        assert_eq!(u2.frobenius_dual.apply(&[1, 0]), vec![0, -1]);
        assert_eq!(u2.frobenius_dual.apply(&[0, 1]), vec![-1, 0]);
        assert!(frobenius_on_lattice(&build_group("GL", 4).unwrap()).is_identity());
    }

    #[test]
    fn unsupported_presets_are_rejected() {
        for (name, n) in [("SL", 1), ("GSp", 8), ("GSp", 3), ("E", 8), ("U", 1), ("GL", 0)] {
            let err = build_group(name, n).unwrap_err();
            assert!(matches!(err, AtlasError::UnsupportedPreset { .. }), "{name}{n}");
            assert!(err.to_string().contains("GSp_4"));
        }
    }

    #[test]
    fn preset_tags_parse() {
        assert_eq!(Preset::parse("gsp4").unwrap(), Preset { family: Family::GSp, n: 4 });
        assert_eq!(Preset::parse("GL_3").unwrap(), Preset { family: Family::GL, n: 3 });
        assert!(Preset::parse("sp4").is_err());
        assert!(Preset::parse("gl").is_err());
    }

    #[test]
    fn context_validation() {
        assert!(ArithmeticContext::new(9, Some(2)).is_ok());
        assert!(ArithmeticContext::new(9, Some(3)).is_err());
        assert!(ArithmeticContext::new(6, None).is_err());
        assert!(ArithmeticContext::new(1, None).is_err());
        assert!(ArithmeticContext::new(4, Some(9)).is_err());
        let ctx = ArithmeticContext::new(3, Some(2)).unwrap();
        assert_eq!(ctx.prime_to_ell_part(12), 3);
    }
}
