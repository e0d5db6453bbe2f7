//! Unipotent classes, their centralizer component groups, and the twisted conjugacy classes
//! that index unipotent irreducible components.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::finite_group::{abelian_elements, abelian_label, twisted_orbits, FiniteGroup};
use crate::lattice::{hermite_basis, IntMatrix};
use crate::root_datum::{ArithmeticContext, Family, GroupDatum, Preset};

/// Cap on the size of an abelian component group enumerated to check that a twist is bijective.
const MAX_ENUMERATED_ORDER: u64 = 1 << 20;

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(AtlasError::InvalidInput(format!("{parts:?} is not a partition")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part -> multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_default() += 1;
        }
        m
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &p| g.gcd(&p))
    }

    /// Every odd part occurs an even number of times.
    pub fn is_symplectic(&self) -> bool {
        self.multiplicities().iter().all(|(&p, &m)| p % 2 == 0 || m % 2 == 0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for first in (1..=n.min(max)).rev() {
            prefix.push(first);
            go(n - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnipotentClass {
    pub partition: Partition,
    pub group: Preset,
    pub regular: bool,
    pub distinguished: bool,
}

impl UnipotentClass {
    /// `rank(u - 1)`.
    pub fn rank(&self) -> usize {
        self.partition.total() - self.partition.len()
    }
}

/// Distinguished in the full group: a single Jordan block for `GL`/`SL`/`U`; pairwise distinct
/// even parts for `GSp`.
pub fn partition_is_distinguished(family: Family, p: &Partition) -> bool {
    match family {
        Family::GL | Family::SL | Family::U => p.len() == 1,
        Family::GSp => p.parts().iter().all(|x| x % 2 == 0) && p.multiplicities().values().all(|&m| m == 1),
    }
}

/// Jordan types of unipotent elements, in decreasing lexicographic order of partitions.
pub fn unipotent_classes(datum: &GroupDatum) -> Vec<UnipotentClass> {
    let family = datum.preset.family;
    partitions(datum.preset.n)
        .into_iter()
        .filter(|p| family != Family::GSp || p.is_symplectic())
        .map(|p| UnipotentClass {
            regular: p.len() == 1,
            distinguished: partition_is_distinguished(family, &p),
            partition: p,
            group: datum.preset,
        })
        .collect()
}

/// Component group of a centralizer together with the Frobenius twist acting on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentGroup {
    Trivial,
    /// `mu_d`, twisted by `z -> z^twist`.
    Mu {
        d: u64,
        twist: u64,
    },
    /// `Z/d_1 x ... x Z/d_k`, twisted by an integer matrix acting on coordinate vectors.
    Abelian {
        moduli: Vec<u64>,
        twist: IntMatrix,
    },
    /// Multiplication table, twisted by a permutation of elements.
    Explicit {
        group: FiniteGroup,
        twist: Vec<usize>,
    },
}

impl ComponentGroup {
    pub fn order(&self) -> u64 {
        match self {
            ComponentGroup::Trivial => 1,
            ComponentGroup::Mu { d, .. } => *d,
            ComponentGroup::Abelian { moduli, .. } => moduli.iter().product(),
            ComponentGroup::Explicit { group, .. } => group.order() as u64,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ComponentGroup::Trivial => "trivial".into(),
            ComponentGroup::Mu { d, .. } => format!("mu_{d}"),
            ComponentGroup::Abelian { moduli, .. } => {
                moduli.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
            }
            ComponentGroup::Explicit { group, .. } => group.name.clone(),
        }
    }
}

/// Twisted conjugacy classes: count and one representative label per class, identity first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedClasses {
    pub count: usize,
    pub representatives: Vec<String>,
}

/// Orbits of `a -> g a phi(g)^-1`. For `mu_d` with a coefficient characteristic `ell`, only the
/// prime-to-`ell` points are counted.
pub fn twisted_class_count(a: &ComponentGroup, ctx: Option<&ArithmeticContext>) -> Result<TwistedClasses> {
    match a {
        ComponentGroup::Trivial => Ok(TwistedClasses { count: 1, representatives: vec!["1".into()] }),
        ComponentGroup::Mu { d, twist } => {
            if *d == 0 || twist.gcd(d) != 1 {
                return Err(AtlasError::NotAnAutomorphism);
            }
            let points = ctx.map_or(*d, |c| c.prime_to_ell_part(*d));
            let g = points.gcd(&((twist + points - 1) % points)) as usize;
            let reps = (0..g)
                .map(|k| match k {
                    0 => "1".to_string(),
                    1 => "z".to_string(),
                    k => format!("z^{k}"),
                })
                .collect();
            Ok(TwistedClasses { count: g, representatives: reps })
        }
        ComponentGroup::Abelian { moduli, twist } => abelian_twisted_classes(moduli, twist),
        ComponentGroup::Explicit { group, twist } => {
            if !group.is_automorphism(twist) {
                return Err(AtlasError::NotAnAutomorphism);
            }
            let orbits = twisted_orbits(group, twist);
            let reps = orbits.iter().map(|o| group.label(o[0]).to_string()).collect();
            Ok(TwistedClasses { count: orbits.len(), representatives: reps })
        }
    }
}

/// The abelian component group `Z/d_1 x ... x Z/d_k` with the twist given as a permutation of
/// the elements of `FiniteGroup::abelian(moduli)`.
pub fn abelian_with_permutation(moduli: &[usize], perm: &[usize]) -> Result<ComponentGroup> {
    let elems = abelian_elements(moduli);
    if perm.len() != elems.len() {
        return Err(AtlasError::NotAnAutomorphism);
    }
    let k = moduli.len();
    let mut twist = IntMatrix::zeros(k, k);
    for j in 0..k {
        let unit: Vec<usize> = (0..k).map(|i| usize::from(i == j) % moduli[i]).collect();
        let idx = elems.iter().position(|e| *e == unit).expect("unit vector is an element");
        let image = elems.get(perm[idx]).ok_or(AtlasError::NotAnAutomorphism)?;
        for i in 0..k {
            twist[(i, j)] = image[i] as i64;
        }
    }
    Ok(ComponentGroup::Abelian { moduli: moduli.iter().map(|&d| d as u64).collect(), twist })
}

/// `coker(1 - phi)` on `Z^k / diag(d)`, via a Hermite basis of the relation lattice.
fn abelian_twisted_classes(moduli: &[u64], twist: &IntMatrix) -> Result<TwistedClasses> {
    let k = moduli.len();
    if twist.rows() != k || twist.cols() != k || moduli.contains(&0) {
        return Err(AtlasError::NotAnAutomorphism);
    }
    let reduce =
        |v: &[i64]| -> Vec<usize> { v.iter().zip(moduli).map(|(&x, &d)| x.rem_euclid(d as i64) as usize).collect() };
    // Well defined: phi(d_j e_j) must vanish.
    for j in 0..k {
        let col: Vec<i64> = (0..k).map(|i| twist[(i, j)] * moduli[j] as i64).collect();
        if reduce(&col).iter().any(|&x| x != 0) {
            return Err(AtlasError::NotAnAutomorphism);
        }
    }
    let order: u64 = moduli.iter().product();
    if order > MAX_ENUMERATED_ORDER {
        return Err(AtlasError::BudgetExceeded { required: order as u128, budget: MAX_ENUMERATED_ORDER as u128 });
    }
    let usize_moduli: Vec<usize> = moduli.iter().map(|&d| d as usize).collect();
    let mut images = std::collections::HashSet::new();
    for e in abelian_elements(&usize_moduli) {
        let v: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        images.insert(reduce(&twist.apply(&v)));
    }
    if images.len() as u64 != order {
        return Err(AtlasError::NotAnAutomorphism);
    }
    let mut gens: Vec<Vec<i64>> =
        (0..k).map(|i| (0..k).map(|r| if r == i { moduli[i] as i64 } else { 0 }).collect()).collect();
    for j in 0..k {
        gens.push((0..k).map(|i| i64::from(i == j) - twist[(i, j)]).collect());
    }
    let diag: Vec<usize> = hermite_basis(k, &gens).into_iter().map(|(h, _)| h as usize).collect();
    // A lower-triangular basis makes the box prod [0, h_i) a transversal.
    let reps: Vec<String> = abelian_elements(&diag)
        .into_iter()
        .map(|box_vec| {
            let v: Vec<i64> = box_vec.iter().map(|&x| x as i64).collect();
            abelian_label(&reduce(&v))
        })
        .collect();
    Ok(TwistedClasses { count: reps.len(), representatives: reps })
}

/// Component group of the centralizer of a unipotent of the given class, with identity twist.
pub fn component_group(datum: &GroupDatum, class: &UnipotentClass, ctx: &ArithmeticContext) -> Result<ComponentGroup> {
    let family = datum.preset.family;
    if class.group != datum.preset
        || class.partition.total() != datum.preset.n
        || (family == Family::GSp && !class.partition.is_symplectic())
    {
        return Err(AtlasError::ClassMismatch { class: class.partition.to_string(), group: datum.preset.to_string() });
    }
    match family {
        Family::GL | Family::U => Ok(ComponentGroup::Trivial),
        Family::SL => match class.partition.gcd() as u64 {
            1 => Ok(ComponentGroup::Trivial),
            d => Ok(ComponentGroup::Mu { d, twist: 1 }),
        },
        Family::GSp => {
            if ctx.ell == Some(2) {
                return Err(AtlasError::InvalidContext("ell = 2 is not supported for symplectic presets".into()));
            }
            // One Z/2 per distinct even part; the center -1 maps to the parities of the
            // multiplicities of those parts.
            let evens: Vec<usize> =
                class.partition.multiplicities().into_iter().filter(|(p, _)| p % 2 == 0).map(|(_, m)| m).collect();
            let center_nontrivial = evens.iter().any(|m| m % 2 == 1);
            let rank = evens.len() - usize::from(center_nontrivial);
            Ok(match rank {
                0 => ComponentGroup::Trivial,
                r => {
                    let group = FiniteGroup::abelian(&vec![2; r]);
                    let twist = group.identity_map();
                    ComponentGroup::Explicit { group, twist }
                }
            })
        }
    }
}

/// One unipotent irreducible component: a class together with a twisted conjugacy class of its
/// component group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub class: UnipotentClass,
    pub component_group: ComponentGroup,
    pub twisted_class: String,
    /// Position of the twisted class among the representatives; 0 is the identity class.
    pub twisted_index: usize,
    pub label: String,
    pub context: ArithmeticContext,
}

/// All unipotent components, ordered by `rank(u - 1)`. Ranks shared by several entries get
/// letter suffixes, identity twisted class first.
pub fn census(datum: &GroupDatum, ctx: &ArithmeticContext) -> Result<Vec<CensusEntry>> {
    let mut classes = unipotent_classes(datum);
    classes.sort_by_key(|c| c.rank());
    let mut entries = Vec::new();
    for class in classes {
        let a = component_group(datum, &class, ctx)?;
        let tc = twisted_class_count(&a, Some(ctx))?;
        for (i, rep) in tc.representatives.into_iter().enumerate() {
            entries.push(CensusEntry {
                class: class.clone(),
                component_group: a.clone(),
                twisted_class: rep,
                twisted_index: i,
                label: String::new(),
                context: *ctx,
            });
        }
    }
    let mut by_rank: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &entries {
        *by_rank.entry(e.class.rank()).or_default() += 1;
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &mut entries {
        let r = e.class.rank();
        let k = seen.entry(r).or_default();
        e.label = if by_rank[&r] > 1 { format!("C_{r}{}", letter_suffix(*k)) } else { format!("C_{r}") };
        *k += 1;
    }
    Ok(entries)
}

/// A, B, ..., Z, AA, AB, ...
fn letter_suffix(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}
