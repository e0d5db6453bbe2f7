//! Standard Levi subgroups and the coverage report: which unipotent components are reached by
//! inducing Σ-regular parameters from a Frobenius-stable Levi.

use serde::{Deserialize, Serialize};

use crate::census::{census, partition_is_distinguished, CensusEntry, Partition, UnipotentClass};
use crate::error::{AtlasError, Result};
use crate::root_datum::{ArithmeticContext, Family, GroupDatum};

/// Block structure of a standard Levi. `gl_blocks` lists the `GL` factors along the first half
/// of the diagonal for `GSp` (each mirrored in the second half), or the full composition for
/// `GL`/`SL`/`U`; `core` is the size of the symplectic factor (0 if none).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockShape {
    pub gl_blocks: Vec<usize>,
    pub core: usize,
}

impl BlockShape {
    /// Block sizes along the whole diagonal.
    pub fn composition(&self, family: Family) -> Vec<usize> {
        match family {
            Family::GSp => {
                let mut c = self.gl_blocks.clone();
                if self.core > 0 {
                    c.push(self.core);
                }
                c.extend(self.gl_blocks.iter().rev());
                c
            }
            _ => self.gl_blocks.clone(),
        }
    }

    /// Jordan type of a regular unipotent element of the Levi.
    pub fn regular_partition(&self, family: Family) -> Partition {
        let mut parts = self.gl_blocks.clone();
        if family == Family::GSp {
            parts.extend(self.gl_blocks.iter());
            if self.core > 0 {
                parts.push(self.core);
            }
        }
        Partition::new(parts).expect("blocks are positive")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardLevi {
    /// Indices of simple roots, ascending.
    pub simple_root_subset: Vec<usize>,
    pub block_shape: BlockShape,
    pub gamma_stable: bool,
}

impl StandardLevi {
    pub fn composition(&self, family: Family) -> Vec<usize> {
        self.block_shape.composition(family)
    }
}

/// Lengths of maximal runs of consecutive coordinates joined by the roots in `subset`, over
/// `len` coordinates where root `i` joins coordinates `i` and `i + 1`.
fn runs(len: usize, subset: &[usize]) -> Vec<usize> {
    let mut blocks = vec![];
    let mut cur = 1;
    for i in 0..len.saturating_sub(1) {
        if subset.contains(&i) {
            cur += 1;
        } else {
            blocks.push(cur);
            cur = 1;
        }
    }
    if len > 0 {
        blocks.push(cur);
    }
    blocks
}

fn block_shape(datum: &GroupDatum, subset: &[usize]) -> BlockShape {
    match datum.preset.family {
        Family::GL | Family::SL | Family::U => BlockShape { gl_blocks: runs(datum.preset.n, subset), core: 0 },
        Family::GSp => {
            let m = datum.preset.symplectic_rank();
            let mut blocks = runs(m, subset);
            // The long root joins the last run to its mirror image.
            let core = if subset.contains(&(m - 1)) { 2 * blocks.pop().expect("m >= 1") } else { 0 };
            BlockShape { gl_blocks: blocks, core }
        }
    }
}

/// Every subset of simple roots, ordered by bitmask, with its block shape and Frobenius
/// stability.
pub fn standard_levis(datum: &GroupDatum) -> Vec<StandardLevi> {
    let r = datum.semisimple_rank();
    let perm = datum.frobenius_simple_permutation().expect("presets preserve the simple roots");
    (0u32..1 << r)
        .map(|mask| {
            let subset: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            let gamma_stable = subset.iter().all(|&i| subset.contains(&perm[i]));
            StandardLevi { block_shape: block_shape(datum, &subset), simple_root_subset: subset, gamma_stable }
        })
        .collect()
}

/// Whether the class is the Jordan type of a regular unipotent element of the Levi.
pub fn is_regular_in(datum: &GroupDatum, class: &UnipotentClass, levi: &StandardLevi) -> Result<bool> {
    if !levi.gamma_stable {
        return Err(AtlasError::LeviNotGammaStable { subset: levi.simple_root_subset.clone() });
    }
    if class.group != datum.preset {
        return Err(AtlasError::ClassMismatch { class: class.partition.to_string(), group: datum.preset.to_string() });
    }
    Ok(levi.block_shape.regular_partition(datum.preset.family) == class.partition)
}

pub fn is_distinguished(datum: &GroupDatum, class: &UnipotentClass) -> bool {
    partition_is_distinguished(datum.preset.family, &class.partition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageReason {
    RegularInLevi,
    DistinguishedNonRegular,
    TwistedClassNotReached,
    /// The class is regular in some standard Levi, but none of those is Frobenius-stable.
    NoGammaStableLevi,
}

impl CoverageReason {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverageReason::RegularInLevi => "regular-in-levi",
            CoverageReason::DistinguishedNonRegular => "distinguished-non-regular",
            CoverageReason::TwistedClassNotReached => "twisted-class-not-reached",
            CoverageReason::NoGammaStableLevi => "no-gamma-stable-levi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageVerdict {
    pub entry: CensusEntry,
    pub covered: bool,
    pub witness_levi: Option<StandardLevi>,
    pub reason: CoverageReason,
}

/// Whether the image of `pi_0(C_M(u))` in `pi_0(C_G(u))` contains the given twisted class.
/// For `SL` the center of the Levi surjects onto `mu_gcd`; for `GSp` the centralizer of a
/// regular unipotent in a Levi is connected, so only the identity class is reached unless the
/// Levi is the whole group (where `pi_0` is trivial anyway).
fn reaches_twisted_class(datum: &GroupDatum, entry: &CensusEntry) -> bool {
    match datum.preset.family {
        Family::SL => true,
        Family::GL | Family::U | Family::GSp => entry.twisted_index == 0,
    }
}

/// One verdict per census entry.
pub fn coverage_report(datum: &GroupDatum, ctx: &ArithmeticContext) -> Result<Vec<CoverageVerdict>> {
    let entries = census(datum, ctx)?;
    let levis = standard_levis(datum);
    let family = datum.preset.family;
    entries
        .into_iter()
        .map(|entry| {
            let part = &entry.class.partition;
            let matching: Vec<&StandardLevi> =
                levis.iter().filter(|l| l.block_shape.regular_partition(family) == *part).collect();
            // Prefer the lexicographically largest composition, i.e. blocks in decreasing order.
            let witness = matching
                .iter()
                .filter(|l| l.gamma_stable)
                .max_by(|a, b| a.composition(family).cmp(&b.composition(family)))
                .map(|l| (*l).clone());
            let (covered, reason) = match &witness {
                Some(_) if reaches_twisted_class(datum, &entry) => (true, CoverageReason::RegularInLevi),
                Some(_) => (false, CoverageReason::TwistedClassNotReached),
                None if entry.class.distinguished => (false, CoverageReason::DistinguishedNonRegular),
                None => (false, CoverageReason::NoGammaStableLevi),
            };
            Ok(CoverageVerdict { witness_levi: witness.filter(|_| covered), entry, covered, reason })
        })
        .collect()
}

/// Partitions in which at most one part value has odd multiplicity: exactly those that can be
/// laid out as a palindromic composition.
pub fn has_palindromic_arrangement(p: &Partition) -> bool {
    p.multiplicities().values().filter(|&&m| m % 2 == 1).count() <= 1
}
