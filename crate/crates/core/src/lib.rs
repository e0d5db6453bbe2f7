//! Computational core: root data of small reductive groups, Weyl-invariant rings and their
//! Frobenius-twisted fixed loci, unipotent census with component groups, Levi coverage, and
//! finite-field oracles.

pub mod census;
pub mod coverage;
pub mod error;
pub mod finite_field;
pub mod finite_group;
pub mod invariant_rings;
pub mod lattice;
pub mod laurent;
pub mod oracle;
pub mod root_datum;

pub use census::{
    census, component_group, partitions, twisted_class_count, unipotent_classes, CensusEntry, ComponentGroup,
    Partition, TwistedClasses, UnipotentClass,
};
pub use coverage::{
    coverage_report, is_distinguished, is_regular_in, standard_levis, BlockShape, CoverageReason, CoverageVerdict,
    StandardLevi,
};
pub use error::{AtlasError, Result};
pub use finite_field::{FiniteField, Fq};
pub use finite_group::{twisted_orbits, FiniteGroup};
pub use invariant_rings::{
    bg_presentation, count_points, fundamental_invariants, orbit_sum, rewrite_in_generators, InvariantGeneratorSet,
    PointCount, RingPresentation,
};
pub use lattice::{IntMatrix, Weight};
pub use laurent::LaurentPolynomial;
pub use root_datum::{build_group, build_preset, ArithmeticContext, Family, GroupDatum, Preset, WeylElement};
