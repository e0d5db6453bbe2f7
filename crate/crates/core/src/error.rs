use thiserror::Error;

pub type Result<T, E = AtlasError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("unsupported preset {requested}; supported presets: {supported}")]
    UnsupportedPreset { requested: String, supported: String },

    #[error("invalid arithmetic context: {0}")]
    InvalidContext(String),

    #[error("polynomial is not Weyl-invariant: moved by the element with word {word:?}")]
    NotInvariant { word: Vec<usize> },

    #[error("rewriting failed to terminate ({0}); the generator set is inconsistent")]
    RewriteDiverged(String),

    #[error("enumeration budget exceeded: {required} candidates required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("twist is not an automorphism of the component group")]
    NotAnAutomorphism,

    #[error("class {class} does not belong to group {group}")]
    ClassMismatch { class: String, group: String },

    #[error("levi subgroup with simple roots {subset:?} is not stable under Frobenius")]
    LeviNotGammaStable { subset: Vec<usize> },

    #[error("no component detector is defined for {0}")]
    DetectorUndefined(String),

    #[error("matrix is not a point of the group: {0}")]
    NotInGroup(String),

    #[error("element is not in the Levi subgroup: {0}")]
    NotInLevi(String),

    #[error("sample is not on the parameter variety: {0}")]
    NotOnVariety(String),

    #[error("sample is not regular: {0}")]
    NotRegular(String),

    #[error("invalid finite field: {0}")]
    InvalidField(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
