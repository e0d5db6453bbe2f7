//! Validated run configuration shared by all subcommands.

use clap::{Args, ValueEnum};
use param_atlas_core::oracle::DEFAULT_ORACLE_BUDGET;
use param_atlas_core::root_datum::{is_prime, prime_power_base};
use param_atlas_core::{build_preset, ArithmeticContext, AtlasError, FiniteField, GroupDatum, Preset, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Group preset: gl<n>, sl<n>, gsp4, gsp6, u<n>.
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Residue field size (a prime power).
    #[arg(long, global = true, default_value_t = 3)]
    pub q: u64,

    /// Coefficient characteristic; also the field characteristic for oracle commands.
    #[arg(long, global = true)]
    pub ell: Option<u64>,

    /// Degree k of the oracle field F_{ell^k}.
    #[arg(long, global = true)]
    pub field_degree: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,

    /// Cap on exhaustive enumerations.
    #[arg(long, global = true, env = "PARAM_ATLAS_BUDGET", default_value_t = DEFAULT_ORACLE_BUDGET as u64)]
    pub budget: u64,

    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub group: Option<Preset>,
    pub q: u64,
    pub ell: Option<u64>,
    pub field_degree: Option<u32>,
    pub output: OutputFormat,
    pub budget: u128,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &GlobalArgs) -> Result<RunConfig> {
        let group = args.group.as_deref().map(Preset::parse).transpose()?;
        if args.q < 2 || prime_power_base(args.q).is_none() {
            return Err(AtlasError::InvalidContext(format!("q = {} is not a prime power", args.q)));
        }
        if let Some(l) = args.ell {
            if !is_prime(l) {
                return Err(AtlasError::InvalidContext(format!("ell = {l} is not prime")));
            }
        }
        if args.budget == 0 {
            return Err(AtlasError::InvalidContext("budget must be at least 1".into()));
        }
        if args.field_degree == Some(0) {
            return Err(AtlasError::InvalidContext("field degree must be at least 1".into()));
        }
        Ok(RunConfig {
            group,
            q: args.q,
            ell: args.ell,
            field_degree: args.field_degree,
            output: args.output,
            budget: args.budget as u128,
            seed: args.seed,
        })
    }

    pub fn preset(&self) -> Result<Preset> {
        self.group.ok_or_else(|| AtlasError::InvalidInput("--group is required for this command".into()))
    }

    pub fn datum(&self) -> Result<GroupDatum> {
        build_preset(self.preset()?)
    }

    /// `(q, ell)` with `ell` coprime to `q`.
    pub fn context(&self) -> Result<ArithmeticContext> {
        ArithmeticContext::new(self.q, self.ell)
    }

    /// The oracle field `F_{ell^k}`; `ell` must be given and coprime to `q`.
    pub fn field(&self) -> Result<FiniteField> {
        let ell = self.ell.ok_or_else(|| AtlasError::InvalidInput("--ell is required for this command".into()))?;
        self.context()?;
        FiniteField::new(ell, self.field_degree.unwrap_or(1))
    }
}
