//! File formats, report rendering and the command-line front end for
//! `entrofunc-core`.
//!
//! Flow specs and bridge cases are JSON ([`spec`]); [`load`] turns them into
//! core objects, [`run`] evaluates them and [`report`] renders deterministic
//! JSON and TSV.

pub mod cli;
pub mod load;
pub mod report;
pub mod run;
pub mod spec;

use std::fmt;

use entrofunc_core::semigroup::{Budget, EntropyConfig};

use crate::spec::Params;

/// Exit status of a failed invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input: exit code 2.
    Spec(String),
    /// A resource ceiling was hit: exit code 3.
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn spec(msg: impl Into<String>) -> Self {
        CliError::Spec(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Spec(m) => write!(f, "spec error: {m}"),
            CliError::Cap(m) => write!(f, "resource cap: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<entrofunc_core::Error> for CliError {
    fn from(e: entrofunc_core::Error) -> Self {
        match e {
            entrofunc_core::Error::Cap(m) => CliError::Cap(m),
            other => CliError::Spec(other.to_string()),
        }
    }
}

/// Command-line settings that take precedence over a spec's `params`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub n_max: Option<usize>,
    pub window: Option<usize>,
    pub cap_bits: Option<u64>,
    /// Memory ceiling in MiB, from `ENTROFUNC_CAP_MB`.
    pub cap_mb: Option<u64>,
}

pub const DEFAULT_N_MAX: usize = 32;

/// Engine configuration from spec parameters and overrides.  A memory
/// ceiling of `M` MiB bounds element size by `8M` Mibit, cardinalities by
/// `M·2^16` and enumerated words by `M·2^14` (about 64 bytes per word).
pub fn config(params: &Params, o: &Overrides) -> EntropyConfig {
    let mut b = Budget::default();
    let caps = &params.caps;
    if let Some(x) = caps.max_elem_bits {
        b.max_elem_bits = x;
    }
    if let Some(x) = caps.max_cardinality {
        b.max_cardinality = x;
    }
    if let Some(x) = caps.max_cover {
        b.max_cover = x;
    }
    if let Some(x) = caps.max_words {
        b.max_words = x;
    }
    if let Some(x) = o.cap_bits {
        b.max_elem_bits = x;
    }
    if let Some(mb) = o.cap_mb {
        let mb = mb.max(1);
        b.max_elem_bits = b.max_elem_bits.min(mb.saturating_mul(8 << 20));
        b.max_cardinality = b.max_cardinality.min(usize::try_from(mb.saturating_mul(1 << 16)).unwrap_or(usize::MAX));
        b.max_words = b.max_words.min(usize::try_from(mb.saturating_mul(1 << 14)).unwrap_or(usize::MAX));
    }
    EntropyConfig {
        n_max: o.n_max.or(params.n_max).unwrap_or(DEFAULT_N_MAX).max(1),
        window: o.window.or(params.window).unwrap_or(5).max(1),
        budget: b,
    }
}
