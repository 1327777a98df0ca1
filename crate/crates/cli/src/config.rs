//! Validated experiment parameters, one variant per subcommand.

use std::path::PathBuf;

use hyperpack::colorer::COLORER_NAMES;
use hyperpack::reduction::{AdversaryKind, Variant};
use hyperpack::vbp::PACKER_NAMES;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown colorer {0:?} (known: {1})")]
    UnknownColorer(String, String),
    #[error("unknown packer {0:?} (known: {1})")]
    UnknownPacker(String, String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Smoke,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smoke" => Ok(Scale::Smoke),
            "full" => Ok(Scale::Full),
            other => Err(ConfigError::Invalid(format!(
                "unknown scale {:?}, expected smoke or full",
                other
            ))),
        }
    }
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scale::Smoke => "smoke",
            Scale::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Pack {
        input: PathBuf,
        bin_size: Option<i64>,
    },
    Adversary {
        colorer: String,
        k: usize,
        m: usize,
    },
    Reduce {
        adversary: AdversaryKind,
        packer: String,
        d: usize,
        bin_size: usize,
        variant: Variant,
    },
    Verify {
        scale: Scale,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Largest item count handed to the exact optimum oracle.
    pub cap_n: usize,
    pub out: Option<PathBuf>,
}

/// Vertex budget above which the transcript of a hypertree run gets unwieldy.
pub const MAX_ADVERSARY_VERTICES: usize = 1 << 20;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.cap_n == 0 {
            return invalid("--cap-n must be positive".into());
        }
        match &self.command {
            Command::Pack { bin_size, .. } => {
                if matches!(bin_size, Some(b) if *b < 1) {
                    return invalid("--bin-size must be at least 1".into());
                }
            }
            Command::Adversary { colorer, k, m } => {
                if !COLORER_NAMES.contains(&colorer.as_str()) {
                    return Err(ConfigError::UnknownColorer(colorer.clone(), COLORER_NAMES.join(", ")));
                }
                if *k < 2 || *m < 1 {
                    return invalid(format!("need --uniformity >= 2 and --depth >= 1, got {} and {}", k, m));
                }
                let cap = (*k as u128).checked_pow(*m as u32 - 1);
                if cap.is_none_or(|c| c > MAX_ADVERSARY_VERTICES as u128) {
                    return invalid(format!("k^(m-1) exceeds {} vertices", MAX_ADVERSARY_VERTICES));
                }
            }
            Command::Reduce {
                adversary,
                packer,
                d,
                bin_size,
                ..
            } => {
                if !PACKER_NAMES.contains(&packer.as_str()) {
                    return Err(ConfigError::UnknownPacker(packer.clone(), PACKER_NAMES.join(", ")));
                }
                if *d < 1 {
                    return invalid("--dim must be at least 1".into());
                }
                if *bin_size < 1 {
                    return invalid("--bin-size must be at least 1".into());
                }
                if *adversary == AdversaryKind::Killer && *bin_size != 1 {
                    return invalid(
                        "the killer adversary builds graphs, so it needs --bin-size 1 (k = B + 1 = 2)".into(),
                    );
                }
            }
            Command::Verify { .. } => {}
        }
        Ok(())
    }
}
