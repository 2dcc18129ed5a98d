use clap::{Args, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use zerodyn::RootConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every subcommand. Each default can be overridden by an
/// environment variable and each of those by a flag.
#[derive(Args, Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Working precision in bits for floating root finding (at least 64)
    #[arg(long, global = true, env = "ZERODYN_PRECISION", default_value_t = 256)]
    pub precision: u32,

    /// |Im z| below this counts as real in floating counts
    #[arg(long, global = true, env = "ZERODYN_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    /// Last iteration count scanned by onset and the default m range
    #[arg(long, global = true, env = "ZERODYN_M_MAX", default_value_t = 200)]
    pub m_max: usize,

    /// Largest degree searched by lp-test and construct
    #[arg(long, global = true, env = "ZERODYN_D_CAP", default_value_t = 40)]
    pub d_cap: usize,

    #[arg(long, global = true, env = "ZERODYN_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true, env = "ZERODYN_OUTPUT")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.precision < 64 {
            return Err(format!("precision must be at least 64 bits, got {}", self.precision));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(format!("tolerance must be positive, got {}", self.tol));
        }
        Ok(())
    }

    pub fn roots(&self) -> RootConfig {
        RootConfig {
            real_tolerance: self.tol,
            ..RootConfig::with_precision(self.precision)
        }
    }
}
