//! Numerical tolerances and search caps shared by every module.

use serde::{Deserialize, Serialize};

/// Environment variable that overrides [`Tolerances::max_dim`].
pub const MAX_DIM_ENV: &str = "QRTMODAL_MAX_DIM";

/// Numerical tolerances and desk-scale resource caps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max entrywise deviation from Hermiticity.
    pub eps_herm: f64,
    /// Eigenvalues above `-eps_psd` count as nonnegative.
    pub eps_psd: f64,
    /// Max entrywise deviation of `sum K^dag K` from the identity.
    pub eps_tp: f64,
    /// Max deviation of a trace from one.
    pub eps_tr: f64,
    /// Trace-distance radius used to match channel images to named states.
    pub eps_match: f64,
    /// Largest matrix dimension accepted anywhere.
    pub max_dim: usize,
    /// Largest number of distinct induced state functions in a closure.
    pub max_channels: usize,
    /// Largest number of nodes any isomorphism search may visit.
    pub max_iso_nodes: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_herm: 1e-9,
            eps_psd: 1e-9,
            eps_tp: 1e-9,
            eps_tr: 1e-9,
            eps_match: 1e-9,
            max_dim: 64,
            max_channels: 10_000,
            max_iso_nodes: 10_000_000,
        }
    }
}

impl Tolerances {
    /// Sets every `eps_*` field to `eps`.
    pub fn with_uniform_eps(mut self, eps: f64) -> Self {
        self.eps_herm = eps;
        self.eps_psd = eps;
        self.eps_tp = eps;
        self.eps_tr = eps;
        self.eps_match = eps;
        self
    }

    /// Applies the `QRTMODAL_MAX_DIM` override when it is set to a valid integer.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dim) = std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            self.max_dim = dim;
        }
        self
    }
}
