//! Numerical tolerances shared across the crate.

use serde::{Deserialize, Serialize};

/// All tolerances in one place. Components take a `&Tolerances` or use
/// [`Tolerances::default`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Probability vectors must sum to one within this.
    pub mass: f64,
    /// Stochastic-order and lattice comparisons.
    pub order: f64,
    /// Regret threshold for equilibrium verdicts and ε-argmax sets.
    pub regret: f64,
    /// Snapping distance for pushforward targets.
    pub snap: f64,
    /// Most negative mass accepted from lattice inclusion-exclusion.
    pub lattice_negative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mass: 1e-12,
            order: 1e-10,
            regret: 1e-9,
            snap: 1e-9,
            lattice_negative: 1e-9,
        }
    }
}

/// Largest grid for which multi-dimensional upper sets are enumerated.
pub const UPPER_SET_LIMIT: usize = 20;

/// Default cap on the number of pure profiles visited by enumeration.
pub const DEFAULT_PROFILE_CAP: u128 = 1_000_000;

/// Largest simplex grid scanned by the grid best response.
pub const SIMPLEX_GRID_LIMIT: usize = 1_000_000;
