use serde::Serialize;

use crate::numerics::DEFAULT_PRECISION_BITS;

/// Caps and budgets shared by the analysis pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisConfig {
    /// Largest return time tried by the renormalization search.
    pub l_max: usize,
    /// Maximum number of tower levels.
    pub level_cap: usize,
    /// Iteration cap for hitting indices.
    pub hit_cap: usize,
    /// Backward-chain cap when computing the minimal period.
    pub period_cap: usize,
    /// Iteration cap for covering and l.e.o. checks.
    pub covering_cap: usize,
    /// Maximum number of cylinders in a composition.
    pub branch_budget: usize,
    /// Precision cap for certified comparisons.
    pub precision_bits: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            l_max: 64,
            level_cap: 16,
            hit_cap: 10_000,
            period_cap: 10_000,
            covering_cap: 1_000,
            branch_budget: 1 << 16,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}
