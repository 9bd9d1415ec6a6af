//! Entropy spectra of dyadic pair-frequency level sets on binary
//! sequences.
//!
//! The central statistic of a 0/1 sequence here is the *dyadic pair
//! frequency*: the density of positions k with bits k and 2k both equal
//! to 1. Level sets of this multiple average, intersected with normality
//! or digit-frequency constraints, have explicit topological entropies;
//! this crate computes those values and verifies them at finite scale:
//!
//! - [`chains`]: the dyadic chain decomposition `{j, 2j, 4j, ...}` that
//!   makes everything factor;
//! - [`counting`]: exact and log-space tallies of words by
//!   `(ones, pairs)`, constrained-set counts, windowed level-set counts,
//!   and the analytic cover bound;
//! - [`measure`]: the telescopic measure family (cylinder probabilities,
//!   seeded sampling along chains, typical frequencies, local entropy);
//! - [`spectra`]: the closed-form spectrum values and the root solvers
//!   behind them;
//! - [`diagnostics`]: finite-scale normality and membership checks
//!   (R-set blocks, X-table identities, block frequencies);
//! - [`cli`]: the `dyadic-spectra` command-line front end.
//!
//! Start with the examples: each one exercises a major capability end to
//! end (`cargo run --example spectrum_scan`, etc.).

pub mod chains;
pub mod cli;
pub mod counting;
pub mod diagnostics;
pub mod measure;
pub mod spectra;
pub mod word;

pub use chains::{chain_head, chain_positions, decompose, ChainDecomposition, ChainId};
pub use counting::{
    brute_force_profile, chain_profile, count_a, count_b, counting_growth_rate, cover_bound,
    level_set_count, log_binomial, profile_matrix, BigCount, ChainProfile, CountMode,
    LevelSetCount, ProfileMatrix,
};
pub use diagnostics::{
    arithmetic_subsequence, block_frequencies, membership_normal, membership_pair_freq, nnorm_gap,
    r_set, x_table, RPart, XTable,
};
pub use measure::{MeasureParams, Xi};
pub use spectra::{
    binary_entropy, h_a_alpha, h_freq, h_normal_alpha, solve_corollary_theta, solve_kps, solve_ps,
    spectrum_scan, theta_star_closed_form, GridSpec, Regime, SpectrumFamily, SpectrumPoint,
};
pub use word::Word;
