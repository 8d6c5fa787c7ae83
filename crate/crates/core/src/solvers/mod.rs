//! Exact and heuristic optimization over separators and partitions.

pub mod bounds;
pub mod game;
pub mod heuristic;
pub mod partition_lp;
pub mod profile;
pub mod separator;

pub use bounds::{separator_lower_bound, SeparatorBounds};
pub use game::{
    separator_game_column_generation, separator_game_exact, ColumnGenerationOptions, GameBracket, GameSolution,
};
pub use partition_lp::{fractional_partition_lp, optimal_partition, PartitionLpResult};
pub use profile::{uniform_profile, ProfileMode, UniformProfile};
pub use separator::{min_weight_separator, minimal_separators, separator_fraction, SeparatorMode};
