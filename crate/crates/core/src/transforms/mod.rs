//! Certificate transforms along the equivalence chain, each reporting the
//! bound it promises next to the value its output achieves.

pub mod buckets;
pub mod chain;
pub mod duality;
pub mod local;
pub mod namioka;
pub mod report;

pub use buckets::{uniform_to_weighted, BucketRun, SeparatorUhOracle, UhOracle};
pub use chain::{full_cycle, ChainRun};
pub use duality::{distribution_to_partition, partition_to_reiter, weighted_to_distribution, Dichotomy, PartitionBound};
pub use local::{
    amenable_to_local, local_to_global, GlobalSeparator, GreedyLocalOracle, LocalOracle, LocalPiece, ReiterLocalOracle,
};
pub use namioka::{namioka_threshold, NamiokaDecomposition};
pub use report::{Stage, TransformReport};
