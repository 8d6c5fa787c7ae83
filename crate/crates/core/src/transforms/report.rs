use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    AmenableToLocal,
    LocalToGlobal,
    UniformToWeighted,
    WeightedToDistribution,
    DistributionToPartition,
    PartitionToReiter,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::AmenableToLocal,
        Stage::LocalToGlobal,
        Stage::UniformToWeighted,
        Stage::WeightedToDistribution,
        Stage::DistributionToPartition,
        Stage::PartitionToReiter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::AmenableToLocal => "amenable-to-local",
            Stage::LocalToGlobal => "local-to-global",
            Stage::UniformToWeighted => "uniform-to-weighted",
            Stage::WeightedToDistribution => "weighted-to-distribution",
            Stage::DistributionToPartition => "distribution-to-partition",
            Stage::PartitionToReiter => "partition-to-reiter",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input and output parameters of one transform, with the bound the
/// transform promises and the value its output actually has.
///
/// `k_in` / `k_out` carry a radius `R` where the certificate is a Reiter family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformReport {
    pub stage: Stage,
    #[serde(with = "rational::serde_str")]
    pub eps_in: Rational,
    pub k_in: usize,
    #[serde(with = "rational::serde_str")]
    pub eps_guaranteed: Rational,
    #[serde(with = "rational::serde_str")]
    pub eps_achieved: Rational,
    pub k_out: usize,
}

impl TransformReport {
    pub fn holds(&self) -> bool {
        self.eps_achieved <= self.eps_guaranteed
    }
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: eps_in={} k_in={} guaranteed={} achieved={} k_out={}",
            self.stage,
            rational::format(&self.eps_in),
            self.k_in,
            rational::format(&self.eps_guaranteed),
            rational::format(&self.eps_achieved),
            self.k_out
        )
    }
}
