//! The groups `G = Q:L`: elements, actions, descriptors and the axiom
//! verifier.

mod axioms;
mod descriptor;
mod element;
mod group;

pub use axioms::{find_complement, is_closed, verify_axioms, verify_axioms_with, AxiomCheck, AxiomReport};
pub use descriptor::{parse_descriptor, parse_expression, Flavor, GroupDescriptor, ParseError};
pub use element::{GroupElement, LElement, QElement, Triple, ZLetter, MAX_FACTORS};
pub use group::{standard_generators, t_prime_rank2, Group};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("rank must be a positive even number, got {0}")]
    OddRank(usize),
    #[error("at most one minus factor is allowed in a descriptor, found {0}")]
    MultipleMinus(usize),
    #[error("the minus factor must come last")]
    MinusNotLast,
    #[error("element has {found} factors, group has {expected}")]
    DescriptorMismatch { expected: usize, found: usize },
    #[error("rank {rank} exceeds the limit {limit}")]
    TooLarge { rank: usize, limit: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}
