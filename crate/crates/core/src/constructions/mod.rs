//! Executable constructions of quasi-actions.
//!
//! Every function here is pure: the same inputs (and seed, where one is
//! taken) always produce the same output.

mod basic;
mod carrier;
mod extension;
mod finitary;
mod free_product;
mod girth;
mod good_action;
mod product;

pub use basic::{cyclic_quasi_action, perturb, regular_action};
pub use carrier::{build_partitioned_carrier, PartitionedCarrier};
pub use extension::{amenable_extension_qa, kernel_window, required_kernel_elements, ExtensionData, FolnerChoice, FolnerSet};
pub use finitary::{finitary_extension_qa, finitary_map, FinitaryQa, FinitaryQuotient};
pub use free_product::{free_product_f, free_product_qa};
pub use girth::{girth_group_search, GirthCertificate, GirthGroup, GirthTarget, GirthWitness, SearchParams};
pub use good_action::good_action_upgrade;
pub use product::{direct_product_qa, transport_by_pairs, transport_qa};

use crate::finmap::MapError;
use crate::groups::GroupError;
use crate::quasiaction::QaError;
use crate::rational::RationalError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Qa(#[from] QaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "no group with girth certificate {target} found for {labels} labels within order cap {order_cap}; \
         raise the degree schedule or the order cap"
    )]
    SearchFailure { labels: usize, target: String, order_cap: usize },
    #[error("construction invariant violated: {0}")]
    Invariant(String),
}
