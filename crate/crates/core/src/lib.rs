//! Construction and exhaustive verification of finite quasi-actions of groups.

pub mod constructions;
pub mod finmap;
pub mod groups;
pub mod quasiaction;
pub mod rational;
pub mod request;

pub use finmap::{Defect, FiniteMap, MapError};
pub use groups::{Element, FiniteSubset, Group, GroupError};
pub use quasiaction::{verify, Certificate, QaError, QuasiAction, VerificationReport};
pub use rational::Rational;
