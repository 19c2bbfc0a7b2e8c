//! Quasi-actions, their verification, and certificates.

mod certificate;
mod model;
mod verify;

pub use certificate::{emit_certificate, Certificate, ElementDoc, FlagsDoc, PairDoc, ReportDoc, StrictDoc};
pub use model::{QaError, QuasiAction};
pub use verify::{
    product_defect, verify, ElementDefect, GoodnessFlags, PairDefect, StrictReport, VerificationReport,
};
