//! Verification engine: ideal membership and the theorem registry.

mod echelon;
mod field;
mod membership;
pub mod registry;

pub use field::Field;
pub use membership::{
    ideal_membership, ideal_membership_many, membership_certificate, CertTerm, Dims, Limits, MembershipOptions,
    MembershipReport, Mode, Verdict,
};
pub use registry::{check_theorem, lookup, registry, CheckError, CheckOptions, CheckReport, Params, TheoremInfo};
