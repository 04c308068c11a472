//! Numeric certification.

pub mod certify;
pub mod checks;
pub mod random;
pub mod section9;

pub use certify::{certify, CertificationReport, CertifyConfig, CheckResult, ClaimResult, Expect, CLAIMS};
pub use checks::{
    check_commutation, check_dominance, CommutationReport, DominanceReport, FixMethod, PoolMethod,
};
pub use random::{random_general_profile, random_profile};
pub use section9::{run_section9, Section9Table};
