//! Exact matrix realizations of standard and non-standard Schwinger fermionic
//! representations of U(n) and U(C(n,m)) on n-mode fermionic Fock spaces,
//! together with a verification engine for the algebraic identities they obey.
//!
//! The crate is organized bottom-up:
//!
//! * [`fock`] builds the occupation-number basis, ladder operators and
//!   particle-number sectors.
//! * [`liealg`] provides dense generator sets (Gell-Mann, generalized
//!   Gell-Mann, spin matrices), structure constants and the conjugate
//!   representation.
//! * [`schwinger`] maps generator sets onto Fock-space operators.
//! * [`verify`] turns identities into pass/fail reports with residual norms.

pub mod error;
pub mod fock;
pub mod liealg;
pub mod operator;
pub mod schwinger;
pub mod selective;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{FockBasis, LadderFault, LadderSet, OccupationState};
pub use liealg::{GeneratorSet, StructureConstants};
pub use operator::FockOperator;
pub use schwinger::{RepMeta, RepresentationResult, SectorOperatorSet, Variant};
pub use selective::SelectivePolynomial;
pub use verify::{BlockDecomposition, CheckResult, VerificationReport};

pub use num_complex::Complex64;

/// Default mode cap; `FERMIREP_MAX_MODES` overrides it.
pub const DEFAULT_MAX_MODES: usize = 14;

/// Default tolerance for closure residuals.
pub const DEFAULT_TOL: f64 = 1e-10;

/// The active mode cap, honouring the `FERMIREP_MAX_MODES` environment variable.
pub fn max_modes() -> usize {
    std::env::var("FERMIREP_MAX_MODES")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 1 && v < usize::BITS as usize - 1)
        .unwrap_or(DEFAULT_MAX_MODES)
}
