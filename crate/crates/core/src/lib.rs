//! Coherence repair and opinion pooling for credence functions.
//!
//! Agents hold credences over a finite agenda of propositions, possibly
//! violating the probability axioms. This crate provides
//!
//! - additive Bregman divergences ([`divergence`]),
//! - fixing, the projection of a credence onto the coherent ones, in either
//!   divergence direction ([`fixing`]),
//! - linear and geometric pooling and divergence-minimizing aggregates
//!   ([`pooling`]),
//! - one-step coherent approximation of a whole profile ([`wcap`]),
//! - brute-force reference minimizers ([`oracle`]) and numeric checks of the
//!   relations between all of the above ([`theoremlab`]).
//!
//! ```
//! use credpool::{fixing::fix_sed, pooling::linear_pool, Agenda, Credence, Profile, WeightVector};
//!
//! let agenda = Agenda::partition(2);
//! let profile = Profile::from_credences(
//!     agenda.clone(),
//!     vec![Credence::new(vec![0.5, 0.1])?, Credence::new(vec![0.2, 0.6])?],
//!     WeightVector::new(vec![0.4, 0.6])?,
//! )?;
//! let pooled = linear_pool(&profile);
//! let fixed = fix_sed(&agenda, &pooled)?;
//! assert!((fixed[0] - 0.46).abs() < 1e-12);
//! # Ok::<(), credpool::Error>(())
//! ```

pub mod agenda;
pub mod divergence;
pub mod error;
pub mod fixing;
pub mod hull;
pub mod oracle;
pub mod pooling;
pub mod simplex;
pub mod theoremlab;
pub mod wcap;

pub use agenda::{Agenda, Agent, Credence, Profile, SolveReport, WeightVector, DEFAULT_COHERENCE_TOL};
pub use divergence::{bregman, gkl, phi_prime_inverse, sed, Direction, DivergenceValue, Generator};
pub use error::{Error, Result};
