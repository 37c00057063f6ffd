//! Loewner-order laboratory for real symmetric matrices.
//!
//! The algebra of `n × n` real symmetric matrices, ordered by
//! `a ≤ b ⟺ b − a` positive semidefinite and normed by the order-unit norm,
//! is the finite-dimensional model in which this crate checks that the
//! square root is operator monotone:
//!
//! ```text
//! 0 ≤ a ≤ b   ⟹   a^{1/2} ≤ b^{1/2}
//! ```
//!
//! Square roots are computed two independent ways: from the spectral
//! decomposition ([`sym::sqrt_spectral`]) and by quadrature of the resolvent
//! representation
//!
//! ```text
//! a^{1/2} = (1/π) ∫₀^∞ a (λ + a)^{-1} λ^{-1/2} dλ
//! ```
//!
//! ([`msr::sqrt_integral`]), which only needs linear solves. Every step of
//! the monotonicity argument (regularization, antitone inverse, resolvent
//! monotonicity, states, commuting blocks) is exposed as a function that
//! returns raw margins, and [`harness`] runs them over seeded corpora.

pub mod blocks;
pub mod corpus;
pub mod error;
pub mod harness;
pub mod msr;
pub mod quadrature;
pub mod rng;
pub mod states;
pub mod sym;

pub use error::{MsrError, Result};
pub use sym::{OrderCheckReport, SymMatrix, ToleranceConfig};
