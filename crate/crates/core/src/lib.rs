//! Exact solvers for balanced fractional bin packing.
//!
//! * [`bmbp`]: the polynomial two-stage algorithm for balanced multistage
//!   packing on `⌈S/C⌉` bins.
//! * [`kbfbp`]: an exhaustive decision procedure for the split-bounded
//!   balanced problem on small instances, plus a classical packing oracle.
//! * [`reductions`]: partition and subset-sum instance generators with
//!   certificate extraction and brute-force oracles.
//! * [`verify`]: exact constraint checking for any proposed solution.
//! * [`mip`]: LP-format model export and a grammar checker for it.
//!
//! Every size, capacity and coefficient is an exact [`Rational`].

pub mod bmbp;
pub mod error;
pub mod generate;
pub mod instance;
pub mod kbfbp;
pub mod linear;
pub mod mip;
pub mod rational;
pub mod reductions;
pub mod verify;

pub use bmbp::{solve_bmbp, Packing, TwoStagePlan};
pub use error::{Error, Result};
pub use instance::{lower_bound_bins, validate_instance, Instance, InstanceFile};
pub use kbfbp::{solve_kbfbp_decision, KbfbpWitness};
pub use rational::Rational;
pub use verify::{check_bmbp, check_kbfbp, VerificationReport};
