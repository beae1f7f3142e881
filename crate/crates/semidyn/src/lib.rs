//! Classification toolkit for semigroup actions on compact metric spaces.
//!
//! The crate takes a concrete action (an iterated map, a finitely
//! generated semigroup of maps, a sampled flow, or a shift space given by
//! a transition matrix), runs exact and finite-horizon property checks,
//! chains the results through a table of implication rules, and emits a
//! graded report: for each dynamical property, one of `Proven`,
//! `Witnessed`, `Unknown`, or `Refuted`, with a concrete certificate.
//!
//! Start with [`registry`] for the built-in systems, [`pipeline`] for the
//! analysis entry point, and [`rules`] for the property lattice.

pub mod action;
pub mod book;
pub mod config;
pub mod error;
pub mod estimators;
pub mod expr;
pub mod pipeline;
pub mod registry;
pub mod report;
pub mod rules;
pub mod sft;
pub mod space;
pub mod verdict;

pub use error::{Error, Result};
