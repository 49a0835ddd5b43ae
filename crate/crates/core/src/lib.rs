//! Executable seminorm calculus for locally convex space presentations.
//!
//! The crate has three layers:
//!
//! * symbolic: [`cardinal`] arithmetic, [`seminorm`] presentations and the
//!   domination pre-order, the [`np`] rule engine with derivation trees,
//!   and the [`covering`] number of base spaces;
//! * constructive: [`witness`] builders that turn domination data into
//!   explicit product-estimate witnesses by constant scheduling;
//! * numerical: finite [`models`] (truncated sequences, grids, group
//!   models) and the [`falsify`] checker that stress-tests witnesses and
//!   reproduces the classical counterexamples at desk scale.

pub mod cardinal;
pub mod covering;
pub mod falsify;
pub mod models;
pub mod np;
pub mod seminorm;
pub mod witness;
