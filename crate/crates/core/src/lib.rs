//! Cost-greedy decentralized search on edge-independent random cost graphs.
//!
//! The crate covers the whole pipeline of a small-world routing study:
//!
//! * [`topology`]: directed rings augmented with power-law shortcuts,
//! * [`costs`]: i.i.d. edge-cost models realized fresh for every query,
//! * [`search`]: the family of forward search strategies behind the
//!   [`search::Stepper`] trait, selected by name from a [`search::StepperRegistry`],
//! * [`weights`]: exact and empirical computation of cost-greedy weights,
//!   including zone-compressed routing tables,
//! * [`decentralized`]: per-vertex FIFO weight estimators,
//! * [`oracle`]: brute-force and Monte Carlo verifiers,
//! * [`harness`]: experiment runner, CSV and plot output.

pub mod costs;
pub mod decentralized;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod search;
pub mod stats;
pub mod topology;
pub mod weights;

pub use error::{Error, Result};
