//! Semi-tensor product algebra and Boolean control networks.
//!
//! * [`stp`]: exact dense and logical matrices, semi-tensor and Kronecker
//!   products, swap and power-reducing matrices.
//! * [`boolfun`]: Boolean expressions, structure matrices, Boolean derivatives.
//! * [`network`]: compilation of state/control update rules into transition
//!   matrices, by truth-table enumeration and by symbolic normalization.
//! * [`reach`]: trajectories and reachable sets.
//! * [`optimal`]: average-payoff optimal control via maximum mean cycles.
//! * [`cli`]: network-file parsing and the command-line front end.

pub mod boolfun;
pub mod cli;
pub mod error;
pub mod network;
pub mod optimal;
pub mod par;
pub mod reach;
pub mod stp;

pub use error::{Error, Result};
