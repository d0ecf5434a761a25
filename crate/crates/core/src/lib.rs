//! Exact magnitude homology of finite metric spaces, metric fibrations and
//! their Künneth-type decompositions.

pub mod causal;
pub mod chain;
pub mod classify;
pub mod deltaset;
pub mod error;
pub mod fibration;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod kunneth;
pub mod metric;
pub mod morse;
pub mod snf;

pub use error::{Error, Result};
