//! Endomorphism algebras of Kuga–Satake varieties for Hodge structures of K3
//! type with real multiplication, computed with exact arithmetic.

pub mod brauer;
pub mod cli;
pub mod clifford;
pub mod csa;
pub mod error;
pub mod exactfield;
pub mod kspipeline;
pub mod qform;

pub use error::{Error, Result};
