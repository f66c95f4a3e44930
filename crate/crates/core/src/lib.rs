//! Exact-arithmetic toolkit for toric vector bundles.

pub mod bundle;
pub mod cox;
pub mod error;
pub mod exact;
pub mod gz;
pub mod io;
pub mod poly;
pub mod schur;
pub mod suite;

pub use error::{Error, Result};
