//! Content-based image retrieval built on local binary pattern texture
//! descriptors and image moments.
//!
//! The pipeline: decode grayscale images ([`image_io`]), turn them into
//! texture and moment descriptors ([`lbp`], [`moments`], [`features`]),
//! rank a database by the d1 distance ([`retrieval`]), and score retrieval
//! quality as ARP/ARR curves ([`eval`]).
//!
//! Everything is deterministic: identical inputs produce bitwise-identical
//! feature vectors, index files, and reports.

pub mod error;
pub mod eval;
pub mod features;
pub mod image_io;
pub mod lbp;
pub mod moments;
pub mod retrieval;

pub use error::{Error, Result};
