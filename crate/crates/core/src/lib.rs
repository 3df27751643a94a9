//! Constructive Galois embedding problems with cyclic quotient of odd prime
//! order p, over two exactly computable function-field arenas.

pub mod arena;
pub mod arith;
pub mod descent;
pub mod embed;
pub mod error;
pub mod fpg_module;
pub mod job;
pub mod kummer;
pub mod linalg;
pub mod parse;
pub mod pgroup;

pub use error::{Error, Result};
