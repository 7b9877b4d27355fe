#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod cech;
pub mod complexes;
pub mod cycletangent;
pub mod differentials;
pub mod error;
pub mod families;
pub mod funcrings;
pub mod linalg;
pub mod milnor;
pub mod scalars;

pub use error::{Error, Result};
