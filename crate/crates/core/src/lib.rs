#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod gengamma;
pub mod hfun;
pub mod ihat;
pub mod oracle;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
