#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod foxcalc;
pub mod freegroup;
pub mod groupring;
pub mod growth;
pub mod intmat;
pub mod linalg;
pub mod mappingclass;
pub mod poly;
pub mod reptheory;
#[cfg(test)]
mod testutil;
pub mod torus;
pub mod zetafns;

pub use error::{Error, Result};
