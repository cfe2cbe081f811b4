//! Exact SU(3) > U(2) reduced Wigner coefficients with outer multiplicity.
//!
//! Multiplicity copies of a target irrep in `(l1,u1) x (l2,u2)` are labelled
//! through a complementary U(4) > U(3) chain. Every coefficient is an exact
//! [`SurdSum`](arith::SurdSum): a rational combination of square roots of
//! squarefree integers.
//!
//! The crate is `no_std` and only needs `alloc`. All IO, caching and the
//! floating point oracle live in the companion `su3-rwc` crate.
//!
//! ```
//! use su3_rwc_core::engine::special_rwc;
//! use su3_rwc_core::labels::{Coupling, Partition3, Su3Irrep};
//!
//! let c = Coupling::new(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), Partition3::new(3, 2, 1))
//!     .unwrap()
//!     .unwrap();
//! let m = special_rwc(&c).unwrap();
//! assert_eq!(m.entries[0][0].to_string(), "sqrt(7/10)");
//! assert_eq!(m.entries[0][1].to_string(), "-sqrt(1/42)");
//! ```
#![no_std]

extern crate alloc;

pub mod arith;
pub mod aux;
pub mod engine;
mod error;
pub mod gpoly;
pub mod kernels;
pub mod labels;

pub use error::{Error, Result};
