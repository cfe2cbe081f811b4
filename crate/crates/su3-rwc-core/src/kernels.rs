//! Factorial-sum kernels, the unitary SU(2) Racah coefficient and the
//! multiplicity-free U(n) > U(n-1) reduced Wigner coefficients built on them.

mod mf;
mod racah;
mod sums;

pub use mf::{mf_prefactor, mf_rwc, mf_rwc_generic, Workspace};
pub use racah::{su2_racah_unitary, two_j};
pub use sums::{f2_kernel, f3_kernel, f3_kernel_printed, f_kernel, hook_sum};
