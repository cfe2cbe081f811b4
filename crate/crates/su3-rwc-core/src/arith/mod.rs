//! Exact number system: big rationals, factorials and surd sums.

mod factorial;
mod rational;
mod surd;

pub use factorial::FactorialTable;
pub use rational::{rat, Rational};
pub use surd::{squarefree_split, surd_div_single, surd_from_sqrt, surd_mul, surd_to_float, SurdSum};
