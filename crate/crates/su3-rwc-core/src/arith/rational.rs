use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for `n/d` as a [`Rational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
