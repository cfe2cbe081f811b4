use alloc::borrow::Cow;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::Rational;

/// Append-only table with `cache[n] = n!`.
///
/// Reads take `&self` and are safe to share between threads once the table
/// has been grown to the size a computation needs. Requests past the end
/// are computed on the fly and not stored.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    cache: Vec<BigUint>,
}

impl Default for FactorialTable {
    fn default() -> Self {
        Self::with_max(64)
    }
}

impl FactorialTable {
    pub fn with_max(max: usize) -> Self {
        let mut t = FactorialTable { cache: alloc::vec![BigUint::one()] };
        t.ensure(max);
        t
    }

    /// Largest `n` currently cached.
    pub fn max(&self) -> usize {
        self.cache.len() - 1
    }

    pub fn ensure(&mut self, max: usize) {
        while self.cache.len() <= max {
            let n = self.cache.len();
            let next = &self.cache[n - 1] * BigUint::from(n);
            self.cache.push(next);
        }
    }

    pub fn get(&self, n: usize) -> Cow<'_, BigUint> {
        if let Some(v) = self.cache.get(n) {
            return Cow::Borrowed(v);
        }
        let mut acc = self.cache.last().cloned().unwrap_or_else(BigUint::one);
        for k in self.cache.len()..=n {
            acc *= BigUint::from(k);
        }
        Cow::Owned(acc)
    }

    /// `prod num[i]! / prod den[i]!`, or `None` as soon as one argument is negative.
    pub fn ratio(&self, num: &[i64], den: &[i64]) -> Option<Rational> {
        let (n, d) = self.ratio_parts(num, den)?;
        Some(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Same as [`ratio`](Self::ratio) but leaves numerator and denominator unreduced.
    pub fn ratio_parts(&self, num: &[i64], den: &[i64]) -> Option<(BigUint, BigUint)> {
        if num.iter().chain(den).any(|&a| a < 0) {
            return None;
        }
        let mut n = BigUint::one();
        for &a in num {
            if a > 1 {
                n *= self.get(a as usize).as_ref();
            }
        }
        let mut d = BigUint::one();
        for &a in den {
            if a > 1 {
                d *= self.get(a as usize).as_ref();
            }
        }
        Some((n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_holds() {
        let t = FactorialTable::with_max(30);
        assert_eq!(*t.get(0), BigUint::one());
        for n in 1..=30usize {
            assert_eq!(t.get(n).as_ref(), &(t.get(n - 1).as_ref() * BigUint::from(n)));
        }
        assert_eq!(t.get(35).as_ref(), &(t.get(34).as_ref() * BigUint::from(35u32)));
    }

    #[test]
    fn ratio_rejects_negative_arguments() {
        let t = FactorialTable::default();
        assert_eq!(t.ratio(&[5], &[3, 2]), Some(super::super::rat(10, 1)));
        assert_eq!(t.ratio(&[5, -1], &[3]), None);
    }
}
