use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::racah::su2_racah_unitary;
use super::sums::{f2_kernel, f3_kernel, hook_args, hook_sum, vandermonde};
use crate::arith::{FactorialTable, Rational, SurdSum};

fn shifted(row: &[i64]) -> Vec<i64> {
    row.iter().enumerate().map(|(i, &a)| a - i as i64).collect()
}

fn between(top: &[i64], sub: &[i64]) -> bool {
    sub.iter().enumerate().all(|(i, &s)| top[i] >= s && s >= top[i + 1])
}

/// Squared normalization of the multiplicity-free coefficient
/// `<[h] q; [p] pp | [m] r>` of U(n) > U(n-1), in hook form:
///
/// `(p-pp)! V(M) V(Q) * H(H,Q) / H'(M,H) / H'(M,N) * H(N,Q)`
///
/// where capital rows are shifted (`A_i = a_i - i`), `V` is the Vandermonde
/// product and `H(A,B) = prod_{i<=j} (A_i-B_j)! / prod_{i>j} (B_j-A_i-1)!`.
/// `None` when a factorial argument is negative.
pub fn mf_prefactor(
    ft: &FactorialTable,
    h: &[i64],
    p: i64,
    q: &[i64],
    pp: i64,
    m: &[i64],
    r: &[i64],
) -> Option<Rational> {
    let (hs, qs, ms, ns) = (shifted(h), shifted(q), shifted(m), shifted(r));
    let (mut num, mut den) = (alloc::vec![p - pp], Vec::new());
    hook_args(&hs, &qs, &mut num, &mut den);
    hook_args(&ms, &hs, &mut den, &mut num);
    hook_args(&ms, &ns, &mut den, &mut num);
    hook_args(&ns, &qs, &mut num, &mut den);
    let r = ft.ratio(&num, &den)?;
    Some(r * Rational::from_integer(BigInt::from(vandermonde(&ms) * vandermonde(&qs))))
}

fn labels_ok(h: &[i64], p: i64, q: &[i64], pp: i64, m: &[i64], r: &[i64]) -> bool {
    let n = h.len();
    n >= 1
        && m.len() == n
        && q.len() + 1 == n
        && r.len() + 1 == n
        && (0..=p).contains(&pp)
        && m.iter().sum::<i64>() == h.iter().sum::<i64>() + p
        && r.iter().sum::<i64>() == q.iter().sum::<i64>() + pp
        && between(h, q)
        && between(m, r)
}

fn assemble(ft: &FactorialTable, f: Rational, h: &[i64], p: i64, q: &[i64], pp: i64, m: &[i64], r: &[i64]) -> SurdSum {
    if f.is_zero() {
        return SurdSum::zero();
    }
    match mf_prefactor(ft, h, p, q, pp, m, r) {
        Some(n) if !n.is_zero() => SurdSum::sqrt_of(&n, false).expect("hook prefactor is positive").scale(&f),
        _ => SurdSum::zero(),
    }
}

/// Multiplicity-free reduced Wigner coefficient of U(n) > U(n-1) for the
/// coupling of `[h]` with the symmetric irrep `[p, 0, ...]` to `[m]`, where
/// `q` labels the U(n-1) irrep in `h`, `pp` the one in `[p]` and `r` the
/// one in `m`.
///
/// Phase convention: positive square root of [`mf_prefactor`] times the
/// kernel sum. For `n = 3` the kernel is [`f2_kernel`], for `n = 4`
/// [`f3_kernel`], otherwise [`hook_sum`].
pub fn mf_rwc(ft: &FactorialTable, h: &[i64], p: i64, q: &[i64], pp: i64, m: &[i64], r: &[i64]) -> SurdSum {
    if !labels_ok(h, p, q, pp, m, r) {
        return SurdSum::zero();
    }
    let f = match h.len() {
        1 => return SurdSum::one(),
        3 => f2_kernel(ft, [h[0], h[1], h[2]], [m[0], m[1], m[2]], [q[0], q[1]], [r[0], r[1]]),
        4 => f3_kernel(ft, [h[0], h[1], h[2]], [q[0], q[1], q[2]], [m[0], m[1], m[2]], [r[0], r[1], r[2]]),
        _ => hook_sum(ft, h, q, m, r),
    };
    assemble(ft, f, h, p, q, pp, m, r)
}

/// Same coefficient as [`mf_rwc`] but always evaluated with [`hook_sum`].
pub fn mf_rwc_generic(ft: &FactorialTable, h: &[i64], p: i64, q: &[i64], pp: i64, m: &[i64], r: &[i64]) -> SurdSum {
    if !labels_ok(h, p, q, pp, m, r) {
        return SurdSum::zero();
    }
    if h.len() == 1 {
        return SurdSum::one();
    }
    assemble(ft, hook_sum(ft, h, q, m, r), h, p, q, pp, m, r)
}

/// Per-thread scratch space: a factorial table and memo tables for the
/// multiplicity-free coefficients, Racah coefficients and G values.
///
/// Not shared between threads; parallel callers give each worker its own.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub ft: FactorialTable,
    mf: BTreeMap<Vec<i64>, SurdSum>,
    racah: BTreeMap<[i64; 12], SurdSum>,
    pub(crate) g: BTreeMap<Vec<i64>, SurdSum>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Memoized [`mf_rwc`].
    pub fn mf(&mut self, h: &[i64], p: i64, q: &[i64], pp: i64, m: &[i64], r: &[i64]) -> SurdSum {
        let mut key = Vec::with_capacity(4 * h.len() + 2);
        key.extend_from_slice(h);
        key.push(p);
        key.extend_from_slice(q);
        key.push(pp);
        key.extend_from_slice(m);
        key.extend_from_slice(r);
        if let Some(v) = self.mf.get(&key) {
            return v.clone();
        }
        let v = mf_rwc(&self.ft, h, p, q, pp, m, r);
        self.mf.insert(key, v.clone());
        v
    }

    /// Memoized [`su2_racah_unitary`].
    pub fn racah(&mut self, a: [i64; 2], b: [i64; 2], e: [i64; 2], c: [i64; 2], f: [i64; 2], d: [i64; 2]) -> SurdSum {
        let key = [a[0], a[1], b[0], b[1], e[0], e[1], c[0], c[1], f[0], f[1], d[0], d[1]];
        if let Some(v) = self.racah.get(&key) {
            return v.clone();
        }
        let v = su2_racah_unitary(&self.ft, a, b, e, c, f, d);
        self.racah.insert(key, v.clone());
        v
    }

    pub fn memo_len(&self) -> usize {
        self.mf.len() + self.racah.len() + self.g.len()
    }
}
