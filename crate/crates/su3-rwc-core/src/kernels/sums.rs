use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{FactorialTable, Rational};

/// A factorial argument `var + c` (`up`) or `c - var` (not `up`).
#[derive(Clone, Copy)]
struct Arg {
    var: usize,
    up: bool,
    c: i64,
}

const fn up(var: usize, c: i64) -> Arg {
    Arg { var, up: true, c }
}

const fn down(c: i64, var: usize) -> Arg {
    Arg { var, up: false, c }
}

impl Arg {
    fn eval(&self, v: &[i64]) -> i64 {
        if self.up {
            v[self.var] + self.c
        } else {
            self.c - v[self.var]
        }
    }
}

/// Sums `(-1)^parity * weight * prod num! / prod den!` over the integer box
/// on which every factorial argument is nonnegative.
fn lattice_sum<const N: usize>(
    ft: &FactorialTable,
    num: &[Arg],
    den: &[Arg],
    weight: impl Fn(&[i64; N]) -> i64,
    parity: impl Fn(&[i64; N]) -> i64,
) -> Rational {
    let mut lo = [i64::MIN; N];
    let mut hi = [i64::MAX; N];
    for a in num.iter().chain(den) {
        if a.up {
            lo[a.var] = lo[a.var].max(-a.c);
        } else {
            hi[a.var] = hi[a.var].min(a.c);
        }
    }
    assert!(lo.iter().all(|&l| l > i64::MIN) && hi.iter().all(|&h| h < i64::MAX));
    if (0..N).any(|i| lo[i] > hi[i]) {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    let mut v = lo;
    let mut nargs = vec![0i64; num.len()];
    let mut dargs = vec![0i64; den.len()];
    'outer: loop {
        let w = weight(&v);
        if w != 0 {
            for (slot, a) in nargs.iter_mut().zip(num) {
                *slot = a.eval(&v);
            }
            for (slot, a) in dargs.iter_mut().zip(den) {
                *slot = a.eval(&v);
            }
            let (n, d) = ft.ratio_parts(&nargs, &dargs).expect("box bounds keep arguments nonnegative");
            let mut n = BigInt::from(n) * BigInt::from(w);
            if parity(&v).rem_euclid(2) == 1 {
                n = -n;
            }
            total += Rational::new(n, BigInt::from(d));
        }
        for i in (0..N).rev() {
            if v[i] < hi[i] {
                v[i] += 1;
                continue 'outer;
            }
            v[i] = lo[i];
        }
        break;
    }
    total
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

fn f3_with(ft: &FactorialTable, h: [i64; 3], q: [i64; 3], m: [i64; 3], n: [i64; 3], printed: bool) -> Rational {
    let [h1, h2, h3] = h;
    let [q1, q2, q3] = q;
    let [m1, m2, m3] = m;
    let [n1, n2, n3] = n;
    let num = [
        up(X, 1 - h3),
        down(q1, Y),
        down(q1 + 1, Z),
        down(q2, Z),
        up(X, -n2),
        up(X, 1 - n3),
        up(Y, -n3),
        up(Y, -h3),
        down(m1, X),
        down(m1 + 1, Y),
        down(m1 + 2, Z),
        down(m2, Y),
        down(m2 + 1, Z),
        down(m3, Z),
        up(X, -h2),
    ];
    let second = if printed { down(n2 + 1, Z) } else { down(h2 + 1, Z) };
    let den = [
        down(h2, Y),
        second,
        down(h3, Z),
        down(h1 + 2, Z),
        down(h1 + 1, Y),
        up(X, -q1),
        up(X, 1 - q2),
        up(X, 2 - q3),
        up(Y, -q2),
        up(Y, 1 - q3),
        up(Z, -q3),
        down(n1, X),
        down(n1 + 1, Y),
        down(n1 + 2, Z),
        down(n2, Y),
        down(n2 + 1, Z),
        down(n3, Z),
        up(X, -m2),
        up(X, 1 - m3),
        up(Y, -m3),
        down(h1, X),
    ];
    lattice_sum::<3>(
        ft,
        &num,
        &den,
        |v| (v[0] - v[1] + 1) * (v[0] - v[2] + 2) * (v[1] - v[2] + 1),
        |v| v[0] + v[1] + v[2] - q1 - q2 - q3,
    )
}

/// Triple-sum kernel of the U(4) > U(3) multiplicity-free coefficient for
/// `[h] x [p,0,0,0] -> [m]` with U(3) labels `[q]` of `h` and `[n]` of `m`.
///
/// Uses `(h2 - z + 1)!` in the second denominator slot; see
/// [`f3_kernel_printed`] for the transcription that repeats `(n2 - z + 1)!`.
pub fn f3_kernel(ft: &FactorialTable, h: [i64; 3], q: [i64; 3], m: [i64; 3], n: [i64; 3]) -> Rational {
    f3_with(ft, h, q, m, n, false)
}

/// The kernel exactly as originally transcribed, with `(n2 - z + 1)!` twice.
/// Kept only so tests can show it breaks orthonormality.
pub fn f3_kernel_printed(ft: &FactorialTable, h: [i64; 3], q: [i64; 3], m: [i64; 3], n: [i64; 3]) -> Rational {
    f3_with(ft, h, q, m, n, true)
}

/// Double-sum kernel of the U(3) > U(2) multiplicity-free coefficient for
/// `[h] x [p,0,0] -> [m]` with U(2) labels `[q]` of `h` and `[n]` of `m`.
pub fn f2_kernel(ft: &FactorialTable, h: [i64; 3], m: [i64; 3], q: [i64; 2], n: [i64; 2]) -> Rational {
    let [h1, h2, h3] = h;
    let [m1, m2, m3] = m;
    let [q1, q2] = q;
    let [n1, n2] = n;
    let num =
        [up(X, -n2), down(m1, X), up(X, -h2), up(X, 1 - h3), down(q1, Y), down(m1 + 1, Y), down(m2, Y), up(Y, -h3)];
    let den = [
        up(X, -q1),
        up(X, 1 - q2),
        down(n1, X),
        up(X, -m2),
        up(X, 1 - m3),
        down(h1, X),
        up(Y, -q2),
        down(n2, Y),
        down(n1 + 1, Y),
        up(Y, -m3),
        down(h1 + 1, Y),
        down(h2, Y),
    ];
    lattice_sum::<2>(ft, &num, &den, |v| v[0] - v[1] + 1, |v| v[0] + v[1] - q1 - q2)
}

/// Single-sum kernel of `[l2p] x [mu2p] -> [target2]` (two-row target) with
/// U(2) labels `[top]` of the first factor, `[p]` of the second and `sub2`
/// of the target.
///
/// Vanishes unless `0 <= p <= mu2p` and `top + p` equals the weight of `sub2`.
pub fn f_kernel(
    ft: &FactorialTable,
    l2p: i64,
    top: i64,
    mu2p: i64,
    p: i64,
    target2: [i64; 2],
    sub2: [i64; 2],
) -> Rational {
    let [big_l, big_m] = target2;
    let [a12, a22] = sub2;
    if p < 0 || p > mu2p || top != a12 + a22 - p {
        return Rational::zero();
    }
    let num = [up(0, a12 - p), down(big_l - a12 - a22 + p, 0)];
    let den = [up(0, 0), down(l2p - a12 - a22 + p, 0), down(p - a22, 0), up(0, a12 + a22 - p - big_m)];
    lattice_sum::<1>(ft, &num, &den, |_| 1, |v| v[0])
}

fn shifted(row: &[i64]) -> Vec<i64> {
    row.iter().enumerate().map(|(i, &a)| a - i as i64).collect()
}

/// Pushes `A_i - B_j` (i <= j) to `le` and `B_j - A_i - 1` (i > j) to `gt`.
pub(crate) fn hook_args(a: &[i64], b: &[i64], le: &mut Vec<i64>, gt: &mut Vec<i64>) {
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            if i <= j {
                le.push(ai - bj);
            } else {
                gt.push(bj - ai - 1);
            }
        }
    }
}

pub(crate) fn vandermonde(row: &[i64]) -> i64 {
    let mut v = 1;
    for i in 0..row.len() {
        for j in i + 1..row.len() {
            v *= row[i] - row[j];
        }
    }
    v
}

/// Kernel sum of the multiplicity-free U(n) > U(n-1) coefficient for any `n >= 2`,
/// written over an intermediate (n-1)-row pattern `x` with hook-type factorials.
///
/// `h`, `m` have `n` entries; `q`, `r` have `n - 1`. For `n = 3` it equals
/// [`f2_kernel`], for `n = 4` it equals [`f3_kernel`].
pub fn hook_sum(ft: &FactorialTable, h: &[i64], q: &[i64], m: &[i64], r: &[i64]) -> Rational {
    let k = q.len();
    let (hs, qs, ms, ns) = (shifted(h), shifted(q), shifted(m), shifted(r));
    let mut lo = Vec::with_capacity(k);
    let mut hi = Vec::with_capacity(k);
    for j in 0..k {
        let mut l = q[j].max(h[j + 1]).max(m[j + 1]);
        if j + 1 < k {
            l = l.max(r[j + 1]);
        }
        let mut u = r[j].min(h[j]).min(m[j]);
        if j > 0 {
            u = u.min(q[j - 1]);
        }
        if l > u {
            return Rational::zero();
        }
        lo.push(l);
        hi.push(u);
    }
    let qsum: i64 = q.iter().sum();
    let mut total = Rational::zero();
    let mut x = lo.clone();
    let (mut num, mut den) = (Vec::new(), Vec::new());
    'outer: loop {
        let xs = shifted(&x);
        num.clear();
        den.clear();
        hook_args(&ns, &xs, &mut den, &mut num);
        hook_args(&xs, &qs, &mut den, &mut num);
        hook_args(&ms, &xs, &mut num, &mut den);
        hook_args(&hs, &xs, &mut den, &mut num);
        if let Some((n, d)) = ft.ratio_parts(&num, &den) {
            let w = vandermonde(&xs);
            if w != 0 {
                let mut n = BigInt::from(n) * BigInt::from(w);
                if (x.iter().sum::<i64>() - qsum).rem_euclid(2) == 1 {
                    n = -n;
                }
                total += Rational::new(n, BigInt::from(d));
            }
        }
        for i in (0..k).rev() {
            if x[i] < hi[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = lo[i];
        }
        break;
    }
    total
}
