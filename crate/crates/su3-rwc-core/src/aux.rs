//! Auxiliary reduced Wigner coefficients, where the multiplicity of
//! `(l1,u1) x (l2,u2) -> [m]` is carried by an intermediate U(3) label `[u]`.
//!
//! The second factor is built from `[s'] x [u2']` with `l2' + 2 u2' = l2 + 2 u2`
//! (the split); `[u]` runs over `[h1] x [s']` and `[m]` over `[u] x [u2']`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{FactorialTable, Rational, SurdSum};
use crate::error::{Error, Result};
use crate::gpoly::RhoTriple;
use crate::kernels::{f2_kernel, f_kernel, mf_rwc_generic, su2_racah_unitary};
use crate::labels::{pieri, u2_sublabels, Partition3, Su3Irrep, U2Label};

/// The intermediate label `[u1, u2, u3]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuxLabel {
    pub u: Partition3,
}

impl AuxLabel {
    pub const fn new(u1: i64, u2: i64, u3: i64) -> Self {
        AuxLabel { u: Partition3::new(u1, u2, u3) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuxCoupling {
    pub left: Su3Irrep,
    pub right: Su3Irrep,
    /// `(l2', u2')`.
    pub split: (i64, i64),
    pub target: Partition3,
}

impl AuxCoupling {
    /// Split defaults to the second factor itself.
    pub fn new(left: Su3Irrep, right: Su3Irrep, target: Partition3) -> Result<Self> {
        Self::with_split(left, right, (right.lambda, right.mu), target)
    }

    pub fn with_split(left: Su3Irrep, right: Su3Irrep, split: (i64, i64), target: Partition3) -> Result<Self> {
        let (l2p, u2p) = split;
        if !left.is_valid() || !right.is_valid() || l2p < 0 || u2p < 0 || !target.is_valid() {
            return Err(Error::Domain(format!("negative label in {left} x {right} split ({l2p},{u2p}) -> {target}")));
        }
        if l2p + 2 * u2p != right.boxes() {
            return Err(Error::Domain(format!("split ({l2p},{u2p}) does not have the box count of {right}")));
        }
        if right.mu > u2p || right.mu > l2p + u2p {
            return Err(Error::Domain(format!("{right} does not occur in [{}] x [{u2p}]", l2p + u2p)));
        }
        if target.boxes() != left.boxes() + right.boxes() {
            return Err(Error::InvalidCoupling(format!(
                "{target} has {} boxes, {left} x {right} has {}",
                target.boxes(),
                left.boxes() + right.boxes()
            )));
        }
        Ok(AuxCoupling { left, right, split, target })
    }

    fn s_prime(&self) -> i64 {
        self.split.0 + self.split.1
    }

    /// All intermediate labels reaching the target.
    pub fn labels(&self) -> Vec<AuxLabel> {
        pieri(self.left.partition(), self.s_prime())
            .into_iter()
            .filter(|u| pieri(*u, self.split.1).contains(&self.target))
            .map(|u| AuxLabel { u })
            .collect()
    }

    fn check(&self, u: &AuxLabel, q: &RhoTriple) -> Result<()> {
        if !self.labels().contains(u) {
            return Err(Error::Domain(format!("{} is not an intermediate label for this coupling", u.u)));
        }
        if !q.rho1.fits(&self.left.partition()) || !q.rho2.fits(&self.right.partition()) || !q.rho.fits(&self.target) {
            return Err(Error::Domain(format!("labels {q} do not fit")));
        }
        Ok(())
    }
}

fn summands(c: &AuxCoupling, u: &AuxLabel, q: &RhoTriple) -> Vec<(i64, i64, [i64; 2])> {
    let um = u.u.m;
    let mut out = Vec::new();
    for p in 0..=c.split.1 {
        let a = q.rho2.weight() - p;
        if a < 0 || a > c.s_prime() {
            continue;
        }
        let w = q.rho1.weight() + a;
        for q2 in um[2]..=um[1] {
            let qb = [w - q2, q2];
            if qb[0] >= um[1] && qb[0] <= um[0] {
                out.push((p, a, qb));
            }
        }
    }
    out
}

/// Recoupled form: three multiplicity-free coefficients (hook sums) and a
/// U(2) Racah coefficient per term.
pub fn aux_rwc_recoupled(c: &AuxCoupling, u: &AuxLabel, q: &RhoTriple) -> Result<SurdSum> {
    aux_rwc_recoupled_with(&FactorialTable::default(), c, u, q)
}

pub fn aux_rwc_recoupled_with(ft: &FactorialTable, c: &AuxCoupling, u: &AuxLabel, q: &RhoTriple) -> Result<SurdSum> {
    c.check(u, q)?;
    if q.rho1.weight() + q.rho2.weight() != q.rho.weight() {
        return Ok(SurdSum::zero());
    }
    let h = c.left.partition().m;
    let (sp, u2p) = (c.s_prime(), c.split.1);
    let rm = [c.right.lambda + c.right.mu, c.right.mu, 0];
    let (r1, r2, r) = (q.rho1.pair(), q.rho2.pair(), q.rho.pair());
    let mut tot = SurdSum::zero();
    for (p, a, qb) in summands(c, u, q) {
        let third = mf_rwc_generic(ft, &[sp, 0, 0], u2p, &[a, 0], p, &rm, &r2);
        if third.is_zero() {
            continue;
        }
        let x = mf_rwc_generic(ft, &h, sp, &r1, a, &u.u.m, &qb);
        let y = mf_rwc_generic(ft, &u.u.m, u2p, &qb, p, &c.target.m, &r);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let w = su2_racah_unitary(ft, r1, [a, 0], qb, [p, 0], r, r2);
        tot += &(&(&(&x * &y) * &third) * &w);
    }
    Ok(tot)
}

/// Squared normalization of the U(3) > U(2) multiplicity-free coefficient
/// written out factor by factor. `None` on a negative factorial argument.
pub fn u3_prefactor(
    ft: &FactorialTable,
    h: [i64; 3],
    p: i64,
    q: [i64; 2],
    pp: i64,
    m: [i64; 3],
    n: [i64; 2],
) -> Option<Rational> {
    let [h1, h2, h3] = h;
    let [m1, m2, m3] = m;
    let [q1, q2] = q;
    let [n1, n2] = n;
    let num = [
        p - pp,
        h1 - q1,
        h1 - q2 + 1,
        h2 - q2,
        h1 - m2,
        h1 - m3 + 1,
        h2 - m3,
        n1 - m2,
        n1 - m3 + 1,
        n2 - m3,
        n1 - q1,
        n1 - q2 + 1,
        n2 - q2,
    ];
    let den = [
        q1 - h2,
        q1 - h3 + 1,
        q2 - h3,
        m1 - h1,
        m1 - h2 + 1,
        m1 - h3 + 2,
        m2 - h2,
        m2 - h3 + 1,
        m3 - h3,
        m1 - n1,
        m1 - n2 + 1,
        m2 - n2,
        q1 - n2,
    ];
    let v = ft.ratio(&num, &den)?;
    let dims = (m1 - m2 + 1) * (m1 - m3 + 2) * (m2 - m3 + 1) * (q1 - q2 + 1);
    Some(v * Rational::from_integer(BigInt::from(dims)))
}

/// Closed form: explicit prefactors, two double-sum kernels, the single-sum
/// kernel for the split of the second factor, and a Racah coefficient.
pub fn aux_rwc_closed(c: &AuxCoupling, u: &AuxLabel, q: &RhoTriple) -> Result<SurdSum> {
    aux_rwc_closed_with(&FactorialTable::default(), c, u, q)
}

pub fn aux_rwc_closed_with(ft: &FactorialTable, c: &AuxCoupling, u: &AuxLabel, q: &RhoTriple) -> Result<SurdSum> {
    c.check(u, q)?;
    if q.rho1.weight() + q.rho2.weight() != q.rho.weight() {
        return Ok(SurdSum::zero());
    }
    let h = c.left.partition().m;
    let um = u.u.m;
    let m = c.target.m;
    let (sp, u2p) = (c.s_prime(), c.split.1);
    let (big_l, big_m) = (c.right.lambda + c.right.mu, c.right.mu);
    let (r1, r2, r) = (q.rho1.pair(), q.rho2.pair(), q.rho.pair());
    let mut tot = SurdSum::zero();
    for (p, a, qb) in summands(c, u, q) {
        let pre = [
            u3_prefactor(ft, h, sp, r1, a, um, qb),
            u3_prefactor(ft, um, u2p, qb, p, m, r),
            u3_prefactor(ft, [sp, 0, 0], u2p, [a, 0], p, [big_l, big_m, 0], r2),
        ];
        let Some(pre) = pre.into_iter().try_fold(Rational::one(), |acc, x| x.map(|v| acc * v)) else {
            continue;
        };
        let scale = ft.ratio(&[a, big_l + 1, big_m], &[r2[1], r2[0] + 1, sp + 1]);
        let Some(scale) = scale else { continue };
        let f = f2_kernel(ft, h, um, r1, qb)
            * f2_kernel(ft, um, m, qb, r)
            * scale
            * f_kernel(ft, sp, a, u2p, p, [big_l, big_m], r2);
        if f.is_zero() || pre.is_zero() {
            continue;
        }
        let w = su2_racah_unitary(ft, r1, [a, 0], qb, [p, 0], r, r2);
        tot += &(&SurdSum::sqrt_of(&pre, false)?.scale(&f) * &w);
    }
    Ok(tot)
}

/// Outcome of one orthogonality identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoResult {
    pub name: &'static str,
    pub checked: usize,
    /// First violating tuple, if any.
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxReport {
    pub results: Vec<OrthoResult>,
}

impl AuxReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.violation.is_none())
    }
}

fn triangular(a: U2Label, b: U2Label, c: U2Label) -> bool {
    RhoTriple::new(a, b, c).is_triangular()
}

/// Both orthogonality identities for the family of second factors sharing a split.
///
/// Rows: for each `(l2,u2)` in the family (and each target U(2) label), the
/// vectors over `(u, m)` indexed by `(rho1, rho2)` must be orthonormal.
/// Columns: at a fixed target U(2) label, the vectors over the whole family
/// and all `(rho1, rho2)` indexed by `(u, m)` must be orthonormal.
pub fn aux_orthogonality_check(left: Su3Irrep, split: (i64, i64)) -> Result<AuxReport> {
    let ft = FactorialTable::default();
    aux_orthogonality_check_with(left, split, |c, u, q| aux_rwc_recoupled_with(&ft, c, u, q))
}

/// As [`aux_orthogonality_check`] with a caller-supplied evaluator.
pub fn aux_orthogonality_check_with<F>(left: Su3Irrep, split: (i64, i64), mut eval: F) -> Result<AuxReport>
where
    F: FnMut(&AuxCoupling, &AuxLabel, &RhoTriple) -> Result<SurdSum>,
{
    let (l2p, u2p) = split;
    let sp = l2p + u2p;
    let family: Vec<Su3Irrep> = (0..=sp.min(u2p)).map(|j| Su3Irrep::new(sp + u2p - 2 * j, j)).collect();
    let cols: Vec<(Partition3, Partition3)> =
        pieri(left.partition(), sp).into_iter().flat_map(|u| pieri(u, u2p).into_iter().map(move |m| (u, m))).collect();
    let mut rhos: Vec<U2Label> = cols.iter().flat_map(|(_, m)| u2_sublabels(*m)).collect();
    rhos.sort();
    rhos.dedup();

    let mut rows_res = OrthoResult { name: "rows", checked: 0, violation: None };
    let mut cols_res = OrthoResult { name: "columns", checked: 0, violation: None };
    for rho in rhos {
        let live: Vec<usize> = (0..cols.len()).filter(|&i| rho.fits(&cols[i].1)).collect();
        // one vector per (member, rho1, rho2), over the live columns
        let mut all: Vec<(Su3Irrep, U2Label, U2Label, Vec<SurdSum>)> = Vec::new();
        for &right in &family {
            for r1 in u2_sublabels(left.partition()) {
                for r2 in u2_sublabels(right.partition()) {
                    if r1.weight() + r2.weight() != rho.weight() || !triangular(r1, r2, rho) {
                        continue;
                    }
                    let q = RhoTriple::new(r1, r2, rho);
                    let mut v = Vec::with_capacity(live.len());
                    for &i in &live {
                        let (u, m) = cols[i];
                        let c = AuxCoupling::with_split(left, right, split, m)?;
                        v.push(eval(&c, &AuxLabel { u }, &q)?);
                    }
                    all.push((right, r1, r2, v));
                }
            }
        }
        for &right in &family {
            let mine: Vec<_> = all.iter().filter(|x| x.0 == right).collect();
            for (i, a) in mine.iter().enumerate() {
                for (j, b) in mine.iter().enumerate() {
                    let s: SurdSum = a.3.iter().zip(&b.3).map(|(x, y)| x * y).sum();
                    rows_res.checked += 1;
                    if rows_res.violation.is_none() && s != delta(i == j) {
                        rows_res.violation =
                            Some(format!("{right} rho={rho} ({} {}) ({} {}): {s}", a.1, a.2, b.1, b.2));
                    }
                }
            }
        }
        for (i, &ci) in live.iter().enumerate() {
            for (j, &cj) in live.iter().enumerate() {
                let s: SurdSum = all.iter().map(|x| &x.3[i] * &x.3[j]).sum();
                cols_res.checked += 1;
                if cols_res.violation.is_none() && s != delta(i == j) {
                    cols_res.violation = Some(format!(
                        "rho={rho} u={} m={} / u={} m={}: {s}",
                        cols[ci].0, cols[ci].1, cols[cj].0, cols[cj].1
                    ));
                }
            }
        }
    }
    Ok(AuxReport { results: vec![rows_res, cols_res] })
}

fn delta(same: bool) -> SurdSum {
    if same {
        SurdSum::one()
    } else {
        SurdSum::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::mf_prefactor;

    fn triple(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> RhoTriple {
        RhoTriple::new(U2Label::new(a[0], a[1]), U2Label::new(b[0], b[1]), U2Label::new(c[0], c[1]))
    }

    #[test]
    fn explicit_prefactor_matches_hook_form() {
        let ft = FactorialTable::default();
        for h in [[2, 1, 0], [3, 1, 0], [2, 2, 1]] {
            for p in 0..3 {
                for m in pieri(Partition3::new(h[0], h[1], h[2]), p) {
                    for q in u2_sublabels(Partition3::new(h[0], h[1], h[2])) {
                        for n in u2_sublabels(m) {
                            let pp = n.weight() - q.weight();
                            if !(0..=p).contains(&pp) {
                                continue;
                            }
                            let a = u3_prefactor(&ft, h, p, q.pair(), pp, m.m, n.pair());
                            let b = mf_prefactor(&ft, &h, p, &q.pair(), pp, &m.m, &n.pair());
                            assert_eq!(a, b, "{h:?} {p} {q} {m} {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_equals_recoupled_small() {
        let c = AuxCoupling::with_split(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), (1, 1), Partition3::new(3, 2, 1))
            .unwrap();
        let mut nonzero = 0;
        for u in c.labels() {
            for q in
                crate::engine::rho_triples(&crate::labels::Coupling::new(c.left, c.right, c.target).unwrap().unwrap())
            {
                let a = aux_rwc_recoupled(&c, &u, &q).unwrap();
                assert_eq!(a, aux_rwc_closed(&c, &u, &q).unwrap(), "{} {q}", u.u);
                nonzero += usize::from(!a.is_zero());
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn bad_split_is_rejected() {
        let r = AuxCoupling::with_split(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), (2, 1), Partition3::new(3, 2, 1));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn symmetric_split_collapses_to_one_coefficient() {
        let c = AuxCoupling::new(Su3Irrep::new(2, 1), Su3Irrep::new(2, 0), Partition3::new(4, 2, 0)).unwrap();
        let ft = FactorialTable::default();
        let q = triple([2, 1], [1, 0], [3, 1]);
        for u in c.labels() {
            let direct = mf_rwc_generic(&ft, &[3, 1, 0], 2, &[2, 1], 1, &u.u.m, &[3, 1]);
            assert_eq!(aux_rwc_recoupled(&c, &u, &q).unwrap(), direct);
        }
    }

    #[test]
    fn orthogonality_and_fault_injection() {
        let rep = aux_orthogonality_check(Su3Irrep::new(1, 1), (1, 1)).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let ft = FactorialTable::default();
        let mut hit = false;
        let bad = aux_orthogonality_check_with(Su3Irrep::new(1, 1), (1, 1), |c, u, q| {
            let v = aux_rwc_recoupled_with(&ft, c, u, q)?;
            if !hit && !v.is_zero() {
                hit = true;
                return Ok(v.scale(&Rational::new(2.into(), 1.into())));
            }
            Ok(v)
        })
        .unwrap();
        assert!(!bad.passed());
    }
}
