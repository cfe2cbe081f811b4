//! Recoupling contractions `G` of multiplicity-free coefficients.
//!
//! `G([mb], eta)` overlaps the intermediate U(3) label `[mb]` of the
//! complementary U(4) > U(3) chain with the multiplicity label `eta`;
//! `G([mb]; rho1 rho2 rho)` does the same with SU(3) > U(2) labels.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::SurdSum;
use crate::error::{Error, Result};
use crate::kernels::Workspace;
use crate::labels::{partitions3, Coupling, Partition3, U2Label};

/// Intermediate label `[lambda-k1-k2, mu1+k1, k2]` with `lambda = l1+u1+l2+u2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarLabel {
    pub k1: i64,
    pub k2: i64,
}

impl BarLabel {
    pub const fn new(k1: i64, k2: i64) -> Self {
        BarLabel { k1, k2 }
    }

    pub fn partition(&self, c: &Coupling) -> Partition3 {
        let lam = c.left.lambda + c.left.mu + c.right.lambda + c.right.mu;
        Partition3::new(lam - self.k1 - self.k2, c.left.mu + self.k1, self.k2)
    }
}

impl fmt::Display for BarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k=({},{})", self.k1, self.k2)
    }
}

/// U(2) labels of the two factors and of the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhoTriple {
    pub rho1: U2Label,
    pub rho2: U2Label,
    pub rho: U2Label,
}

impl RhoTriple {
    pub const fn new(rho1: U2Label, rho2: U2Label, rho: U2Label) -> Self {
        RhoTriple { rho1, rho2, rho }
    }

    /// Betweenness against the three parents and additive weights.
    pub fn is_valid_for(&self, c: &Coupling) -> bool {
        self.rho1.fits(&c.left.partition())
            && self.rho2.fits(&c.right.partition())
            && self.rho.fits(&c.target)
            && self.rho1.weight() + self.rho2.weight() == self.rho.weight()
    }

    /// SU(2) triangle `|j1 - j2| <= j <= j1 + j2`.
    pub fn is_triangular(&self) -> bool {
        let (a, b, j) = (self.rho1.two_j(), self.rho2.two_j(), self.rho.two_j());
        (a - b).abs() <= j && j <= a + b && (a + b + j) % 2 == 0
    }
}

impl fmt::Display for RhoTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.rho1, self.rho2, self.rho)
    }
}

fn h1(c: &Coupling) -> [i64; 3] {
    [c.left.lambda + c.left.mu, c.left.mu, 0]
}

/// All intermediate labels for the coupling: `[mb] / [h1]` and `[m] / [mb]`
/// are both horizontal strips.
pub fn k_ranges(c: &Coupling) -> Vec<BarLabel> {
    let h = h1(c);
    let m = c.target.m;
    let mut out = Vec::new();
    for k1 in 0..=c.left.lambda {
        for k2 in 0..=c.left.mu {
            let b = BarLabel::new(k1, k2);
            let mb = b.partition(c).m;
            let inner = mb[0] >= h[0] && h[0] >= mb[1] && mb[1] >= h[1] && h[1] >= mb[2] && mb[2] >= 0;
            let outer = m[0] >= mb[0] && mb[0] >= m[1] && m[1] >= mb[1] && mb[1] >= m[2] && m[2] >= mb[2];
            if inner && outer {
                out.push(b);
            }
        }
    }
    out
}

fn key(tag: i64, c: &Coupling, b: BarLabel, rest: &[i64]) -> Vec<i64> {
    let mut k = vec![tag, c.left.lambda, c.left.mu, c.right.lambda, c.right.mu];
    k.extend_from_slice(&c.target.m);
    k.push(b.k1);
    k.push(b.k2);
    k.extend_from_slice(rest);
    k
}

fn check_bar(c: &Coupling, bar: BarLabel) -> Result<()> {
    if k_ranges(c).contains(&bar) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{bar} is not an intermediate label of {c}")))
    }
}

pub fn g_eta(c: &Coupling, bar: BarLabel, eta: i64) -> Result<SurdSum> {
    g_eta_with(&mut Workspace::new(), c, bar, eta)
}

/// `G([mb], eta)`, contracted over the U(3) intermediate of the U(4) chain and
/// divided by the coefficient that fixes the U(2) part of `[m]` at `[h1]`.
pub fn g_eta_with(ws: &mut Workspace, c: &Coupling, bar: BarLabel, eta: i64) -> Result<SurdSum> {
    if eta < c.eta_min || eta > c.eta_max {
        return Err(Error::Domain(format!("eta = {eta} outside [{}, {}] for {c}", c.eta_min, c.eta_max)));
    }
    check_bar(c, bar)?;
    let k = key(0, c, bar, &[eta]);
    if let Some(v) = ws.g.get(&k) {
        return Ok(v.clone());
    }
    let v = g_eta_raw(ws, c, bar, eta)?;
    ws.g.insert(k, v.clone());
    Ok(v)
}

fn g_eta_raw(ws: &mut Workspace, c: &Coupling, bar: BarLabel, eta: i64) -> Result<SurdSum> {
    let u2 = c.right.mu;
    let s = c.right.lambda + u2;
    let h3 = h1(c);
    let h2 = [h3[0], h3[1]];
    let h4 = [h3[0], h3[1], 0, 0];
    let mb = bar.partition(c).m;
    let mb4 = [mb[0], mb[1], mb[2], 0];
    let [m1, m2, m3] = c.target.m;
    let m4 = [m1, m2, m3, 0];
    let mp = [m1, m2 - eta, m3 - u2 + eta];
    let mut tot = SurdSum::zero();
    for p2 in 0..=u2 {
        let p1 = s - p2;
        let c5 = ws.mf(&[s, 0, 0, 0], u2, &[p1, 0, 0], p2, &[s, u2, 0, 0], &[s, 0, 0])
            * ws.mf(&[p1, 0, 0], p2, &[0, 0], 0, &[s, 0, 0], &[0, 0]);
        if c5.is_zero() {
            continue;
        }
        for mbp in partitions3(h3[0] + h3[1] + p1) {
            let q = mbp.m;
            let a = ws.mf(&h4, s, &h3, p1, &mb4, &q) * ws.mf(&h3, p1, &h2, 0, &q, &h2);
            if a.is_zero() {
                continue;
            }
            let b = ws.mf(&mb4, u2, &q, p2, &m4, &mp) * ws.mf(&q, p2, &h2, 0, &mp, &h2);
            if !b.is_zero() {
                tot += &(&(&a * &b) * &c5);
            }
        }
    }
    let norm = ws.mf(&h3, s, &h2, 0, &mp, &h2);
    if norm.is_zero() {
        return Err(Error::Inconsistent(format!("vanishing normalization for eta = {eta} in {c}")));
    }
    tot.div_single(&norm)
}

pub fn g_rho(c: &Coupling, bar: BarLabel, rho: &RhoTriple) -> Result<SurdSum> {
    g_rho_with(&mut Workspace::new(), c, bar, rho)
}

/// `G([mb]; rho1 rho2 rho)`: two coefficients through `[mb]`, one for the
/// symmetric split of the second factor, and a U(2) Racah coefficient.
pub fn g_rho_with(ws: &mut Workspace, c: &Coupling, bar: BarLabel, rho: &RhoTriple) -> Result<SurdSum> {
    if !rho.rho1.fits(&c.left.partition()) || !rho.rho2.fits(&c.right.partition()) || !rho.rho.fits(&c.target) {
        return Err(Error::Domain(format!("labels {rho} do not fit {c}")));
    }
    check_bar(c, bar)?;
    if rho.rho1.weight() + rho.rho2.weight() != rho.rho.weight() {
        return Ok(SurdSum::zero());
    }
    let (r1, r2, r) = (rho.rho1.pair(), rho.rho2.pair(), rho.rho.pair());
    let k = key(1, c, bar, &[r1[0], r1[1], r2[0], r2[1], r[0], r[1]]);
    if let Some(v) = ws.g.get(&k) {
        return Ok(v.clone());
    }
    let u2 = c.right.mu;
    let s = c.right.lambda + u2;
    let h3 = h1(c);
    let mb = bar.partition(c).m;
    let m = c.target.m;
    let mut tot = SurdSum::zero();
    for a in 0..=s {
        let b = rho.rho2.weight() - a;
        if !(0..=u2).contains(&b) {
            continue;
        }
        let third = ws.mf(&[s, 0, 0], u2, &[a, 0], b, &[s, u2, 0], &r2);
        if third.is_zero() {
            continue;
        }
        let wb = rho.rho1.weight() + a;
        for rb0 in mb[1]..=mb[0] {
            let rb = [rb0, wb - rb0];
            if rb[1] < mb[2] || rb[1] > mb[1] {
                continue;
            }
            let x = ws.mf(&h3, s, &r1, a, &mb, &rb);
            if x.is_zero() {
                continue;
            }
            let y = ws.mf(&mb, u2, &rb, b, &m, &r);
            if y.is_zero() {
                continue;
            }
            let w = ws.racah(r1, [a, 0], rb, [b, 0], r, r2);
            if !w.is_zero() {
                tot += &(&(&(&x * &y) * &third) * &w);
            }
        }
    }
    ws.g.insert(k, tot.clone());
    Ok(tot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::labels::Su3Irrep;
    use alloc::string::ToString;

    fn c321() -> Coupling {
        Coupling::new(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), Partition3::new(3, 2, 1)).unwrap().unwrap()
    }

    #[test]
    fn bars_of_the_golden_coupling() {
        assert_eq!(k_ranges(&c321()), vec![BarLabel::new(0, 1), BarLabel::new(1, 0), BarLabel::new(1, 1)]);
    }

    #[test]
    fn scalar_factor_has_one_bar() {
        let c = Coupling::new(Su3Irrep::new(2, 1), Su3Irrep::new(0, 0), Partition3::new(3, 1, 0)).unwrap().unwrap();
        assert_eq!(k_ranges(&c), vec![BarLabel::new(0, 0)]);
    }

    #[test]
    fn gram_entries_of_the_golden_coupling() {
        let c = c321();
        let mut ws = Workspace::new();
        let mut g00 = SurdSum::zero();
        let mut g01 = SurdSum::zero();
        for b in k_ranges(&c) {
            let e0 = g_eta_with(&mut ws, &c, b, 0).unwrap();
            let e1 = g_eta_with(&mut ws, &c, b, 1).unwrap();
            g00 += &(&e0 * &e0);
            g01 += &(&e0 * &e1);
        }
        assert_eq!(g00.as_rational(), Some(rat(7, 10)));
        assert_eq!(g01.to_string(), "-sqrt(1/60)");
    }

    #[test]
    fn eta_out_of_range_is_rejected() {
        assert!(matches!(g_eta(&c321(), BarLabel::new(0, 1), 2), Err(Error::Domain(_))));
        assert!(matches!(g_eta(&c321(), BarLabel::new(0, 0), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn weight_violation_vanishes() {
        let r = RhoTriple::new(U2Label::new(2, 1), U2Label::new(2, 0), U2Label::new(2, 2));
        assert!(g_rho(&c321(), BarLabel::new(1, 0), &r).unwrap().is_zero());
    }
}
