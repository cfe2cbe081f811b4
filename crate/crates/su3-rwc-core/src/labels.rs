//! SU(3) / U(3) irrep labels, U(2) sublabels, dimensions and product decomposition.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// SU(3) irrep `(lambda, mu)`, equivalently the partition `[lambda+mu, mu, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Su3Irrep {
    pub lambda: i64,
    pub mu: i64,
}

impl Su3Irrep {
    pub const fn new(lambda: i64, mu: i64) -> Self {
        Su3Irrep { lambda, mu }
    }

    pub fn partition(&self) -> Partition3 {
        Partition3::new(self.lambda + self.mu, self.mu, 0)
    }

    /// Box count `lambda + 2 mu`.
    pub fn boxes(&self) -> i64 {
        self.lambda + 2 * self.mu
    }

    pub fn is_valid(&self) -> bool {
        self.lambda >= 0 && self.mu >= 0
    }
}

impl fmt::Display for Su3Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda, self.mu)
    }
}

/// Three-row partition `[m1, m2, m3]`, weakly decreasing and nonnegative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition3 {
    pub m: [i64; 3],
}

impl Partition3 {
    pub const fn new(m1: i64, m2: i64, m3: i64) -> Self {
        Partition3 { m: [m1, m2, m3] }
    }

    pub fn is_valid(&self) -> bool {
        self.m[0] >= self.m[1] && self.m[1] >= self.m[2] && self.m[2] >= 0
    }

    pub fn boxes(&self) -> i64 {
        self.m.iter().sum()
    }

    /// The SU(3) irrep obtained by dropping full columns.
    pub fn su3(&self) -> Su3Irrep {
        Su3Irrep::new(self.m[0] - self.m[1], self.m[1] - self.m[2])
    }
}

impl fmt::Display for Partition3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.m[0], self.m[1], self.m[2])
    }
}

/// Two-row U(2) label `[q1, q2]` with an optional weight `q11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct U2Label {
    pub q1: i64,
    pub q2: i64,
    pub q11: Option<i64>,
}

impl U2Label {
    pub const fn new(q1: i64, q2: i64) -> Self {
        U2Label { q1, q2, q11: None }
    }

    pub fn pair(&self) -> [i64; 2] {
        [self.q1, self.q2]
    }

    pub fn weight(&self) -> i64 {
        self.q1 + self.q2
    }

    /// Twice the SU(2) spin, `q1 - q2`.
    pub fn two_j(&self) -> i64 {
        self.q1 - self.q2
    }

    /// Betweenness against a parent, plus `q1 >= q11 >= q2` when the weight is present.
    pub fn fits(&self, parent: &Partition3) -> bool {
        let [m1, m2, m3] = parent.m;
        let inner = self.q11.is_none_or(|w| self.q1 >= w && w >= self.q2);
        m1 >= self.q1 && self.q1 >= m2 && m2 >= self.q2 && self.q2 >= m3 && inner
    }
}

impl fmt::Display for U2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q11 {
            Some(w) => write!(f, "[{},{};{}]", self.q1, self.q2, w),
            None => write!(f, "[{},{}]", self.q1, self.q2),
        }
    }
}

/// A nonempty coupling `left x right -> target` with its multiplicity range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coupling {
    pub left: Su3Irrep,
    pub right: Su3Irrep,
    pub target: Partition3,
    pub eta_min: i64,
    pub eta_max: i64,
}

impl Coupling {
    /// `Ok(None)` when the target does not occur; an error when box counts differ.
    pub fn new(left: Su3Irrep, right: Su3Irrep, target: Partition3) -> Result<Option<Self>> {
        Ok(multiplicity_range(left, right, target)?.map(|(eta_min, eta_max)| Coupling {
            left,
            right,
            target,
            eta_min,
            eta_max,
        }))
    }

    pub fn multiplicity(&self) -> usize {
        (self.eta_max - self.eta_min + 1) as usize
    }

    pub fn etas(&self) -> impl Iterator<Item = i64> {
        self.eta_min..=self.eta_max
    }

    /// The same target with the factors in the opposite order.
    pub fn swapped(&self) -> Option<Coupling> {
        Coupling::new(self.right, self.left, self.target).ok().flatten()
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}->{}", self.left, self.right, self.target)
    }
}

pub fn dim_su3(irrep: Su3Irrep) -> u64 {
    let (l, m) = (irrep.lambda as u64, irrep.mu as u64);
    (l + 1) * (m + 1) * (l + m + 2) / 2
}

/// U(3) dimension of a partition (equals the SU(3) dimension of its reduction).
pub fn dim_u3(p: Partition3) -> u64 {
    dim_su3(p.su3())
}

/// Multiplicity range `(eta_min, eta_max)` of `target` in `left x right`.
pub fn multiplicity_range(left: Su3Irrep, right: Su3Irrep, target: Partition3) -> Result<Option<(i64, i64)>> {
    if !left.is_valid() || !right.is_valid() {
        return Err(Error::Domain(format!("irrep labels must be nonnegative: {left} {right}")));
    }
    if !target.is_valid() {
        return Err(Error::Domain(format!("{target} is not a partition")));
    }
    if target.boxes() != left.boxes() + right.boxes() {
        return Err(Error::InvalidCoupling(format!(
            "{target} has {} boxes, {left} x {right} has {}",
            target.boxes(),
            left.boxes() + right.boxes()
        )));
    }
    let (l1, u1, l2, u2) = (left.lambda, left.mu, right.lambda, right.mu);
    let [m1, m2, m3] = target.m;
    let hi = [m1 - l1 - u1, u2, m2 - u1, l2 + u2 - m3, u1 + u2 - m3, m2 - m3].into_iter().min().unwrap();
    let lo = [0, u2 - m3, m2 - l1 - u1].into_iter().max().unwrap();
    Ok(if lo <= hi { Some((lo, hi)) } else { None })
}

/// Littlewood-Richardson count by direct tableau enumeration.
///
/// Fills the skew shape `target / [l1+u1, u1, 0]` with `l2+u2` ones and
/// `u2` twos, rows weakly increasing, columns strictly increasing, and the
/// right-to-left, top-to-bottom reading word a lattice word.
pub fn lr_multiplicity(left: Su3Irrep, right: Su3Irrep, target: Partition3) -> u64 {
    if !target.is_valid() || target.boxes() != left.boxes() + right.boxes() {
        return 0;
    }
    let inner = left.partition().m;
    let outer = target.m;
    if (0..3).any(|i| inner[i] > outer[i]) {
        return 0;
    }
    let ones = right.lambda + right.mu;
    let twos = right.mu;
    let len = [outer[0] - inner[0], outer[1] - inner[1], outer[2] - inner[2]];
    let mut count = 0;
    // a[i] ones followed by len[i]-a[i] twos in row i.
    for a0 in 0..=len[0] {
        for a1 in 0..=len[1] {
            for a2 in 0..=len[2] {
                let a = [a0, a1, a2];
                let n1: i64 = a.iter().sum();
                let n2: i64 = len.iter().sum::<i64>() - n1;
                if n1 != ones || n2 != twos {
                    continue;
                }
                if lr_valid(&inner, &outer, &a) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn lr_valid(inner: &[i64; 3], outer: &[i64; 3], a: &[i64; 3]) -> bool {
    let entry = |row: usize, col: i64| -> Option<u8> {
        if col < inner[row] || col >= outer[row] {
            None
        } else if col - inner[row] < a[row] {
            Some(1)
        } else {
            Some(2)
        }
    };
    for row in 1..3 {
        for col in inner[row]..outer[row] {
            if let (Some(below), Some(above)) = (entry(row, col), entry(row - 1, col)) {
                if below <= above {
                    return false;
                }
            }
        }
    }
    let (mut c1, mut c2) = (0, 0);
    for row in 0..3 {
        for col in (inner[row]..outer[row]).rev() {
            match entry(row, col) {
                Some(1) => c1 += 1,
                _ => c2 += 1,
            }
            if c2 > c1 {
                return false;
            }
        }
    }
    true
}

/// All targets of `left x right` with their multiplicities.
pub fn decompose_product(left: Su3Irrep, right: Su3Irrep) -> Vec<(Partition3, u64)> {
    let n = left.boxes() + right.boxes();
    let mut out = Vec::new();
    for m1 in (0..=n).rev() {
        for m2 in (0..=m1.min(n - m1)).rev() {
            let m3 = n - m1 - m2;
            if m3 > m2 || m3 < 0 {
                continue;
            }
            let t = Partition3::new(m1, m2, m3);
            if let Ok(Some((lo, hi))) = multiplicity_range(left, right, t) {
                out.push((t, (hi - lo + 1) as u64));
            }
        }
    }
    out
}

/// Every nonempty coupling with all four Dynkin labels at most `max`.
pub fn couplings_up_to(max: i64) -> Vec<Coupling> {
    let mut out = Vec::new();
    for l1 in 0..=max {
        for u1 in 0..=max {
            for l2 in 0..=max {
                for u2 in 0..=max {
                    let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
                    for (t, _) in decompose_product(a, b) {
                        if let Ok(Some(c)) = Coupling::new(a, b, t) {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    out
}

/// All `[q1, q2]` with `m1 >= q1 >= m2 >= q2 >= m3`.
pub fn u2_sublabels(parent: Partition3) -> Vec<U2Label> {
    let [m1, m2, m3] = parent.m;
    let mut out = Vec::new();
    for q1 in (m2..=m1).rev() {
        for q2 in (m3..=m2).rev() {
            out.push(U2Label::new(q1, q2));
        }
    }
    out
}

/// All three-row partitions `[a, b, c]` with `a + b + c = n`.
pub fn partitions3(n: i64) -> Vec<Partition3> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=a.min(n - a)).rev() {
            let c = n - a - b;
            if c >= 0 && c <= b {
                out.push(Partition3::new(a, b, c));
            }
        }
    }
    out
}

/// Targets `[m]` with `[m] / [h]` a horizontal strip of `p` boxes (Pieri rule).
pub fn pieri(h: Partition3, p: i64) -> Vec<Partition3> {
    partitions3(h.boxes() + p)
        .into_iter()
        .filter(|m| m.m[0] >= h.m[0] && h.m[0] >= m.m[1] && m.m[1] >= h.m[1] && h.m[1] >= m.m[2] && m.m[2] >= h.m[2])
        .collect()
}
