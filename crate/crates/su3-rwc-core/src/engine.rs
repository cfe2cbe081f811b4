//! Gram matrices, the triangular (Cholesky) recursion, full coefficient
//! tables, SU(3) Racah coefficients and exchange data.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::arith::{Rational, SurdSum};
use crate::error::{Error, Result};
use crate::gpoly::{g_eta_with, g_rho_with, k_ranges, BarLabel, RhoTriple};
use crate::kernels::Workspace;
use crate::labels::{u2_sublabels, Coupling, U2Label};

/// `entries[i][j]` is the overlap of multiplicity labels `eta_i` and `eta_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub coupling: Coupling,
    pub entries: Vec<Vec<SurdSum>>,
}

/// Upper triangular: `entries[j][k] = <eta_j / eta_k>`, zero for `j > k`,
/// positive diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialRwcMatrix {
    pub coupling: Coupling,
    pub entries: Vec<Vec<SurdSum>>,
}

/// Reduced coefficients `<eta / rho1 rho2 rho>` for one coupling.
///
/// Rows are ordered by `rho` (descending), then `rho1`, then `rho2`; only
/// weight-consistent, SU(2)-triangular triples are listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RwcTable {
    pub coupling: Coupling,
    pub rows: Vec<(RhoTriple, Vec<SurdSum>)>,
}

impl RwcTable {
    pub fn etas(&self) -> Vec<i64> {
        self.coupling.etas().collect()
    }

    pub fn get(&self, eta: i64, rho: &RhoTriple) -> Option<&SurdSum> {
        let col = usize::try_from(eta - self.coupling.eta_min).ok()?;
        self.rows.iter().find(|(r, _)| r == rho).and_then(|(_, v)| v.get(col))
    }

    /// Rows with the given target label.
    pub fn block(&self, rho: U2Label) -> impl Iterator<Item = &(RhoTriple, Vec<SurdSum>)> {
        self.rows.iter().filter(move |(r, _)| r.rho == rho)
    }
}

/// All weight-consistent, SU(2)-triangular label triples of a coupling.
pub fn rho_triples(c: &Coupling) -> Vec<RhoTriple> {
    let s1 = u2_sublabels(c.left.partition());
    let s2 = u2_sublabels(c.right.partition());
    let mut out = Vec::new();
    for rho in u2_sublabels(c.target) {
        for r1 in &s1 {
            for r2 in &s2 {
                let t = RhoTriple::new(*r1, *r2, rho);
                if r1.weight() + r2.weight() == rho.weight() && t.is_triangular() {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn g_matrix(ws: &mut Workspace, c: &Coupling) -> Result<(Vec<BarLabel>, Vec<Vec<SurdSum>>)> {
    let bars = k_ranges(c);
    let mut g = Vec::with_capacity(bars.len());
    for &b in &bars {
        let row = c.etas().map(|e| g_eta_with(ws, c, b, e)).collect::<Result<Vec<_>>>()?;
        g.push(row);
    }
    Ok((bars, g))
}

pub fn build_gram(c: &Coupling) -> Result<GramMatrix> {
    build_gram_with(&mut Workspace::new(), c)
}

pub fn build_gram_with(ws: &mut Workspace, c: &Coupling) -> Result<GramMatrix> {
    let (_, g) = g_matrix(ws, c)?;
    Ok(GramMatrix { coupling: *c, entries: gram_of(&g, c.multiplicity()) })
}

fn gram_of(g: &[Vec<SurdSum>], n: usize) -> Vec<Vec<SurdSum>> {
    let mut out = vec![vec![SurdSum::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v: SurdSum = g.iter().map(|row| &row[i] * &row[j]).sum();
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    out
}

/// Positive-diagonal Cholesky factor `M` (upper) with `M^T M = gram`.
pub fn cholesky(gram: &[Vec<SurdSum>]) -> Result<Vec<Vec<SurdSum>>> {
    let n = gram.len();
    let mut m = vec![vec![SurdSum::zero(); n]; n];
    for k in 0..n {
        let mut d = gram[k][k].clone();
        for j in 0..k {
            d -= &(&m[j][k] * &m[j][k]);
        }
        let r =
            d.as_rational().ok_or_else(|| Error::Inconsistent(format!("irrational diagonal residual {d} at {k}")))?;
        if !r.is_positive() {
            return Err(Error::Inconsistent(format!("nonpositive diagonal residual {r} at {k}")));
        }
        m[k][k] = SurdSum::sqrt_of(&r, false)?;
        for l in k + 1..n {
            let mut x = gram[k][l].clone();
            for j in 0..k {
                x -= &(&m[j][k] * &m[j][l]);
            }
            m[k][l] = x.div_single(&m[k][k])?;
        }
    }
    Ok(m)
}

/// Solves `M^T x = b` for upper triangular `M`.
fn forward(m: &[Vec<SurdSum>], b: &[SurdSum]) -> Result<Vec<SurdSum>> {
    let mut x: Vec<SurdSum> = Vec::with_capacity(b.len());
    for j in 0..b.len() {
        let mut v = b[j].clone();
        for (i, xi) in x.iter().enumerate() {
            v -= &(&m[i][j] * xi);
        }
        x.push(v.div_single(&m[j][j])?);
    }
    Ok(x)
}

pub fn special_rwc(c: &Coupling) -> Result<SpecialRwcMatrix> {
    special_rwc_with(&mut Workspace::new(), c)
}

pub fn special_rwc_with(ws: &mut Workspace, c: &Coupling) -> Result<SpecialRwcMatrix> {
    let gram = build_gram_with(ws, c)?;
    Ok(SpecialRwcMatrix { coupling: *c, entries: cholesky(&gram.entries)? })
}

pub fn rwc_table(c: &Coupling) -> Result<RwcTable> {
    rwc_table_with(&mut Workspace::new(), c)
}

pub fn rwc_table_with(ws: &mut Workspace, c: &Coupling) -> Result<RwcTable> {
    let (bars, g) = g_matrix(ws, c)?;
    let m = cholesky(&gram_of(&g, c.multiplicity()))?;
    let mut rows = Vec::new();
    for t in rho_triples(c) {
        rows.push((t, table_row(ws, c, &bars, &g, &m, &t)?));
    }
    Ok(RwcTable { coupling: *c, rows })
}

/// One table row from a precomputed special matrix; used by callers that
/// split the rows across workers.
pub fn rwc_row_with(
    ws: &mut Workspace,
    c: &Coupling,
    special: &SpecialRwcMatrix,
    rho: &RhoTriple,
) -> Result<Vec<SurdSum>> {
    let (bars, g) = g_matrix(ws, c)?;
    table_row(ws, c, &bars, &g, &special.entries, rho)
}

fn table_row(
    ws: &mut Workspace,
    c: &Coupling,
    bars: &[BarLabel],
    g: &[Vec<SurdSum>],
    m: &[Vec<SurdSum>],
    t: &RhoTriple,
) -> Result<Vec<SurdSum>> {
    let gr = bars.iter().map(|&b| g_rho_with(ws, c, b, t)).collect::<Result<Vec<_>>>()?;
    let ov: Vec<SurdSum> = (0..c.multiplicity()).map(|e| g.iter().zip(&gr).map(|(row, x)| &row[e] * x).sum()).collect();
    forward(m, &ov)
}

pub fn racah_su3(c: &Coupling, bar: BarLabel, eta: i64) -> Result<SurdSum> {
    racah_su3_with(&mut Workspace::new(), c, bar, eta)
}

/// Recoupling coefficient `R_eta([mb])` between the intermediate label and
/// the orthonormal multiplicity label.
pub fn racah_su3_with(ws: &mut Workspace, c: &Coupling, bar: BarLabel, eta: i64) -> Result<SurdSum> {
    if eta < c.eta_min || eta > c.eta_max {
        return Err(Error::Domain(format!("eta = {eta} outside [{}, {}] for {c}", c.eta_min, c.eta_max)));
    }
    let all = racah_column_with(ws, c, bar)?;
    Ok(all[(eta - c.eta_min) as usize].clone())
}

/// `R_eta([mb])` for every `eta`.
pub fn racah_column_with(ws: &mut Workspace, c: &Coupling, bar: BarLabel) -> Result<Vec<SurdSum>> {
    let (bars, g) = g_matrix(ws, c)?;
    let i = bars
        .iter()
        .position(|&b| b == bar)
        .ok_or_else(|| Error::Domain(format!("{bar} is not an intermediate label of {c}")))?;
    let m = cholesky(&gram_of(&g, c.multiplicity()))?;
    forward(&m, &g[i])
}

fn exchange_sign(t: &RhoTriple) -> Rational {
    let e = (t.rho1.two_j() + t.rho2.two_j() - t.rho.two_j()) / 2;
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Overlap of a table with the table of the swapped coupling at fixed `rho`:
/// `Z[e][f] = sum <e / rho1 rho2 rho> (-1)^{j1+j2-j} <f / rho2 rho1 rho>'`.
///
/// Errors unless the result is the same for every `rho`.
pub fn exchange_z_from_tables(t: &RwcTable, swapped: &RwcTable) -> Result<Vec<Vec<SurdSum>>> {
    let n = t.coupling.multiplicity();
    if swapped.coupling.multiplicity() != n || swapped.coupling.target != t.coupling.target {
        return Err(Error::Domain("tables do not belong to exchanged couplings".into()));
    }
    let mut index: BTreeMap<RhoTriple, &Vec<SurdSum>> = BTreeMap::new();
    for (r, v) in &swapped.rows {
        index.insert(*r, v);
    }
    let mut per_rho: BTreeMap<U2Label, Vec<Vec<SurdSum>>> = BTreeMap::new();
    for (r, v) in &t.rows {
        let key = RhoTriple::new(r.rho2, r.rho1, r.rho);
        let w = index
            .get(&key)
            .ok_or_else(|| Error::Inconsistent(format!("row {key} missing from the exchanged table")))?;
        let z = per_rho.entry(r.rho).or_insert_with(|| vec![vec![SurdSum::zero(); n]; n]);
        let sg = exchange_sign(r);
        for e in 0..n {
            for f in 0..n {
                z[e][f] += &(&v[e] * &w[f]).scale(&sg);
            }
        }
    }
    let mut it = per_rho.into_iter();
    let (_, first) = it.next().ok_or_else(|| Error::Inconsistent("empty table".into()))?;
    for (rho, z) in it {
        if z != first {
            return Err(Error::Inconsistent(format!("exchange matrix depends on rho at {rho}")));
        }
    }
    Ok(first)
}

pub fn exchange_z_matrix(c: &Coupling) -> Result<Vec<Vec<SurdSum>>> {
    let mut ws = Workspace::new();
    let sw = c.swapped().ok_or_else(|| Error::Inconsistent(format!("{c} has no exchanged partner")))?;
    exchange_z_from_tables(&rwc_table_with(&mut ws, c)?, &rwc_table_with(&mut ws, &sw)?)
}

/// Exchange sign of a multiplicity-free coupling.
pub fn exchange_phase_mf(c: &Coupling) -> Result<i32> {
    if c.multiplicity() != 1 {
        return Err(Error::Domain(format!("{c} has multiplicity {}; use the exchange matrix", c.multiplicity())));
    }
    let z = exchange_z_matrix(c)?;
    match z[0][0].as_rational() {
        Some(r) if r.is_one() => Ok(1),
        Some(r) if (-&r).is_one() => Ok(-1),
        _ => Err(Error::Inconsistent(format!("exchange phase {} is not a sign", z[0][0]))),
    }
}

/// Table of a coupling whose second factor is symmetric (`mu2 = 0`), built
/// directly from multiplicity-free coefficients.
pub fn direct_mf_table(c: &Coupling) -> Result<RwcTable> {
    if c.right.mu != 0 {
        return Err(Error::Domain(format!("{c}: the second factor is not symmetric")));
    }
    let mut ws = Workspace::new();
    let h = [c.left.lambda + c.left.mu, c.left.mu, 0];
    let rows = rho_triples(c)
        .into_iter()
        .map(|t| {
            let v = ws.mf(&h, c.right.lambda, &t.rho1.pair(), t.rho2.q1, &c.target.m, &t.rho.pair());
            (t, vec![v])
        })
        .collect();
    Ok(RwcTable { coupling: *c, rows })
}

/// `M^T M` recomputed from a special matrix.
pub fn gram_from_special(m: &SpecialRwcMatrix) -> Vec<Vec<SurdSum>> {
    let n = m.entries.len();
    let mut out = vec![vec![SurdSum::zero(); n]; n];
    for k in 0..n {
        for l in 0..n {
            out[k][l] = (0..n).map(|j| &m.entries[j][k] * &m.entries[j][l]).sum();
        }
    }
    out
}

/// True when every entry below the diagonal vanishes and the diagonal is positive.
pub fn is_canonical_triangular(m: &SpecialRwcMatrix) -> bool {
    let e = &m.entries;
    (0..e.len()).all(|j| (0..j).all(|k| e[j][k].is_zero()) && e[j][j].signum() == core::cmp::Ordering::Greater)
}

/// First `(rho, eta, eta')` at which the rows of one target label fail to be
/// orthonormal, or `None`.
pub fn orthonormality_defect(t: &RwcTable) -> Option<(U2Label, usize, usize)> {
    let n = t.coupling.multiplicity();
    let mut rhos: Vec<U2Label> = t.rows.iter().map(|(r, _)| r.rho).collect();
    rhos.dedup();
    for rho in rhos {
        for e in 0..n {
            for f in 0..n {
                let s: SurdSum = t.block(rho).map(|(_, v)| &v[e] * &v[f]).sum();
                if s != if e == f { SurdSum::one() } else { SurdSum::zero() } {
                    return Some((rho, e, f));
                }
            }
        }
    }
    None
}

/// Completeness over all targets of one product: at each target label the
/// columns `(rho1, rho2)`, running over every target and copy, are
/// orthonormal. Returns the first failing pair.
pub fn completeness_defect(tables: &[RwcTable]) -> Option<(RhoTriple, RhoTriple)> {
    let mut cols: BTreeMap<U2Label, BTreeMap<(U2Label, U2Label), Vec<SurdSum>>> = BTreeMap::new();
    let mut width = 0;
    for t in tables {
        for (r, v) in &t.rows {
            let entry = cols.entry(r.rho).or_default().entry((r.rho1, r.rho2)).or_default();
            entry.resize(width, SurdSum::zero());
            entry.extend(v.iter().cloned());
        }
        width += t.coupling.multiplicity();
    }
    for (rho, block) in &cols {
        for (a, x) in block {
            for (b, y) in block {
                let s: SurdSum = x.iter().zip(y.iter()).map(|(p, q)| p * q).sum();
                if s != if a == b { SurdSum::one() } else { SurdSum::zero() } {
                    return Some((RhoTriple::new(a.0, a.1, *rho), RhoTriple::new(b.0, b.1, *rho)));
                }
            }
        }
    }
    None
}
