//! Exact verification suites over every coupling with Dynkin labels up to a
//! bound. Tables are computed once per run and shared by the suites.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use su3_rwc_core::arith::{FactorialTable, SurdSum};
use su3_rwc_core::aux::{aux_orthogonality_check, aux_rwc_closed_with, aux_rwc_recoupled_with, AuxCoupling};
use su3_rwc_core::engine::{
    build_gram_with, completeness_defect, direct_mf_table, gram_from_special, is_canonical_triangular,
    orthonormality_defect, racah_column_with, rho_triples, rwc_table_with, special_rwc_with, GramMatrix, RwcTable,
    SpecialRwcMatrix,
};
use su3_rwc_core::gpoly::k_ranges;
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{couplings_up_to, lr_multiplicity, multiplicity_range, partitions3, Su3Irrep};

use crate::cache::DiskCache;
use crate::format::{parse_exact, render, Format, Listing};

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub special: SpecialRwcMatrix,
    pub gram: GramMatrix,
    pub table: RwcTable,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub max: i64,
    pub entries: Vec<SweepEntry>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {:<14} {:>6} checks  {:.2?}", self.name, self.checked, self.elapsed);
        if let Some(f) = self.failures.first() {
            s += &format!("  first failure: {f}");
        }
        s
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> (usize, Vec<String>)) -> SuiteResult {
    let start = Instant::now();
    let (checked, failures) = f();
    SuiteResult { name, checked, failures, elapsed: start.elapsed() }
}

/// Special matrix, Gram matrix and table for every coupling up to `max`,
/// through the disk cache when one is given.
pub fn sweep(max: i64, cache: Option<&DiskCache>) -> Result<Sweep, String> {
    let start = Instant::now();
    let entries = couplings_up_to(max)
        .par_iter()
        .map_init(Workspace::new, |ws, c| {
            let (special, table) = match cache {
                Some(d) => d.get_or_compute(ws, c).map_err(|e| e.to_string())?,
                None => (
                    special_rwc_with(ws, c).map_err(|e| format!("{c}: {e}"))?,
                    rwc_table_with(ws, c).map_err(|e| format!("{c}: {e}"))?,
                ),
            };
            let gram = build_gram_with(ws, c).map_err(|e| format!("{c}: {e}"))?;
            Ok(SweepEntry { special, gram, table })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Sweep { max, entries, elapsed: start.elapsed() })
}

fn unit(i: usize, j: usize) -> SurdSum {
    if i == j {
        SurdSum::one()
    } else {
        SurdSum::zero()
    }
}

/// Rows orthonormal at each target label, and completeness over all
/// targets of each product.
pub fn orthogonality(s: &Sweep) -> SuiteResult {
    timed("orthogonality", || {
        let mut failures = Vec::new();
        let mut products: BTreeMap<(Su3Irrep, Su3Irrep), Vec<RwcTable>> = BTreeMap::new();
        for e in &s.entries {
            if let Some((rho, a, b)) = orthonormality_defect(&e.table) {
                failures.push(format!("{}: rows at {rho}, copies {a},{b}", e.table.coupling));
            }
            products.entry((e.table.coupling.left, e.table.coupling.right)).or_default().push(e.table.clone());
        }
        let results: Vec<_> = products
            .par_iter()
            .map(|((a, b), tables)| completeness_defect(tables).map(|(x, y)| format!("{a} x {b}: columns {x} / {y}")))
            .collect();
        failures.extend(results.into_iter().flatten());
        (s.entries.len() + products.len(), failures)
    })
}

/// Upper triangular with positive diagonal, and `M^T M` equal to the Gram matrix.
pub fn triangularity(s: &Sweep) -> SuiteResult {
    timed("triangularity", || {
        let mut failures = Vec::new();
        for e in &s.entries {
            let c = e.special.coupling;
            if !is_canonical_triangular(&e.special) {
                failures.push(format!("{c}: not upper triangular with positive diagonal"));
            }
            if gram_from_special(&e.special) != e.gram.entries {
                failures.push(format!("{c}: M^T M differs from the Gram matrix"));
            }
        }
        (s.entries.len(), failures)
    })
}

/// Closed multiplicity formula against Littlewood-Richardson counts, over
/// every three-row partition with the right box count.
pub fn multiplicity(max: i64) -> SuiteResult {
    timed("multiplicity", || {
        let mut n = 0;
        let mut failures = Vec::new();
        for l1 in 0..=max {
            for u1 in 0..=max {
                for l2 in 0..=max {
                    for u2 in 0..=max {
                        let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
                        for t in partitions3(a.boxes() + b.boxes()) {
                            n += 1;
                            let formula = match multiplicity_range(a, b, t) {
                                Ok(r) => r.map_or(0, |(lo, hi)| (hi - lo + 1) as u64),
                                Err(e) => {
                                    failures.push(format!("{a} x {b} -> {t}: {e}"));
                                    continue;
                                }
                            };
                            let lr = lr_multiplicity(a, b, t);
                            if formula != lr {
                                failures.push(format!("{a} x {b} -> {t}: formula {formula}, LR {lr}"));
                            }
                        }
                    }
                }
            }
        }
        (n, failures)
    })
}

/// Couplings with a symmetric second factor: the general engine agrees with
/// the direct multiplicity-free construction.
pub fn symmetric(s: &Sweep) -> SuiteResult {
    timed("symmetric", || {
        let subset: Vec<_> = s.entries.iter().filter(|e| e.table.coupling.right.mu == 0).collect();
        let failures = subset
            .par_iter()
            .filter_map(|e| match direct_mf_table(&e.table.coupling) {
                Ok(d) if d == e.table => None,
                Ok(_) => Some(format!("{}: direct table differs", e.table.coupling)),
                Err(err) => Some(format!("{}: {err}", e.table.coupling)),
            })
            .collect();
        (subset.len(), failures)
    })
}

/// Closed form against the recoupled form for every split, and both
/// orthogonality relations, for Dynkin labels up to `max`.
pub fn aux(max: i64) -> SuiteResult {
    timed("aux", || {
        let ft = FactorialTable::with_max(8 * max as usize + 16);
        let mut n = 0;
        let mut failures = Vec::new();
        for c in couplings_up_to(max) {
            let b = c.right;
            let splits = (b.mu..=b.boxes() / 2).map(|v| (b.boxes() - 2 * v, v)).filter(|&(x, v)| x + v >= b.mu);
            let triples = rho_triples(&c);
            for sp in splits {
                let ac = match AuxCoupling::with_split(c.left, b, sp, c.target) {
                    Ok(ac) => ac,
                    Err(e) => {
                        failures.push(format!("{c} split {sp:?}: {e}"));
                        continue;
                    }
                };
                for u in ac.labels() {
                    for q in &triples {
                        n += 1;
                        let x = aux_rwc_recoupled_with(&ft, &ac, &u, q);
                        let y = aux_rwc_closed_with(&ft, &ac, &u, q);
                        if x != y {
                            failures.push(format!("{c} split {sp:?} u={} {q}: {x:?} vs {y:?}", u.u));
                        }
                    }
                }
            }
        }
        for l1 in 0..=max {
            for u1 in 0..=max {
                for l2 in 0..=max {
                    for u2 in 0..=max {
                        let left = Su3Irrep::new(l1, u1);
                        match aux_orthogonality_check(left, (l2, u2)) {
                            Ok(rep) => {
                                for r in rep.results {
                                    n += r.checked;
                                    if let Some(v) = r.violation {
                                        failures.push(format!("{left} split ({l2},{u2}) {}: {v}", r.name));
                                    }
                                }
                            }
                            Err(e) => failures.push(format!("{left} split ({l2},{u2}): {e}")),
                        }
                    }
                }
            }
        }
        (n, failures)
    })
}

/// Racah columns orthonormal over the intermediate labels; rows too when
/// there are as many intermediate labels as copies.
pub fn racah(s: &Sweep) -> SuiteResult {
    timed("racah", || {
        let failures: Vec<String> = s
            .entries
            .par_iter()
            .map_init(Workspace::new, |ws, e| {
                let c = e.table.coupling;
                let n = c.multiplicity();
                let cols =
                    k_ranges(&c).into_iter().map(|b| racah_column_with(ws, &c, b)).collect::<Result<Vec<_>, _>>();
                let cols = match cols {
                    Ok(v) => v,
                    Err(err) => return Some(format!("{c}: {err}")),
                };
                for a in 0..n {
                    for b in 0..n {
                        let s: SurdSum = cols.iter().map(|v| &v[a] * &v[b]).sum();
                        if s != unit(a, b) {
                            return Some(format!("{c}: copies {a},{b} give {s}"));
                        }
                    }
                }
                if cols.len() == n {
                    for i in 0..n {
                        for j in 0..n {
                            let s: SurdSum = (0..n).map(|a| &cols[i][a] * &cols[j][a]).sum();
                            if s != unit(i, j) {
                                return Some(format!("{c}: intermediate labels {i},{j} give {s}"));
                            }
                        }
                    }
                }
                None
            })
            .flatten()
            .collect();
        (s.entries.len(), failures)
    })
}

/// Every table printed in the exact format parses back to the same values.
pub fn round_trip(s: &Sweep) -> SuiteResult {
    timed("round-trip", || {
        let failures = s
            .entries
            .par_iter()
            .filter_map(|e| {
                let l = Listing::from_table(&e.table);
                let back = render(&l, Format::Exact, 12).and_then(|t| parse_exact(&t));
                match back {
                    Ok(b) if b.rows == l.rows => None,
                    Ok(_) => Some(format!("{}: values changed", e.table.coupling)),
                    Err(err) => Some(format!("{}: {err}", e.table.coupling)),
                }
            })
            .collect();
        (s.entries.len(), failures)
    })
}

pub fn cache_integrity(cache: &DiskCache) -> SuiteResult {
    timed("cache", || {
        let (n, bad) = cache.verify_all();
        (n, bad.into_iter().map(|e| e.to_string()).collect())
    })
}

/// Every suite in a fixed order; the aux suite is capped at labels 2.
pub fn run_all(max: i64, cache: Option<&DiskCache>) -> Result<(Sweep, Vec<SuiteResult>), String> {
    let s = sweep(max, cache)?;
    let mut out = vec![
        orthogonality(&s),
        triangularity(&s),
        multiplicity(max),
        symmetric(&s),
        aux(max.min(2)),
        racah(&s),
        round_trip(&s),
    ];
    if let Some(c) = cache {
        out.push(cache_integrity(c));
    }
    Ok((s, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_one() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let (s, results) = run_all(1, Some(&cache)).unwrap();
        assert!(!s.entries.is_empty());
        for r in &results {
            assert!(r.passed(), "{}", r.line());
            assert!(r.checked > 0, "{}", r.name);
        }
    }
}
