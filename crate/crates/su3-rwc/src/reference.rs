//! Hand-transcribed reference tables for `(1,1) x (1,1)` and their comparison
//! against the engine.
//!
//! Every file starts with a `#` provenance header, then `convention`,
//! `status` (`verbatim` or `corrected`), `lhs` and `rhs` lines, then one row
//! per entry:
//!
//! ```text
//! # target copy rho1 rho2 rho value
//! 3,2,1 0 2,1 2,0 3,2 sqrt(7/10)
//! ```
//!
//! `copy` counts the multiplicity copies of a target from zero in printed
//! column order. For the `triangular-positive` convention copy `k` is the
//! engine's `eta_min + k`; for the `classic` convention only the span of the
//! copies is comparable, so the comparison looks for an orthogonal transform.

use std::collections::BTreeMap;

use su3_rwc_core::arith::SurdSum;
use su3_rwc_core::engine::{rwc_table_with, RwcTable};
use su3_rwc_core::gpoly::RhoTriple;
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{Coupling, Partition3, Su3Irrep, U2Label};

use crate::cache::parse_pair;

/// Bundled files as `(name, contents)`.
pub const BUNDLED: [(&str, &str); 6] = [
    ("table1-upper", include_str!("../data/table1_upper.ref")),
    ("table1-lower", include_str!("../data/table1_lower.ref")),
    ("table1-lower-errata", include_str!("../data/table1_lower_errata.ref")),
    ("table2-upper", include_str!("../data/table2_upper.ref")),
    ("table2-lower", include_str!("../data/table2_lower.ref")),
    ("table2-lower-errata", include_str!("../data/table2_lower_errata.ref")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Same multiplicity basis as the engine.
    TriangularPositive,
    /// A different orthonormal multiplicity basis.
    Classic,
}

#[derive(Clone, Debug)]
pub struct RefEntry {
    pub target: Partition3,
    pub copy: usize,
    pub rho: RhoTriple,
    pub value: SurdSum,
}

#[derive(Clone, Debug)]
pub struct ReferenceTable {
    pub name: String,
    pub provenance: Vec<String>,
    pub convention: Convention,
    /// Transcribed as printed, errors included.
    pub verbatim: bool,
    pub left: Su3Irrep,
    pub right: Su3Irrep,
    pub entries: Vec<RefEntry>,
}

impl ReferenceTable {
    pub fn targets(&self) -> Vec<Partition3> {
        let mut out: Vec<Partition3> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.target) {
                out.push(e.target);
            }
        }
        out
    }
}

pub fn bundled(name: &str) -> Result<ReferenceTable, String> {
    let (_, text) =
        BUNDLED.iter().find(|(n, _)| *n == name).ok_or_else(|| format!("no bundled reference table `{name}`"))?;
    parse_reference(name, text)
}

fn irrep(s: &str) -> Option<Su3Irrep> {
    let l = parse_pair(s)?;
    Some(Su3Irrep::new(l.q1, l.q2))
}

fn partition(s: &str) -> Option<Partition3> {
    let v: Vec<i64> = s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    match v[..] {
        [a, b, c] => Some(Partition3::new(a, b, c)),
        _ => None,
    }
}

pub fn parse_reference(name: &str, text: &str) -> Result<ReferenceTable, String> {
    let mut provenance = Vec::new();
    let mut convention = None;
    let mut verbatim = None;
    let (mut left, mut right) = (None, None);
    let mut entries = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let err = |msg: &str| format!("{name}:{}: {msg}: `{raw}`", no + 1);
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if entries.is_empty() && convention.is_none() {
                provenance.push(c.trim().to_owned());
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            ["convention", "triangular-positive"] => convention = Some(Convention::TriangularPositive),
            ["convention", "classic"] => convention = Some(Convention::Classic),
            ["convention", _] => return Err(err("unknown convention")),
            ["status", "verbatim"] => verbatim = Some(true),
            ["status", "corrected"] => verbatim = Some(false),
            ["status", _] => return Err(err("unknown status")),
            ["lhs", s] => left = Some(irrep(s).ok_or_else(|| err("bad irrep"))?),
            ["rhs", s] => right = Some(irrep(s).ok_or_else(|| err("bad irrep"))?),
            [t, copy, r1, r2, r, value] => {
                let label = |s| parse_pair(s).ok_or_else(|| err("bad U(2) label"));
                entries.push(RefEntry {
                    target: partition(t).ok_or_else(|| err("bad target"))?,
                    copy: copy.parse().map_err(|_| err("bad copy index"))?,
                    rho: RhoTriple::new(label(r1)?, label(r2)?, label(r)?),
                    value: value.parse().map_err(|e| err(&format!("{e}")))?,
                });
            }
            _ => return Err(err("unrecognised line")),
        }
    }
    if provenance.is_empty() {
        return Err(format!("{name}: missing provenance header"));
    }
    Ok(ReferenceTable {
        name: name.to_owned(),
        provenance,
        convention: convention.ok_or_else(|| format!("{name}: missing convention line"))?,
        verbatim: verbatim.ok_or_else(|| format!("{name}: missing status line"))?,
        left: left.ok_or_else(|| format!("{name}: missing lhs line"))?,
        right: right.ok_or_else(|| format!("{name}: missing rhs line"))?,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fit {
    /// Every entry agrees with the engine.
    Exact,
    /// `reference column a = sum_b transform[a][b] * engine column b`, with
    /// an orthogonal `transform` and zero residual.
    Orthogonal(Vec<Vec<SurdSum>>),
    /// No orthogonal transform reproduces the printed columns.
    None { residual: f64 },
}

#[derive(Clone, Debug)]
pub struct TargetComparison {
    pub target: Partition3,
    pub entries: usize,
    /// Entries differing from the engine value at the same copy index.
    pub mismatches: Vec<(RhoTriple, usize, SurdSum, SurdSum)>,
    pub fit: Fit,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub table: String,
    pub convention: Convention,
    pub verbatim: bool,
    pub targets: Vec<TargetComparison>,
}

impl ComparisonReport {
    pub fn entries(&self) -> usize {
        self.targets.iter().map(|t| t.entries).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.targets.iter().map(|t| t.mismatches.len()).sum()
    }

    /// Entry-for-entry agreement in the engine's basis, or agreement up to
    /// an orthogonal transform for the classic convention.
    pub fn agrees(&self) -> bool {
        self.targets.iter().all(|t| match self.convention {
            Convention::TriangularPositive => t.mismatches.is_empty(),
            Convention::Classic => !matches!(t.fit, Fit::None { .. }),
        })
    }
}

fn engine_row<'a>(table: &'a RwcTable, rho: &RhoTriple) -> Option<&'a Vec<SurdSum>> {
    table.rows.iter().find(|(r, _)| r == rho).map(|(_, v)| v)
}

/// Orthogonal `O` with `reference = O * engine` over complete rho blocks.
fn orthogonal_fit(refs: &BTreeMap<RhoTriple, Vec<SurdSum>>, table: &RwcTable) -> Fit {
    let n = table.coupling.multiplicity();
    let mut o = vec![vec![SurdSum::zero(); n]; n];
    for (rho, r) in refs {
        let Some(e) = engine_row(table, rho) else { return Fit::None { residual: f64::INFINITY } };
        for a in 0..n {
            for b in 0..n {
                o[a][b] += &r[a] * &e[b];
            }
        }
    }
    let mut residual = 0f64;
    for (rho, r) in refs {
        let e = engine_row(table, rho).expect("checked above");
        for a in 0..n {
            let fitted: SurdSum = (0..n).map(|b| &o[a][b] * &e[b]).sum();
            residual = residual.max((&r[a] - &fitted).to_f64().abs());
        }
    }
    let orthogonal = (0..n).all(|a| {
        (0..n).all(|b| {
            let dot: SurdSum = (0..n).map(|k| &o[k][a] * &o[k][b]).sum();
            dot == if a == b { SurdSum::one() } else { SurdSum::zero() }
        })
    });
    if residual == 0.0 && orthogonal {
        let identity = (0..n).all(|a| (0..n).all(|b| o[a][b] == if a == b { SurdSum::one() } else { SurdSum::zero() }));
        if identity {
            Fit::Exact
        } else {
            Fit::Orthogonal(o)
        }
    } else {
        Fit::None { residual: if residual == 0.0 { f64::NAN } else { residual } }
    }
}

pub fn compare(reference: &ReferenceTable, ws: &mut Workspace) -> Result<ComparisonReport, String> {
    let mut targets = Vec::new();
    for target in reference.targets() {
        let c = Coupling::new(reference.left, reference.right, target)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{target} does not occur in {} x {}", reference.left, reference.right))?;
        let table = rwc_table_with(ws, &c).map_err(|e| e.to_string())?;
        let n = c.multiplicity();
        let mut refs: BTreeMap<RhoTriple, Vec<SurdSum>> = BTreeMap::new();
        let mut mismatches = Vec::new();
        let mut count = 0;
        for e in reference.entries.iter().filter(|e| e.target == target) {
            if e.copy >= n {
                return Err(format!("{}: copy {} of {target} exceeds multiplicity {n}", reference.name, e.copy));
            }
            count += 1;
            refs.entry(e.rho).or_insert_with(|| vec![SurdSum::zero(); n])[e.copy] = e.value.clone();
            let engine = table.get(c.eta_min + e.copy as i64, &e.rho).cloned().unwrap_or_else(SurdSum::zero);
            if engine != e.value {
                mismatches.push((e.rho, e.copy, e.value.clone(), engine));
            }
        }
        let blocks: Vec<U2Label> = refs.keys().map(|r| r.rho).collect();
        let complete = blocks.iter().all(|b| table.block(*b).all(|(r, _)| refs.contains_key(r)));
        let fit = if complete { orthogonal_fit(&refs, &table) } else { Fit::None { residual: f64::NAN } };
        targets.push(TargetComparison { target, entries: count, mismatches, fit });
    }
    Ok(ComparisonReport {
        table: reference.name.clone(),
        convention: reference.convention,
        verbatim: reference.verbatim,
        targets,
    })
}

/// The single classic-to-engine transform for the multiplicity-two target,
/// required to be the same in both bundled classic tables.
pub fn classic_transform(ws: &mut Workspace) -> Result<Vec<Vec<SurdSum>>, String> {
    let mut found: Option<Vec<Vec<SurdSum>>> = None;
    for name in ["table1-upper", "table2-upper"] {
        let report = compare(&bundled(name)?, ws)?;
        for t in &report.targets {
            match &t.fit {
                Fit::Orthogonal(o) if o.len() == 2 => match &found {
                    Some(prev) if prev != o => return Err(format!("{name}: transform differs between tables")),
                    _ => found = Some(o.clone()),
                },
                Fit::None { .. } => return Err(format!("{name}: no orthogonal fit at {}", t.target)),
                _ => {}
            }
        }
    }
    found.ok_or_else(|| "no multiplicity-two target in the classic tables".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_parse() {
        for (name, _) in BUNDLED {
            let t = bundled(name).unwrap();
            assert_eq!(t.entries.len(), 16, "{name}");
            assert!(!t.provenance.is_empty());
        }
    }

    #[test]
    fn errata_tables_match_exactly() {
        let mut ws = Workspace::new();
        for name in ["table1-lower-errata", "table2-lower-errata"] {
            let r = compare(&bundled(name).unwrap(), &mut ws).unwrap();
            assert_eq!((r.entries(), r.mismatches()), (16, 0), "{name}");
        }
    }

    #[test]
    fn verbatim_tables_differ_where_documented() {
        let mut ws = Workspace::new();
        let t1 = compare(&bundled("table1-lower").unwrap(), &mut ws).unwrap();
        assert_eq!(t1.mismatches(), 3);
        let t2 = compare(&bundled("table2-lower").unwrap(), &mut ws).unwrap();
        assert!(t2.mismatches() > 0);
    }

    #[test]
    fn typo_is_flagged() {
        let text = include_str!("../data/table1_lower_errata.ref").replace("sqrt(8/35)", "sqrt(9/35)");
        let r = compare(&parse_reference("typo", &text).unwrap(), &mut Workspace::new()).unwrap();
        assert!(!r.agrees());
        let t = r.targets.iter().find(|t| t.target == Partition3::new(3, 2, 1)).unwrap();
        assert!(matches!(t.fit, Fit::None { residual } if residual > 0.0));
    }

    #[test]
    fn classic_tables_share_one_rotation() {
        let o = classic_transform(&mut Workspace::new()).unwrap();
        assert_eq!(o.len(), 2);
    }

    #[test]
    fn missing_header_is_rejected() {
        assert!(parse_reference("x", "convention classic\nstatus verbatim\nlhs 1,1\nrhs 1,1\n").is_err());
        assert!(parse_reference("x", "# header\nconvention classic\nlhs 1,1\nrhs 1,1\n").is_err());
    }
}
