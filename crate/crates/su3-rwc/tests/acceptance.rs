//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::Instant;

use su3_rwc::oracle::oracle_projector_check;
use su3_rwc::reference::{bundled, classic_transform, compare};
use su3_rwc::verify::{self, SuiteResult};
use su3_rwc_core::arith::SurdSum;
use su3_rwc_core::engine::{racah_column_with, rwc_table_with, special_rwc_with};
use su3_rwc_core::gpoly::k_ranges;
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{decompose_product, Coupling, Partition3, Su3Irrep};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, n: usize, name: &str, start: Instant, outcome: Result<String, String>) {
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {name:<38} {t:>10.2?}  {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL {n:>2} {name:<38} {t:>10.2?}  {detail}");
            }
        }
    }

    fn suite(&mut self, n: usize, name: &str, r: &SuiteResult) {
        let detail = format!("{} checks", r.checked);
        let outcome = match r.failures.first() {
            None => Ok(detail),
            Some(f) => Err(format!("{detail}, {} failures, first: {f}", r.failures.len())),
        };
        let start = Instant::now() - r.elapsed;
        self.line(n, name, start, outcome);
    }
}

fn coupling(l1: i64, u1: i64, l2: i64, u2: i64, m: [i64; 3]) -> Coupling {
    Coupling::new(Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2), Partition3::new(m[0], m[1], m[2]))
        .expect("valid box count")
        .expect("target occurs")
}

fn surd(s: &str) -> SurdSum {
    s.parse().expect("surd literal")
}

fn table_criterion(name: &str, verbatim: &str) -> Result<String, String> {
    let mut ws = Workspace::new();
    let fixed = compare(&bundled(name)?, &mut ws)?;
    let printed = compare(&bundled(verbatim)?, &mut ws)?;
    let summary = format!(
        "{} entries exact; verbatim print differs in {} (documented in the data file)",
        fixed.entries(),
        printed.mismatches()
    );
    if fixed.entries() == 16 && fixed.mismatches() == 0 {
        Ok(summary)
    } else {
        Err(format!("{} of {} entries differ", fixed.mismatches(), fixed.entries()))
    }
}

fn main() {
    let mut rep = Report { failed: 0 };
    let octet = coupling(1, 1, 1, 1, [3, 2, 1]);

    let start = Instant::now();
    let golden = [["sqrt(7/10)", "-sqrt(1/42)"], ["0", "sqrt(10/21)"]].map(|r| r.map(surd).to_vec()).to_vec();
    let outcome = match special_rwc_with(&mut Workspace::new(), &octet) {
        Ok(m) if m.entries == golden => Ok("[[sqrt(7/10), -sqrt(1/42)], [0, sqrt(10/21)]]".to_owned()),
        Ok(m) => Err(format!("got {:?}", m.entries)),
        Err(e) => Err(e.to_string()),
    };
    rep.line(1, "golden special matrix", start, outcome);

    let start = Instant::now();
    rep.line(2, "table I lower part", start, table_criterion("table1-lower-errata", "table1-lower"));
    let start = Instant::now();
    rep.line(3, "table II lower part", start, table_criterion("table2-lower-errata", "table2-lower"));

    let start = Instant::now();
    let outcome = classic_transform(&mut Workspace::new()).map(|o| {
        let rows: Vec<String> =
            o.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).collect();
        format!("shared transform [{}], residual 0", rows.join("; "))
    });
    rep.line(4, "classic convention transform", start, outcome);

    let sweep = match verify::sweep(3, None) {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL  5 sweep up to 3 could not be computed: {e}");
            std::process::exit(1);
        }
    };
    let mut orth = verify::orthogonality(&sweep);
    orth.elapsed += sweep.elapsed;
    rep.suite(5, &format!("orthogonality, {} couplings", sweep.entries.len()), &orth);
    if orth.elapsed.as_secs() >= 600 {
        rep.line(5, "orthogonality time budget", Instant::now(), Err(format!("{:.2?}", orth.elapsed)));
    }

    rep.suite(6, "multiplicity formula vs LR, <= 4", &verify::multiplicity(4));
    rep.suite(7, "triangular, positive, M^T M = Gram", &verify::triangularity(&sweep));
    rep.suite(8, "symmetric second factor paths", &verify::symmetric(&sweep));

    let start = Instant::now();
    let mut targets = vec![octet, coupling(2, 2, 2, 2, [6, 4, 2])];
    for (l1, u1, l2, u2) in [(1, 0, 0, 1), (1, 1, 1, 1), (2, 0, 1, 1), (2, 1, 1, 0), (0, 2, 2, 0)] {
        let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
        let t = decompose_product(a, b).into_iter().find(|(_, m)| *m == 1).expect("a multiplicity-free target").0;
        targets.push(coupling(l1, u1, l2, u2, t.m));
    }
    let mut worst = 0f64;
    let mut outcome = Ok(());
    let mut ws = Workspace::new();
    for c in &targets {
        let checked =
            rwc_table_with(&mut ws, c).map_err(|e| e.to_string()).and_then(|t| oracle_projector_check(&t, 1e-10));
        match checked {
            Ok(r) if r.passed() => worst = worst.max(r.max_residual()),
            Ok(r) => outcome = Err(format!("{c}: residual {:.2e}", r.max_residual())),
            Err(e) => outcome = Err(format!("{c}: {e}")),
        }
    }
    let outcome = outcome.map(|_| format!("{} couplings, max residual {worst:.1e}", targets.len()));
    rep.line(9, "oracle at 1e-10", start, outcome);

    rep.suite(10, "aux closed = recoupled, orthogonality", &verify::aux(2));

    let start = Instant::now();
    let mut ws = Workspace::new();
    let cols: Result<Vec<_>, _> = k_ranges(&octet).into_iter().map(|b| racah_column_with(&mut ws, &octet, b)).collect();
    let outcome = match cols {
        Ok(cols) => {
            let ok = (0..2).all(|e| {
                (0..2).all(|f| {
                    let s: SurdSum = cols.iter().map(|v| &v[e] * &v[f]).sum();
                    s == if e == f { SurdSum::one() } else { SurdSum::zero() }
                })
            });
            let sweep_suite = verify::racah(&sweep);
            if ok && sweep_suite.passed() {
                Ok(format!("{} intermediate labels; also {} couplings in the sweep", cols.len(), sweep_suite.checked))
            } else {
                Err(sweep_suite.failures.first().cloned().unwrap_or_else(|| "sum R R != delta".into()))
            }
        }
        Err(e) => Err(e.to_string()),
    };
    rep.line(11, "Racah orthogonality", start, outcome);

    let start = Instant::now();
    let suite = verify::round_trip(&sweep);
    let values: usize = sweep.entries.iter().map(|e| e.table.rows.len() * e.table.coupling.multiplicity()).sum();
    let outcome = match suite.failures.first() {
        None => Ok(format!("{values} values in {} tables", sweep.entries.len())),
        Some(f) => Err(format!("first failure: {f}")),
    };
    rep.line(12, "exact string round trip", start, outcome);

    if rep.failed > 0 {
        println!("{} criteria failed", rep.failed);
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
