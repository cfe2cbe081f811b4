use std::collections::BTreeSet;
use std::process::{Command, Output};

use su3_rwc::format::parse_exact;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_su3-rwc"))
}

fn run(args: &[&str]) -> Output {
    bin().arg("--no-cache").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const OCTETS: [&str; 4] = ["--lhs", "1,1", "--rhs", "1,1"];

fn rwc(target: &str, extra: &[&str]) -> Output {
    let mut args = vec!["rwc"];
    args.extend(OCTETS);
    args.extend(["--target", target]);
    args.extend(extra);
    run(&args)
}

#[test]
fn decompose_octets() {
    let o = run(&["decompose", "--lhs", "1,1", "--rhs", "1,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 5);
    assert!(text.contains("# dimension check: 64 = 27 + 10 + 10 + 2*8 + 1 = 64 ok"), "{text}");
}

#[test]
fn decompose_scalars() {
    let o = run(&["decompose", "--lhs", "0,0", "--rhs", "0,0"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).collect::<Vec<_>>(), ["[0,0,0]\t(0,0)\t1\t1\t0\t0"]);
}

#[test]
fn malformed_irrep_is_a_usage_error() {
    assert_eq!(run(&["decompose", "--lhs", "1;1", "--rhs", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--lhs", "-1,1", "--rhs", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["rwc", "--lhs", "1,1", "--rhs", "1,1"]).status.code(), Some(2));
}

#[test]
fn golden_rows() {
    let text = stdout(&rwc("3,2,1", &["--format", "exact"]));
    assert!(text.contains("0\t[2,1]\t[2,0]\t[3,2]\tsqrt(7/10)\n"), "{text}");
    assert!(text.contains("1\t[2,1]\t[2,0]\t[3,2]\t0\n"));
    let text = stdout(&rwc("4,2,0", &[]));
    assert!(text.contains("1\t[2,1]\t[2,0]\t[3,2]\t-sqrt(1/20)\n"), "{text}");
}

#[test]
fn special_matrix() {
    let text = stdout(&rwc("3,2,1", &["--special"]));
    for line in ["0\t0\tsqrt(7/10)", "0\t1\t-sqrt(1/42)", "1\t0\t0", "1\t1\tsqrt(10/21)"] {
        assert!(text.contains(line), "{text}");
    }
}

#[test]
fn domain_errors_exit_one() {
    for target in ["5,0,0", "6,0,0"] {
        let o = rwc(target, &[]);
        assert_eq!(o.status.code(), Some(1), "{target}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    assert_eq!(rwc("3,2,1", &["--eta", "2"]).status.code(), Some(1));
}

#[test]
fn eta_filter() {
    let l = parse_exact(&stdout(&rwc("3,2,1", &["--eta", "1"]))).unwrap();
    assert!(l.rows.iter().all(|(labels, _)| labels[0] == "1"));
    assert_eq!(l.rows.len(), 17);
}

#[test]
fn exact_output_round_trips() {
    for target in ["4,2,0", "4,1,1", "3,3,0", "3,2,1", "2,2,2"] {
        let text = stdout(&rwc(target, &[]));
        let l = parse_exact(&text).unwrap();
        for (labels, v) in &l.rows {
            assert!(text.contains(&format!("{}\t{v}\n", labels.join("\t"))));
        }
    }
}

#[test]
fn json_and_csv_carry_the_same_entries() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&rwc("3,2,1", &["--format", "json"]))).unwrap();
    assert_eq!(json["convention"], "triangular-positive");
    let pair = |v: &serde_json::Value| format!("[{},{}]", v[0], v[1]);
    let mut from_json = BTreeSet::new();
    for (_, etas) in json["coupling"].as_object().unwrap() {
        for (eta, rows) in etas.as_object().unwrap() {
            for r in rows.as_array().unwrap() {
                from_json.insert([
                    eta.clone(),
                    pair(&r["rho1"]),
                    pair(&r["rho2"]),
                    pair(&r["rho"]),
                    r["exact"].as_str().unwrap().to_owned(),
                ]);
            }
        }
    }
    let csv_text = stdout(&rwc("3,2,1", &["--format", "csv"]));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let from_csv: BTreeSet<[String; 5]> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            [0, 1, 2, 3, 4].map(|i| r[i].to_owned())
        })
        .collect();
    assert_eq!(from_json.len(), 34);
    assert_eq!(from_json, from_csv);
}

#[test]
fn float_format_uses_digits() {
    let text = stdout(&rwc("3,2,1", &["--format", "float", "--digits", "4"]));
    assert!(text.contains("0\t[2,1]\t[2,0]\t[3,2]\t0.8367\n"), "{text}");
}

#[test]
fn racah_and_aux_commands() {
    let mut args = vec!["racah"];
    args.extend(OCTETS);
    args.extend(["--target", "3,2,1"]);
    let l = parse_exact(&stdout(&run(&args))).unwrap();
    assert_eq!(l.rows.len(), 6);

    let base = ["aux", "--lhs", "1,1", "--rhs", "2,2", "--target", "5,3,1", "--split", "0,3"];
    let closed = parse_exact(&stdout(&run(&base))).unwrap();
    let mut args = base.to_vec();
    args.extend(["--form", "recoupled"]);
    let recoupled = parse_exact(&stdout(&run(&args))).unwrap();
    assert!(!closed.rows.is_empty());
    assert_eq!(closed.rows, recoupled.rows);
    assert_eq!(
        run(&["aux", "--lhs", "1,1", "--rhs", "1,1", "--target", "3,2,1", "--split", "0,1"]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_check_command() {
    let o = run(&["oracle-check", "--lhs", "1,0", "--rhs", "0,1", "--target", "2,1,0", "--tol", "1e-10"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn verify_trivial() {
    let o = run(&["verify", "--max", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("SU3_RWC_CACHE", dir.path())
        .args(["rwc", "--lhs", "1,1", "--rhs", "1,1", "--target", "3,2,1"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let file = dir.path().join("1_1_1_1_3_2_1.rwc");
    let cached = std::fs::read_to_string(&file).unwrap();
    assert!(cached.starts_with("su3-rwc-cache 1\nsha256 "));

    // a second run reads the file back
    let again = bin()
        .env("SU3_RWC_CACHE", dir.path())
        .args(["rwc", "--lhs", "1,1", "--rhs", "1,1", "--target", "3,2,1"])
        .output()
        .unwrap();
    assert_eq!(again.stdout, o.stdout);

    std::fs::write(&file, cached.replace("sqrt(7/10)", "sqrt(7/11)")).unwrap();
    let v = bin().env("SU3_RWC_CACHE", dir.path()).args(["verify", "--max", "0"]).output().unwrap();
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("FAIL cache"), "{}", stdout(&v));
}

#[test]
fn compare_reference_bundled() {
    let o = run(&["compare-reference"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("table1-lower-errata (triangular-positive, corrected): 16 entries, 0 differ"));
    assert!(text.contains("table2-lower-errata (triangular-positive, corrected): 16 entries, 0 differ"));
    assert!(text.contains("classic to triangular-positive transform"));
}

#[test]
fn compare_reference_flags_a_typo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.ref");
    let text = include_str!("../data/table1_lower_errata.ref").replace("sqrt(8/35)", "sqrt(9/35)");
    std::fs::write(&path, text).unwrap();
    let o = run(&["compare-reference", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no orthogonal fit, residual"));
}
