use su3_rwc_core::arith::FactorialTable;
use su3_rwc_core::aux::{aux_orthogonality_check, aux_rwc_closed_with, aux_rwc_recoupled_with, AuxCoupling};
use su3_rwc_core::engine::rho_triples;
use su3_rwc_core::labels::{decompose_product, Coupling, Su3Irrep};

#[test]
fn closed_form_matches_recoupled_form() {
    let ft = FactorialTable::with_max(40);
    let mut checked = 0;
    for l1 in 0..=2 {
        for u1 in 0..=2 {
            for l2 in 0..=2 {
                for u2 in 0..=2 {
                    let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
                    // every split with the same box count that still contains (l2,u2)
                    let splits: Vec<(i64, i64)> =
                        (u2..=b.boxes() / 2).map(|v| (b.boxes() - 2 * v, v)).filter(|&(x, v)| x + v >= u2).collect();
                    for (t, _) in decompose_product(a, b) {
                        let triples = rho_triples(&Coupling::new(a, b, t).unwrap().unwrap());
                        for &sp in &splits {
                            let c = AuxCoupling::with_split(a, b, sp, t).unwrap();
                            for u in c.labels() {
                                for q in &triples {
                                    let x = aux_rwc_recoupled_with(&ft, &c, &u, q).unwrap();
                                    let y = aux_rwc_closed_with(&ft, &c, &u, q).unwrap();
                                    assert_eq!(x, y, "{a} x {b} split {sp:?} -> {t} u={} {q}", u.u);
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn orthogonality_for_small_families() {
    for l1 in 0..=2 {
        for u1 in 0..=2 {
            for l2p in 0..=2 {
                for u2p in 0..=2 {
                    let rep = aux_orthogonality_check(Su3Irrep::new(l1, u1), (l2p, u2p)).unwrap();
                    assert!(rep.passed(), "({l1},{u1}) split ({l2p},{u2p}): {rep:?}");
                }
            }
        }
    }
}
