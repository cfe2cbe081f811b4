use std::time::Instant;

use su3_rwc_core::engine::{
    completeness_defect, direct_mf_table, gram_from_special, is_canonical_triangular, orthonormality_defect,
    rwc_table_with, special_rwc_with,
};
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{couplings_up_to, decompose_product, Coupling, Su3Irrep};

#[test]
fn small_sweep_is_orthonormal_and_canonical() {
    let start = Instant::now();
    let mut ws = Workspace::new();
    let all = couplings_up_to(2);
    for c in &all {
        let m = special_rwc_with(&mut ws, c).unwrap();
        assert!(is_canonical_triangular(&m), "{c}");
        let t = rwc_table_with(&mut ws, c).unwrap();
        assert_eq!(orthonormality_defect(&t), None, "{c}");
        if c.right.mu == 0 {
            assert_eq!(t, direct_mf_table(c).unwrap(), "{c}");
        }
        assert_eq!(gram_from_special(&m).len(), c.multiplicity());
    }
    eprintln!("{} couplings in {:?}", all.len(), start.elapsed());
}

#[test]
fn completeness_over_targets() {
    let mut ws = Workspace::new();
    for (l1, u1, l2, u2) in [(1, 1, 1, 1), (2, 0, 1, 1), (2, 1, 1, 2), (0, 2, 2, 0)] {
        let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
        let tables: Vec<_> = decompose_product(a, b)
            .into_iter()
            .map(|(t, _)| rwc_table_with(&mut ws, &Coupling::new(a, b, t).unwrap().unwrap()).unwrap())
            .collect();
        assert_eq!(completeness_defect(&tables), None, "({l1},{u1})x({l2},{u2})");
    }
}
