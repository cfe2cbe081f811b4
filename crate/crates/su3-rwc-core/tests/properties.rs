use proptest::prelude::*;

use su3_rwc_core::arith::{rat, FactorialTable, SurdSum};
use su3_rwc_core::kernels::{f3_kernel, f3_kernel_printed, mf_rwc, mf_rwc_generic, su2_racah_unitary};
use su3_rwc_core::labels::{lr_multiplicity, multiplicity_range, partitions3, pieri, Partition3, Su3Irrep};

fn surd() -> impl Strategy<Value = SurdSum> {
    prop::collection::vec((-6i64..=6, 1i64..=5, 1i64..=30), 0..4).prop_map(|terms| {
        terms.into_iter().map(|(n, d, r)| SurdSum::sqrt_of(&rat(r, 1), false).unwrap().scale(&rat(n, d))).sum()
    })
}

proptest! {
    #[test]
    fn surd_ring_laws(a in surd(), b in surd(), c in surd()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &a), &SurdSum::zero());
        prop_assert_eq!(a.to_string().parse::<SurdSum>().unwrap(), a);
    }

    #[test]
    fn single_surd_round_trip(n in 0i64..500, d in 1i64..500, neg: bool) {
        let x = SurdSum::sqrt_of(&rat(n, d), neg).unwrap();
        prop_assert_eq!(x.signed_square().unwrap(), if neg { -rat(n, d) } else { rat(n, d) });
        prop_assert_eq!(x.to_string().parse::<SurdSum>().unwrap(), x);
    }

    #[test]
    fn racah_rows_are_orthonormal(j1 in 0i64..5, j2 in 0i64..5, j3 in 0i64..5, jj in 0i64..9) {
        let ft = FactorialTable::default();
        let l = |t: i64| [t, 0];
        let range = |a: i64, b: i64| ((a - b).abs()..=a + b).step_by(2);
        let inter: Vec<i64> = range(j2, j3).collect();
        for &d in &inter {
            for &dd in &inter {
                let s: SurdSum = range(j1, j2)
                    .map(|e| &su2_racah_unitary(&ft, l(j1), l(j2), l(e), l(j3), l(jj), l(d))
                        * &su2_racah_unitary(&ft, l(j1), l(j2), l(e), l(j3), l(jj), l(dd)))
                    .sum();
                let tri = (j1 - d).abs() <= jj && jj <= j1 + d && (j1 + d + jj) % 2 == 0;
                let expect = if d == dd && tri { SurdSum::one() } else { SurdSum::zero() };
                prop_assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn kernel_specializations_agree(h in (0i64..4, 0i64..3, 0i64..2), p in 0i64..4) {
        let ft = FactorialTable::default();
        let (a, b, c) = h;
        let h = Partition3::new(a + b + c, b + c, c);
        for m in pieri(h, p) {
            for q in su3_rwc_core::labels::u2_sublabels(h) {
                for r in su3_rwc_core::labels::u2_sublabels(m) {
                    let pp = r.weight() - q.weight();
                    let x = mf_rwc(&ft, &h.m, p, &q.pair(), pp, &m.m, &r.pair());
                    let y = mf_rwc_generic(&ft, &h.m, p, &q.pair(), pp, &m.m, &r.pair());
                    prop_assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn multiplicity_range_matches_tableau_count(l1 in 0i64..5, u1 in 0i64..5, l2 in 0i64..5, u2 in 0i64..5) {
        let (a, b) = (Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2));
        for t in partitions3(a.boxes() + b.boxes()) {
            let n = multiplicity_range(a, b, t).unwrap().map_or(0, |(lo, hi)| (hi - lo + 1) as u64);
            prop_assert_eq!(n, lr_multiplicity(a, b, t));
        }
    }
}

/// Four-row coefficients built with the printed kernel lose normalization.
#[test]
fn printed_triple_sum_is_not_orthonormal() {
    let ft = FactorialTable::default();
    let h = [2i64, 1, 0, 0];
    let qs = [[2i64, 1, 0], [2, 0, 0], [1, 1, 0], [1, 0, 0]];
    let norms = |printed: bool| -> Vec<SurdSum> {
        let mut out = Vec::new();
        for m in [[3i64, 1, 0, 0], [2, 2, 0, 0], [2, 1, 1, 0]] {
            for r in
                [[3i64, 1, 0], [2, 2, 0], [2, 1, 1], [3, 0, 0], [2, 1, 0], [1, 1, 1], [2, 0, 0], [1, 1, 0], [1, 0, 0]]
            {
                let fits = (0..3).all(|i| m[i] >= r[i] && r[i] >= m[i + 1]);
                if !fits {
                    continue;
                }
                let mut s = SurdSum::zero();
                for q in qs {
                    let pp = r.iter().sum::<i64>() - q.iter().sum::<i64>();
                    let mut v = mf_rwc(&ft, &h, 1, &q, pp, &m, &r);
                    if printed && !v.is_zero() {
                        let (hh, mm) = ([h[0], h[1], h[2]], [m[0], m[1], m[2]]);
                        v = v.scale(&(f3_kernel_printed(&ft, hh, q, mm, r) / f3_kernel(&ft, hh, q, mm, r)));
                    }
                    s += &(&v * &v);
                }
                out.push(s);
            }
        }
        out
    };
    let ok = norms(false);
    assert!(ok.iter().all(|s| *s == SurdSum::one()), "{ok:?}");
    assert!(norms(true).iter().any(|s| *s != SurdSum::one()));
}
