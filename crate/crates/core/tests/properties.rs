use num_traits::{One, Signed};
use proptest::prelude::*;

use sailkit::arith::is_squarefree_i64;
use sailkit::cfrac::{expand, QuadraticCf};
use sailkit::families::rank_lower_bound;
use sailkit::field::{make_field, Field, FieldDescriptor, Sign};

fn field(kind: u8, p: i64) -> Field {
    let desc = match kind {
        0 => FieldDescriptor::Quadratic { d: [2, 3, 5, 6, 7, 10, 13, 21][(p as usize) % 8] },
        1 => FieldDescriptor::SimplestCubic { a: [-1, 1, 2, 4, 7][(p as usize) % 5] },
        _ => FieldDescriptor::Biquadratic { d1: [2, 3, 5][(p as usize) % 3], d2: [7, 11, 13][(p as usize / 3) % 3] },
    };
    make_field(desc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn norm_is_multiplicative(kind in 0u8..3, p in 0i64..100, a in prop::collection::vec(-50i64..50, 4), b in prop::collection::vec(-50i64..50, 4)) {
        let k = field(kind, p);
        let n = k.degree();
        let x = k.element_i64(&a[..n]);
        let y = k.element_i64(&b[..n]);
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
        if !y.is_zero() {
            prop_assert_eq!((&x * &y).div(&y).unwrap(), x);
        }
    }

    #[test]
    fn exact_sign_matches_float(kind in 0u8..3, p in 0i64..100, a in prop::collection::vec(-1000i64..1000, 4)) {
        let k = field(kind, p);
        let x = k.element_i64(&a[..k.degree()]);
        for (i, v) in x.embeddings_f64().iter().enumerate() {
            if v.abs() > 1e-6 {
                let want = if *v > 0.0 { Sign::Pos } else { Sign::Neg };
                prop_assert_eq!(x.sign_at(i), want);
            }
        }
    }

    #[test]
    fn quadratic_period_and_unit(d in 2i64..5000) {
        prop_assume!(is_squarefree_i64(d));
        let e = expand(d).unwrap();
        let us = *e.period.last().unwrap();
        prop_assert_eq!(us, if d % 4 == 1 { 2 * e.u0 + 1 } else { 2 * e.u0 });
        let inner = &e.period[..e.s() - 1];
        let rev: Vec<i64> = inner.iter().rev().cloned().collect();
        prop_assert_eq!(inner, rev.as_slice());
        let cf = QuadraticCf::new(d).unwrap();
        let (eps, n) = cf.fundamental_unit();
        prop_assert_eq!(eps.norm().abs(), One::one());
        prop_assert!(n == 1 || n == -1);
        prop_assert!(cf.totally_positive_unit().is_totally_positive());
    }

    #[test]
    fn rank_bound_monotone(u in 0u64..5000, classical: bool, over: bool) {
        prop_assert!(rank_lower_bound(u, classical, over) <= rank_lower_bound(u + 1, classical, over));
    }

    #[test]
    fn trace_of_integer_is_integer(kind in 0u8..3, p in 0i64..100, a in prop::collection::vec(-50i64..50, 4)) {
        let k = field(kind, p);
        let x = k.from_int_i64(&a[..k.degree()]);
        prop_assert!(x.trace().is_integer());
        prop_assert!(x.norm().is_integer());
    }
}
