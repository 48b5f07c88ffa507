use entcert::bounds::{
    l_factor, lemma1_check, lemma2_check, lemma2_peeled_sum, lemma2_weighted_sum, lemma3_check,
    remark2_compare, remark3_chain, Regime,
};
use proptest::prelude::*;

fn descending(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_map(|mut v| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    })
}

/// Descending sequences with `p₁ + … + pⱼ ≥ k·p_{j+1}` built in.
fn peeling(max_len: usize) -> impl Strategy<Value = (Vec<f64>, f64)> {
    (1.0f64..5.0, 0.0f64..1.0, prop::collection::vec(0.0f64..0.999, 0..max_len)).prop_map(|(k, first, us)| {
        let mut p = vec![first];
        let mut prefix = first;
        for u in us {
            let next = u * p[p.len() - 1].min(prefix / k);
            prefix += next;
            p.push(next);
        }
        (p, k)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn lemma1_low(k in 1.0f64..10.0, ratio in 1.0f64..10.0, x in 0.0f64..=0.5) {
        let r = lemma1_check(k * ratio, k, x, Regime::Low).unwrap();
        prop_assert!(r.margin >= -1e-12, "{r:?}");
    }

    #[test]
    fn lemma1_high(k in 1.0f64..10.0, ratio in 1.0f64..10.0, x in 1.0f64..4.0) {
        let r = lemma1_check(k * ratio, k, x, Regime::High).unwrap();
        prop_assert!(r.margin >= -1e-12 * r.lhs.max(1.0), "{r:?}");
    }

    #[test]
    fn lemma2_low_holds_under_peeling((p, k) in peeling(6), x in 0.0f64..=0.5) {
        let r = lemma2_check(&p, x, k, Regime::Low).unwrap();
        prop_assert!(r.proof_conditions_ok());
        prop_assert!(r.margin >= -1e-12, "{r:?}");
    }

    #[test]
    fn peeled_sum_brackets_the_total((p, k) in peeling(6), low in 0.0f64..=0.5, high in 1.0f64..4.0) {
        let total: f64 = p.iter().sum();
        let below = lemma2_peeled_sum(&p, low, k).unwrap();
        prop_assert!(total.powf(low) >= below - 1e-12);
        let above = lemma2_peeled_sum(&p, high, k).unwrap();
        prop_assert!(total.powf(high) <= above + 1e-12 * above.max(1.0));
    }

    #[test]
    fn lemma2_weighted_sum_agrees_with_report(p in descending(6), x in 0.0f64..=0.5, k in 1.0f64..5.0) {
        let (c, w) = lemma2_weighted_sum(&p, x, k, Regime::Low).unwrap();
        let r = lemma2_check(&p, x, k, Regime::Low).unwrap();
        prop_assert_eq!((c, w), (r.lhs, r.rhs));
    }

    #[test]
    fn lemma3_under_ratio(x in 0.0f64..1.0, y in 0.0f64..1.0, k in 1.0f64..3.0, r in 1.5f64..3.0, a in 0.0f64..1.0) {
        prop_assume!(x * x + y * y <= 1.0 && a <= r / 2.0);
        let rep = lemma3_check(x, y, k, a, r).unwrap();
        if rep.hypothesis_ok {
            prop_assert!(rep.margin >= -1e-12, "{rep:?}");
        }
    }

    #[test]
    fn remark2_gap_is_nonnegative(ex in 0.0f64..1.0, ey in 0.0f64..1.0, r in 2.0f64..4.0, a in 0.0f64..1.0, k in 1.0f64..4.0) {
        let alpha = a * r / 2.0;
        let m = remark2_compare(ex, ey, alpha, r, k).unwrap();
        if m.hypothesis_ok {
            prop_assert!(m.mu >= -1e-12, "{m:?}");
        }
    }

    #[test]
    fn remark3_chain_orders(cx in 0.0f64..1.0, cy in 0.0f64..1.0, r in 2.0f64..4.0, a in 0.0f64..1.0, k in 1.0001f64..4.0) {
        let c = remark3_chain(cx, cy, a * r / 2.0, r, k).unwrap();
        if c.hypothesis_ok {
            prop_assert!(c.b1 >= c.b2 - 1e-12 && c.b2 >= c.b3 - 1e-12, "{c:?}");
        }
    }

    #[test]
    fn l_factor_grows_with_k(x in 0.0f64..=0.5, k in 1.0f64..10.0, dk in 0.0f64..10.0) {
        let a = l_factor(x, k).unwrap().value;
        let b = l_factor(x, k + dk).unwrap().value;
        prop_assert!(b >= a - 1e-15);
    }
}

#[test]
fn lemma2_low_regime_needs_peeling() {
    // two equal terms do not peel at k = 5 and the bound fails
    let r = lemma2_check(&[1.0, 1.0], 0.1, 5.0, Regime::Low).unwrap();
    assert!(!r.proof_conditions_ok());
    assert!(r.margin < 0.0, "{r:?}");
}

#[test]
fn lemma2_high_regime_fails_under_peeling() {
    let r = lemma2_check(&[1.0, 1.0], 1.0, 1.0, Regime::High).unwrap();
    assert!(r.hypothesis_ok);
    assert!(r.margin < -0.7);
    let r = lemma2_check(&[3.0, 2.0, 1.0], 2.0, 1.0, Regime::High).unwrap();
    assert!(r.hypothesis_ok && r.margin < 0.0);
}
