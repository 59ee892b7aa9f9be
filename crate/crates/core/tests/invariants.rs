mod common;

use selfsim_core::decide::{closed_form_m1, decide_values, DecideConfig, Verdict};
use selfsim_core::theta::{in_b_n, BnVerdict, DEFAULT_SEARCH_DEGREE};
use selfsim_core::words::conjugate_values;

fn config() -> DecideConfig {
    DecideConfig {
        cross_check_closed_form: false,
        ..DecideConfig::default()
    }
}

#[test]
fn conjugate_vector_has_same_verdict() {
    for inst in common::suite() {
        let r = decide_values(&inst.field, &inst.t, &config()).unwrap();
        let mut values = vec![inst.field.zero()];
        values.extend(inst.t.iter().cloned());
        let hat = conjugate_values(&values);
        let h = decide_values(&inst.field, &hat[1..], &config()).unwrap();
        assert_eq!(r.verdict, h.verdict, "{}", inst.name);
        assert_ne!(r.verdict, Verdict::Unknown, "{}", inst.name);
    }
}

#[test]
fn scaling_by_inverse_beta_keeps_self_similarity() {
    let mut scaled = 0;
    for inst in common::suite() {
        if in_b_n(&inst.field, DEFAULT_SEARCH_DEGREE).verdict != BnVerdict::InBN {
            continue;
        }
        let r = decide_values(&inst.field, &inst.t, &config()).unwrap();
        if r.verdict != Verdict::SelfSimilar {
            continue;
        }
        let inv = inst.field.beta().inv().unwrap();
        for k in 1..=2 {
            let f = inv.pow(k).unwrap();
            let t: Vec<_> = inst.t.iter().map(|v| v * &f).collect();
            let s = decide_values(&inst.field, &t, &config()).unwrap();
            assert_eq!(s.verdict, Verdict::SelfSimilar, "{} k={k}", inst.name);
            scaled += 1;
        }
    }
    assert!(scaled >= 10);
}

#[test]
fn closed_form_agrees_for_single_translations() {
    let mut compared = 0;
    for inst in common::suite() {
        let bn = in_b_n(&inst.field, DEFAULT_SEARCH_DEGREE);
        if inst.t.len() != 1 || bn.verdict != BnVerdict::InBN {
            continue;
        }
        let r = decide_values(&inst.field, &inst.t, &config()).unwrap();
        let cf = closed_form_m1(&inst.field, &bn, &inst.t[0]).unwrap();
        assert_eq!(r.verdict, cf, "{}", inst.name);
        compared += 1;
    }
    assert!(compared >= 10);
}
