mod common;

use num_traits::ToPrimitive;
use selfsim_core::decide::{
    check_maps, decide_values, verify_report_witness, witness_covers, witness_ifs, DecideConfig,
    Verdict,
};
use selfsim_core::numeric::{
    approx_attractor, approx_attractor_resolution, hausdorff, AffineMap, ApproxOptions, NumericIfs,
};
use selfsim_core::words::{build_translation, conjugate_values, DEFAULT_ENUM_CAP};

#[test]
fn every_witness_covers_and_matches_numerically() {
    let mut seen = 0;
    for inst in common::suite() {
        let r = decide_values(&inst.field, &inst.t, &DecideConfig::default()).unwrap();
        if r.verdict != Verdict::SelfSimilar {
            continue;
        }
        let w = r.witness.as_ref().expect("witness");
        assert!(w.coverage_verified, "{}", inst.name);
        let mut vals = vec![inst.field.zero()];
        vals.extend(inst.t.iter().cloned());
        if w.side == selfsim_core::decide::Side::Conjugate {
            vals = conjugate_values(&vals);
        }
        let tv = build_translation(&inst.field, &vals).unwrap();
        assert!(witness_covers(&inst.field, &tv, w, DEFAULT_ENUM_CAP).unwrap());
        let check = verify_report_witness(&r, 8, None).unwrap().unwrap();
        assert!(check.passed, "{}: {} > {}", inst.name, check.distance, check.tol);
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn dropping_the_widest_map_breaks_the_witness() {
    for inst in common::suite() {
        let r = decide_values(&inst.field, &inst.t, &DecideConfig::default()).unwrap();
        let Some(w) = &r.witness else { continue };
        let ifs = witness_ifs(w).unwrap();
        let widest = (0..ifs.maps().len())
            .max_by(|&a, &b| {
                let (x, y) = (ifs.maps()[a].ratio.abs(), ifs.maps()[b].ratio.abs());
                x.partial_cmp(&y).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        let check = check_maps(&r, &ifs.without(widest).unwrap(), 8, None).unwrap();
        assert!(!check.passed, "{}: {}", inst.name, check.distance);
    }
}

#[test]
fn dropping_any_map_breaks_the_quarter_witness() {
    let (field, _) = selfsim_core::make_beta(&selfsim_core::BetaSpec::rational(1, 4, 1)).unwrap();
    let t = [field.from_int(3)];
    let r = decide_values(&field, &t, &DecideConfig::default()).unwrap();
    let ifs = witness_ifs(r.witness.as_ref().unwrap()).unwrap();
    for k in 0..ifs.maps().len() {
        let check = check_maps(&r, &ifs.without(k).unwrap(), 8, None).unwrap();
        assert!(!check.passed, "without map {k}: {}", check.distance);
    }
}

#[test]
fn two_ratio_union_matches_four_map_system() {
    let l: f64 = 0.5;
    let s = l.powi(-2) - 1.0;
    let k = NumericIfs::new(vec![AffineMap::new(l, 0.0), AffineMap::new(l * l, 1.0 - l * l)]).unwrap();
    let g = NumericIfs::new(vec![
        AffineMap::new(l * l, 0.0),
        AffineMap::new(l.powi(3), 0.0),
        AffineMap::new(l * l, s),
        AffineMap::new(l.powi(3), s),
    ])
    .unwrap();
    let o = ApproxOptions::default();
    let ka = approx_attractor_resolution(&k, l.powi(20), &o).unwrap();
    let union = ka.union(&ka.translate(s), 0.0);
    let ga = approx_attractor(&g, 10, &o).unwrap();
    let d = hausdorff(&union, &ga).unwrap();
    assert!(d <= 2.0 * l.powi(20) * 4.0, "{d}");
    assert!(s.to_f64().unwrap() == 3.0);
}
