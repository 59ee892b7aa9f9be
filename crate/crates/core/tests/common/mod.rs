#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use selfsim_core::algnum::{make_beta, AlgebraicNumber, BetaSpec, Field};
use selfsim_core::words::{t_level_values, DEFAULT_ENUM_CAP};

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Root of `(N+1)x + N x² - 1` in `(0, 1/(N+1))`.
pub fn unit_quadratic(n: u32) -> BetaSpec {
    let n = i64::from(n);
    BetaSpec::root(&[-1, n + 1, n], rat(0, 1), rat(1, n + 1), n as u32)
}

/// Root of `(N+1)x + x² - 1` in `(0, 1/(N+1))`.
pub fn cycle_quadratic(n: u32) -> BetaSpec {
    let n = i64::from(n);
    BetaSpec::root(&[-1, n + 1, 1], rat(0, 1), rat(1, n + 1), n as u32)
}

pub struct Instance {
    pub name: String,
    pub field: Field,
    /// `t_1, …, t_m`.
    pub t: Vec<AlgebraicNumber>,
}

fn instance(name: String, spec: &BetaSpec, t: &[&str]) -> Instance {
    let (field, _) = make_beta(spec).unwrap();
    let t = t.iter().map(|s| field.parse_value(s).unwrap()).collect();
    Instance { name, field, t }
}

fn level_sweep(label: &str, spec: &BetaSpec, tau_max: usize) -> Vec<Instance> {
    let (field, _) = make_beta(spec).unwrap();
    t_level_values(&field, tau_max, DEFAULT_ENUM_CAP)
        .unwrap()
        .into_iter()
        .map(|v| Instance {
            name: format!("{label} t={v}"),
            field: field.clone(),
            t: vec![v],
        })
        .collect()
}

pub fn suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(instance(format!("unit N={n}"), &unit_quadratic(n), &["b^-2-1"]));
    }
    for n in 2..=3 {
        let spec = cycle_quadratic(n);
        out.push(instance(format!("cycle N={n} t"), &spec, &["b^-1-1"]));
        out.push(instance(format!("cycle N={n} t'"), &spec, &["b^-2-b^-1"]));
    }
    out.extend(level_sweep("1/4 N=1", &BetaSpec::rational(1, 4, 1), 3));
    out.extend(level_sweep("1/8 N=3", &BetaSpec::rational(1, 8, 3), 1));
    out.extend(level_sweep("2/7 N=2", &BetaSpec::rational(2, 7, 2), 1));
    let quarter = BetaSpec::rational(1, 4, 1);
    for t in [["36", "51"], ["3", "12"], ["12", "15"], ["48", "51"]] {
        out.push(instance(format!("1/4 N=1 t=(0,{},{})", t[0], t[1]), &quarter, &t));
    }
    out
}
