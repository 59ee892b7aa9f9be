mod common;

use proptest::prelude::*;
use selfsim_core::algnum::make_beta;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn quadratic_beta_matches_closed_root() {
    for n in 1..=3u32 {
        let (f, beta) = make_beta(&common::unit_quadratic(n)).unwrap();
        let nf = f64::from(n);
        let root = (-(nf + 1.0) + ((nf + 1.0).powi(2) + 4.0 * nf).sqrt()) / (2.0 * nf);
        assert!(close(beta.to_f64(), root));
        assert_eq!(f.degree(), 2);
        let ub = f.upper_bound();
        assert!(f.from_rational(ub.clone()) >= beta);
        assert!(close(num_traits::ToPrimitive::to_f64(&ub).unwrap(), root));
    }
}

proptest! {
    #[test]
    fn field_ops_track_floats(
        n in 2u32..4,
        a in proptest::collection::vec(-5i64..6, 3),
        b in proptest::collection::vec(-5i64..6, 3),
        k in -3i64..4,
    ) {
        let (f, beta) = make_beta(&common::cycle_quadratic(n)).unwrap();
        let laurent = |c: &[i64], sign: i64| {
            c.iter().enumerate().fold(f.zero(), |acc, (i, &ci)| {
                &acc + &(&f.from_int(ci) * &beta.pow(sign * i as i64).unwrap())
            })
        };
        let (x, y) = (laurent(&a, 1), laurent(&b, -1));
        let (xf, yf, bf) = (x.to_f64(), y.to_f64(), beta.to_f64());
        prop_assert!(close((&x + &y).to_f64(), xf + yf));
        prop_assert!(close((&x * &y).to_f64(), xf * yf));
        prop_assert!(close(beta.pow(k).unwrap().to_f64(), bf.powi(k as i32)));
        if !y.is_zero() {
            prop_assert!(close(x.checked_div(&y).unwrap().to_f64(), xf / yf));
        }
        prop_assert_eq!(x.cmp(&y), xf.partial_cmp(&yf).unwrap());
        prop_assert_eq!(x.sign() as i32, if xf > 0.0 { 1 } else if xf < 0.0 { -1 } else { 0 });
    }
}
