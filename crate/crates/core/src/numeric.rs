//! Floating-point attractor approximations and Hausdorff distances between
//! finite unions of intervals.
//!
//! Approximations start from the convex hull of the attractor and only ever
//! over-approximate it, so the Hausdorff error of an approximation is bounded
//! by the largest image width it keeps.

use num_traits::Float;
use thiserror::Error;

/// Default bound on the number of intervals kept by an approximation.
pub const DEFAULT_INTERVAL_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("interval count {count} exceeds the cap {cap}")]
    BlowupGuard { count: usize, cap: usize },
    #[error("Hausdorff distance needs two nonempty sets")]
    EmptyInput,
    #[error("map {0} is not a contraction")]
    NotContractive(usize),
    #[error("an IFS needs at least one map")]
    NoMaps,
}

/// Sorted, pairwise disjoint closed intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion<F> {
    intervals: Vec<(F, F)>,
}

impl<F: Float> IntervalUnion<F> {
    /// Sort and merge intervals whose gap is at most `merge_tol`.
    pub fn new(mut intervals: Vec<(F, F)>, merge_tol: F) -> Self {
        for iv in intervals.iter_mut() {
            if iv.1 < iv.0 {
                *iv = (iv.1, iv.0);
            }
        }
        intervals.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
        let mut out: Vec<(F, F)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 + merge_tol => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn intervals(&self) -> &[(F, F)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn hull(&self) -> Option<(F, F)> {
        Some((self.intervals.first()?.0, self.intervals.last()?.1))
    }

    pub fn union(&self, other: &Self, merge_tol: F) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::new(all, merge_tol)
    }

    pub fn translate(&self, by: F) -> Self {
        IntervalUnion {
            intervals: self.intervals.iter().map(|&(a, b)| (a + by, b + by)).collect(),
        }
    }

    /// Distance from `x` to the set.
    pub fn distance_to(&self, x: F) -> F {
        let k = self.intervals.partition_point(|iv| iv.1 < x);
        let mut best = F::infinity();
        if let Some(&(a, b)) = self.intervals.get(k) {
            best = if x >= a && x <= b { F::zero() } else { a - x };
        }
        if k > 0 {
            best = best.min(x - self.intervals[k - 1].1);
        }
        best
    }

    /// Whether every interval lies inside some interval of `other`, up to `eps`.
    pub fn is_within(&self, other: &Self, eps: F) -> bool {
        self.intervals.iter().all(|&(a, b)| {
            let k = other.intervals.partition_point(|iv| iv.1 + eps < b);
            other
                .intervals
                .get(k)
                .is_some_and(|&(c, d)| c - eps <= a && b <= d + eps)
        })
    }
}

/// `x ↦ ratio·x + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap<F> {
    pub ratio: F,
    pub offset: F,
}

impl<F: Float> AffineMap<F> {
    pub fn new(ratio: F, offset: F) -> Self {
        AffineMap { ratio, offset }
    }

    pub fn apply(&self, x: F) -> F {
        self.ratio * x + self.offset
    }

    pub fn image(&self, (a, b): (F, F)) -> (F, F) {
        let (x, y) = (self.apply(a), self.apply(b));
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        AffineMap {
            ratio: self.ratio * other.ratio,
            offset: self.ratio * other.offset + self.offset,
        }
    }
}

/// An iterated function system of contracting similitudes of the line.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericIfs<F> {
    maps: Vec<AffineMap<F>>,
}

impl<F: Float> NumericIfs<F> {
    pub fn new(maps: Vec<AffineMap<F>>) -> Result<Self, NumericError> {
        if maps.is_empty() {
            return Err(NumericError::NoMaps);
        }
        if let Some(k) = maps.iter().position(|m| !(m.ratio.abs() < F::one())) {
            return Err(NumericError::NotContractive(k));
        }
        Ok(NumericIfs { maps })
    }

    pub fn maps(&self) -> &[AffineMap<F>] {
        &self.maps
    }

    pub fn max_ratio(&self) -> F {
        self.maps
            .iter()
            .map(|m| m.ratio.abs())
            .fold(F::zero(), F::max)
    }

    /// The same system without map `k`.
    pub fn without(&self, k: usize) -> Result<Self, NumericError> {
        let mut maps = self.maps.clone();
        maps.remove(k);
        Self::new(maps)
    }

    /// Convex hull of the attractor.
    ///
    /// Starts from an invariant interval and iterates the hull of the images,
    /// which contracts onto the attractor's hull from outside.
    pub fn hull(&self) -> (F, F) {
        let r = self.max_ratio();
        let c = self
            .maps
            .iter()
            .map(|m| m.offset.abs())
            .fold(F::zero(), F::max);
        let big = c / (F::one() - r);
        let mut iv = (-big, big);
        for _ in 0..10_000 {
            let next = self.maps.iter().fold((F::infinity(), F::neg_infinity()), |acc, m| {
                let (a, b) = m.image(iv);
                (acc.0.min(a), acc.1.max(b))
            });
            if next == iv {
                break;
            }
            iv = next;
        }
        iv
    }
}

/// The IFS `φ_i(x) = βx + i(1-β)/N`, `i = 0..=N`.
pub fn gamma_ifs<F: Float>(n: u32, beta: F) -> NumericIfs<F> {
    let nf = F::from(n).expect("N fits in float");
    let maps = (0..=n)
        .map(|i| AffineMap::new(beta, F::from(i).unwrap() * (F::one() - beta) / nf))
        .collect();
    NumericIfs::new(maps).expect("0 < beta < 1")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxOptions<F> {
    pub merge_tol: F,
    pub cap: usize,
}

impl<F: Float> Default for ApproxOptions<F> {
    fn default() -> Self {
        ApproxOptions {
            merge_tol: F::zero(),
            cap: DEFAULT_INTERVAL_CAP,
        }
    }
}

/// Union of all `depth`-fold images of the hull.
pub fn approx_attractor<F: Float>(
    ifs: &NumericIfs<F>,
    depth: usize,
    opts: &ApproxOptions<F>,
) -> Result<IntervalUnion<F>, NumericError> {
    let mut cur = IntervalUnion::new(vec![ifs.hull()], opts.merge_tol);
    for _ in 0..depth {
        let count = cur.len() * ifs.maps.len();
        if count > opts.cap.saturating_mul(ifs.maps.len()) {
            return Err(NumericError::BlowupGuard {
                count,
                cap: opts.cap,
            });
        }
        let next: Vec<(F, F)> = cur
            .intervals
            .iter()
            .flat_map(|&iv| ifs.maps.iter().map(move |m| m.image(iv)))
            .collect();
        cur = IntervalUnion::new(next, opts.merge_tol);
        if cur.len() > opts.cap {
            return Err(NumericError::BlowupGuard {
                count: cur.len(),
                cap: opts.cap,
            });
        }
    }
    Ok(cur)
}

/// Images `f_w(hull)` refined until every piece is at most `width` wide.
pub fn approx_attractor_resolution<F: Float>(
    ifs: &NumericIfs<F>,
    width: F,
    opts: &ApproxOptions<F>,
) -> Result<IntervalUnion<F>, NumericError> {
    let hull = ifs.hull();
    let diam = hull.1 - hull.0;
    let mut pending = vec![AffineMap::new(F::one(), F::zero())];
    let mut leaves = Vec::new();
    while let Some(g) = pending.pop() {
        if g.ratio.abs() * diam <= width {
            leaves.push(g.image(hull));
            if leaves.len() > opts.cap {
                leaves = IntervalUnion::new(leaves, opts.merge_tol).intervals;
                if leaves.len() * 2 > opts.cap {
                    return Err(NumericError::BlowupGuard {
                        count: leaves.len(),
                        cap: opts.cap,
                    });
                }
            }
        } else {
            pending.extend(ifs.maps.iter().map(|m| g.compose(m)));
        }
    }
    Ok(IntervalUnion::new(leaves, opts.merge_tol))
}

/// `∪_j (Γ + t_j)` with `Γ` approximated at `depth`.
pub fn approx_gamma_t<F: Float>(
    n: u32,
    beta: F,
    t: &[F],
    depth: usize,
    opts: &ApproxOptions<F>,
) -> Result<IntervalUnion<F>, NumericError> {
    let gamma = approx_attractor(&gamma_ifs(n, beta), depth, opts)?;
    let mut all = Vec::with_capacity(gamma.len() * t.len());
    for &tj in t {
        all.extend(gamma.intervals.iter().map(|&(a, b)| (a + tj, b + tj)));
    }
    Ok(IntervalUnion::new(all, opts.merge_tol))
}

/// Hausdorff distance between two nonempty finite unions of closed intervals.
///
/// `x ↦ dist(x, v)` is piecewise linear on each interval of `u`, so the
/// one-sided supremum is attained at an endpoint of `u` or at the midpoint
/// of a gap of `v`.
pub fn hausdorff<F: Float>(u: &IntervalUnion<F>, v: &IntervalUnion<F>) -> Result<F, NumericError> {
    if u.is_empty() || v.is_empty() {
        return Err(NumericError::EmptyInput);
    }
    Ok(directed(u, v).max(directed(v, u)))
}

fn directed<F: Float>(u: &IntervalUnion<F>, v: &IntervalUnion<F>) -> F {
    let two = F::one() + F::one();
    let mut best = F::zero();
    for &(a, b) in &u.intervals {
        best = best.max(v.distance_to(a)).max(v.distance_to(b));
    }
    for gap in v.intervals.windows(2) {
        let mid = (gap[0].1 + gap[1].0) / two;
        if u.distance_to(mid) == F::zero() {
            best = best.max(v.distance_to(mid));
        }
    }
    best
}

/// Outcome of comparing a witness attractor with `Γ_t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessCheck<F> {
    pub distance: F,
    pub tol: F,
    pub passed: bool,
}

/// `4·ub^depth·(1 + t_m)`.
pub fn default_tolerance<F: Float>(ub: F, depth: usize, t_m: F) -> F {
    F::from(4.0).unwrap() * ub.powi(depth as i32) * (F::one() + t_m)
}

/// Compare the attractor of `witness` with `Γ_t = ∪_j (Γ + t_j)`.
///
/// `Γ_t` is approximated at `depth`; the witness attractor is refined to the
/// matching resolution `ub^depth·(1 + t_m)`. Gaps narrower than `tol/8` are
/// merged on both sides.
pub fn verify_witness<F: Float>(
    witness: &NumericIfs<F>,
    n: u32,
    beta: F,
    t: &[F],
    depth: usize,
    ub: F,
    tol: Option<F>,
) -> Result<WitnessCheck<F>, NumericError> {
    let t_m = t.iter().copied().fold(F::zero(), F::max);
    let tol = tol.unwrap_or_else(|| default_tolerance(ub, depth, t_m));
    let opts = ApproxOptions {
        merge_tol: tol / F::from(8.0).unwrap(),
        cap: DEFAULT_INTERVAL_CAP,
    };
    let target = approx_gamma_t(n, beta, t, depth, &opts)?;
    let width = ub.powi(depth as i32) * (F::one() + t_m);
    let approx = approx_attractor_resolution(witness, width, &opts)?;
    let distance = hausdorff(&approx, &target)?;
    Ok(WitnessCheck {
        distance,
        tol,
        passed: distance <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(iv: &[(f64, f64)]) -> IntervalUnion<f64> {
        IntervalUnion::new(iv.to_vec(), 0.0)
    }

    #[test]
    fn gamma_depths() {
        let ifs = gamma_ifs(1, 0.25);
        let o = ApproxOptions::default();
        assert_eq!(approx_attractor(&ifs, 0, &o).unwrap(), u(&[(0.0, 1.0)]));
        assert_eq!(approx_attractor(&ifs, 1, &o).unwrap(), u(&[(0.0, 0.25), (0.75, 1.0)]));
    }

    #[test]
    fn two_ratio_first_level() {
        let l: f64 = 0.5;
        let s = l.powi(-2) - 1.0;
        let ifs = NumericIfs::new(vec![
            AffineMap::new(l * l, 0.0),
            AffineMap::new(l * l * l, 0.0),
            AffineMap::new(l * l, s),
            AffineMap::new(l * l * l, s),
        ])
        .unwrap();
        assert_eq!(ifs.hull(), (0.0, 4.0));
        let raw: Vec<_> = ifs.maps().iter().map(|m| m.image(ifs.hull())).collect();
        assert_eq!(raw.len(), 4);
        assert_eq!(approx_attractor(&ifs, 1, &ApproxOptions::default()).unwrap(), u(&[(0.0, 1.0), (3.0, 4.0)]));
    }

    #[test]
    fn gamma_t_cases() {
        let o = ApproxOptions::default();
        assert_eq!(approx_gamma_t(1, 0.25, &[0.0, 3.0], 0, &o).unwrap(), u(&[(0.0, 1.0), (3.0, 4.0)]));
        assert_eq!(approx_gamma_t(1, 0.25, &[0.0, 3.0], 1, &o).unwrap().len(), 4);
        assert_eq!(approx_gamma_t(1, 0.25, &[0.0, 0.5], 0, &o).unwrap(), u(&[(0.0, 1.5)]));
    }

    #[test]
    fn hausdorff_cases() {
        let x = u(&[(0.0, 1.0), (3.0, 4.0)]);
        assert_eq!(hausdorff(&x, &x).unwrap(), 0.0);
        assert_eq!(hausdorff(&u(&[(0.0, 1.0)]), &u(&[(0.0, 1.0), (2.0, 2.0)])).unwrap(), 1.0);
        assert_eq!(hausdorff(&u(&[(0.0, 4.0)]), &u(&[(0.0, 1.0), (3.0, 4.0)])).unwrap(), 1.0);
        assert_eq!(hausdorff(&u(&[]), &x), Err(NumericError::EmptyInput));
    }

    #[test]
    fn witness_for_three_passes_and_corruption_fails() {
        let witness = NumericIfs::new(vec![
            AffineMap::new(0.25, 0.0),
            AffineMap::new(0.25, 3.0),
            AffineMap::new(-0.25, 1.0),
            AffineMap::new(-0.25, 4.0),
        ])
        .unwrap();
        let ok = verify_witness(&witness, 1, 0.25, &[0.0, 3.0], 8, 0.25, None).unwrap();
        assert!(ok.passed, "{ok:?}");
        assert!(ok.distance <= 2.0 * 0.25f64.powi(8) * 4.0);
        let bad = NumericIfs::new(vec![AffineMap::new(0.25, 3.0), AffineMap::new(-0.25, 4.0)]).unwrap();
        let check = verify_witness(&bad, 1, 0.25, &[0.0, 3.0], 8, 0.25, None).unwrap();
        assert!(!check.passed);
    }

    #[test]
    fn contraction_and_blowup_guards() {
        assert_eq!(
            NumericIfs::new(vec![AffineMap::new(1.0, 0.0)]),
            Err(NumericError::NotContractive(0))
        );
        let opts = ApproxOptions {
            merge_tol: 0.0,
            cap: 10,
        };
        assert!(matches!(
            approx_attractor(&gamma_ifs(1, 0.25), 5, &opts),
            Err(NumericError::BlowupGuard { .. })
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let a = approx_attractor(&gamma_ifs(1, 0.25f32), 2, &ApproxOptions::default()).unwrap();
        assert_eq!(a.len(), 4);
    }

    fn union_strategy() -> impl Strategy<Value = IntervalUnion<f64>> {
        proptest::collection::vec((-50.0f64..50.0, 0.0f64..5.0), 1..8)
            .prop_map(|v| IntervalUnion::new(v.into_iter().map(|(a, w)| (a, a + w)).collect(), 0.0))
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(a in union_strategy(), b in union_strategy(), c in union_strategy()) {
            let ab = hausdorff(&a, &b).unwrap();
            prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
            prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
            let via = hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap();
            prop_assert!(ab <= via + 1e-9);
        }

        #[test]
        fn depths_are_nested(n in 1u32..4, beta_frac in 0.2f64..0.95, depth in 0usize..5) {
            let beta = beta_frac / f64::from(n + 1);
            let ifs = gamma_ifs(n, beta);
            let o = ApproxOptions::default();
            let coarse = approx_attractor(&ifs, depth, &o).unwrap();
            let fine = approx_attractor(&ifs, depth + 1, &o).unwrap();
            prop_assert!(fine.is_within(&coarse, 1e-12));
        }
    }
}
