//! Exact decision procedure for the self-similarity of
//! `Γ_t = ∪_{j=0}^{m} (Γ + t_j)`, where `Γ` is the attractor of
//! `φ_i(x) = βx + i(1-β)/N`, `i = 0..=N`, `0 < β < 1/(N+1)`.
//!
//! ```
//! use selfsim_core::{decide, BetaSpec, DecideConfig, TranslationSpec, Verdict};
//!
//! let spec = BetaSpec::rational(1, 4, 1);
//! let t = [TranslationSpec::Value("3".into())];
//! let report = decide(&spec, &t, &DecideConfig::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::SelfSimilar);
//! ```

pub mod algnum;
pub mod decide;
pub mod graph;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod theta;
pub mod words;

pub use algnum::{make_beta, AlgError, AlgebraicNumber, BetaKind, BetaSpec, Field, Rational};
pub use decide::{
    closed_form_m1, decide, decide_values, DecideConfig, DecideError, DecisionReport, TranslationSpec,
    Verdict,
};
pub use numeric::{AffineMap, IntervalUnion, NumericIfs};
pub use oracle::OracleOutcome;
pub use poly::{Interval, Poly};
pub use scalar::Scalar;
pub use theta::{BnStatus, BnVerdict};
pub use words::{DigitWord, TranslationVector, WordSet};

/// Polynomials with exact big-rational coefficients.
pub type RatPoly = Poly<Rational>;
/// Interval unions in double precision.
pub type IntervalUnion64 = IntervalUnion<f64>;
/// Interval unions in single precision.
pub type IntervalUnion32 = IntervalUnion<f32>;
/// Affine maps in double precision.
pub type AffineMap64 = AffineMap<f64>;
/// Iterated function systems in double precision.
pub type NumericIfs64 = NumericIfs<f64>;
/// Iterated function systems in single precision.
pub type NumericIfs32 = NumericIfs<f32>;
