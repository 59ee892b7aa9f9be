//! Exact arithmetic in the number field `Q(β)`.
//!
//! `β` is given either as a rational `p/q` or as the unique root of an integer
//! polynomial inside a rational isolating interval. Elements are stored as
//! coefficient vectors reduced modulo the minimal polynomial of `β`, so two
//! elements are equal as reals exactly when their vectors coincide. Signs are
//! decided by rational interval evaluation over a bisected isolating interval.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{sign_of, Interval, Poly};

pub type Rational = BigRational;

/// Largest minimal-polynomial degree accepted for `β`.
pub const MAX_DEGREE: usize = 8;

/// Bits of precision the isolating interval is refined to at construction.
const REFINE_BITS: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("the polynomial has no real root in the isolating interval")]
    NoRootInInterval,
    #[error("the polynomial has {0} distinct real roots in the isolating interval")]
    MultipleRootsInInterval(usize),
    #[error("beta must satisfy 0 < beta < 1/(N+1)")]
    BetaOutOfRange,
    #[error("minimal polynomial of beta has degree {0}, above the supported cap of {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("operands belong to different field contexts")]
    MixedContexts,
    #[error("division by zero in Q(beta)")]
    DivisionByZero,
    #[error("invalid beta specification: {0}")]
    InvalidSpec(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// How `β` is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaKind {
    /// `β = p/q`.
    Rational { p: BigInt, q: BigInt },
    /// `β` is the unique root of `coeffs[0] + coeffs[1] x + …` in `[lo, hi]`.
    Root {
        coeffs: Vec<BigInt>,
        lo: Rational,
        hi: Rational,
    },
}

/// `β` together with the alphabet parameter `N` (digits `0..=N`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSpec {
    pub kind: BetaKind,
    pub n: u32,
}

impl BetaSpec {
    pub fn rational(p: i64, q: i64, n: u32) -> Self {
        BetaSpec {
            kind: BetaKind::Rational {
                p: BigInt::from(p),
                q: BigInt::from(q),
            },
            n,
        }
    }

    pub fn root(coeffs: &[i64], lo: Rational, hi: Rational, n: u32) -> Self {
        BetaSpec {
            kind: BetaKind::Root {
                coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
                lo,
                hi,
            },
            n,
        }
    }
}

/// Shared, immutable description of `Q(β)`.
#[derive(Debug)]
pub struct FieldContext {
    n: u32,
    /// Monic minimal polynomial of `β`.
    modulus: Poly<Rational>,
    supplied: Interval<Rational>,
    /// Refined isolating interval; a single point when `β` is rational.
    isolating: Interval<Rational>,
    /// Sign of the modulus at `isolating.lo` (0 for a point interval).
    sign_lo: i8,
}

/// Cheap handle to a [`FieldContext`].
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldContext>);

/// An element of `Q(β)` in canonical form.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Field,
    coeffs: Vec<Rational>,
}

/// Build the field context for `spec` and return it together with `β`.
pub fn make_beta(spec: &BetaSpec) -> Result<(Field, AlgebraicNumber), AlgError> {
    if spec.n == 0 {
        return Err(AlgError::InvalidSpec("N must be a positive integer".into()));
    }
    let (modulus, supplied) = match &spec.kind {
        BetaKind::Rational { p, q } => {
            if q.is_zero() {
                return Err(AlgError::InvalidSpec("denominator is zero".into()));
            }
            let b = BigRational::new(p.clone(), q.clone());
            let m = Poly::new(vec![-b.clone(), Rational::one()]);
            (m, Interval::point(b))
        }
        BetaKind::Root { coeffs, lo, hi } => {
            if lo > hi {
                return Err(AlgError::InvalidSpec(
                    "isolating interval has lo > hi".into(),
                ));
            }
            let p = Poly::new(coeffs.iter().cloned().map(Rational::from_integer).collect());
            if p.degree().unwrap_or(0) == 0 {
                return Err(AlgError::InvalidSpec(
                    "polynomial must have degree at least 1".into(),
                ));
            }
            let sf = p.squarefree_part();
            match sf.count_roots_closed(lo, hi) {
                0 => return Err(AlgError::NoRootInInterval),
                1 => {}
                k => return Err(AlgError::MultipleRootsInInterval(k)),
            }
            (
                minimal_factor(&sf, lo, hi)?,
                Interval::new(lo.clone(), hi.clone()),
            )
        }
    };
    let degree = modulus.degree().unwrap_or(0);
    if degree > MAX_DEGREE {
        return Err(AlgError::DegreeTooHigh(degree));
    }
    let (isolating, sign_lo) = if degree == 1 {
        let root = -modulus.coeff(0) / modulus.coeff(1);
        (Interval::point(root), 0)
    } else {
        let mut iv = supplied.clone();
        let sign_lo = modulus.sign_at(&iv.lo);
        let target = Rational::new(BigInt::one(), BigInt::one() << REFINE_BITS);
        while iv.width() > target {
            iv = bisect(&modulus, &iv, sign_lo);
        }
        (iv, sign_lo)
    };
    let field = Field(Arc::new(FieldContext {
        n: spec.n,
        modulus,
        supplied,
        isolating,
        sign_lo,
    }));
    let beta = field.beta();
    let upper = field.from_rational(Rational::new(
        BigInt::one(),
        BigInt::from(spec.n) + BigInt::one(),
    ));
    if beta.sign() <= 0 || (&upper - &beta).sign() <= 0 {
        return Err(AlgError::BetaOutOfRange);
    }
    Ok((field, beta))
}

/// Pick the irreducible factor of the squarefree `sf` that vanishes in `[lo, hi]`.
fn minimal_factor(
    sf: &Poly<Rational>,
    lo: &Rational,
    hi: &Rational,
) -> Result<Poly<Rational>, AlgError> {
    let primitive = to_primitive_integer(sf);
    let factors = algebraics::polynomial::Polynomial::from(primitive).factor();
    for f in factors.polynomial_factors {
        let poly = Poly::new(
            f.polynomial
                .into_coefficients()
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
        );
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        if poly.count_roots_closed(lo, hi) == 1 {
            return Ok(poly.monic());
        }
    }
    Err(AlgError::NoRootInInterval)
}

/// Scale a rational polynomial to a primitive integer polynomial.
pub fn to_primitive_integer(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn bisect(modulus: &Poly<Rational>, iv: &Interval<Rational>, sign_lo: i8) -> Interval<Rational> {
    let mid = iv.midpoint();
    match modulus.sign_at(&mid) {
        0 => Interval::point(mid),
        s if s == sign_lo => Interval::new(mid, iv.hi.clone()),
        _ => Interval::new(iv.lo.clone(), mid),
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl Field {
    pub fn context(&self) -> &FieldContext {
        &self.0
    }

    /// Alphabet parameter `N`.
    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// Degree of `β` over `Q`.
    pub fn degree(&self) -> usize {
        self.0.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &Poly<Rational> {
        &self.0.modulus
    }

    /// Minimal polynomial as a primitive integer vector, constant term first.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        to_primitive_integer(&self.0.modulus)
    }

    /// The interval the caller supplied (a point for rational `β`).
    pub fn supplied_interval(&self) -> &Interval<Rational> {
        &self.0.supplied
    }

    pub fn isolating_interval(&self) -> &Interval<Rational> {
        &self.0.isolating
    }

    /// A rational upper bound for `β`.
    pub fn upper_bound(&self) -> Rational {
        self.0.isolating.hi.clone()
    }

    /// `Some(β)` when `β` is rational.
    pub fn rational_beta(&self) -> Option<Rational> {
        (self.degree() == 1).then(|| self.0.isolating.lo.clone())
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n
                && self.0.modulus == other.0.modulus
                && self.0.supplied == other.0.supplied)
    }

    fn element(&self, coeffs: Vec<Rational>) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.clone(),
            coeffs: trim(coeffs),
        }
    }

    fn reduce(&self, p: Poly<Rational>) -> AlgebraicNumber {
        let r = if p.degree().unwrap_or(0) >= self.degree() {
            p.rem(&self.0.modulus)
        } else {
            p
        };
        self.element(r.into_coeffs())
    }

    pub fn zero(&self) -> AlgebraicNumber {
        self.element(Vec::new())
    }

    pub fn one(&self) -> AlgebraicNumber {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, k: i64) -> AlgebraicNumber {
        self.from_rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(&self, q: Rational) -> AlgebraicNumber {
        self.element(vec![q])
    }

    pub fn beta(&self) -> AlgebraicNumber {
        self.eval_poly(&[Rational::zero(), Rational::one()])
    }

    /// `(1 - β) / N`, the spacing of the first-level left endpoints.
    pub fn digit_unit(&self) -> AlgebraicNumber {
        let n = Rational::from_integer(BigInt::from(self.0.n));
        (&self.one() - &self.beta()).scale(&(Rational::one() / n))
    }

    /// `Σ coeffs[k] β^k`, reduced.
    pub fn eval_poly(&self, coeffs: &[Rational]) -> AlgebraicNumber {
        self.reduce(Poly::new(coeffs.to_vec()))
    }

    /// Parse `"p/q"` or a Laurent polynomial in `b` such as `"b^-2-1"` or
    /// `"1/2-3/2*b"`.
    pub fn parse_value(&self, input: &str) -> Result<AlgebraicNumber, AlgError> {
        let err = |reason: &str| AlgError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty expression"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = self.zero();
        for term in terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, power) = match body.find('b') {
                None => (parse_rational(body).ok_or_else(|| err("bad rational"))?, 0i64),
                Some(pos) => {
                    let coef = match &body[..pos] {
                        "" => Rational::one(),
                        c => parse_rational(c.strip_suffix('*').ok_or_else(|| err("expected `*` before b"))?)
                            .ok_or_else(|| err("bad coefficient"))?,
                    };
                    let rest = &body[pos + 1..];
                    let power = match rest {
                        "" => 1,
                        r => r
                            .strip_prefix('^')
                            .and_then(|e| e.parse::<i64>().ok())
                            .ok_or_else(|| err("bad exponent"))?,
                    };
                    (coef, power)
                }
            };
            let coef = if negative { -coef } else { coef };
            let term = self.beta().pow(power)?.scale(&coef);
            acc = &acc + &term;
        }
        Ok(acc)
    }

    fn sign_of_coeffs(&self, coeffs: &[Rational]) -> i8 {
        if coeffs.len() <= 1 {
            return coeffs.first().map_or(0, sign_of);
        }
        let p = Poly::new(coeffs.to_vec());
        let mut iv = self.0.isolating.clone();
        loop {
            if let Some(s) = p.eval_interval(&iv).strict_sign() {
                return s;
            }
            if iv.lo == iv.hi {
                return p.sign_at(&iv.lo);
            }
            iv = bisect(&self.0.modulus, &iv, self.0.sign_lo);
        }
    }
}

impl Eq for Field {}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Parse `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
    }
}

impl AlgebraicNumber {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Canonical coefficients, constant term first, without trailing zeros.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sign of the real value as -1, 0 or 1.
    pub fn sign(&self) -> i8 {
        self.field.sign_of_coeffs(&self.coeffs)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Rational enclosure of the value, narrower than `2^-bits`.
    pub fn enclosure(&self, bits: u64) -> Interval<Rational> {
        let p = Poly::new(self.coeffs.clone());
        let target = Rational::new(BigInt::one(), BigInt::one() << bits);
        let ctx = &self.field.0;
        let mut iv = ctx.isolating.clone();
        loop {
            let out = p.eval_interval(&iv);
            if out.width() <= target || iv.lo == iv.hi {
                return out;
            }
            iv = bisect(&ctx.modulus, &iv, ctx.sign_lo);
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(80).midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| coeff(&self.coeffs, k) + coeff(&rhs.coeffs, k))
            .collect();
        Ok(self.field.element(coeffs))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| coeff(&self.coeffs, k) - coeff(&rhs.coeffs, k))
            .collect();
        Ok(self.field.element(coeffs))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(self.field.zero());
        }
        if self.coeffs.len() == 1 {
            return Ok(rhs.scale(&self.coeffs[0]));
        }
        if rhs.coeffs.len() == 1 {
            return Ok(self.scale(&rhs.coeffs[0]));
        }
        let prod = &Poly::new(self.coeffs.clone()) * &Poly::new(rhs.coeffs.clone());
        Ok(self.field.reduce(prod))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, AlgError> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(self.field.from_rational(Rational::one() / &self.coeffs[0]));
        }
        let (g, s) = Poly::new(self.coeffs.clone()).inverse_mod(&self.field.0.modulus);
        // The modulus is irreducible, so a nonzero reduced element is a unit.
        debug_assert_eq!(g.degree(), Some(0));
        Ok(self.field.element(s.into_coeffs()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.checked_mul(&rhs.inv()?)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self, AlgError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return self.field.zero();
        }
        self.field
            .element(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Three-way comparison of real values.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    fn check(&self, rhs: &Self) -> Result<(), AlgError> {
        if self.field.same(&rhs.field) {
            Ok(())
        } else {
            Err(AlgError::MixedContexts)
        }
    }
}

fn coeff(v: &[Rational], k: usize) -> Rational {
    v.get(k).cloned().unwrap_or_else(Rational::zero)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same(&other.field)
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $method(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
                self.$checked(rhs).expect("mixed field contexts")
            }
        }

        impl $tr for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $method(self, rhs: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        self.field.element(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

impl fmt::Display for AlgebraicNumber {
    /// Writes `c0+c1*b+c2*b^2`, omitting zero terms; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => "b".to_string(),
                _ => format!("b^{k}"),
            };
            if k == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{abs}*{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber({self})")
    }
}
