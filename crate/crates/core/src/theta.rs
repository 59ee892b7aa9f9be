//! Membership of `β` in `B_N` and the depth offset `ϑ(β)`.
//!
//! `β ∉ B_N` exactly when some relation `Σ c_k β^k = 0` holds with integer
//! coefficients `c_k = j_k - i_k`, `i_k ∈ 0..=2N`, `j_k ∈ 0..=N`, not all zero.
//! Relations are searched breadth-first over the normalized partial sums
//! `R_k = Σ_{i≤k} c_i β^{i-k}`, which must stay inside
//! `[-Nβ/(1-β), 2Nβ/(1-β)]` for the relation to close. Partial sums that
//! coincide are merged, so an exhausted frontier proves that no relation of
//! any length exists.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algnum::{AlgebraicNumber, Field, Rational};

/// Default maximal relation length tried by [`in_b_n`].
pub const DEFAULT_SEARCH_DEGREE: usize = 12;

/// Bound on distinct partial sums kept during the search.
const STATE_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BnVerdict {
    InBN,
    NotInBN,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    RuleSmallBeta,
    RuleRationalDenominator,
    RelationSearch,
    UserAssertion,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::RuleSmallBeta => "rule_small_beta",
            Provenance::RuleRationalDenominator => "rule_rational_denominator",
            Provenance::RelationSearch => "relation_search",
            Provenance::UserAssertion => "user_assertion",
        }
    }
}

impl fmt::Display for BnVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BnVerdict::InBN => "InBN",
            BnVerdict::NotInBN => "NotInBN",
            BnVerdict::Unknown => "Unknown",
        })
    }
}

/// A relation `Σ_{k=1}^n c_k β^k = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub coeffs: Vec<i64>,
}

impl Relation {
    /// Digits `i_k = max(-c_k, 0)`.
    pub fn i_digits(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| (-c).max(0)).collect()
    }

    /// Digits `j_k = max(c_k, 0)`.
    pub fn j_digits(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| c.max(0)).collect()
    }

    /// `Σ c_k β^k` evaluated exactly.
    pub fn evaluate(&self, field: &Field) -> AlgebraicNumber {
        let mut poly = vec![Rational::from_integer(BigInt::from(0))];
        poly.extend(
            self.coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c))),
        );
        field.eval_poly(&poly)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnStatus {
    pub verdict: BnVerdict,
    pub witness: Option<Relation>,
    pub provenance: Provenance,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error(
        "membership of beta in B_N is unresolved; raise the search degree or assert membership in the problem file"
    )]
    UnresolvedBN,
    #[error("asserted B_N membership ({asserted}) contradicts the proven status {proven}")]
    AssertionContradicted { asserted: bool, proven: BnVerdict },
}

/// Decide whether `β ∈ B_N`, trying relations up to `search_degree` terms.
pub fn in_b_n(field: &Field, search_degree: usize) -> BnStatus {
    let n = i64::from(field.n());
    let beta = field.beta();
    let small = field.from_rational(Rational::new(BigInt::one(), BigInt::from(2 * n + 1)));
    if (&beta - &small).sign() <= 0 {
        return BnStatus {
            verdict: BnVerdict::InBN,
            witness: None,
            provenance: Provenance::RuleSmallBeta,
        };
    }
    if let Some(b) = field.rational_beta() {
        if b.denom() >= &BigInt::from(2 * n + 1) {
            return BnStatus {
                verdict: BnVerdict::InBN,
                witness: None,
                provenance: Provenance::RuleRationalDenominator,
            };
        }
    }
    relation_search(field, search_degree)
}

fn relation_search(field: &Field, search_degree: usize) -> BnStatus {
    let n = i64::from(field.n());
    let beta = field.beta();
    let beta_inv = beta.inv().expect("beta is nonzero");
    let ratio = beta.checked_div(&(&field.one() - &beta)).expect("beta < 1");
    let lo = ratio.scale(&Rational::from_integer(BigInt::from(-n)));
    let hi = ratio.scale(&Rational::from_integer(BigInt::from(2 * n)));
    let in_bounds = |r: &AlgebraicNumber| r >= &lo && r <= &hi;
    let unknown = BnStatus {
        verdict: BnVerdict::Unknown,
        witness: None,
        provenance: Provenance::RelationSearch,
    };

    // state -> (parent state index, digit); index into `states`.
    let mut states: Vec<(AlgebraicNumber, Option<usize>, i64)> = Vec::new();
    let mut seen: HashMap<AlgebraicNumber, usize> = HashMap::new();
    let mut frontier = Vec::new();
    for c in (-2 * n..=n).filter(|&c| c != 0) {
        let r = field.from_int(c);
        if in_bounds(&r) && !seen.contains_key(&r) {
            seen.insert(r.clone(), states.len());
            frontier.push(states.len());
            states.push((r, None, c));
        }
    }
    let mut depth = 1;
    while !frontier.is_empty() {
        if depth >= search_degree || states.len() > STATE_CAP {
            return unknown;
        }
        depth += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            let shifted = &states[s].0 * &beta_inv;
            for c in -2 * n..=n {
                let r = &shifted + &field.from_int(c);
                if r.is_zero() {
                    let mut coeffs = vec![c];
                    let mut cur = Some(s);
                    while let Some(i) = cur {
                        coeffs.push(states[i].2);
                        cur = states[i].1;
                    }
                    coeffs.reverse();
                    let relation = Relation { coeffs };
                    debug_assert!(relation.evaluate(field).is_zero());
                    return BnStatus {
                        verdict: BnVerdict::NotInBN,
                        witness: Some(relation),
                        provenance: Provenance::RelationSearch,
                    };
                }
                if in_bounds(&r) && !seen.contains_key(&r) {
                    seen.insert(r.clone(), states.len());
                    next.push(states.len());
                    states.push((r, Some(s), c));
                }
            }
        }
        frontier = next;
    }
    BnStatus {
        verdict: BnVerdict::InBN,
        witness: None,
        provenance: Provenance::RelationSearch,
    }
}

/// Combine a computed status with an optional user assertion.
///
/// The assertion only fills in an `Unknown` status; disagreeing with a proven
/// status is an error.
pub fn apply_assertion(status: BnStatus, assertion: Option<bool>) -> Result<BnStatus, ThetaError> {
    let Some(asserted) = assertion else {
        return Ok(status);
    };
    match status.verdict {
        BnVerdict::Unknown => Ok(BnStatus {
            verdict: if asserted {
                BnVerdict::InBN
            } else {
                BnVerdict::NotInBN
            },
            witness: None,
            provenance: Provenance::UserAssertion,
        }),
        proven if (proven == BnVerdict::InBN) == asserted => Ok(status),
        proven => Err(ThetaError::AssertionContradicted { asserted, proven }),
    }
}

/// Sign of `(N+1)β + Nβ^{n+1} - 1`: negative iff `β < β_n`.
pub fn beta_n_compare(field: &Field, n: u32) -> i8 {
    let big_n = i64::from(field.n());
    let beta = field.beta();
    let lhs = &beta.scale(&Rational::from_integer(BigInt::from(big_n + 1)))
        + &beta
            .pow(i64::from(n) + 1)
            .expect("positive power")
            .scale(&Rational::from_integer(BigInt::from(big_n)));
    (&lhs - &field.one()).sign()
}

/// `ϑ(β)`: 0 on `B_N`, otherwise the least `n ≥ 1` with `β ≤ β_n`.
pub fn vartheta(field: &Field, bn: &BnStatus) -> Result<u32, ThetaError> {
    match bn.verdict {
        BnVerdict::Unknown => Err(ThetaError::UnresolvedBN),
        BnVerdict::InBN => Ok(0),
        BnVerdict::NotInBN => {
            let mut n = 1;
            while beta_n_compare(field, n) > 0 {
                n += 1;
            }
            Ok(n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{make_beta, BetaSpec};
    use crate::scalar::rat;

    fn quad(c1: i64, c2: i64, n: u32) -> Field {
        let spec = BetaSpec::root(&[-1, c1, c2], rat(0, 1), rat(1, i64::from(n) + 1), n);
        make_beta(&spec).unwrap().0
    }

    #[test]
    fn small_rational_rules() {
        let (f, _) = make_beta(&BetaSpec::rational(1, 5, 1)).unwrap();
        let s = in_b_n(&f, 12);
        assert_eq!(s.verdict, BnVerdict::InBN);
        assert_eq!(s.provenance, Provenance::RuleSmallBeta);
        assert_eq!(vartheta(&f, &s), Ok(0));

        let (f, _) = make_beta(&BetaSpec::rational(2, 7, 2)).unwrap();
        let s = in_b_n(&f, 12);
        assert_eq!(s.verdict, BnVerdict::InBN);
        assert_eq!(s.provenance, Provenance::RuleRationalDenominator);
    }

    #[test]
    fn quadratic_fields_have_witnesses() {
        let f = quad(3, 2, 2);
        let s = in_b_n(&f, 12);
        assert_eq!(s.verdict, BnVerdict::NotInBN);
        let w = s.witness.clone().unwrap();
        assert_eq!(w.coeffs, vec![1, -3, -2]);
        assert!(w.evaluate(&f).is_zero());
        assert_eq!(w.j_digits(), vec![1, 0, 0]);
        assert_eq!(w.i_digits(), vec![0, 3, 2]);
        assert_eq!(vartheta(&f, &s), Ok(1));

        let f = quad(3, 1, 2);
        let s = in_b_n(&f, 12);
        assert_eq!(s.witness.as_ref().unwrap().coeffs, vec![1, -3, -1]);
        assert_eq!(vartheta(&f, &s), Ok(2));
    }

    #[test]
    fn rational_with_small_denominator_is_decided_by_search() {
        // β = 1/4 with N = 2: 1 = 4β gives the relation β - 4β^2 = 0.
        let (f, _) = make_beta(&BetaSpec::rational(1, 4, 2)).unwrap();
        let s = in_b_n(&f, 12);
        assert_eq!(s.verdict, BnVerdict::NotInBN);
        assert!(s.witness.unwrap().evaluate(&f).is_zero());
    }

    #[test]
    fn search_exhausts_for_large_denominators() {
        for (p, q, n) in [(2, 7, 2), (3, 10, 2), (1, 4, 1), (2, 9, 3)] {
            let (f, _) = make_beta(&BetaSpec::rational(p, q, n)).unwrap();
            let s = relation_search(&f, 8);
            assert_ne!(s.verdict, BnVerdict::NotInBN, "{p}/{q}");
        }
    }

    #[test]
    fn beta_n_signs() {
        assert_eq!(beta_n_compare(&quad(3, 2, 2), 1), 0);
        let f = quad(3, 1, 2);
        assert_eq!(beta_n_compare(&f, 1), 1);
        assert_eq!(beta_n_compare(&f, 2), -1);
        let (f, _) = make_beta(&BetaSpec::rational(1, 4, 1)).unwrap();
        assert_eq!(beta_n_compare(&f, 1), -1);
    }

    #[test]
    fn unknown_needs_assertion() {
        let f = quad(3, 2, 2);
        let s = in_b_n(&f, 2);
        assert_eq!(s.verdict, BnVerdict::Unknown);
        assert_eq!(vartheta(&f, &s), Err(ThetaError::UnresolvedBN));
        let asserted = apply_assertion(s, Some(false)).unwrap();
        assert_eq!(asserted.provenance, Provenance::UserAssertion);
        assert_eq!(vartheta(&f, &asserted), Ok(1));
    }

    #[test]
    fn contradicting_assertion_is_rejected() {
        let f = quad(3, 2, 2);
        let s = in_b_n(&f, 12);
        assert!(matches!(
            apply_assertion(s.clone(), Some(true)),
            Err(ThetaError::AssertionContradicted { .. })
        ));
        assert_eq!(apply_assertion(s.clone(), Some(false)).unwrap(), s);
    }
}
