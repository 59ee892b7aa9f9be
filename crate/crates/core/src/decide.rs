//! Deciding whether `Γ_t = ∪_j (Γ + t_j)` is self-similar.
//!
//! `Γ_t` is self-similar iff `t` or its conjugate `t̂` is admissible, and a
//! vector in `T` is admissible iff its overlap graph at level
//! `n₀ = τ_t + ϑ(β)` has no cycle. Vectors outside `T` are never admissible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::algnum::{make_beta, AlgError, AlgebraicNumber, BetaSpec, Field};
use crate::graph::build_graph;
use crate::numeric::{verify_witness, AffineMap, NumericError, NumericIfs, WitnessCheck};
use crate::theta::{
    apply_assertion, in_b_n, vartheta, BnStatus, BnVerdict, ThetaError, DEFAULT_SEARCH_DEGREE,
};
use crate::words::{
    analyze_level, build_translation, conjugate_values, image_slots, level_size, shift_keys,
    t_membership, value_of_word, DigitWord, LevelAnalysis, LevelTable, TranslationVector,
    WordSet, WordsError, DEFAULT_ENUM_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    pub search_degree: usize,
    pub enum_cap: usize,
    pub assert_in_bn: Option<bool>,
    /// Also evaluate the closed form for `m = 1` and record the agreement.
    pub cross_check_closed_form: bool,
    pub prune_witness: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            search_degree: DEFAULT_SEARCH_DEGREE,
            enum_cap: DEFAULT_ENUM_CAP,
            assert_in_bn: None,
            cross_check_closed_form: cfg!(debug_assertions),
            prune_witness: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("the closed form needs beta in B_N")]
    RequiresBN,
    #[error("digit {digit} is outside 0..={n}")]
    InvalidDigit { digit: u8, n: u32 },
    #[error("the overlap graph has a cycle")]
    HasCycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    SelfSimilar,
    NotSelfSimilar,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SelfSimilar => "SelfSimilar",
            Verdict::NotSelfSimilar => "NotSelfSimilar",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Direct,
    Conjugate,
    BothFailedT,
    NeitherAdmissible,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Direct => "direct",
            Branch::Conjugate => "conjugate",
            Branch::BothFailedT => "both_failed_T",
            Branch::NeitherAdmissible => "neither_admissible",
        }
    }
}

/// A translation given by its value or by a digit word `w` meaning
/// `β^{-|w|} φ_w(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslationSpec {
    Value(String),
    Digits(Vec<u8>),
}

pub fn resolve_translation(
    field: &Field,
    spec: &TranslationSpec,
) -> Result<AlgebraicNumber, DecideError> {
    match spec {
        TranslationSpec::Value(s) => Ok(field.parse_value(s)?),
        TranslationSpec::Digits(d) => {
            if let Some(&digit) = d.iter().find(|&&x| u32::from(x) > field.n()) {
                return Err(DecideError::InvalidDigit { digit, n: field.n() });
            }
            let w = DigitWord(d.clone());
            Ok(&value_of_word(field, &w) * &field.beta().pow(-(d.len() as i64))?)
        }
    }
}

/// Overlap-graph data for one branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphReport {
    pub tau: usize,
    pub vartheta: u32,
    pub n0: usize,
    /// Digit words of `t_0, …, t_m` at level `τ`.
    pub words: Vec<DigitWord>,
    pub w_size: usize,
    pub vertices: Vec<DigitWord>,
    pub edge_count: usize,
    pub cycle: Option<Vec<DigitWord>>,
    pub longest_path: Option<usize>,
    /// `n₀ + L + 1`, or `n₀` when there are no vertices.
    pub witness_level: Option<usize>,
    /// `n₀ + (N+1)^{n₀} + 1`, saturating.
    pub coarse_level: u64,
}

impl GraphReport {
    pub fn admissible(&self) -> bool {
        self.cycle.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchAnalysis {
    /// `t_entry ∉ T`; levels above `n_max` cannot contain it.
    NotInT {
        entry: usize,
        value: AlgebraicNumber,
        n_max: usize,
    },
    /// In `T`, but the graph was not built because `β`'s class is unresolved.
    Unresolved { tau: usize },
    Graph(GraphReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Direct,
    Conjugate,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Direct => "direct",
            Side::Conjugate => "conjugate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchReport {
    pub side: Side,
    /// `t_0, …, t_m` of this branch.
    pub values: Vec<AlgebraicNumber>,
    pub analysis: BranchAnalysis,
}

impl BranchReport {
    pub fn graph(&self) -> Option<&GraphReport> {
        match &self.analysis {
            BranchAnalysis::Graph(g) => Some(g),
            _ => None,
        }
    }
}

/// One map `x ↦ ratio·x + offset` of a generating system for `Γ_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMap {
    /// The word `i` of `φ_i`.
    pub word: DigitWord,
    /// Index `j` of the translation added.
    pub j: usize,
    /// Whether the map is `φ_i(1 - x) + t_j` rather than `φ_i(x) + t_j`.
    pub reflected: bool,
    pub ratio: AlgebraicNumber,
    pub offset: AlgebraicNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub side: Side,
    pub level: usize,
    pub i1: Vec<DigitWord>,
    pub i2: Vec<DigitWord>,
    pub coverage_verified: bool,
    /// Maps generating `Γ_t` for the input vector (conjugated back when the
    /// conjugate branch was used).
    pub maps: Vec<WitnessMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport {
    pub n: u32,
    pub field: Field,
    pub verdict: Verdict,
    pub branch: Option<Branch>,
    pub bn_status: BnStatus,
    pub vartheta: Option<u32>,
    pub direct: BranchReport,
    /// Absent when the direct branch was admissible.
    pub conjugate: Option<BranchReport>,
    pub witness: Option<Witness>,
    /// Why no witness was produced for a self-similar verdict.
    pub witness_note: Option<String>,
    /// Closed-form verdict for `m = 1`, `β ∈ B_N`, when cross-checking.
    pub closed_form: Option<Verdict>,
}

impl DecisionReport {
    pub fn branch_report(&self, side: Side) -> Option<&BranchReport> {
        match side {
            Side::Direct => Some(&self.direct),
            Side::Conjugate => self.conjugate.as_ref(),
        }
    }

    pub fn admissible_graph(&self) -> Option<&GraphReport> {
        match self.branch {
            Some(Branch::Direct) => self.direct.graph(),
            Some(Branch::Conjugate) => self.conjugate.as_ref().and_then(|b| b.graph()),
            _ => None,
        }
    }
}

/// Full pipeline from a `β` specification and translations `t_1, …, t_m`.
pub fn decide(
    spec: &BetaSpec,
    translations: &[TranslationSpec],
    config: &DecideConfig,
) -> Result<DecisionReport, DecideError> {
    let (field, _) = make_beta(spec)?;
    let values = translations
        .iter()
        .map(|t| resolve_translation(&field, t))
        .collect::<Result<Vec<_>, _>>()?;
    decide_values(&field, &values, config)
}

enum Membership {
    In(TranslationVector),
    Out { entry: usize, value: AlgebraicNumber, n_max: usize },
}

fn membership(field: &Field, values: &[AlgebraicNumber]) -> Result<Membership, DecideError> {
    match build_translation(field, values) {
        Ok(t) => Ok(Membership::In(t)),
        Err(WordsError::NotInT(entry)) => {
            let n_max = t_membership(field, &values[entry]).n_max;
            Ok(Membership::Out {
                entry,
                value: values[entry].clone(),
                n_max,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Decide for `t = (0, t_1, …, t_m)` with `translations = [t_1, …, t_m]`.
pub fn decide_values(
    field: &Field,
    translations: &[AlgebraicNumber],
    config: &DecideConfig,
) -> Result<DecisionReport, DecideError> {
    let mut values = vec![field.zero()];
    values.extend_from_slice(translations);
    let hat_values = conjugate_values(&values);
    let direct = membership(field, &values)?;
    let conj = membership(field, &hat_values)?;

    let bn_status = apply_assertion(in_b_n(field, config.search_degree), config.assert_in_bn)?;
    let closed_form = (config.cross_check_closed_form
        && translations.len() == 1
        && bn_status.verdict == BnVerdict::InBN)
        .then(|| closed_form_m1(field, &bn_status, &translations[0]))
        .transpose()?;

    let mut report = DecisionReport {
        n: field.n(),
        field: field.clone(),
        verdict: Verdict::Unknown,
        branch: None,
        bn_status: bn_status.clone(),
        vartheta: None,
        direct: BranchReport {
            side: Side::Direct,
            values: values.clone(),
            analysis: not_in_t_or_unresolved(&direct),
        },
        conjugate: Some(BranchReport {
            side: Side::Conjugate,
            values: hat_values.clone(),
            analysis: not_in_t_or_unresolved(&conj),
        }),
        witness: None,
        witness_note: None,
        closed_form,
    };

    if matches!(direct, Membership::Out { .. }) && matches!(conj, Membership::Out { .. }) {
        report.verdict = Verdict::NotSelfSimilar;
        report.branch = Some(Branch::BothFailedT);
        return Ok(report);
    }
    let theta = match vartheta(field, &bn_status) {
        Ok(v) => v,
        Err(ThetaError::UnresolvedBN) => return Ok(report),
        Err(e) => return Err(e.into()),
    };
    report.vartheta = Some(theta);

    for (side, member) in [(Side::Direct, &direct), (Side::Conjugate, &conj)] {
        let Membership::In(tv) = member else { continue };
        let g = graph_report(field, tv, theta, config.enum_cap)?;
        let admissible = g.admissible();
        let slot = match side {
            Side::Direct => &mut report.direct,
            Side::Conjugate => report.conjugate.as_mut().unwrap(),
        };
        slot.analysis = BranchAnalysis::Graph(g.clone());
        if admissible {
            report.verdict = Verdict::SelfSimilar;
            report.branch = Some(match side {
                Side::Direct => Branch::Direct,
                Side::Conjugate => Branch::Conjugate,
            });
            if side == Side::Direct {
                report.conjugate = None;
            }
            match extract_witness(field, tv, &g, side, config) {
                Ok(mut w) => {
                    if side == Side::Conjugate {
                        w.maps = conjugate_maps(field, &w.maps, values.last().unwrap());
                    }
                    report.witness = Some(w);
                }
                Err(DecideError::Words(e @ WordsError::CapExceeded { .. })) => {
                    report.witness_note = Some(e.to_string());
                }
                Err(e) => return Err(e),
            }
            break;
        }
    }
    if report.verdict == Verdict::Unknown {
        report.verdict = Verdict::NotSelfSimilar;
        report.branch = Some(Branch::NeitherAdmissible);
    }
    if let Some(cf) = report.closed_form {
        debug_assert_eq!(cf, report.verdict, "closed form disagrees with the graph test");
    }
    Ok(report)
}

fn not_in_t_or_unresolved(m: &Membership) -> BranchAnalysis {
    match m {
        Membership::In(t) => BranchAnalysis::Unresolved { tau: t.tau() },
        Membership::Out {
            entry,
            value,
            n_max,
        } => BranchAnalysis::NotInT {
            entry: *entry,
            value: value.clone(),
            n_max: *n_max,
        },
    }
}

/// Word sets of `t` at level `n`.
pub fn level_analysis(
    field: &Field,
    t: &TranslationVector,
    n: usize,
    cap: usize,
) -> Result<LevelAnalysis, DecideError> {
    let table = LevelTable::build(field, n, cap)?;
    Ok(analyze_level(&table, t))
}

/// Build the overlap graph of `t` at `n₀ = τ + ϑ` and analyse it.
pub fn graph_report(
    field: &Field,
    t: &TranslationVector,
    theta: u32,
    cap: usize,
) -> Result<GraphReport, DecideError> {
    let n0 = t.tau() + theta as usize;
    let la = level_analysis(field, t, n0, cap)?;
    let v = la.w.complement();
    let g = build_graph(&v);
    let cycle = g
        .has_cycle()
        .map(|c| c.into_iter().map(|i| g.word(i)).collect::<Vec<_>>());
    let longest_path = match cycle {
        Some(_) => None,
        None => Some(g.longest_path_length().map_err(|_| DecideError::HasCycle)?),
    };
    let witness_level = longest_path.map(|l| if g.vertex_count() == 0 { n0 } else { n0 + l + 1 });
    let base = u64::from(field.n()) + 1;
    let coarse_level = base
        .checked_pow(n0 as u32)
        .and_then(|p| p.checked_add(n0 as u64 + 1))
        .unwrap_or(u64::MAX);
    Ok(GraphReport {
        tau: t.tau(),
        vartheta: theta,
        n0,
        words: t.words().to_vec(),
        w_size: la.w.len(),
        vertices: g.vertex_words(),
        edge_count: g.edge_count(),
        cycle,
        longest_path,
        witness_level,
        coarse_level,
    })
}

/// `m = 1`, `β ∈ B_N`: self-similar iff `t = i(1-β)/N · β^{-k}` with
/// `1 ≤ i ≤ ⌊(N+1)/2⌋` and `k ≥ 1`.
pub fn closed_form_m1(
    field: &Field,
    bn: &BnStatus,
    t: &AlgebraicNumber,
) -> Result<Verdict, DecideError> {
    if bn.verdict != BnVerdict::InBN {
        return Err(DecideError::RequiresBN);
    }
    let c = field.digit_unit();
    let beta = field.beta();
    let beta_inv = beta.inv()?;
    let limit = BigInt::from((field.n() + 1) / 2);
    let mut unit = &c * &beta_inv;
    let mut scaled = t.checked_div(&c)?;
    while unit <= *t {
        scaled = &scaled * &beta;
        if let Some(i) = scaled.to_integer() {
            if i.is_positive() && i <= limit {
                return Ok(Verdict::SelfSimilar);
            }
        }
        unit = &unit * &beta_inv;
    }
    Ok(Verdict::NotSelfSimilar)
}

struct Candidate {
    level: usize,
    index: usize,
    reflected: bool,
    /// Covered slots at `level`.
    slots: Vec<usize>,
}

/// Witness for an admissible branch: index sets `I₁ ⊆ ∪ Ω_t^n`,
/// `I₂ ⊆ ∪ Ω̂_t^n` over `n₀ ≤ n ≤ ℓ` whose cylinders tile `Ω^ℓ`, and the maps
/// generating `Γ_t` for this branch's vector.
pub fn extract_witness(
    field: &Field,
    t: &TranslationVector,
    g: &GraphReport,
    side: Side,
    config: &DecideConfig,
) -> Result<Witness, DecideError> {
    let level = g.witness_level.ok_or(DecideError::HasCycle)?;
    let base = field.n() + 1;
    let size = level_size(base, level)
        .filter(|&s| s <= config.enum_cap)
        .ok_or(WordsError::CapExceeded {
            n: level,
            size: u128::from(base).checked_pow(level as u32).unwrap_or(u128::MAX),
            cap: config.enum_cap,
        })?;
    let mut candidates = Vec::new();
    for n in g.n0..=level {
        let table = LevelTable::build(field, n, config.enum_cap)?;
        let shifts = shift_keys(&table, t);
        for index in 0..table.size() {
            for (sign, reflected) in [(1, false), (-1, true)] {
                if let Some(slots) = image_slots(&table, &shifts, index, sign) {
                    candidates.push(Candidate {
                        level: n,
                        index,
                        reflected,
                        slots,
                    });
                }
            }
        }
    }
    let mut counts = vec![0u32; size];
    let block = |c: &Candidate| level_size(base, level - c.level).unwrap();
    for c in &candidates {
        let b = block(c);
        for &s in &c.slots {
            counts[s * b..(s + 1) * b].iter_mut().for_each(|x| *x += 1);
        }
    }
    let coverage_verified = counts.iter().all(|&x| x > 0);
    let mut keep = vec![true; candidates.len()];
    if config.prune_witness && coverage_verified {
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_by(|&a, &b| {
            let (ca, cb) = (&candidates[a], &candidates[b]);
            cb.level
                .cmp(&ca.level)
                .then(cb.index.cmp(&ca.index))
                .then(cb.reflected.cmp(&ca.reflected))
        });
        for k in order {
            let c = &candidates[k];
            let b = block(c);
            let removable = c
                .slots
                .iter()
                .all(|&s| counts[s * b..(s + 1) * b].iter().all(|&x| x >= 2));
            if removable {
                keep[k] = false;
                for &s in &c.slots {
                    counts[s * b..(s + 1) * b].iter_mut().for_each(|x| *x -= 1);
                }
            }
        }
    }
    let mut i1 = Vec::new();
    let mut i2 = Vec::new();
    let mut maps = Vec::new();
    let beta = field.beta();
    for (c, _) in candidates.iter().zip(&keep).filter(|(_, &k)| k) {
        let word = DigitWord::from_index(c.index, c.level, base);
        let ratio = beta.pow(c.level as i64)?;
        let origin = value_of_word(field, &word);
        for (j, tj) in t.values().iter().enumerate() {
            let (ratio, offset) = if c.reflected {
                (-&ratio, &(&origin + &ratio) + tj)
            } else {
                (ratio.clone(), &origin + tj)
            };
            maps.push(WitnessMap {
                word: word.clone(),
                j,
                reflected: c.reflected,
                ratio,
                offset,
            });
        }
        if c.reflected {
            i2.push(word);
        } else {
            i1.push(word);
        }
    }
    Ok(Witness {
        side,
        level,
        i1,
        i2,
        coverage_verified,
        maps,
    })
}

/// Conjugate maps of `Γ_t̂` into maps of `Γ_t = (1 + t_m) - Γ_t̂`.
fn conjugate_maps(field: &Field, maps: &[WitnessMap], t_m: &AlgebraicNumber) -> Vec<WitnessMap> {
    let pivot = t_m + &field.one();
    maps.iter()
        .map(|m| WitnessMap {
            offset: &(&pivot * &(&field.one() - &m.ratio)) - &m.offset,
            ..m.clone()
        })
        .collect()
}

/// Re-check a witness at its level: the chosen words' images cover `Ω^ℓ`.
pub fn witness_covers(
    field: &Field,
    t: &TranslationVector,
    witness: &Witness,
    cap: usize,
) -> Result<bool, DecideError> {
    let base = field.n() + 1;
    let mut cover = WordSet::empty(witness.level, base);
    for n in t.tau().min(witness.level)..=witness.level {
        let chosen: Vec<(&DigitWord, i128)> = witness
            .i1
            .iter()
            .map(|w| (w, 1))
            .chain(witness.i2.iter().map(|w| (w, -1)))
            .filter(|(w, _)| w.len() == n)
            .collect();
        if chosen.is_empty() {
            continue;
        }
        let table = LevelTable::build(field, n, cap)?;
        let shifts = shift_keys(&table, t);
        let mut at_n = WordSet::empty(n, base);
        for (w, sign) in chosen {
            match image_slots(&table, &shifts, w.index(base), sign) {
                Some(slots) => slots.into_iter().for_each(|s| at_n.insert(s)),
                None => return Ok(false),
            }
        }
        at_n.mark_extensions(witness.level - n, &mut cover);
    }
    Ok(cover.is_full())
}

/// The witness maps as a double-precision IFS.
pub fn witness_ifs(witness: &Witness) -> Result<NumericIfs<f64>, NumericError> {
    NumericIfs::new(
        witness
            .maps
            .iter()
            .map(|m| AffineMap::new(m.ratio.to_f64(), m.offset.to_f64()))
            .collect(),
    )
}

/// Numerically compare a report's witness attractor with `Γ_t`.
///
/// Returns `None` when the report carries no witness.
pub fn verify_report_witness(
    report: &DecisionReport,
    depth: usize,
    tol: Option<f64>,
) -> Result<Option<WitnessCheck<f64>>, NumericError> {
    let Some(w) = &report.witness else {
        return Ok(None);
    };
    check_maps(report, &witness_ifs(w)?, depth, tol).map(Some)
}

/// Compare the attractor of `ifs` with the report's `Γ_t`.
pub fn check_maps(
    report: &DecisionReport,
    ifs: &NumericIfs<f64>,
    depth: usize,
    tol: Option<f64>,
) -> Result<WitnessCheck<f64>, NumericError> {
    let t: Vec<f64> = report.direct.values.iter().map(|v| v.to_f64()).collect();
    let ub = report.field.upper_bound().to_f64().unwrap_or(f64::NAN);
    verify_witness(ifs, report.n, report.field.beta().to_f64(), &t, depth, ub, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn words(v: &[DigitWord]) -> Vec<String> {
        v.iter().map(|w| w.to_string()).collect()
    }

    fn quad(c1: i64, c2: i64, n: u32) -> BetaSpec {
        BetaSpec::root(&[-1, c1, c2], rat(0, 1), rat(1, i64::from(n) + 1), n)
    }

    fn run(spec: &BetaSpec, ts: &[&str]) -> DecisionReport {
        let ts: Vec<_> = ts.iter().map(|s| TranslationSpec::Value(s.to_string())).collect();
        decide(spec, &ts, &DecideConfig::default()).unwrap()
    }

    #[test]
    fn unit_quadratic_fields() {
        for n in 1..=3u32 {
            let spec = quad(i64::from(n) + 1, i64::from(n), n);
            let r = run(&spec, &["b^-2-1"]);
            assert_eq!(r.verdict, Verdict::SelfSimilar);
            assert_eq!(r.branch, Some(Branch::Direct));
            let g = r.direct.graph().unwrap();
            assert_eq!((g.tau, g.vartheta, g.n0), (2, 1, 3));
            assert_eq!(g.edge_count, 0);
            let nn = n as u8;
            let mut expect: Vec<DigitWord> = (1..=nn).map(|i| DigitWord(vec![0, 0, i])).collect();
            expect.extend((0..nn).map(|i| DigitWord(vec![nn, nn, i])));
            expect.sort();
            assert_eq!(g.vertices, expect);
            let w = r.witness.unwrap();
            assert_eq!(w.level, 4);
            assert!(w.coverage_verified);
        }
    }

    #[test]
    fn cycle_field() {
        let spec = quad(3, 1, 2);
        let r = run(&spec, &["b^-1-1"]);
        assert_eq!(r.verdict, Verdict::NotSelfSimilar);
        assert_eq!(r.branch, Some(Branch::NeitherAdmissible));
        assert_eq!(r.vartheta, Some(2));
        for b in [&r.direct, r.conjugate.as_ref().unwrap()] {
            let cycle = b.graph().unwrap().cycle.clone().unwrap();
            assert_eq!(words(&cycle), vec!["111"]);
        }

        let r = run(&spec, &["b^-2-b^-1"]);
        assert_eq!(r.verdict, Verdict::SelfSimilar);
        let g = r.admissible_graph().unwrap();
        assert_eq!((g.tau, g.n0), (2, 4));
        let mut expect = vec!["2212", "0010"];
        expect.extend(["0212", "1212", "2212", "0010", "1010", "2010"]);
        expect.sort();
        expect.dedup();
        assert_eq!(words(&g.vertices), expect);
    }

    #[test]
    fn outside_t_on_both_sides() {
        let r = run(&BetaSpec::rational(1, 4, 1), &["1/2"]);
        assert_eq!(r.verdict, Verdict::NotSelfSimilar);
        assert_eq!(r.branch, Some(Branch::BothFailedT));
        assert!(matches!(r.direct.analysis, BranchAnalysis::NotInT { entry: 1, n_max: 0, .. }));
    }

    #[test]
    fn unknown_when_bn_unresolved() {
        let ts = [TranslationSpec::Value("b^-2-1".into())];
        let config = DecideConfig {
            search_degree: 2,
            ..DecideConfig::default()
        };
        let r = decide(&quad(3, 2, 2), &ts, &config).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(matches!(r.direct.analysis, BranchAnalysis::Unresolved { tau: 2 }));
        let config = DecideConfig {
            assert_in_bn: Some(false),
            ..config
        };
        assert_eq!(decide(&quad(3, 2, 2), &ts, &config).unwrap().verdict, Verdict::SelfSimilar);
    }

    #[test]
    fn quarter_sweep_matches_closed_form() {
        let spec = BetaSpec::rational(1, 4, 1);
        for (t, expect) in [(3, true), (12, true), (48, true), (15, false), (51, false), (60, false), (63, false)] {
            let r = run(&spec, &[&t.to_string()]);
            let want = if expect { Verdict::SelfSimilar } else { Verdict::NotSelfSimilar };
            assert_eq!(r.verdict, want, "t = {t}");
            assert_eq!(r.closed_form, Some(want));
        }
    }

    #[test]
    fn closed_form_eighth() {
        let (field, _) = make_beta(&BetaSpec::rational(1, 8, 3)).unwrap();
        let bn = in_b_n(&field, 12);
        let cf = |s: &str| closed_form_m1(&field, &bn, &field.parse_value(s).unwrap()).unwrap();
        assert_eq!(cf("7/3"), Verdict::SelfSimilar);
        assert_eq!(cf("14/3"), Verdict::SelfSimilar);
        assert_eq!(cf("7"), Verdict::NotSelfSimilar);
        let not_bn = BnStatus {
            verdict: BnVerdict::NotInBN,
            ..bn
        };
        assert_eq!(closed_form_m1(&field, &not_bn, &field.one()), Err(DecideError::RequiresBN));
    }

    #[test]
    fn witness_for_three() {
        let spec = BetaSpec::rational(1, 4, 1);
        let pruned = run(&spec, &["3"]).witness.unwrap();
        assert_eq!(words(&pruned.i1), vec!["0"]);
        assert!(pruned.i2.is_empty());
        assert_eq!(pruned.maps.len(), 2);

        let config = DecideConfig {
            prune_witness: false,
            ..DecideConfig::default()
        };
        let r = decide(&spec, &[TranslationSpec::Value("3".into())], &config).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.level, 1);
        assert_eq!(words(&w.i1), vec!["0"]);
        assert_eq!(words(&w.i2), vec!["1"]);
        let maps: Vec<(String, String)> = w
            .maps
            .iter()
            .map(|m| (m.ratio.to_string(), m.offset.to_string()))
            .collect();
        assert_eq!(
            maps,
            vec![
                ("1/4".into(), "0".into()),
                ("1/4".into(), "3".into()),
                ("-1/4".into(), "1".into()),
                ("-1/4".into(), "4".into()),
            ]
        );
    }

    #[test]
    fn conjugate_branch_when_direct_leaves_t() {
        // 36 is not in T, but the conjugate (0, 15, 51) is admissible.
        let spec = BetaSpec::rational(1, 4, 1);
        let r = run(&spec, &["36", "51"]);
        assert_eq!(r.verdict, Verdict::SelfSimilar);
        assert_eq!(r.branch, Some(Branch::Conjugate));
        assert!(matches!(r.direct.analysis, BranchAnalysis::NotInT { entry: 1, .. }));
        let w = r.witness.unwrap();
        assert_eq!(w.side, Side::Conjugate);
        let (field, _) = make_beta(&spec).unwrap();
        let conj = r.conjugate.unwrap();
        assert_eq!(conj.values[1], field.from_int(15));
        let t = build_translation(&field, &conj.values).unwrap();
        assert!(witness_covers(&field, &t, &w, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn digits_translation() {
        let (field, _) = make_beta(&quad(3, 2, 2)).unwrap();
        let v = resolve_translation(&field, &TranslationSpec::Digits(vec![2, 2])).unwrap();
        assert_eq!(v, field.parse_value("b^-2-1").unwrap());
        assert_eq!(
            resolve_translation(&field, &TranslationSpec::Digits(vec![3])),
            Err(DecideError::InvalidDigit { digit: 3, n: 2 })
        );
    }
}
