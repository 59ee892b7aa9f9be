//! Digit words over `Ω = {0,…,N}`, the level sets `E_n`, membership in
//! `T = ∪ β^{-n} E_n`, translation vectors and the word sets `Ω_t^n`,
//! `Ω̂_t^n`, `A_t^n`, `Â_t^n`, `W_t^n`.
//!
//! Words are most-significant-digit first: `i_1 i_2 … i_n` has slot
//! `Σ i_k (N+1)^{n-k}` and value `φ_{i_1}∘…∘φ_{i_n}(0)`.

use std::fmt;
use std::sync::OnceLock;

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::algnum::{AlgebraicNumber, Field, Rational, MAX_DEGREE};

/// Default bound on `(N+1)^n` for materialized levels.
pub const DEFAULT_ENUM_CAP: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("translation t_{0} is not in T")]
    NotInT(usize),
    #[error("translations must be strictly increasing")]
    NotSorted,
    #[error("the first translation must be 0")]
    NotAnchored,
    #[error("a translation vector needs at least one nonzero entry")]
    TooShort,
    #[error("level {n} has {size} words, above the enumeration cap {cap}")]
    CapExceeded { n: usize, size: u128, cap: usize },
    #[error("exact keys at level {0} do not fit in 128 bits")]
    KeyOverflow(usize),
}

/// A word `i_1 … i_n` over `{0,…,N}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord(pub Vec<u8>);

impl DigitWord {
    pub fn zeros(n: usize) -> Self {
        DigitWord(vec![0; n])
    }

    /// Decode slot `index` of `Ω^n` with `base = N+1`.
    pub fn from_index(mut index: usize, n: usize, base: u32) -> Self {
        let b = base as usize;
        let mut digits = vec![0u8; n];
        for d in digits.iter_mut().rev() {
            *d = (index % b) as u8;
            index /= b;
        }
        DigitWord(digits)
    }

    pub fn index(&self, base: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &d| acc * base as usize + d as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    /// `0^k w`.
    pub fn pad_left(&self, k: usize) -> Self {
        let mut digits = vec![0; k];
        digits.extend_from_slice(&self.0);
        DigitWord(digits)
    }

    /// Render digits back to back, or comma separated when `N ≥ 10`.
    pub fn render(&self, n: u32) -> String {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        if n >= 10 {
            parts.join(",")
        } else {
            parts.concat()
        }
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().any(|&d| d >= 10);
        f.write_str(&self.render(if wide { 10 } else { 0 }))
    }
}

/// `base^n`, or `None` when it overflows `usize`.
pub fn level_size(base: u32, n: usize) -> Option<usize> {
    (base as usize).checked_pow(u32::try_from(n).ok()?)
}

fn checked_level_size(base: u32, n: usize, cap: usize) -> Result<usize, WordsError> {
    match level_size(base, n) {
        Some(s) if s <= cap => Ok(s),
        _ => Err(WordsError::CapExceeded {
            n,
            size: (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// A subset of `Ω^n` stored as a bitset over slots.
#[derive(Clone, PartialEq, Eq)]
pub struct WordSet {
    level: usize,
    base: u32,
    bits: BitVec,
}

impl WordSet {
    pub fn empty(level: usize, base: u32) -> Self {
        let size = level_size(base, level).expect("level size fits in usize");
        WordSet {
            level,
            base,
            bits: bitvec![0; size],
        }
    }

    pub fn full(level: usize, base: u32) -> Self {
        let mut s = Self::empty(level, base);
        s.bits.fill(true);
        s
    }

    pub fn from_indices(level: usize, base: u32, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(level, base);
        for i in indices {
            s.bits.set(i, true);
        }
        s
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Number of slots, `(N+1)^n`.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, index: usize) {
        self.bits.set(index, true);
    }

    pub fn insert_word(&mut self, w: &DigitWord) {
        debug_assert_eq!(w.len(), self.level);
        self.insert(w.index(self.base));
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn contains_word(&self, w: &DigitWord) -> bool {
        w.len() == self.level && self.contains(w.index(self.base))
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn is_full(&self) -> bool {
        self.bits.all()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn words(&self) -> impl Iterator<Item = DigitWord> + '_ {
        self.iter()
            .map(move |i| DigitWord::from_index(i, self.level, self.base))
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.level == other.level && self.base == other.base,
            "word sets of different shape"
        );
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        let mut out = self.clone();
        out.bits |= &other.bits;
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_same_shape(other);
        self.bits |= &other.bits;
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        let mut out = self.clone();
        out.bits &= &other.bits;
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.bits = !out.bits;
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same_shape(other);
        self.iter().all(|i| other.contains(i))
    }

    /// `Ω × W`.
    pub fn prepend_all(&self) -> Self {
        let block = self.capacity();
        let mut out = Self::empty(self.level + 1, self.base);
        for d in 0..self.base as usize {
            for i in self.iter() {
                out.bits.set(d * block + i, true);
            }
        }
        out
    }

    /// `W × Ω^k`.
    pub fn extend(&self, k: usize) -> Self {
        let mut out = Self::empty(self.level + k, self.base);
        self.mark_extensions(k, &mut out);
        out
    }

    /// Set every slot of `W × Ω^k` in `target`, a set at level `n + k`.
    pub fn mark_extensions(&self, k: usize, target: &mut WordSet) {
        assert_eq!(target.level, self.level + k);
        let block = level_size(self.base, k).expect("level size fits in usize");
        for i in self.iter() {
            target.bits[i * block..(i + 1) * block].fill(true);
        }
    }
}

impl fmt::Debug for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words().map(|w| w.to_string()).collect();
        write!(f, "WordSet(n={}, {{{}}})", self.level, words.join(", "))
    }
}

/// `φ_w(0) = (1-β)/N · Σ w_k β^{k-1}`.
pub fn value_of_word(field: &Field, w: &DigitWord) -> AlgebraicNumber {
    let coeffs: Vec<Rational> = w
        .0
        .iter()
        .map(|&d| Rational::from_integer(BigInt::from(d)))
        .collect();
    &field.digit_unit() * &field.eval_poly(&coeffs)
}

/// Result of a `T`-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    /// Minimal level and a representing word, when `v ∈ T`.
    pub found: Option<(usize, DigitWord)>,
    /// Largest level that could contain `v`; levels above it were excluded.
    pub n_max: usize,
}

/// Find the least `n` with `v ∈ T_n`, or prove `v ∉ T`.
///
/// A value in `T_n \ T_{n-1}` is at least `(1-β)/N · β^{-n}`, so only
/// `n ≤ n_max` can contribute and each level is searched exhaustively.
pub fn t_membership(field: &Field, v: &AlgebraicNumber) -> Membership {
    if v.sign() <= 0 {
        return Membership {
            found: v.is_zero().then(|| (0, DigitWord::zeros(0))),
            n_max: 0,
        };
    }
    let c = field.digit_unit();
    let beta = field.beta();
    let beta_inv = beta.inv().expect("beta is nonzero");
    let mut n_max = 0;
    let mut threshold = &c * &beta_inv;
    while threshold <= *v {
        n_max += 1;
        threshold = &threshold * &beta_inv;
    }
    let v_over_c = v.checked_div(&c).expect("c is nonzero");
    let big_n = field.from_int(i64::from(field.n()));
    for n in 1..=n_max {
        // tails[k] = N Σ_{j<k} β^j, the largest residual with k digits left.
        let mut tails = vec![field.zero()];
        let mut p = field.one();
        for _ in 0..n {
            let next = tails.last().unwrap() + &(&big_n * &p);
            tails.push(next);
            p = &p * &beta;
        }
        let rho0 = &v_over_c * &beta.pow(n as i64).expect("power");
        let mut digits = Vec::with_capacity(n);
        if digit_dfs(field, &beta_inv, &tails, rho0, n, &mut digits) {
            return Membership {
                found: Some((n, DigitWord(digits))),
                n_max,
            };
        }
    }
    Membership { found: None, n_max }
}

fn digit_dfs(
    field: &Field,
    beta_inv: &AlgebraicNumber,
    tails: &[AlgebraicNumber],
    rho: AlgebraicNumber,
    left: usize,
    digits: &mut Vec<u8>,
) -> bool {
    if left == 0 {
        return rho.is_zero();
    }
    if rho.sign() < 0 || rho > tails[left] {
        return false;
    }
    for d in 0..=field.n() {
        let next = &(&rho - &field.from_int(i64::from(d))) * beta_inv;
        if next.sign() < 0 {
            break;
        }
        digits.push(d as u8);
        if digit_dfs(field, beta_inv, tails, next, left - 1, digits) {
            return true;
        }
        digits.pop();
    }
    false
}

/// `t = (t_0 = 0, t_1, …, t_m)` with digit words at level `τ_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationVector {
    values: Vec<AlgebraicNumber>,
    words: Vec<DigitWord>,
    tau: usize,
}

impl TranslationVector {
    pub fn values(&self) -> &[AlgebraicNumber] {
        &self.values
    }

    /// Words `w_j` of length `τ` with `t_j = β^{-τ} φ_{w_j}(0)`.
    pub fn words(&self) -> &[DigitWord] {
        &self.words
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn last(&self) -> &AlgebraicNumber {
        self.values.last().expect("nonempty vector")
    }
}

/// Validate `values = (0, t_1, …, t_m)` and compute `τ_t` and digit words.
pub fn build_translation(
    field: &Field,
    values: &[AlgebraicNumber],
) -> Result<TranslationVector, WordsError> {
    if values.len() < 2 {
        return Err(WordsError::TooShort);
    }
    if !values[0].is_zero() {
        return Err(WordsError::NotAnchored);
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WordsError::NotSorted);
    }
    let mut found = Vec::with_capacity(values.len() - 1);
    for (j, v) in values.iter().enumerate().skip(1) {
        match t_membership(field, v).found {
            Some(hit) => found.push(hit),
            None => return Err(WordsError::NotInT(j)),
        }
    }
    let tau = found.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let mut words = vec![DigitWord::zeros(tau)];
    words.extend(found.into_iter().map(|(n, w)| w.pad_left(tau - n)));
    Ok(TranslationVector {
        values: values.to_vec(),
        words,
        tau,
    })
}

/// `t̂_j = t_m - t_{m-j}`.
pub fn conjugate_values(values: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    let last = values.last().expect("nonempty vector");
    values.iter().rev().map(|v| last - v).collect()
}

pub fn conjugate(
    field: &Field,
    t: &TranslationVector,
) -> Result<TranslationVector, WordsError> {
    build_translation(field, &conjugate_values(&t.values))
}

/// `E_n` with exact integer keys.
///
/// The key of `x` is `S_n · (x/c)` written in the power basis of `Q(β)`,
/// where `c = (1-β)/N` and `S_n` clears every denominator of `β^0 … β^{n-1}`.
/// Keys are linear, so the key of `φ_i(0) + y` is `key(i) + key(y)`.
pub struct LevelTable {
    field: Field,
    n: usize,
    base: u32,
    dim: usize,
    scale: BigInt,
    /// `rows[k*dim..]` is the key of the digit 1 at position `k`.
    rows: Vec<i128>,
    keys: Vec<i128>,
    /// Slots sorted by key, built on first use.
    order: OnceLock<Vec<u32>>,
    size: usize,
    c_inv: AlgebraicNumber,
}

/// A key vector of length `dim`.
pub type Key = [i128; MAX_DEGREE];

impl LevelTable {
    pub fn build(field: &Field, n: usize, cap: usize) -> Result<Self, WordsError> {
        let base = field.n() + 1;
        let size = checked_level_size(base, n, cap)?;
        let dim = field.degree();
        let beta = field.beta();
        let mut powers = Vec::with_capacity(n);
        let mut p = field.one();
        for _ in 0..n {
            powers.push(p.clone());
            p = &p * &beta;
        }
        let scale = powers
            .iter()
            .flat_map(|q| q.coeffs().iter())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale_q = Rational::from_integer(scale.clone());
        let mut rows = vec![0i128; n * dim];
        for (k, q) in powers.iter().enumerate() {
            for (i, c) in q.coeffs().iter().enumerate() {
                rows[k * dim + i] = (c * &scale_q)
                    .to_integer()
                    .to_i128()
                    .ok_or(WordsError::KeyOverflow(n))?;
            }
        }
        let mut keys = vec![0i128; size * dim];
        let b = base as usize;
        let mut block = 1usize;
        for pos in (0..n).rev() {
            let row = &rows[pos * dim..(pos + 1) * dim];
            for idx in block..block * b {
                let digit = (idx / block) as i128;
                let rest = idx % block;
                for i in 0..dim {
                    keys[idx * dim + i] = digit
                        .checked_mul(row[i])
                        .and_then(|x| x.checked_add(keys[rest * dim + i]))
                        .ok_or(WordsError::KeyOverflow(n))?;
                }
            }
            block *= b;
        }
        let c_inv = field.digit_unit().inv().expect("c is nonzero");
        Ok(LevelTable {
            field: field.clone(),
            n,
            base,
            dim,
            scale,
            rows,
            keys,
            order: OnceLock::new(),
            size,
            c_inv,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn order(&self) -> &[u32] {
        self.order.get_or_init(|| {
            let dim = self.dim;
            let keys = &self.keys;
            let mut order: Vec<u32> = (0..self.size as u32).collect();
            order.sort_unstable_by(|&a, &b| {
                let (a, b) = (a as usize, b as usize);
                keys[a * dim..(a + 1) * dim]
                    .cmp(&keys[b * dim..(b + 1) * dim])
                    .then(a.cmp(&b))
            });
            order
        })
    }

    pub fn key_of_index(&self, index: usize) -> &[i128] {
        &self.keys[index * self.dim..(index + 1) * self.dim]
    }

    /// Key of an arbitrary value, `None` when it cannot be the key of a word.
    pub fn key_of_value(&self, v: &AlgebraicNumber) -> Option<Key> {
        let x = v * &self.c_inv;
        let scale = Rational::from_integer(self.scale.clone());
        let mut key = [0i128; MAX_DEGREE];
        for (i, c) in x.coeffs().iter().enumerate() {
            let s = c * &scale;
            if !s.is_integer() {
                return None;
            }
            key[i] = s.to_integer().to_i128()?;
        }
        Some(key)
    }

    /// Key of `c · Σ digits[k] β^k` for arbitrary integer digits.
    pub fn key_of_digits(&self, digits: &[i64]) -> Option<Key> {
        assert!(digits.len() <= self.n, "too many digit positions");
        let mut key = [0i128; MAX_DEGREE];
        for (k, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for i in 0..self.dim {
                let term = (d as i128).checked_mul(self.rows[k * self.dim + i])?;
                key[i] = key[i].checked_add(term)?;
            }
        }
        Some(key)
    }

    /// All word slots whose value has the given key, in increasing order.
    pub fn lookup(&self, key: &[i128]) -> &[u32] {
        let key = &key[..self.dim];
        let order = self.order();
        let lo = order.partition_point(|&i| self.key_of_index(i as usize) < key);
        let hi = order[lo..]
            .iter()
            .position(|&i| self.key_of_index(i as usize) != key)
            .map_or(order.len(), |p| lo + p);
        &order[lo..hi]
    }

    pub fn contains_value(&self, v: &AlgebraicNumber) -> bool {
        self.key_of_value(v)
            .is_some_and(|k| !self.lookup(&k).is_empty())
    }

    /// Words whose value equals `v`.
    pub fn words_with_value(&self, v: &AlgebraicNumber) -> Vec<DigitWord> {
        match self.key_of_value(v) {
            Some(k) => self
                .lookup(&k)
                .iter()
                .map(|&i| DigitWord::from_index(i as usize, self.n, self.base))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn value_of_index(&self, index: usize) -> AlgebraicNumber {
        self.value_of_key(self.key_of_index(index))
    }

    pub fn value_of_key(&self, key: &[i128]) -> AlgebraicNumber {
        let coeffs: Vec<Rational> = key[..self.dim]
            .iter()
            .map(|&k| Rational::new(BigInt::from(k), self.scale.clone()))
            .collect();
        &self.field.eval_poly(&coeffs) * &self.field.digit_unit()
    }

    /// `E_n` as (value, words) groups in increasing key order.
    pub fn entries(&self) -> Vec<(AlgebraicNumber, Vec<DigitWord>)> {
        let mut out: Vec<(AlgebraicNumber, Vec<DigitWord>)> = Vec::new();
        let mut last: Option<&[i128]> = None;
        for &i in self.order() {
            let key = self.key_of_index(i as usize);
            let word = DigitWord::from_index(i as usize, self.n, self.base);
            if last == Some(key) {
                out.last_mut().unwrap().1.push(word);
            } else {
                out.push((self.value_of_key(key), vec![word]));
                last = Some(key);
            }
        }
        out
    }

    /// Number of distinct values in `E_n`.
    pub fn distinct_values(&self) -> usize {
        let order = self.order();
        if order.is_empty() {
            return 0;
        }
        1 + order
            .windows(2)
            .filter(|w| self.key_of_index(w[0] as usize) != self.key_of_index(w[1] as usize))
            .count()
    }
}

fn add_keys(a: &[i128], b: &Key, sign: i128) -> Option<Key> {
    let mut out = [0i128; MAX_DEGREE];
    for i in 0..a.len() {
        out[i] = a[i].checked_add(b[i].checked_mul(sign)?)?;
    }
    Some(out)
}

/// Word sets of one level for a translation vector.
#[derive(Clone, Debug)]
pub struct LevelAnalysis {
    pub omega: WordSet,
    pub omega_hat: WordSet,
    pub a: WordSet,
    pub a_hat: WordSet,
    pub w: WordSet,
}

/// Keys of `β^n t_j` for `j = 0..=m`; `None` when the key is not integral.
pub fn shift_keys(table: &LevelTable, t: &TranslationVector) -> Vec<Option<Key>> {
    let scale = table.field.beta().pow(table.n as i64).expect("power");
    t.values
        .iter()
        .map(|v| table.key_of_value(&(v * &scale)))
        .collect()
}

/// For `i` at slot `index`: when every `φ_i(±t_j)` lies in `E_n` (sign `+1`
/// tests `Ω_t^n`, `-1` tests `Ω̂_t^n`), the slots of all words with those
/// values, `j = 0` included.
pub fn image_slots(
    table: &LevelTable,
    shifts: &[Option<Key>],
    index: usize,
    sign: i128,
) -> Option<Vec<usize>> {
    let key = table.key_of_index(index);
    let mut out: Vec<usize> = table.lookup(key).iter().map(|&j| j as usize).collect();
    for s in &shifts[1..] {
        let k = add_keys(key, s.as_ref()?, sign)?;
        let hits = table.lookup(&k);
        if hits.is_empty() {
            return None;
        }
        out.extend(hits.iter().map(|&j| j as usize));
    }
    Some(out)
}

/// Compute `Ω_t^n`, `Ω̂_t^n`, `A_t^n`, `Â_t^n` and `W_t^n` at the level of `table`.
pub fn analyze_level(table: &LevelTable, t: &TranslationVector) -> LevelAnalysis {
    let (n, base) = (table.n, table.base);
    let shifts = shift_keys(table, t);
    let mut omega = WordSet::empty(n, base);
    let mut omega_hat = WordSet::empty(n, base);
    let mut a = WordSet::empty(n, base);
    let mut a_hat = WordSet::empty(n, base);
    for idx in 0..table.size() {
        if let Some(slots) = image_slots(table, &shifts, idx, 1) {
            omega.insert(idx);
            slots.into_iter().for_each(|j| a.insert(j));
        }
        if let Some(slots) = image_slots(table, &shifts, idx, -1) {
            omega_hat.insert(idx);
            slots.into_iter().for_each(|j| a_hat.insert(j));
        }
    }
    let w = a.union(&a_hat);
    LevelAnalysis {
        omega,
        omega_hat,
        a,
        a_hat,
        w,
    }
}

/// `Ω_t^n` and `Ω̂_t^n`.
pub fn omega_sets(
    field: &Field,
    t: &TranslationVector,
    n: usize,
    cap: usize,
) -> Result<(WordSet, WordSet), WordsError> {
    let table = LevelTable::build(field, n, cap)?;
    let l = analyze_level(&table, t);
    Ok((l.omega, l.omega_hat))
}

/// `W_t^n = A_t^n ∪ Â_t^n`.
pub fn w_set(
    field: &Field,
    t: &TranslationVector,
    n: usize,
    cap: usize,
) -> Result<WordSet, WordsError> {
    let table = LevelTable::build(field, n, cap)?;
    Ok(analyze_level(&table, t).w)
}

/// Values `β^{-τ} φ_w(0)` for all words of length `τ`, sorted, without 0.
pub fn t_level_values(field: &Field, tau: usize, cap: usize) -> Result<Vec<AlgebraicNumber>, WordsError> {
    let table = LevelTable::build(field, tau, cap)?;
    let inv = field.beta().pow(-(tau as i64)).expect("beta is nonzero");
    let mut out: Vec<AlgebraicNumber> = table
        .entries()
        .into_iter()
        .map(|(v, _)| &v * &inv)
        .filter(|v| !v.is_zero())
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
