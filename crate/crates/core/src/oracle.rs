//! Brute-force admissibility test straight from the covering criterion
//! `∪_{n=τ}^{ℓ} W_t^n × Ω^{ℓ-n} = Ω^ℓ`.
//!
//! Every `W_t^n` is rebuilt from its definition at every level: each image
//! `φ_{i_1}∘…∘φ_{i_n}(±t_j)` is composed map by map along the word tree and
//! looked up in `E_n`. Nothing here uses the overlap graph, the `Ω_t` sets or
//! the level-`n₀` reduction.

use std::collections::BTreeMap;
use std::fmt;

use crate::algnum::{Field, MAX_DEGREE};
use crate::words::{level_size, Key, LevelTable, TranslationVector, WordSet, WordsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    AdmissibleAt(usize),
    /// No level up to the bound satisfies the criterion. Not a proof of
    /// non-admissibility by itself.
    NotAdmissibleUpTo(usize),
}

impl fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleOutcome::AdmissibleAt(l) => write!(f, "AdmissibleAt({l})"),
            OracleOutcome::NotAdmissibleUpTo(l) => write!(f, "NotAdmissibleUpTo({l})"),
        }
    }
}

/// Caches `W_t^n` per level for one translation vector.
pub struct Oracle<'a> {
    field: &'a Field,
    t: &'a TranslationVector,
    cap: usize,
    cache: BTreeMap<usize, WordSet>,
}

impl<'a> Oracle<'a> {
    pub fn new(field: &'a Field, t: &'a TranslationVector, cap: usize) -> Self {
        Oracle {
            field,
            t,
            cap,
            cache: BTreeMap::new(),
        }
    }

    /// `W_t^n` for `n ≥ τ_t`.
    pub fn w(&mut self, n: usize) -> Result<&WordSet, WordsError> {
        if !self.cache.contains_key(&n) {
            let w = w_from_definition(self.field, self.t, n, self.cap)?;
            self.cache.insert(n, w);
        }
        Ok(&self.cache[&n])
    }

    /// Whether `∪_{n=τ}^{ℓ} W_t^n × Ω^{ℓ-n}` is all of `Ω^ℓ`.
    pub fn criterion_holds(&mut self, level: usize) -> Result<bool, WordsError> {
        let base = self.field.n() + 1;
        let tau = self.t.tau();
        assert!(level >= tau, "criterion level below tau");
        if level_size(base, level).map_or(true, |s| s > self.cap) {
            return Err(WordsError::CapExceeded {
                n: level,
                size: u128::from(base).checked_pow(level as u32).unwrap_or(u128::MAX),
                cap: self.cap,
            });
        }
        let mut cover = WordSet::empty(level, base);
        for n in tau..=level {
            self.w(n)?.mark_extensions(level - n, &mut cover);
        }
        Ok(cover.is_full())
    }

    /// Least `ℓ ≤ ℓ_max` satisfying the criterion.
    pub fn brute_decide(&mut self, max_level: usize) -> Result<OracleOutcome, WordsError> {
        for level in self.t.tau()..=max_level {
            if self.criterion_holds(level)? {
                return Ok(OracleOutcome::AdmissibleAt(level));
            }
        }
        Ok(OracleOutcome::NotAdmissibleUpTo(max_level))
    }

    /// Criterion values for `ℓ = τ, …, ℓ_max`.
    pub fn scan(&mut self, max_level: usize) -> Result<Vec<bool>, WordsError> {
        (self.t.tau()..=max_level)
            .map(|l| self.criterion_holds(l))
            .collect()
    }
}

pub fn criterion_holds(
    field: &Field,
    t: &TranslationVector,
    level: usize,
    cap: usize,
) -> Result<bool, WordsError> {
    Oracle::new(field, t, cap).criterion_holds(level)
}

pub fn brute_decide(
    field: &Field,
    t: &TranslationVector,
    max_level: usize,
    cap: usize,
) -> Result<OracleOutcome, WordsError> {
    Oracle::new(field, t, cap).brute_decide(max_level)
}

/// Digits of `φ_{i_1}∘…∘φ_{i_n}(x) / c` where `x / c = Σ_k start[k] β^{k-τ}`.
///
/// `φ_d(y)/c = β·(y/c) + d`, so applying `φ_d` shifts every digit up one
/// position and adds `d` at position 0. After `n ≥ τ` steps all positions are
/// nonnegative.
fn compose(word: &[u8], start: &[i64], tau: usize) -> Vec<i64> {
    // digits[p + tau] is the coefficient of β^p.
    let mut digits = vec![0i64; word.len() + tau];
    digits[..tau].copy_from_slice(start);
    for &d in word.iter().rev() {
        digits.rotate_right(1);
        digits[tau] += i64::from(d);
    }
    debug_assert!(digits[..tau].iter().all(|&x| x == 0));
    digits.split_off(tau)
}

fn w_from_definition(
    field: &Field,
    t: &TranslationVector,
    n: usize,
    cap: usize,
) -> Result<WordSet, WordsError> {
    let tau = t.tau();
    assert!(n >= tau, "level below tau");
    let table = LevelTable::build(field, n, cap)?;
    let base = field.n() + 1;
    let zeros = vec![0u8; n];
    // Key of β^n·(±t_j)/c = φ_0^n(±t_j)/c, for each j and sign.
    let mut tails: Vec<Key> = Vec::with_capacity(2 * t.words().len());
    for sign in [1i64, -1] {
        for w in t.words() {
            let start: Vec<i64> = w.digits().iter().map(|&d| sign * i64::from(d)).collect();
            let key = table
                .key_of_digits(&compose(&zeros, &start, tau))
                .ok_or(WordsError::KeyOverflow(n))?;
            tails.push(key);
        }
    }
    // Key of c·β^k, the constant a digit 1 contributes at composition depth k.
    let rows: Vec<Key> = (0..n)
        .map(|k| {
            let mut unit = vec![0i64; n];
            unit[k] = 1;
            table.key_of_digits(&unit).ok_or(WordsError::KeyOverflow(n))
        })
        .collect::<Result<_, _>>()?;
    let index = KeyIndex::build(&table);
    let walk = Walk {
        table: &table,
        index: &index,
        rows: &rows,
        tails: &tails,
        m1: t.words().len(),
        dim: field.degree(),
        base: base as usize,
        n,
    };
    if n == 0 {
        let mut w = WordSet::empty(0, base);
        walk.descend(0, [0; MAX_DEGREE], &mut w);
        return Ok(w);
    }
    // One thread per outermost map.
    let parts: Vec<WordSet> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..base as usize)
            .map(|d| {
                let walk = &walk;
                s.spawn(move || {
                    let mut w = WordSet::empty(n, base);
                    let key = walk.step([0; MAX_DEGREE], 0, d);
                    walk.descend(1, key, &mut w);
                    w
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker")).collect()
    });
    let mut w = WordSet::empty(n, base);
    for p in &parts {
        w.union_with(p);
    }
    Ok(w)
}

/// Depth-first walk over `φ_{i_1}∘…∘φ_{i_n}`, composing one map per level.
struct Walk<'a> {
    table: &'a LevelTable,
    index: &'a KeyIndex,
    rows: &'a [Key],
    tails: &'a [Key],
    m1: usize,
    dim: usize,
    base: usize,
    n: usize,
}

impl Walk<'_> {
    /// Constant term after composing `φ_d` at depth `k`.
    fn step(&self, mut key: Key, k: usize, d: usize) -> Key {
        for i in 0..self.dim {
            key[i] += d as i128 * self.rows[k][i];
        }
        key
    }

    fn descend(&self, k: usize, key: Key, out: &mut WordSet) {
        if k == self.n {
            self.leaf(key, out);
            return;
        }
        for d in 0..self.base {
            self.descend(k + 1, self.step(key, k, d), out);
        }
    }

    /// Mark the images of `φ_w(±t_j)` when every `j` lands in `E_n`.
    fn leaf(&self, key: Key, out: &mut WordSet) {
        for tails in self.tails.chunks(self.m1) {
            let shifted = |tail: &Key| {
                let mut k = key;
                for i in 0..self.dim {
                    k[i] = k[i].checked_add(tail[i])?;
                }
                Some(k)
            };
            let all = tails.iter().all(|tail| {
                shifted(tail).is_some_and(|k| self.index.find(self.table, &k[..self.dim]).next().is_some())
            });
            if all {
                for tail in tails {
                    let k = shifted(tail).expect("checked above");
                    for slot in self.index.find(self.table, &k[..self.dim]) {
                        out.insert(slot as usize);
                    }
                }
            }
        }
    }
}

/// Open-addressing hash index over the keys of a level table.
struct KeyIndex {
    mask: usize,
    /// Word slot plus one; zero marks an empty bucket.
    buckets: Vec<u32>,
}

fn hash_key(key: &[i128]) -> usize {
    const K: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut h = 0u64;
    for &x in key {
        h = (h.rotate_left(5) ^ x as u64).wrapping_mul(K);
        h = (h.rotate_left(5) ^ (x >> 64) as u64).wrapping_mul(K);
    }
    (h ^ (h >> 29)) as usize
}

impl KeyIndex {
    fn build(table: &LevelTable) -> Self {
        let len = (2 * table.size()).next_power_of_two().max(2);
        let mask = len - 1;
        let mut buckets = vec![0u32; len];
        for slot in 0..table.size() {
            let mut b = hash_key(table.key_of_index(slot)) & mask;
            while buckets[b] != 0 {
                b = (b + 1) & mask;
            }
            buckets[b] = slot as u32 + 1;
        }
        KeyIndex { mask, buckets }
    }

    /// Slots whose key equals `key`, in probe order.
    fn find<'a>(&'a self, table: &'a LevelTable, key: &'a [i128]) -> impl Iterator<Item = u32> + 'a {
        let mut b = hash_key(key) & self.mask;
        std::iter::from_fn(move || loop {
            let e = self.buckets[b];
            if e == 0 {
                return None;
            }
            b = (b + 1) & self.mask;
            if table.key_of_index(e as usize - 1) == key {
                return Some(e - 1);
            }
        })
    }
}
