//! Gray-code walks over `{0,1}^n` with incremental state updates.
//!
//! Consecutive codes of the binary reflected Gray code differ in exactly one
//! bit, so a running sum can follow the walk with one add or subtract per
//! step. The index range `0..2^n` is split into fixed chunks; each chunk
//! rebuilds its state from scratch at its first code and then walks
//! incrementally. Chunk boundaries depend only on `n`, so results do not
//! depend on the number of worker threads.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

/// The `i`-th binary reflected Gray code.
#[inline]
pub fn gray_code(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// State carried along a Gray-code walk.
pub trait GrayState {
    /// Rebuild the state for the code `mask` from scratch.
    fn reset(&mut self, mask: u64);
    /// Bit `k` was toggled; `now_set` is its new value.
    fn flip(&mut self, k: usize, now_set: bool);
    /// Objective at the current code.
    fn score(&self) -> f64;
}

/// Best score found by a walk, with the Gray index where it first occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkBest {
    pub value: f64,
    pub index: u64,
}

impl WalkBest {
    pub fn mask(&self) -> u64 {
        gray_code(self.index)
    }
}

const SEQUENTIAL_BITS: usize = 14;
const CHUNK_BITS: usize = 12;

fn walk_range<S: GrayState>(state: &mut S, start: u64, end: u64) -> WalkBest {
    state.reset(gray_code(start));
    let mut best = WalkBest {
        value: state.score(),
        index: start,
    };
    for i in start + 1..end {
        let k = i.trailing_zeros() as usize;
        let now_set = (gray_code(i) >> k) & 1 == 1;
        state.flip(k, now_set);
        let v = state.score();
        if v > best.value {
            best = WalkBest { value: v, index: i };
        }
    }
    best
}

/// Maximizes `score` over all `2^n` codes. Ties go to the smallest Gray index.
///
/// `make` builds a fresh state; it is called once per chunk.
pub fn gray_argmax<S, F>(n: usize, make: F) -> WalkBest
where
    S: GrayState,
    F: Fn() -> S + Sync,
{
    assert!(n < 64, "gray_argmax supports n < 64");
    let total = 1u64 << n;
    if n <= SEQUENTIAL_BITS {
        let mut state = make();
        return walk_range(&mut state, 0, total);
    }
    let chunk = 1u64 << CHUNK_BITS.max(n - 10);
    let chunks = total / chunk;
    let partial: Vec<WalkBest> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut state = make();
            walk_range(&mut state, c * chunk, (c + 1) * chunk)
        })
        .collect();
    let mut best = partial[0];
    for b in &partial[1..] {
        if b.value > best.value {
            best = *b;
        }
    }
    best
}

/// A subset of `{0, …, len-1}`, also used for sign patterns (bit set = sign −1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    len: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(len: usize) -> Self {
        Subset {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Subset::empty(len);
        for k in 0..len {
            s.insert(k);
        }
        s
    }

    pub fn from_mask(mask: u64, len: usize) -> Self {
        let mut s = Subset::empty(len);
        for k in 0..len.min(64) {
            if (mask >> k) & 1 == 1 {
                s.insert(k);
            }
        }
        s
    }

    pub fn from_indices(indices: &[usize], len: usize) -> Self {
        let mut s = Subset::empty(len);
        for &k in indices {
            s.insert(k);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, k: usize) -> bool {
        k < self.len && (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    pub fn insert(&mut self, k: usize) {
        assert!(k < self.len);
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn toggle(&mut self, k: usize) {
        assert!(k < self.len);
        self.words[k / 64] ^= 1 << (k % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&k| self.contains(k))
    }

    /// The low 64 bits.
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Lowercase hex, most significant digit first, no prefix; `"0"` when empty.
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        for w in self.words.iter().rev() {
            if out.is_empty() {
                if *w != 0 {
                    out = format!("{w:x}");
                }
            } else {
                out.push_str(&format!("{w:016x}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}
