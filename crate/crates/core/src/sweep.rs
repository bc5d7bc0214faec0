//! Seeded generators for randomized property sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::IntervalFamily;
use crate::words::{reduce, Alphabet, ForbiddenSet, Word};

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonempty reduced forbidden set of at most `max_words` words with
/// lengths in `2..=max_pattern_len`, over the first `alphabet_size`
/// lowercase letters.
pub fn random_reduced_set(
    rng: &mut SweepRng,
    alphabet_size: usize,
    max_words: usize,
    max_pattern_len: usize,
) -> ForbiddenSet {
    let alphabet = Alphabet::lowercase(alphabet_size).expect("at most 26 letters");
    loop {
        let count = rng.gen_range(1..=max_words);
        let words = (0..count).map(|_| {
            let len = rng.gen_range(2..=max_pattern_len);
            Word::new((0..len).map(|_| rng.gen_range(0..alphabet_size as u32)).collect())
        });
        let f = ForbiddenSet::new(alphabet.clone(), words.collect::<Vec<_>>()).expect("valid words");
        let f = reduce(&f);
        if !f.is_empty() {
            return f;
        }
    }
}

/// Between 1 and `max_size` intervals inside `lo..=hi`.
pub fn random_family(rng: &mut SweepRng, max_size: usize, lo: i64, hi: i64) -> IntervalFamily {
    let m = rng.gen_range(1..=max_size);
    let ivs = (0..m)
        .map(|_| {
            let a = rng.gen_range(lo..=hi);
            let b = rng.gen_range(lo..=hi);
            (a.min(b), a.max(b))
        })
        .collect();
    IntervalFamily::new(ivs).expect("nonempty intervals in range")
}

/// Indices `r_2, ..., r_m` with `1 <= r_k <= k - 1`; weakly increasing when
/// `monotone` is set.
pub fn random_recurrence(rng: &mut SweepRng, m: usize, monotone: bool) -> Vec<usize> {
    let mut r = Vec::with_capacity(m.saturating_sub(1));
    for k in 2..=m {
        let low = if monotone { r.last().copied().unwrap_or(1) } else { 1 };
        r.push(rng.gen_range(low..=k - 1));
    }
    r
}

/// All intervals `{lo..hi}` with `min <= lo <= hi <= max`.
pub fn all_intervals(min: i64, max: i64) -> Vec<(i64, i64)> {
    (min..=max).flat_map(|lo| (lo..=max).map(move |hi| (lo, hi))).collect()
}

/// Calls `visit` on every family of `1..=max_size` distinct intervals inside
/// `min..=max`.
pub fn for_each_family(min: i64, max: i64, max_size: usize, mut visit: impl FnMut(&[(i64, i64)])) {
    type Interval = (i64, i64);
    fn go(pool: &[Interval], from: usize, left: usize, cur: &mut Vec<Interval>, visit: &mut dyn FnMut(&[Interval])) {
        if !cur.is_empty() {
            visit(cur);
        }
        if left == 0 {
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i]);
            go(pool, i + 1, left - 1, cur, visit);
            cur.pop();
        }
    }
    let pool = all_intervals(min, max);
    go(&pool, 0, max_size, &mut Vec::new(), &mut visit);
}
