//! Brute-force oracles that share no code with the library: words are plain
//! `Vec<u32>`, series are maps from words to `i64`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type W = Vec<u32>;

pub fn all_words(k: u32, max_len: usize) -> Vec<W> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v: W = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `(start, length)` of every occurrence, 0-based start.
pub fn occurrences(w: &[u32], f: &[W]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for p in f {
            if i + p.len() <= w.len() && &w[i..i + p.len()] == p.as_slice() {
                out.push((i, p.len()));
            }
        }
    }
    out
}

pub fn avoids(w: &[u32], f: &[W]) -> bool {
    occurrences(w, f).is_empty()
}

/// Coefficients of the cluster polynomial by checking every subset of
/// occurrences for an overlapping chain that covers `w`.
pub fn cluster_poly(w: &[u32], f: &[W]) -> Vec<i64> {
    let occ = occurrences(w, f);
    let m = occ.len();
    assert!(m < 24, "too many occurrences for the oracle");
    let mut coeffs = vec![0i64; m + 1];
    if w.len() < 2 {
        return vec![0];
    }
    for mask in 1u32..(1 << m) {
        let chosen: Vec<(usize, usize)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| occ[i]).collect();
        // consecutive marks must share a letter and the union must be w
        let mut reach = 0usize;
        let mut ok = chosen[0].0 == 0;
        for &(s, l) in &chosen {
            if s >= reach && reach > 0 {
                ok = false;
            }
            reach = reach.max(s + l);
        }
        if ok && reach == w.len() {
            coeffs[chosen.len()] += 1;
        }
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    coeffs
}

pub fn poly_text(c: &[i64]) -> String {
    let mut parts = Vec::new();
    for (k, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        let body = match (v.abs(), k) {
            (1, 0) => "1".to_string(),
            (1, _) => mono,
            (a, _) => format!("{a}{mono}"),
        };
        parts.push((v < 0, body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    s
}

pub type Series = BTreeMap<W, i64>;

/// Inverse of a series with constant term 1, coefficient by coefficient:
/// `T(w) = -sum over nonempty prefixes u of w of S(u) T(rest)`.
pub fn invert(s: &Series, k: u32, max_len: usize) -> Series {
    assert_eq!(s.get(&vec![]).copied(), Some(1));
    let mut t: HashMap<W, i64> = HashMap::new();
    let mut out = Series::new();
    for w in all_words(k, max_len) {
        let v = if w.is_empty() {
            1
        } else {
            -(1..=w.len()).map(|i| s.get(&w[..i].to_vec()).copied().unwrap_or(0) * t[&w[i..].to_vec()]).sum::<i64>()
        };
        t.insert(w.clone(), v);
        if v != 0 {
            out.insert(w, v);
        }
    }
    out
}

pub fn avoiding(k: u32, f: &[W], max_len: usize) -> Series {
    all_words(k, max_len).into_iter().filter(|w| avoids(w, f)).map(|w| (w, 1)).collect()
}

pub fn render(letters: &str, w: &[u32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let chars: Vec<char> = letters.chars().collect();
    w.iter().map(|&l| chars[l as usize]).collect()
}

pub fn parse(letters: &str, w: &str) -> W {
    w.chars().map(|c| letters.find(c).expect("letter") as u32).collect()
}

/// `mu(bottom, top)` on the lattice of unions of `intervals`, from the set of
/// all unions and the defining recursion.
pub fn mobius_bottom_top(intervals: &[(i64, i64)]) -> i64 {
    let sets: Vec<BTreeSet<i64>> = intervals.iter().map(|&(lo, hi)| (lo..=hi).collect()).collect();
    let mut elems: BTreeSet<BTreeSet<i64>> = BTreeSet::new();
    elems.insert(BTreeSet::new());
    for s in &sets {
        let cur: Vec<_> = elems.iter().cloned().collect();
        for e in cur {
            elems.insert(e.union(s).cloned().collect());
        }
    }
    let mut elems: Vec<BTreeSet<i64>> = elems.into_iter().collect();
    elems.sort_by_key(|e| e.len());
    let mut mu: Vec<i64> = Vec::with_capacity(elems.len());
    for (i, y) in elems.iter().enumerate() {
        let v = if i == 0 { 1 } else { -(0..i).filter(|&j| elems[j].is_subset(y)).map(|j| mu[j]).sum::<i64>() };
        mu.push(v);
    }
    *mu.last().unwrap()
}
