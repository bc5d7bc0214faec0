//! Marked words and clusters.
//!
//! A marked word is a word together with a set of marked occurrences of
//! forbidden words. It is a cluster when it has at least two letters and the
//! marks overlap into one connected block that covers every adjacent letter
//! pair: sorted by start, the first mark starts at position 1, each later
//! mark shares at least one letter with the marks before it, and the last
//! covered letter is the last letter of the word. Every marked word splits
//! uniquely into unmarked letters and clusters.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::series::NcPolySeries;
use crate::words::{all_words, occurrences, Alphabet, ForbiddenSet, Letter, Occurrence, Span, Word};

/// A word with a set of marked forbidden-word occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedWord {
    word: Word,
    marks: Vec<Occurrence>,
}

impl MarkedWord {
    /// Validates that every mark is a genuine occurrence of its pattern.
    pub fn new<I>(word: Word, marks: I, f: &ForbiddenSet) -> Result<Self>
    where
        I: IntoIterator<Item = Occurrence>,
    {
        f.alphabet().check(&word)?;
        let marks: BTreeSet<Occurrence> = marks.into_iter().collect();
        for m in &marks {
            let pattern = f
                .words()
                .get(m.pattern)
                .ok_or_else(|| Error::InvalidMark(format!("no pattern with index {}", m.pattern)))?;
            if m.span.len != pattern.len() || !word.has_factor_at(pattern, m.span.start) {
                return Err(Error::InvalidMark(format!(
                    "{} does not occur at [{}, {})",
                    f.alphabet().render(pattern),
                    m.span.start,
                    m.span.end()
                )));
            }
        }
        Ok(MarkedWord { word, marks: marks.into_iter().collect() })
    }

    /// Marks the occurrences of `f` whose half-open intervals are listed.
    pub fn from_intervals(word: Word, intervals: &[(usize, usize)], f: &ForbiddenSet) -> Result<Self> {
        let marks = intervals
            .iter()
            .map(|&(i, j)| {
                let span = Span::from_interval(i, j);
                if i < 1 || j > word.len() || i >= j {
                    return Err(Error::InvalidMark(format!("[{i}, {j}) is outside the word")));
                }
                let factor = word.factor(span);
                let pattern = f
                    .index_of(&factor)
                    .ok_or_else(|| Error::InvalidMark(format!("{} is not forbidden", f.alphabet().render(&factor))))?;
                Ok(Occurrence { span, pattern })
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedWord::new(word, marks, f)
    }

    pub fn unmarked(word: Word) -> Self {
        MarkedWord { word, marks: Vec::new() }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Marks sorted by `(start, end, pattern)`.
    pub fn marks(&self) -> &[Occurrence] {
        &self.marks
    }

    pub fn intervals(&self) -> Vec<(usize, usize)> {
        self.marks.iter().map(|m| m.span.interval()).collect()
    }

    /// `(u, I)(v, J) = (uv, I ∪ (J + |u|))`.
    pub fn concat(&self, other: &MarkedWord) -> MarkedWord {
        let shift = self.word.len();
        let mut marks = self.marks.clone();
        marks.extend(
            other
                .marks
                .iter()
                .map(|m| Occurrence { span: Span::new(m.span.start + shift, m.span.len), pattern: m.pattern }),
        );
        marks.sort();
        MarkedWord { word: self.word.concat(&other.word), marks }
    }

    pub fn is_cluster(&self) -> bool {
        covers(self.word.len(), &self.marks)
    }
}

/// True iff `marks` (sorted by start) form a cluster on a word of length `n`.
fn covers(n: usize, marks: &[Occurrence]) -> bool {
    if n < 2 || marks.is_empty() || marks[0].span.start != 1 {
        return false;
    }
    let mut reach = 0;
    for m in marks {
        if reach > 0 && m.span.start > reach {
            return false;
        }
        reach = reach.max(m.span.end());
    }
    reach == n
}

/// Whether a marked word is a cluster.
pub fn is_cluster(mw: &MarkedWord) -> bool {
    mw.is_cluster()
}

/// Walks every subset of `occ` (sorted by start) that is a cluster on a word
/// of length `n`, pruning as soon as a coverage gap makes completion
/// impossible.
fn for_each_cluster(n: usize, occ: &[Occurrence], mut visit: impl FnMut(&[Occurrence])) {
    fn go(
        n: usize,
        occ: &[Occurrence],
        k: usize,
        chosen: &mut Vec<Occurrence>,
        reach: usize,
        visit: &mut dyn FnMut(&[Occurrence]),
    ) {
        let blocked = match occ.get(k) {
            None => true,
            Some(o) if chosen.is_empty() => o.span.start != 1,
            Some(o) => o.span.start > reach,
        };
        if blocked {
            if !chosen.is_empty() && reach == n {
                visit(chosen);
            }
            return;
        }
        let o = occ[k];
        chosen.push(o);
        go(n, occ, k + 1, chosen, reach.max(o.span.end()), visit);
        chosen.pop();
        go(n, occ, k + 1, chosen, reach, visit);
    }
    if n < 2 {
        return;
    }
    go(n, occ, 0, &mut Vec::new(), 0, &mut visit);
}

/// Every mark set `I` such that `(w, I)` is a cluster.
pub fn enumerate_clusters(w: &Word, f: &ForbiddenSet) -> Result<Vec<Vec<Occurrence>>> {
    let occ = occurrences(w, f)?;
    let mut out = Vec::new();
    for_each_cluster(w.len(), &occ, |c| out.push(c.to_vec()));
    Ok(out)
}

/// How [`cluster_polynomial`] is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Enumerate cluster mark sets directly.
    Subset,
    /// The prefix recurrence; requires a reduced forbidden set.
    Recurrence,
}

/// The cluster polynomial: the sum of `t^|I|` over all clusters `(w, I)`.
/// Zero when `w` is not a cluster word.
pub fn cluster_polynomial(w: &Word, f: &ForbiddenSet, method: Method) -> Result<IntPoly> {
    match method {
        Method::Subset => {
            let occ = occurrences(w, f)?;
            let mut counts: Vec<u64> = Vec::new();
            for_each_cluster(w.len(), &occ, |c| {
                if counts.len() <= c.len() {
                    counts.resize(c.len() + 1, 0);
                }
                counts[c.len()] += 1;
            });
            Ok(IntPoly::new(counts.into_iter().map(Into::into).collect()))
        }
        Method::Recurrence => match recurrence_trace(w, f) {
            Ok(trace) => Ok(trace.p.last().cloned().unwrap_or_default()),
            Err(Error::NotClusterWord(_)) => Ok(IntPoly::zero()),
            Err(e) => Err(e),
        },
    }
}

/// Intermediate values of the prefix recurrence for a cluster word.
///
/// With the occurrences `[i_1, j_1), ..., [i_m, j_m)` sorted by start, `p[k]`
/// is the cluster polynomial of the prefix ending at `j_k`, `p[0] = t`, and
/// `p[k] = t (p[r_k] + ... + p[k-1])` where `r_k` is the first occurrence
/// reaching `i_k`. Indices in `r` are 1-based like the occurrence numbering;
/// `r[0]` belongs to the second occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceTrace {
    pub occurrences: Vec<Occurrence>,
    pub r: Vec<usize>,
    pub p: Vec<IntPoly>,
}

impl RecurrenceTrace {
    /// The sequence `p_k(t0)`.
    pub fn eval(&self, t0: i64) -> Vec<i64> {
        use num_traits::ToPrimitive;
        let t0 = t0.into();
        self.p.iter().map(|p| p.eval(&t0).to_i64().expect("small value")).collect()
    }
}

/// Runs the prefix recurrence on `w`.
pub fn recurrence_trace(w: &Word, f: &ForbiddenSet) -> Result<RecurrenceTrace> {
    if !f.is_reduced() {
        f.require_reduced()?;
    }
    let occ = occurrences(w, f)?;
    let n = w.len();
    let not_cluster = || Error::NotClusterWord(f.alphabet().render(w));
    if n < 2 || occ.is_empty() || occ[0].span.start != 1 || occ[occ.len() - 1].span.end() != n {
        return Err(not_cluster());
    }
    let mut r = Vec::with_capacity(occ.len().saturating_sub(1));
    let mut p = vec![IntPoly::t()];
    for k in 1..occ.len() {
        let start = occ[k].span.start;
        if occ[k - 1].span.end() < start {
            return Err(not_cluster());
        }
        // ends increase strictly for a reduced set, so the first reaching
        // occurrence starts a contiguous run up to k-1
        let rk = (0..k).find(|&l| occ[l].span.end() >= start).expect("k-1 reaches");
        let sum = p[rk..k].iter().cloned().fold(IntPoly::zero(), |a, b| a + b);
        p.push(IntPoly::t() * sum);
        r.push(rk + 1);
    }
    Ok(RecurrenceTrace { occurrences: occ, r, p })
}

/// All cluster words of length at most `max_len`, in canonical order.
///
/// Grown from the forbidden words by repeatedly appending a forbidden word
/// that overlaps the current word's tail by at least one letter and reaches
/// past its end.
pub fn cluster_words(f: &ForbiddenSet, max_len: usize) -> Vec<Word> {
    let mut seen: BTreeSet<Word> = f.words().iter().filter(|w| w.len() <= max_len).cloned().collect();
    let mut frontier: Vec<Word> = seen.iter().cloned().collect();
    while let Some(u) = frontier.pop() {
        let n = u.len();
        for g in f.words() {
            for start in 1..=n {
                let overlap = n - start + 1;
                if g.len() <= overlap || start - 1 + g.len() > max_len {
                    continue;
                }
                if u.letters()[start - 1..] != g.letters()[..overlap] {
                    continue;
                }
                let mut v = u.clone();
                for &l in &g.letters()[overlap..] {
                    v.push(l);
                }
                if seen.insert(v.clone()) {
                    frontier.push(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// The cluster generating function truncated at `max_len`: the coefficient
/// of each word is its cluster polynomial.
pub fn cluster_gf(f: &ForbiddenSet, max_len: usize) -> Result<NcPolySeries> {
    let mut s = NcPolySeries::zero(f.alphabet().clone(), max_len);
    for w in cluster_words(f, max_len) {
        let p = cluster_polynomial(&w, f, Method::Subset)?;
        s.add_term(w, p);
    }
    Ok(s)
}

/// [`cluster_gf`] by scanning every word up to `max_len`. Exponential in
/// `max_len`; meant as a cross-check.
pub fn cluster_gf_brute_force(f: &ForbiddenSet, max_len: usize) -> Result<NcPolySeries> {
    let mut s = NcPolySeries::zero(f.alphabet().clone(), max_len);
    for w in all_words(f.alphabet(), max_len) {
        let p = cluster_polynomial(&w, f, Method::Subset)?;
        s.add_term(w, p);
    }
    Ok(s)
}

/// One piece of the factorization of a marked word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Letter(Letter),
    Cluster(MarkedWord),
}

impl Segment {
    pub fn marked_word(&self) -> MarkedWord {
        match self {
            Segment::Letter(l) => MarkedWord::unmarked(Word::letter(*l)),
            Segment::Cluster(c) => c.clone(),
        }
    }
}

/// Splits a marked word into unmarked letters and clusters. The split is
/// unique: clusters are the maximal blocks of marks chained by shared
/// letters.
pub fn factor_marked_word(mw: &MarkedWord) -> Vec<Segment> {
    // blocks of overlapping marks as (first, last letter, mark range)
    let mut blocks: Vec<(usize, usize, std::ops::Range<usize>)> = Vec::new();
    for (idx, m) in mw.marks.iter().enumerate() {
        match blocks.last_mut() {
            Some((_, reach, range)) if m.span.start <= *reach => {
                *reach = (*reach).max(m.span.end());
                range.end = idx + 1;
            }
            _ => blocks.push((m.span.start, m.span.end(), idx..idx + 1)),
        }
    }
    let mut out = Vec::new();
    let mut pos = 1;
    let mut blocks = blocks.into_iter().peekable();
    while pos <= mw.word.len() {
        match blocks.peek() {
            Some((start, _, _)) if *start == pos => {
                let (start, end, range) = blocks.next().expect("peeked");
                let span = Span::new(start, end - start + 1);
                let marks = mw.marks[range]
                    .iter()
                    .map(|m| Occurrence { span: Span::new(m.span.start - start + 1, m.span.len), pattern: m.pattern })
                    .collect();
                out.push(Segment::Cluster(MarkedWord { word: mw.word.factor(span), marks }));
                pos = end + 1;
            }
            _ => {
                out.push(Segment::Letter(mw.word.letters()[pos - 1]));
                pos += 1;
            }
        }
    }
    out
}

/// Concatenates segments back into one marked word.
pub fn concat_segments(segments: &[Segment]) -> MarkedWord {
    segments.iter().fold(MarkedWord::unmarked(Word::empty()), |acc, s| acc.concat(&s.marked_word()))
}

/// The word on one line followed by one row per mark underlining its letters.
pub fn render_marked(alphabet: &Alphabet, mw: &MarkedWord) -> String {
    let sep = if alphabet.is_compact() { 0 } else { 1 };
    let mut cols = Vec::with_capacity(mw.word.len());
    let mut col = 0;
    for &l in mw.word.letters() {
        let width = alphabet.letter(l).chars().count();
        cols.push((col, width));
        col += width + sep;
    }
    let mut out = alphabet.render(&mw.word);
    for m in &mw.marks {
        let (from, _) = cols[m.span.start - 1];
        let (last, width) = cols[m.span.end() - 1];
        out.push('\n');
        let _ = write!(out, "{}{}", " ".repeat(from), "-".repeat(last + width - from));
    }
    out
}
