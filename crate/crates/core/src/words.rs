//! Alphabets, words over them, forbidden-word sets and occurrence scanning.
//!
//! Words are stored as sequences of letter indices; the alphabet that gives
//! those indices meaning travels separately (inside [`ForbiddenSet`] and the
//! series types). Positions are 1-based throughout, matching the way marked
//! words are usually written down.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
pub type Letter = u32;

/// A finite, ordered set of letter tokens.
///
/// Cloning is cheap; the token list is shared.
#[derive(Clone)]
pub struct Alphabet {
    letters: Arc<Vec<String>>,
    compact: bool,
}

impl Alphabet {
    /// Builds an alphabet from distinct, nonempty tokens. Tokens may not
    /// contain whitespace, `.` or `^`, and the token `1` is reserved for the
    /// empty word.
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, token) in letters.iter().enumerate() {
            let bad =
                token.is_empty() || token == "1" || token.chars().any(|c| c.is_whitespace() || c == '.' || c == '^');
            if bad {
                return Err(Error::InvalidLetter(token.clone()));
            }
            if letters[..i].contains(token) {
                return Err(Error::DuplicateLetter(token.clone()));
            }
        }
        if letters.len() > Letter::MAX as usize {
            return Err(Error::InvalidLetter("alphabet too large".into()));
        }
        let compact = letters.iter().all(|t| t.chars().count() == 1);
        Ok(Alphabet { letters: Arc::new(letters), compact })
    }

    /// The alphabet `{a, b, c, ...}` of the first `n` lowercase letters.
    pub fn lowercase(n: usize) -> Result<Self> {
        if n > 26 {
            return Err(Error::InvalidLetter(format!("{n} lowercase letters")));
        }
        Alphabet::new((0..n).map(|i| char::from(b'a' + i as u8).to_string()))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, index: Letter) -> &str {
        &self.letters[index as usize]
    }

    pub fn index_of(&self, token: &str) -> Option<Letter> {
        self.letters.iter().position(|t| t == token).map(|i| i as Letter)
    }

    /// True when every token is a single character, in which case words are
    /// printed without separators.
    pub fn is_compact(&self) -> bool {
        self.compact
    }

    /// True when every letter of `w` indexes into this alphabet.
    pub fn admits(&self, w: &Word) -> bool {
        w.letters().iter().all(|&l| (l as usize) < self.len())
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        if self.admits(w) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Parses the text form of a word.
    ///
    /// `""` and `"1"` are the empty word. Compact alphabets read one letter
    /// per character (`"aaab"`); other alphabets read dot-separated tokens
    /// (`"x1.x2.x1"`). Any letter may carry a repetition suffix, so `"a^3b"`
    /// is `aaab`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let err = |reason: String| Error::WordParse { word: text.to_string(), reason };
        let mut out = Vec::new();
        if self.compact {
            let mut chars = text.chars().peekable();
            while let Some(c) = chars.next() {
                if c == '.' {
                    continue;
                }
                let letter =
                    self.index_of(c.encode_utf8(&mut [0; 4])).ok_or_else(|| err(format!("unknown letter {c:?}")))?;
                let mut reps = 1usize;
                if chars.peek() == Some(&'^') {
                    chars.next();
                    let mut digits = String::new();
                    while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                        digits.push(*d);
                        chars.next();
                    }
                    reps = digits.parse().map_err(|_| err("bad exponent".into()))?;
                }
                out.extend(std::iter::repeat_n(letter, reps));
            }
        } else {
            for piece in text.split('.') {
                let (token, reps) = match piece.split_once('^') {
                    Some((t, e)) => (t, e.parse::<usize>().map_err(|_| err("bad exponent".into()))?),
                    None => (piece, 1),
                };
                let letter = self.index_of(token).ok_or_else(|| err(format!("unknown letter {token:?}")))?;
                out.extend(std::iter::repeat_n(letter, reps));
            }
        }
        Ok(Word(out))
    }

    /// Plain text form: concatenated tokens, dot-separated tokens, or `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let sep = if self.compact { "" } else { "." };
        w.letters().iter().map(|&l| self.letter(l)).collect::<Vec<_>>().join(sep)
    }

    /// Like [`render`](Self::render) but powers of a single letter are
    /// written `a^n`.
    pub fn render_power(&self, w: &Word) -> String {
        match w.single_letter_power() {
            Some((l, n)) if n >= 2 => format!("{}^{}", self.letter(l), n),
            _ => self.render(w),
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.letters, &other.letters) || self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}

/// An element of the free monoid: a finite sequence of letter indices.
///
/// Words order canonically: shorter first, then lexicographically by index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `l` repeated `n` times.
    pub fn power(l: Letter, n: usize) -> Self {
        Word(vec![l; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// The factor covered by `span`.
    pub fn factor(&self, span: Span) -> Word {
        Word(self.0[span.start - 1..span.end()].to_vec())
    }

    /// True if `f` occurs in `self` as a consecutive block at 1-based `start`.
    pub fn has_factor_at(&self, f: &Word, start: usize) -> bool {
        start >= 1 && start - 1 + f.len() <= self.len() && self.0[start - 1..start - 1 + f.len()] == f.0[..]
    }

    /// True if `f` occurs anywhere in `self` as a consecutive block.
    pub fn contains_factor(&self, f: &Word) -> bool {
        if f.is_empty() {
            return true;
        }
        f.len() <= self.len() && self.0.windows(f.len()).any(|w| w == f.0)
    }

    /// `Some((letter, n))` when the word is `letter^n` with `n ≥ 1`.
    pub fn single_letter_power(&self) -> Option<(Letter, usize)> {
        let first = *self.0.first()?;
        self.0.iter().all(|&l| l == first).then_some((first, self.len()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// An occurrence position: the factor starting at 1-based `start` with
/// `len` letters. Written as a half-open interval this is `[start, end)`,
/// which as a set of integers is `{start, ..., end - 1}`: one integer per
/// adjacent letter pair inside the factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub fn new(start: usize, len: usize) -> Self {
        Span { start, len }
    }

    /// Position of the last letter of the factor.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }

    /// The interval `[i, j)` in half-open notation.
    pub fn interval(&self) -> (usize, usize) {
        (self.start, self.end())
    }

    /// Inverse of [`interval`](Self::interval).
    pub fn from_interval(i: usize, j: usize) -> Self {
        Span { start: i, len: j - i + 1 }
    }

    fn key(&self) -> (usize, usize) {
        (self.start, self.end())
    }
}

/// One occurrence of a forbidden word: where it is and which member of the
/// set (by index into [`ForbiddenSet::words`]) it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub span: Span,
    pub pattern: usize,
}

impl Ord for Occurrence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.span.key().cmp(&other.span.key()).then(self.pattern.cmp(&other.pattern))
    }
}

impl PartialOrd for Occurrence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite set of forbidden words, each of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenSet {
    alphabet: Alphabet,
    words: Vec<Word>,
    reduced: bool,
}

impl ForbiddenSet {
    pub fn new<I: IntoIterator<Item = Word>>(alphabet: Alphabet, words: I) -> Result<Self> {
        let mut words: Vec<Word> = words.into_iter().collect();
        for w in &words {
            alphabet.check(w)?;
            if w.len() < 2 {
                return Err(Error::ForbiddenTooShort(alphabet.render(w)));
            }
        }
        words.sort();
        words.dedup();
        let reduced = first_non_reduced(&words).is_none();
        Ok(ForbiddenSet { alphabet, words, reduced })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        ForbiddenSet { alphabet, words: Vec::new(), reduced: true }
    }

    /// Parses each entry with [`Alphabet::parse_word`].
    pub fn parse<S: AsRef<str>>(alphabet: &Alphabet, words: &[S]) -> Result<Self> {
        let parsed = words
            .iter()
            .map(|s| {
                let w = alphabet.parse_word(s.as_ref())?;
                if w.len() < 2 {
                    return Err(Error::ForbiddenTooShort(s.as_ref().to_string()));
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        ForbiddenSet::new(alphabet.clone(), parsed)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Members in canonical word order. Occurrence pattern indices refer to
    /// this slice.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// True iff no member occurs as a factor of another member.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    pub fn max_pattern_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub(crate) fn require_reduced(&self) -> Result<()> {
        match first_non_reduced(&self.words) {
            None => Ok(()),
            Some(w) => Err(Error::NotReduced(self.alphabet.render(w))),
        }
    }

    pub fn render(&self) -> Vec<String> {
        self.words.iter().map(|w| self.alphabet.render(w)).collect()
    }
}

fn first_non_reduced(words: &[Word]) -> Option<&Word> {
    words.iter().find(|v| words.iter().any(|u| u != *v && u.len() <= v.len() && v.contains_factor(u)))
}

/// Every occurrence of every member of `f` in `w`, sorted by
/// `(start, end, pattern)`.
pub fn occurrences(w: &Word, f: &ForbiddenSet) -> Result<Vec<Occurrence>> {
    f.alphabet.check(w)?;
    let mut out = Vec::new();
    for start in 1..=w.len() {
        for (pattern, p) in f.words.iter().enumerate() {
            if w.has_factor_at(p, start) {
                out.push(Occurrence { span: Span::new(start, p.len()), pattern });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Number of occurrences of members of `f` in `w`, counted with multiplicity.
pub fn occurrence_count(w: &Word, f: &ForbiddenSet) -> Result<usize> {
    occurrences(w, f).map(|o| o.len())
}

/// True iff no member of `f` occurs in `w`.
pub fn avoids(w: &Word, f: &ForbiddenSet) -> Result<bool> {
    f.alphabet.check(w)?;
    Ok(!f.words.iter().any(|p| w.contains_factor(p)))
}

/// Drops every member that contains another member as a factor. The set of
/// avoiding words is unchanged.
pub fn reduce(f: &ForbiddenSet) -> ForbiddenSet {
    let keep: Vec<Word> = f
        .words
        .iter()
        .filter(|v| !f.words.iter().any(|u| u != *v && u.len() <= v.len() && v.contains_factor(u)))
        .cloned()
        .collect();
    ForbiddenSet { alphabet: f.alphabet.clone(), words: keep, reduced: true }
}

/// Number of words of length at most `max_len`.
pub fn word_count(alphabet: &Alphabet, max_len: usize) -> u128 {
    let k = alphabet.len() as u128;
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k);
    }
    total
}

/// Fails when enumerating all words up to `max_len` would exceed `limit`.
pub fn guard_enumeration(alphabet: &Alphabet, max_len: usize, limit: u128) -> Result<()> {
    let count = word_count(alphabet, max_len);
    if count > limit {
        Err(Error::TooManyWords { count, limit })
    } else {
        Ok(())
    }
}

/// All words of length exactly `n`, in canonical order.
pub fn words_of_length(alphabet: &Alphabet, n: usize) -> WordsOfLength {
    WordsOfLength { k: alphabet.len() as Letter, current: Some(vec![0; n]) }
}

/// All words of length at most `max_len`, in canonical order.
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> impl Iterator<Item = Word> + '_ {
    (0..=max_len).flat_map(move |n| words_of_length(alphabet, n))
}

pub struct WordsOfLength {
    k: Letter,
    current: Option<Vec<Letter>>,
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut i = next.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            next[i] += 1;
            if next[i] < self.k {
                carried_out = false;
                break;
            }
            next[i] = 0;
        }
        if !carried_out {
            self.current = Some(next);
        }
        Some(Word(cur))
    }
}
