//! Noncommutative formal power series in the letters of an alphabet,
//! truncated by word length.
//!
//! A [`Series`] stores only nonzero coefficients, keyed by [`Word`] in
//! canonical order. Every operation is exact and degree-by-degree: the
//! coefficient of a word of length `n` in a product or inverse depends only
//! on coefficients of words of length at most `n`, so truncation at `L`
//! commutes with the ring operations.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::words::{Alphabet, Word};

/// A commutative coefficient ring.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, when this element is a unit.
    fn unit_inverse(&self) -> Option<Self>;

    /// Text form used inside rendered series; `None` means the coefficient
    /// prints as a bare sign (it is `1` or `-1`).
    fn render_term(&self) -> (bool, Option<String>);

    fn to_json(&self) -> (&'static str, Value);
}

impl Coefficient for BigInt {
    fn unit_inverse(&self) -> Option<Self> {
        self.abs().is_one().then(|| self.clone())
    }

    fn render_term(&self) -> (bool, Option<String>) {
        let neg = self.is_negative();
        let mag = self.abs();
        (neg, (!mag.is_one()).then(|| mag.to_string()))
    }

    fn to_json(&self) -> (&'static str, Value) {
        ("coeff", bigint_json(self))
    }
}

impl Coefficient for IntPoly {
    fn unit_inverse(&self) -> Option<Self> {
        IntPoly::unit_inverse(self)
    }

    fn render_term(&self) -> (bool, Option<String>) {
        let nonzero: Vec<_> = self.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if let [(k, c)] = nonzero[..] {
            let neg = c.is_negative();
            let mag = IntPoly::monomial(c.abs(), k);
            return if mag.is_one() { (neg, None) } else { (neg, Some(mag.to_string())) };
        }
        (false, Some(format!("({self})")))
    }

    fn to_json(&self) -> (&'static str, Value) {
        ("poly", Value::Array(self.coeffs().iter().map(bigint_json).collect()))
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
pub fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

/// A series truncated at words of length `max_len`.
#[derive(Clone)]
pub struct Series<C> {
    alphabet: Alphabet,
    max_len: usize,
    terms: BTreeMap<Word, C>,
}

/// Series with exact integer coefficients.
pub type NcSeries = Series<BigInt>;

/// Series with coefficients in `Z[t]`.
pub type NcPolySeries = Series<IntPoly>;

impl<C: Coefficient> Series<C> {
    pub fn zero(alphabet: Alphabet, max_len: usize) -> Self {
        Series { alphabet, max_len, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: Alphabet, max_len: usize) -> Self {
        Series::monomial(alphabet, max_len, Word::empty(), C::one())
    }

    pub fn monomial(alphabet: Alphabet, max_len: usize, w: Word, c: C) -> Self {
        let mut s = Series::zero(alphabet, max_len);
        s.add_term(w, c);
        s
    }

    /// The sum of all letters.
    pub fn letter_sum(alphabet: Alphabet, max_len: usize) -> Self {
        let mut s = Series::zero(alphabet.clone(), max_len);
        for l in 0..alphabet.len() {
            s.add_term(Word::letter(l as u32), C::one());
        }
        s
    }

    /// Builds a series from `(word, coefficient)` pairs, summing repeats and
    /// dropping words longer than `max_len`.
    pub fn from_terms<I>(alphabet: Alphabet, max_len: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C)>,
    {
        let mut s = Series::zero(alphabet, max_len);
        for (w, c) in terms {
            s.alphabet.check(&w)?;
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// Adds `c` to the coefficient of `w`. Words beyond the truncation are
    /// ignored.
    pub fn add_term(&mut self, w: Word, c: C) {
        if w.len() > self.max_len || c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    /// Nonzero terms in canonical word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Terms grouped by word length, index `n` holding the degree-`n` part.
    pub fn by_length(&self) -> Vec<Vec<(&Word, &C)>> {
        let mut out = vec![Vec::new(); self.max_len + 1];
        for (w, c) in &self.terms {
            out[w.len()].push((w, c));
        }
        out
    }

    pub fn truncate(&self, max_len: usize) -> Self {
        let max_len = max_len.min(self.max_len);
        Series {
            alphabet: self.alphabet.clone(),
            max_len,
            terms: self.terms.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    fn common(&self, other: &Self) -> Result<usize> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.max_len.min(other.max_len))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let l = self.common(other)?;
        let mut out = self.truncate(l);
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    /// Applies `f` to every coefficient and renormalizes.
    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut out = Series::zero(self.alphabet.clone(), self.max_len);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Cauchy product under concatenation: the coefficient of `v` is the sum
    /// of `S(p) T(q)` over all factorizations `v = pq`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let l = self.common(other)?;
        let left = self.by_length();
        let right = other.by_length();
        let mut acc: BTreeMap<Word, C> = BTreeMap::new();
        for (i, lp) in left.iter().enumerate().take(l + 1) {
            for rq in right.iter().take(l + 1 - i) {
                for (p, a) in lp {
                    for (q, b) in rq {
                        accumulate(&mut acc, p.concat(q), (*a).clone() * (*b).clone());
                    }
                }
            }
        }
        Ok(self.with_terms(l, acc))
    }

    /// Two-sided inverse up to the truncation, by solving `S T = 1` one
    /// length at a time: `T_0 = S(1)^{-1}` and
    /// `T_n = -S(1)^{-1} * sum_{k=1..n} S_k T_{n-k}`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeff(&Word::empty());
        let inv0 = c0.unit_inverse().ok_or(Error::NonUnitConstant)?;
        let parts = self.by_length();
        let mut layers: Vec<Vec<(Word, C)>> = vec![vec![(Word::empty(), inv0.clone())]];
        for n in 1..=self.max_len {
            let mut acc: BTreeMap<Word, C> = BTreeMap::new();
            for k in 1..=n {
                for (p, a) in &parts[k] {
                    for (q, b) in &layers[n - k] {
                        accumulate(&mut acc, p.concat(q), (*a).clone() * b.clone());
                    }
                }
            }
            let layer = acc.into_iter().map(|(w, c)| (w, -(inv0.clone() * c))).filter(|(_, c)| !c.is_zero()).collect();
            layers.push(layer);
        }
        let mut out = Series::zero(self.alphabet.clone(), self.max_len);
        for (w, c) in layers.into_iter().flatten() {
            out.terms.insert(w, c);
        }
        Ok(out)
    }

    fn with_terms(&self, max_len: usize, acc: BTreeMap<Word, C>) -> Self {
        let mut out = Series::zero(self.alphabet.clone(), max_len);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// First word, in canonical order, at which the two series differ at
    /// their common truncation.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Word>> {
        let l = self.common(other)?;
        let keys: std::collections::BTreeSet<&Word> =
            self.terms.keys().chain(other.terms.keys()).filter(|w| w.len() <= l).collect();
        Ok(keys.into_iter().find(|w| self.coeff(w) != other.coeff(w)).cloned())
    }

    /// Text form in canonical word order, e.g. `1 - a + a^3 - a^4`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (neg, body) = c.render_term();
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sign);
            let word = self.alphabet.render_power(w);
            match (body, w.is_empty()) {
                (None, _) => out.push_str(&word),
                (Some(b), true) => out.push_str(&b),
                (Some(b), false) => {
                    out.push_str(&b);
                    out.push(' ');
                    out.push_str(&word);
                }
            }
        }
        out
    }

    /// `[{"word": ..., "coeff": n}]` or `[{"word": ..., "poly": [c0, c1, ...]}]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    let (key, val) = c.to_json();
                    let mut obj = serde_json::Map::new();
                    obj.insert("word".into(), json!(self.alphabet.render(w)));
                    obj.insert(key.into(), val);
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn accumulate<C: Coefficient>(acc: &mut BTreeMap<Word, C>, w: Word, c: C) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(old) => *old = old.clone() + c,
        None => {
            acc.insert(w, c);
        }
    }
}

impl NcPolySeries {
    /// Substitutes the integer `t0` for `t` in every coefficient.
    pub fn eval_t(&self, t0: &BigInt) -> NcSeries {
        self.map(|p| p.eval(t0))
    }

    /// Substitutes `t + shift` for `t` in every coefficient.
    pub fn shift_t(&self, shift: &BigInt) -> NcPolySeries {
        self.map(|p| p.shift(shift))
    }
}

impl NcSeries {
    /// Embeds integer coefficients as constant polynomials.
    pub fn to_poly(&self) -> NcPolySeries {
        self.map(|c| IntPoly::constant(c.clone()))
    }
}

/// Equality at the common truncation.
impl<C: Coefficient> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }
}

impl<C: Coefficient> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coefficient> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[L={}]({})", self.max_len, self.render())
    }
}
