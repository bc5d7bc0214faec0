//! The reciprocal of the avoiding-word series.
//!
//! `M(w)` is the coefficient of `w` in `(sum of words avoiding F)^{-1}`. It is
//! always `-1`, `0` or `1`, and this module computes it three independent
//! ways:
//!
//! * inverting the avoiding series directly;
//! * from cluster polynomials, `M(w) = -P_{F,w}(-1)` for `|w| >= 2`;
//! * the salient-word recursion, which decides `M(w) != 0` from the prefixes
//!   of `w` without evaluating any polynomial.
//!
//! It also checks the alternating-sign lemma behind that range bound and the
//! complementation identity for forbidden sets of two-letter words.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::avoidance::avoiding_series;
use crate::clusters::{cluster_gf, cluster_words};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::series::NcSeries;
use crate::words::{occurrences, reduce, words_of_length, Alphabet, ForbiddenSet, Word};

/// Which computation produced an [`MTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Inversion,
    ClusterEval,
    Salient,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Inversion => "inversion",
            Provenance::ClusterEval => "cluster_eval",
            Provenance::Salient => "salient",
        })
    }
}

/// `M(w)` for every word of length at most `max_len`. Only nonzero values
/// are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTable {
    alphabet: Alphabet,
    max_len: usize,
    provenance: Provenance,
    values: BTreeMap<Word, i8>,
}

impl MTable {
    fn from_series(s: &NcSeries, provenance: Provenance) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (w, c) in s.iter() {
            let v = c
                .to_i8()
                .filter(|v| v.abs() <= 1)
                .ok_or_else(|| Error::RangeViolation { word: s.alphabet().render(w), value: c.to_string() })?;
            values.insert(w.clone(), v);
        }
        Ok(MTable { alphabet: s.alphabet().clone(), max_len: s.max_len(), provenance, values })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `M(w)`; zero for words not stored.
    pub fn get(&self, w: &Word) -> i8 {
        self.values.get(w).copied().unwrap_or(0)
    }

    /// Nonzero entries in canonical word order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Word, i8)> {
        self.values.iter().map(|(w, v)| (w, *v))
    }

    /// Words of length at least two with `M(w) != 0`.
    pub fn salient(&self) -> Vec<Word> {
        self.values.keys().filter(|w| w.len() >= 2).cloned().collect()
    }

    /// As a series with integer coefficients.
    pub fn to_series(&self) -> NcSeries {
        let mut s = NcSeries::zero(self.alphabet.clone(), self.max_len);
        for (w, v) in &self.values {
            s.add_term(w.clone(), BigInt::from(*v));
        }
        s
    }

    /// The first word, in canonical order, where two tables differ.
    pub fn first_difference(&self, other: &MTable) -> Option<Word> {
        let l = self.max_len.min(other.max_len);
        self.values
            .keys()
            .chain(other.values.keys())
            .filter(|w| w.len() <= l && self.get(w) != other.get(w))
            .min()
            .cloned()
    }

    /// `[{"word", "M", "provenance"}]` for the nonzero entries.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.values
                .iter()
                .map(|(w, v)| json!({"word": self.alphabet.render(w), "M": v, "provenance": self.provenance}))
                .collect(),
        )
    }

    /// Every word up to `max_len` with its value, zeros included.
    pub fn dense(&self) -> Vec<(Word, i8)> {
        (0..=self.max_len)
            .flat_map(|n| words_of_length(&self.alphabet, n))
            .map(|w| {
                let v = self.get(&w);
                (w, v)
            })
            .collect()
    }
}

/// `M` by inverting the avoiding series. A coefficient outside `{-1, 0, 1}`
/// is reported as [`Error::RangeViolation`].
pub fn m_by_inversion(f: &ForbiddenSet, max_len: usize) -> Result<MTable> {
    let inv = avoiding_series(f, max_len).invert()?;
    MTable::from_series(&inv, Provenance::Inversion)
}

/// `M` from cluster polynomials of the reduced set at `t = -1`.
pub fn m_by_clusters(f: &ForbiddenSet, max_len: usize) -> Result<MTable> {
    let reduced = reduce(f);
    let a = f.alphabet().clone();
    let c = cluster_gf(&reduced, max_len)?.eval_t(&BigInt::from(-1));
    let mut s = NcSeries::one(a.clone(), max_len).sub(&NcSeries::letter_sum(a, max_len))?;
    s = s.sub(&c)?;
    MTable::from_series(&s, Provenance::ClusterEval)
}

/// A word with `M(w) != 0` and `|w| >= 2`, with the prefix that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalientRecord {
    pub word: Word,
    pub sign: i8,
    /// The unique salient candidate; `None` for forbidden words.
    pub witness: Option<Word>,
    /// Prefixes `w[1..m]` with `j <= m < n`, where `[j, n)` is the last
    /// forbidden occurrence of `w`. Empty for forbidden words.
    pub candidates: Vec<Word>,
}

/// The salient words of length at most `max_len`, in canonical order.
///
/// Runs over cluster words by increasing length. A forbidden word is salient
/// with sign `+1`. Otherwise, with `[j, n)` the last forbidden occurrence,
/// `w` is salient exactly when one of its prefixes of length `j..n-1` is
/// salient, and then its sign is the opposite of that prefix's.
pub fn salient_words(f: &ForbiddenSet, max_len: usize) -> Result<Vec<SalientRecord>> {
    let f = reduce(f);
    let mut sign: BTreeMap<Word, i8> = BTreeMap::new();
    let mut out = Vec::new();
    for w in cluster_words(&f, max_len) {
        if f.contains(&w) {
            sign.insert(w.clone(), 1);
            out.push(SalientRecord { word: w, sign: 1, witness: None, candidates: Vec::new() });
            continue;
        }
        let occ = occurrences(&w, &f)?;
        let last = occ.last().expect("cluster words contain an occurrence");
        let n = w.len();
        debug_assert_eq!(last.span.end(), n);
        let candidates: Vec<Word> = (last.span.start..n).map(|m| w.prefix(m)).collect();
        let mut salient = candidates.iter().filter_map(|c| sign.get(c).map(|s| (c, *s)));
        if let (Some((c, s)), None) = (salient.next(), salient.next()) {
            let witness = c.clone();
            sign.insert(w.clone(), -s);
            out.push(SalientRecord { word: w, sign: -s, witness: Some(witness), candidates });
        }
    }
    Ok(out)
}

/// Follows witnesses from `w` back to a forbidden word.
pub fn witness_chain(records: &[SalientRecord], w: &Word) -> Vec<Word> {
    let by_word: BTreeMap<&Word, &SalientRecord> = records.iter().map(|r| (&r.word, r)).collect();
    let mut chain = Vec::new();
    let mut cur = by_word.get(w).copied();
    while let Some(r) = cur {
        chain.push(r.word.clone());
        cur = r.witness.as_ref().and_then(|x| by_word.get(x).copied());
    }
    chain
}

/// `M` from the salient-word recursion plus the base values `M(1) = 1` and
/// `M(a) = -1`.
pub fn m_by_salient(f: &ForbiddenSet, max_len: usize) -> Result<MTable> {
    let a = f.alphabet().clone();
    let mut values = BTreeMap::new();
    values.insert(Word::empty(), 1);
    if max_len >= 1 {
        for l in 0..a.len() {
            values.insert(Word::letter(l as u32), -1);
        }
    }
    for r in salient_words(f, max_len)? {
        values.insert(r.word, r.sign);
    }
    Ok(MTable { alphabet: a, max_len, provenance: Provenance::Salient, values })
}

/// Computes `M` all three ways and fails with the first word, in canonical
/// order, where any two disagree.
pub fn m_all(f: &ForbiddenSet, max_len: usize) -> Result<[MTable; 3]> {
    let tables = [m_by_inversion(f, max_len)?, m_by_clusters(f, max_len)?, m_by_salient(f, max_len)?];
    let worst = [(0, 1), (0, 2), (1, 2)].into_iter().filter_map(|(i, j)| tables[i].first_difference(&tables[j])).min();
    if let Some(w) = worst {
        let detail = tables.iter().map(|t| format!("{}={}", t.provenance(), t.get(&w))).collect::<Vec<_>>().join(", ");
        return Err(Error::PathDisagreement { word: f.alphabet().render(&w), detail });
    }
    Ok(tables)
}

/// Path agreement as a report entry instead of an error.
pub fn path_agreement_check(f: &ForbiddenSet, max_len: usize) -> Check {
    let name = "M by inversion = M by clusters = M by salient recursion, all in {-1,0,1}";
    match m_all(f, max_len) {
        Ok(_) => Check::pass(name),
        Err(e) => Check::fail(
            name,
            crate::report::Discrepancy { word: String::new(), lhs: e.to_string(), rhs: String::new() },
        ),
    }
}

/// The sequence `u_1 = -1`, `u_k = -(u_{r_k} + ... + u_{k-1})`.
/// `r` holds `r_2, ..., r_m` (1-based).
pub fn sign_sequence(r: &[usize]) -> Result<Vec<i64>> {
    let mut u = vec![-1i64];
    for (i, &rk) in r.iter().enumerate() {
        let k = i + 2;
        if rk < 1 || rk > k - 1 {
            return Err(Error::SignSequence(format!("r_{k} = {rk} is outside [1, {}]", k - 1)));
        }
        let sum: i64 = u[rk - 1..k - 1].iter().sum();
        u.push(-sum);
    }
    Ok(u)
}

/// What [`check_sign_lemma`] found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignLemmaOutcome {
    /// Nonzero entries read `-1, 1, -1, 1, ...`.
    pub alternates: bool,
    pub r_weakly_increasing: bool,
    /// With weakly increasing `r`: every defining sum has at most two
    /// nonzero terms. `None` when `r` is not weakly increasing.
    pub at_most_two_nonzero: Option<bool>,
}

impl SignLemmaOutcome {
    pub fn holds(&self) -> bool {
        self.alternates && self.at_most_two_nonzero != Some(false)
    }
}

/// Validates that `u` follows the recurrence for `r` and checks the
/// alternation of its nonzero entries, plus the two-term bound when `r` is
/// weakly increasing.
pub fn check_sign_lemma(u: &[i64], r: &[usize]) -> Result<SignLemmaOutcome> {
    if u.is_empty() {
        return Err(Error::SignSequence("empty sequence".into()));
    }
    if r.len() + 1 != u.len() {
        return Err(Error::SignSequence(format!(
            "{} values need {} indices r_k, got {}",
            u.len(),
            u.len() - 1,
            r.len()
        )));
    }
    let expected = sign_sequence(r)?;
    if let Some(k) = (0..u.len()).find(|&k| u[k] != expected[k]) {
        return Err(Error::SignSequence(format!("u_{} = {} but the recurrence gives {}", k + 1, u[k], expected[k])));
    }
    let mut want = -1;
    let mut alternates = true;
    for &x in u.iter().filter(|&&x| x != 0) {
        if x != want {
            alternates = false;
            break;
        }
        want = -want;
    }
    let r_weakly_increasing = r.windows(2).all(|p| p[0] <= p[1]);
    let at_most_two_nonzero = r_weakly_increasing.then(|| {
        r.iter().enumerate().all(|(i, &rk)| {
            let k = i + 2;
            u[rk - 1..k - 1].iter().filter(|&&x| x != 0).count() <= 2
        })
    });
    Ok(SignLemmaOutcome { alternates, r_weakly_increasing, at_most_two_nonzero })
}

/// The two-letter words not in `f`.
pub fn complement_in_pairs(f: &ForbiddenSet) -> Result<ForbiddenSet> {
    require_pairs(f)?;
    let pairs = words_of_length(f.alphabet(), 2).filter(|w| !f.contains(w));
    ForbiddenSet::new(f.alphabet().clone(), pairs)
}

fn require_pairs(f: &ForbiddenSet) -> Result<()> {
    match f.words().iter().find(|w| w.len() != 2) {
        Some(w) => Err(Error::NotLengthTwo(f.alphabet().render(w))),
        None => Ok(()),
    }
}

/// For a set of two-letter words: the avoiding series of `F` equals the
/// inverse of `sum (-1)^{|w|} w` over words avoiding the complement of `F`
/// in the two-letter words.
pub fn csv_check(f: &ForbiddenSet, max_len: usize) -> Result<Report> {
    require_pairs(f)?;
    let complement = complement_in_pairs(f)?;
    let lhs = avoiding_series(f, max_len);
    let mut alternating = NcSeries::zero(f.alphabet().clone(), max_len);
    for (w, _) in avoiding_series(&complement, max_len).iter() {
        let sign = if w.len() % 2 == 0 { 1 } else { -1 };
        alternating.add_term(w.clone(), BigInt::from(sign));
    }
    let rhs = alternating.invert()?;
    let name = format!(
        "avoiding series of {{{}}} = (sum (-1)^|w| w over words avoiding the complement)^-1",
        f.render().join(",")
    );
    Ok(Report::new(vec![Check::series(name, &lhs, &rhs)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> (Alphabet, ForbiddenSet) {
        let a = Alphabet::lowercase(1).unwrap();
        let f = ForbiddenSet::parse(&a, &["aaa"]).unwrap();
        (a, f)
    }

    #[test]
    fn inversion_for_a3() {
        let (a, f) = a3();
        let m = m_by_inversion(&f, 6).unwrap();
        let got: Vec<i8> = (0..=6).map(|n| m.get(&Word::power(0, n))).collect();
        assert_eq!(got, vec![1, -1, 0, 1, -1, 0, 1]);
        assert_eq!(m.provenance(), Provenance::Inversion);
        assert_eq!(m.to_series().render(), "1 - a + a^3 - a^4 + a^6");
        let _ = a;
    }

    #[test]
    fn inversion_without_forbidden_words() {
        let a = Alphabet::lowercase(2).unwrap();
        let m = m_by_inversion(&ForbiddenSet::empty(a.clone()), 5).unwrap();
        assert_eq!(m.to_series().render(), "1 - a - b");
    }

    #[test]
    fn clusters_path_examples() {
        let (_, f) = a3();
        let m = m_by_clusters(&f, 6).unwrap();
        assert_eq!(m.get(&Word::power(0, 3)), 1);
        assert_eq!(m.get(&Word::power(0, 5)), 0);
        assert_eq!(m.get(&Word::power(0, 6)), 1);
    }

    #[test]
    fn salient_words_for_a3() {
        let (a, f) = a3();
        let recs = salient_words(&f, 10).unwrap();
        let got: Vec<(String, i8)> = recs.iter().map(|r| (a.render_power(&r.word), r.sign)).collect();
        let expected: Vec<(String, i8)> =
            [(3, 1), (4, -1), (6, 1), (7, -1), (9, 1), (10, -1)].iter().map(|&(n, s)| (format!("a^{n}"), s)).collect();
        assert_eq!(got, expected);
        let a6 = recs.iter().find(|r| r.word.len() == 6).unwrap();
        assert_eq!(a6.candidates, vec![Word::power(0, 4), Word::power(0, 5)]);
        assert_eq!(a6.witness, Some(Word::power(0, 4)));
        let chain: Vec<usize> = witness_chain(&recs, &Word::power(0, 10)).iter().map(Word::len).collect();
        assert_eq!(chain, vec![10, 9, 7, 6, 4, 3]);
    }

    #[test]
    fn forbidden_words_are_salient_with_plus_one() {
        let a = Alphabet::lowercase(3).unwrap();
        let f = ForbiddenSet::parse(&a, &["abc", "bcc", "ca"]).unwrap();
        let recs = salient_words(&f, 6).unwrap();
        for w in f.words() {
            let r = recs.iter().find(|r| &r.word == w).unwrap();
            assert_eq!(r.sign, 1);
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn three_paths_agree() {
        let a = Alphabet::lowercase(3).unwrap();
        for fw in [&["abc", "bcc"][..], &["aa", "aab"], &["ab", "ba", "cc"], &["aba", "bab"]] {
            let f = ForbiddenSet::parse(&a, fw).unwrap();
            m_all(&f, 7).unwrap();
        }
    }

    #[test]
    fn disagreement_is_reported_with_the_word() {
        let (_, f) = a3();
        let good = m_by_inversion(&f, 5).unwrap();
        let mut bad = good.clone();
        bad.values.insert(Word::power(0, 5), 1);
        assert_eq!(good.first_difference(&bad), Some(Word::power(0, 5)));
    }

    #[test]
    fn range_violation_is_detected() {
        let a = Alphabet::lowercase(1).unwrap();
        let s = NcSeries::monomial(a, 2, Word::power(0, 2), BigInt::from(2));
        assert!(matches!(MTable::from_series(&s, Provenance::Inversion), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn sign_lemma_on_a6_trace() {
        let u = vec![-1, 1, 0, -1];
        let out = check_sign_lemma(&u, &[1, 1, 2]).unwrap();
        assert!(out.alternates);
        assert_eq!(out.at_most_two_nonzero, Some(true));
        assert!(check_sign_lemma(&[-1], &[]).unwrap().holds());
    }

    #[test]
    fn sign_lemma_input_validation() {
        assert!(check_sign_lemma(&[], &[]).is_err());
        assert!(check_sign_lemma(&[1], &[]).is_err());
        assert!(check_sign_lemma(&[-1, 1], &[]).is_err());
        assert!(check_sign_lemma(&[-1, 0], &[1]).is_err());
        assert!(check_sign_lemma(&[-1, 1], &[2]).is_err());
    }

    #[test]
    fn sign_lemma_without_monotone_r() {
        let r = [1, 2, 1];
        let u = sign_sequence(&r).unwrap();
        let out = check_sign_lemma(&u, &r).unwrap();
        assert!(!out.r_weakly_increasing);
        assert_eq!(out.at_most_two_nonzero, None);
        assert!(out.holds());
    }

    #[test]
    fn csv_examples() {
        let a = Alphabet::lowercase(2).unwrap();
        let all = ForbiddenSet::parse(&a, &["aa", "ab", "ba", "bb"]).unwrap();
        assert!(csv_check(&all, 6).unwrap().passed());
        assert_eq!(avoiding_series(&all, 6).render(), "1 + a + b");
        for fw in [&["ab", "ba"][..], &["aa"]] {
            let f = ForbiddenSet::parse(&a, fw).unwrap();
            assert!(csv_check(&f, 10).unwrap().passed());
        }
        let bad = ForbiddenSet::parse(&a, &["aab"]).unwrap();
        assert!(matches!(csv_check(&bad, 4), Err(Error::NotLengthTwo(_))));
    }
}
