//! Counting and listing words that avoid a forbidden set, and checking the
//! cluster generating function against direct enumeration.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::automaton::{AvoidanceAutomaton, PatternAutomaton};
use crate::clusters::cluster_gf;
use crate::error::Result;
use crate::poly::IntPoly;
use crate::report::{Check, Report};
use crate::series::{Coefficient, NcPolySeries, NcSeries, Series};
use crate::words::{all_words, occurrence_count, ForbiddenSet, Letter, Word};

/// `c[n]` is the number of words of length `n` avoiding `f`, for
/// `0 <= n <= max_len`.
pub fn count_avoiding(f: &ForbiddenSet, max_len: usize) -> Vec<BigInt> {
    let aut = AvoidanceAutomaton::new(f);
    let k = aut.alphabet_len();
    let mut state = vec![BigInt::zero(); aut.live_count()];
    state[AvoidanceAutomaton::START] = BigInt::one();
    let mut out = Vec::with_capacity(max_len + 1);
    for n in 0..=max_len {
        out.push(state.iter().sum());
        if n == max_len {
            break;
        }
        let mut next = vec![BigInt::zero(); state.len()];
        for (s, c) in state.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for l in 0..k {
                if let Some(t) = aut.step(s, l as Letter) {
                    next[t] += c;
                }
            }
        }
        state = next;
    }
    out
}

/// The sum of all avoiding words of length at most `max_len`.
pub fn avoiding_series(f: &ForbiddenSet, max_len: usize) -> NcSeries {
    let aut = AvoidanceAutomaton::new(f);
    let mut s = NcSeries::zero(f.alphabet().clone(), max_len);
    let mut stack = vec![(Word::empty(), AvoidanceAutomaton::START)];
    while let Some((w, state)) = stack.pop() {
        if w.len() < max_len {
            for l in 0..aut.alphabet_len() as Letter {
                if let Some(t) = aut.step(state, l) {
                    let mut v = w.clone();
                    v.push(l);
                    stack.push((v, t));
                }
            }
        }
        s.add_term(w, BigInt::one());
    }
    s
}

/// The sum over all words `w` of length at most `max_len` of
/// `t^{s_F(w)} w`, where `s_F(w)` counts occurrences with multiplicity.
pub fn occurrence_gf(f: &ForbiddenSet, max_len: usize) -> NcPolySeries {
    let matcher = PatternAutomaton::new(f);
    let mut s = NcPolySeries::zero(f.alphabet().clone(), max_len);
    let mut stack = vec![(Word::empty(), PatternAutomaton::ROOT, 0usize)];
    while let Some((w, state, count)) = stack.pop() {
        if w.len() < max_len {
            for l in 0..matcher.alphabet_len() as Letter {
                let t = matcher.step(state, l);
                let mut v = w.clone();
                v.push(l);
                stack.push((v, t, count + matcher.hits(t)));
            }
        }
        s.add_term(w, IntPoly::monomial(1, count));
    }
    s
}

/// [`occurrence_gf`] by rescanning every word for occurrences.
pub fn occurrence_gf_brute_force(f: &ForbiddenSet, max_len: usize) -> Result<NcPolySeries> {
    let mut s = NcPolySeries::zero(f.alphabet().clone(), max_len);
    for w in all_words(f.alphabet(), max_len) {
        let k = occurrence_count(&w, f)?;
        s.add_term(w, IntPoly::monomial(1, k));
    }
    Ok(s)
}

/// `1 - (sum of letters) - c`.
pub(crate) fn one_minus_letters_minus<C: Coefficient>(c: &Series<C>) -> Result<Series<C>> {
    let a = c.alphabet().clone();
    let l = c.max_len();
    Series::one(a.clone(), l).sub(&Series::letter_sum(a, l))?.sub(c)
}

/// Checks the cluster theorem up to words of length `max_len`:
///
/// * `sum (1+t)^{s_F(w)} w = (1 - sum a - C_F(t))^{-1}`, as polynomials in `t`;
/// * `sum t^{s_F(w)} w = (1 - sum a - C_F(t-1))^{-1}`;
/// * `sum_{w avoiding F} w = (1 - sum a - C_F(-1))^{-1}`.
///
/// Failures are reported, not raised.
pub fn verify_cluster_theorem(f: &ForbiddenSet, max_len: usize) -> Result<Report> {
    let c = cluster_gf(f, max_len)?;
    let occ = occurrence_gf(f, max_len);

    let rhs_shifted = one_minus_letters_minus(&c)?.invert()?;
    let lhs_shifted = occ.shift_t(&BigInt::one());
    let rhs_plain = one_minus_letters_minus(&c.shift_t(&BigInt::from(-1)))?.invert()?;
    let rhs_avoid = one_minus_letters_minus(&c.eval_t(&BigInt::from(-1)))?.invert()?;
    let lhs_avoid = avoiding_series(f, max_len);

    Ok(Report::new(vec![
        Check::series("sum (1+t)^s(w) w = (1 - sum a - C(t))^-1", &lhs_shifted, &rhs_shifted),
        Check::series("sum t^s(w) w = (1 - sum a - C(t-1))^-1", &occ, &rhs_plain),
        Check::series("sum over avoiding w = (1 - sum a - C(-1))^-1", &lhs_avoid, &rhs_avoid),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{avoids, Alphabet};

    fn brute_counts(f: &ForbiddenSet, max_len: usize) -> Vec<u64> {
        let mut c = vec![0u64; max_len + 1];
        for w in all_words(f.alphabet(), max_len) {
            if avoids(&w, f).unwrap() {
                c[w.len()] += 1;
            }
        }
        c
    }

    #[test]
    fn fibonacci_counts_for_aa() {
        let a = Alphabet::lowercase(2).unwrap();
        let f = ForbiddenSet::parse(&a, &["aa"]).unwrap();
        let expected: Vec<BigInt> = brute_counts(&f, 5).into_iter().map(Into::into).collect();
        assert_eq!(expected, [1, 2, 3, 5, 8, 13].map(BigInt::from).to_vec());
        assert_eq!(count_avoiding(&f, 5), expected);
    }

    #[test]
    fn counts_without_forbidden_words() {
        let a = Alphabet::lowercase(3).unwrap();
        let c = count_avoiding(&ForbiddenSet::empty(a), 4);
        assert_eq!(c, [1, 3, 9, 27, 81].map(BigInt::from).to_vec());
    }

    #[test]
    fn counts_for_a3_on_one_letter() {
        let a = Alphabet::lowercase(1).unwrap();
        let f = ForbiddenSet::parse(&a, &["aaa"]).unwrap();
        assert_eq!(count_avoiding(&f, 4), [1, 1, 1, 0, 0].map(BigInt::from).to_vec());
        assert_eq!(avoiding_series(&f, 6).render(), "1 + a + a^2");
    }

    #[test]
    fn avoiding_series_without_forbidden_words() {
        let a = Alphabet::lowercase(2).unwrap();
        let s = avoiding_series(&ForbiddenSet::empty(a), 2);
        assert_eq!(s.render(), "1 + a + b + a^2 + ab + ba + b^2");
    }

    #[test]
    fn avoiding_series_sums_match_counts() {
        let a = Alphabet::lowercase(3).unwrap();
        let f = ForbiddenSet::parse(&a, &["ab", "cca", "bb"]).unwrap();
        let s = avoiding_series(&f, 6);
        let counts = count_avoiding(&f, 6);
        for (n, part) in s.by_length().iter().enumerate() {
            let sum: BigInt = part.iter().map(|(_, c)| (*c).clone()).sum();
            assert_eq!(sum, counts[n]);
        }
    }

    #[test]
    fn occurrence_gf_examples() {
        let a = Alphabet::lowercase(1).unwrap();
        let f = ForbiddenSet::parse(&a, &["aaa"]).unwrap();
        assert_eq!(occurrence_gf(&f, 5).render(), "1 + a + a^2 + t a^3 + t^2 a^4 + t^3 a^5");

        let f = ForbiddenSet::parse(&a, &["aa"]).unwrap();
        let g = occurrence_gf(&f, 4);
        assert_eq!(g.coeff(&a.parse_word("a^4").unwrap()), IntPoly::monomial(1, 3));
    }

    #[test]
    fn occurrence_gf_at_zero_is_avoiding_series() {
        let a = Alphabet::lowercase(2).unwrap();
        let f = ForbiddenSet::parse(&a, &["aba", "bb"]).unwrap();
        assert_eq!(occurrence_gf(&f, 7).eval_t(&BigInt::zero()), avoiding_series(&f, 7));
        assert_eq!(occurrence_gf(&f, 7), occurrence_gf_brute_force(&f, 7).unwrap());
    }

    #[test]
    fn cluster_theorem_examples() {
        let a = Alphabet::lowercase(3).unwrap();
        let f = ForbiddenSet::parse(&a, &["abc", "bcc"]).unwrap();
        let r = verify_cluster_theorem(&f, 6).unwrap();
        assert!(r.passed(), "{r}");

        let one = Alphabet::lowercase(1).unwrap();
        let f = ForbiddenSet::parse(&one, &["aaa"]).unwrap();
        assert!(verify_cluster_theorem(&f, 10).unwrap().passed());

        let f = ForbiddenSet::empty(Alphabet::lowercase(2).unwrap());
        assert!(verify_cluster_theorem(&f, 4).unwrap().passed());
    }

    #[test]
    fn cluster_gf_of_a3_has_closed_form() {
        // C(t) = t a^3 (1 - t(a + a^2))^{-1}
        let a = Alphabet::lowercase(1).unwrap();
        let f = ForbiddenSet::parse(&a, &["aaa"]).unwrap();
        let l = 10;
        let w = |s: &str| a.parse_word(s).unwrap();
        let inner = NcPolySeries::from_terms(
            a.clone(),
            l,
            [(Word::empty(), IntPoly::one()), (w("a"), -IntPoly::t()), (w("aa"), -IntPoly::t())],
        )
        .unwrap()
        .invert()
        .unwrap();
        let closed = NcPolySeries::monomial(a.clone(), l, w("aaa"), IntPoly::t()).mul(&inner).unwrap();
        assert_eq!(cluster_gf(&f, l).unwrap(), closed);
    }
}
