mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use factor_avoid::automaton::AvoidanceAutomaton;
use factor_avoid::avoidance::{count_avoiding, verify_cluster_theorem};
use factor_avoid::clusters::{
    cluster_gf, cluster_gf_brute_force, cluster_polynomial, cluster_words, concat_segments, enumerate_clusters,
    factor_marked_word, MarkedWord, Method, Segment,
};
use factor_avoid::lattice::{
    build_lattice, interval_to_span, mobius_crosscut, mobius_recursive, mobius_via_cluster, IntervalFamily,
};
use factor_avoid::reciprocal::{complement_in_pairs, csv_check, m_all, salient_words};
use factor_avoid::series::NcPolySeries;
use factor_avoid::sweep;
use factor_avoid::words::{all_words, avoids, occurrences, reduce, words_of_length, Span};
use factor_avoid::{Alphabet, ForbiddenSet, Word};

/// Every set of at most `max_size` distinct words with lengths in
/// `2..=max_pattern_len` over `k` letters.
fn all_sets(k: usize, max_pattern_len: usize, max_size: usize, mut visit: impl FnMut(ForbiddenSet)) {
    let a = Alphabet::lowercase(k).unwrap();
    let pool: Vec<Word> = (2..=max_pattern_len).flat_map(|n| words_of_length(&a, n)).collect();
    fn go(
        a: &Alphabet,
        pool: &[Word],
        from: usize,
        left: usize,
        cur: &mut Vec<Word>,
        visit: &mut dyn FnMut(ForbiddenSet),
    ) {
        if !cur.is_empty() {
            visit(ForbiddenSet::new(a.clone(), cur.iter().cloned()).unwrap());
        }
        if left == 0 {
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i].clone());
            go(a, pool, i + 1, left - 1, cur, visit);
            cur.pop();
        }
    }
    go(&a, &pool, 0, max_size, &mut Vec::new(), &mut visit);
}

fn raw(f: &ForbiddenSet) -> Vec<Vec<u32>> {
    f.words().iter().map(|w| w.letters().to_vec()).collect()
}

fn name(f: &ForbiddenSet) -> String {
    format!("{{{}}}", f.render().join(","))
}

#[test]
fn subset_and_recurrence_agree_on_reduced_sets() {
    let mut sets = 0;
    let mut words = 0;
    for k in 1..=3 {
        all_sets(k, 3, 3, |f| {
            if !f.is_reduced() {
                return;
            }
            sets += 1;
            for w in cluster_words(&f, 10) {
                let s = cluster_polynomial(&w, &f, Method::Subset).unwrap();
                let r = cluster_polynomial(&w, &f, Method::Recurrence).unwrap();
                assert_eq!(s, r, "{} on {:?}", name(&f), w);
                assert!(s.coeffs().iter().all(|c| c > &BigInt::zero() || c.is_zero()));
                assert!(s.degree().unwrap_or(0) <= occurrences(&w, &f).unwrap().len());
                words += 1;
            }
        });
    }
    assert!(sets > 1000 && words > 10_000, "{sets} sets, {words} words");
}

#[test]
fn cluster_polynomials_match_oracle() {
    for k in 1..=2 {
        all_sets(k, 3, 2, |f| {
            let fr = raw(&f);
            for w in all_words(f.alphabet(), 7) {
                let lib = cluster_polynomial(&w, &f, Method::Subset).unwrap().to_string();
                let oracle = common::poly_text(&common::cluster_poly(w.letters(), &fr));
                assert_eq!(lib, oracle, "{} on {:?}", name(&f), w);
            }
        });
    }
}

fn marked_word_sets() -> Vec<ForbiddenSet> {
    let a = Alphabet::lowercase(2).unwrap();
    [&["aa", "aab"][..], &["aba", "bb"], &["aaa"], &["ab", "ba"], &["aab", "abaa"]]
        .iter()
        .map(|ws| ForbiddenSet::parse(&a, ws).unwrap())
        .collect()
}

#[test]
fn marked_words_factor_uniquely() {
    for f in marked_word_sets() {
        for w in all_words(f.alphabet(), 8) {
            let occ = occurrences(&w, &f).unwrap();
            for mask in 0u32..(1 << occ.len()) {
                let marks: Vec<_> = (0..occ.len()).filter(|i| mask >> i & 1 == 1).map(|i| occ[i]).collect();
                let mw = MarkedWord::new(w.clone(), marks, &f).unwrap();
                let segs = factor_marked_word(&mw);
                assert_eq!(concat_segments(&segs), mw);
                for s in &segs {
                    match s {
                        Segment::Letter(_) => {}
                        Segment::Cluster(c) => assert!(c.is_cluster(), "{c:?}"),
                    }
                }
            }
        }
    }
}

#[test]
fn marked_word_counts_match_product_form() {
    // coefficient of t^k w in (1 - sum a - C(t))^-1 counts marked words on w
    // with k marks, which is binomial(s(w), k)
    for f in marked_word_sets() {
        let l = 8;
        let a = f.alphabet().clone();
        let rhs = NcPolySeries::one(a.clone(), l)
            .sub(&NcPolySeries::letter_sum(a, l))
            .unwrap()
            .sub(&cluster_gf(&f, l).unwrap())
            .unwrap()
            .invert()
            .unwrap();
        for w in all_words(f.alphabet(), l) {
            let s = occurrences(&w, &f).unwrap().len();
            let mut by_size = vec![0i64; s + 1];
            for mask in 0u32..(1 << s) {
                by_size[mask.count_ones() as usize] += 1;
            }
            let coeffs = rhs.coeff(&w);
            for (k, &n) in by_size.iter().enumerate() {
                assert_eq!(coeffs.coeff(k).to_i64().unwrap(), n, "{} {:?} t^{k}", name(&f), w);
            }
            assert_eq!(coeffs.degree().unwrap_or(0), s);
        }
    }
}

#[test]
fn clusters_rescan_to_supersets() {
    for f in marked_word_sets() {
        for w in cluster_words(&f, 9) {
            let occ: BTreeSet<_> = occurrences(&w, &f).unwrap().into_iter().collect();
            for marks in enumerate_clusters(&w, &f).unwrap() {
                assert!(marks.iter().all(|m| occ.contains(m)));
            }
        }
    }
}

#[test]
fn automaton_agrees_with_scan() {
    let mut rng = sweep::rng(11);
    for k in 1..=3 {
        for _ in 0..12 {
            let f = sweep::random_reduced_set(&mut rng, k, 3, 4);
            let aut = AvoidanceAutomaton::new(&f);
            let fr = raw(&f);
            for w in all_words(f.alphabet(), 8) {
                assert_eq!(aut.accepts(&w), common::avoids(w.letters(), &fr), "{} {:?}", name(&f), w);
            }
        }
    }
}

#[test]
fn counts_follow_the_transfer_matrix() {
    let mut rng = sweep::rng(12);
    for k in 1..=3 {
        for _ in 0..10 {
            let f = sweep::random_reduced_set(&mut rng, k, 3, 4);
            let aut = AvoidanceAutomaton::new(&f);
            let m = aut.transfer_matrix();
            let mut v = vec![0u64; aut.live_count()];
            v[AvoidanceAutomaton::START] = 1;
            let counts = count_avoiding(&f, 14);
            for c in counts {
                assert_eq!(c, BigInt::from(v.iter().sum::<u64>()), "{}", name(&f));
                let mut next = vec![0u64; v.len()];
                for (s, row) in m.iter().enumerate() {
                    for (t, &n) in row.iter().enumerate() {
                        next[t] += v[s] * n;
                    }
                }
                v = next;
            }
        }
    }
}

#[test]
fn reduction_preserves_avoidance() {
    for k in 1..=3 {
        let mut rng = sweep::rng(13 + k as u64);
        let a = Alphabet::lowercase(k).unwrap();
        for _ in 0..15 {
            let words: Vec<Word> = (0..4)
                .map(|_| {
                    let len = rand::Rng::gen_range(&mut rng, 2..=4);
                    Word::new((0..len).map(|_| rand::Rng::gen_range(&mut rng, 0..k as u32)).collect())
                })
                .collect();
            let f = ForbiddenSet::new(a.clone(), words).unwrap();
            let r = reduce(&f);
            for w in all_words(&a, 6) {
                assert_eq!(avoids(&w, &f).unwrap(), avoids(&w, &r).unwrap());
            }
        }
    }
}

#[test]
fn cluster_gf_matches_brute_force() {
    for k in 1..=2 {
        all_sets(k, 3, 2, |f| {
            assert_eq!(cluster_gf(&f, 7).unwrap(), cluster_gf_brute_force(&f, 7).unwrap(), "{}", name(&f));
        });
    }
}

#[test]
fn cluster_theorem_on_small_sets() {
    for k in 1..=2 {
        all_sets(k, 3, 2, |f| {
            let r = verify_cluster_theorem(&f, 7).unwrap();
            assert!(r.passed(), "{}\n{r}", name(&f));
        });
    }
}

#[test]
fn three_paths_agree_and_salient_words_are_cluster_words() {
    for k in 1..=2 {
        all_sets(k, 4, 2, |f| {
            let [inv, _, _] = m_all(&f, 8).unwrap_or_else(|e| panic!("{}: {e}", name(&f)));
            let clusters: BTreeSet<Word> = cluster_words(&reduce(&f), 8).into_iter().collect();
            for r in salient_words(&f, 8).unwrap() {
                assert!(clusters.contains(&r.word), "{} {:?}", name(&f), r.word);
                assert_eq!(inv.get(&r.word), r.sign);
                if let Some(wit) = &r.witness {
                    assert!(r.candidates.contains(wit));
                }
            }
            assert!(inv.salient().iter().all(|w| clusters.contains(w)));
        });
    }
}

#[test]
fn reciprocal_matches_oracle_inverse() {
    for k in 1..=2 {
        all_sets(k, 3, 2, |f| {
            let [inv, _, _] = m_all(&f, 7).unwrap();
            let oracle = common::invert(&common::avoiding(k as u32, &raw(&f), 7), k as u32, 7);
            for w in all_words(f.alphabet(), 7) {
                assert_eq!(inv.get(&w) as i64, oracle.get(w.letters()).copied().unwrap_or(0));
            }
        });
    }
}

#[test]
fn csv_on_three_letters_and_involution() {
    let a = Alphabet::lowercase(3).unwrap();
    let pairs: Vec<Word> = words_of_length(&a, 2).collect();
    for mask in 0u32..(1 << 9) {
        let f = ForbiddenSet::new(a.clone(), (0..9).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i].clone())).unwrap();
        let r = csv_check(&f, 6).unwrap();
        assert!(r.passed(), "{}\n{r}", name(&f));
        let g = complement_in_pairs(&f).unwrap();
        assert!(csv_check(&g, 6).unwrap().passed());
        assert_eq!(complement_in_pairs(&g).unwrap(), f);
    }
}

fn lattice_sweep(min: i64, max: i64, size: usize) -> usize {
    let mut n = 0;
    sweep::for_each_family(min, max, size, |ivs| {
        let fam = IntervalFamily::new(ivs.to_vec()).unwrap();
        let lat = build_lattice(&fam).unwrap();
        let cross = lat.crosscut_row();
        let row = lat.mobius_row(0);
        for y in 0..lat.len() {
            assert_eq!(Some(cross[y]), row[y], "{ivs:?}");
        }
        assert_eq!(mobius_via_cluster(&fam).unwrap(), mobius_recursive(&lat, 0, lat.top()).unwrap(), "{ivs:?}");
        n += 1;
    });
    n
}

#[test]
fn mobius_paths_agree_up_to_six_intervals() {
    assert_eq!(lattice_sweep(1, 7, 6), 499_177);
    lattice_sweep(1, 10, 3);
}

/// The full sweep of six intervals inside a ten-point ground set, about
/// 29 million families. Run with `--ignored`.
#[test]
#[ignore]
fn mobius_paths_agree_on_ten_points() {
    lattice_sweep(1, 10, 6);
}

#[test]
fn mobius_matches_set_oracle() {
    sweep::for_each_family(1, 6, 4, |ivs| {
        let fam = IntervalFamily::new(ivs.to_vec()).unwrap();
        let lat = build_lattice(&fam).unwrap();
        let oracle = common::mobius_bottom_top(ivs);
        assert_eq!(mobius_recursive(&lat, 0, lat.top()).unwrap(), oracle, "{ivs:?}");
        assert_eq!(mobius_crosscut(&lat, lat.top()).unwrap(), oracle, "{ivs:?}");
        assert!(oracle.abs() <= 1);
    });
}

#[test]
fn interval_span_round_trip() {
    for lo in 1..20usize {
        for hi in lo..25 {
            let s = interval_to_span(lo, hi);
            let fam = IntervalFamily::from_spans(&[s]).unwrap();
            assert_eq!(fam.intervals(), &[(lo as i64, hi as i64)]);
            assert_eq!(s.interval(), (lo, hi + 1));
            assert_eq!(Span::from_interval(lo, hi + 1), s);
        }
    }
}
