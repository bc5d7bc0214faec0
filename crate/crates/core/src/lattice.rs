//! Lattices of unions of integer intervals and their Möbius functions.
//!
//! Given intervals `I_1, ..., I_m`, the lattice holds every union of a
//! subfamily (the empty union included), ordered by inclusion. Its Möbius
//! function only takes the values `-1`, `0` and `1`. Three computations are
//! provided: the defining recursion, the atom cross-cut sum, and a reduction
//! to a cluster polynomial at `t = -1` on a word with distinct letters.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::clusters::{cluster_polynomial, Method};
use crate::error::{Error, Result};
use crate::report::{Check, Discrepancy, Report};
use crate::words::{Alphabet, ForbiddenSet, Span, Word};

/// Default limit on the number of intervals passed to [`build_lattice`].
pub const DEFAULT_FAMILY_BOUND: usize = 16;

/// Widest ground set a lattice can live on.
pub const MAX_WIDTH: i64 = 128;

/// A nonempty list of nonempty inclusive integer intervals `{lo, ..., hi}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalFamily {
    intervals: Vec<(i64, i64)>,
}

#[derive(Deserialize)]
struct FamilyJson {
    intervals: Vec<[i64; 2]>,
}

impl IntervalFamily {
    pub fn new(intervals: Vec<(i64, i64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::IntervalFamily("family is empty".into()));
        }
        if let Some((lo, hi)) = intervals.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::IntervalFamily(format!("interval [{lo}, {hi}] is empty")));
        }
        let min = intervals.iter().map(|i| i.0).min().expect("nonempty");
        let max = intervals.iter().map(|i| i.1).max().expect("nonempty");
        if max.saturating_sub(min) >= MAX_WIDTH {
            return Err(Error::IntervalFamily(format!("ground set {min}..{max} is wider than {MAX_WIDTH}")));
        }
        Ok(IntervalFamily { intervals })
    }

    /// Parses `{"intervals": [[lo, hi], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| Error::IntervalFamily(e.to_string()))?;
        IntervalFamily::new(raw.intervals.into_iter().map(|[lo, hi]| (lo, hi)).collect())
    }

    /// The integer sets `{i, ..., i + len - 2}` covered by the half-open
    /// intervals of the given occurrence spans.
    pub fn from_spans(spans: &[Span]) -> Result<Self> {
        IntervalFamily::new(spans.iter().map(|s| (s.start as i64, s.end() as i64 - 1)).collect())
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Shifted so that the smallest covered integer is 1.
    pub fn normalized(&self) -> IntervalFamily {
        let min = self.min();
        IntervalFamily { intervals: self.intervals.iter().map(|&(lo, hi)| (lo - min + 1, hi - min + 1)).collect() }
    }

    fn min(&self) -> i64 {
        self.intervals.iter().map(|i| i.0).min().expect("nonempty")
    }
}

/// Inverse of [`IntervalFamily::from_spans`] for a single interval: the
/// occurrence span whose half-open interval covers exactly `{lo, ..., hi}`.
pub fn interval_to_span(lo: usize, hi: usize) -> Span {
    Span::new(lo, hi - lo + 2)
}

type Bits = u128;

fn bits_of(lo: i64, hi: i64, offset: i64) -> Bits {
    let width = (hi - lo + 1) as u32;
    let mask = if width == 128 { Bits::MAX } else { (1u128 << width) - 1 };
    mask << (lo - offset) as u32
}

/// The lattice of unions of an [`IntervalFamily`], ordered by inclusion.
///
/// Elements are indexed in a linear extension of the order (by size, then
/// by bit pattern); index 0 is the empty set and the last index is the
/// union of all intervals.
#[derive(Clone, Debug)]
pub struct UnionLattice {
    offset: i64,
    elements: Vec<Bits>,
    index: HashMap<Bits, usize>,
    atoms: Vec<usize>,
}

/// Builds the lattice with the default bound on the family size.
pub fn build_lattice(fam: &IntervalFamily) -> Result<UnionLattice> {
    build_lattice_with_bound(fam, DEFAULT_FAMILY_BOUND)
}

pub fn build_lattice_with_bound(fam: &IntervalFamily, bound: usize) -> Result<UnionLattice> {
    if fam.len() > bound {
        return Err(Error::FamilyTooLarge { size: fam.len(), bound });
    }
    let offset = fam.min();
    let mut elements: Vec<Bits> = vec![0];
    let mut index: HashMap<Bits, usize> = HashMap::from([(0, 0)]);
    for &(lo, hi) in fam.intervals() {
        let b = bits_of(lo, hi, offset);
        for i in 0..elements.len() {
            let u = elements[i] | b;
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(u) {
                e.insert(elements.len());
                elements.push(u);
            }
        }
    }
    elements.sort_by_key(|&e| (e.count_ones(), e));
    let index: HashMap<Bits, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let atoms: Vec<usize> = (1..elements.len())
        .filter(|&a| !(1..elements.len()).any(|b| b != a && subset(elements[b], elements[a])))
        .collect();
    Ok(UnionLattice { offset, elements, index, atoms })
}

fn subset(a: Bits, b: Bits) -> bool {
    a & !b == 0
}

impl UnionLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    /// Atom indices: the minimal nonempty elements.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// Indices of the elements covering `x`.
    pub fn covers(&self, x: usize) -> Vec<usize> {
        let above: Vec<usize> = (x + 1..self.len()).filter(|&y| self.leq(x, y)).collect();
        above.iter().copied().filter(|&y| !above.iter().any(|&z| z != y && self.leq(z, y))).collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        subset(self.elements[x], self.elements[y])
    }

    /// The integers in element `x`, ascending.
    pub fn element(&self, x: usize) -> Vec<i64> {
        let b = self.elements[x];
        (0..128).filter(|i| b >> i & 1 == 1).map(|i| i as i64 + self.offset).collect()
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        (0..self.len()).map(|x| self.element(x)).collect()
    }

    /// Index of the element equal to the given set of integers.
    pub fn find(&self, set: &[i64]) -> Option<usize> {
        let mut b: Bits = 0;
        for &v in set {
            let shift = v - self.offset;
            if !(0..128).contains(&shift) {
                return None;
            }
            b |= 1 << shift;
        }
        self.index.get(&b).copied()
    }

    /// `mu(x, z)` for every `z`; `None` where `z` is not above `x`.
    pub fn mobius_row(&self, x: usize) -> Vec<Option<i64>> {
        let mut mu: Vec<Option<i64>> = vec![None; self.len()];
        mu[x] = Some(1);
        let mut above = vec![x];
        for z in x + 1..self.len() {
            if !self.leq(x, z) {
                continue;
            }
            let s: i64 = above.iter().filter(|&&y| self.leq(y, z)).map(|&y| mu[y].expect("set")).sum();
            mu[z] = Some(-s);
            above.push(z);
        }
        mu
    }

    /// `mu(0, x)` for every `x` from subsets of atoms grouped by their join.
    pub fn crosscut_row(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.len()];
        let atoms: Vec<Bits> = self.atoms.iter().map(|&a| self.elements[a]).collect();
        assert!(atoms.len() < 32, "too many atoms for subset enumeration");
        for mask in 0u32..(1u32 << atoms.len()) {
            let join = atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, a)| acc | a);
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            out[self.index[&join]] += sign;
        }
        out
    }
}

/// `mu(x, y)` by the defining recursion `mu(x, x) = 1`,
/// `mu(x, y) = -sum_{x <= z < y} mu(x, z)`.
pub fn mobius_recursive(lat: &UnionLattice, x: usize, y: usize) -> Result<i64> {
    if x >= lat.len() || y >= lat.len() {
        return Err(Error::NotInLattice);
    }
    if !lat.leq(x, y) {
        return Err(Error::Incomparable);
    }
    Ok(lat.mobius_row(x)[y].expect("y is above x"))
}

/// `mu(0, x)` as the signed count of atom subsets whose join is `x`.
pub fn mobius_crosscut(lat: &UnionLattice, x: usize) -> Result<i64> {
    if x >= lat.len() {
        return Err(Error::NotInLattice);
    }
    Ok(lat.crosscut_row()[x])
}

/// One connected piece of the top element, translated into a word problem.
#[derive(Clone, Debug)]
pub struct BridgeComponent {
    /// Integers of the piece, before relabelling.
    pub range: (i64, i64),
    /// The word of distinct letters and the forbidden factors at the atoms;
    /// `None` when the atoms inside this piece do not cover it.
    pub instance: Option<(ForbiddenSet, Word)>,
    pub value: i64,
}

/// Translates `mu(0, top)` into cluster polynomials.
///
/// The top element splits into maximal runs of consecutive integers and the
/// lattice into the product of the pieces, so `mu(0, top)` is the product
/// over pieces. On a piece relabelled to `{1, ..., n-1}`, only the atoms
/// matter; if they leave a gap the value is 0. Otherwise each atom
/// `{lo, ..., hi}` becomes the factor at letters `lo..=hi+1` of a word of
/// `n` distinct letters, and the value is the cluster polynomial of that
/// word at `t = -1`.
pub fn cluster_bridge(fam: &IntervalFamily) -> Result<Vec<BridgeComponent>> {
    let fam = fam.normalized();
    let mut ivs: Vec<(i64, i64)> = fam.intervals().to_vec();
    ivs.sort();
    ivs.dedup();
    let atoms: Vec<(i64, i64)> = ivs
        .iter()
        .copied()
        .filter(|&(lo, hi)| !ivs.iter().any(|&(l2, h2)| (l2, h2) != (lo, hi) && lo <= l2 && h2 <= hi))
        .collect();

    // maximal runs of the union
    let mut runs: Vec<(i64, i64)> = Vec::new();
    for &(lo, hi) in &ivs {
        match runs.last_mut() {
            Some((_, end)) if lo <= *end + 1 => *end = (*end).max(hi),
            _ => runs.push((lo, hi)),
        }
    }

    runs.into_iter()
        .map(|(start, end)| {
            let inside: Vec<(usize, usize)> = atoms
                .iter()
                .filter(|&&(lo, hi)| start <= lo && hi <= end)
                .map(|&(lo, hi)| ((lo - start + 1) as usize, (hi - start + 1) as usize))
                .collect();
            let width = (end - start + 1) as usize;
            let mut covered = vec![false; width + 1];
            for &(lo, hi) in &inside {
                covered[lo..=hi].iter_mut().for_each(|c| *c = true);
            }
            if !covered[1..].iter().all(|&c| c) {
                return Ok(BridgeComponent { range: (start, end), instance: None, value: 0 });
            }
            let n = width + 1;
            let alphabet = Alphabet::new((1..=n).map(|i| format!("x{i}")))?;
            let word = Word::new((0..n as u32).collect());
            let forbidden =
                ForbiddenSet::new(alphabet, inside.iter().map(|&(lo, hi)| word.factor(interval_to_span(lo, hi))))?;
            let p = cluster_polynomial(&word, &forbidden, Method::Recurrence)?;
            let value = i64::try_from(p.eval(&(-1).into())).map_err(|_| Error::IntervalFamily("overflow".into()))?;
            Ok(BridgeComponent { range: (start, end), instance: Some((forbidden, word)), value })
        })
        .collect()
}

/// `mu(0, top)` through [`cluster_bridge`].
pub fn mobius_via_cluster(fam: &IntervalFamily) -> Result<i64> {
    Ok(cluster_bridge(fam)?.iter().map(|c| c.value).product())
}

/// Checks that `mu` takes values in `{-1, 0, 1}` and that the three
/// computations agree.
///
/// With `all_pairs` every comparable pair `x <= y` is checked, otherwise the
/// pairs `(0, y)`. The cross-cut sum is compared with the recursion at every
/// `(0, y)` and the cluster bridge at `(0, top)`.
pub fn greene_check(fam: &IntervalFamily, all_pairs: bool) -> Result<Report> {
    let lat = build_lattice(fam)?;
    let render = |x: usize| format!("{:?}", lat.element(x));
    let mut checks = Vec::new();

    let starts: Vec<usize> = if all_pairs { (0..lat.len()).collect() } else { vec![0] };
    let mut pairs = 0usize;
    let mut bad = None;
    let mut bottom_row = Vec::new();
    for &x in &starts {
        let row = lat.mobius_row(x);
        for (y, v) in row.iter().enumerate() {
            if let Some(v) = v {
                pairs += 1;
                if v.abs() > 1 && bad.is_none() {
                    bad = Some(Discrepancy {
                        word: format!("({}, {})", render(x), render(y)),
                        lhs: v.to_string(),
                        rhs: "{-1,0,1}".into(),
                    });
                }
            }
        }
        if x == 0 {
            bottom_row = row;
        }
    }
    let range = "mu(X, Y) in {-1, 0, 1}";
    checks.push(match bad {
        None => Check::pass(range).with_note(format!("{pairs} pairs, {} elements", lat.len())),
        Some(d) => Check::fail(range, d),
    });

    let cross = lat.crosscut_row();
    let name = "mu(0, x) by recursion = atom cross-cut sum";
    checks.push(match (0..lat.len()).find(|&y| bottom_row[y] != Some(cross[y])) {
        None => Check::pass(name),
        Some(y) => Check::fail(
            name,
            Discrepancy { word: render(y), lhs: format!("{:?}", bottom_row[y]), rhs: cross[y].to_string() },
        ),
    });

    let via = mobius_via_cluster(fam)?;
    let rec = bottom_row[lat.top()].expect("top is above bottom");
    let name = "mu(0, top) = product of cluster polynomials at t = -1";
    checks.push(if via == rec {
        Check::pass(name)
    } else {
        Check::fail(name, Discrepancy { word: render(lat.top()), lhs: rec.to_string(), rhs: via.to_string() })
    });
    Ok(Report::new(checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(ivs: &[(i64, i64)]) -> IntervalFamily {
        IntervalFamily::new(ivs.to_vec()).unwrap()
    }

    #[test]
    fn single_interval_lattice() {
        let lat = build_lattice(&fam(&[(1, 2)])).unwrap();
        assert_eq!(lat.elements(), vec![vec![], vec![1, 2]]);
        assert_eq!(mobius_recursive(&lat, 0, 1).unwrap(), -1);
        assert_eq!(mobius_recursive(&lat, 1, 1).unwrap(), 1);
        assert_eq!(mobius_crosscut(&lat, 0).unwrap(), 1);
        assert_eq!(mobius_crosscut(&lat, 1).unwrap(), -1);
    }

    #[test]
    fn two_disjoint_intervals() {
        let lat = build_lattice(&fam(&[(1, 2), (3, 4)])).unwrap();
        assert_eq!(lat.len(), 4);
        assert_eq!(lat.atoms().len(), 2);
        assert_eq!(mobius_recursive(&lat, 0, lat.top()).unwrap(), 1);
        assert_eq!(mobius_via_cluster(&fam(&[(1, 2), (3, 4)])).unwrap(), 1);
    }

    #[test]
    fn chain_of_four_overlapping_pairs() {
        // half-open [1,3), [2,4), [3,5), [4,6): the a^3 occurrences in a^6
        let f = fam(&[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let lat = build_lattice(&f).unwrap();
        assert_eq!(mobius_recursive(&lat, 0, lat.top()).unwrap(), -1);
        assert_eq!(mobius_via_cluster(&f).unwrap(), -1);
        let bridge = cluster_bridge(&f).unwrap();
        let (forbidden, word) = bridge[0].instance.clone().unwrap();
        assert_eq!(word.len(), 6);
        assert_eq!(forbidden.len(), 4);
        assert!(forbidden.words().iter().all(|w| w.len() == 3));
    }

    #[test]
    fn atoms_with_a_gap_give_zero() {
        let f = fam(&[(1, 2), (4, 5), (1, 5)]);
        let lat = build_lattice(&f).unwrap();
        assert_eq!(mobius_recursive(&lat, 0, lat.top()).unwrap(), 0);
        assert_eq!(mobius_via_cluster(&f).unwrap(), 0);
        assert!(cluster_bridge(&f).unwrap()[0].instance.is_none());
    }

    #[test]
    fn whole_range_interval_gives_minus_one() {
        assert_eq!(mobius_via_cluster(&fam(&[(3, 9)])).unwrap(), -1);
        assert_eq!(mobius_via_cluster(&fam(&[(4, 4)])).unwrap(), -1);
    }

    #[test]
    fn incomparable_pairs_are_rejected() {
        let lat = build_lattice(&fam(&[(1, 2), (3, 4)])).unwrap();
        assert_eq!(mobius_recursive(&lat, 1, 2), Err(Error::Incomparable));
        assert_eq!(mobius_recursive(&lat, 0, 99), Err(Error::NotInLattice));
    }

    #[test]
    fn bound_is_enforced() {
        let ivs: Vec<(i64, i64)> = (0..17).map(|i| (i, i + 1)).collect();
        assert!(matches!(build_lattice(&fam(&ivs)), Err(Error::FamilyTooLarge { size: 17, bound: 16 })));
    }

    #[test]
    fn family_validation_and_json() {
        assert!(IntervalFamily::new(vec![]).is_err());
        assert!(IntervalFamily::new(vec![(3, 2)]).is_err());
        assert!(IntervalFamily::new(vec![(0, 200)]).is_err());
        let f = IntervalFamily::from_json(r#"{"intervals": [[1, 3], [2, 5]]}"#).unwrap();
        assert_eq!(f.intervals(), &[(1, 3), (2, 5)]);
        assert_eq!(fam(&[(-3, -1), (0, 2)]).normalized().intervals(), &[(1, 3), (4, 6)]);
    }

    #[test]
    fn span_interval_round_trip() {
        for start in 1..5usize {
            for len in 2..6usize {
                let s = Span::new(start, len);
                let f = IntervalFamily::from_spans(&[s]).unwrap();
                let (lo, hi) = f.intervals()[0];
                assert_eq!((lo as usize, hi as usize), (s.interval().0, s.interval().1 - 1));
                assert_eq!(interval_to_span(lo as usize, hi as usize), s);
            }
        }
    }

    #[test]
    fn covers_and_find() {
        let lat = build_lattice(&fam(&[(1, 3), (2, 4), (3, 5)])).unwrap();
        let x = lat.find(&[1, 2, 3]).unwrap();
        assert!(lat.covers(0).contains(&x));
        assert_eq!(lat.find(&[7]), None);
        assert_eq!(lat.element(lat.top()), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn greene_on_nested_chain() {
        let f = fam(&[(1, 1), (1, 2), (1, 3), (1, 4)]);
        let r = greene_check(&f, true).unwrap();
        assert!(r.passed(), "{r}");
        let lat = build_lattice(&f).unwrap();
        // a chain: mu is -1 on covering pairs and 0 further up
        assert_eq!(mobius_recursive(&lat, 0, 1).unwrap(), -1);
        assert_eq!(mobius_recursive(&lat, 0, 2).unwrap(), 0);
        assert_eq!(mobius_recursive(&lat, 1, 2).unwrap(), -1);
    }
}
