//! Multi-pattern matching automaton over letter indices.
//!
//! A trie of the forbidden words completed with failure links into a
//! deterministic automaton. Each state records how many forbidden words end
//! at it, so a single left-to-right run counts occurrences with
//! multiplicity.

use std::collections::VecDeque;

use crate::words::{reduce, ForbiddenSet, Letter, Word};

pub type StateId = usize;

/// Deterministic, complete matcher: every state has a transition on every
/// letter.
#[derive(Clone, Debug)]
pub struct PatternAutomaton {
    alphabet_len: usize,
    next: Vec<Vec<StateId>>,
    hits: Vec<usize>,
}

impl PatternAutomaton {
    pub const ROOT: StateId = 0;

    pub fn new(f: &ForbiddenSet) -> Self {
        let k = f.alphabet().len();
        let mut trie: Vec<Vec<Option<StateId>>> = vec![vec![None; k]];
        let mut own: Vec<usize> = vec![0];
        for p in f.words() {
            let mut s = Self::ROOT;
            for &l in p.letters() {
                s = match trie[s][l as usize] {
                    Some(t) => t,
                    None => {
                        trie.push(vec![None; k]);
                        own.push(0);
                        let t = trie.len() - 1;
                        trie[s][l as usize] = Some(t);
                        t
                    }
                };
            }
            own[s] += 1;
        }

        let n = trie.len();
        let mut next = vec![vec![Self::ROOT; k]; n];
        let mut fail = vec![Self::ROOT; n];
        let mut hits = own.clone();
        let mut queue = VecDeque::new();
        for l in 0..k {
            if let Some(t) = trie[Self::ROOT][l] {
                next[Self::ROOT][l] = t;
                queue.push_back(t);
            }
        }
        // breadth-first, so fail[s] and its row are final before s is read
        while let Some(s) = queue.pop_front() {
            hits[s] = own[s] + hits[fail[s]];
            for l in 0..k {
                match trie[s][l] {
                    Some(t) => {
                        fail[t] = next[fail[s]][l];
                        next[s][l] = t;
                        queue.push_back(t);
                    }
                    None => next[s][l] = next[fail[s]][l],
                }
            }
        }
        PatternAutomaton { alphabet_len: k, next, hits }
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    pub fn step(&self, s: StateId, l: Letter) -> StateId {
        self.next[s][l as usize]
    }

    /// Number of forbidden words that end when this state is entered.
    pub fn hits(&self, s: StateId) -> usize {
        self.hits[s]
    }

    /// Occurrence count of the forbidden words in `w`.
    pub fn count(&self, w: &Word) -> usize {
        let mut s = Self::ROOT;
        let mut total = 0;
        for &l in w.letters() {
            s = self.step(s, l);
            total += self.hits[s];
        }
        total
    }
}

/// Recognizer for the words avoiding a forbidden set.
///
/// Built over the reduced set; every matcher state at which a forbidden word
/// ends collapses into one absorbing dead state. Live states are numbered
/// `0..live_count()` with the start state at 0.
#[derive(Clone, Debug)]
pub struct AvoidanceAutomaton {
    alphabet_len: usize,
    next: Vec<Vec<Option<StateId>>>,
}

impl AvoidanceAutomaton {
    pub const START: StateId = 0;

    pub fn new(f: &ForbiddenSet) -> Self {
        let matcher = PatternAutomaton::new(&reduce(f));
        let mut renumber = vec![None; matcher.state_count()];
        let mut live = 0;
        for (s, slot) in renumber.iter_mut().enumerate() {
            if matcher.hits(s) == 0 {
                *slot = Some(live);
                live += 1;
            }
        }
        let k = matcher.alphabet_len();
        let next = (0..matcher.state_count())
            .filter(|&s| matcher.hits(s) == 0)
            .map(|s| (0..k).map(|l| renumber[matcher.step(s, l as Letter)]).collect())
            .collect();
        AvoidanceAutomaton { alphabet_len: k, next }
    }

    pub fn live_count(&self) -> usize {
        self.next.len()
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    /// `None` is the dead state.
    pub fn step(&self, s: StateId, l: Letter) -> Option<StateId> {
        self.next[s][l as usize]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        w.letters().iter().try_fold(Self::START, |s, &l| self.step(s, l)).is_some()
    }

    /// Transition counts between live states: entry `[s][t]` is the number
    /// of letters leading from `s` to `t`.
    pub fn transfer_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.live_count();
        let mut m = vec![vec![0; n]; n];
        for (s, row) in self.next.iter().enumerate() {
            for t in row.iter().flatten() {
                m[s][*t] += 1;
            }
        }
        m
    }
}
