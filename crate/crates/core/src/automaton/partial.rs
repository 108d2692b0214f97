use std::collections::{HashMap, VecDeque};

use crate::monoid::{Alphabet, Word};

use super::interim::{AutomatonN, NState, StateSet};
use super::AutomatonError;

/// A partial DFA in which every state is accepting. The one produced by
/// [`PartialDfaM::from_interim`] accepts exactly the irreducible compositions,
/// reading words outermost letter first.
#[derive(Clone, Debug)]
pub struct PartialDfaM {
    alphabet: Alphabet,
    /// The interim states making up each state; empty for hand-built automata.
    subsets: Vec<Vec<NState>>,
    /// `trans[state * |S| + letter]`.
    trans: Vec<Option<u32>>,
}

/// Automaton shape after renumbering states in breadth-first order from the
/// start state; two partial DFAs with all states reachable are isomorphic iff
/// their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub transitions: Vec<Vec<Option<usize>>>,
}

impl PartialDfaM {
    /// Reverses every arrow of `N` (the start state becomes the only final
    /// state, the accepting states become initial), determinizes by subset
    /// construction, and drops every non-accepting subset. States of `N`
    /// unreachable from its start state never lead back to it in the reversed
    /// automaton, so they are left out of every subset.
    pub fn from_interim(n: &AutomatonN) -> Self {
        let letters = n.alphabet().len();
        let live = StateSet::from_mask(&n.reachable());
        let start = n.initial_set().intersect(&live);
        let mut ids: HashMap<StateSet, u32> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut trans = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        while let Some(s) = queue.pop_front() {
            let set = sets[s as usize].clone();
            for l in 0..letters {
                let pred = n.predecessors(&set, l).intersect(&live);
                if !pred.contains(0) {
                    trans.push(None);
                    continue;
                }
                let next_id = sets.len() as u32;
                let id = *ids.entry(pred.clone()).or_insert_with(|| {
                    sets.push(pred);
                    queue.push_back(next_id);
                    next_id
                });
                trans.push(Some(id));
            }
        }
        let subsets = sets
            .iter()
            .map(|s| s.ids().map(|i| n.state(i)).collect())
            .collect();
        PartialDfaM {
            alphabet: n.alphabet().clone(),
            subsets,
            trans,
        }
    }

    /// Builds an automaton from an explicit table; state 0 is the start state.
    pub fn from_table(
        alphabet: &Alphabet,
        table: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, AutomatonError> {
        let n = table.len();
        if n == 0 {
            return Err(AutomatonError::Parse(
                "automaton needs a start state".into(),
            ));
        }
        let mut trans = Vec::with_capacity(n * alphabet.len());
        for row in &table {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::Parse(
                    "row length differs from alphabet size".into(),
                ));
            }
            for &t in row {
                if t.is_some_and(|t| t >= n) {
                    return Err(AutomatonError::Parse(format!(
                        "transition to missing state {t:?}"
                    )));
                }
                trans.push(t.map(|t| t as u32));
            }
        }
        Ok(PartialDfaM {
            alphabet: alphabet.clone(),
            subsets: vec![Vec::new(); n],
            trans,
        })
    }

    pub(crate) fn with_subsets(mut self, subsets: Vec<Vec<NState>>) -> Self {
        assert_eq!(subsets.len(), self.subsets.len());
        self.subsets = subsets;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.subsets.len()
    }

    pub fn start(&self) -> u32 {
        0
    }

    pub fn subset(&self, state: u32) -> &[NState] {
        &self.subsets[state as usize]
    }

    #[inline]
    pub fn next(&self, state: u32, letter: usize) -> Option<u32> {
        self.trans[state as usize * self.alphabet.len() + letter]
    }

    /// `(from, letter, to)` for every defined transition, in state then letter order.
    pub fn transitions(&self) -> impl Iterator<Item = (u32, usize, u32)> + '_ {
        let n = self.alphabet.len();
        self.trans
            .iter()
            .enumerate()
            .filter_map(move |(i, t)| t.map(|t| ((i / n) as u32, i % n, t)))
    }

    /// The state reached after reading `w`, if every transition is defined.
    pub fn run(&self, w: &Word) -> Option<u32> {
        w.letters()
            .iter()
            .try_fold(self.start(), |s, &l| self.next(s, l))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some()
    }

    /// Number of accepted words of length `n`.
    pub fn count_accepted(&self, n: usize) -> Result<u128, AutomatonError> {
        let mut counts = vec![0u128; self.num_states()];
        counts[0] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; self.num_states()];
            for (from, _, to) in self.transitions() {
                let c = counts[from as usize];
                if c > 0 {
                    let slot = &mut next[to as usize];
                    *slot = slot.checked_add(c).ok_or(AutomatonError::CountOverflow)?;
                }
            }
            counts = next;
        }
        counts
            .into_iter()
            .try_fold(0u128, |acc, c| acc.checked_add(c))
            .ok_or(AutomatonError::CountOverflow)
    }

    /// Merges states with identical futures (Moore partition refinement).
    /// Each merged state keeps the subset label of its first member.
    pub fn minimize(&self) -> PartialDfaM {
        let n = self.num_states();
        let letters = self.alphabet.len();
        let mut block = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sigs: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let mut next_block = vec![0usize; n];
            for s in 0..n {
                let sig: Vec<Option<usize>> = (0..letters)
                    .map(|l| self.next(s as u32, l).map(|t| block[t as usize]))
                    .collect();
                let len = sigs.len();
                next_block[s] = *sigs.entry((block[s], sig)).or_insert(len);
            }
            let new_count = sigs.len();
            block = next_block;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // Renumber blocks in breadth-first order from the start state.
        let mut order: Vec<Option<u32>> = vec![None; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        order[block[0]] = Some(0);
        reps.push(0u32);
        while let Some(s) = queue.pop_front() {
            for l in 0..letters {
                if let Some(t) = self.next(s, l) {
                    let b = block[t as usize];
                    if order[b].is_none() {
                        order[b] = Some(reps.len() as u32);
                        reps.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut trans = Vec::with_capacity(reps.len() * letters);
        for &r in &reps {
            for l in 0..letters {
                trans.push(
                    self.next(r, l)
                        .map(|t| order[block[t as usize]].expect("reachable")),
                );
            }
        }
        let subsets = reps
            .iter()
            .map(|&r| self.subsets[r as usize].clone())
            .collect();
        PartialDfaM {
            alphabet: self.alphabet.clone(),
            subsets,
            trans,
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let letters = self.alphabet.len();
        let mut order: Vec<Option<usize>> = vec![None; self.num_states()];
        let mut visit = vec![0u32];
        order[0] = Some(0);
        let mut i = 0;
        while i < visit.len() {
            let s = visit[i];
            for l in 0..letters {
                if let Some(t) = self.next(s, l) {
                    if order[t as usize].is_none() {
                        order[t as usize] = Some(visit.len());
                        visit.push(t);
                    }
                }
            }
            i += 1;
        }
        let transitions = visit
            .iter()
            .map(|&s| {
                (0..letters)
                    .map(|l| self.next(s, l).map(|t| order[t as usize].expect("visited")))
                    .collect()
            })
            .collect();
        CanonicalForm { transitions }
    }

    /// Isomorphism of the reachable parts, with letters matched by index.
    pub fn is_isomorphic(&self, other: &PartialDfaM) -> bool {
        self.alphabet.len() == other.alphabet.len()
            && self.canonical_form() == other.canonical_form()
    }

    /// Whether the two automata have the same structure and alphabet, ignoring subset labels.
    pub fn same_structure(&self, other: &PartialDfaM) -> bool {
        self.alphabet == other.alphabet && self.trans == other.trans
    }
}

impl PartialEq for PartialDfaM {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other) && self.subsets == other.subsets
    }
}
