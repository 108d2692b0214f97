use std::fmt;
use std::str::FromStr;

use crate::field::{FqCtx, FqElem};
use crate::monoid::{Alphabet, Word};
use crate::poly::split_top_level;

use super::AutomatonError;

/// A state of the interim automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NState {
    /// The start state; always accepting.
    Start,
    /// `⟨a⟩`, accepting iff `-a` is a nonsquare.
    Dist(FqElem),
    /// `(a)`, accepting iff `a` is a nonsquare.
    Reg(FqElem),
}

impl NState {
    pub fn display(self, ctx: &FqCtx) -> String {
        match self {
            NState::Start => "I".to_string(),
            NState::Dist(a) => format!("<{}>", ctx.format(a)),
            NState::Reg(a) => format!("({})", ctx.format(a)),
        }
    }

    pub fn parse(ctx: &FqCtx, s: &str) -> Result<NState, AutomatonError> {
        let s = s.trim();
        let bad = || AutomatonError::Parse(format!("state {s:?}"));
        if s == "I" {
            return Ok(NState::Start);
        }
        if let Some(inner) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
            return Ok(NState::Dist(ctx.parse(inner).map_err(|_| bad())?));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return Ok(NState::Reg(ctx.parse(inner).map_err(|_| bad())?));
        }
        Err(bad())
    }
}

/// Renders a set of interim states as `{I,<3>,(2)}`.
pub fn format_subset(ctx: &FqCtx, subset: &[NState]) -> String {
    let parts: Vec<String> = subset.iter().map(|s| s.display(ctx)).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn parse_subset(ctx: &FqCtx, s: &str) -> Result<Vec<NState>, AutomatonError> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| AutomatonError::Parse(format!("subset {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    // Commas inside `<...>` or `(...)` only occur within bracketed elements.
    split_top_level(inner, ',')
        .into_iter()
        .map(|p| NState::parse(ctx, p))
        .collect()
}

/// A set of interim states, as a bitset over state ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Vec<u64>);

impl StateSet {
    fn empty(n: usize) -> Self {
        StateSet(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.0[(id / 64) as usize] >> (id % 64) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, id: u32) {
        self.0[(id / 64) as usize] |= 1 << (id % 64);
    }

    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        let mut set = StateSet::empty(mask.len());
        for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            set.insert(i as u32);
        }
        set
    }

    pub(crate) fn intersect(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| (w * 64 + b) as u32)
        })
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// Outcome of running a word backwards through the interim automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LazyVerdict {
    Accepted,
    /// The prefix of this length (1-based) is the first one outside the language.
    Rejected {
        at: usize,
    },
}

/// The complete DFA `N(S)`: start state, distinguished states `⟨a⟩` and
/// regular states `(a)`, read right-to-left to decide whether the last
/// chain value of a word is a nonsquare.
#[derive(Clone, Debug)]
pub struct AutomatonN {
    alphabet: Alphabet,
    states: Vec<NState>,
    delta: Vec<u32>,
    accepting: Vec<bool>,
    merged: bool,
}

impl AutomatonN {
    /// Builds all `2q + 1` states with the transitions
    /// `I -f-> ⟨-b_f⟩`, `⟨a⟩ -f-> (f(a))` and `(a) -f-> (f(a))`.
    pub fn build(alphabet: &Alphabet) -> Result<Self, AutomatonError> {
        if alphabet.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let ctx = alphabet.ctx();
        let q = ctx.order();
        let mut states = vec![NState::Start];
        states.extend(ctx.elements().map(NState::Dist));
        states.extend(ctx.elements().map(NState::Reg));
        let reg = |a: FqElem| 1 + q + a.index();
        let dist = |a: FqElem| 1 + a.index();
        let mut delta = Vec::with_capacity(states.len() * alphabet.len());
        for s in &states {
            for l in alphabet.letters() {
                delta.push(match *s {
                    NState::Start => dist(ctx.neg(l.b)),
                    NState::Dist(a) | NState::Reg(a) => reg(l.eval(ctx, a)),
                });
            }
        }
        let accepting = states
            .iter()
            .map(|&s| Self::accepts_state(ctx, s))
            .collect();
        Ok(AutomatonN {
            alphabet: alphabet.clone(),
            states,
            delta,
            accepting,
            merged: false,
        })
    }

    fn accepts_state(ctx: &FqCtx, s: NState) -> bool {
        match s {
            NState::Start => true,
            NState::Dist(a) => ctx.is_nonsquare(ctx.neg(a)),
            NState::Reg(a) => ctx.is_nonsquare(a),
        }
    }

    /// Identifies `⟨a⟩` with `(a)`; only valid when `-1` is a square, in
    /// which case both kinds of state accept exactly when `a` is a nonsquare.
    pub fn merge_distinguished(&self) -> Result<Self, AutomatonError> {
        let ctx = self.alphabet.ctx();
        if ctx.is_nonsquare(ctx.neg(FqElem::ONE)) {
            return Err(AutomatonError::MergeNotLicensed);
        }
        if self.merged {
            return Ok(self.clone());
        }
        let q = ctx.order();
        let n = self.alphabet.len();
        let mut states = vec![NState::Start];
        states.extend(ctx.elements().map(NState::Reg));
        // Old ids: Dist(a) = 1 + a, Reg(a) = 1 + q + a. New ids: Reg(a) = 1 + a.
        let remap = |old: u32| if old > q { old - q } else { old };
        let mut delta = Vec::with_capacity(states.len() * n);
        delta.extend(self.delta[..n].iter().map(|&t| remap(t)));
        for a in 0..q {
            let old = (1 + q + a) as usize;
            delta.extend(self.delta[old * n..(old + 1) * n].iter().map(|&t| remap(t)));
        }
        let accepting = states
            .iter()
            .map(|&s| Self::accepts_state(ctx, s))
            .collect();
        Ok(AutomatonN {
            alphabet: self.alphabet.clone(),
            states,
            delta,
            accepting,
            merged: true,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[NState] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_merged(&self) -> bool {
        self.merged
    }

    pub fn is_accepting(&self, id: u32) -> bool {
        self.accepting[id as usize]
    }

    pub fn state(&self, id: u32) -> NState {
        self.states[id as usize]
    }

    pub fn state_id(&self, s: NState) -> Option<u32> {
        let q = self.alphabet.ctx().order();
        match (s, self.merged) {
            (NState::Start, _) => Some(0),
            (NState::Dist(a), false) => Some(1 + a.index()),
            (NState::Reg(a), false) => Some(1 + q + a.index()),
            (NState::Reg(a), true) => Some(1 + a.index()),
            (NState::Dist(_), true) => None,
        }
    }

    #[inline]
    pub fn next(&self, id: u32, letter: usize) -> u32 {
        self.delta[id as usize * self.alphabet.len() + letter]
    }

    /// States reachable from the start state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for l in 0..self.alphabet.len() {
                let t = self.next(s, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Runs a word right-to-left from the start state, as the automaton is meant to be read.
    pub fn run_reversed(&self, w: &Word) -> u32 {
        w.letters().iter().rev().fold(0, |s, &l| self.next(s, l))
    }

    /// Whether the word lies in the language of words whose last chain value
    /// is a nonsquare (reading right-to-left).
    pub fn accepts_reversed(&self, w: &Word) -> bool {
        self.is_accepting(self.run_reversed(w))
    }

    /// The accepting states, the initial set of the backward simulation.
    pub fn initial_set(&self) -> StateSet {
        let mut set = StateSet::empty(self.states.len());
        for (i, &acc) in self.accepting.iter().enumerate() {
            if acc {
                set.insert(i as u32);
            }
        }
        set
    }

    /// All states whose `letter`-successor lies in `set`.
    pub fn predecessors(&self, set: &StateSet, letter: usize) -> StateSet {
        let n = self.alphabet.len();
        let mut out = StateSet::empty(self.states.len());
        for t in 0..self.states.len() {
            if set.contains(self.delta[t * n + letter]) {
                out.insert(t as u32);
            }
        }
        out
    }

    /// Backward subset simulation without building the determinized automaton:
    /// start from the accepting states, take predecessors under each letter in
    /// turn, and reject as soon as the start state drops out.
    pub fn lazy_run(&self, w: &Word) -> LazyVerdict {
        let mut set = self.initial_set();
        for (i, &l) in w.letters().iter().enumerate() {
            set = self.predecessors(&set, l);
            if !set.contains(0) {
                return LazyVerdict::Rejected { at: i + 1 };
            }
        }
        LazyVerdict::Accepted
    }

    pub fn lazy_accepts(&self, w: &Word) -> bool {
        self.lazy_run(w) == LazyVerdict::Accepted
    }
}

impl fmt::Display for LazyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LazyVerdict::Accepted => write!(f, "Accepted"),
            LazyVerdict::Rejected { at } => write!(f, "Rejected at {at}"),
        }
    }
}

/// Serialization formats for automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Text,
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = AutomatonError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ExportFormat::Text),
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(AutomatonError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqCtx;
    use crate::fixtures::{f3_maximal, f5_pair};
    use crate::monoid::MonicQuad;

    #[test]
    fn state_count_and_completeness() {
        for q in [3u64, 5, 7, 9] {
            let ctx = FqCtx::with_order(q).unwrap();
            let n = AutomatonN::build(&crate::monoid::Alphabet::maximal(&ctx)).unwrap();
            assert_eq!(n.num_states(), 2 * q as usize + 1);
            assert_eq!(n.delta.len(), n.num_states() * q as usize);
            assert!(n.delta.iter().all(|&t| (t as usize) < n.num_states()));
        }
    }

    #[test]
    fn transitions_follow_definition() {
        let s = f5_pair();
        let ctx = s.ctx().clone();
        let n = AutomatonN::build(&s).unwrap();
        for (id, &st) in n.states().iter().enumerate() {
            for (l, letter) in s.letters().iter().enumerate() {
                let want = match st {
                    NState::Start => NState::Dist(ctx.neg(letter.b)),
                    NState::Dist(a) | NState::Reg(a) => NState::Reg(letter.eval(&ctx, a)),
                };
                assert_eq!(n.state(n.next(id as u32, l)), want);
            }
        }
    }

    #[test]
    fn singleton_square_letter() {
        let ctx = FqCtx::new(3, 1).unwrap();
        let s =
            crate::monoid::Alphabet::new(&ctx, vec![MonicQuad::new(FqElem::ZERO, FqElem::ZERO)])
                .unwrap();
        let n = AutomatonN::build(&s).unwrap();
        let t = n.next(0, 0);
        assert_eq!(n.state(t), NState::Dist(FqElem::ZERO));
        assert!(!n.is_accepting(t));
    }

    #[test]
    fn merged_interim_matches_small_diagram() {
        let s = f5_pair();
        let ctx = s.ctx().clone();
        let n = AutomatonN::build(&s)
            .unwrap()
            .merge_distinguished()
            .unwrap();
        let reach = n.reachable();
        let r = |a: i64| n.state_id(NState::Reg(ctx.from_int(a))).unwrap();
        assert!(!reach[r(0) as usize]);
        assert_eq!(reach.iter().filter(|&&x| x).count(), 5);
        let (f, g) = (0, 1);
        let expected = [
            (0, f, r(3)),
            (0, g, r(2)),
            (r(3), f, r(2)),
            (r(3), g, r(1)),
            (r(2), f, r(2)),
            (r(2), g, r(3)),
            (r(1), f, r(4)),
            (r(1), g, r(2)),
            (r(4), f, r(4)),
            (r(4), g, r(1)),
        ];
        for (from, l, to) in expected {
            assert_eq!(n.next(from, l), to);
        }
        let accepting: Vec<u32> = (0..n.num_states() as u32)
            .filter(|&i| reach[i as usize] && n.is_accepting(i))
            .collect();
        assert_eq!(accepting, vec![0, r(2), r(3)]);
    }

    #[test]
    fn merge_requires_minus_one_square() {
        let n = AutomatonN::build(&f3_maximal()).unwrap();
        assert_eq!(
            n.merge_distinguished().unwrap_err(),
            AutomatonError::MergeNotLicensed
        );
    }

    #[test]
    fn lazy_examples() {
        let s = f5_pair();
        let n = AutomatonN::build(&s).unwrap();
        assert!(n.lazy_accepts(&Word::empty()));
        assert!(n.lazy_accepts(&s.parse_word("ggf").unwrap()));
        assert_eq!(
            n.lazy_run(&s.parse_word("gf").unwrap()),
            LazyVerdict::Rejected { at: 2 }
        );
        let t = f3_maximal();
        let nt = AutomatonN::build(&t).unwrap();
        assert!(!nt.lazy_accepts(&t.parse_word("hgg").unwrap()));
        // x^2 - 1 is reducible over F_3, so any word starting with g fails at once.
        assert_eq!(
            nt.lazy_run(&t.parse_word("ghh").unwrap()),
            LazyVerdict::Rejected { at: 1 }
        );
    }

    #[test]
    fn subset_text_round_trip() {
        let ctx = FqCtx::new(3, 2).unwrap();
        let a = ctx.parse("[1,2]").unwrap();
        let subset = vec![NState::Start, NState::Dist(a), NState::Reg(FqElem::ONE)];
        let text = format_subset(&ctx, &subset);
        assert_eq!(text, "{I,<[1,2]>,([1,0])}");
        assert_eq!(parse_subset(&ctx, &text).unwrap(), subset);
        assert_eq!(parse_subset(&ctx, "{}").unwrap(), vec![]);
        assert!(parse_subset(&ctx, "{Q}").is_err());
    }

    #[test]
    fn export_format_parsing() {
        assert_eq!("DOT".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
        assert_eq!(
            "svg".parse::<ExportFormat>().unwrap_err(),
            AutomatonError::UnsupportedFormat("svg".into())
        );
    }
}
