use std::collections::{BTreeSet, HashMap, VecDeque};

use super::fst::{Fst, FstBuilder, StateId};
use super::symbol::{Alphabet, Symbol};
use super::FsmError;

/// Complete deterministic automaton over an explicit alphabet.
///
/// Every state has exactly one successor per alphabet symbol (a dead state
/// absorbs missing moves), which makes complement and products direct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    next: Vec<Vec<usize>>,
}

impl Dfa {
    /// Accepts nothing.
    pub fn empty_language(alphabet: &Alphabet) -> Dfa {
        Dfa {
            alphabet: alphabet.clone(),
            start: 0,
            accepting: vec![false],
            next: vec![vec![0; alphabet.len()]],
        }
    }

    /// Accepts every string over the alphabet.
    pub fn universal(alphabet: &Alphabet) -> Dfa {
        Dfa::empty_language(alphabet).complement()
    }

    /// Subset construction over the input side of `nfa`.
    pub fn from_nfa(nfa: &Fst, alphabet: &Alphabet) -> Result<Dfa, FsmError> {
        Dfa::subsets(nfa, alphabet, false)
    }

    /// Acceptor for the strings with a prefix in the input language of
    /// `nfa`. Every subset holding a final state is merged into one
    /// absorbing state, which keeps the construction small where the plain
    /// subset construction of `nfa . any*` would not be.
    pub fn with_any_suffix(nfa: &Fst, alphabet: &Alphabet) -> Result<Dfa, FsmError> {
        Dfa::subsets(nfa, alphabet, true)
    }

    fn subsets(nfa: &Fst, alphabet: &Alphabet, absorb: bool) -> Result<Dfa, FsmError> {
        let k = alphabet.len();
        let mut by_symbol: Vec<Vec<(usize, StateId)>> = vec![Vec::new(); nfa.num_states()];
        let mut eps: Vec<Vec<StateId>> = vec![Vec::new(); nfa.num_states()];
        for (s, (moves, eps_moves)) in by_symbol.iter_mut().zip(eps.iter_mut()).enumerate() {
            for t in nfa.transitions(s) {
                match &t.input {
                    None => eps_moves.push(t.target),
                    Some(sym) => {
                        let col = alphabet
                            .position(sym)
                            .ok_or_else(|| FsmError::UnknownSymbol(sym.name().to_string()))?;
                        moves.push((col, t.target));
                    }
                }
            }
        }
        let closure = |seed: &mut Vec<StateId>| {
            let mut seen: BTreeSet<StateId> = seed.iter().copied().collect();
            let mut stack = seed.clone();
            while let Some(s) = stack.pop() {
                for &t in &eps[s] {
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
            *seed = seen.into_iter().collect();
        };

        // Key of the absorbing state; never a real subset.
        let absorbing = vec![StateId::MAX];
        let mut start_set = vec![nfa.initial()];
        closure(&mut start_set);
        if absorb && start_set.iter().any(|&s| nfa.is_final(s)) {
            start_set = absorbing.clone();
        }
        let mut ids: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut sets: Vec<Vec<StateId>> = Vec::new();
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut accepting = Vec::new();
        ids.insert(start_set.clone(), 0);
        sets.push(start_set);
        let mut i = 0;
        while i < sets.len() {
            if sets[i] == absorbing {
                accepting.push(true);
                next.push(vec![i; k]);
                i += 1;
                continue;
            }
            let mut targets: Vec<Vec<StateId>> = vec![Vec::new(); k];
            for &s in &sets[i] {
                for &(col, t) in &by_symbol[s] {
                    targets[col].push(t);
                }
            }
            let mut row = Vec::with_capacity(k);
            for mut target in targets {
                closure(&mut target);
                if absorb && target.iter().any(|&s| nfa.is_final(s)) {
                    target = absorbing.clone();
                }
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        ids.insert(target.clone(), id);
                        sets.push(target);
                        id
                    }
                };
                row.push(id);
            }
            accepting.push(sets[i].iter().any(|&s| nfa.is_final(s)));
            next.push(row);
            i += 1;
        }
        Ok(Dfa {
            alphabet: alphabet.clone(),
            start: 0,
            accepting,
            next,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// Successor of `state` on `sym`; `None` if `sym` is outside the alphabet.
    pub fn step(&self, state: usize, sym: &Symbol) -> Option<usize> {
        self.alphabet.position(sym).map(|c| self.next[state][c])
    }

    pub fn run(&self, input: &[Symbol]) -> Option<usize> {
        input.iter().try_fold(self.start, |state, sym| self.step(state, sym))
    }

    pub fn accepts(&self, input: &[Symbol]) -> bool {
        self.run(input).is_some_and(|s| self.accepting[s])
    }

    pub fn accepts_empty(&self) -> bool {
        self.accepting[self.start]
    }

    /// True when no accepting state is reachable.
    pub fn is_empty_language(&self) -> bool {
        self.reachable().iter().all(|&s| !self.accepting[s])
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.next[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal equivalent automaton with canonical (breadth-first, alphabet
    /// order) state numbering, so equal languages give equal values.
    pub fn minimize(&self) -> Dfa {
        let reachable = self.reachable();
        let k = self.alphabet.len();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &s) in reachable.iter().enumerate() {
            local[s] = i;
        }
        let n = reachable.len();
        let next: Vec<Vec<usize>> = reachable
            .iter()
            .map(|&s| self.next[s].iter().map(|&t| local[t]).collect())
            .collect();
        let accepting: Vec<bool> = reachable.iter().map(|&s| self.accepting[s]).collect();

        // Moore partition refinement.
        let mut class: Vec<usize> = accepting.iter().map(|&a| usize::from(a)).collect();
        let mut count = class.iter().copied().collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut refined = Vec::with_capacity(n);
            for s in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[s]);
                sig.extend(next[s].iter().map(|&t| class[t]));
                let len = sig_ids.len();
                refined.push(*sig_ids.entry(sig).or_insert(len));
            }
            let new_count = sig_ids.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Canonical renumbering of the quotient by BFS from the start class.
        let mut canon = vec![usize::MAX; count];
        let mut rep = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        canon[class[0]] = 0;
        rep.push(0);
        while let Some(s) = queue.pop_front() {
            for &t in &next[s] {
                if canon[class[t]] == usize::MAX {
                    canon[class[t]] = rep.len();
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting: rep.iter().map(|&s| accepting[s]).collect(),
            next: rep
                .iter()
                .map(|&s| next[s].iter().map(|&t| canon[class[t]]).collect())
                .collect(),
        }
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            start: self.start,
            accepting: self.accepting.iter().map(|a| !a).collect(),
            next: self.next.clone(),
        }
    }

    fn product(&self, other: &Dfa, keep: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(
            self.alphabet, other.alphabet,
            "product of automata over different alphabets"
        );
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        ids.insert((self.start, other.start), 0);
        let mut next = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let pair = (self.next[a][c], other.next[b][c]);
                let id = *ids.entry(pair).or_insert_with(|| {
                    pairs.push(pair);
                    pairs.len() - 1
                });
                row.push(id);
            }
            accepting.push(keep(self.accepting[a], other.accepting[b]));
            next.push(row);
            i += 1;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            next,
        }
        .minimize()
    }

    pub fn intersect(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a && !b)
    }

    /// Re-expresses the automaton over `alphabet`, a superset of the current
    /// one. New symbols listed in `ignored` loop on every state; all other new
    /// symbols lead to rejection.
    pub fn with_alphabet(&self, alphabet: &Alphabet, ignored: &[Symbol]) -> Dfa {
        let dead = self.num_states();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(dead + 1);
        for s in 0..=dead {
            let row = alphabet
                .iter()
                .map(|sym| {
                    if s == dead {
                        dead
                    } else if let Some(c) = self.alphabet.position(sym) {
                        self.next[s][c]
                    } else if ignored.contains(sym) {
                        s
                    } else {
                        dead
                    }
                })
                .collect();
            next.push(row);
        }
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Dfa {
            alphabet: alphabet.clone(),
            start: self.start,
            accepting,
            next,
        }
        .minimize()
    }

    /// Converts to an epsilon-free deterministic acceptor, dropping states
    /// from which no accepting state is reachable.
    pub fn to_fst(&self) -> Fst {
        let mut b = FstBuilder::new();
        while b.num_states() < self.num_states() {
            b.add_state();
        }
        b.set_initial(self.start);
        for s in 0..self.num_states() {
            b.set_final(s, self.accepting[s]);
            for (c, &t) in self.next[s].iter().enumerate() {
                let sym = self.alphabet.get(c).cloned();
                b.add_transition(s, sym.clone(), sym, t);
            }
        }
        b.build().expect("epsilon-free acceptor").trim()
    }
}
