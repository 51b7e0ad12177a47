use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::symbol::{Symbol, EPSILON_NAME};
use super::FsmError;

pub type StateId = usize;

/// A transition label; `None` is epsilon.
pub type Label = Option<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub input: Label,
    pub output: Label,
    pub target: StateId,
}

/// Mutable construction side of an [`Fst`].
#[derive(Debug, Clone)]
pub struct FstBuilder {
    initial: StateId,
    finals: Vec<bool>,
    transitions: Vec<Vec<Transition>>,
}

impl Default for FstBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl FstBuilder {
    /// A builder holding a single, non-final initial state `0`.
    pub fn new() -> Self {
        FstBuilder {
            initial: 0,
            finals: vec![false],
            transitions: vec![Vec::new()],
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.finals.push(false);
        self.transitions.push(Vec::new());
        self.finals.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial = state;
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn add_transition(&mut self, from: StateId, input: Label, output: Label, to: StateId) {
        self.transitions[from].push(Transition {
            input,
            output,
            target: to,
        });
    }

    /// Copies every state and transition of `fst` into this builder and
    /// returns the id offset of the copy.
    pub fn splice(&mut self, fst: &Fst) -> StateId {
        let offset = self.num_states();
        for s in 0..fst.num_states() {
            let id = self.add_state();
            self.finals[id] = fst.is_final(s);
        }
        for s in 0..fst.num_states() {
            for t in fst.transitions(s) {
                self.add_transition(s + offset, t.input.clone(), t.output.clone(), t.target + offset);
            }
        }
        offset
    }

    /// Validates endpoints and rejects epsilon-input cycles that emit
    /// output, then freezes the machine.
    pub fn build(mut self) -> Result<Fst, FsmError> {
        let n = self.finals.len();
        if self.initial >= n {
            return Err(FsmError::InvalidState(self.initial));
        }
        for arcs in &mut self.transitions {
            if let Some(bad) = arcs.iter().find(|t| t.target >= n) {
                return Err(FsmError::InvalidState(bad.target));
            }
            arcs.sort();
            arcs.dedup();
        }
        let fst = Fst {
            initial: self.initial,
            finals: self.finals,
            transitions: self.transitions,
        };
        fst.check_epsilon_output_cycles()?;
        Ok(fst)
    }
}

/// An unweighted finite-state transducer over [`Symbol`] pairs.
///
/// Relations are sets: path multiplicity is not tracked. Values are
/// immutable; build them with [`FstBuilder`] or the operations in
/// [`crate::fsm::ops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fst {
    initial: StateId,
    finals: Vec<bool>,
    transitions: Vec<Vec<Transition>>,
}

impl Fst {
    /// The empty relation.
    pub fn empty() -> Self {
        FstBuilder::new().build().expect("trivial machine")
    }

    /// Relates the empty string to itself only.
    pub fn epsilon() -> Self {
        let mut b = FstBuilder::new();
        b.set_final(0, true);
        b.build().expect("trivial machine")
    }

    /// Identity relation on `symbols*`.
    pub fn identity<'a, I: IntoIterator<Item = &'a Symbol>>(symbols: I) -> Self {
        let mut b = FstBuilder::new();
        b.set_final(0, true);
        for s in symbols {
            b.add_transition(0, Some(s.clone()), Some(s.clone()), 0);
        }
        b.build().expect("no epsilon transitions")
    }

    /// Acceptor for exactly one string.
    pub fn acceptor_of(seq: &[Symbol]) -> Self {
        let mut b = FstBuilder::new();
        let mut cur = 0;
        for s in seq {
            let next = b.add_state();
            b.add_transition(cur, Some(s.clone()), Some(s.clone()), next);
            cur = next;
        }
        b.set_final(cur, true);
        b.build().expect("no epsilon transitions")
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&s| self.finals[s])
    }

    /// Outgoing transitions of `state`, sorted.
    pub fn transitions(&self, state: StateId) -> &[Transition] {
        &self.transitions[state]
    }

    /// True when every transition carries identical input and output.
    pub fn is_acceptor(&self) -> bool {
        self.transitions.iter().flatten().all(|t| t.input == t.output)
    }

    /// True for an epsilon-free acceptor with at most one transition per
    /// (state, symbol).
    pub fn is_deterministic_acceptor(&self) -> bool {
        self.is_acceptor()
            && self
                .transitions
                .iter()
                .all(|arcs| arcs.iter().all(|t| t.input.is_some()) && arcs.windows(2).all(|w| w[0].input != w[1].input))
    }

    pub fn input_symbols(&self) -> BTreeSet<Symbol> {
        self.transitions
            .iter()
            .flatten()
            .filter_map(|t| t.input.clone())
            .collect()
    }

    pub fn output_symbols(&self) -> BTreeSet<Symbol> {
        self.transitions
            .iter()
            .flatten()
            .filter_map(|t| t.output.clone())
            .collect()
    }

    /// Copy into a builder for further editing.
    pub fn to_builder(&self) -> FstBuilder {
        FstBuilder {
            initial: self.initial,
            finals: self.finals.clone(),
            transitions: self.transitions.clone(),
        }
    }

    /// Removes states that are not both accessible and co-accessible.
    /// Surviving states keep their relative order.
    pub fn trim(&self) -> Fst {
        let n = self.num_states();
        let mut forward = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        forward[self.initial] = true;
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        while let Some(s) = queue.pop_front() {
            for t in &self.transitions[s] {
                reverse[t.target].push(s);
                if !forward[t.target] {
                    forward[t.target] = true;
                    queue.push_back(t.target);
                }
            }
        }
        let mut backward = vec![false; n];
        let mut queue: VecDeque<StateId> = self.final_states().filter(|&s| forward[s]).collect();
        for &s in &queue {
            backward[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &reverse[s] {
                if !backward[p] {
                    backward[p] = true;
                    queue.push_back(p);
                }
            }
        }
        if !backward[self.initial] {
            return Fst::empty();
        }
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if forward[s] && backward[s] {
                remap[s] = next;
                next += 1;
            }
        }
        let mut finals = vec![false; next];
        let mut transitions = vec![Vec::new(); next];
        for s in 0..n {
            if remap[s] == usize::MAX {
                continue;
            }
            finals[remap[s]] = self.finals[s];
            transitions[remap[s]] = self.transitions[s]
                .iter()
                .filter(|t| remap[t.target] != usize::MAX)
                .map(|t| Transition {
                    input: t.input.clone(),
                    output: t.output.clone(),
                    target: remap[t.target],
                })
                .collect();
        }
        Fst {
            initial: remap[self.initial],
            finals,
            transitions,
        }
    }

    /// Fails if some cycle of epsilon-input transitions emits output, which
    /// would relate one input to infinitely many outputs.
    pub fn check_epsilon_output_cycles(&self) -> Result<(), FsmError> {
        let scc = epsilon_input_sccs(self);
        for (s, arcs) in self.transitions.iter().enumerate() {
            for t in arcs {
                if t.input.is_none() && t.output.is_some() && scc[s] == scc[t.target] {
                    return Err(FsmError::EpsilonOutputCycle(s));
                }
            }
        }
        Ok(())
    }

    /// All lower-side strings related to `input`. Empty when `input` is not
    /// in the upper-side language.
    pub fn apply_down(&self, input: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
        let len = input.len();
        // Forward reachability over (state, position) configurations.
        let mut ids: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut configs: Vec<(StateId, usize)> = Vec::new();
        let mut edges: Vec<Vec<(usize, Label)>> = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |cfg: (StateId, usize),
                          configs: &mut Vec<(StateId, usize)>,
                          edges: &mut Vec<Vec<(usize, Label)>>,
                          queue: &mut VecDeque<usize>| {
            *ids.entry(cfg).or_insert_with(|| {
                configs.push(cfg);
                edges.push(Vec::new());
                queue.push_back(configs.len() - 1);
                configs.len() - 1
            })
        };
        intern((self.initial, 0), &mut configs, &mut edges, &mut queue);
        while let Some(id) = queue.pop_front() {
            let (state, pos) = configs[id];
            for t in &self.transitions[state] {
                let next_pos = match &t.input {
                    None => pos,
                    Some(sym) if pos < len && &input[pos] == sym => pos + 1,
                    Some(_) => continue,
                };
                let to = intern((t.target, next_pos), &mut configs, &mut edges, &mut queue);
                edges[id].push((to, t.output.clone()));
            }
        }

        // Co-accessibility from accepting end configurations.
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); configs.len()];
        for (from, out) in edges.iter().enumerate() {
            for &(to, _) in out {
                reverse[to].push(from);
            }
        }
        let mut live = vec![false; configs.len()];
        let mut queue: VecDeque<usize> = (0..configs.len())
            .filter(|&i| configs[i].1 == len && self.finals[configs[i].0])
            .collect();
        for &i in &queue {
            live[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &p in &reverse[i] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        if configs.is_empty() || !live[0] {
            return BTreeSet::new();
        }

        // Suffix output sets, computed from the last position backwards. Within
        // one position only epsilon-input edges connect configurations; their
        // cycles carry no output, so the fixpoint is finite.
        let mut by_pos: Vec<Vec<usize>> = vec![Vec::new(); len + 1];
        for (i, &(_, pos)) in configs.iter().enumerate() {
            if live[i] {
                by_pos[pos].push(i);
            }
        }
        let mut suffixes: Vec<BTreeSet<Vec<Symbol>>> = vec![BTreeSet::new(); configs.len()];
        for pos in (0..=len).rev() {
            for &i in &by_pos[pos] {
                if pos == len && self.finals[configs[i].0] {
                    suffixes[i].insert(Vec::new());
                }
                for (to, out) in &edges[i] {
                    if live[*to] && configs[*to].1 > pos {
                        let extended = prefix_all(out, &suffixes[*to]);
                        suffixes[i].extend(extended);
                    }
                }
            }
            loop {
                let mut changed = false;
                for &i in &by_pos[pos] {
                    for (to, out) in &edges[i] {
                        if *to == i || !live[*to] || configs[*to].1 != pos {
                            continue;
                        }
                        let extended = prefix_all(out, &suffixes[*to]);
                        for s in extended {
                            changed |= suffixes[i].insert(s);
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        std::mem::take(&mut suffixes[0])
    }

    /// Whether `input` belongs to the upper-side language.
    pub fn accepts(&self, input: &[Symbol]) -> bool {
        !self.apply_down(input).is_empty()
    }

    /// The unique output for `input`, if the relation has exactly one.
    pub fn apply_functional(&self, input: &[Symbol]) -> Option<Vec<Symbol>> {
        let mut outs = self.apply_down(input);
        if outs.len() == 1 {
            outs.pop_first()
        } else {
            None
        }
    }
}

fn prefix_all(label: &Label, suffixes: &BTreeSet<Vec<Symbol>>) -> Vec<Vec<Symbol>> {
    suffixes
        .iter()
        .map(|suffix| match label {
            None => suffix.clone(),
            Some(sym) => {
                let mut v = Vec::with_capacity(suffix.len() + 1);
                v.push(sym.clone());
                v.extend_from_slice(suffix);
                v
            }
        })
        .collect()
}

/// Strongly connected component id per state, over epsilon-input edges only
/// (iterative Tarjan).
fn epsilon_input_sccs(fst: &Fst) -> Vec<usize> {
    let n = fst.num_states();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut comp_count = 0;
    let eps_succ = |s: StateId| -> Vec<StateId> {
        fst.transitions[s]
            .iter()
            .filter(|t| t.input.is_none())
            .map(|t| t.target)
            .collect()
    };
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(StateId, Vec<StateId>, usize)> = vec![(root, eps_succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, succ, i)) = call.last_mut() {
            let v = *v;
            if *i < succ.len() {
                let w = succ[*i];
                *i += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, eps_succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    comp
}

impl fmt::Display for Fst {
    /// One line per transition (`from to input output`) followed by one
    /// line per final state, AT&T style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |l: &Label| l.as_ref().map_or(EPSILON_NAME, |s| s.name()).to_string();
        // Initial state first, as AT&T readers expect.
        let order: Vec<StateId> = std::iter::once(self.initial)
            .chain((0..self.num_states()).filter(|&s| s != self.initial))
            .collect();
        for &s in &order {
            for t in &self.transitions[s] {
                writeln!(f, "{}\t{}\t{}\t{}", s, t.target, name(&t.input), name(&t.output))?;
            }
        }
        for &s in &order {
            if self.finals[s] {
                writeln!(f, "{s}")?;
            }
        }
        Ok(())
    }
}
