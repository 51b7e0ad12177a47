//! Rational operations on transducers.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::fst::{Fst, FstBuilder, Label, StateId};
use super::symbol::Symbol;
use super::FsmError;

/// Transducer relating exactly `input` to `output`. The shorter side is
/// padded with epsilons at the end.
pub fn string_map(input: &[Symbol], output: &[Symbol]) -> Fst {
    let mut b = FstBuilder::new();
    let mut cur = 0;
    for i in 0..input.len().max(output.len()) {
        let next = b.add_state();
        b.add_transition(cur, input.get(i).cloned(), output.get(i).cloned(), next);
        cur = next;
    }
    b.set_final(cur, true);
    // A single acyclic path cannot hold an epsilon cycle.
    b.build().expect("linear machine")
}

/// Relation union.
pub fn union(a: &Fst, b: &Fst) -> Fst {
    let mut builder = FstBuilder::new();
    let oa = builder.splice(a);
    let ob = builder.splice(b);
    builder.add_transition(0, None, None, a.initial() + oa);
    builder.add_transition(0, None, None, b.initial() + ob);
    builder.build().expect("union preserves the epsilon-cycle invariant")
}

/// Union of any number of relations.
pub fn union_all<'a, I: IntoIterator<Item = &'a Fst>>(fsts: I) -> Fst {
    let mut builder = FstBuilder::new();
    for f in fsts {
        let off = builder.splice(f);
        builder.add_transition(0, None, None, f.initial() + off);
    }
    builder.build().expect("union preserves the epsilon-cycle invariant")
}

/// Pairwise concatenation of relations.
pub fn concat(a: &Fst, b: &Fst) -> Fst {
    let mut builder = FstBuilder::new();
    let oa = builder.splice(a);
    let ob = builder.splice(b);
    builder.add_transition(0, None, None, a.initial() + oa);
    for f in a.final_states() {
        builder.set_final(f + oa, false);
        builder.add_transition(f + oa, None, None, b.initial() + ob);
    }
    builder
        .build()
        .expect("concatenation preserves the epsilon-cycle invariant")
}

/// Concatenation of a sequence; the empty sequence yields [`Fst::epsilon`].
pub fn concat_all<'a, I: IntoIterator<Item = &'a Fst>>(fsts: I) -> Fst {
    let mut iter = fsts.into_iter();
    let Some(first) = iter.next() else {
        return Fst::epsilon();
    };
    iter.fold(first.clone(), |acc, f| concat(&acc, f))
}

/// Kleene closure.
///
/// Fails with [`FsmError::EpsilonOutputCycle`] when the operand relates the
/// empty input to a non-empty output, since the closure would then relate
/// it to infinitely many outputs.
pub fn star(a: &Fst) -> Result<Fst, FsmError> {
    let mut builder = FstBuilder::new();
    builder.set_final(0, true);
    let oa = builder.splice(a);
    builder.add_transition(0, None, None, a.initial() + oa);
    for f in a.final_states() {
        builder.add_transition(f + oa, None, None, 0);
    }
    builder.build()
}

/// Kleene plus: `a a*`.
pub fn plus(a: &Fst) -> Result<Fst, FsmError> {
    Ok(concat(a, &star(a)?))
}

/// Union with the empty-string identity.
pub fn optional(a: &Fst) -> Fst {
    union(a, &Fst::epsilon())
}

/// Relational composition: `(x, z)` iff some `y` has `(x, y)` in `a` and
/// `(y, z)` in `b`.
///
/// Epsilon moves are interleaved freely (an epsilon output of `a` advances
/// `a` alone, an epsilon input of `b` advances `b` alone). That may create
/// redundant paths but never changes the relation, which is all a
/// multiplicity-free transducer records. The result is trimmed.
pub fn compose(a: &Fst, b: &Fst) -> Fst {
    // b's transitions indexed by input label, per state.
    let b_index: Vec<BTreeMap<&Label, Vec<(&Label, StateId)>>> = (0..b.num_states())
        .map(|s| {
            let mut m: BTreeMap<&Label, Vec<(&Label, StateId)>> = BTreeMap::new();
            for t in b.transitions(s) {
                m.entry(&t.input).or_default().push((&t.output, t.target));
            }
            m
        })
        .collect();

    let mut builder = FstBuilder::new();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    ids.insert((a.initial(), b.initial()), 0);
    queue.push_back((a.initial(), b.initial()));
    let mut intern = |pair: (StateId, StateId), builder: &mut FstBuilder, queue: &mut VecDeque<(StateId, StateId)>| {
        *ids.entry(pair).or_insert_with(|| {
            queue.push_back(pair);
            builder.add_state()
        })
    };
    let eps: Label = None;
    while let Some((qa, qb)) = queue.pop_front() {
        let from = intern((qa, qb), &mut builder, &mut queue);
        if a.is_final(qa) && b.is_final(qb) {
            builder.set_final(from, true);
        }
        for t in a.transitions(qa) {
            match &t.output {
                None => {
                    let to = intern((t.target, qb), &mut builder, &mut queue);
                    builder.add_transition(from, t.input.clone(), None, to);
                }
                mid => {
                    if let Some(arcs) = b_index[qb].get(mid) {
                        for &(out, tb) in arcs {
                            let to = intern((t.target, tb), &mut builder, &mut queue);
                            builder.add_transition(from, t.input.clone(), out.clone(), to);
                        }
                    }
                }
            }
        }
        if let Some(arcs) = b_index[qb].get(&eps) {
            for &(out, tb) in arcs {
                let to = intern((qa, tb), &mut builder, &mut queue);
                builder.add_transition(from, None, out.clone(), to);
            }
        }
    }
    builder
        .build()
        .expect("composition of valid machines has no emitting epsilon cycle")
        .trim()
}

/// Composes a chain of transducers left to right.
pub fn compose_all<'a, I: IntoIterator<Item = &'a Fst>>(fsts: I) -> Option<Fst> {
    let mut iter = fsts.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, f| compose(&acc, f)))
}

/// Inverts the relation by swapping input and output labels.
///
/// Fails when the inverse would relate one input to infinitely many
/// outputs (an epsilon-output loop of `a` becomes an epsilon-input loop).
pub fn invert(a: &Fst) -> Result<Fst, FsmError> {
    let mut b = FstBuilder::new();
    while b.num_states() < a.num_states() {
        b.add_state();
    }
    b.set_initial(a.initial());
    for s in 0..a.num_states() {
        b.set_final(s, a.is_final(s));
        for t in a.transitions(s) {
            b.add_transition(s, t.output.clone(), t.input.clone(), t.target);
        }
    }
    b.build()
}
