//! Thompson-style NFA compiled from a [`Pattern`] and simulated state-set by state-set.

use alloc::vec;
use alloc::vec::Vec;

use super::{Pattern, SlopeSignature, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Symbol(Symbol, usize),
    Split(usize, usize),
    Match,
}

const MATCH: usize = 0;

/// An immutable automaton for one pattern; share it freely between queries.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    pattern: Pattern,
    states: Vec<State>,
    start: usize,
}

impl CompiledPattern {
    pub fn new(pattern: &Pattern) -> Self {
        let mut states = vec![State::Match];
        let start = compile(pattern, MATCH, &mut states);
        Self {
            pattern: pattern.clone(),
            states,
            start,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Cursor positioned before the first symbol.
    pub fn cursor(&self) -> MatchCursor<'_> {
        let mut stack = Vec::new();
        let mut set = StateSet::new(self.states.len());
        self.add(&mut set, self.start, &mut stack);
        MatchCursor {
            nfa: self,
            set,
            scratch: StateSet::new(self.states.len()),
            stack,
        }
    }

    /// Whether the whole of `symbols` is in the pattern's language.
    pub fn is_full_match(&self, symbols: &[Symbol]) -> bool {
        let mut cursor = self.cursor();
        for &s in symbols {
            cursor.step(s);
            if cursor.is_dead() {
                return false;
            }
        }
        cursor.is_accepting()
    }

    /// For every start symbol, the longest non-empty match beginning there.
    pub fn occurrences(&self, sig: &SlopeSignature) -> Vec<Occurrence> {
        let symbols = sig.symbols();
        let mut found = Vec::new();
        for start in 0..symbols.len() {
            let mut cursor = self.cursor();
            let mut last = None;
            for (end, &s) in symbols.iter().enumerate().skip(start) {
                cursor.step(s);
                if cursor.is_dead() {
                    break;
                }
                if cursor.is_accepting() {
                    last = Some(end);
                }
            }
            if let Some(end) = last {
                found.push(Occurrence {
                    start_symbol: start,
                    end_symbol: end,
                    series_start: sig.spans()[start].0,
                    series_end: sig.spans()[end].1,
                });
            }
        }
        found
    }

    fn add(&self, set: &mut StateSet, state: usize, stack: &mut Vec<usize>) {
        stack.push(state);
        while let Some(s) = stack.pop() {
            if !set.insert(s) {
                continue;
            }
            if let State::Split(a, b) = self.states[s] {
                stack.push(b);
                stack.push(a);
            }
        }
    }
}

fn compile(pattern: &Pattern, next: usize, states: &mut Vec<State>) -> usize {
    let push = |states: &mut Vec<State>, st: State| {
        states.push(st);
        states.len() - 1
    };
    match pattern {
        Pattern::Literal(sym) => push(states, State::Symbol(*sym, next)),
        Pattern::Concat(parts) => parts
            .iter()
            .rev()
            .fold(next, |after, part| compile(part, after, states)),
        Pattern::Alt(branches) => {
            let starts: Vec<usize> = branches.iter().map(|b| compile(b, next, states)).collect();
            let mut iter = starts.into_iter().rev();
            let last = iter.next().expect("alternation has branches");
            iter.fold(last, |rest, first| push(states, State::Split(first, rest)))
        }
        Pattern::Star(inner) => {
            let hub = push(states, State::Split(usize::MAX, next));
            let body = compile(inner, hub, states);
            states[hub] = State::Split(body, next);
            hub
        }
        Pattern::Optional(inner) => {
            let body = compile(inner, next, states);
            push(states, State::Split(body, next))
        }
    }
}

#[derive(Debug)]
struct StateSet {
    member: Vec<bool>,
    list: Vec<usize>,
}

impl Clone for StateSet {
    fn clone(&self) -> Self {
        Self {
            member: self.member.clone(),
            list: self.list.clone(),
        }
    }

    fn clone_from(&mut self, source: &Self) {
        self.member.clone_from(&source.member);
        self.list.clone_from(&source.list);
    }
}

impl StateSet {
    fn new(capacity: usize) -> Self {
        Self {
            member: vec![false; capacity],
            list: Vec::new(),
        }
    }

    fn insert(&mut self, s: usize) -> bool {
        if self.member[s] {
            return false;
        }
        self.member[s] = true;
        self.list.push(s);
        true
    }

    fn clear(&mut self) {
        for &s in &self.list {
            self.member[s] = false;
        }
        self.list.clear();
    }
}

/// Incremental matcher: feed symbols one at a time.
///
/// `clone_from` reuses the destination's buffers, which keeps walks over a
/// trie of inputs allocation-free.
#[derive(Debug)]
pub struct MatchCursor<'p> {
    nfa: &'p CompiledPattern,
    set: StateSet,
    scratch: StateSet,
    stack: Vec<usize>,
}

impl Clone for MatchCursor<'_> {
    fn clone(&self) -> Self {
        Self {
            nfa: self.nfa,
            set: self.set.clone(),
            scratch: self.scratch.clone(),
            stack: Vec::new(),
        }
    }

    fn clone_from(&mut self, source: &Self) {
        if !core::ptr::eq(self.nfa, source.nfa) {
            self.scratch = StateSet::new(source.nfa.states.len());
        }
        self.nfa = source.nfa;
        self.set.clone_from(&source.set);
    }
}

impl MatchCursor<'_> {
    pub fn step(&mut self, symbol: Symbol) {
        self.scratch.clear();
        for &s in &self.set.list {
            if let State::Symbol(expected, to) = self.nfa.states[s] {
                if expected == symbol {
                    self.nfa.add(&mut self.scratch, to, &mut self.stack);
                }
            }
        }
        core::mem::swap(&mut self.set, &mut self.scratch);
    }

    /// True when the symbols fed so far form a word of the language.
    pub fn is_accepting(&self) -> bool {
        self.set.member[MATCH]
    }

    /// True when no continuation can ever match.
    pub fn is_dead(&self) -> bool {
        self.set.list.is_empty()
    }
}

/// A match of symbols `start_symbol..=end_symbol`, covering samples
/// `series_start..=series_end` of the source sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub start_symbol: usize,
    pub end_symbol: usize,
    pub series_start: usize,
    pub series_end: usize,
}

/// Anchored match of the whole signature.
pub fn full_match(pattern: &Pattern, sig: &SlopeSignature) -> bool {
    CompiledPattern::new(pattern).is_full_match(sig.symbols())
}

/// Longest non-empty match starting at each symbol, in start order.
pub fn find_occurrences(pattern: &Pattern, sig: &SlopeSignature) -> Vec<Occurrence> {
    CompiledPattern::new(pattern).occurrences(sig)
}
