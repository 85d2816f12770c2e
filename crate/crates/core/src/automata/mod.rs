//! Complete deterministic and nondeterministic finite automata over small
//! alphabets, with the constructions needed for combined catenation: subset
//! construction, minimization, catenation, boolean products, equivalence.
//!
//! States are dense indices `0..state_count`. Every automaton is complete:
//! a DFA has exactly one target per state and symbol, an NFA a (possibly
//! empty) target set. Constructions that renumber states (accessible part,
//! subset construction, minimization) always number by breadth-first
//! discovery order, scanning symbols in alphabet order, so results are
//! canonical and reproducible.

mod format;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("symbol '{0}' is not in the alphabet")]
    UnknownSymbol(char),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("malformed automaton file: {0}")]
    Format(String),
}

/// One of the sixteen binary boolean set operations, as a four-entry truth
/// table. Bit `3 - (2 in_left + in_right)` of the index holds the output,
/// so the index enumerates the tables with inputs ordered
/// `(F,F), (F,T), (T,F), (T,T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanOp {
    bits: u8,
}

/// Set-algebra labels, with `N` the left and `P` the right operand.
const OP_NAMES: [&str; 16] = [
    "∅", "N∩P", "N∩P̄", "N", "N̄∩P", "P", "N⊕P", "N∪P", "N̄∩P̄", "N̄⊕P", "P̄", "N∪P̄", "N̄",
    "N̄∪P", "N̄∪P̄", "Σ*",
];

const OP_ASCII: [&str; 16] = [
    "empty", "and", "diff", "n", "rdiff", "p", "xor", "or", "nor", "xnor", "notp", "impliedby",
    "notn", "implies", "nand", "all",
];

impl BooleanOp {
    pub const AND: Self = Self { bits: 0b0001 };
    pub const XOR: Self = Self { bits: 0b0110 };
    pub const OR: Self = Self { bits: 0b0111 };

    pub const ALL: [Self; 16] = {
        let mut all = [Self { bits: 0 }; 16];
        let mut i = 0;
        while i < 16 {
            all[i] = Self { bits: i as u8 };
            i += 1;
        }
        all
    };

    /// Truth table by input pair: `ff` is the output on `(false, false)`,
    /// `ft` on `(false, true)`, and so on.
    pub const fn from_truth(ff: bool, ft: bool, tf: bool, tt: bool) -> Self {
        Self {
            bits: (ff as u8) << 3 | (ft as u8) << 2 | (tf as u8) << 1 | tt as u8,
        }
    }

    /// Truth table index in `0..16`.
    pub const fn index(self) -> usize {
        self.bits as usize
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 16, "truth table index out of range");
        Self { bits: index as u8 }
    }

    pub const fn apply(self, in_left: bool, in_right: bool) -> bool {
        let slot = 3 - ((in_left as u8) * 2 + in_right as u8);
        (self.bits >> slot) & 1 == 1
    }

    /// True for the six operations whose result ignores one operand:
    /// constants, projections and complemented projections.
    pub const fn is_degenerate(self) -> bool {
        matches!(self.bits, 0 | 3 | 5 | 10 | 12 | 15)
    }

    /// Set-algebra label, e.g. `N⊕P`.
    pub fn name(self) -> &'static str {
        OP_NAMES[self.index()]
    }

    /// Stable ASCII identifier, e.g. `xor`; also accepted by [`Self::parse`].
    pub fn ascii_name(self) -> &'static str {
        OP_ASCII[self.index()]
    }

    /// Lookup by ASCII name or a common alias (case-insensitive), or by the
    /// exact set-algebra label such as `N⊕P` or the bare symbol `⊕`.
    pub fn parse(name: &str) -> Option<Self> {
        if let Some(index) = OP_NAMES.iter().position(|&label| label == name) {
            return Some(Self::from_index(index));
        }
        let lower = name.to_ascii_lowercase();
        let index = match lower.as_str() {
            "empty" | "false" | "none" => 0,
            "and" | "intersection" | "cap" | "∩" => 1,
            "diff" | "minus" | "setminus" | "-" | "−" => 2,
            "n" | "left" | "first" => 3,
            "rdiff" => 4,
            "p" | "right" | "second" => 5,
            "xor" | "symdiff" | "oplus" | "⊕" => 6,
            "or" | "union" | "cup" | "∪" => 7,
            "nor" => 8,
            "xnor" | "iff" => 9,
            "notp" => 10,
            "impliedby" | "ornotp" => 11,
            "notn" => 12,
            "implies" => 13,
            "nand" => 14,
            "all" | "true" | "universe" => 15,
            _ => return None,
        };
        Some(Self::from_index(index))
    }
}

impl fmt::Display for BooleanOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complete DFA: one initial state, total transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<char>,
    state_count: usize,
    initial: StateId,
    finals: BTreeSet<StateId>,
    /// Row-major: target of `(q, s)` at `q * alphabet.len() + s`.
    delta: Vec<StateId>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<char>,
        state_count: usize,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
        transitions: Vec<Vec<StateId>>,
    ) -> Result<Self, AutomatonError> {
        validate_alphabet(&alphabet)?;
        if state_count == 0 {
            return Err(AutomatonError::InvalidAutomaton(
                "a complete automaton needs at least one state".into(),
            ));
        }
        if initial >= state_count {
            return Err(AutomatonError::InvalidAutomaton(format!(
                "initial state {initial} out of range for {state_count} states"
            )));
        }
        let finals: BTreeSet<StateId> = finals.into_iter().collect();
        if let Some(&q) = finals.iter().find(|&&q| q >= state_count) {
            return Err(AutomatonError::InvalidAutomaton(format!(
                "final state {q} out of range for {state_count} states"
            )));
        }
        if transitions.len() != state_count {
            return Err(AutomatonError::InvalidAutomaton(format!(
                "expected {state_count} transition rows, got {}",
                transitions.len()
            )));
        }
        let mut delta = Vec::with_capacity(state_count * alphabet.len());
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::InvalidAutomaton(format!(
                    "state {q} has {} transitions, expected {}",
                    row.len(),
                    alphabet.len()
                )));
            }
            for &t in row {
                if t >= state_count {
                    return Err(AutomatonError::InvalidAutomaton(format!(
                        "transition target {t} out of range for {state_count} states"
                    )));
                }
                delta.push(t);
            }
        }
        Ok(Self {
            alphabet,
            state_count,
            initial,
            finals,
            delta,
        })
    }

    /// Construction bypass for internal algorithms whose outputs are valid
    /// by construction.
    pub(crate) fn from_parts(
        alphabet: Vec<char>,
        state_count: usize,
        initial: StateId,
        finals: BTreeSet<StateId>,
        delta: Vec<StateId>,
    ) -> Self {
        debug_assert_eq!(delta.len(), state_count * alphabet.len());
        debug_assert!(initial < state_count);
        debug_assert!(delta.iter().all(|&t| t < state_count));
        debug_assert!(finals.iter().all(|&q| q < state_count));
        Self {
            alphabet,
            state_count,
            initial,
            finals,
            delta,
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn symbol_index(&self, symbol: char) -> Option<usize> {
        self.alphabet.iter().position(|&c| c == symbol)
    }

    /// Target of `q` under the symbol with index `s`.
    #[inline]
    pub fn next(&self, q: StateId, s: usize) -> StateId {
        self.delta[q * self.alphabet.len() + s]
    }

    pub fn step(&self, q: StateId, symbol: char) -> Result<StateId, AutomatonError> {
        let s = self
            .symbol_index(symbol)
            .ok_or(AutomatonError::UnknownSymbol(symbol))?;
        Ok(self.next(q, s))
    }

    pub fn accepts(&self, word: &str) -> Result<bool, AutomatonError> {
        let mut q = self.initial;
        for c in word.chars() {
            q = self.step(q, c)?;
        }
        Ok(self.is_final(q))
    }

    pub fn complement(&self) -> Dfa {
        let finals = (0..self.state_count)
            .filter(|q| !self.finals.contains(q))
            .collect();
        Dfa {
            finals,
            ..self.clone()
        }
    }

    /// Restriction to the states reachable from the initial state,
    /// renumbered in breadth-first discovery order.
    pub fn accessible(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut index: Vec<Option<u32>> = vec![None; self.state_count];
        let mut order: Vec<StateId> = Vec::new();
        index[self.initial] = Some(0);
        order.push(self.initial);
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for s in 0..k {
                let t = self.next(q, s);
                if index[t].is_none() {
                    index[t] = Some(order.len() as u32);
                    order.push(t);
                }
            }
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for s in 0..k {
                delta.push(index[self.next(q, s)].unwrap() as StateId);
            }
        }
        let finals = order
            .iter()
            .enumerate()
            .filter(|(_, q)| self.finals.contains(q))
            .map(|(i, _)| i)
            .collect();
        Dfa::from_parts(self.alphabet.clone(), order.len(), 0, finals, delta)
    }

    /// Minimal DFA for the same language: accessible part, then Hopcroft
    /// partition refinement, with quotient classes numbered in breadth-first
    /// order from the initial class.
    pub fn minimize(&self) -> Dfa {
        let acc = self.accessible();
        let n = acc.state_count;
        let k = acc.alphabet.len();
        let class_of = hopcroft(&acc);
        let class_count = class_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);

        // A representative per class; any member works because refinement
        // stopped, so same-class states agree on target classes.
        let mut rep = vec![usize::MAX; class_count];
        for q in 0..n {
            let c = class_of[q] as usize;
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }

        let mut index: Vec<Option<u32>> = vec![None; class_count];
        let mut order: Vec<usize> = Vec::new();
        let start = class_of[acc.initial] as usize;
        index[start] = Some(0);
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for s in 0..k {
                let t = class_of[acc.next(rep[c], s)] as usize;
                if index[t].is_none() {
                    index[t] = Some(order.len() as u32);
                    order.push(t);
                }
            }
        }

        let mut delta = Vec::with_capacity(order.len() * k);
        for &c in &order {
            for s in 0..k {
                let t = class_of[acc.next(rep[c], s)] as usize;
                delta.push(index[t].unwrap() as StateId);
            }
        }
        let finals = order
            .iter()
            .enumerate()
            .filter(|&(_, &c)| acc.finals.contains(&rep[c]))
            .map(|(i, _)| i)
            .collect();
        Dfa::from_parts(self.alphabet.clone(), order.len(), 0, finals, delta)
    }

    /// Language-equivalence class of every state: two states share an index
    /// exactly when they accept the same language. Indices are dense, in no
    /// particular order.
    pub fn equivalence_classes(&self) -> Vec<u32> {
        hopcroft(self)
    }

    /// Catenation `L(self) L(other)` as an NFA: both state sets side by
    /// side (`other` offset by `self.state_count()`), with the initial
    /// state of `other` injected whenever a final state of `self` is
    /// entered.
    pub fn catenate(&self, other: &Dfa) -> Result<Nfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let m = self.state_count;
        let total = m + other.state_count;

        let mut initials = BTreeSet::from([self.initial]);
        if self.is_final(self.initial) {
            initials.insert(m + other.initial);
        }

        let mut finals: BTreeSet<StateId> = other.finals.iter().map(|&q| m + q).collect();
        if other.is_final(other.initial) {
            finals.extend(self.finals.iter().copied());
        }

        let mut delta = Vec::with_capacity(total * k);
        for q in 0..m {
            for s in 0..k {
                let t = self.next(q, s);
                let mut set = BTreeSet::from([t]);
                if self.is_final(t) {
                    set.insert(m + other.initial);
                }
                delta.push(set);
            }
        }
        for r in 0..other.state_count {
            for s in 0..k {
                delta.push(BTreeSet::from([m + other.next(r, s)]));
            }
        }
        Ok(Nfa::from_parts(
            self.alphabet.clone(),
            total,
            initials,
            finals,
            delta,
        ))
    }

    /// Full cartesian product with finality decided by `op` on the two
    /// components. The pair `(q, r)` becomes state `q * other.state_count() + r`.
    pub fn boolean_product(&self, other: &Dfa, op: BooleanOp) -> Result<Dfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let n2 = other.state_count;
        let count = self.state_count * n2;
        let mut delta = Vec::with_capacity(count * k);
        let mut finals = BTreeSet::new();
        for q in 0..self.state_count {
            for r in 0..n2 {
                if op.apply(self.is_final(q), other.is_final(r)) {
                    finals.insert(q * n2 + r);
                }
                for s in 0..k {
                    delta.push(self.next(q, s) * n2 + other.next(r, s));
                }
            }
        }
        let initial = self.initial * n2 + other.initial;
        Ok(Dfa::from_parts(
            self.alphabet.clone(),
            count,
            initial,
            finals,
            delta,
        ))
    }

    /// Language equality, by breadth-first search over reachable state
    /// pairs.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut seen = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert((self.initial, other.initial), ());
        queue.push_back((self.initial, other.initial));
        while let Some((q, r)) = queue.pop_front() {
            if self.is_final(q) != other.is_final(r) {
                return Ok(false);
            }
            for s in 0..k {
                let next = (self.next(q, s), other.next(r, s));
                if seen.insert(next, ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
        Ok(true)
    }
}

/// Hopcroft partition refinement on an accessible complete DFA. Returns the
/// class of every state; classes are not yet canonically numbered.
fn hopcroft(dfa: &Dfa) -> Vec<u32> {
    let n = dfa.state_count;
    let k = dfa.alphabet.len();

    // Preimages per symbol.
    let mut pre: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for (s, row) in pre.iter_mut().enumerate() {
            row[dfa.next(q, s)].push(q as u32);
        }
    }

    let mut class_of: Vec<u32> = vec![0; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut pos: Vec<u32> = vec![0; n];

    let finals: Vec<u32> = (0..n as u32).filter(|q| dfa.finals.contains(&(*q as usize))).collect();
    let non_finals: Vec<u32> = (0..n as u32).filter(|q| !dfa.finals.contains(&(*q as usize))).collect();
    for group in [finals, non_finals] {
        if group.is_empty() {
            continue;
        }
        let c = members.len() as u32;
        for (i, &q) in group.iter().enumerate() {
            class_of[q as usize] = c;
            pos[q as usize] = i as u32;
        }
        members.push(group);
    }

    let mut on_list = vec![false; members.len() * k];
    let mut worklist: VecDeque<(u32, usize)> = VecDeque::new();
    for c in 0..members.len() as u32 {
        for s in 0..k {
            on_list[c as usize * k + s] = true;
            worklist.push_back((c, s));
        }
    }

    // Scratch buckets per class, cleared after each splitter.
    let mut hits: Vec<Vec<u32>> = vec![Vec::new(); members.len()];
    while let Some((a_cls, s)) = worklist.pop_front() {
        on_list[a_cls as usize * k + s] = false;
        let splitter = members[a_cls as usize].clone();
        let mut touched: Vec<u32> = Vec::new();
        for &q in &splitter {
            for &t in &pre[s][q as usize] {
                let c = class_of[t as usize];
                if hits[c as usize].is_empty() {
                    touched.push(c);
                }
                hits[c as usize].push(t);
            }
        }
        for c in touched {
            let moved = std::mem::take(&mut hits[c as usize]);
            if moved.len() == members[c as usize].len() {
                continue;
            }
            let new_cls = members.len() as u32;
            members.push(Vec::with_capacity(moved.len()));
            hits.push(Vec::new());
            on_list.resize(members.len() * k, false);
            for q in moved {
                // Swap-remove from the old class, keeping positions exact.
                let p = pos[q as usize] as usize;
                let old = &mut members[c as usize];
                let last = old.len() - 1;
                old.swap(p, last);
                pos[old[p] as usize] = p as u32;
                old.pop();
                class_of[q as usize] = new_cls;
                pos[q as usize] = members[new_cls as usize].len() as u32;
                members[new_cls as usize].push(q);
            }
            for sym in 0..k {
                // If the split class is queued its shrunken remainder stays
                // queued, so adding the new class keeps refinement exact;
                // otherwise the smaller half suffices.
                let pending = on_list[c as usize * k + sym];
                let add = if pending || members[new_cls as usize].len() <= members[c as usize].len()
                {
                    new_cls
                } else {
                    c
                };
                if !on_list[add as usize * k + sym] {
                    on_list[add as usize * k + sym] = true;
                    worklist.push_back((add, sym));
                }
            }
        }
    }
    class_of
}

fn validate_alphabet(alphabet: &[char]) -> Result<(), AutomatonError> {
    for (i, &c) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(&c) {
            return Err(AutomatonError::InvalidAutomaton(format!(
                "duplicate alphabet symbol '{c}'"
            )));
        }
    }
    Ok(())
}

/// NFA with a set of initial states and set-valued transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<char>,
    state_count: usize,
    initials: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    /// Row-major: targets of `(q, s)` at `q * alphabet.len() + s`.
    delta: Vec<BTreeSet<StateId>>,
}

impl Nfa {
    pub fn new(
        alphabet: Vec<char>,
        state_count: usize,
        initials: impl IntoIterator<Item = StateId>,
        finals: impl IntoIterator<Item = StateId>,
        transitions: Vec<Vec<Vec<StateId>>>,
    ) -> Result<Self, AutomatonError> {
        validate_alphabet(&alphabet)?;
        let initials: BTreeSet<StateId> = initials.into_iter().collect();
        let finals: BTreeSet<StateId> = finals.into_iter().collect();
        for &q in initials.iter().chain(&finals) {
            if q >= state_count {
                return Err(AutomatonError::InvalidAutomaton(format!(
                    "state {q} out of range for {state_count} states"
                )));
            }
        }
        if transitions.len() != state_count {
            return Err(AutomatonError::InvalidAutomaton(format!(
                "expected {state_count} transition rows, got {}",
                transitions.len()
            )));
        }
        let mut delta = Vec::with_capacity(state_count * alphabet.len());
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::InvalidAutomaton(format!(
                    "state {q} has {} transition sets, expected {}",
                    row.len(),
                    alphabet.len()
                )));
            }
            for targets in row {
                let set: BTreeSet<StateId> = targets.iter().copied().collect();
                if let Some(&t) = set.iter().find(|&&t| t >= state_count) {
                    return Err(AutomatonError::InvalidAutomaton(format!(
                        "transition target {t} out of range for {state_count} states"
                    )));
                }
                delta.push(set);
            }
        }
        Ok(Self {
            alphabet,
            state_count,
            initials,
            finals,
            delta,
        })
    }

    pub(crate) fn from_parts(
        alphabet: Vec<char>,
        state_count: usize,
        initials: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        delta: Vec<BTreeSet<StateId>>,
    ) -> Self {
        debug_assert_eq!(delta.len(), state_count * alphabet.len());
        Self {
            alphabet,
            state_count,
            initials,
            finals,
            delta,
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initials(&self) -> &BTreeSet<StateId> {
        &self.initials
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn targets(&self, q: StateId, s: usize) -> &BTreeSet<StateId> {
        &self.delta[q * self.alphabet.len() + s]
    }

    pub fn accepts(&self, word: &str) -> Result<bool, AutomatonError> {
        let words = self.state_count.div_ceil(64);
        let mut current = vec![0u64; words];
        for &q in &self.initials {
            current[q / 64] |= 1 << (q % 64);
        }
        for c in word.chars() {
            let s = self
                .alphabet
                .iter()
                .position(|&x| x == c)
                .ok_or(AutomatonError::UnknownSymbol(c))?;
            let mut next = vec![0u64; words];
            for (w, &block) in current.iter().enumerate() {
                let mut b = block;
                while b != 0 {
                    let q = w * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    for &t in self.targets(q, s) {
                        next[t / 64] |= 1 << (t % 64);
                    }
                }
            }
            current = next;
        }
        Ok(self
            .finals
            .iter()
            .any(|&q| current[q / 64] >> (q % 64) & 1 == 1))
    }

    /// Subset construction. Subsets are interned in breadth-first discovery
    /// order starting from the initial set; the empty subset, if reached,
    /// is an ordinary sink state.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let words = self.state_count.div_ceil(64).max(1);

        // Per (state, symbol) successor masks.
        let mut succ = vec![0u64; self.state_count * k * words];
        for q in 0..self.state_count {
            for s in 0..k {
                let base = (q * k + s) * words;
                for &t in self.targets(q, s) {
                    succ[base + t / 64] |= 1 << (t % 64);
                }
            }
        }
        let mut finals_mask = vec![0u64; words];
        for &q in &self.finals {
            finals_mask[q / 64] |= 1 << (q % 64);
        }

        let mut start = vec![0u64; words];
        for &q in &self.initials {
            start[q / 64] |= 1 << (q % 64);
        }

        let mut index: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut order: Vec<Vec<u64>> = Vec::new();
        index.insert(start.clone(), 0);
        order.push(start);
        let mut delta: Vec<StateId> = Vec::new();
        let mut finals = BTreeSet::new();
        let mut head = 0;
        while head < order.len() {
            let subset = order[head].clone();
            if subset
                .iter()
                .zip(&finals_mask)
                .any(|(a, b)| a & b != 0)
            {
                finals.insert(head);
            }
            for s in 0..k {
                let mut target = vec![0u64; words];
                for (w, &block) in subset.iter().enumerate() {
                    let mut b = block;
                    while b != 0 {
                        let q = w * 64 + b.trailing_zeros() as usize;
                        b &= b - 1;
                        let base = (q * k + s) * words;
                        for (t, chunk) in target.iter_mut().zip(&succ[base..base + words]) {
                            *t |= chunk;
                        }
                    }
                }
                let next_id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = order.len() as u32;
                        index.insert(target.clone(), id);
                        order.push(target);
                        id
                    }
                };
                delta.push(next_id as StateId);
            }
            head += 1;
        }
        Dfa::from_parts(self.alphabet.clone(), order.len(), 0, finals, delta)
    }
}
