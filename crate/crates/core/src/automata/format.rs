//! On-disk JSON format for automata.
//!
//! A DFA file looks like:
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "states": 2,
//!   "initial": 0,
//!   "finals": [1],
//!   "transitions": { "a": [1, 1], "b": [0, 0] }
//! }
//! ```
//!
//! `transitions` maps each symbol to a column of targets indexed by state.
//! NFA files use `initials` (an array) and arrays of targets per entry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AutomatonError, Dfa, Nfa, StateId};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaFile {
    alphabet: Vec<String>,
    states: usize,
    initial: StateId,
    finals: Vec<StateId>,
    transitions: BTreeMap<String, Vec<StateId>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NfaFile {
    alphabet: Vec<String>,
    states: usize,
    initials: Vec<StateId>,
    finals: Vec<StateId>,
    transitions: BTreeMap<String, Vec<Vec<StateId>>>,
}

fn parse_alphabet(entries: &[String]) -> Result<Vec<char>, AutomatonError> {
    entries
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(AutomatonError::Format(format!(
                    "alphabet entry {s:?} must be a single character"
                ))),
            }
        })
        .collect()
}

fn symbol_column<'a, T>(
    transitions: &'a BTreeMap<String, Vec<T>>,
    symbol: char,
    states: usize,
) -> Result<&'a [T], AutomatonError> {
    let column = transitions.get(&symbol.to_string()).ok_or_else(|| {
        AutomatonError::Format(format!("missing transitions for symbol '{symbol}'"))
    })?;
    if column.len() != states {
        return Err(AutomatonError::Format(format!(
            "transitions for '{symbol}' list {} states, expected {states}",
            column.len()
        )));
    }
    Ok(column)
}

impl Dfa {
    /// Pretty-printed JSON in the on-disk format; keys and state order are
    /// deterministic.
    pub fn to_json(&self) -> String {
        let transitions: BTreeMap<String, Vec<StateId>> = self
            .alphabet
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                let column = (0..self.state_count).map(|q| self.next(q, s)).collect();
                (c.to_string(), column)
            })
            .collect();
        let file = DfaFile {
            alphabet: self.alphabet.iter().map(char::to_string).collect(),
            states: self.state_count,
            initial: self.initial,
            finals: self.finals.iter().copied().collect(),
            transitions,
        };
        serde_json::to_string_pretty(&file).expect("DFA serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Dfa, AutomatonError> {
        let file: DfaFile =
            serde_json::from_str(text).map_err(|e| AutomatonError::Format(e.to_string()))?;
        let alphabet = parse_alphabet(&file.alphabet)?;
        if file.transitions.len() != alphabet.len() {
            return Err(AutomatonError::Format(format!(
                "transitions list {} symbols, alphabet has {}",
                file.transitions.len(),
                alphabet.len()
            )));
        }
        let mut rows: Vec<Vec<StateId>> = vec![vec![0; alphabet.len()]; file.states];
        for (s, &c) in alphabet.iter().enumerate() {
            let column = symbol_column(&file.transitions, c, file.states)?;
            for (q, &target) in column.iter().enumerate() {
                rows[q][s] = target;
            }
        }
        Dfa::new(alphabet, file.states, file.initial, file.finals, rows)
    }
}

impl Nfa {
    pub fn to_json(&self) -> String {
        let transitions: BTreeMap<String, Vec<Vec<StateId>>> = self
            .alphabet
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                let column = (0..self.state_count)
                    .map(|q| self.targets(q, s).iter().copied().collect())
                    .collect();
                (c.to_string(), column)
            })
            .collect();
        let file = NfaFile {
            alphabet: self.alphabet.iter().map(char::to_string).collect(),
            states: self.state_count,
            initials: self.initials.iter().copied().collect(),
            finals: self.finals.iter().copied().collect(),
            transitions,
        };
        serde_json::to_string_pretty(&file).expect("NFA serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Nfa, AutomatonError> {
        let file: NfaFile =
            serde_json::from_str(text).map_err(|e| AutomatonError::Format(e.to_string()))?;
        let alphabet = parse_alphabet(&file.alphabet)?;
        if file.transitions.len() != alphabet.len() {
            return Err(AutomatonError::Format(format!(
                "transitions list {} symbols, alphabet has {}",
                file.transitions.len(),
                alphabet.len()
            )));
        }
        let mut rows: Vec<Vec<Vec<StateId>>> =
            vec![vec![Vec::new(); alphabet.len()]; file.states];
        for (s, &c) in alphabet.iter().enumerate() {
            let column = symbol_column(&file.transitions, c, file.states)?;
            for (q, targets) in column.iter().enumerate() {
                rows[q][s] = targets.clone();
            }
        }
        Nfa::new(alphabet, file.states, file.initials, file.finals, rows)
    }
}
