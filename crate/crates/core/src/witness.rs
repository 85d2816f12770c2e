//! Permutation-style witness automata whose combined constructions reach
//! the predicted state counts.
//!
//! The base family has states `0..n`, initial state `0` and final state
//! `n-1`, over the fixed four-letter alphabet. Each letter plays one of
//! four roles: the full cycle `i -> i+1 mod n`, the transposition of the
//! two last states, the contraction sending `1` to `0`, or the identity.
//! A triple of these automata, with roles chosen per component, drives the
//! end-to-end verification.

use thiserror::Error;

use crate::automata::{AutomatonError, Dfa, StateId};

/// Fixed alphabet of every witness automaton, in transition-table order.
pub const WITNESS_ALPHABET: [char; 4] = ['a', 'b', 'c', 'd'];

/// The roles need distinct cycle/transposition targets, so three states at
/// least.
pub const MIN_WITNESS_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness automata need at least {MIN_WITNESS_SIZE} states, got {n}")]
    SizeTooSmall { n: usize },
    #[error("letter roles must use each of 'a', 'b', 'c', 'd' exactly once")]
    InvalidRoles,
}

/// Assignment of the four letters to the four transition roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LetterRoles {
    pub cycle: char,
    pub transposition: char,
    pub contraction: char,
    pub identity: char,
}

impl LetterRoles {
    /// The letters must form a permutation of the witness alphabet.
    pub fn new(
        cycle: char,
        transposition: char,
        contraction: char,
        identity: char,
    ) -> Result<Self, WitnessError> {
        let mut letters = [cycle, transposition, contraction, identity];
        letters.sort_unstable();
        if letters != WITNESS_ALPHABET {
            return Err(WitnessError::InvalidRoles);
        }
        Ok(Self {
            cycle,
            transposition,
            contraction,
            identity,
        })
    }

    /// `a` cycles, `b` transposes, `c` contracts, `d` is the identity.
    pub fn standard() -> Self {
        Self::new('a', 'b', 'c', 'd').unwrap()
    }

    fn target(&self, letter: char, q: StateId, n: usize) -> StateId {
        match letter {
            l if l == self.cycle => (q + 1) % n,
            l if l == self.transposition => {
                if q == n - 2 {
                    n - 1
                } else if q == n - 1 {
                    n - 2
                } else {
                    q
                }
            }
            l if l == self.contraction => {
                if q == 1 {
                    0
                } else {
                    q
                }
            }
            _ => q,
        }
    }
}

/// The `n`-state witness automaton with the given letter roles: states
/// `0..n`, initial `0`, single final state `n-1`.
pub fn brzozowski(n: usize, roles: LetterRoles) -> Result<Dfa, WitnessError> {
    if n < MIN_WITNESS_SIZE {
        return Err(WitnessError::SizeTooSmall { n });
    }
    let transitions = (0..n)
        .map(|q| {
            WITNESS_ALPHABET
                .iter()
                .map(|&letter| roles.target(letter, q, n))
                .collect()
        })
        .collect();
    let dfa = Dfa::new(WITNESS_ALPHABET.to_vec(), n, 0, [n - 1], transitions)
        .expect("witness construction is structurally valid");
    Ok(dfa)
}

/// The witness triple `(A, B, C)` for sizes `(m, n, p)`: role assignments
/// differ per component so that no letter is the identity everywhere and
/// the middle automaton keeps the standard roles.
pub fn witness_triple(m: usize, n: usize, p: usize) -> Result<(Dfa, Dfa, Dfa), WitnessError> {
    let a = brzozowski(m, LetterRoles::new('a', 'c', 'b', 'd').unwrap())?;
    let b = brzozowski(n, LetterRoles::standard())?;
    let c = brzozowski(p, LetterRoles::new('d', 'b', 'c', 'a').unwrap())?;
    Ok((a, b, c))
}

/// The state transformation a word induces: entry `q` is the state reached
/// from `q` after reading the whole word, letters applied left to right.
pub fn word_action(dfa: &Dfa, word: &str) -> Result<Vec<StateId>, AutomatonError> {
    let mut action: Vec<StateId> = (0..dfa.state_count()).collect();
    for symbol in word.chars() {
        for q in action.iter_mut() {
            *q = dfa.step(*q, symbol)?;
        }
    }
    Ok(action)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roles_must_be_a_permutation() {
        assert!(LetterRoles::new('a', 'b', 'c', 'd').is_ok());
        assert!(LetterRoles::new('d', 'b', 'c', 'a').is_ok());
        assert_eq!(
            LetterRoles::new('a', 'a', 'c', 'd'),
            Err(WitnessError::InvalidRoles)
        );
        assert_eq!(
            LetterRoles::new('a', 'b', 'c', 'e'),
            Err(WitnessError::InvalidRoles)
        );
    }

    #[test]
    fn small_sizes_are_rejected() {
        assert_eq!(
            brzozowski(2, LetterRoles::standard()),
            Err(WitnessError::SizeTooSmall { n: 2 })
        );
        assert!(witness_triple(3, 3, 2).is_err());
        assert!(witness_triple(2, 3, 3).is_err());
    }

    #[test]
    fn standard_transition_table() {
        let w = brzozowski(4, LetterRoles::standard()).unwrap();
        assert_eq!(w.initial(), 0);
        assert_eq!(w.finals().iter().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(word_action(&w, "a").unwrap(), vec![1, 2, 3, 0]);
        assert_eq!(word_action(&w, "b").unwrap(), vec![0, 1, 3, 2]);
        assert_eq!(word_action(&w, "c").unwrap(), vec![0, 0, 2, 3]);
        assert_eq!(word_action(&w, "d").unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn witnesses_are_minimal() {
        for n in 3..=6 {
            let w = brzozowski(n, LetterRoles::standard()).unwrap();
            assert_eq!(w.minimize().state_count(), n, "n = {n}");
        }
        let (a, b, c) = witness_triple(3, 4, 5).unwrap();
        assert_eq!(a.minimize().state_count(), 3);
        assert_eq!(b.minimize().state_count(), 4);
        assert_eq!(c.minimize().state_count(), 5);
    }

    #[test]
    fn triple_roles_are_as_specified() {
        let (a, b, c) = witness_triple(4, 4, 4).unwrap();
        assert_eq!(a.alphabet(), WITNESS_ALPHABET);
        assert_eq!(b.alphabet(), WITNESS_ALPHABET);
        assert_eq!(c.alphabet(), WITNESS_ALPHABET);
        // A: 'a' cycles, 'b' contracts, 'c' transposes, 'd' fixes.
        assert_eq!(word_action(&a, "a").unwrap(), vec![1, 2, 3, 0]);
        assert_eq!(word_action(&a, "b").unwrap(), vec![0, 0, 2, 3]);
        assert_eq!(word_action(&a, "c").unwrap(), vec![0, 1, 3, 2]);
        assert_eq!(word_action(&a, "d").unwrap(), vec![0, 1, 2, 3]);
        // C: 'd' cycles, 'a' fixes.
        assert_eq!(word_action(&c, "d").unwrap(), vec![1, 2, 3, 0]);
        assert_eq!(word_action(&c, "a").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(word_action(&c, "b").unwrap(), vec![0, 1, 3, 2]);
        assert_eq!(word_action(&c, "c").unwrap(), vec![0, 0, 2, 3]);
    }

    #[test]
    fn powers_of_the_cycle_rotate() {
        let w = brzozowski(5, LetterRoles::standard()).unwrap();
        for k in 0..=5 {
            let action = word_action(&w, &"a".repeat(k)).unwrap();
            let expect: Vec<usize> = (0..5).map(|q| (q + k) % 5).collect();
            assert_eq!(action, expect, "k = {k}");
        }
    }

    #[test]
    fn cycle_transposition_words_move_single_states() {
        // (ab)^(k-2) sends q_(n-k) to q_(n-1) and fixes q_(n-2), for
        // 2 < k <= n; (ba)^(k-1) sends q_(n-k) to q_0 and fixes q_(n-1),
        // for 2 <= k <= n-1.
        for n in [5usize, 6] {
            let w = brzozowski(n, LetterRoles::standard()).unwrap();
            for k in 3..=n {
                let action = word_action(&w, &"ab".repeat(k - 2)).unwrap();
                assert_eq!(action[n - k], n - 1, "n = {n}, k = {k}");
                assert_eq!(action[n - 2], n - 2, "n = {n}, k = {k}");
            }
            for k in 2..=n - 1 {
                let action = word_action(&w, &"ba".repeat(k - 1)).unwrap();
                assert_eq!(action[n - k], 0, "n = {n}, k = {k}");
                assert_eq!(action[n - 1], n - 1, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn permutation_letters_act_bijectively() {
        let w = brzozowski(5, LetterRoles::standard()).unwrap();
        for letter in ["a", "b", "d"] {
            let mut action = word_action(&w, letter).unwrap();
            action.sort_unstable();
            assert_eq!(action, (0..5).collect::<Vec<_>>(), "letter {letter}");
        }
        // The contraction is not injective.
        let action = word_action(&w, "c").unwrap();
        assert_eq!(action[0], action[1]);
    }

    #[test]
    fn word_action_reports_unknown_symbols() {
        let w = brzozowski(3, LetterRoles::standard()).unwrap();
        assert_eq!(
            word_action(&w, "az"),
            Err(AutomatonError::UnknownSymbol('z'))
        );
    }
}
