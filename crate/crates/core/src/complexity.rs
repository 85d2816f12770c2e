//! The combined construction: the deterministic automaton for
//! `L(A) (L(B) op L(C))` built directly over pairs of an `A`-state and a
//! tableau, plus predicted state counts and end-to-end verification.
//!
//! A state is `(i, T)` where `i` is the current state of `A` and the
//! tableau `T` marks the live pairs `(q, r)` of `B x C` runs started at
//! each point the prefix read so far could have left `L(A)`. Reading a
//! letter advances `i`, moves every marked pair pointwise, and injects the
//! pair of initial states whenever the new `i` is final in `A`. A state
//! accepts when some marked `(q, r)` satisfies `op` on finality in `B` and
//! `C`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use thiserror::Error;

use crate::automata::{AutomatonError, BooleanOp, Dfa, StateId};
use crate::combinatorics::{alpha, alpha_prime, union_count};
use crate::tableaux::{Tableau, MASK_CELL_LIMIT};
use crate::witness::{witness_triple, WitnessError};

/// Default cap on combined-construction states.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("operation {0} ignores an operand, so the combined bound does not apply")]
    DegenerateOperation(BooleanOp),
    #[error("combined construction may need up to {needed} states; the budget is {budget}")]
    StateBudgetExceeded { needed: u128, budget: u128 },
}

/// Label of one combined-construction state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CombinedState {
    /// Current state of the left automaton.
    pub a_state: StateId,
    /// Live `(B, C)` state pairs: rows index `B`, columns index `C`.
    pub tableau: Tableau,
}

/// A combined-construction DFA together with the label of each state.
/// State `i` of `dfa` carries `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedAutomaton {
    pub dfa: Dfa,
    pub labels: Vec<CombinedState>,
}

/// How a boolean operation reduces to intersection, union or symmetric
/// difference after complementing inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpDecomposition {
    pub base: BooleanOp,
    pub complement_left: bool,
    pub complement_right: bool,
}

/// Expresses `op` as one of the three base operations applied to possibly
/// complemented operands; `None` for the six degenerate operations.
///
/// Candidates are searched with as few complements as possible, preferring
/// a left complement over a right one, and bases in the order
/// intersection, union, symmetric difference, so the result is canonical.
pub fn canonicalize_op(op: BooleanOp) -> Option<OpDecomposition> {
    if op.is_degenerate() {
        return None;
    }
    const FLAGS: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];
    const BASES: [BooleanOp; 3] = [BooleanOp::AND, BooleanOp::OR, BooleanOp::XOR];
    for (complement_left, complement_right) in FLAGS {
        for base in BASES {
            let matches = [false, true].into_iter().all(|x| {
                [false, true].into_iter().all(|y| {
                    op.apply(x, y) == base.apply(x ^ complement_left, y ^ complement_right)
                })
            });
            if matches {
                return Some(OpDecomposition {
                    base,
                    complement_left,
                    complement_right,
                });
            }
        }
    }
    unreachable!("every non-degenerate operation reduces to a base operation")
}

/// Predicted state count for the combined operation at sizes `(m, n, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub value: BigInt,
    /// True when the value is only an upper bound rather than the exact
    /// state complexity.
    pub bound_only: bool,
}

/// The expected combined state complexity: exact for the symmetric
/// difference family, an upper bound for the intersection and union
/// families.
pub fn predicted_value(
    m: usize,
    n: usize,
    p: usize,
    op: BooleanOp,
) -> Result<Prediction, ComplexityError> {
    let decomposition =
        canonicalize_op(op).ok_or(ComplexityError::DegenerateOperation(op))?;
    let prediction = match decomposition.base {
        BooleanOp::XOR => Prediction {
            value: BigInt::from(m - 1) * alpha(n, p)
                + alpha_prime(n, p).expect("witness sizes are positive"),
            bound_only: false,
        },
        BooleanOp::AND => Prediction {
            value: composed_bound(m, n, p),
            bound_only: true,
        },
        BooleanOp::OR => Prediction {
            value: union_count(m, n, p),
            bound_only: true,
        },
        _ => unreachable!("canonical bases are AND, OR, XOR"),
    };
    Ok(prediction)
}

/// The bound obtained by composing catenation with a product of `B` and
/// `C`: `(m-1) 2^(np) + 2^(np-1)`.
pub fn composed_bound(m: usize, n: usize, p: usize) -> BigInt {
    assert!(m >= 1 && n >= 1 && p >= 1, "sizes must be at least 1");
    let np = n * p;
    BigInt::from(m - 1) * (BigInt::from(1) << np) + (BigInt::from(1) << (np - 1))
}

/// Worst-case state count of the construction, saturating at `u128::MAX`.
fn worst_case_states(m: usize, np: usize) -> u128 {
    if np >= 104 {
        return u128::MAX;
    }
    (m as u128).saturating_mul(1u128 << np)
}

pub fn build_combined(
    a: &Dfa,
    b: &Dfa,
    c: &Dfa,
    op: BooleanOp,
) -> Result<Dfa, ComplexityError> {
    Ok(combined_automaton(a, b, c, op)?.dfa)
}

pub fn combined_automaton(
    a: &Dfa,
    b: &Dfa,
    c: &Dfa,
    op: BooleanOp,
) -> Result<CombinedAutomaton, ComplexityError> {
    combined_automaton_with_budget(a, b, c, op, DEFAULT_STATE_BUDGET)
}

/// Breadth-first exploration from the initial state `(i_A, empty)` (with
/// the initial pair injected when `i_A` is already final). States are
/// numbered in discovery order. Fails if `B x C` does not fit the 64-cell
/// tableau representation or more than `budget` states appear.
pub fn combined_automaton_with_budget(
    a: &Dfa,
    b: &Dfa,
    c: &Dfa,
    op: BooleanOp,
    budget: u64,
) -> Result<CombinedAutomaton, ComplexityError> {
    if a.alphabet() != b.alphabet() || a.alphabet() != c.alphabet() {
        return Err(AutomatonError::AlphabetMismatch.into());
    }
    let k = a.alphabet().len();
    let n = b.state_count();
    let p = c.state_count();
    let np = n * p;
    let over_budget = |states: usize| ComplexityError::StateBudgetExceeded {
        needed: worst_case_states(a.state_count().max(states), np),
        budget: budget as u128,
    };
    if np > MASK_CELL_LIMIT {
        return Err(over_budget(0));
    }

    // Pointwise cell moves per symbol, and the mask of accepting cells.
    let cell = |q: usize, r: usize| q * p + r;
    let mut cell_move = vec![0usize; k * np];
    for s in 0..k {
        for q in 0..n {
            for r in 0..p {
                cell_move[s * np + cell(q, r)] = cell(b.next(q, s), c.next(r, s));
            }
        }
    }
    let mut accept_mask = 0u64;
    for q in 0..n {
        for r in 0..p {
            if op.apply(b.is_final(q), c.is_final(r)) {
                accept_mask |= 1 << cell(q, r);
            }
        }
    }
    let inject_bit = 1u64 << cell(b.initial(), c.initial());

    let start = (
        a.initial(),
        if a.is_final(a.initial()) { inject_bit } else { 0 },
    );
    let mut index: HashMap<(StateId, u64), u32> = HashMap::new();
    let mut labels_raw: Vec<(StateId, u64)> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start, 0);
    labels_raw.push(start);
    queue.push_back(start);

    let mut delta: Vec<StateId> = Vec::new();
    let mut finals = BTreeSet::new();
    let mut head = 0usize;
    while let Some((i, bits)) = queue.pop_front() {
        if bits & accept_mask != 0 {
            finals.insert(head);
        }
        for s in 0..k {
            let i2 = a.next(i, s);
            let mut bits2 = 0u64;
            let mut rest = bits;
            while rest != 0 {
                let c_idx = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                bits2 |= 1 << cell_move[s * np + c_idx];
            }
            if a.is_final(i2) {
                bits2 |= inject_bit;
            }
            let key = (i2, bits2);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if labels_raw.len() as u64 >= budget {
                        return Err(over_budget(labels_raw.len() + 1));
                    }
                    let id = labels_raw.len() as u32;
                    index.insert(key, id);
                    labels_raw.push(key);
                    queue.push_back(key);
                    id
                }
            };
            delta.push(id as StateId);
        }
        head += 1;
    }

    let labels: Vec<CombinedState> = labels_raw
        .iter()
        .map(|&(a_state, bits)| CombinedState {
            a_state,
            tableau: Tableau::from_bits(n, p, bits),
        })
        .collect();
    let dfa = Dfa::from_parts(
        a.alphabet().to_vec(),
        labels.len(),
        0,
        finals,
        delta,
    );
    Ok(CombinedAutomaton { dfa, labels })
}

/// Number of accessible combined states whose tableau is saturated. For
/// the symmetric difference family this equals the minimal state count.
pub fn saturated_state_census(
    a: &Dfa,
    b: &Dfa,
    c: &Dfa,
    op: BooleanOp,
) -> Result<usize, ComplexityError> {
    let combined = combined_automaton(a, b, c, op)?;
    Ok(count_saturated_labels(&combined))
}

fn count_saturated_labels(combined: &CombinedAutomaton) -> usize {
    combined
        .labels
        .iter()
        .filter(|state| state.tableau.is_saturated())
        .count()
}

/// Outcome of one end-to-end verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub op: BooleanOp,
    /// States of the minimized combined automaton.
    pub computed_sc: usize,
    pub predicted: BigInt,
    pub bound_only: bool,
    /// States explored by the direct construction.
    pub accessible_count: usize,
    /// Accessible states with a saturated tableau.
    pub saturated_state_count: usize,
    /// Wall clock time; never part of serialized output.
    pub elapsed: Duration,
}

impl VerificationReport {
    pub const CSV_HEADER: &'static str = "m,n,p,op,computed,predicted,bound_only,status";

    /// Exact predictions must be met, bounds must not be exceeded.
    pub fn passed(&self) -> bool {
        let computed = BigInt::from(self.computed_sc);
        if self.bound_only {
            computed <= self.predicted
        } else {
            computed == self.predicted
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "ok"
        } else {
            "FAIL"
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.m,
            self.n,
            self.p,
            self.op.ascii_name(),
            self.computed_sc,
            self.predicted,
            self.bound_only,
            self.status()
        )
    }
}

pub fn verify(
    m: usize,
    n: usize,
    p: usize,
    op: BooleanOp,
) -> Result<VerificationReport, ComplexityError> {
    verify_with_budget(m, n, p, op, DEFAULT_STATE_BUDGET)
}

/// Builds the witness triple for `(m, n, p)`, complements the right-hand
/// automata as the canonical decomposition of `op` dictates (so the triple
/// is a witness for `op` itself), runs the direct construction under `op`,
/// and compares the minimized state count against the prediction.
pub fn verify_with_budget(
    m: usize,
    n: usize,
    p: usize,
    op: BooleanOp,
    budget: u64,
) -> Result<VerificationReport, ComplexityError> {
    let started = Instant::now();
    let decomposition =
        canonicalize_op(op).ok_or(ComplexityError::DegenerateOperation(op))?;
    let (a, mut b, mut c) = witness_triple(m, n, p)?;
    if decomposition.complement_left {
        b = b.complement();
    }
    if decomposition.complement_right {
        c = c.complement();
    }
    let combined = combined_automaton_with_budget(&a, &b, &c, op, budget)?;
    let accessible_count = combined.dfa.state_count();
    let saturated_state_count = count_saturated_labels(&combined);
    let computed_sc = combined.dfa.minimize().state_count();
    let prediction = predicted_value(m, n, p, op)?;
    Ok(VerificationReport {
        m,
        n,
        p,
        op,
        computed_sc,
        predicted: prediction.value,
        bound_only: prediction.bound_only,
        accessible_count,
        saturated_state_count,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{brzozowski, LetterRoles};

    #[test]
    fn canonical_decompositions_are_frozen() {
        let cases: [(usize, BooleanOp, bool, bool); 10] = [
            (1, BooleanOp::AND, false, false),
            (2, BooleanOp::AND, false, true),
            (4, BooleanOp::AND, true, false),
            (6, BooleanOp::XOR, false, false),
            (7, BooleanOp::OR, false, false),
            (8, BooleanOp::AND, true, true),
            (9, BooleanOp::XOR, true, false),
            (11, BooleanOp::OR, false, true),
            (13, BooleanOp::OR, true, false),
            (14, BooleanOp::OR, true, true),
        ];
        for (index, base, cl, cr) in cases {
            let got = canonicalize_op(BooleanOp::from_index(index)).unwrap();
            assert_eq!(
                got,
                OpDecomposition {
                    base,
                    complement_left: cl,
                    complement_right: cr
                },
                "operation {index}"
            );
        }
        for op in BooleanOp::ALL {
            assert_eq!(canonicalize_op(op).is_none(), op.is_degenerate());
        }
    }

    #[test]
    fn decomposition_reproduces_truth_tables() {
        for op in BooleanOp::ALL {
            let Some(d) = canonicalize_op(op) else { continue };
            for x in [false, true] {
                for y in [false, true] {
                    assert_eq!(
                        op.apply(x, y),
                        d.base.apply(x ^ d.complement_left, y ^ d.complement_right),
                        "{} on ({x}, {y})",
                        op.name()
                    );
                }
            }
        }
    }

    #[test]
    fn predictions_at_three_cubed() {
        let xor = predicted_value(3, 3, 3, BooleanOp::XOR).unwrap();
        assert_eq!(xor.value, BigInt::from(299));
        assert!(!xor.bound_only);
        let and = predicted_value(3, 3, 3, BooleanOp::AND).unwrap();
        assert_eq!(and.value, BigInt::from(1280));
        assert!(and.bound_only);
        let or = predicted_value(3, 3, 3, BooleanOp::OR).unwrap();
        assert_eq!(or.value, BigInt::from(116));
        assert!(or.bound_only);
        assert!(matches!(
            predicted_value(3, 3, 3, BooleanOp::from_index(3)),
            Err(ComplexityError::DegenerateOperation(_))
        ));
    }

    #[test]
    fn composed_bound_values() {
        assert_eq!(composed_bound(3, 3, 3), BigInt::from(1280));
        assert_eq!(composed_bound(4, 4, 4), BigInt::from(229376));
        assert_eq!(composed_bound(1, 1, 1), BigInt::from(1));
        assert_eq!(composed_bound(5, 1, 1), BigInt::from(9));
    }

    #[test]
    fn predictions_never_exceed_composed_bound() {
        for m in 3..=4 {
            for n in 3..=4 {
                for p in 3..=4 {
                    let bound = composed_bound(m, n, p);
                    for op in BooleanOp::ALL {
                        if op.is_degenerate() {
                            continue;
                        }
                        let prediction = predicted_value(m, n, p, op).unwrap();
                        assert!(
                            prediction.value <= bound,
                            "{} at ({m}, {n}, {p})",
                            op.ascii_name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn combined_statistics_at_three_cubed() {
        let (a, b, c) = witness_triple(3, 3, 3).unwrap();
        let combined = combined_automaton(&a, &b, &c, BooleanOp::XOR).unwrap();
        assert_eq!(combined.dfa.state_count(), 1280);
        assert_eq!(count_saturated_labels(&combined), 299);
        assert_eq!(combined.dfa.minimize().state_count(), 299);
        assert_eq!(
            saturated_state_census(&a, &b, &c, BooleanOp::XOR).unwrap(),
            299
        );
    }

    #[test]
    fn initial_label_and_injection() {
        let (a, b, c) = witness_triple(3, 3, 3).unwrap();
        let combined = combined_automaton(&a, &b, &c, BooleanOp::XOR).unwrap();
        let init = combined.labels[0];
        assert_eq!(init.a_state, 0);
        assert_eq!(init.tableau.count_marked(), 0);
        // "aa" reaches A's final state 2, which injects the initial pair.
        let mut q = combined.dfa.initial();
        q = combined.dfa.step(q, 'a').unwrap();
        q = combined.dfa.step(q, 'a').unwrap();
        let label = combined.labels[q];
        assert_eq!(label.a_state, 2);
        assert!(label.tableau.is_marked(0, 0));
        assert_eq!(label.tableau.count_marked(), 1);
    }

    #[test]
    fn combined_equals_catenation_product_pipeline() {
        let (a, b, c) = witness_triple(3, 3, 3).unwrap();
        for op in [BooleanOp::XOR, BooleanOp::AND, BooleanOp::OR] {
            let direct = build_combined(&a, &b, &c, op).unwrap();
            let product = b.boolean_product(&c, op).unwrap();
            let pipeline = a.catenate(&product).unwrap().determinize();
            assert!(
                direct.equivalent(&pipeline).unwrap(),
                "pipeline mismatch for {}",
                op.name()
            );
        }
    }

    #[test]
    fn combined_acceptance_matches_split_semantics() {
        let (a, b, c) = witness_triple(3, 3, 3).unwrap();
        let direct = build_combined(&a, &b, &c, BooleanOp::XOR).unwrap();
        let mut words = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..4 {
            layer = layer
                .iter()
                .flat_map(|w| {
                    ['a', 'b', 'c', 'd'].map(|l| {
                        let mut w2 = w.clone();
                        w2.push(l);
                        w2
                    })
                })
                .collect();
            words.extend(layer.iter().cloned());
        }
        for w in &words {
            let expect = (0..=w.len()).any(|i| {
                a.accepts(&w[..i]).unwrap()
                    && (b.accepts(&w[i..]).unwrap() ^ c.accepts(&w[i..]).unwrap())
            });
            assert_eq!(direct.accepts(w).unwrap(), expect, "{w:?}");
        }
    }

    /// Tableaux reachable from `t` by completing one right triangle.
    fn one_step_completions(t: Tableau) -> Vec<u64> {
        let mut out = Vec::new();
        for x in 0..t.rows() {
            for y in 0..t.rows() {
                if x == y {
                    continue;
                }
                for k in 0..t.cols() {
                    for k2 in 0..t.cols() {
                        if t.is_marked(x, k) && t.is_marked(x, k2) && t.is_marked(y, k2)
                            && !t.is_marked(y, k)
                        {
                            out.push(t.with_mark(y, k).bits());
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn saturation_closure_respects_state_equivalence() {
        let (a, b, c) = witness_triple(3, 3, 3).unwrap();
        let combined = combined_automaton(&a, &b, &c, BooleanOp::XOR).unwrap();
        let classes = combined.dfa.equivalence_classes();
        let distinct: std::collections::HashSet<u32> = classes.iter().copied().collect();
        assert_eq!(distinct.len(), 299);
        let index: HashMap<(StateId, u64), usize> = combined
            .labels
            .iter()
            .enumerate()
            .map(|(id, st)| ((st.a_state, st.tableau.bits()), id))
            .collect();
        for (id, st) in combined.labels.iter().enumerate() {
            if a.is_final(st.a_state) {
                assert!(st.tableau.is_marked(0, 0), "origin pair must be injected");
            }
            let saturated = index[&(st.a_state, st.tableau.saturate().bits())];
            assert_eq!(classes[id], classes[saturated]);
            assert_eq!(combined.dfa.is_final(id), combined.dfa.is_final(saturated));
            for bits in one_step_completions(st.tableau) {
                let step = index[&(st.a_state, bits)];
                assert_eq!(classes[id], classes[step]);
            }
        }
    }

    #[test]
    fn verify_runs_concurrently() {
        let ops = [
            BooleanOp::XOR,
            BooleanOp::AND,
            BooleanOp::OR,
            BooleanOp::from_index(9),
        ];
        let handles: Vec<_> = ops
            .into_iter()
            .map(|op| std::thread::spawn(move || verify(3, 3, 3, op).unwrap()))
            .collect();
        for handle in handles {
            assert!(handle.join().unwrap().passed());
        }
    }

    #[test]
    fn verify_reports_at_three_cubed() {
        let report = verify(3, 3, 3, BooleanOp::XOR).unwrap();
        assert_eq!(report.computed_sc, 299);
        assert_eq!(report.predicted, BigInt::from(299));
        assert_eq!(report.accessible_count, 1280);
        assert_eq!(report.saturated_state_count, 299);
        assert!(!report.bound_only);
        assert!(report.passed());
        assert_eq!(report.status(), "ok");
        assert_eq!(
            report.csv_row(),
            "3,3,3,xor,299,299,false,ok"
        );

        let nand = verify(3, 3, 3, BooleanOp::from_index(14)).unwrap();
        assert_eq!(nand.computed_sc, 116);
        assert!(nand.bound_only);
        assert!(nand.passed());
    }

    #[test]
    fn budget_and_size_errors() {
        assert!(matches!(
            verify_with_budget(3, 3, 3, BooleanOp::XOR, 100),
            Err(ComplexityError::StateBudgetExceeded { .. })
        ));
        assert!(matches!(
            verify(2, 3, 3, BooleanOp::XOR),
            Err(ComplexityError::Witness(WitnessError::SizeTooSmall { n: 2 }))
        ));
        // 9 * 8 = 72 cells does not fit the tableau mask.
        let a = brzozowski(3, LetterRoles::standard()).unwrap();
        let b = brzozowski(9, LetterRoles::standard()).unwrap();
        let c = brzozowski(8, LetterRoles::standard()).unwrap();
        assert!(matches!(
            build_combined(&a, &b, &c, BooleanOp::XOR),
            Err(ComplexityError::StateBudgetExceeded { .. })
        ));
    }

    #[test]
    fn alphabet_mismatch_is_propagated() {
        let (a, b, _) = witness_triple(3, 3, 3).unwrap();
        let other = Dfa::new(vec!['a'], 1, 0, [], vec![vec![0]]).unwrap();
        assert!(matches!(
            build_combined(&a, &b, &other, BooleanOp::XOR),
            Err(ComplexityError::Automaton(AutomatonError::AlphabetMismatch))
        ));
    }
}
