//! Exact counting for the combined catenation construction: integer
//! partitions, set-partition style sequences, and the polynomials whose
//! evaluations count saturated tableaux.

mod poly;

pub use poly::IntPolynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use poly::RatPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("both dimensions must be at least 1 (got {n} x {p})")]
    NonPositiveDimension { n: usize, p: usize },
}

/// Partition of a nonnegative integer: positive parts, non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Panics unless the parts are positive and non-increasing.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be non-increasing"
        );
        assert!(parts.iter().all(|&p| p > 0), "partition parts must be positive");
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part, count)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The product of the factorials of all parts and of all part
    /// multiplicities. This is the natural normalization constant for sums
    /// over partitions; the empty partition gives 1.
    pub fn factorial(&self) -> BigInt {
        let mut f = BigInt::one();
        for (part, count) in self.multiplicities() {
            f *= num_traits::pow(factorial(part), count);
            f *= factorial(count);
        }
        f
    }
}

/// All partitions of `n` in reverse lexicographic order, so `[n]` comes
/// first and `[1, 1, ..., 1]` last. `partitions(0)` is the empty partition
/// alone.
pub fn partitions(n: usize) -> Vec<IntegerPartition> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
        if remaining == 0 {
            out.push(IntegerPartition::new(cur.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Bell numbers `B_0..=B_k` via the Bell triangle.
pub fn bell(k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    let mut row = vec![BigInt::one()];
    for _ in 1..=k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out.truncate(k + 1);
    out
}

/// Stirling numbers of the second kind, `S(n, 0..=n)`.
fn stirling2_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); m + 1];
        for j in 1..=m {
            let mut v = row[j - 1].clone();
            if j < row.len() {
                v += &row[j] * BigInt::from(j);
            }
            next[j] = v;
        }
        row = next;
    }
    row
}

pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling2_row(n)[k].clone()
}

/// Alternating Stirling sums `r_0..=r_k`: `r_0 = 1` and
/// `r_n = sum_{j=1}^{n} (-1)^j S(n, j)`.
pub fn rao(k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for n in 1..=k {
        let row = stirling2_row(n);
        let mut v = BigInt::zero();
        for (j, s) in row.iter().enumerate().skip(1) {
            if j % 2 == 1 {
                v -= s;
            } else {
                v += s;
            }
        }
        out.push(v);
    }
    out
}

/// Complete Bell polynomial `A_n(a_1, ..., a_n)` evaluated at the given
/// weights (`weights[i]` is `a_{i+1}`; at least `n` weights are required):
/// the sum over partitions of `n` of `n!/lambda! * prod a_{part}`.
pub fn complete_bell(n: usize, weights: &[BigInt]) -> BigInt {
    assert!(weights.len() >= n, "need at least {n} weights");
    let n_fact = factorial(n);
    let mut acc = BigInt::zero();
    for lam in partitions(n) {
        let mut term = &n_fact / lam.factorial();
        for &part in lam.parts() {
            term *= &weights[part - 1];
        }
        acc += term;
    }
    acc
}

/// Set partitions of an `n`-set avoiding singleton blocks, `A000296`-style:
/// `a_n = A_n(0, 1, 1, ...)` for indices `0..=k`.
pub fn a296(k: usize) -> Vec<BigInt> {
    let mut weights = vec![BigInt::one(); k.max(1)];
    weights[0] = BigInt::zero();
    (0..=k).map(|n| complete_bell(n, &weights)).collect()
}

/// The power sum `P_lambda(t) = sum_i t^(lambda_i)`.
pub fn p_lambda(lam: &IntegerPartition) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); lam.parts().first().map_or(0, |&p| p + 1)];
    for &part in lam.parts() {
        coeffs[part] += 1;
    }
    IntPolynomial::from_coeffs(coeffs)
}

fn rat(i: BigInt) -> BigRational {
    BigRational::from_integer(i)
}

/// Generating polynomial for saturated `n x p` tableaux by number of marked
/// cells: the coefficient of `t^j` counts the saturated tableaux with
/// exactly `j` marks, and the value at `t = 1` is [`alpha`].
///
/// Computed as an inclusion-exclusion over integer partitions with exact
/// rational arithmetic; the result is checked to be integral with
/// nonnegative coefficients.
pub fn alpha_poly(n: usize, p: usize) -> IntPolynomial {
    let r = rao(n + 1);
    let mut acc = RatPolynomial::zero();
    for i in 0..=n {
        let outer = BigRational::new(r[n - i + 1].clone(), factorial(n - i));
        for lam in partitions(i) {
            let base = &IntPolynomial::one() + &p_lambda(&lam);
            let factor = &outer / rat(lam.factorial());
            acc.add_scaled(&RatPolynomial::from_int(&base.pow(p)), &factor);
        }
    }
    acc.scale(&rat(-factorial(n)));
    let poly = acc
        .into_int()
        .expect("tableau counting polynomial must have integer coefficients");
    assert!(
        poly.coeffs().iter().all(|c| !c.is_negative()),
        "tableau counting polynomial must have nonnegative coefficients"
    );
    poly
}

/// Number of saturated `n x p` tableaux.
pub fn alpha(n: usize, p: usize) -> BigInt {
    alpha_poly(n, p).eval(&BigInt::one())
}

/// Same count as [`alpha`], evaluated scalar-wise with partitions grouped
/// by their number of parts. Kept as an independent cross-check of the
/// polynomial route.
pub fn alpha_by_part_count(n: usize, p: usize) -> BigInt {
    let r = rao(n + 1);
    let mut acc = BigRational::zero();
    for i in 0..=n {
        for lam in partitions(i) {
            let num = &r[n - i + 1] * num_traits::pow(BigInt::from(lam.len() + 1), p);
            acc += BigRational::new(num, lam.factorial() * factorial(n - i));
        }
    }
    let total = rat(-factorial(n)) * acc;
    assert!(total.is_integer(), "tableau count must be an integer");
    total.to_integer()
}

/// Number of saturated `n x p` tableaux whose top-left cell is marked.
///
/// Evaluated two ways, with the agreement asserted: as
/// `alpha_poly'(1) / (n p)` (every marked cell is equivalent under the
/// symmetries of the count), and by differentiating the closed form
/// directly.
pub fn alpha_prime(n: usize, p: usize) -> Result<BigInt, CombinatoricsError> {
    if n == 0 || p == 0 {
        return Err(CombinatoricsError::NonPositiveDimension { n, p });
    }
    let d = alpha_poly(n, p).derivative().eval(&BigInt::one());
    let np = BigInt::from(n * p);
    let rem = &d % &np;
    assert!(rem.is_zero(), "marked-cell total must divide evenly");
    let value = d / np;

    let direct = alpha_prime_direct(n, p);
    assert_eq!(value, direct, "marked-origin count routes disagree");
    Ok(value)
}

/// Direct form of [`alpha_prime`]: the `t`-derivative of each
/// `(1 + P_lambda(t))^p` term collapses to `i (1 + #lambda)^(p-1)` at
/// `t = 1` for `lambda` of weight `i`.
fn alpha_prime_direct(n: usize, p: usize) -> BigInt {
    let r = rao(n + 1);
    let mut acc = BigRational::zero();
    for i in 0..=n {
        for lam in partitions(i) {
            let num = &r[n - i + 1]
                * BigInt::from(i)
                * num_traits::pow(BigInt::from(lam.len() + 1), p - 1);
            acc += BigRational::new(num, lam.factorial() * factorial(n - i));
        }
    }
    let total = rat(-factorial(n - 1)) * acc;
    assert!(total.is_integer(), "marked-origin count must be an integer");
    total.to_integer()
}

/// Coefficient of `t^j` in `(1 + P_lambda(t))^i`: the number of ways to
/// pick `i` factors (with repetition ordered) whose chosen parts sum to
/// `j`, each factor contributing either nothing or one part of `lambda`.
pub fn kappa(lam: &IntegerPartition, i: usize, j: usize) -> BigInt {
    let base = &IntPolynomial::one() + &p_lambda(lam);
    base.pow(i).coeff(j)
}

/// State count of the combined construction for the union-style operations:
/// `(m-1)((2^n - 1)(2^p - 1) + 1) + 2^(n-1) 2^(p-1)`. An upper bound, not
/// always reached.
pub fn union_count(m: usize, n: usize, p: usize) -> BigInt {
    assert!(m >= 1 && n >= 1 && p >= 1, "sizes must be at least 1");
    let pow2 = |e: usize| BigInt::one() << e;
    let inner = (pow2(n) - 1) * (pow2(p) - 1) + 1;
    BigInt::from(m - 1) * inner + pow2(n + p - 2)
}
