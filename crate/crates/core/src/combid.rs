//! Special numbers and chain counting: Stirling numbers of the second kind,
//! Eulerian numbers, the chain-set cardinalities A_m/B_m and the flagged-chain
//! sum over D(R,T,X,l), plus the two Stirling/Eulerian polynomial identities
//! that tie them together.
//!
//! Every closed form here has a brute-force enumeration twin with no shared
//! logic, so the pair can serve as an independent cross-check.

use num::{One, Zero};

use crate::arith::{binom, factorial, Int};

/// Dense integer polynomial in one variable, ascending powers, trailing
/// zeros trimmed. The zero polynomial is the empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<Int>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn constant(c: Int) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Int, k: usize) -> Self {
        let mut coeffs = vec![Int::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Int {
        self.coeffs.get(k).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Int) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// `(t + shift)^exp` expanded.
    pub fn t_plus_const_pow(shift: i64, exp: u32) -> Self {
        Self::from_coeffs(
            (0..=exp as i64)
                .map(|k| binom(exp as i64, k) * Int::from(shift).pow(exp - k as u32))
                .collect(),
        )
    }
}

/// Stirling number of the second kind S(m, k): partitions of an m-set into
/// k nonempty blocks. S(0,0) = 1, S(m,k) = 0 for k > m.
pub fn stirling2(m: u32, k: u32) -> Int {
    if k > m {
        return Int::zero();
    }
    if m == 0 {
        return Int::one();
    }
    // S(m,k) = k*S(m-1,k) + S(m-1,k-1)
    let mut row = vec![Int::one()]; // S(0, 0..=0)
    for n in 1..=m {
        let mut next = vec![Int::zero(); n as usize + 1];
        for j in 1..=n as usize {
            let above = row.get(j).cloned().unwrap_or_else(Int::zero);
            next[j] = Int::from(j as u64) * above + &row[j - 1];
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Eulerian number <m, k> by the closed form
/// `sum_i (-1)^i C(m+1, i) (k+1-i)^m`; zero outside `0 <= k <= m-1`.
pub fn eulerian(m: u32, k: i64) -> Int {
    if m == 0 || k < 0 || k > m as i64 - 1 {
        return Int::zero();
    }
    let mut acc = Int::zero();
    for i in 0..=k {
        let term = binom(m as i64 + 1, i) * Int::from(k + 1 - i).pow(m);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// |B_m(∅,k)|: chains ∅ = S_0 ⊂ S_1 ⊂ ... ⊂ S_{k-1} ⊂ [m]. Closed form
/// k!·S(m,k); zero for k > m.
pub fn chain_count_b(m: u32, k: u32) -> Int {
    if k > m {
        return Int::zero();
    }
    factorial(k) * stirling2(m, k)
}

/// |A_m(∅,k)|: chains ∅ ⊆ S_1 ⊂ ... ⊂ S_k ⊂ [m]. Closed form k!·S(m+1,k+1).
pub fn chain_count_a(m: u32, k: u32) -> Int {
    if k > m {
        return Int::zero();
    }
    factorial(k) * stirling2(m + 1, k + 1)
}

/// Sum over all T with X ⊆ T ⊂ R of the number of chains
/// X ⊆ S_1 ⊂ ... ⊂ S_l ⊂ R that pass through T. Depends only on
/// q = |R| - |X|; closed form l·l!·S(q+1, l+1).
pub fn chain_count_d_sum(r_size: u32, x_size: u32, ell: u32) -> Int {
    assert!(x_size < r_size, "need |X| < |R|");
    let q = r_size - x_size;
    if ell > q {
        return Int::zero();
    }
    Int::from(ell) * factorial(ell) * stirling2(q + 1, ell + 1)
}

/// Brute-force twin of [`chain_count_b`]: enumerates the chains directly.
pub fn enumerate_chains_b(m: u32, k: u32) -> Int {
    // B counts tuples (S_0, ..., S_{k-1}) with ∅ = S_0 ⊂ S_1 ⊂ ... ⊂ S_{k-1} ⊂ [m].
    if k == 0 {
        // empty tuple; the bounding chain degenerates to [m] = ∅
        return if m == 0 { Int::one() } else { Int::zero() };
    }
    if m == 0 {
        return Int::zero(); // S_{k-1} ⊂ ∅ is impossible
    }
    Int::from(strict_chains_between(0, (1u32 << m) - 1, k - 1, true))
}

/// Brute-force twin of [`chain_count_a`].
pub fn enumerate_chains_a(m: u32, k: u32) -> Int {
    // A counts tuples (S_1, ..., S_k) with ∅ ⊆ S_1 ⊂ ... ⊂ S_k ⊂ [m].
    Int::from(strict_chains_between(0, (1u32 << m) - 1, k, false))
}

/// Number of tuples (T_1, ..., T_len) with `lower` ⊆ T_1 ⊂ T_2 ⊂ ... ⊂ T_len
/// and every T_i a strict subset of `upper`. With `first_strict`, T_1 must
/// strictly contain `lower`.
fn strict_chains_between(lower: u32, upper: u32, len: u32, first_strict: bool) -> u64 {
    if len == 0 {
        return 1;
    }
    let mut total = 0;
    if !first_strict && lower & !upper == 0 && lower != upper {
        total += strict_chains_between(lower, upper, len - 1, true);
    }
    // strict supersets of lower that are strict subsets of upper
    let free = upper & !lower;
    let mut sub = free;
    while sub != 0 {
        let cand = lower | sub;
        if cand != upper {
            total += strict_chains_between(cand, upper, len - 1, true);
        }
        sub = (sub - 1) & free;
    }
    total
}

/// Brute-force twin of [`chain_count_d_sum`], with R = [r_size] and
/// X = {1, ..., x_size}: for each T with X ⊆ T ⊂ R, enumerates the chains
/// X ⊆ S_1 ⊂ ... ⊂ S_l ⊂ R containing T and sums the counts.
pub fn enumerate_chains_d_sum(r_size: u32, x_size: u32, ell: u32) -> Int {
    assert!(x_size < r_size, "need |X| < |R|");
    let r_mask = (1u32 << r_size) - 1;
    let x_mask = (1u32 << x_size) - 1;
    let free = r_mask & !x_mask;
    let mut total = 0u64;
    // T runs over subsets with X ⊆ T ⊂ R
    let mut t_extra = free;
    loop {
        let t_mask = x_mask | t_extra;
        if t_mask != r_mask {
            total += count_flagged_chains(x_mask, r_mask, t_mask, ell);
        }
        if t_extra == 0 {
            break;
        }
        t_extra = (t_extra - 1) & free;
    }
    Int::from(total)
}

/// Chains X ⊆ S_1 ⊂ ... ⊂ S_l ⊂ R with S_i = T for some i.
fn count_flagged_chains(x_mask: u32, r_mask: u32, t_mask: u32, ell: u32) -> u64 {
    fn rec(prev: u32, r_mask: u32, remaining: u32, seen_t: bool, t_mask: u32, first: bool) -> u64 {
        if remaining == 0 {
            return u64::from(seen_t);
        }
        let mut total = 0;
        if first && prev != r_mask {
            // the first element may equal X itself
            total += rec(prev, r_mask, remaining - 1, seen_t || prev == t_mask, t_mask, false);
        }
        let free = r_mask & !prev;
        let mut sub = free;
        while sub != 0 {
            let cand = prev | sub;
            if cand != r_mask {
                total += rec(cand, r_mask, remaining - 1, seen_t || cand == t_mask, t_mask, false);
            }
            sub = (sub - 1) & free;
        }
        total
    }
    rec(x_mask, r_mask, ell, false, t_mask, true)
}

/// Left-hand side of the first Stirling/Eulerian identity:
/// `sum_{i=0}^m i!·S(m+1, i+1)·(t-1)^{m-i}`.
fn we1_lhs(m: u32) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for i in 0..=m {
        let c = factorial(i) * stirling2(m + 1, i + 1);
        acc = acc.add(&IntPolynomial::t_plus_const_pow(-1, m - i).scale(&c));
    }
    acc
}

/// Right-hand side shared by both identities up to a power of t:
/// `sum_{j=0}^{m-1} <m, j> t^{m-j}` (or shifted down by one for WE2).
fn eulerian_poly(m: u32, top_power: u32) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for j in 0..m as i64 {
        acc = acc.add(&IntPolynomial::monomial(eulerian(m, j), (top_power as i64 - j) as usize));
    }
    acc
}

/// Checks `sum_i i!·S(m+1,i+1)(t-1)^{m-i} = sum_j <m,j> t^{m-j}` exactly.
pub fn verify_we1(m: u32) -> bool {
    assert!(m >= 1);
    we1_lhs(m) == eulerian_poly(m, m)
}

/// Checks `sum_{i=0}^{m-1} (i+1)!·S(m,i+1)(t-1)^{m-1-i} = sum_j <m,j> t^{m-1-j}`.
pub fn verify_we2(m: u32) -> bool {
    assert!(m >= 1);
    let mut lhs = IntPolynomial::zero();
    for i in 0..m {
        let c = factorial(i + 1) * stirling2(m, i + 1);
        lhs = lhs.add(&IntPolynomial::t_plus_const_pow(-1, m - 1 - i).scale(&c));
    }
    lhs == eulerian_poly(m, m - 1)
}
