//! Closed-form counts: word periods, Fourier-sector multiplicities, commutant
//! dimensions and orbit counts.
//!
//! All counts are exact `u128`. Functions taking `n` assume `n ≤ 60` so that
//! `4^n` and its sums fit, and panic beyond that.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{enumerate_group, GroupSpec};
use crate::tensor::{index_map, tensor_dim};

const MAX_COUNT_N: usize = 60;

fn guard(n: usize) {
    assert!(
        (1..=MAX_COUNT_N).contains(&n),
        "counting formulas support 1 <= n <= {MAX_COUNT_N}, got {n}"
    );
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|m| n.is_multiple_of(*m)).collect()
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

/// Möbius function.
pub fn mobius(n: usize) -> i32 {
    let mut rest = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            rest /= p;
            if rest.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if rest > 1 {
        sign = -sign;
    }
    sign
}

/// Number of binary words of length `t` with exact period `t`:
/// `Σ_{e | t} μ(t/e) 2^e`.
pub fn words_with_exact_period(t: usize) -> u128 {
    guard(t);
    let signed: i128 = divisors(t)
        .into_iter()
        .map(|e| mobius(t / e) as i128 * (1i128 << e))
        .sum();
    signed as u128
}

/// `w(n, k, m)`: binary words of length `n` whose period `T` satisfies
/// `m | n/T` and `n/T | k` (with `gcd(n, 0) = n`, so `k = 0` admits every
/// `n/T`). Zero unless `m | gcd(n, k)`.
pub fn count_words_w(n: usize, k: usize, m: usize) -> u128 {
    guard(n);
    let g = n.gcd(&k);
    if m == 0 || !g.is_multiple_of(m) {
        return 0;
    }
    divisors(n)
        .into_iter()
        .filter(|&t| {
            let q = n / t;
            q.is_multiple_of(m) && k.is_multiple_of(q)
        })
        .map(words_with_exact_period)
        .sum()
}

/// `m_k = (1/n) Σ_{m | gcd(n,k)} w(n,k,m) φ(m)`, the dimension of the image
/// of the `k`-th Fourier projector on `n` qubits.
pub fn multiplicity_m_k(n: usize, k: usize) -> u128 {
    guard(n);
    let g = n.gcd(&k);
    let total: u128 = divisors(g)
        .into_iter()
        .map(|m| count_words_w(n, k, m) * totient(m) as u128)
        .sum();
    debug_assert_eq!(total % n as u128, 0);
    total / n as u128
}

/// Dimension of the commutant of `C_n` in `u(2^n)`:
/// `(1/n) Σ_{m | n} 4^{n/m} φ(m)`.
pub fn dim_u_cyclic(n: usize) -> u128 {
    guard(n);
    let total: u128 = divisors(n)
        .into_iter()
        .map(|m| 4u128.pow((n / m) as u32) * totient(m) as u128)
        .sum();
    total / n as u128
}

/// Dimension of the commutant of `S_n` in `u(2^n)`, `C(n+3, n)`.
pub fn dim_u_symmetric(n: usize) -> u128 {
    guard(n);
    let n = n as u128;
    (n + 3) * (n + 2) * (n + 1) / 6
}

/// Number of `G`-orbits on words of length `n` over an alphabet of the given
/// size, `(1/|G|) Σ_g alphabet^{cycles(g)}`.
pub fn burnside_orbit_count(spec: &GroupSpec, alphabet: usize) -> Result<u128> {
    let n = spec.degree();
    let overflow = || Error::DimensionTooLarge {
        dim: usize::MAX,
        limit: u128::MAX as usize,
    };
    let pow = |e: usize| (alphabet as u128).checked_pow(e as u32).ok_or_else(overflow);
    let (total, order) = match spec {
        GroupSpec::Cyclic(n) => {
            let mut total: u128 = 0;
            for j in 0..*n {
                total = total.checked_add(pow(j.gcd(n))?).ok_or_else(overflow)?;
            }
            (total, *n as u128)
        }
        _ => {
            let elements = enumerate_group(spec)?;
            let mut total: u128 = 0;
            for g in &elements {
                total = total.checked_add(pow(g.cycle_count())?).ok_or_else(overflow)?;
            }
            (total, elements.len() as u128)
        }
    };
    if n == 0 {
        return Ok(1);
    }
    Ok(total / order)
}

/// `dim End_G((ℂ^d)^{⊗n}) = (1/|G|) Σ_g |tr ρ(g)|²`.
///
/// The trace of the permutation matrix `ρ(g)` is its number of fixed basis
/// words, counted directly when the space is small enough to enumerate and
/// taken as `d^{cycles(g)}` otherwise.
pub fn commutant_dim_trace_oracle(spec: &GroupSpec, d: usize) -> Result<u128> {
    let n = spec.degree();
    let small = tensor_dim(n, d).is_ok_and(|dim| dim <= 1 << 16);
    if !small {
        return burnside_orbit_count(spec, d * d);
    }
    let elements = enumerate_group(spec)?;
    let mut total: u128 = 0;
    for g in &elements {
        let fixed = index_map(g, d)?
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .count() as u128;
        total += fixed * fixed;
    }
    Ok(total / elements.len() as u128)
}
