//! Closed-form ranks: Witt's formula for the lower central series quotients
//! of a free group, Hirsch lengths of free nilpotent quotients, and the rank
//! of the level-`p` congruence subgroup of `B₃` modulo its center.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Rank of `γ_k F_M / γ_{k+1} F_M`: `(1/k) Σ_{d | k} μ(d) M^{k/d}`.
pub fn witt_rank(m: u64, k: u64) -> BigInt {
    assert!(m >= 1 && k >= 1);
    let mut total = BigInt::zero();
    for d in 1..=k {
        if k % d == 0 {
            let mu = mobius(d);
            if mu != 0 {
                total += BigInt::from(mu) * BigInt::from(m).pow((k / d) as u32);
            }
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(k));
    debug_assert!(r.is_zero());
    q
}

/// Hirsch length of `F_M / γ_k F_M` plus one for the central `ℤ`:
/// `Σ_{q=1}^{k-1} witt_rank(M, q) + 1`.
pub fn hirsch_length(m: u64, k: u64) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::Unsupported(format!("hirsch length needs k ≥ 2, got {k}")));
    }
    Ok((1..k).map(|q| witt_rank(m, q)).sum::<BigInt>() + BigInt::one())
}

/// `1 + (p−1)p(p+1)/12`.
pub fn rank_m(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not an odd prime")));
    }
    Ok(1 + (p - 1) * p * (p + 1) / 12)
}

/// Rank of the free factor of the level-`m` congruence subgroup modulo its
/// center, for `m = 4` or an odd prime.
pub fn free_rank_for_level(m: u64) -> Result<u64> {
    if m == 4 {
        Ok(5)
    } else {
        rank_m(m)
    }
}

/// Dimension of the almost-crystallographic quotient at nilpotency class `k`.
pub fn almost_cryst_dimension(m: u64, k: u64) -> Result<BigInt> {
    hirsch_length(free_rank_for_level(m)?, k)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Number of Lyndon words of length `k` over an `m`-letter alphabet,
/// generated one by one with Duval's algorithm.
pub fn lyndon_count(m: u64, k: u64) -> u64 {
    assert!(m >= 1 && k >= 1);
    let (m, k) = (m as usize, k as usize);
    let mut w: Vec<usize> = vec![0];
    let mut count = 0;
    while !w.is_empty() {
        if w.len() == k {
            count += 1;
        }
        let len = w.len();
        while w.len() < k {
            let c = w[w.len() - len];
            w.push(c);
        }
        while w.last() == Some(&(m - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    count
}

/// `witt_rank` as a `u64`, for small arguments.
pub fn witt_rank_u64(m: u64, k: u64) -> Option<u64> {
    witt_rank(m, k).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_rank(7, 1), BigInt::from(7));
        assert_eq!(witt_rank(3, 2), BigInt::from(3));
        assert_eq!(witt_rank(5, 2), BigInt::from(10));
        assert_eq!(witt_rank(2, 6), BigInt::from(9));
    }

    #[test]
    fn lyndon_oracle_small() {
        // Binary Lyndon words: 2, 1, 2, 3, 6, 9 for lengths 1..6.
        let c: Vec<u64> = (1..=6).map(|k| lyndon_count(2, k)).collect();
        assert_eq!(c, vec![2, 1, 2, 3, 6, 9]);
        assert_eq!(lyndon_count(1, 1), 1);
        assert_eq!(lyndon_count(1, 3), 0);
    }

    #[test]
    fn witt_matches_lyndon() {
        for m in 1..=6 {
            for k in 1..=6 {
                assert_eq!(witt_rank_u64(m, k), Some(lyndon_count(m, k)), "M={m} k={k}");
            }
        }
    }

    #[test]
    fn hirsch_and_rank() {
        assert_eq!(hirsch_length(3, 2).unwrap(), BigInt::from(4));
        assert_eq!(hirsch_length(5, 2).unwrap(), BigInt::from(6));
        assert_eq!(hirsch_length(3, 3).unwrap(), BigInt::from(7));
        assert!(hirsch_length(3, 1).is_err());
        let r: Vec<u64> = [3, 5, 7].iter().map(|&p| rank_m(p).unwrap()).collect();
        assert_eq!(r, vec![3, 11, 29]);
        assert!(rank_m(9).is_err());
        assert_eq!(almost_cryst_dimension(4, 2).unwrap(), BigInt::from(6));
        assert!(almost_cryst_dimension(6, 2).is_err());
    }
}
