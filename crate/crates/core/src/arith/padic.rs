use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MgonalError, Result};

/// Deterministic trial-division primality test; inputs here are small
/// (coefficient divisors, user-supplied primes).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(MgonalError::NotPrime(p))
    }
}

/// Distinct prime divisors of `n` in ascending order. `n = 0` has none by convention.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct prime divisors of an arbitrary-precision integer. Trial division, so
/// only meant for the moderately sized values produced by census work.
pub fn prime_divisors_big(n: &BigInt) -> Vec<u64> {
    if let Some(small) = n.abs().to_u64() {
        return prime_divisors(small);
    }
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let db = BigInt::from(d);
        if &db * &db > n {
            break;
        }
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match n.to_u64() {
            Some(v) => out.push(v),
            None => out.push(u64::MAX),
        }
    }
    out
}

/// Working context for computations over the p-adic integers: a prime and a
/// precision exponent `E`, meaning residues are tracked modulo `p^E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicContext {
    p: u64,
    precision: u32,
}

impl PAdicContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        require_prime(p)?;
        if precision == 0 {
            return Err(MgonalError::invalid("p-adic precision must be at least 1"));
        }
        Ok(Self { p, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^E` as an arbitrary-precision integer.
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.precision)
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.p, precision)
    }

    pub(crate) fn require(&self, required: u32) -> Result<()> {
        if self.precision < required {
            Err(MgonalError::InsufficientPrecision {
                required,
                available: self.precision,
            })
        } else {
            Ok(())
        }
    }
}

/// p-adic valuation; `Infinite` only for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Split `x = p^v * u` with `p ∤ u`. Zero maps to `(Infinite, 0)`.
pub fn ord_and_unit(x: &BigInt, p: u64) -> Result<(Valuation, BigInt)> {
    require_prime(p)?;
    Ok(split_unchecked(x, p))
}

pub(crate) fn split_unchecked(x: &BigInt, p: u64) -> (Valuation, BigInt) {
    if x.is_zero() {
        return (Valuation::Infinite, BigInt::zero());
    }
    let pb = BigInt::from(p);
    let mut u = x.clone();
    let mut v = 0u32;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        u = q;
        v += 1;
    }
    (Valuation::Finite(v), u)
}

/// Valuation of a nonzero value, `None` for zero. Prime-ness is the caller's job.
pub(crate) fn ord(x: &BigInt, p: u64) -> Option<u32> {
    split_unchecked(x, p).0.finite()
}

/// Least nonnegative residue.
pub(crate) fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Inverse of `x` modulo `m` when `gcd(x, m) = 1`.
pub(crate) fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Legendre symbol (u / p) for odd prime p and `p ∤ u`.
pub(crate) fn legendre(u: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    debug_assert!(p > 2);
    (2..p)
        .find(|&r| legendre(&BigInt::from(r), p) == -1)
        .expect("every odd prime has a nonresidue")
}
