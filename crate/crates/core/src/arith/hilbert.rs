//! Hilbert symbols and square classes over ℚₚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::padic::{least_nonresidue, legendre, require_prime, split_unchecked, PAdicContext};
use crate::error::{MgonalError, Result};

fn sign(b: bool) -> i32 {
    if b {
        -1
    } else {
        1
    }
}

/// Hilbert symbol `(a, b)ₚ`: `+1` iff `z² = ax² + by²` has a nontrivial
/// solution over ℚₚ. Computed from valuations and residue symbols.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, p: u64) -> Result<i32> {
    require_prime(p)?;
    if a.is_zero() || b.is_zero() {
        return Err(MgonalError::invalid("Hilbert symbol of zero is undefined"));
    }
    Ok(hilbert_unchecked(a, b, p))
}

pub(crate) fn hilbert_unchecked(a: &BigInt, b: &BigInt, p: u64) -> i32 {
    let (alpha, u) = split_unchecked(a, p);
    let (beta, v) = split_unchecked(b, p);
    let alpha = alpha.finite().unwrap();
    let beta = beta.finite().unwrap();
    if p == 2 {
        let u8 = u.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let v8 = v.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |x: u32| ((x - 1) / 2) % 2;
        let omega = |x: u32| ((x * x - 1) / 8) % 2;
        let e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
        sign(e % 2 == 1)
    } else {
        let eps_odd = ((p - 1) / 2) % 2 == 1;
        let mut s = sign(eps_odd && (alpha * beta) % 2 == 1);
        if beta % 2 == 1 {
            s *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

/// Hasse invariant `∏_{i<j} (aᵢ, aⱼ)ₚ` of a diagonal form.
pub fn hasse_invariant(coeffs: &[BigInt], p: u64) -> Result<i32> {
    require_prime(p)?;
    if coeffs.iter().any(Zero::is_zero) {
        return Err(MgonalError::invalid("Hasse invariant needs nonzero coefficients"));
    }
    let mut s = 1;
    for i in 0..coeffs.len() {
        for j in (i + 1)..coeffs.len() {
            s *= hilbert_unchecked(&coeffs[i], &coeffs[j], p);
        }
    }
    Ok(s)
}

/// Class of a nonzero integer modulo squares: `u = rep · p^(2·square_exponent) · w²`
/// with `w` a p-adic unit. For odd p, `rep ∈ {1, r, p, pr}` with `r` the least
/// positive nonresidue; for p = 2, `rep ∈ {±1, ±5, ±2, ±10}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub rep: i64,
    pub square_exponent: u32,
}

impl SquareClass {
    /// Whether the class is that of a square in ℚₚ.
    pub fn is_square(&self) -> bool {
        self.rep == 1
    }
}

pub fn square_class(u: &BigInt, ctx: &PAdicContext) -> Result<SquareClass> {
    if u.is_zero() {
        return Err(MgonalError::invalid("square class of zero is undefined"));
    }
    let p = ctx.p();
    if p == 2 {
        ctx.require(3)?;
    }
    let (v, unit) = split_unchecked(u, p);
    let v = v.finite().unwrap();
    let odd_power = v % 2 == 1;
    let rep = if p == 2 {
        let base = match unit.mod_floor(&BigInt::from(8)).to_u32().unwrap() {
            1 => 1,
            3 => -5,
            5 => 5,
            7 => -1,
            _ => unreachable!("unit part is odd"),
        };
        if odd_power {
            2 * base
        } else {
            base
        }
    } else {
        let base = if legendre(&unit, p) == 1 {
            1
        } else {
            least_nonresidue(p) as i64
        };
        if odd_power {
            base * p as i64
        } else {
            base
        }
    };
    Ok(SquareClass {
        rep,
        square_exponent: v / 2,
    })
}

/// Whether a nonzero integer is a square in ℚₚ.
pub(crate) fn is_padic_square(x: &BigInt, p: u64) -> bool {
    let ctx = PAdicContext::new(p, 3).expect("prime");
    square_class(x, &ctx).map(|c| c.is_square()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, p: u64) -> i32 {
        hilbert_symbol(&BigInt::from(a), &BigInt::from(b), p).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        for p in [2, 3, 5, 7, 11] {
            for b in [-7, -1, 2, 3, 10, 45] {
                assert_eq!(h(1, b, p), 1);
            }
        }
        assert_eq!(h(-1, -1, 2), -1);
        assert_eq!(h(2, 3, 3), -1);
        assert!(hilbert_symbol(&BigInt::zero(), &BigInt::from(2), 3).is_err());
    }

    #[test]
    fn hilbert_known_values() {
        // (p, p)_p = (p, -1)_p
        assert_eq!(h(5, 5, 5), h(5, -1, 5));
        // (a, -a) = 1
        for a in [2, 3, 6, 7, -5] {
            for p in [2, 3, 5, 7] {
                assert_eq!(h(a, -a, p), 1);
            }
        }
        assert_eq!(h(2, 5, 2), -1);
        assert_eq!(h(3, 3, 2), -1);
    }

    #[test]
    fn square_class_examples() {
        let c5 = PAdicContext::new(5, 4).unwrap();
        assert_eq!(
            square_class(&BigInt::from(9), &c5).unwrap(),
            SquareClass { rep: 1, square_exponent: 0 }
        );
        assert_eq!(square_class(&BigInt::from(3), &c5).unwrap().rep, 2);
        assert_eq!(square_class(&BigInt::from(75), &c5).unwrap(), SquareClass { rep: 2, square_exponent: 1 });
        let c2 = PAdicContext::new(2, 5).unwrap();
        assert_eq!(square_class(&BigInt::from(17), &c2).unwrap().rep, 1);
        assert_eq!(square_class(&BigInt::from(-24), &c2).unwrap().rep, 10);
        assert!(square_class(&BigInt::from(3), &PAdicContext::new(2, 2).unwrap()).is_err());
        assert!(square_class(&BigInt::zero(), &c5).is_err());
    }
}
