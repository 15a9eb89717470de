//! Representation and isotropy for diagonal forms `⟨a₁,…,aₙ⟩` over ℤₚ.
//!
//! Representation is decided by valuation descent. A solution of
//! `Σ aᵢxᵢ² = c` either has a unit coordinate on a unit coefficient, which is
//! detected mod p (odd p) or mod 8 (p = 2) and lifts by Hensel's lemma, or has
//! every such coordinate divisible by p; in the second case `xᵢ = p·yᵢ` and the
//! whole equation divides by p. Each descent step lowers `ordₚ(c)` by one, so
//! the procedure is exact and stops after at most `ordₚ(c) + 1` rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{hasse_invariant, hilbert_unchecked, is_padic_square, legendre, require_prime, split_unchecked, PAdicContext};
use crate::error::{MgonalError, Result};

/// Congruence depth `ordₚ(c) + 2·ordₚ(2) + 2·max ordₚ(aᵢ) + 3` past which a
/// solution mod `p^depth` that is not Hensel-liftable cannot be the only kind.
/// Used to size brute-force cross-checks.
pub fn diagonal_depth(coeffs: &[BigInt], c: &BigInt, p: u64) -> u32 {
    let ord = |x: &BigInt| split_unchecked(x, p).0.finite().unwrap_or(0);
    let max_a = coeffs.iter().map(ord).max().unwrap_or(0);
    let two = if p == 2 { 1 } else { 0 };
    let oc = if c.is_zero() { 0 } else { ord(c) };
    oc + 2 * two + 2 * max_a + 3
}

fn split_all(coeffs: &[BigInt], p: u64) -> Result<Vec<(u32, BigInt)>> {
    coeffs
        .iter()
        .map(|a| {
            if a.is_zero() {
                Err(MgonalError::invalid("diagonal coefficients must be nonzero"))
            } else {
                let (v, u) = split_unchecked(a, p);
                Ok((v.finite().unwrap(), u))
            }
        })
        .collect()
}

/// Whether `Σ aᵢxᵢ² = c` has a solution in ℤₚⁿ.
pub fn represents_locally_diagonal(coeffs: &[BigInt], c: &BigInt, ctx: &PAdicContext) -> Result<bool> {
    let p = ctx.p();
    let mut terms = split_all(coeffs, p)?;
    let pb = BigInt::from(p);
    let mut c = c.clone();
    loop {
        if c.is_zero() {
            return Ok(true);
        }
        let unit_step = if p == 2 {
            dyadic_unit_solution(&terms, &c)
        } else {
            odd_unit_solution(&terms, &c, p)
        };
        if unit_step {
            return Ok(true);
        }
        let (q, r) = c.div_rem(&pb);
        if !r.is_zero() {
            return Ok(false);
        }
        c = q;
        for (e, _) in terms.iter_mut() {
            *e = if *e == 0 { 1 } else { *e - 1 };
        }
    }
}

/// Solution mod p with a nonzero coordinate on a unit coefficient.
fn odd_unit_solution(terms: &[(u32, BigInt)], c: &BigInt, p: u64) -> bool {
    let units: Vec<&BigInt> = terms.iter().filter(|(e, _)| *e == 0).map(|(_, u)| u).collect();
    let c_unit = !c.is_multiple_of(&BigInt::from(p));
    match units.len() {
        0 => false,
        1 => c_unit && legendre(&(c * units[0]), p) == 1,
        2 => c_unit || legendre(&(-(units[0] * units[1])), p) == 1,
        _ => true,
    }
}

/// Solution mod 8 with an odd coordinate on an odd coefficient.
fn dyadic_unit_solution(terms: &[(u32, BigInt)], c: &BigInt) -> bool {
    let eight = BigInt::from(8);
    let target = c.mod_floor(&eight).to_usize().unwrap();
    // reach[flag][residue]
    let mut reach = [[false; 8]; 2];
    reach[0][0] = true;
    for (e, u) in terms {
        if *e > 2 {
            continue;
        }
        let u8 = u.mod_floor(&eight).to_usize().unwrap();
        // (value of aᵢxᵢ² mod 8, whether xᵢ is odd on an odd coefficient)
        let options: Vec<(usize, bool)> = match e {
            0 => vec![(0, false), ((4 * u8) % 8, false), (u8, true)],
            1 => vec![(0, false), ((2 * u8) % 8, false)],
            _ => vec![(0, false), ((4 * u8) % 8, false)],
        };
        let mut next = [[false; 8]; 2];
        for flag in 0..2 {
            for r in 0..8 {
                if !reach[flag][r] {
                    continue;
                }
                for &(v, odd) in &options {
                    next[(flag == 1 || odd) as usize][(r + v) % 8] = true;
                }
            }
        }
        reach = next;
    }
    reach[1][target]
}

/// Whether `Σ aᵢxᵢ² = 0` has a nontrivial solution over ℚₚ.
pub fn is_isotropic(coeffs: &[BigInt], p: u64) -> Result<bool> {
    require_prime(p)?;
    if coeffs.iter().any(Zero::is_zero) {
        return Err(MgonalError::invalid("isotropy test needs nonzero coefficients"));
    }
    let d: BigInt = coeffs.iter().product();
    let minus_one = BigInt::from(-1);
    Ok(match coeffs.len() {
        0 | 1 => false,
        2 => is_padic_square(&(-&d), p),
        3 => hasse_invariant(coeffs, p)? == hilbert_unchecked(&minus_one, &(-&d), p),
        4 => !is_padic_square(&d, p) || hasse_invariant(coeffs, p)? == hilbert_unchecked(&minus_one, &minus_one, p),
        _ => true,
    })
}

/// Convenience form of [`is_isotropic`] for small coefficients.
pub fn is_isotropic_i64(coeffs: &[i64], p: u64) -> Result<bool> {
    let big: Vec<BigInt> = coeffs.iter().map(|&a| BigInt::from(a)).collect();
    is_isotropic(&big, p)
}
