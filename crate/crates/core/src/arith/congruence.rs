//! Exhaustive congruence oracle and Hensel lifting for diagonal quadratic
//! polynomials `f(x) = Σ cᵢxᵢ² + Σ lᵢxᵢ`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::padic::{mod_inverse, modp, ord, require_prime, split_unchecked};
use crate::error::{MgonalError, Result};

/// Default refusal threshold for [`brute_force_congruence`], in residue tuples.
pub const DEFAULT_ORACLE_CAP: u128 = 30_000_000;

/// Environment variable overriding [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "MGONAL_ORACLE_CAP";

pub fn oracle_cap() -> u128 {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

/// All residue tuples `x mod modulus` with
/// `Σ cᵢxᵢ² + Σ lᵢxᵢ + constant ≡ target (mod modulus)`, in lexicographic order.
///
/// The scan is exhaustive; instances above [`oracle_cap`] tuples are refused.
pub fn brute_force_congruence(
    coeffs: &[i64],
    linear: &[i64],
    constant: &BigInt,
    target: &BigInt,
    modulus: u64,
) -> Result<Vec<Vec<u64>>> {
    brute_force_congruence_capped(coeffs, linear, constant, target, modulus, oracle_cap())
}

pub fn brute_force_congruence_capped(
    coeffs: &[i64],
    linear: &[i64],
    constant: &BigInt,
    target: &BigInt,
    modulus: u64,
    cap: u128,
) -> Result<Vec<Vec<u64>>> {
    if coeffs.len() != linear.len() {
        return Err(MgonalError::invalid(format!(
            "coefficient and linear tuples differ in length ({} vs {})",
            coeffs.len(),
            linear.len()
        )));
    }
    if modulus == 0 {
        return Err(MgonalError::invalid("modulus must be positive"));
    }
    let n = coeffs.len();
    let requested = (modulus as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if requested > cap {
        return Err(MgonalError::OracleCapExceeded { requested, cap });
    }

    let m = modulus as u128;
    let mb = BigInt::from(modulus);
    let rhs = modp(&(target - constant), &mb).to_u128().unwrap();
    // Per-variable value tables so the inner loop is a sum of lookups.
    let tables: Vec<Vec<u128>> = coeffs
        .iter()
        .zip(linear)
        .map(|(&c, &l)| {
            let c = (c as i128).rem_euclid(m as i128) as u128;
            let l = (l as i128).rem_euclid(m as i128) as u128;
            (0..m).map(|x| (c * (x * x % m) + l * x) % m).collect()
        })
        .collect();

    let mut out = Vec::new();
    if n == 0 {
        if rhs == 0 {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    let mut x = vec![0u64; n];
    loop {
        let s = x
            .iter()
            .zip(&tables)
            .fold(0u128, |acc, (&xi, t)| (acc + t[xi as usize]) % m);
        if s == rhs {
            out.push(x.clone());
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            x[i] += 1;
            if x[i] < modulus {
                break;
            }
            x[i] = 0;
        }
    }
}

fn evaluate(coeffs: &[i64], linear: &[i64], x: &[BigInt]) -> BigInt {
    coeffs
        .iter()
        .zip(linear)
        .zip(x)
        .fold(BigInt::zero(), |acc, ((&c, &l), xi)| {
            acc + BigInt::from(c) * xi * xi + BigInt::from(l) * xi
        })
}

fn derivative(c: i64, l: i64, xi: &BigInt) -> BigInt {
    BigInt::from(2 * c as i128) * xi + BigInt::from(l)
}

fn check_partial(
    coeffs: &[i64],
    linear: &[i64],
    target: &BigInt,
    partial: &[BigInt],
    p: u64,
    t: u32,
) -> Result<()> {
    require_prime(p)?;
    if coeffs.len() != linear.len() || coeffs.len() != partial.len() {
        return Err(MgonalError::invalid("tuple lengths differ"));
    }
    let modulus = BigInt::from(p).pow(2 * t + 1);
    let r = evaluate(coeffs, linear, partial) - target;
    if !modp(&r, &modulus).is_zero() {
        return Err(MgonalError::contract(format!(
            "partial solution does not satisfy the congruence modulo {p}^{}",
            2 * t + 1
        )));
    }
    Ok(())
}

/// Index of the first coordinate whose partial derivative has valuation at most `t`.
fn lifting_coordinate(coeffs: &[i64], linear: &[i64], partial: &[BigInt], p: u64, t: u32) -> Option<usize> {
    (0..coeffs.len()).find(|&i| {
        matches!(ord(&derivative(coeffs[i], linear[i], &partial[i]), p), Some(v) if v <= t)
    })
}

/// Whether `partial`, a solution modulo `p^(2t+1)`, refines to a p-adic solution
/// via Hensel's lemma: some coordinate has `ordₚ(2cᵢxᵢ + lᵢ) ≤ t`.
pub fn hensel_liftable(
    coeffs: &[i64],
    linear: &[i64],
    target: &BigInt,
    partial: &[BigInt],
    p: u64,
    t: u32,
) -> Result<bool> {
    check_partial(coeffs, linear, target, partial, p, t)?;
    Ok(lifting_coordinate(coeffs, linear, partial, p, t).is_some())
}

/// Refine a Hensel-liftable `partial` to a solution modulo `p^(2t+1+delta)`
/// by Newton iteration in one coordinate. The result is verified before return.
pub fn hensel_refine(
    coeffs: &[i64],
    linear: &[i64],
    target: &BigInt,
    partial: &[BigInt],
    p: u64,
    t: u32,
    delta: u32,
) -> Result<Vec<BigInt>> {
    check_partial(coeffs, linear, target, partial, p, t)?;
    let i = lifting_coordinate(coeffs, linear, partial, p, t)
        .ok_or_else(|| MgonalError::contract("partial solution is not Hensel-liftable"))?;
    let goal = 2 * t + 1 + delta;
    let pb = BigInt::from(p);
    let goal_mod = pb.pow(goal);
    let mut x: Vec<BigInt> = partial.to_vec();
    // Work a little beyond the goal so the unit inverse is exact enough.
    let work_mod = pb.pow(goal + 2 * t + 2);
    for _ in 0..(2 * goal + 8) {
        let r = evaluate(coeffs, linear, &x) - target;
        if modp(&r, &goal_mod).is_zero() {
            return Ok(x.iter().map(|v| modp(v, &goal_mod)).collect());
        }
        let d = derivative(coeffs[i], linear[i], &x[i]);
        let (dv, du) = split_unchecked(&d, p);
        let dv = dv.finite().expect("lifting coordinate has finite derivative order");
        let (rv, ru) = split_unchecked(&r, p);
        let rv = rv.finite().expect("residual is nonzero here");
        if rv < dv {
            return Err(MgonalError::Anomaly(
                "Newton step left the residual below the derivative order".into(),
            ));
        }
        let inv = mod_inverse(&du, &work_mod).expect("unit part is invertible");
        let step = pb.pow(rv - dv) * ru * inv;
        x[i] = modp(&(&x[i] - step), &work_mod);
    }
    Err(MgonalError::Anomaly("Newton iteration did not converge".into()))
}

/// Root of `c2·t² + c1·t + c0 = 0` over ℤₚ modulo `p^precision`, starting from
/// `start`, when the derivative at `start` is a p-adic unit and `start` is a
/// root modulo p (p odd) or modulo 2 (p = 2 with unit derivative).
pub(crate) fn hensel_root_univariate(
    c2: &BigInt,
    c1: &BigInt,
    c0: &BigInt,
    start: &BigInt,
    p: u64,
    precision: u32,
) -> Option<BigInt> {
    let modulus = BigInt::from(p).pow(precision);
    let mut t = modp(start, &modulus);
    for _ in 0..(2 * precision + 4) {
        let f = c2 * &t * &t + c1 * &t + c0;
        if modp(&f, &modulus).is_zero() {
            return Some(t);
        }
        let d: BigInt = BigInt::from(2) * c2 * &t + c1;
        let inv = mod_inverse(&d, &modulus)?;
        t = modp(&(&t - f * inv), &modulus);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn three_squares_mod_8_omit_7() {
        let sols = brute_force_congruence(
            &[1, 1, 1],
            &[0, 0, 0],
            &BigInt::zero(),
            &BigInt::from(7),
            8,
        )
        .unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn square_roots_of_4_mod_3() {
        let sols =
            brute_force_congruence(&[1], &[0], &BigInt::zero(), &BigInt::from(4), 3).unwrap();
        assert_eq!(sols, vec![vec![1], vec![2]]);
    }

    #[test]
    fn two_squares_mod_9_omit_3() {
        let sols =
            brute_force_congruence(&[1, 1], &[0, 0], &BigInt::zero(), &BigInt::from(3), 9)
                .unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn lexicographic_order_and_constant() {
        // x² + x + 1 ≡ 0 (mod 7): x = 2, 4
        let sols =
            brute_force_congruence(&[1], &[1], &BigInt::one(), &BigInt::zero(), 7).unwrap();
        assert_eq!(sols, vec![vec![2], vec![4]]);
        let sols =
            brute_force_congruence(&[1, 1], &[0, 0], &BigInt::zero(), &BigInt::from(1), 3)
                .unwrap();
        assert_eq!(sols, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = brute_force_congruence_capped(
            &[1, 1, 1],
            &[0, 0, 0],
            &BigInt::zero(),
            &BigInt::one(),
            100,
            999_999,
        )
        .unwrap_err();
        match err {
            MgonalError::OracleCapExceeded { requested, cap } => {
                assert_eq!(requested, 1_000_000);
                assert_eq!(cap, 999_999);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hensel_examples() {
        let zero = [0i64; 5];
        assert!(hensel_liftable(
            &[1, 1, 1, 1, 1],
            &zero,
            &BigInt::from(5),
            &big(&[1, 2, 0, 0, 0]),
            3,
            0
        )
        .unwrap());
        assert!(!hensel_liftable(&[9], &[0], &BigInt::zero(), &big(&[3]), 3, 1).unwrap());
        assert!(hensel_liftable(&[1, 1], &[0, 0], &BigInt::from(2), &big(&[1, 1]), 7, 0).unwrap());
    }

    #[test]
    fn hensel_rejects_non_solutions() {
        let err =
            hensel_liftable(&[1, 1], &[0, 0], &BigInt::from(3), &big(&[1, 1]), 7, 0).unwrap_err();
        assert!(matches!(err, MgonalError::Contract(_)));
    }

    #[test]
    fn refine_reaches_requested_precision() {
        // x² ≡ 2 (mod 7) from x = 3
        let x = hensel_refine(&[1], &[0], &BigInt::from(2), &big(&[3]), 7, 0, 12).unwrap();
        let m = BigInt::from(7).pow(13);
        assert!(modp(&(&x[0] * &x[0] - 2), &m).is_zero());

        // x² ≡ 17 over ℤ₂ needs t = 1: partial 1 mod 8
        let x = hensel_refine(&[1], &[0], &BigInt::from(17), &big(&[1]), 2, 1, 17).unwrap();
        let m = BigInt::from(2).pow(20);
        assert!(modp(&(&x[0] * &x[0] - 17), &m).is_zero());
    }

    #[test]
    fn univariate_root() {
        let r = hensel_root_univariate(
            &BigInt::one(),
            &BigInt::one(),
            &BigInt::from(-6),
            &BigInt::from(9),
            7,
            10,
        );
        // t² + t - 6 = (t - 2)(t + 3)
        let r = r.unwrap();
        let m = BigInt::from(7).pow(10);
        assert!(modp(&(&r * &r + &r - 6), &m).is_zero());
    }
}
