//! Generalized m-gonal numbers and m-gonal forms.
//!
//! The x-th m-gonal number is `Pₘ(x) = (m−2)(x²−x)/2 + x`, defined for every
//! integer `x` (the "generalized" numbers). An m-gonal form `⟨a₁,…,aₙ⟩ₘ` is the
//! weighted sum `Σ aᵢ·Pₘ(xᵢ)`.

mod search;

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{MgonalError, Result};

pub use search::{represents, represents_with_cache, WitnessCache};

/// gcd of a coefficient tuple (0 for the empty tuple).
pub fn coefficient_gcd(coeffs: &[u64]) -> u64 {
    coeffs.iter().fold(0u64, |g, &a| g.gcd(&a))
}

fn check_m(m: u64) -> Result<()> {
    if m < 3 {
        Err(MgonalError::invalid(format!("gonality m must be at least 3, got {m}")))
    } else {
        Ok(())
    }
}

/// A primitive m-gonal form `⟨a₁,…,aₙ⟩ₘ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawForm")]
pub struct MgonalForm {
    m: u64,
    coeffs: Vec<u64>,
}

#[derive(Deserialize)]
struct RawForm {
    m: u64,
    coeffs: Vec<u64>,
}

impl TryFrom<RawForm> for MgonalForm {
    type Error = MgonalError;

    fn try_from(raw: RawForm) -> Result<Self> {
        MgonalForm::new(raw.m, raw.coeffs)
    }
}

impl MgonalForm {
    /// Validates `m ≥ 3`, `n ≥ 1`, positive coefficients and primitivity.
    /// Non-primitive tuples are rejected rather than divided through.
    pub fn new(m: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_m(m)?;
        if coeffs.is_empty() {
            return Err(MgonalError::invalid("an m-gonal form needs at least one coefficient"));
        }
        if coeffs.iter().any(|&a| a == 0) {
            return Err(MgonalError::invalid("coefficients must be positive"));
        }
        let gcd = coefficient_gcd(&coeffs);
        if gcd != 1 {
            return Err(MgonalError::NonPrimitive { gcd });
        }
        Ok(Self { m, coeffs })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Rank n.
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `a₁ + ⋯ + aₙ`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().map(|&a| BigInt::from(a)).sum()
    }

    pub(crate) fn require_rank(&self, min: usize) -> Result<()> {
        if self.rank() < min {
            Err(MgonalError::invalid(format!(
                "operation needs rank n ≥ {min}, form has rank {}",
                self.rank()
            )))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for MgonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">_{}", self.m)
    }
}

/// `Pₘ(x)`, nonnegative for every integer `x` when `m ≥ 3`.
pub fn polygonal_number(m: u64, x: i64) -> Result<BigInt> {
    check_m(m)?;
    Ok(polygonal_generic(&BigInt::from(m), &BigInt::from(x)))
}

pub(crate) fn polygonal_generic<T>(m: &T, x: &T) -> T
where
    T: Integer + Clone + From<u8>,
{
    let two = T::from(2u8);
    let k = m.clone() - two.clone();
    let xx = x.clone() * x.clone() - x.clone();
    // x² − x is always even
    k * (xx / two) + x.clone()
}

/// Some integer `x` with `Pₘ(x) = n`, choosing the smallest `|x|` and the
/// positive root on ties; `None` when `n` is not a generalized m-gonal number.
pub fn invert_polygonal(m: u64, n: &BigInt) -> Result<Option<i64>> {
    check_m(m)?;
    if n.is_negative() {
        return Err(MgonalError::invalid("target must be nonnegative"));
    }
    Ok(invert_generic(&BigInt::from(m), n).map(|x| {
        i64::try_from(x).expect("root magnitude is far below the input size")
    }))
}

/// Roots of `(m−2)x² − (m−4)x − 2n = 0`, discriminant `(m−4)² + 8n(m−2)`.
pub(crate) fn invert_generic<T>(m: &T, n: &T) -> Option<T>
where
    T: Integer + Roots + Clone + From<u8>,
{
    let two = T::from(2u8);
    let four = T::from(4u8);
    let eight = T::from(8u8);
    let k = m.clone() - two.clone();
    let c = m.clone() - four;
    let disc = c.clone() * c.clone() + eight * n.clone() * k.clone();
    let s = disc.sqrt();
    if s.clone() * s.clone() != disc {
        return None;
    }
    let den = two * k;
    let mut best: Option<T> = None;
    for num in [c.clone() + s.clone(), c - s] {
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            continue;
        }
        best = Some(match best {
            None => q,
            Some(b) => {
                let (ab, aq) = (abs(&b), abs(&q));
                if aq < ab || (aq == ab && q > b) {
                    q
                } else {
                    b
                }
            }
        });
    }
    best
}

fn abs<T: Integer + Clone>(x: &T) -> T {
    if *x < T::zero() {
        T::zero() - x.clone()
    } else {
        x.clone()
    }
}

/// `Σ aᵢ·Pₘ(xᵢ)`.
pub fn evaluate(form: &MgonalForm, x: &[i64]) -> Result<BigInt> {
    if x.len() != form.rank() {
        return Err(MgonalError::invalid(format!(
            "point has {} coordinates, form has rank {}",
            x.len(),
            form.rank()
        )));
    }
    let m = BigInt::from(form.m());
    Ok(form
        .coeffs()
        .iter()
        .zip(x)
        .map(|(&a, &xi)| BigInt::from(a) * polygonal_generic(&m, &BigInt::from(xi)))
        .sum())
}

/// `N = A(m−2) + B` with `0 ≤ B ≤ m−3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetDecomposition {
    pub n: u64,
    pub a: u64,
    pub b: u64,
}

pub fn decompose_target(m: u64, n: u64) -> Result<TargetDecomposition> {
    check_m(m)?;
    let (a, b) = n.div_rem(&(m - 2));
    Ok(TargetDecomposition { n, a, b })
}

/// A point `x ∈ ℤⁿ` with `Σ aᵢPₘ(xᵢ) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub x: Vec<i64>,
}

impl Witness {
    pub fn verify(&self, form: &MgonalForm) -> bool {
        evaluate(form, &self.x).map_or(false, |v| v == BigInt::from(self.n))
    }
}
