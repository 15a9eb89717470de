//! Local representability of integers by m-gonal forms.
//!
//! At a prime p the question reduces to one of four cases:
//!
//! 1. p odd, p | m−2: every N is represented.
//! 2. p = 2, m ≢ 0 (mod 4): every N is represented.
//! 3. p odd, p ∤ m−2: N is represented iff `8(m−2)N + S(m−4)²` is represented
//!    by the diagonal form `⟨a₁,…,aₙ⟩` over ℤₚ, where `S = Σaᵢ`.
//! 4. p = 2, m ≡ 0 (mod 4): N is represented iff `((m−2)/2)N + S((m−4)/4)²`
//!    is represented by `⟨a₁,…,aₙ⟩` over ℤ₂.
//!
//! For odd p dividing none of `m−2, a₁, …, aₙ` case 3 is representation by a
//! unimodular diagonal lattice of rank ≥ 3, which is universal.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{prime_divisors, require_prime, PAdicContext};
use crate::error::{MgonalError, Result};
use crate::polygonal::MgonalForm;
use crate::quadratic::represents_locally_diagonal;

/// Which criterion decided a local verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalRule {
    /// Cases 1–4 above.
    Case(u8),
    /// Odd p coprime to `m−2` and every coefficient.
    UnimodularUniversal,
}

const UNIMODULAR: &str = "unimodular-universal";

impl fmt::Display for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalRule::Case(c) => write!(f, "{c}"),
            LocalRule::UnimodularUniversal => f.write_str(UNIMODULAR),
        }
    }
}

impl Serialize for LocalRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LocalRule::Case(c) => s.serialize_u8(*c),
            LocalRule::UnimodularUniversal => s.serialize_str(UNIMODULAR),
        }
    }
}

impl<'de> Deserialize<'de> for LocalRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u8),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(c @ 1..=4) => Ok(LocalRule::Case(c)),
            Raw::Text(t) if t == UNIMODULAR => Ok(LocalRule::UnimodularUniversal),
            Raw::Num(c) => Err(serde::de::Error::custom(format!("unknown rule {c}"))),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unknown rule {t:?}"))),
        }
    }
}

/// Verdict at one prime. JSON: `{"p": 3, "represented": true, "rule": 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub p: u64,
    pub represented: bool,
    pub rule: LocalRule,
}

/// Verdicts at every relevant prime together with their conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub represented: bool,
    pub verdicts: Vec<LocalVerdict>,
}

impl LocalReport {
    /// First prime at which N fails, if any.
    pub fn failure(&self) -> Option<&LocalVerdict> {
        self.verdicts.iter().find(|v| !v.represented)
    }
}

/// The diagonal target of cases 3 and 4 at `p`, or `None` under cases 1 and 2.
pub fn criterion_value(form: &MgonalForm, n: &BigInt, p: u64) -> Option<BigInt> {
    let m = form.m();
    let s = form.coefficient_sum();
    let mb = BigInt::from(m);
    if p == 2 {
        if m % 4 != 0 {
            return None;
        }
        let half = (&mb - 2) / 2;
        let quarter = (&mb - 4) / 4;
        Some(half * n + s * &quarter * &quarter)
    } else {
        if (m - 2) % p == 0 {
            return None;
        }
        let c = &mb - 4;
        Some(BigInt::from(8) * (&mb - 2) * n + s * &c * &c)
    }
}

fn rule_at(form: &MgonalForm, p: u64) -> LocalRule {
    let m = form.m();
    match (p == 2, p == 2 && m % 4 == 0, p != 2 && (m - 2) % p == 0) {
        (true, true, _) => LocalRule::Case(4),
        (true, false, _) => LocalRule::Case(2),
        (false, _, true) => LocalRule::Case(1),
        (false, _, false) => {
            if form.rank() >= 3 && form.coeffs().iter().all(|&a| a % p != 0) {
                LocalRule::UnimodularUniversal
            } else {
                LocalRule::Case(3)
            }
        }
    }
}

fn coeffs_big(form: &MgonalForm) -> Vec<BigInt> {
    form.coeffs().iter().map(|&a| BigInt::from(a)).collect()
}

/// `{2} ∪ {odd p : p | a₁⋯aₙ, p ∤ m−2}`, ascending.
pub fn relevant_primes(form: &MgonalForm) -> Result<Vec<u64>> {
    form.require_rank(3)?;
    let m2 = form.m() - 2;
    let mut primes: Vec<u64> = vec![2];
    for &a in form.coeffs() {
        for q in prime_divisors(a) {
            if q != 2 && m2 % q != 0 && !primes.contains(&q) {
                primes.push(q);
            }
        }
    }
    primes.sort_unstable();
    Ok(primes)
}

pub fn locally_represents_at(form: &MgonalForm, n: &BigInt, p: u64) -> Result<LocalVerdict> {
    require_prime(p)?;
    if n.sign() == num_bigint::Sign::Minus {
        return Err(MgonalError::invalid("target must be nonnegative"));
    }
    let rule = rule_at(form, p);
    let represented = match rule {
        LocalRule::Case(1) | LocalRule::Case(2) | LocalRule::UnimodularUniversal => true,
        _ => {
            let c = criterion_value(form, n, p).expect("cases 3 and 4 have a criterion value");
            // The diagonal decision is exact; the context only carries p.
            let ctx = PAdicContext::new(p, 3)?;
            represents_locally_diagonal(&coeffs_big(form), &c, &ctx)?
        }
    };
    Ok(LocalVerdict { p, represented, rule })
}

/// Conjunction of [`locally_represents_at`] over [`relevant_primes`].
pub fn locally_represents(form: &MgonalForm, n: &BigInt) -> Result<LocalReport> {
    let verdicts = relevant_primes(form)?
        .into_iter()
        .map(|p| locally_represents_at(form, n, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalReport {
        represented: verdicts.iter().all(|v| v.represented),
        verdicts,
    })
}

/// Unit square-class representatives at p: `{1, r}` for odd p, `{1, 3, 5, 7}` for p = 2.
fn unit_classes(p: u64) -> Vec<BigInt> {
    if p == 2 {
        [1, 3, 5, 7].into_iter().map(BigInt::from).collect()
    } else {
        vec![BigInt::from(1), BigInt::from(crate::arith::least_nonresidue(p))]
    }
}

/// Whether the diagonal form `⟨a⟩` represents all of ℤₚ. Representing
/// `pᵟu` implies representing `p^(δ+2)u`, so `δ ∈ {0, 1}` suffices.
pub fn diagonal_is_universal(coeffs: &[BigInt], p: u64) -> Result<bool> {
    let ctx = PAdicContext::new(p, 3)?;
    for delta in 0..2u32 {
        for u in unit_classes(p) {
            let c = BigInt::from(p).pow(delta) * u;
            if !represents_locally_diagonal(coeffs, &c, &ctx)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether N is locally represented at every prime for every N ≥ 0.
///
/// Under cases 3 and 4 the criterion value runs through a full coset of
/// ℤₚ (`8(m−2)` is a unit at odd p ∤ m−2, `(m−2)/2` is odd when 4 | m),
/// and nonnegative integers are dense in ℤₚ, so local universality at p is
/// universality of `⟨a⟩` over ℤₚ.
pub fn is_locally_universal(form: &MgonalForm) -> Result<bool> {
    let coeffs = coeffs_big(form);
    for p in relevant_primes(form)? {
        match rule_at(form, p) {
            LocalRule::Case(3) | LocalRule::Case(4) => {
                if !diagonal_is_universal(&coeffs, p)? {
                    return Ok(false);
                }
            }
            _ => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(m: u64, c: &[u64]) -> MgonalForm {
        MgonalForm::new(m, c.to_vec()).unwrap()
    }

    #[test]
    fn relevant_prime_examples() {
        assert_eq!(relevant_primes(&form(5, &[1, 1, 1, 1, 1])).unwrap(), vec![2]);
        assert_eq!(relevant_primes(&form(7, &[6, 10, 15, 1, 1])).unwrap(), vec![2, 3]);
        assert_eq!(relevant_primes(&form(7, &[9, 1, 1, 6, 6])).unwrap(), vec![2, 3]);
    }

    #[test]
    fn verdict_examples() {
        let f = form(5, &[1, 1, 1, 1, 1]);
        let v = locally_represents_at(&f, &BigInt::from(1_000_007), 3).unwrap();
        assert_eq!(v, LocalVerdict { p: 3, represented: true, rule: LocalRule::Case(1) });
        let v = locally_represents_at(&f, &BigInt::from(17), 2).unwrap();
        assert_eq!(v.rule, LocalRule::Case(2));
        let f8 = form(8, &[1, 1, 1, 1, 1]);
        assert_eq!(criterion_value(&f8, &BigInt::from(1), 2), Some(BigInt::from(8)));
        let v = locally_represents_at(&f8, &BigInt::from(1), 2).unwrap();
        assert_eq!(v, LocalVerdict { p: 2, represented: true, rule: LocalRule::Case(4) });
        assert_eq!(
            locally_represents_at(&f, &BigInt::from(4), 11).unwrap().rule,
            LocalRule::UnimodularUniversal
        );
    }

    #[test]
    fn verdict_json() {
        let v = LocalVerdict { p: 3, represented: true, rule: LocalRule::Case(1) };
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"p":3,"represented":true,"rule":1}"#);
        assert_eq!(serde_json::from_str::<LocalVerdict>(&text).unwrap(), v);
        let u = LocalVerdict { p: 11, represented: true, rule: LocalRule::UnimodularUniversal };
        let text = serde_json::to_string(&u).unwrap();
        assert_eq!(serde_json::from_str::<LocalVerdict>(&text).unwrap(), u);
        assert!(serde_json::from_str::<LocalVerdict>(r#"{"p":3,"represented":true,"rule":7}"#).is_err());
    }

    #[test]
    fn universality() {
        assert!(is_locally_universal(&form(5, &[1, 1, 1, 1, 1])).unwrap());
        assert!(is_locally_universal(&form(4, &[1, 1, 1, 1, 1])).unwrap());
        // x² + y² + z² misses 7 mod 8
        assert!(!is_locally_universal(&form(4, &[1, 1, 1])).unwrap());
        let f = form(5, &[1, 1, 1, 1, 1]);
        for n in 0..200 {
            assert!(locally_represents(&f, &BigInt::from(n)).unwrap().represented);
        }
    }
}
