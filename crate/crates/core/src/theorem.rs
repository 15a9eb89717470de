//! Quantities attached to a rank ≥ 5 form by the local-to-global argument:
//! unit-deficient primes `T(a)`, bad primes, stability exponents for the
//! auxiliary parameter k, the bound `K(a)`, and the search for admissible
//! `(k, P)` pairs.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{ord, prime_divisors, PAdicContext};
use crate::error::{MgonalError, Result};
use crate::local::locally_represents;
use crate::polygonal::{decompose_target, MgonalForm};
use crate::quadratic::{
    eq2_required_precision, is_isotropic, reduced_quadratic, solve_eq2_stratum, Eq2Equation, Eq2Witness,
};

pub use crate::quadratic::eq2_rhs;

/// Default number of pairs returned by [`admissible_k`].
pub const DEFAULT_PAIR_CAP: usize = 16;

/// Values of k tried by [`admissible_k`] before giving up.
pub const K_SCAN_LIMIT: u64 = 200_000;

fn odd_coefficient_primes(coeffs: &[u64]) -> Vec<u64> {
    let mut ps: Vec<u64> = coeffs.iter().flat_map(|&a| prime_divisors(a)).filter(|&p| p != 2).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Odd primes p at which at most four of `a₁,…,aₙ` (counted with
/// multiplicity) are p-adic units.
pub fn unit_deficient_primes(form: &MgonalForm) -> Result<Vec<u64>> {
    form.require_rank(5)?;
    Ok(odd_coefficient_primes(form.coeffs())
        .into_iter()
        .filter(|&p| form.coeffs().iter().filter(|&&a| a % p != 0).count() <= 4)
        .collect())
}

/// Odd p with `p | m−4`, `ordₚ(a₁) ≥ max_{i≥2} ordₚ(aᵢ)` and `⟨a₂,…,aₙ⟩`
/// anisotropic over ℤₚ.
///
/// Anisotropy forces p to divide some `aᵢ` with `i ≥ 2` (a unimodular
/// quaternary lattice at odd p is isotropic), so only those primes are tried;
/// this also makes `m = 4` finite.
pub fn bad_primes(form: &MgonalForm) -> Result<Vec<u64>> {
    form.require_rank(5)?;
    let m = form.m();
    let tail: Vec<BigInt> = form.coeffs()[1..].iter().map(|&a| BigInt::from(a)).collect();
    let a1 = BigInt::from(form.coeffs()[0]);
    let mut bad = Vec::new();
    for p in odd_coefficient_primes(&form.coeffs()[1..]) {
        let divides_m4 = m == 4 || (m > 4 && (m - 4) % p == 0);
        if !divides_m4 {
            continue;
        }
        let o1 = ord(&a1, p).unwrap();
        if tail.iter().any(|a| ord(a, p).unwrap() > o1) {
            continue;
        }
        if !is_isotropic(&tail, p)? {
            bad.push(p);
        }
    }
    if form.rank() >= 6 && !bad.is_empty() {
        return Err(MgonalError::Anomaly(format!(
            "rank {} form {form} has bad primes {bad:?}, but rank ≥ 5 tails are isotropic",
            form.rank()
        )));
    }
    Ok(bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    OddGood,
    OddBad,
    Dyadic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::OddGood => "odd-good",
            Regime::OddBad => "odd-bad",
            Regime::Dyadic => "dyadic",
        }
    }
}

/// `e` such that the solvability verdict for k is constant on `k mod pᵉ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityExponent {
    pub p: u64,
    pub e: u32,
    pub regime: Regime,
}

pub fn k_stability_exponent(form: &MgonalForm, p: u64) -> Result<StabilityExponent> {
    let d = reduced_quadratic(form)?.det;
    stability_with_det(form, &d, p, &bad_primes(form)?)
}

fn stability_with_det(form: &MgonalForm, d: &BigInt, p: u64, bad: &[u64]) -> Result<StabilityExponent> {
    crate::arith::require_prime(p)?;
    let od = ord(d, p).unwrap();
    let oa = ord(&BigInt::from(form.coeffs()[0]), p).unwrap();
    let (e, regime) = if p == 2 {
        (3 + oa + 2 * od, Regime::Dyadic)
    } else if bad.contains(&p) {
        (1 + oa + 2 * od, Regime::OddBad)
    } else {
        (1 + 2 * od, Regime::OddGood)
    };
    Ok(StabilityExponent { p, e, regime })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KFactor {
    pub p: u64,
    /// `1 + ordₚ(a₁) + 2·ordₚ(d)`.
    pub exponent: u32,
}

/// `K(a) = ∏_{p ∈ T(a)∪{2}} 4·p^(1+ordₚ(a₁)+2ordₚ(d)) − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KConstant {
    #[serde(with = "crate::serde_exact")]
    pub value: BigInt,
    pub factors: Vec<KFactor>,
}

impl KConstant {
    /// Recompute the value from the factor table.
    pub fn from_factors(factors: &[KFactor]) -> BigInt {
        factors
            .iter()
            .map(|f| BigInt::from(4) * BigInt::from(f.p).pow(f.exponent))
            .product::<BigInt>()
            - 1
    }
}

/// `T(a) ∪ {2}`, ascending.
pub fn k_primes(form: &MgonalForm) -> Result<Vec<u64>> {
    let mut ps = unit_deficient_primes(form)?;
    ps.insert(0, 2);
    Ok(ps)
}

pub fn k_constant(form: &MgonalForm) -> Result<KConstant> {
    let d = reduced_quadratic(form)?.det;
    let a1 = BigInt::from(form.coeffs()[0]);
    let factors: Vec<KFactor> = k_primes(form)?
        .into_iter()
        .map(|p| KFactor {
            p,
            exponent: 1 + ord(&a1, p).unwrap() + 2 * ord(&d, p).unwrap(),
        })
        .collect();
    Ok(KConstant {
        value: KConstant::from_factors(&factors),
        factors,
    })
}

/// Largest `s(p)` allowed, `⌊½ordₚ(4a₁)⌋`.
pub fn max_s(form: &MgonalForm, p: u64) -> u32 {
    ord(&(BigInt::from(4) * form.coeffs()[0]), p).unwrap() / 2
}

/// Per-prime evidence: the stratum `s(p)` and a certified solution there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEvidence {
    pub p: u64,
    pub s: u32,
    /// `k mod p^e` with `e` the stability exponent.
    #[serde(with = "crate::serde_exact")]
    pub k_residue: BigInt,
    pub stability: StabilityExponent,
    pub witness: Eq2Witness,
}

/// A pair `(k, P)` for which the equation with `x` replaced by `P·x` is
/// primitively solvable at every prime of `T(a) ∪ {2}` (elsewhere five unit
/// coefficients guarantee it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    #[serde(with = "crate::serde_exact")]
    pub k: BigInt,
    #[serde(rename = "P", with = "crate::serde_exact")]
    pub p_value: BigInt,
    pub evidence: Vec<PrimeEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub k_bound: KConstant,
    pub pairs: Vec<AdmissiblePair>,
}

struct Context {
    d: BigInt,
    bad: Vec<u64>,
    primes: Vec<u64>,
}

fn prime_context(form: &MgonalForm, d: &BigInt, p: u64, bad: &[u64]) -> Result<(PAdicContext, StabilityExponent)> {
    let st = stability_with_det(form, d, p, bad)?;
    let precision = st.e.max(eq2_required_precision(form, d, p));
    Ok((PAdicContext::new(p, precision)?, st))
}

impl AdmissiblePair {
    /// Re-check every witness against the equation for `(A, B, k)`.
    pub fn verify(&self, form: &MgonalForm, a: u64, b: u64) -> Result<bool> {
        let eq = Eq2Equation::new(form, &BigInt::from(a), &BigInt::from(b), &self.k)?;
        let d = reduced_quadratic(form)?.det;
        let mut product = BigInt::one();
        for ev in &self.evidence {
            let required = ev.stability.e.max(eq2_required_precision(form, &d, ev.p));
            if ev.witness.p != ev.p
                || ev.witness.stratum != ev.s
                || ev.witness.precision < required
                || !eq.verify_witness(&ev.witness)
            {
                return Ok(false);
            }
            product *= BigInt::from(ev.p).pow(ev.s);
        }
        Ok(product == self.p_value)
    }
}

/// Admissible `(k, P)` pairs by ascending k, then ascending P, at most `cap`.
///
/// Requires N to be locally represented. An empty result inside `[0, K(a)]`
/// is reported as an anomaly carrying the per-prime diagnostics.
pub fn admissible_k(form: &MgonalForm, n: u64, cap: usize) -> Result<AdmissibleReport> {
    form.require_rank(5)?;
    let local = locally_represents(form, &BigInt::from(n))?;
    if !local.represented {
        return Err(MgonalError::invalid(format!("{n} is not locally represented by {form}")));
    }
    let target = decompose_target(form.m(), n)?;
    let k_bound = k_constant(form)?;
    let cx = Context {
        d: reduced_quadratic(form)?.det,
        bad: bad_primes(form)?,
        primes: {
            let mut ps = k_primes(form)?;
            for q in bad_primes(form)? {
                if !ps.contains(&q) {
                    ps.push(q);
                }
            }
            ps.sort_unstable();
            ps
        },
    };
    let contexts = cx
        .primes
        .iter()
        .map(|&p| prime_context(form, &cx.d, p, &cx.bad))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = (BigInt::from(target.a), BigInt::from(target.b));
    let mut pairs = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    let limit = k_bound.value.to_u64().map_or(K_SCAN_LIMIT, |v| v.min(K_SCAN_LIMIT - 1) + 1);
    for kv in 0..limit {
        let k = BigInt::from(kv);
        let eq = Eq2Equation::new(form, &a, &b, &k)?;
        let mut per_prime: Vec<Vec<PrimeEvidence>> = Vec::new();
        for (&p, (ctx, st)) in cx.primes.iter().zip(&contexts) {
            let mut options = Vec::new();
            for s in 0..=max_s(form, p) {
                if let Some(witness) = solve_eq2_stratum(&eq, s, ctx)? {
                    options.push(PrimeEvidence {
                        p,
                        s,
                        k_residue: &k % BigInt::from(p).pow(st.e),
                        stability: *st,
                        witness,
                    });
                }
            }
            if options.is_empty() && failures.len() < 8 {
                failures.push(format!("k={kv}: no stratum ≤ {} at p={p}", max_s(form, p)));
            }
            per_prime.push(options);
        }
        if per_prime.iter().any(Vec::is_empty) {
            continue;
        }
        let mut combos: Vec<AdmissiblePair> = vec![AdmissiblePair {
            k: k.clone(),
            p_value: BigInt::one(),
            evidence: Vec::new(),
        }];
        for options in per_prime {
            let mut next = Vec::new();
            for c in &combos {
                for ev in &options {
                    let mut e = c.evidence.clone();
                    e.push(ev.clone());
                    next.push(AdmissiblePair {
                        k: k.clone(),
                        p_value: &c.p_value * BigInt::from(ev.p).pow(ev.s),
                        evidence: e,
                    });
                }
            }
            combos = next;
        }
        combos.sort_by(|x, y| x.p_value.cmp(&y.p_value));
        for c in combos {
            if pairs.len() == cap {
                break;
            }
            pairs.push(c);
        }
        if pairs.len() == cap {
            break;
        }
    }
    if pairs.is_empty() {
        let scanned_all = BigInt::from(limit) > k_bound.value;
        let msg = format!(
            "no admissible (k, P) for N={n} on {form} with k < {limit}{}; {}",
            if scanned_all { "" } else { " (scan limit)" },
            failures.join("; ")
        );
        return Err(if scanned_all {
            MgonalError::Anomaly(msg)
        } else {
            MgonalError::Resource(msg)
        });
    }
    Ok(AdmissibleReport {
        n,
        a: target.a,
        b: target.b,
        k_bound,
        pairs,
    })
}
