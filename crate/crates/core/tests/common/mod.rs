//! Independent oracles shared by the integration tests. Everything here is
//! deliberately naive: exhaustive residue enumeration, textbook formulas,
//! determinantal divisors.

#![allow(dead_code)]

use mgonal::arith::{brute_force_congruence, hensel_liftable, hensel_refine};
use mgonal::polygonal::MgonalForm;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `Pₘ(x)` straight from the definition.
pub fn pm(m: i128, x: i128) -> i128 {
    ((m - 2) * x * x - (m - 4) * x) / 2
}

pub fn ord_i128(mut x: i128, p: i128) -> u32 {
    assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &a| g.gcd(&a))
}

/// A primitive coefficient tuple of the given rank with entries in `1..=max`.
pub fn random_coeffs(r: &mut ChaCha8Rng, rank: usize, max: u64) -> Vec<u64> {
    loop {
        let c: Vec<u64> = (0..rank).map(|_| r.gen_range(1..=max)).collect();
        if gcd_all(&c) == 1 {
            return c;
        }
    }
}

pub fn random_form(r: &mut ChaCha8Rng, rank: usize, max_coeff: u64, m_range: std::ops::RangeInclusive<u64>) -> MgonalForm {
    let m = r.gen_range(m_range);
    MgonalForm::new(m, random_coeffs(r, rank, max_coeff)).unwrap()
}

/// `Σ cᵢxᵢ² + Σ lᵢxᵢ = target` over ℤₚ.
#[derive(Debug, Clone)]
pub struct Poly {
    pub coeffs: Vec<i64>,
    pub linear: Vec<i64>,
    pub target: i128,
}

impl Poly {
    pub fn diagonal(coeffs: &[i64], target: i128) -> Self {
        Self { coeffs: coeffs.to_vec(), linear: vec![0; coeffs.len()], target }
    }

    fn value(&self, x: &[i128]) -> i128 {
        self.coeffs
            .iter()
            .zip(&self.linear)
            .zip(x)
            .map(|((&c, &l), &xi)| c as i128 * xi * xi + l as i128 * xi)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Solvable,
    Unsolvable,
    /// Work exceeded the node budget before a decision.
    Budget,
}

pub struct Oracle {
    pub budget: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { budget: 30_000_000 }
    }
}

impl Oracle {
    /// Whether `poly` has a (primitive, if asked) solution in ℤₚ.
    ///
    /// Level 1 comes from `brute_force_congruence` mod p. Each level lifts the
    /// survivors by every `δ ∈ [0,p)ⁿ`. A survivor mod `p^j` is accepted once
    /// it is Hensel-liftable at `t = ⌊(j−1)/2⌋` (the lift is then carried out
    /// to `p^20` and checked) or is an exact solution. Survivors at `depth`
    /// count as solvable: this is solvability modulo `p^depth`.
    pub fn solvable(&self, poly: &Poly, p: u64, depth: u32, primitive: bool) -> Decision {
        let n = poly.coeffs.len();
        let pi = p as i128;
        let level1 = brute_force_congruence(
            &poly.coeffs,
            &poly.linear,
            &BigInt::from(0),
            &BigInt::from(poly.target),
            p,
        )
        .expect("level one fits the oracle cap");
        let mut layer: Vec<Vec<i128>> = level1
            .into_iter()
            .map(|x| x.into_iter().map(|v| v as i128).collect::<Vec<i128>>())
            .filter(|x| !primitive || x.iter().any(|&v| v != 0))
            .collect();
        let mut work: u64 = 0;
        let mut j = 1u32;
        let total = (p as u128).pow(n as u32);
        loop {
            if layer.is_empty() {
                return Decision::Unsolvable;
            }
            for x in &layer {
                if self.accepts(poly, x, p, j) {
                    return Decision::Solvable;
                }
            }
            if j >= depth {
                return Decision::Solvable;
            }
            let step = pi.pow(j);
            let modulus = step * pi;
            assert!(modulus < (1i128 << 62), "oracle modulus too large");
            let mut next = Vec::new();
            for x in &layer {
                work += total as u64;
                if work > self.budget {
                    return Decision::Budget;
                }
                let mut delta = vec![0i128; n];
                loop {
                    let y: Vec<i128> = x.iter().zip(&delta).map(|(a, d)| a + step * d).collect();
                    if (poly.value(&y) - poly.target).rem_euclid(modulus) == 0 {
                        next.push(y);
                    }
                    let mut i = 0;
                    while i < n {
                        delta[i] += 1;
                        if delta[i] < pi {
                            break;
                        }
                        delta[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
            layer = next;
            j += 1;
        }
    }

    fn accepts(&self, poly: &Poly, x: &[i128], p: u64, j: u32) -> bool {
        if poly.value(x) == poly.target {
            return true;
        }
        let t = (j - 1) / 2;
        let target = BigInt::from(poly.target);
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        if !hensel_liftable(&poly.coeffs, &poly.linear, &target, &xb, p, t).unwrap() {
            return false;
        }
        let lifted = hensel_refine(&poly.coeffs, &poly.linear, &target, &xb, p, t, 20).unwrap();
        let modulus = BigInt::from(p).pow(2 * t + 21);
        let value: BigInt = poly
            .coeffs
            .iter()
            .zip(&poly.linear)
            .zip(&lifted)
            .map(|((&c, &l), xi)| BigInt::from(c) * xi * xi + BigInt::from(l) * xi)
            .sum();
        assert!(((value - &target) % &modulus) == BigInt::from(0), "refined lift fails");
        true
    }
}

/// The polygonal equation `Σ aᵢPₘ(xᵢ) = N`, cleared of the denominator 2
/// when `m` is odd.
pub fn polygonal_poly(form: &MgonalForm, n: u64) -> Poly {
    let m = form.m() as i64;
    let a: Vec<i64> = form.coeffs().iter().map(|&v| v as i64).collect();
    if m % 2 == 0 {
        Poly {
            coeffs: a.iter().map(|&ai| ai * (m - 2) / 2).collect(),
            linear: a.iter().map(|&ai| -ai * (m - 4) / 2).collect(),
            target: n as i128,
        }
    } else {
        Poly {
            coeffs: a.iter().map(|&ai| ai * (m - 2)).collect(),
            linear: a.iter().map(|&ai| -ai * (m - 4)).collect(),
            target: 2 * n as i128,
        }
    }
}

/// Whether `ax² + by² = z²` has a nontrivial solution over ℚₚ, by the
/// primitive lift tree.
pub fn hilbert_brute(a: i64, b: i64, p: u64) -> i32 {
    let pi = p as i128;
    let two = if p == 2 { 1 } else { 0 };
    let depth = 2 * (ord_i128(a as i128, pi) + ord_i128(b as i128, pi) + two) + 4;
    let poly = Poly { coeffs: vec![a, b, -1], linear: vec![0; 3], target: 0 };
    match Oracle::default().solvable(&poly, p, depth, true) {
        Decision::Solvable => 1,
        Decision::Unsolvable => -1,
        Decision::Budget => panic!("hilbert oracle over budget for ({a},{b})_{p}"),
    }
}

/// Exact determinant by cofactor expansion.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::from(0);
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn ord_big(x: &BigInt, p: u64) -> Option<u32> {
    if *x == BigInt::from(0) {
        return None;
    }
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &pb) == BigInt::from(0) {
        x /= &pb;
        v += 1;
    }
    Some(v)
}

/// Valuations of the elementary divisors of a nonsingular matrix over ℤ₍ₚ₎,
/// from determinantal divisors `d_k = min ordₚ(k×k minor)`.
pub fn elementary_divisor_orders(m: &[Vec<BigInt>], p: u64) -> Vec<u32> {
    let n = m.len();
    let mut prev = 0u32;
    let mut out = Vec::new();
    for k in 1..=n {
        let mut best: Option<u32> = None;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let sub: Vec<Vec<BigInt>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
                if let Some(v) = ord_big(&cofactor_det(&sub), p) {
                    best = Some(best.map_or(v, |b: u32| b.min(v)));
                }
            }
        }
        let dk = best.expect("nonsingular matrix has a nonzero minor of every size");
        out.push(dk - prev);
        prev = dk;
    }
    out.sort_unstable();
    out
}

/// Every N ≤ bound written as `Σ aᵢPₘ(xᵢ)`, by iterated sumset.
pub fn representable_set(form: &MgonalForm, bound: u64) -> Vec<bool> {
    let m = form.m() as i128;
    let mut values = Vec::new();
    let mut t: i128 = 0;
    loop {
        let a = pm(m, t);
        let b = pm(m, -t);
        if a > bound as i128 && b > bound as i128 {
            break;
        }
        values.push(a);
        values.push(b);
        t += 1;
    }
    values.sort_unstable();
    values.dedup();
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for &c in form.coeffs() {
        let mut next = vec![false; bound as usize + 1];
        for (n, &ok) in reach.iter().enumerate() {
            if !ok {
                continue;
            }
            for &v in &values {
                let s = n as i128 + c as i128 * v;
                if s > bound as i128 {
                    break;
                }
                next[s as usize] = true;
            }
        }
        reach = next;
    }
    reach
}
