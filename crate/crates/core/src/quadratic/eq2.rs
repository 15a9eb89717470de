//! p-adic solvability of
//! `g(x) = (B + k(m−2) − Σ_{i≥2} aᵢxᵢ)² + Σ_{i≥2} a₁aᵢxᵢ² = a₁(2A + B + k(m−4))`
//! in `x = (x₂,…,xₙ) ∈ ℤₚⁿ⁻¹`, stratified by `min ordₚ(xᵢ)`.
//!
//! Stratum `s` substitutes `x = pˢTv` with `T` a Jordan transform of the Gram
//! matrix (unimodular over ℤₚ, so `v` is primitive exactly when `x/pˢ` is) and
//! searches residues of `v` one coordinate digit at a time; see
//! [`search_stratum`]. Every infinite branch converges to a singular solution;
//! the only critical point of `g` is `x = (L/S, …, L/S)` with `L = B + k(m−2)`,
//! `S = Σaᵢ` and `g = a₁L²/S` there, which is checked up front.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{jordan_decompose, GramMatrix};
use crate::arith::{mod_inverse, modp, ord, PAdicContext};
use crate::error::{MgonalError, Result};
use crate::polygonal::MgonalForm;

/// Nodes visited per stratum before the search gives up with a resource error.
pub const EQ2_NODE_BUDGET: usize = 3_000_000;

/// Right-hand side `2Aa₁ + Ba₁ + k(m−4)a₁`.
pub fn eq2_rhs(form: &MgonalForm, a: &BigInt, b: &BigInt, k: &BigInt) -> BigInt {
    let a1 = BigInt::from(form.coeffs()[0]);
    let m4 = BigInt::from(form.m()) - 4;
    &a1 * (BigInt::from(2) * a + b + k * m4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq2Status {
    /// No solution over ℤₚ at all.
    Unsolvable,
    /// No solution with `min ordₚ(xᵢ)` inside the searched strata; solutions
    /// further out were found or could not be excluded.
    UnsolvableWithinStrata,
    Solvable,
    PrimitivelySolvable,
}

impl Eq2Status {
    pub fn is_solvable(self) -> bool {
        matches!(self, Eq2Status::Solvable | Eq2Status::PrimitivelySolvable)
    }
}

/// How a witness certifies a ℤₚ-solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Eq2Certificate {
    /// The partial derivative of `g(pˢy)` in `y_coordinate` has valuation
    /// `order` with `2·order < precision`, so Hensel's lemma applies.
    Hensel { coordinate: usize, order: u32 },
    /// `x` is the residue of the critical point `(L/S)·𝟙`, an exact solution.
    CriticalPoint,
}

/// A solution modulo `p^precision`, `x ≡ pˢ·y` with `y` primitive, that lifts to ℤₚ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Witness {
    pub p: u64,
    pub precision: u32,
    pub stratum: u32,
    #[serde(with = "crate::serde_exact::vec")]
    pub x: Vec<BigInt>,
    pub certificate: Eq2Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Verdict {
    pub p: u64,
    pub status: Eq2Status,
    /// Smallest `min ordₚ(xᵢ)` of a solution, when one was found in the strata.
    pub min_order: Option<u32>,
    /// Largest stratum searched, `⌈½ordₚ(a₁)⌉ + 1`.
    pub max_stratum: u32,
    pub witness: Option<Eq2Witness>,
}

/// The equation for fixed `(A, B, k)`.
#[derive(Debug, Clone)]
pub struct Eq2Equation {
    a1: BigInt,
    tail: Vec<BigInt>,
    l: BigInt,
    rhs: BigInt,
    sum: BigInt,
}

impl Eq2Equation {
    pub fn new(form: &MgonalForm, a: &BigInt, b: &BigInt, k: &BigInt) -> Result<Self> {
        form.require_rank(2)?;
        let c: Vec<BigInt> = form.coeffs().iter().map(|&v| BigInt::from(v)).collect();
        Ok(Self {
            a1: c[0].clone(),
            tail: c[1..].to_vec(),
            l: b + k * (BigInt::from(form.m()) - 2),
            rhs: eq2_rhs(form, a, b, k),
            sum: form.coefficient_sum(),
        })
    }

    /// `B + k(m−2)`.
    pub fn shift(&self) -> &BigInt {
        &self.l
    }

    pub fn rhs(&self) -> &BigInt {
        &self.rhs
    }

    fn z(&self, x: &[BigInt]) -> BigInt {
        let mut z = self.l.clone();
        for (a, xi) in self.tail.iter().zip(x) {
            z -= a * xi;
        }
        z
    }

    /// Left-hand side `g(x)`.
    pub fn lhs(&self, x: &[BigInt]) -> BigInt {
        let z = self.z(x);
        let mut s = &z * &z;
        for (a, xi) in self.tail.iter().zip(x) {
            s += &self.a1 * a * xi * xi;
        }
        s
    }

    /// `∂g/∂xᵢ = 2aᵢ(a₁xᵢ − z)`.
    fn partial(&self, x: &[BigInt], z: &BigInt, i: usize) -> BigInt {
        BigInt::from(2) * &self.tail[i] * (&self.a1 * &x[i] - z)
    }

    /// Whether `witness` certifies a ℤₚ-solution in its stratum.
    pub fn verify_witness(&self, w: &Eq2Witness) -> bool {
        let p = w.p;
        let pb = BigInt::from(p);
        if w.x.len() != self.tail.len() || w.precision <= w.stratum {
            return false;
        }
        let modulus = pb.pow(w.precision);
        if !modp(&(self.lhs(&w.x) - &self.rhs), &modulus).is_zero() {
            return false;
        }
        let stratum_mod = pb.pow(w.stratum);
        if !w.x.iter().all(|xi| modp(xi, &stratum_mod).is_zero()) {
            return false;
        }
        let next = &stratum_mod * &pb;
        if w.x.iter().all(|xi| modp(xi, &next).is_zero()) {
            return false;
        }
        match w.certificate {
            Eq2Certificate::Hensel { coordinate, order } => {
                if coordinate >= w.x.len() || w.precision <= 2 * order {
                    return false;
                }
                let z = self.z(&w.x);
                let d = modp(&(&stratum_mod * self.partial(&w.x, &z, coordinate)), &modulus);
                !d.is_zero() && ord(&d, p) == Some(order)
            }
            Eq2Certificate::CriticalPoint => {
                &self.rhs * &self.sum == &self.a1 * &self.l * &self.l
                    && w.x.iter().all(|xi| modp(&(&self.sum * xi - &self.l), &modulus).is_zero())
            }
        }
    }

    fn singular_stratum(&self, p: u64) -> Option<u32> {
        if &self.rhs * &self.sum != &self.a1 * &self.l * &self.l {
            return None;
        }
        if self.l.is_zero() {
            return Some(u32::MAX);
        }
        let ol = ord(&self.l, p).unwrap();
        let os = ord(&self.sum, p).unwrap();
        (ol >= os).then(|| ol - os)
    }

    /// The critical point `(L/S)·𝟙` reduced mod `p^precision`.
    fn singular_witness(&self, p: u64, precision: u32, stratum: u32) -> Eq2Witness {
        let modulus = BigInt::from(p).pow(precision);
        let pb = BigInt::from(p);
        let os = ord(&self.sum, p).unwrap();
        let unit = &self.sum / pb.pow(os);
        let inv = mod_inverse(&unit, &modulus).expect("unit part is invertible");
        let c = modp(&(&self.l / pb.pow(os) * inv), &modulus);
        Eq2Witness {
            p,
            precision,
            stratum,
            x: vec![c; self.tail.len()],
            certificate: Eq2Certificate::CriticalPoint,
        }
    }
}

/// `f(v) = g(pˢTv) − rhs` over `v ∈ ℤₚⁿ⁻¹`, where `T` is the transform of a
/// Jordan splitting of the Gram matrix `G`, so that `f(v) = vᵀMv + β·v + C`
/// with `M = p²ˢTᵀGT` block diagonal up to high powers of p.
struct Frame {
    p: u64,
    pb: BigInt,
    ps: BigInt,
    t: Vec<Vec<BigInt>>,
    m: Vec<Vec<BigInt>>,
    beta: Vec<BigInt>,
    c: BigInt,
    /// `ordₚ(M_aa)` on the diagonal and `ordₚ(2M_ab)` off it.
    quad: Vec<Vec<Option<u32>>>,
}

impl Frame {
    fn new(eq: &Eq2Equation, p: u64, s: u32) -> Result<Self> {
        let n = eq.tail.len();
        let g: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = &eq.tail[i] * &eq.tail[j];
                        if i == j {
                            v + &eq.a1 * &eq.tail[i]
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let gram = GramMatrix::new(g.clone())?;
        let det_ord = ord(&gram.determinant(), p).unwrap();
        let t = jordan_decompose(&gram, &PAdicContext::new(p, 2 * det_ord + 6)?)?.transform;
        let pb = BigInt::from(p);
        let ps = pb.pow(s);
        let p2s = &ps * &ps;
        let gt: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &g[i][k] * &t[k][j]).sum()).collect())
            .collect();
        let m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| &p2s * (0..n).map(|k| &t[k][i] * &gt[k][j]).sum::<BigInt>()).collect())
            .collect();
        let scale = BigInt::from(-2) * &eq.l * &ps;
        let beta = (0..n)
            .map(|j| &scale * (0..n).map(|k| &t[k][j] * &eq.tail[k]).sum::<BigInt>())
            .collect();
        let quad = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if a == b { ord(&m[a][a], p) } else { ord(&(BigInt::from(2) * &m[a][b]), p) })
                    .collect()
            })
            .collect();
        Ok(Self {
            p,
            pb,
            ps,
            t,
            m,
            beta,
            c: &eq.l * &eq.l - &eq.rhs,
            quad,
        })
    }

    /// `f(v)` and `∇f(v)`.
    fn eval(&self, v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
        let mv: Vec<BigInt> = self.m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let mut f = self.c.clone();
        for ((vi, mi), bi) in v.iter().zip(&mv).zip(&self.beta) {
            f += vi * (mi + bi);
        }
        let grad = mv.iter().zip(&self.beta).map(|(mi, bi)| BigInt::from(2) * mi + bi).collect();
        (f, grad)
    }

    fn x(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.t
            .iter()
            .map(|row| &self.ps * row.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>())
            .collect()
    }
}

struct Found {
    v: Vec<BigInt>,
    coordinate: usize,
    order: u32,
}

enum Search {
    Found(Found),
    Exhausted,
    Budget,
}

/// Depth-first over nodes `v ≡ rep (mod p^hₐ)` coordinatewise. On a node
/// `f(v+δ) − f(v) = ∇f(v)·δ + δᵀMδ`, so `f` is constant mod `p^μ` with `μ` the
/// least of `hₐ + ordₚ ∂ₐf`, `2hₐ + ordₚ M_aa` and `hₐ + h_b + ordₚ 2M_ab`; the
/// node is pruned when `f(rep) ≢ 0 (mod p^μ)` and otherwise the coordinate
/// behind `μ` gains a digit. Coordinates along high Jordan scales therefore
/// stay unrefined until they matter. A representative with `f ≡ 0 (mod p^{2τ+1})`,
/// `τ = min ordₚ ∂ₐf`, is a Hensel point.
fn search_stratum(frame: &Frame, primitive: bool, budget: usize) -> Search {
    let p = frame.p;
    let n = frame.m.len();
    let mut stack: Vec<(Vec<BigInt>, Vec<u32>)> = Vec::new();
    if primitive {
        // j₀ is the first coordinate that is a unit
        for j0 in (0..n).rev() {
            for r in (1..p).rev() {
                let mut v = vec![BigInt::zero(); n];
                v[j0] = BigInt::from(r);
                let h: Vec<u32> = (0..n).map(|j| u32::from(j <= j0)).collect();
                stack.push((v, h));
            }
        }
    } else {
        stack.push((vec![BigInt::zero(); n], vec![0; n]));
    }
    let mut visited = 0usize;
    while let Some((v, h)) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Search::Budget;
        }
        let (f, grad) = frame.eval(&v);
        let tau = grad.iter().enumerate().filter_map(|(a, d)| ord(d, p).map(|o| (o, a))).min();
        if let Some((tau, a)) = tau {
            if f.is_zero() || modp(&f, &frame.pb.pow(2 * tau + 1)).is_zero() {
                return Search::Found(Found { v, coordinate: a, order: tau });
            }
        }
        // (μ, h of the coordinate, coordinate)
        let mut best: Option<(u32, u32, usize)> = None;
        let mut consider = |mu: u32, a: usize| {
            let key = (mu, h[a], a);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        };
        for (a, d) in grad.iter().enumerate() {
            if let Some(o) = ord(d, p) {
                consider(h[a] + o, a);
            }
        }
        for a in 0..n {
            for b in a..n {
                if let Some(q) = frame.quad[a][b] {
                    consider(h[a] + h[b] + q, if h[b] < h[a] { b } else { a });
                }
            }
        }
        let (mu, _, a) = best.expect("M is nonsingular");
        if !modp(&f, &frame.pb.pow(mu)).is_zero() {
            continue;
        }
        let step = frame.pb.pow(h[a]);
        for r in (0..p).rev() {
            let mut child = v.clone();
            child[a] += &step * r;
            let mut hc = h.clone();
            hc[a] += 1;
            stack.push((child, hc));
        }
    }
    Search::Exhausted
}

/// Newton iteration in `v_a` until `f(v) ≡ 0 (mod p^precision)`.
fn refine(frame: &Frame, found: &Found, precision: u32) -> Option<Vec<BigInt>> {
    let pb = &frame.pb;
    let t = found.order;
    let work = pb.pow(precision + 2 * t + 4);
    let target = pb.pow(precision);
    let pt = pb.pow(t);
    let a = found.coordinate;
    let mut v = found.v.clone();
    for _ in 0..(2 * precision + 8) {
        let (f, grad) = frame.eval(&v);
        if modp(&f, &target).is_zero() {
            return Some(v);
        }
        let (fq, fr) = f.div_rem(&pt);
        let (dq, dr) = grad[a].div_rem(&pt);
        if !fr.is_zero() || !dr.is_zero() {
            return None;
        }
        let inv = mod_inverse(&dq, &work)?;
        v[a] = modp(&(&v[a] - fq * inv), &work);
    }
    None
}

/// A certified solution in stratum `s` exactly (`min ordₚ(xᵢ) = s`), reduced
/// mod `p^E` with `E = max(precision, 2·hensel_order + 1)`.
pub fn solve_eq2_stratum(eq: &Eq2Equation, s: u32, ctx: &PAdicContext) -> Result<Option<Eq2Witness>> {
    let p = ctx.p();
    if eq.singular_stratum(p) == Some(s) {
        let precision = ctx.precision().max(s + 1);
        return Ok(Some(eq.singular_witness(p, precision, s)));
    }
    let frame = Frame::new(eq, p, s)?;
    match search_stratum(&frame, true, EQ2_NODE_BUDGET) {
        Search::Found(found) => {
            let precision = ctx.precision().max(2 * found.order + 1);
            let v = refine(&frame, &found, precision).ok_or_else(|| {
                MgonalError::Anomaly(format!("Newton refinement failed at p = {p}, stratum {s}"))
            })?;
            let modulus = frame.pb.pow(precision);
            let x: Vec<BigInt> = frame.x(&v).iter().map(|xi| modp(xi, &modulus)).collect();
            // T is invertible over ℤₚ, so some ∂g/∂xᵢ has the valuation of ∇f
            let z = eq.z(&x);
            let (order, coordinate) = (0..x.len())
                .filter_map(|i| ord(&modp(&(&frame.ps * eq.partial(&x, &z, i)), &modulus), p).map(|o| (o, i)))
                .min()
                .ok_or_else(|| MgonalError::Anomaly(format!("refined solution is singular at p = {p}")))?;
            let w = Eq2Witness {
                p,
                precision,
                stratum: s,
                x,
                certificate: Eq2Certificate::Hensel { coordinate, order },
            };
            if !eq.verify_witness(&w) {
                return Err(MgonalError::Anomaly(format!(
                    "refined solution failed verification at p = {p}, stratum {s}"
                )));
            }
            Ok(Some(w))
        }
        Search::Exhausted => Ok(None),
        Search::Budget => Err(MgonalError::Resource(format!(
            "stratum {s} search at p = {p} exceeded {EQ2_NODE_BUDGET} nodes"
        ))),
    }
}

/// Precision required by [`solvable_eq2_at`]: `1 + ordₚ(a₁) + 2ordₚ(d)` for odd
/// p and `3 + ord₂(a₁) + 2ord₂(d)` for p = 2, `d` the reduced determinant.
pub fn eq2_required_precision(form: &MgonalForm, det: &BigInt, p: u64) -> u32 {
    let oa = ord(&BigInt::from(form.coeffs()[0]), p).unwrap();
    let od = ord(det, p).unwrap_or(0);
    let base = if p == 2 { 3 } else { 1 };
    base + oa + 2 * od
}

/// Largest stratum searched: `⌈½ordₚ(a₁)⌉ + 1`.
pub fn max_stratum(form: &MgonalForm, p: u64) -> u32 {
    let oa = ord(&BigInt::from(form.coeffs()[0]), p).unwrap();
    oa.div_ceil(2) + 1
}

pub fn solvable_eq2_at(
    form: &MgonalForm,
    a: &BigInt,
    b: &BigInt,
    k: &BigInt,
    ctx: &PAdicContext,
) -> Result<Eq2Verdict> {
    let p = ctx.p();
    let det = super::reduced_quadratic(form)?.det;
    ctx.require(eq2_required_precision(form, &det, p))?;
    let eq = Eq2Equation::new(form, a, b, k)?;
    let top = max_stratum(form, p);
    for s in 0..=top {
        if let Some(w) = solve_eq2_stratum(&eq, s, ctx)? {
            let status = if s == 0 {
                Eq2Status::PrimitivelySolvable
            } else {
                Eq2Status::Solvable
            };
            return Ok(Eq2Verdict {
                p,
                status,
                min_order: Some(s),
                max_stratum: top,
                witness: Some(w),
            });
        }
    }
    // Everything left has all xᵢ ≡ 0 mod p^(top+1).
    let deeper = top + 1;
    let singular_deeper = eq.singular_stratum(p).is_some_and(|s| s >= deeper);
    let status = if singular_deeper {
        Eq2Status::UnsolvableWithinStrata
    } else {
        match search_stratum(&Frame::new(&eq, p, deeper)?, false, EQ2_NODE_BUDGET) {
            Search::Exhausted => Eq2Status::Unsolvable,
            Search::Found(_) | Search::Budget => Eq2Status::UnsolvableWithinStrata,
        }
    };
    Ok(Eq2Verdict {
        p,
        status,
        min_order: None,
        max_stratum: top,
        witness: None,
    })
}
