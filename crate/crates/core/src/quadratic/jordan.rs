//! Jordan decomposition of a nondegenerate symmetric matrix over ℤₚ.
//!
//! Greedy pivoting on an entry of minimal valuation. A diagonal pivot splits
//! off a 1×1 block; for p = 2 an off-diagonal pivot (all diagonal entries of
//! strictly larger valuation) splits off a 2×2 block, which is then brought to
//! `[[0,1],[1,0]]` or `[[2,1],[1,2]]` according to the parity of the product of
//! its halved diagonal. For odd p an off-diagonal pivot is first moved to the
//! diagonal with `eᵢ ← eᵢ + eⱼ`.
//!
//! Elimination divides by `p^scale`, so the work is done at an internal
//! precision of `E + ordₚ(det) + 4`; the output is reduced mod `p^E` and checked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gram::{bareiss_determinant, GramMatrix};
use crate::arith::{hensel_root_univariate, mod_inverse, modp, ord, PAdicContext};
use crate::error::{MgonalError, Result};

/// A unimodular Jordan constituent, before scaling by `p^scale`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnimodularBlock {
    /// `⟨u⟩`, u a p-adic unit given as a residue.
    Unit(#[serde(with = "crate::serde_exact")] BigInt),
    /// `[[0,1],[1,0]]` (p = 2 only).
    Hyperbolic,
    /// `[[2,1],[1,2]]` (p = 2 only).
    Anisotropic,
}

impl UnimodularBlock {
    pub fn dim(&self) -> usize {
        match self {
            UnimodularBlock::Unit(_) => 1,
            _ => 2,
        }
    }

    fn matrix(&self) -> Vec<Vec<BigInt>> {
        let b = |v: i64| BigInt::from(v);
        match self {
            UnimodularBlock::Unit(u) => vec![vec![u.clone()]],
            UnimodularBlock::Hyperbolic => vec![vec![b(0), b(1)], vec![b(1), b(0)]],
            UnimodularBlock::Anisotropic => vec![vec![b(2), b(1)], vec![b(1), b(2)]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanBlock {
    pub scale: u32,
    pub block: UnimodularBlock,
}

/// `transformᵀ · A · transform ≡ diag(p^scale · block) (mod p^precision)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanDecomposition {
    pub p: u64,
    pub precision: u32,
    #[serde(with = "crate::serde_exact::matrix")]
    pub transform: Vec<Vec<BigInt>>,
    pub blocks: Vec<JordanBlock>,
}

impl JordanDecomposition {
    /// The block-diagonal matrix `⊕ p^scale · block`.
    pub fn block_diagonal(&self) -> Vec<Vec<BigInt>> {
        let n: usize = self.blocks.iter().map(|b| b.block.dim()).sum();
        let mut d = vec![vec![BigInt::zero(); n]; n];
        let mut at = 0;
        let pb = BigInt::from(self.p);
        for b in &self.blocks {
            let s = pb.pow(b.scale);
            let m = b.block.matrix();
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    d[at + i][at + j] = &s * v;
                }
            }
            at += m.len();
        }
        d
    }

    /// Scale exponents with multiplicity (a 2×2 block contributes twice).
    pub fn scale_multiset(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .blocks
            .iter()
            .flat_map(|b| std::iter::repeat(b.scale).take(b.block.dim()))
            .collect();
        v.sort_unstable();
        v
    }

    /// Re-check every invariant against `a` modulo `p^modulus_exp`.
    pub fn verify(&self, a: &GramMatrix, modulus_exp: u32) -> bool {
        let m = BigInt::from(self.p).pow(modulus_exp);
        let t = &self.transform;
        let n = a.size();
        if t.len() != n {
            return false;
        }
        let recon = congruent(a.rows(), t);
        let d = self.block_diagonal();
        let reconstruct_ok = (0..n).all(|i| (0..n).all(|j| modp(&(&recon[i][j] - &d[i][j]), &m).is_zero()));
        let unit_det = !modp(&bareiss_determinant(t), &BigInt::from(self.p)).is_zero();
        let sorted = self.blocks.windows(2).all(|w| w[0].scale <= w[1].scale);
        let shape_ok = self.p == 2 || self.blocks.iter().all(|b| b.block.dim() == 1);
        reconstruct_ok && unit_det && sorted && shape_ok
    }
}

fn congruent(a: &[Vec<BigInt>], t: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut at = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = BigInt::zero();
            for k in 0..n {
                s += &a[i][k] * &t[k][j];
            }
            at[i][j] = s;
        }
    }
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = BigInt::zero();
            for k in 0..n {
                s += &t[k][i] * &at[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

struct Work {
    p: u64,
    m: BigInt,
    prec: u32,
    a: Vec<Vec<BigInt>>,
    t: Vec<Vec<BigInt>>,
}

impl Work {
    fn val(&self, x: &BigInt) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            ord(x, self.p)
        }
    }

    /// Basis change `e_j ← e_j + c·e_k`.
    fn add_multiple(&mut self, j: usize, k: usize, c: &BigInt) {
        let n = self.a.len();
        for r in 0..n {
            let v = &self.a[r][j] + c * &self.a[r][k];
            self.a[r][j] = modp(&v, &self.m);
        }
        for col in 0..n {
            let v = &self.a[j][col] + c * &self.a[k][col];
            self.a[j][col] = modp(&v, &self.m);
        }
        for r in 0..n {
            let v = &self.t[r][j] + c * &self.t[r][k];
            self.t[r][j] = modp(&v, &self.m);
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.t.iter_mut() {
            row.swap(i, j);
        }
    }

    /// Replace columns k, k+1 of the basis by `S` (2×2, columns are new vectors).
    fn apply_2x2(&mut self, k: usize, s: [[BigInt; 2]; 2]) {
        let n = self.a.len();
        let mix = |rows: &mut Vec<Vec<BigInt>>, m: &BigInt| {
            for row in rows.iter_mut() {
                let (x, y) = (row[k].clone(), row[k + 1].clone());
                row[k] = modp(&(&x * &s[0][0] + &y * &s[1][0]), m);
                row[k + 1] = modp(&(&x * &s[0][1] + &y * &s[1][1]), m);
            }
        };
        mix(&mut self.t, &self.m);
        mix(&mut self.a, &self.m);
        // rows k, k+1 of a
        for col in 0..n {
            let (x, y) = (self.a[k][col].clone(), self.a[k + 1][col].clone());
            self.a[k][col] = modp(&(&x * &s[0][0] + &y * &s[1][0]), &self.m);
            self.a[k + 1][col] = modp(&(&x * &s[0][1] + &y * &s[1][1]), &self.m);
        }
    }

    fn unit_inverse(&self, u: &BigInt) -> Result<BigInt> {
        mod_inverse(u, &self.m).ok_or_else(|| MgonalError::Anomaly("pivot unit part is not invertible".into()))
    }

    fn pow(&self, e: u32) -> BigInt {
        BigInt::from(self.p).pow(e)
    }
}

pub fn jordan_decompose(a: &GramMatrix, ctx: &PAdicContext) -> Result<JordanDecomposition> {
    let p = ctx.p();
    let det = a.determinant();
    if det.is_zero() {
        return Err(MgonalError::invalid("Jordan decomposition needs a nonsingular matrix"));
    }
    let det_ord = ord(&det, p).unwrap();
    ctx.require(2 * det_ord + 6)?;
    let prec = ctx.precision() + det_ord + 4;
    let n = a.size();
    let m = BigInt::from(p).pow(prec);
    let mut w = Work {
        p,
        m: m.clone(),
        prec,
        a: a.rows().iter().map(|r| r.iter().map(|v| modp(v, &m)).collect()).collect(),
        t: (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect(),
    };
    let mut blocks = Vec::new();
    let mut k = 0;
    while k < n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in i..n {
                if let Some(v) = w.val(&w.a[i][j]) {
                    let better = match best {
                        None => true,
                        Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                    };
                    if better {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or_else(|| {
            MgonalError::contract("remaining block vanished at working precision")
        })?;
        if i == j || p != 2 {
            if i != j {
                w.add_multiple(i, j, &BigInt::one());
            }
            w.swap(i, k);
            let unit = &w.a[k][k] / w.pow(v);
            let inv = w.unit_inverse(&unit)?;
            for col in k + 1..n {
                let c = modp(&(-(&w.a[k][col] / w.pow(v)) * &inv), &w.m);
                w.add_multiple(col, k, &c);
            }
            blocks.push(JordanBlock {
                scale: v,
                block: UnimodularBlock::Unit(unit),
            });
            k += 1;
        } else {
            w.swap(i, k);
            let j = if j == k { i } else { j };
            w.swap(j, k + 1);
            let sv = w.pow(v);
            let (al, be, ga) = (
                &w.a[k][k] / &sv,
                &w.a[k][k + 1] / &sv,
                &w.a[k + 1][k + 1] / &sv,
            );
            let delta = &al * &ga - &be * &be;
            let dinv = w.unit_inverse(&delta)?;
            for col in k + 2..n {
                let r1 = &w.a[k][col] / &sv;
                let r2 = &w.a[k + 1][col] / &sv;
                let c1 = modp(&(-(&ga * &r1 - &be * &r2) * &dinv), &w.m);
                let c2 = modp(&(-(&al * &r2 - &be * &r1) * &dinv), &w.m);
                w.add_multiple(col, k, &c1);
                w.add_multiple(col, k + 1, &c2);
            }
            let (s, block) = canonical_dyadic(&al, &be, &ga, prec)?;
            w.apply_2x2(k, s);
            blocks.push(JordanBlock { scale: v, block });
            k += 2;
        }
    }
    let _ = w.prec;
    let out_m = ctx.modulus();
    let mut dec = JordanDecomposition {
        p,
        precision: ctx.precision(),
        transform: w.t.iter().map(|r| r.iter().map(|x| modp(x, &out_m)).collect()).collect(),
        blocks,
    };
    for b in dec.blocks.iter_mut() {
        if let UnimodularBlock::Unit(u) = &mut b.block {
            *u = modp(u, &out_m);
        }
    }
    if !dec.verify(a, ctx.precision()) {
        return Err(MgonalError::Anomaly(format!(
            "Jordan decomposition failed its reconstruction check at p = {p}"
        )));
    }
    Ok(dec)
}

/// For an even unimodular binary `[[2α,u],[u,2β]]` (given as `al = 2α`,
/// `be = u` odd, `ga = 2β`), a basis change `S` with `SᵀKS` equal to the
/// hyperbolic plane (αβ even) or `[[2,1],[1,2]]` (αβ odd).
fn canonical_dyadic(
    al: &BigInt,
    be: &BigInt,
    ga: &BigInt,
    prec: u32,
) -> Result<([[BigInt; 2]; 2], UnimodularBlock)> {
    let m = BigInt::from(2).pow(prec);
    let two = BigInt::from(2);
    let alpha = al / &two;
    let beta = ga / &two;
    let fail = || MgonalError::Anomaly("dyadic block normalization did not converge".into());
    let hyperbolic = (&alpha * &beta).is_even();
    // e = (x, 1)
    let x = if hyperbolic {
        let start = if alpha.is_even() { modp(&beta, &two) } else { BigInt::zero() };
        hensel_root_univariate(&alpha, be, &beta, &start, 2, prec).ok_or_else(fail)?
    } else {
        hensel_root_univariate(&alpha, be, &(&beta - 1), &BigInt::zero(), 2, prec).ok_or_else(fail)?
    };
    // B(e, (1,0)) = 2αx + u is odd; g = (c⁻¹, 0) has B(e, g) = 1.
    let c = &two * &alpha * &x + be;
    let cinv = mod_inverse(&c, &m).ok_or_else(fail)?;
    let half_qg = modp(&(&alpha * &cinv * &cinv), &m);
    if hyperbolic {
        // f = g − (Q(g)/2)·e
        let f0 = modp(&(&cinv - &half_qg * &x), &m);
        let f1 = modp(&(-&half_qg), &m);
        Ok(([[x, f0], [BigInt::one(), f1]], UnimodularBlock::Hyperbolic))
    } else {
        // f = λg + t·e with λ = 1 − 2t and w·t² − w·t + c' = 0
        let cp = &half_qg - 1;
        let wv = BigInt::from(4) * (&cp + 1) - 1;
        let t = hensel_root_univariate(&wv, &(-&wv), &cp, &BigInt::zero(), 2, prec).ok_or_else(fail)?;
        let lambda = BigInt::one() - &two * &t;
        let f0 = modp(&(&lambda * &cinv + &t * &x), &m);
        let f1 = modp(&t, &m);
        Ok(([[x, f0], [BigInt::one(), f1]], UnimodularBlock::Anisotropic))
    }
}
