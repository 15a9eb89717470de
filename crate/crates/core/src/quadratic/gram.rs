use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MgonalError, Result};
use crate::polygonal::MgonalForm;

/// Symmetric integer matrix. JSON form: an array of integer rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGram", into = "RawGram")]
pub struct GramMatrix {
    rows: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawGram(#[serde(with = "crate::serde_exact::matrix")] Vec<Vec<BigInt>>);

impl TryFrom<RawGram> for GramMatrix {
    type Error = MgonalError;

    fn try_from(raw: RawGram) -> Result<Self> {
        GramMatrix::new(raw.0)
    }
}

impl From<GramMatrix> for RawGram {
    fn from(g: GramMatrix) -> Self {
        RawGram(g.rows)
    }
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(MgonalError::invalid("empty Gram matrix"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(MgonalError::invalid("Gram matrix must be square"));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(MgonalError::invalid(format!(
                        "Gram matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[BigInt]) -> Result<Self> {
        let n = entries.len();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, e) in entries.iter().enumerate() {
            rows[i][i] = e.clone();
        }
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(&self.rows)
    }

    /// Leading principal minors `Δ₁, …, Δₙ`.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.size())
            .map(|k| {
                let sub: Vec<Vec<BigInt>> =
                    self.rows[..k].iter().map(|r| r[..k].to_vec()).collect();
                bareiss_determinant(&sub)
            })
            .collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(|d| d.is_positive())
    }

    /// `xᵀ G x`.
    pub fn evaluate(&self, x: &[BigInt]) -> BigInt {
        let n = self.size();
        let mut s = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                s += &self.rows[i][j] * &x[i] * &x[j];
            }
        }
        s
    }
}

pub(crate) fn bareiss_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// The rank-(n−1) form `Q_{a₁;a}` attached to `⟨a₁,…,aₙ⟩ₘ`, together with
/// the shift denominator `a₁+⋯+aₙ` (every shift coordinate is its reciprocal)
/// and the determinant `d_{a₁;a}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedQuadratic {
    pub gram: GramMatrix,
    #[serde(with = "crate::serde_exact")]
    pub shift_denominator: BigInt,
    #[serde(with = "crate::serde_exact")]
    pub det: BigInt,
}

/// Gram matrix with diagonal `a₁aᵢ + aᵢ²` and off-diagonal `aᵢaⱼ`, `2 ≤ i < j ≤ n`.
pub fn reduced_quadratic(form: &MgonalForm) -> Result<ReducedQuadratic> {
    if form.rank() < 2 {
        return Err(MgonalError::invalid("the reduced quadratic form needs rank n ≥ 2"));
    }
    let a: Vec<BigInt> = form.coeffs().iter().map(|&v| BigInt::from(v)).collect();
    let tail = &a[1..];
    let rows: Vec<Vec<BigInt>> = tail
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            tail.iter()
                .enumerate()
                .map(|(j, aj)| {
                    if i == j {
                        &a[0] * ai + ai * ai
                    } else {
                        ai * aj
                    }
                })
                .collect()
        })
        .collect();
    let gram = GramMatrix::new(rows)?;
    let det = gram.determinant();
    Ok(ReducedQuadratic {
        gram,
        shift_denominator: form.coefficient_sum(),
        det,
    })
}

/// `a₁^(n−2)·(a₂⋯aₙ)·(a₁+⋯+aₙ)`, the observed closed form of `d_{a₁;a}`.
/// Only used as a soft cross-check.
pub fn determinant_closed_form(form: &MgonalForm) -> BigInt {
    let a: Vec<BigInt> = form.coeffs().iter().map(|&v| BigInt::from(v)).collect();
    let n = a.len() as u32;
    let tail: BigInt = a[1..].iter().product();
    a[0].pow(n.saturating_sub(2)) * tail * form.coefficient_sum()
}
