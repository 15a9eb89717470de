//! Exhaustive, pruned search for a representation `Σ aᵢPₘ(xᵢ) = N`.
//!
//! Coefficients are processed left to right; each coordinate tries candidates
//! in the order 0, 1, −1, 2, −2, … and is cut off once `aᵢPₘ(±t)` exceeds the
//! remaining capacity (both branches of `Pₘ` grow with `|t| ≥ 1`). The last
//! coordinate is solved directly by inverting `Pₘ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::ToPrimitive;

use super::{evaluate, invert_generic, polygonal_generic, MgonalForm, Witness};

trait SearchInt: Integer + Roots + Clone + From<u8> + From<u64> + From<i64> {
    fn to_i64_exact(&self) -> i64;
}

impl SearchInt for i128 {
    fn to_i64_exact(&self) -> i64 {
        i64::try_from(*self).expect("coordinate fits in i64")
    }
}

impl SearchInt for BigInt {
    fn to_i64_exact(&self) -> i64 {
        self.to_i64().expect("coordinate fits in i64")
    }
}

struct Searcher<T> {
    m: T,
    coeffs: Vec<T>,
    x: Vec<i64>,
}

impl<T: SearchInt> Searcher<T> {
    fn p(&self, t: i64) -> T {
        polygonal_generic(&self.m, &T::from(t))
    }

    fn run(&mut self, i: usize, remaining: T) -> bool {
        let a = self.coeffs[i].clone();
        if i + 1 == self.coeffs.len() {
            let (q, r) = remaining.div_rem(&a);
            if !r.is_zero() {
                return false;
            }
            return match invert_generic(&self.m, &q) {
                Some(v) => {
                    self.x[i] = v.to_i64_exact();
                    true
                }
                None => false,
            };
        }
        let cap = remaining.div_floor(&a);
        if self.run_candidate(i, 0, &a, &remaining) {
            return true;
        }
        let mut t: i64 = 1;
        loop {
            let pos = self.p(t);
            let neg = self.p(-t);
            if pos > cap && neg > cap {
                return false;
            }
            if pos <= cap && self.run_candidate(i, t, &a, &remaining) {
                return true;
            }
            if neg <= cap && self.run_candidate(i, -t, &a, &remaining) {
                return true;
            }
            t += 1;
        }
    }

    fn run_candidate(&mut self, i: usize, t: i64, a: &T, remaining: &T) -> bool {
        let used = a.clone() * self.p(t);
        if used > *remaining {
            return false;
        }
        self.x[i] = t;
        let rest = remaining.clone() - used;
        self.run(i + 1, rest)
    }
}

fn search<T: SearchInt>(form: &MgonalForm, n: u64) -> Option<Vec<i64>> {
    let mut s = Searcher {
        m: T::from(form.m()),
        coeffs: form.coeffs().iter().map(|&a| T::from(a)).collect(),
        x: vec![0; form.rank()],
    };
    if s.run(0, T::from(n)) {
        Some(s.x)
    } else {
        None
    }
}

/// Whether every intermediate of the search provably fits in `i128`: the
/// largest is the discriminant `(m−4)² + 8N(m−2) < 2^64 + 2^67·2^40`.
fn fits_fast_path(form: &MgonalForm) -> bool {
    form.m() < (1u64 << 40) && form.coeffs().iter().all(|&a| a < (1u64 << 60))
}

/// A verified witness for `form` representing `n`, or `None` when no integer
/// point exists. Deterministic: the first witness in the fixed search order.
pub fn represents(form: &MgonalForm, n: u64) -> Option<Witness> {
    let x = if fits_fast_path(form) {
        search::<i128>(form, n)
    } else {
        search::<BigInt>(form, n)
    }?;
    let w = Witness { n, x };
    debug_assert!(w.verify(form));
    Some(w)
}

/// Witnesses found so far in an ascending sweep, keyed by target.
#[derive(Debug, Default, Clone)]
pub struct WitnessCache {
    found: HashMap<u64, Vec<i64>>,
}

/// How many nonzero values per coordinate a cached witness is translated by.
const TRANSLATION_STEPS: i64 = 6;

impl WitnessCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.found.is_empty()
    }

    pub fn insert(&mut self, w: &Witness) {
        self.found.insert(w.n, w.x.clone());
    }

    /// Try `n = n' + aᵢPₘ(t)` with a cached witness for `n'` whose i-th
    /// coordinate contributes nothing; the candidate is re-evaluated.
    fn translate(&self, form: &MgonalForm, n: u64) -> Option<Witness> {
        let m = BigInt::from(form.m());
        let target = BigInt::from(n);
        for (i, &a) in form.coeffs().iter().enumerate() {
            for step in 1..=TRANSLATION_STEPS {
                for t in [step, -step] {
                    let add = BigInt::from(a) * polygonal_generic(&m, &BigInt::from(t));
                    if add > target {
                        continue;
                    }
                    let Some(base) = (&target - &add).to_u64() else { continue };
                    let Some(prev) = self.found.get(&base) else { continue };
                    let mut x = prev.clone();
                    x[i] = t;
                    if evaluate(form, &x).ok()? == target {
                        return Some(Witness { n, x });
                    }
                }
            }
        }
        None
    }
}

/// [`represents`] with reuse of translated witnesses from `cache`; every
/// returned witness is re-evaluated, so correctness does not depend on the cache.
pub fn represents_with_cache(form: &MgonalForm, n: u64, cache: &mut WitnessCache) -> Option<Witness> {
    let w = match cache.translate(form, n) {
        Some(w) => Some(w),
        None => represents(form, n),
    }?;
    cache.insert(&w);
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(m: u64, c: &[u64]) -> MgonalForm {
        MgonalForm::new(m, c.to_vec()).unwrap()
    }

    #[test]
    fn represents_examples() {
        let f4 = form(4, &[1, 1, 1, 1, 1]);
        // zero-first order puts the mass on the trailing coordinates
        assert_eq!(represents(&f4, 5).unwrap().x, vec![0, 0, 0, 1, 2]);
        assert!(Witness { n: 5, x: vec![2, 1, 0, 0, 0] }.verify(&f4));
        let f5 = form(5, &[1, 1, 1, 1, 1]);
        let w = represents(&f5, 33).unwrap();
        assert!(w.verify(&f5));
        assert_eq!(represents(&f5, 0).unwrap().x, vec![0; 5]);
    }

    #[test]
    fn not_represented() {
        // x² + 2y² misses 5 and 7
        let f = form(4, &[1, 2]);
        assert!(represents(&f, 5).is_none());
        assert!(represents(&f, 7).is_none());
        assert!(represents(&f, 6).is_some());
        // three squares miss 7
        assert!(represents(&form(4, &[1, 1, 1]), 7).is_none());
    }

    #[test]
    fn fast_and_big_paths_agree() {
        let f = form(7, &[2, 3, 5]);
        for n in 0..200 {
            let a = search::<i128>(&f, n);
            let b = search::<BigInt>(&f, n);
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn cache_translations_verify() {
        let f = form(6, &[1, 1, 2, 3, 4]);
        let mut cache = WitnessCache::new();
        for n in 0..300 {
            let direct = represents(&f, n).is_some();
            let cached = represents_with_cache(&f, n, &mut cache);
            assert_eq!(direct, cached.is_some());
            if let Some(w) = cached {
                assert!(w.verify(&f));
            }
        }
        assert!(!cache.is_empty());
    }
}
