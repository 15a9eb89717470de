mod common;

use common::*;
use mgonal::arith::{hilbert_symbol, ord_and_unit, square_class, PAdicContext};
use mgonal::local::{criterion_value, locally_represents, locally_represents_at, relevant_primes};
use mgonal::polygonal::{invert_polygonal, polygonal_number, represents, MgonalForm};
use mgonal::quadratic::{
    is_isotropic_i64, jordan_decompose, reduced_quadratic, represents_locally_diagonal, GramMatrix,
};
use mgonal::theorem::{admissible_k, bad_primes, k_constant, unit_deficient_primes, KConstant};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn nonzero(max: i64) -> impl Strategy<Value = i64> {
    (1..=max, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

fn primitive_coeffs(rank: std::ops::RangeInclusive<usize>, max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=max, rank).prop_filter("primitive", |c| {
        c.iter().fold(0u64, |g, &a| num_integer::Integer::gcd(&g, &a)) == 1
    })
}

fn form(m: std::ops::RangeInclusive<u64>, rank: std::ops::RangeInclusive<usize>, max: u64) -> impl Strategy<Value = MgonalForm> {
    (m, primitive_coeffs(rank, max)).prop_map(|(m, c)| MgonalForm::new(m, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_split_reconstructs(x in nonzero(1_000_000_000), p in prime()) {
        let (v, u) = ord_and_unit(&BigInt::from(x), p).unwrap();
        let v = v.finite().unwrap();
        prop_assert_eq!(BigInt::from(p).pow(v) * &u, BigInt::from(x));
        prop_assert!(!(u % p).is_zero());
    }

    #[test]
    fn hilbert_symmetric_and_bilinear(a in nonzero(1000), b in nonzero(1000), c in nonzero(1000), p in prime()) {
        let h = |x: i64, y: i64| hilbert_symbol(&BigInt::from(x), &BigInt::from(y), p).unwrap();
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
    }

    #[test]
    fn square_class_ignores_squares(u in nonzero(10_000), w in nonzero(300), p in prime()) {
        let ctx = PAdicContext::new(p, 30).unwrap();
        prop_assume!(w % p as i64 != 0);
        let u = BigInt::from(u);
        let w2 = BigInt::from(w) * BigInt::from(w);
        prop_assert_eq!(square_class(&u, &ctx).unwrap(), square_class(&(&u * w2), &ctx).unwrap());
    }

    #[test]
    fn polygonal_nonnegative_and_invertible(m in 3u64..=40, x in -200i64..=200) {
        let v = polygonal_number(m, x).unwrap();
        prop_assert!(!v.is_negative());
        prop_assert_eq!(&v, &BigInt::from(pm(m as i128, x as i128)));
        let back = invert_polygonal(m, &v).unwrap().unwrap();
        prop_assert_eq!(polygonal_number(m, back).unwrap(), v);
    }

    #[test]
    fn witnesses_evaluate_and_are_local(f in form(3..=12, 4..=5, 12), n in 0u64..3000) {
        if let Some(w) = represents(&f, n) {
            let total: i128 = f.coeffs().iter().zip(&w.x).map(|(&a, &x)| a as i128 * pm(f.m() as i128, x as i128)).sum();
            prop_assert_eq!(total, n as i128);
            prop_assert!(locally_represents(&f, &BigInt::from(n)).unwrap().represented);
        }
    }

    #[test]
    fn reduced_form_positive_definite(f in form(3..=20, 5..=7, 50)) {
        let q = reduced_quadratic(&f).unwrap();
        prop_assert!(q.det.is_positive());
        prop_assert!(q.gram.leading_minors().iter().all(|d| d.is_positive()));
        prop_assert_eq!(q.det, cofactor_det(q.gram.rows()));
    }

    #[test]
    fn jordan_scales_survive_unimodular_change(
        size in 2usize..=4,
        entries in prop::collection::vec(-30i64..=30, 16),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..6),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let mut rows = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            for j in i..size {
                rows[i][j] = BigInt::from(entries[i * 4 + j]);
                rows[j][i] = rows[i][j].clone();
            }
        }
        let det = cofactor_det(&rows);
        prop_assume!(!det.is_zero());
        // U = product of elementary column operations, det 1
        let mut u: Vec<Vec<BigInt>> = (0..size).map(|i| (0..size).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        for (i, j, t) in ops {
            let (i, j) = (i % size, j % size);
            if i == j { continue; }
            for row in u.iter_mut() {
                let add = &row[i] * t;
                row[j] += add;
            }
        }
        let mut changed = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                let mut s = BigInt::zero();
                for k in 0..size {
                    for l in 0..size {
                        s += &u[k][i] * &rows[k][l] * &u[l][j];
                    }
                }
                changed[i][j] = s;
            }
        }
        let ord = |x: &BigInt| ord_and_unit(x, p).unwrap().0.finite().unwrap();
        let e = 12.max(2 * ord(&det) + 6);
        let ctx = PAdicContext::new(p, e).unwrap();
        let a = jordan_decompose(&GramMatrix::new(rows).unwrap(), &ctx).unwrap();
        let b = jordan_decompose(&GramMatrix::new(changed).unwrap(), &ctx).unwrap();
        prop_assert_eq!(a.scale_multiset(), b.scale_multiset());
    }

    #[test]
    fn unit_deficient_primes_by_counting(c in primitive_coeffs(5..=7, 60)) {
        let f = MgonalForm::new(7, c.clone()).unwrap();
        let t = unit_deficient_primes(&f).unwrap();
        let mut expected: Vec<u64> = (3..=60u64)
            .filter(|&p| mgonal::arith::is_prime(p))
            .filter(|&p| c.iter().filter(|&&a| a % p != 0).count() <= 4)
            .collect();
        expected.sort_unstable();
        prop_assert_eq!(&t, &expected);
        prop_assert!(t.iter().all(|p| c.iter().any(|a| a % p == 0)));
        let bad = bad_primes(&f).unwrap();
        prop_assert!(bad.iter().all(|p| t.contains(p)), "bad primes {:?} outside T {:?}", bad, t);
    }

    #[test]
    fn k_constant_from_factors(f in form(3..=12, 5..=6, 12)) {
        let k = k_constant(&f).unwrap();
        prop_assert_eq!(KConstant::from_factors(&k.factors), k.value.clone());
        let product: BigInt = k.factors.iter().map(|x| BigInt::from(4) * BigInt::from(x.p).pow(x.exponent)).product();
        prop_assert_eq!(product - 1, k.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // Odd primes outside relevant_primes are decided by the unimodular shortcut;
    // spot-check it against the full criterion.
    #[test]
    fn shortcut_primes_represent_everything(f in form(3..=30, 3..=6, 40), ns in prop::collection::vec(0u64..100_000, 5)) {
        let rel = relevant_primes(&f).unwrap();
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            if rel.contains(&p) { continue; }
            let coeffs: Vec<BigInt> = f.coeffs().iter().map(|&a| BigInt::from(a)).collect();
            let ctx = PAdicContext::new(p, 3).unwrap();
            for &n in &ns {
                prop_assert!(locally_represents_at(&f, &BigInt::from(n), p).unwrap().represented);
                if let Some(c) = criterion_value(&f, &BigInt::from(n), p) {
                    prop_assert!(represents_locally_diagonal(&coeffs, &c, &ctx).unwrap(), "{} N={} p={}", f, n, p);
                }
            }
        }
    }

    #[test]
    fn isotropy_matches_brute_force(
        c in prop::collection::vec(nonzero(10), 2..=4),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let got = is_isotropic_i64(&c, p).unwrap();
        let two = if p == 2 { 1 } else { 0 };
        let depth = 2 * c.iter().map(|&a| ord_i128(a as i128, p as i128)).sum::<u32>() + 2 * two + 5;
        let want = Oracle::default().solvable(&Poly::diagonal(&c, 0), p, depth, true);
        prop_assert_ne!(want, Decision::Budget);
        prop_assert_eq!(got, want == Decision::Solvable, "{:?} at {}", c, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    // (k, P) admissible ⇒ (k + Π p^eₚ, P) admissible at the same strata.
    #[test]
    fn k_translation(f in form(5..=12, 5..=5, 12), n in 0u64..300) {
        prop_assume!(locally_represents(&f, &BigInt::from(n)).unwrap().represented);
        let report = admissible_k(&f, n, 4).unwrap();
        let pair = &report.pairs[0];
        let period: BigInt = pair.evidence.iter().map(|e| BigInt::from(e.p).pow(e.stability.e)).product();
        let k2 = &pair.k + &period;
        prop_assume!(k2 <= report.k_bound.value);
        let (a, b) = (BigInt::from(report.a), BigInt::from(report.b));
        for ev in &pair.evidence {
            let ctx = PAdicContext::new(ev.p, ev.witness.precision).unwrap();
            let eq = mgonal::quadratic::Eq2Equation::new(&f, &a, &b, &k2).unwrap();
            let w = mgonal::quadratic::solve_eq2_stratum(&eq, ev.s, &ctx).unwrap();
            prop_assert!(w.is_some(), "{} N={} k={} → {} loses stratum {} at p={}", f, n, pair.k, k2, ev.s, ev.p);
        }
    }
}

/// Some `y mod p^h`, primitive, at which `g(pˢy) ≡ rhs (mod p^{2τ+1})` with
/// `τ = min ordₚ ∂_y g(pˢy)`: Hensel then gives a ℤₚ-solution in stratum `s`.
fn brute_hensel_point(f: &MgonalForm, eq: &mgonal::quadratic::Eq2Equation, p: u64, s: u32, h: u32) -> bool {
    let c: Vec<BigInt> = f.coeffs().iter().map(|&a| BigInt::from(a)).collect();
    let n = c.len() - 1;
    let q = p.pow(h);
    let ps = BigInt::from(p).pow(s);
    for code in 0..q.pow(n as u32) {
        let mut rest = code;
        let y: Vec<u64> = (0..n).map(|_| { let d = rest % q; rest /= q; d }).collect();
        if y.iter().all(|d| d % p == 0) {
            continue;
        }
        let x: Vec<BigInt> = y.iter().map(|&d| &ps * d).collect();
        let mut z = eq.shift().clone();
        for (a, xi) in c[1..].iter().zip(&x) {
            z -= a * xi;
        }
        let tau = (0..n)
            .filter_map(|i| {
                let d = BigInt::from(2) * &c[i + 1] * (&c[0] * &x[i] - &z) * &ps;
                (!d.is_zero()).then(|| ord_and_unit(&d, p).unwrap().0.finite().unwrap())
            })
            .min();
        if let Some(tau) = tau {
            let r = eq.lhs(&x) - eq.rhs();
            if (r % BigInt::from(p).pow(2 * tau + 1)).is_zero() {
                return true;
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn eq2_stratum_search_is_complete_on_residues(
        f in form(3..=12, 4..=5, 12),
        a in 0i64..40, b in 0i64..10, k in -3i64..6,
        p in prop::sample::select(vec![2u64, 3, 5]),
        s in 0u32..=1,
    ) {
        let eq = mgonal::quadratic::Eq2Equation::new(&f, &BigInt::from(a), &BigInt::from(b), &BigInt::from(k)).unwrap();
        let ctx = PAdicContext::new(p, 12).unwrap();
        let found = mgonal::quadratic::solve_eq2_stratum(&eq, s, &ctx).unwrap();
        if let Some(w) = &found {
            prop_assert!(eq.verify_witness(w));
            prop_assert_eq!(w.stratum, s);
        }
        let h = match (p, f.rank()) { (2, 4) => 4, (2, _) => 3, (3, 4) => 2, _ => 1 };
        if found.is_none() {
            prop_assert!(!brute_hensel_point(&f, &eq, p, s, h), "{} A={} B={} k={} p={} s={}", f, a, b, k, p, s);
        }
    }
}
