//! Unit-deficient and bad primes, stability exponents, K(a) and admissible
//! (k, P) pairs.
//!
//! cargo run --example stability_constants

use mgonal::polygonal::MgonalForm;
use mgonal::theorem::{admissible_k, bad_primes, k_constant, k_primes, k_stability_exponent, unit_deficient_primes};

fn main() -> mgonal::Result<()> {
    for (m, coeffs) in [(5, vec![1, 1, 1, 1, 1]), (5, vec![2, 1, 1, 1, 1]), (7, vec![9, 1, 1, 6, 6])] {
        let form = MgonalForm::new(m, coeffs)?;
        let k = k_constant(&form)?;
        println!(
            "{form}: T = {:?}, bad = {:?}, K = {}",
            unit_deficient_primes(&form)?,
            bad_primes(&form)?,
            k.value
        );
        for p in k_primes(&form)? {
            let s = k_stability_exponent(&form, p)?;
            println!("  p={p}: stable mod p^{} ({:?})", s.e, s.regime);
        }
        let report = admissible_k(&form, 1000, 4)?;
        for pair in &report.pairs {
            let strata: Vec<String> = pair.evidence.iter().map(|e| format!("s({})={}", e.p, e.s)).collect();
            println!("  N=1000: k={} P={} [{}]", pair.k, pair.p_value, strata.join(", "));
            assert!(pair.verify(&form, report.a, report.b)?);
        }
    }
    Ok(())
}
