//! Per-prime local verdicts and local universality.
//!
//! cargo run --example local_representation

use mgonal::local::{criterion_value, is_locally_universal, locally_represents, relevant_primes};
use mgonal::polygonal::MgonalForm;
use num_bigint::BigInt;

fn main() -> mgonal::Result<()> {
    let form = MgonalForm::new(7, vec![9, 1, 1, 6, 6])?;
    println!("{form}: relevant primes {:?}", relevant_primes(&form)?);
    for n in [0u64, 5, 17, 100] {
        let nb = BigInt::from(n);
        let report = locally_represents(&form, &nb)?;
        for v in &report.verdicts {
            let c = criterion_value(&form, &nb, v.p).map_or("-".to_string(), |c| c.to_string());
            println!("  N={n:<4} p={} rule {} criterion {c}: {}", v.p, v.rule, v.represented);
        }
    }

    for (m, coeffs) in [(4, vec![1, 1, 1]), (4, vec![1, 1, 1, 1]), (8, vec![1, 1, 1, 1, 1]), (6, vec![1, 2, 3, 4, 5])] {
        let f = MgonalForm::new(m, coeffs)?;
        println!("{f} locally universal: {}", is_locally_universal(&f)?);
    }
    Ok(())
}
