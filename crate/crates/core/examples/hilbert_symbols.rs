//! Hilbert symbols, Hasse invariants, square classes and isotropy over ℚₚ.
//!
//! cargo run --example hilbert_symbols

use mgonal::arith::{hasse_invariant, hilbert_symbol, square_class, PAdicContext};
use mgonal::quadratic::is_isotropic_i64;
use num_bigint::BigInt;

fn main() -> mgonal::Result<()> {
    for p in [2, 3, 5] {
        let row: Vec<String> = (-3..=3)
            .filter(|&a| a != 0)
            .map(|a| hilbert_symbol(&BigInt::from(a), &BigInt::from(-1), p).map(|s| format!("{s:+}")))
            .collect::<mgonal::Result<_>>()?;
        println!("p={p}: (a,-1) for a in -3..=3 \\ 0: {}", row.join(" "));
    }
    let coeffs: Vec<BigInt> = [1, 1, 1, 1].into_iter().map(BigInt::from).collect();
    println!("hasse <1,1,1,1> at 2: {}", hasse_invariant(&coeffs, 2)?);
    let ctx = PAdicContext::new(2, 10)?;
    println!("square class of 12 at 2: {:?}", square_class(&BigInt::from(12), &ctx)?);
    for p in [2, 3, 5, 7] {
        println!("<1,1,6,6> isotropic at {p}: {}", is_isotropic_i64(&[1, 1, 6, 6], p)?);
    }
    Ok(())
}
