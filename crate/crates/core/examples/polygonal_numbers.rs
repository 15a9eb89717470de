//! Generalized polygonal numbers and the representation search.
//!
//! cargo run --example polygonal_numbers

use mgonal::polygonal::{decompose_target, invert_polygonal, polygonal_number, represents, MgonalForm};
use num_bigint::BigInt;

fn main() -> mgonal::Result<()> {
    for m in [3, 4, 5, 8] {
        let values: Vec<String> = (-4..=4)
            .map(|x| polygonal_number(m, x).map(|v| v.to_string()))
            .collect::<mgonal::Result<_>>()?;
        println!("P_{m}(-4..=4) = {}", values.join(" "));
    }
    println!("P_5^-1(26) = {:?}", invert_polygonal(5, &BigInt::from(26))?);

    let form = MgonalForm::new(5, vec![1, 1, 1, 1, 1])?;
    for n in [33, 100, 1234] {
        let t = decompose_target(form.m(), n)?;
        let w = represents(&form, n).expect("five pentagonal numbers are universal");
        println!("{n} = A(m-2)+B with A={} B={}; {form} at x = {:?}", t.a, t.b, w.x);
    }

    let ternary = MgonalForm::new(4, vec![1, 1, 1])?;
    let missed: Vec<u64> = (0..64).filter(|&n| represents(&ternary, n).is_none()).collect();
    println!("{ternary} misses {missed:?}");
    Ok(())
}
