//! Exceptional sets: locally represented integers with no representation.
//!
//! cargo run --release --example exceptional_census

use mgonal::census::{exceptional_set, regularity_check, reverify, CensusOptions};
use mgonal::polygonal::MgonalForm;

fn main() -> mgonal::Result<()> {
    let opts = CensusOptions::default();
    for (m, coeffs, bound) in [
        (5, vec![1, 1, 1, 1, 1], 10_000),
        (4, vec![1, 2, 5, 5], 5_000),
        (6, vec![1, 2, 3, 4, 5], 5_000),
        (9, vec![1, 1, 1, 2, 4], 20_000),
    ] {
        let form = MgonalForm::new(m, coeffs)?;
        let r = exceptional_set(&form, bound, &opts)?;
        println!(
            "{form} to {bound}: exceptional {:?} ({} locally represented, {:.2}s)",
            r.exceptional,
            r.counts.locally_represented,
            r.timings.map_or(0.0, |t| t.seconds)
        );
        assert!(reverify(&r)?);
    }
    let v = regularity_check(&MgonalForm::new(4, vec![1, 1, 1, 1, 1])?, 10_000, &opts)?;
    println!("{}", serde_json::to_string(&v).unwrap());
    Ok(())
}
