//! The quadratic form attached to an m-gonal form and the equation it must
//! solve over ℤₚ for given (A, B, k).
//!
//! cargo run --example reduced_quadratic

use mgonal::arith::PAdicContext;
use mgonal::polygonal::{decompose_target, MgonalForm};
use mgonal::quadratic::{eq2_required_precision, reduced_quadratic, solvable_eq2_at, Eq2Equation};
use num_bigint::BigInt;

fn main() -> mgonal::Result<()> {
    let form = MgonalForm::new(7, vec![9, 1, 1, 6, 6])?;
    let q = reduced_quadratic(&form)?;
    println!("{form}: det = {}", q.det);
    for row in q.gram.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
        println!("  [{}]", cells.join(" "));
    }

    let t = decompose_target(form.m(), 100)?;
    let (a, b) = (BigInt::from(t.a), BigInt::from(t.b));
    for k in 0..3 {
        let kb = BigInt::from(k);
        let eq = Eq2Equation::new(&form, &a, &b, &kb)?;
        for p in [2, 3] {
            let ctx = PAdicContext::new(p, eq2_required_precision(&form, &q.det, p) + 4)?;
            let v = solvable_eq2_at(&form, &a, &b, &kb, &ctx)?;
            println!(
                "  N=100 k={k} rhs={} p={p}: {:?}, least stratum {:?}",
                eq.rhs(),
                v.status,
                v.witness.as_ref().map(|w| w.stratum)
            );
        }
    }
    Ok(())
}
