//! Largest exceptional N against m on bounds multiplier·(m−2)³.
//!
//! cargo run --release --example scaling_experiment [m_max]

use mgonal::census::{scaling_experiment, CensusOptions};
use num_rational::Ratio;

fn main() -> mgonal::Result<()> {
    let m_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let report = scaling_experiment(&[1, 1, 1, 2, 4], 5, m_max, Ratio::from_integer(20), &CensusOptions::default())?;
    print!("{}", report.to_csv()?);
    match report.slope {
        Some(s) => println!("fitted exponent {s:.3}"),
        None => println!("fewer than three rows with exceptions; no exponent fitted"),
    }
    Ok(())
}
