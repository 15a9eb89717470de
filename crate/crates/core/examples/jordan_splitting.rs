//! Jordan splittings of integral Gram matrices over ℤₚ.
//!
//! cargo run --example jordan_splitting

use mgonal::arith::PAdicContext;
use mgonal::polygonal::MgonalForm;
use mgonal::quadratic::{jordan_decompose, reduced_quadratic, GramMatrix};

fn show(name: &str, g: &GramMatrix, p: u64, precision: u32) -> mgonal::Result<()> {
    let d = jordan_decompose(g, &PAdicContext::new(p, precision)?)?;
    let blocks: Vec<String> = d.blocks.iter().map(|b| format!("{}:{:?}", b.scale, b.block)).collect();
    println!("{name} at p={p}: {}", blocks.join("  "));
    assert!(d.verify(g, precision));
    Ok(())
}

fn main() -> mgonal::Result<()> {
    show("A2", &GramMatrix::from_i64(&[vec![2, 1], vec![1, 2]])?, 2, 12)?;
    show("A2", &GramMatrix::from_i64(&[vec![2, 1], vec![1, 2]])?, 3, 12)?;
    show("H", &GramMatrix::from_i64(&[vec![0, 1], vec![1, 0]])?, 2, 12)?;
    let g = GramMatrix::from_i64(&[vec![4, 2, 0], vec![2, 6, 3], vec![0, 3, 10]])?;
    show("M", &g, 2, 16)?;
    show("M", &g, 3, 16)?;
    let q = reduced_quadratic(&MgonalForm::new(7, vec![9, 1, 1, 6, 6])?)?;
    show("<9,1,1,6,6>_7", &q.gram, 3, 24)?;
    Ok(())
}
