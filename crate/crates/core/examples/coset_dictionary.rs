//! Coset fields and the orbifold primaries they realize.

use mipf::spectra::dictionary_weight_check;

fn main() -> mipf::Result<()> {
    let r: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let rep = dictionary_weight_check(r)?;
    println!("r={r}: {} realization(s)", rep.realizations);
    for (real, field, label, residue) in &rep.rows {
        println!("  {real:>3} {field:<16} -> {label:<10} residue {residue}");
    }
    Ok(())
}
