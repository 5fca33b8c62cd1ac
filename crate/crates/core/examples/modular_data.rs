//! Primaries, weights and the S matrix of a theory given as `family:param`.
//!
//!     cargo run --example modular_data -- orb:3

use mipf::numerics::fmt_rational;
use mipf::spectra::{modular_data, TheoryId};

fn main() -> mipf::Result<()> {
    let t: TheoryId = std::env::args().nth(1).as_deref().unwrap_or("D2:5").parse()?;
    let md = modular_data(t)?;
    println!("{t}: c = {}, {} primaries", fmt_rational(&md.c), md.len());
    for (i, label) in md.labels.iter().enumerate() {
        println!("  {label:>10}  h = {}", fmt_rational(&md.h[i]));
    }
    let res = md.residuals();
    println!("residuals: symmetry {:.1e}, unitarity {:.1e}, S^2 {:.1e}, (ST)^3 {:.1e}",
        res.symmetry, res.unitarity, res.s_squared_permutation, res.st_cubed);
    println!("S is {}", if md.is_real(1e-12) { "real" } else { "complex" });
    Ok(())
}
