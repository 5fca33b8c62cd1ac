//! Invariants of circle and orbifold theories against momentum–winding
//! spectra at rational radius.

use mipf::characters::{geometric_circle_spectrum, geometric_orbifold_spectrum, z_from_mipf};
use mipf::invariants::{build_dinv, diagonal, simple_current_invariant};
use mipf::spectra::{modular_data, TheoryId};

const CUTOFF: u32 = 6;

fn main() -> mipf::Result<()> {
    let md = modular_data(TheoryId::CircleU1(6))?;
    for (j, p, q) in [(4, 2, 3), (6, 3, 2)] {
        let z = z_from_mipf(&md, &simple_current_invariant(&md, j)?, CUTOFF)?;
        let g = geometric_circle_spectrum(p, q, CUTOFF)?;
        println!("u1:6 current {j} vs R^2 = 2*{p}/{q}: equal={} ({} states)", z == g, z.total());
    }
    let orb = modular_data(TheoryId::OrbifoldC1(9))?;
    let z = z_from_mipf(&orb, &build_dinv(TheoryId::OrbifoldC1(9), 1, 3)?, CUTOFF)?;
    let small = modular_data(TheoryId::OrbifoldC1(1))?;
    let zd = z_from_mipf(&small, &diagonal(&small), CUTOFF)?;
    println!("orb:9 (1,3) vs orb:1 diagonal: equal={}", z == zd);
    println!("orb:1 diagonal vs geometric orbifold: equal={}", zd == geometric_orbifold_spectrum(1, 1, CUTOFF)?);
    print!("{}", zd.to_csv()?);
    Ok(())
}
