//! The spinor simple-current invariant at r = 0 mod 4 and why it is not
//! extended here.

use mipf::extension::{block_decompose, extended_modular_data};
use mipf::invariants::{build_scinv, verify};
use mipf::numerics::Tolerance;
use mipf::spectra::{modular_data, TheoryId};

fn main() -> mipf::Result<()> {
    for r in [4, 8, 12, 16] {
        let t = TheoryId::AffineD2(r);
        let md = modular_data(t)?;
        let inv = build_scinv(t)?;
        let rep = verify(&md, &inv, Tolerance::default())?;
        let dec = block_decompose(&inv)?;
        print!("r={r}: invariant={} fields={} ", rep.pass, dec.split_field_count());
        match extended_modular_data(&md, &dec, Tolerance::default()) {
            Ok(_) => println!("extended"),
            Err(e) => println!("({e})"),
        }
    }
    Ok(())
}
