//! Builds the r = r̃M² invariant, verifies it and lists its blocks.

use mipf::extension::block_decompose;
use mipf::invariants::{build_dinv, verify};
use mipf::numerics::Tolerance;
use mipf::spectra::{modular_data, TheoryId};

fn main() -> mipf::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (rt, m) = (args.first().copied().unwrap_or(1), args.get(1).copied().unwrap_or(3));
    for t in [TheoryId::AffineD2(rt * m * m), TheoryId::OrbifoldC1(rt * m * m)] {
        let md = modular_data(t)?;
        let inv = build_dinv(t, rt, m)?;
        let rep = verify(&md, &inv, Tolerance::default())?;
        println!("{t}: pass={} |[M,S]|={:.1e} |[M,T]|={:.1e}", rep.pass, rep.commutes_with_s, rep.commutes_with_t);
        let dec = block_decompose(&inv)?;
        for i in 0..dec.len() {
            let names: Vec<&str> = dec.members(i).iter().map(|&a| md.labels[a].as_str()).collect();
            println!("  |{}|^2", names.join(" + "));
        }
    }
    Ok(())
}
