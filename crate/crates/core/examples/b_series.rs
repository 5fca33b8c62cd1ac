//! B-series invariants and the two-step chain to a single field.

use mipf::extension::meromorphic_chain;
use mipf::invariants::{build_b_series, verify};
use mipf::numerics::Tolerance;
use mipf::spectra::modular_data;

fn main() -> mipf::Result<()> {
    for (lt, m) in [(1, 3), (1, 5), (3, 3)] {
        let inv = build_b_series(lt, m, false)?;
        let t = inv.theory.expect("builder sets the theory");
        let rep = verify(&modular_data(t)?, &inv, Tolerance::default())?;
        println!("L~={lt} M={m} on {t}: pass={}", rep.pass);
    }
    match build_b_series(1, 3, true) {
        Ok(_) => println!("literal subscripts accepted"),
        Err(e) => println!("literal subscripts: {e}"),
    }
    for m in [3, 5] {
        let rep = meromorphic_chain(m, Tolerance::default())?;
        println!("M={m}: {} -> {:?} (h {:?}) -> via {} -> {} field(s), c = {}",
            rep.parent, rep.intermediate_labels, rep.intermediate_weights, rep.current, rep.final_count, rep.c);
    }
    Ok(())
}
