//! Verlinde fusion, quantum dimensions and simple currents.

use mipf::fusion::{monodromy_charge, quantum_dimensions, simple_currents, verlinde};
use mipf::numerics::fmt_rational;
use mipf::spectra::{modular_data, TheoryId};

fn main() -> mipf::Result<()> {
    let t: TheoryId = std::env::args().nth(1).as_deref().unwrap_or("D2:6").parse()?;
    let md = modular_data(t)?;
    let ring = verlinde(&md)?;
    ring.check_axioms()?;
    let d = quantum_dimensions(&md);
    for (i, l) in md.labels.iter().enumerate() {
        println!("{l:>8}  d = {:.4}", d[i]);
    }
    for j in simple_currents(&ring) {
        let charges: Vec<String> = (0..md.len()).map(|a| fmt_rational(&monodromy_charge(&md, &j, a))).collect();
        println!("current {} (order {}): Q = [{}]", md.labels[j.index], j.order, charges.join(" "));
    }
    print!("{}", ring.to_csv(&md.labels)?);
    Ok(())
}
