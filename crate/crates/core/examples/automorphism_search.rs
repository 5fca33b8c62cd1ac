//! All permutation invariants of a D-series theory.

use mipf::invariants::automorphism_search;
use mipf::numerics::Tolerance;
use mipf::spectra::{modular_data, TheoryId};

fn main() -> mipf::Result<()> {
    let t: TheoryId = std::env::args().nth(1).as_deref().unwrap_or("D2:15").parse()?;
    let md = modular_data(t)?;
    for inv in automorphism_search(&md, Tolerance::default())? {
        let perm = inv.as_permutation().expect("search returns permutations");
        let moved: Vec<String> = perm
            .iter()
            .enumerate()
            .filter(|(a, b)| a != *b)
            .map(|(a, &b)| format!("{}→{}", md.labels[a], md.labels[b]))
            .collect();
        println!("{}", if moved.is_empty() { "identity".into() } else { moved.join(" ") });
    }
    Ok(())
}
