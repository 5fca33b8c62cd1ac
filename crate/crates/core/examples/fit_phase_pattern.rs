//! Refits the D-series phase table against the Weyl sum and writes it to
//! `data/d2_phase_pattern.json` (or the path given as the first argument).

use mipf::spectra::fit_phase_pattern;

fn main() -> mipf::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/d2_phase_pattern.json").into());
    let ranks: Vec<u32> = (2..=8).collect();
    let pattern = fit_phase_pattern(&ranks)?;
    std::fs::write(&out, pattern.to_json()? + "\n")?;
    println!("wrote {out}");
    Ok(())
}
