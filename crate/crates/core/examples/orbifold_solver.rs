//! Solves for the orbifold S matrix and shows the twist-field ambiguity.

use mipf::spectra::solve_orbifold_s;

fn main() -> mipf::Result<()> {
    for r in 1..=8 {
        let sol = solve_orbifold_s(r)?;
        let swaps: Vec<String> = sol
            .relabelings
            .iter()
            .map(|&(a, b)| format!("{}{}", if a { "σ↔σ̃ " } else { "" }, if b { "σ'↔σ̃'" } else { "" }))
            .map(|s| if s.is_empty() { "id".into() } else { s.trim().to_string() })
            .collect();
        println!("r={r}: {} solutions, related by [{}], |Im S| = {:.3}", sol.solutions.len(), swaps.join(", "), sol.s().max_abs_imag());
    }
    Ok(())
}
