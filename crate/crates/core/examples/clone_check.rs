//! Extended theory of the r̃M² invariant against the r̃ theory.

use mipf::extension::clone_check;
use mipf::numerics::Tolerance;

fn main() -> mipf::Result<()> {
    for (rt, m) in [(1, 3), (2, 3), (3, 3), (1, 5), (2, 5)] {
        let rep = clone_check(rt, m, Tolerance::default())?;
        println!(
            "{} -> {}: {} blocks, S match {:?}, spinor shift {} (expect {}), pass={}",
            rep.parent, rep.target, rep.block_count, rep.s_match_residual,
            rep.spinor_weight_difference, rep.expected_spinor_difference, rep.pass
        );
        for (label, h, ht) in &rep.differing_weights {
            println!("    {label}: h = {h} vs {ht}");
        }
    }
    Ok(())
}
