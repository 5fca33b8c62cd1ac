//! Level 2 S matrices from the Weyl-group sum, compared with the fast paths.

use mipf::lie_data::{kac_peterson_s, AlgebraId};
use mipf::numerics::max_abs_deviation;
use mipf::spectra::{b_series_s, d_series_pattern_s};

fn main() -> mipf::Result<()> {
    for r in 2..=7 {
        let kp = kac_peterson_s(AlgebraId::d(r)?)?;
        println!("D{r}: {} fields, |KP - pattern| = {:.1e}", kp.rows(), max_abs_deviation(&kp, &d_series_pattern_s(r)?)?);
    }
    for s in 1..=6 {
        let kp = kac_peterson_s(AlgebraId::b(s)?)?;
        println!("B{s}: {} fields, |KP - closed form| = {:.1e}", kp.rows(), max_abs_deviation(&kp, &b_series_s(s))?);
    }
    Ok(())
}
