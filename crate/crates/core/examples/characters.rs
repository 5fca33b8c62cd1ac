//! q-expansions: eta, theta functions and orbifold characters.

use mipf::characters::{eta, orbifold_characters, theta, twisted_roots};
use mipf::numerics::fmt_rational;
use mipf::spectra::{modular_data, TheoryId};

fn show(name: &str, s: &mipf::characters::QSeries) {
    let terms: Vec<String> = s.terms().take(8).map(|(e, c)| format!("{}q^{}", fmt_rational(&c), fmt_rational(&e))).collect();
    println!("{name:>12} = {} + ...", terms.join(" + "));
}

fn main() -> mipf::Result<()> {
    show("eta", &eta(10));
    for k in 2..=4 {
        show(&format!("theta{k}"), &theta(k, 10)?);
    }
    let [r2, r4, r3] = twisted_roots(10)?;
    show("sqrt(2η/θ2)", &r2);
    show("sqrt(η/θ4)", &r4);
    show("sqrt(η/θ3)", &r3);
    let md = modular_data(TheoryId::OrbifoldC1(2))?;
    for (l, ch) in md.labels.iter().zip(orbifold_characters(2, 8)?) {
        show(l, &ch);
    }
    Ok(())
}
