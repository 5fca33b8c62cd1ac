//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::time::Instant;

use mipf::characters::{
    characters, eta, geometric_circle_spectrum, theta, z_from_mipf,
};
use mipf::extension::{block_decompose, clone_check, extended_modular_data, meromorphic_chain};
use mipf::invariants::{
    automorphism_search, build_b_series, build_dinv, build_scinv, diagonal,
    simple_current_invariant, verify,
};
use mipf::lie_data::{kac_peterson_s, AlgebraId};
use mipf::numerics::{max_abs_deviation, rat, Tolerance};
use mipf::spectra::{
    b_series_s, d_series_pattern_s, dictionary_weight_check, modular_data, modular_data_with,
    TheoryId,
};
use mipf::Error;

type Outcome = Result<String, String>;

fn tol8() -> Tolerance {
    Tolerance::new(1e-8).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn modular_validity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let theories = (1..=24)
        .map(TheoryId::CircleU1)
        .chain((1..=24).map(TheoryId::OrbifoldC1))
        .chain((2..=32).map(TheoryId::AffineD2))
        .chain((1..=16).map(TheoryId::AffineB2));
    for t in theories {
        let md = modular_data_with(t, tol8()).map_err(|x| format!("{t}: {x}"))?;
        worst = worst.max(md.residuals().max());
        count += 1;
    }
    ensure(worst <= 1e-8, || format!("max residual {worst:.2e}"))?;
    Ok(format!("{count} theories, max residual {worst:.2e}"))
}

fn oracle_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in 2..=8 {
        let kp = kac_peterson_s(AlgebraId::d(r).map_err(e)?).map_err(e)?;
        let dev = max_abs_deviation(&kp, &d_series_pattern_s(r).map_err(e)?).map_err(e)?;
        ensure(dev <= 1e-8, || format!("D{r}: {dev:.2e}"))?;
        worst = worst.max(dev);
    }
    for s in 1..=8 {
        let kp = kac_peterson_s(AlgebraId::b(s).map_err(e)?).map_err(e)?;
        let dev = max_abs_deviation(&kp, &b_series_s(s)).map_err(e)?;
        ensure(dev <= 1e-8, || format!("B{s}: {dev:.2e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("D2..D8 and B1..B8, max deviation {worst:.2e}"))
}

fn reality() -> Outcome {
    let mut even_max: f64 = 0.0;
    let mut odd_min = f64::INFINITY;
    for r in 1..=24 {
        let im = modular_data(TheoryId::OrbifoldC1(r)).map_err(e)?.s.max_abs_imag();
        if r % 2 == 0 {
            even_max = even_max.max(im);
        } else {
            odd_min = odd_min.min(im);
        }
    }
    ensure(even_max <= 1e-12 && odd_min >= 0.05, || {
        format!("even max |Im| {even_max:.2e}, odd min |Im| {odd_min:.3}")
    })?;
    Ok(format!("even r max |Im S| = {even_max:.1e}, odd r min |Im S| = {odd_min:.3}"))
}

const GRID: [(u32, u32); 5] = [(1, 3), (2, 3), (3, 3), (1, 5), (2, 5)];

fn dinv_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    for (rt, m) in GRID {
        let t = TheoryId::AffineD2(rt * m * m);
        let md = modular_data(t).map_err(e)?;
        let inv = build_dinv(t, rt, m).map_err(e)?;
        let rep = verify(&md, &inv, tol8()).map_err(e)?;
        ensure(rep.pass, || format!("({rt},{m}) residuals {:.2e} {:.2e}", rep.commutes_with_s, rep.commutes_with_t))?;
        let blocks = block_decompose(&inv).map_err(e)?.len();
        ensure(blocks == rt as usize + 7, || format!("({rt},{m}) has {blocks} blocks"))?;
        worst = worst.max(rep.commutes_with_s).max(rep.commutes_with_t);
    }
    Ok(format!("5 grid points, block count r~+7, max residual {worst:.2e}"))
}

fn clone_claim() -> Outcome {
    let mut worst: f64 = 0.0;
    for (rt, m) in GRID {
        let rep = clone_check(rt, m, Tolerance::default()).map_err(e)?;
        let res = rep.s_match_residual.ok_or_else(|| format!("({rt},{m}): no S-preserving fusion isomorphism"))?;
        ensure(res <= 1e-8, || format!("({rt},{m}): S mismatch {res:.2e}"))?;
        ensure(rep.spinor_weight_difference == rep.expected_spinor_difference, || {
            format!(
                "({rt},{m}): spinor difference {} vs {}",
                rep.spinor_weight_difference, rep.expected_spinor_difference
            )
        })?;
        worst = worst.max(res);
    }
    Ok(format!("5 grid points isomorphic, S match {worst:.2e}, spinor shifts r~(M^2-1)/8"))
}

fn scinv() -> Outcome {
    for r in [4, 8, 12, 16] {
        let t = TheoryId::AffineD2(r);
        let md = modular_data(t).map_err(e)?;
        let inv = build_scinv(t).map_err(e)?;
        let rep = verify(&md, &inv, tol8()).map_err(e)?;
        ensure(rep.pass, || format!("r={r}: residual {:.2e}", rep.commutes_with_s))?;
        let dec = block_decompose(&inv).map_err(e)?;
        let fields = dec.split_field_count();
        ensure(fields == r / 4 + 7, || format!("r={r}: {fields} fields"))?;
        match extended_modular_data(&md, &dec, Tolerance::default()) {
            Err(Error::FixedPointResolution { .. }) => {}
            other => return Err(format!("r={r}: extension gave {other:?}")),
        }
        let sc = simple_current_invariant(&md, 2).map_err(e)?;
        ensure(sc.m == inv.m, || format!("r={r}: [ss] current invariant differs from the block form"))?;
    }
    Ok("r=4,8,12,16 invariant, r/4+7 fields, extension refused".into())
}

fn b_series() -> Outcome {
    for (lt, m) in [(1, 3), (1, 5), (3, 3)] {
        let inv = build_b_series(lt, m, false).map_err(e)?;
        let md = modular_data(inv.theory.unwrap()).map_err(e)?;
        let rep = verify(&md, &inv, tol8()).map_err(e)?;
        ensure(rep.pass, || format!("({lt},{m}): residual {:.2e}", rep.commutes_with_s))?;
    }
    let mut out = Vec::new();
    for (m, c) in [(3, "8"), (5, "24")] {
        let rep = meromorphic_chain(m, Tolerance::default()).map_err(e)?;
        ensure(rep.final_count == 1 && rep.c == c && rep.all_simple_currents, || {
            format!("M={m}: {} fields, c={}", rep.final_count, rep.c)
        })?;
        out.push(format!("M={m}: 1 field, c={c}"));
    }
    Ok(format!("three invariants verified; {}", out.join("; ")))
}

fn radius() -> Outcome {
    let md = modular_data(TheoryId::CircleU1(6)).map_err(e)?;
    for (j, p, q) in [(4, 2, 3), (6, 3, 2)] {
        let inv = simple_current_invariant(&md, j).map_err(e)?;
        let z = z_from_mipf(&md, &inv, 6).map_err(e)?;
        let g = geometric_circle_spectrum(p, q, 6).map_err(e)?;
        ensure(z == g, || format!("J={j} differs from R^2=2*{p}/{q}"))?;
    }
    let orb = modular_data(TheoryId::OrbifoldC1(9)).map_err(e)?;
    let inv = build_dinv(TheoryId::OrbifoldC1(9), 1, 3).map_err(e)?;
    let z = z_from_mipf(&orb, &inv, 6).map_err(e)?;
    let small = modular_data(TheoryId::OrbifoldC1(1)).map_err(e)?;
    let zd = z_from_mipf(&small, &diagonal(&small), 6).map_err(e)?;
    ensure(z == zd, || "orbifold r=9 dinv differs from r=1 diagonal".into())?;
    Ok(format!("J=4, J=6 and orbifold (1,3) spectra equal to cutoff 6 ({} states)", z.total()))
}

fn automorphisms() -> Outcome {
    let mut out = Vec::new();
    for r in [15u32, 6] {
        let md = modular_data(TheoryId::AffineD2(r)).map_err(e)?;
        let found = automorphism_search(&md, Tolerance::default()).map_err(e)?;
        let n = md.len();
        let perms: Vec<Vec<usize>> = found.iter().map(|m| m.as_permutation().unwrap()).collect();
        let mut worst: f64 = 0.0;
        for m in &found {
            let rep = verify(&md, m, Tolerance::default()).map_err(e)?;
            worst = worst.max(rep.commutes_with_s).max(rep.commutes_with_t);
        }
        ensure(worst <= 1e-12, || format!("D{r}: commutation residual {worst:.2e}"))?;
        let identity: Vec<usize> = (0..n).collect();
        let mut spinor = identity.clone();
        spinor.swap(2, 3);
        spinor.swap(4, 5);
        spinor.swap(6, 7);
        ensure(perms.contains(&identity), || format!("D{r}: identity missing"))?;
        ensure(perms.contains(&spinor), || format!("D{r}: spinor conjugation missing"))?;
        let mut ladder_actions: Vec<Vec<usize>> = perms.iter().map(|p| p[8..].to_vec()).collect();
        ladder_actions.sort();
        ladder_actions.dedup();
        let k = distinct_primes(r);
        ensure(ladder_actions.len() >= 1 << (k - 1) && ladder_actions.len() > 1, || {
            format!("D{r}: {} ladder actions", ladder_actions.len())
        })?;
        out.push(format!("D{r}: {} automorphisms, {} ladder actions", perms.len(), ladder_actions.len()));
    }
    Ok(out.join("; "))
}

fn distinct_primes(mut n: u32) -> u32 {
    let mut k = 0;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            k += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    k
}

fn dictionary() -> Outcome {
    let mut rows = 0;
    for r in 2..=32 {
        rows += dictionary_weight_check(r).map_err(e)?.rows.len();
    }
    for l in (3..=33).step_by(2) {
        let rep = dictionary_weight_check(2 * l).map_err(e)?;
        ensure(rep.realizations == 2, || format!("L={l}: B table missing"))?;
        rows += rep.rows.len();
    }
    Ok(format!("{rows} rows congruent mod 1"))
}

fn characters_self_test() -> Outcome {
    let lhs = theta(2, 12)
        .and_then(|a| a.mul(&theta(3, 12)?))
        .and_then(|a| a.mul(&theta(4, 12)?))
        .map_err(e)?;
    let et = eta(12);
    let rhs = et.mul(&et).and_then(|x| x.mul(&et)).map_err(e)?.scale(rat(2, 1));
    let diff = lhs.sub(&rhs).map_err(e)?;
    ensure(diff.coeffs.iter().all(|c| *c == rat(0, 1)) && diff.end() >= rat(12, 1), || {
        "theta2 theta3 theta4 != 2 eta^3".into()
    })?;
    let mut checked = 0;
    for r in 1..=12 {
        for t in [TheoryId::CircleU1(r), TheoryId::OrbifoldC1(r)] {
            let md = modular_data(t).map_err(e)?;
            for (i, ch) in characters(t, 12).map_err(e)?.iter().enumerate() {
                ensure(ch.is_nonnegative_integral(), || format!("{t} {}: coefficients", md.labels[i]))?;
                ensure(ch.lead == md.h[i] - rat(1, 24), || format!("{t} {}: leading exponent", md.labels[i]))?;
                checked += 1;
            }
        }
    }
    Ok(format!("triple product to order 12; {checked} characters integral with exponent h-1/24"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("modular data validity", modular_validity),
        ("Weyl-sum oracle agreement", oracle_agreement),
        ("orbifold reality by parity", reality),
        ("D-series extension invariant", dinv_invariance),
        ("clone theories", clone_claim),
        ("spinor simple-current invariant", scinv),
        ("B series and meromorphic endpoints", b_series),
        ("rational radius spectra", radius),
        ("automorphism search", automorphisms),
        ("coset dictionary weights", dictionary),
        ("character self-tests", characters_self_test),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
