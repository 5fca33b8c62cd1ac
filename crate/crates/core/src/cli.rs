//! Command-line front end. Exit codes: 0 pass, 1 failed check, 2 bad input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_integer::Integer;
use serde::Serialize;

use crate::characters::{characters, geometric_circle_spectrum, geometric_orbifold_spectrum, z_from_mipf, ZSpectrum};
use crate::error::{Error, Result};
use crate::extension::{clone_check, extend, meromorphic_chain};
use crate::fusion::verlinde_with;
use crate::invariants::{
    automorphism_search, build_b_series, build_dinv, build_scinv, charge_conjugation, diagonal,
    simple_current_invariant, verify, Mipf,
};
use crate::io::{emit, modular_data_json, read_mipf, to_json, ModularDataFile};
use crate::numerics::{fmt_rational, Tolerance};
use crate::spectra::{modular_data_with, ModularData, TheoryId};

#[derive(Debug, Parser)]
#[command(name = "mipf", version, about = "Modular data and modular invariants for c=1 and SO(N)_2 theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primaries, weights and characters.
    Spectrum(Opts),
    /// Modular data as JSON.
    Smatrix(Opts),
    /// Verlinde fusion table as CSV.
    Fusion(Opts),
    /// Build an invariant and write it as JSON.
    Build(Opts),
    /// Check that an invariant commutes with S and T.
    Verify(Opts),
    /// All permutation invariants of a theory.
    Search(Opts),
    /// Modular data of the extension defined by an invariant.
    Extend(Opts),
    /// Compare the r̃M² extension with the r̃ theory.
    CloneCheck(Opts),
    /// Two-step extension of the B series down to one field.
    Meromorphic(Opts),
    /// Partition function of an invariant against its geometric counterpart.
    Zcompare(Opts),
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Theory as family:param, e.g. D2:9, B2:4, orb:6, u1:6.
    #[arg(long)]
    pub theory: Option<String>,
    /// dinv, scinv, bseries, sc, diag or conj.
    #[arg(long, visible_alias = "family")]
    pub builder: Option<String>,
    /// Invariant JSON to read instead of building one.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub rtilde: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub ltilde: Option<u32>,
    /// Simple current, by label or index.
    #[arg(long)]
    pub current: Option<String>,
    #[arg(long, env = "MIPF_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, env = "MIPF_QORDER", default_value_t = 12)]
    pub qorder: u32,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub literal_subscripts: bool,
}

/// Result of a subcommand that ran to completion.
enum Outcome {
    Pass,
    Fail(Vec<String>),
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant { .. }
        | Error::Solver(_)
        | Error::Dictionary { .. }
        | Error::FusionRounding { .. }
        | Error::NegativeFusion { .. }
        | Error::InconsistentBlockWeight { .. } => 1,
        _ => 2,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

impl Opts {
    fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::new(self.tol)
    }

    fn theory(&self) -> Result<TheoryId> {
        self.theory
            .as_deref()
            .ok_or_else(|| Error::BadParameters("--theory is required".into()))?
            .parse()
    }

    fn need(&self, v: Option<u32>, flag: &str) -> Result<u32> {
        v.ok_or_else(|| Error::BadParameters(format!("--{flag} is required")))
    }

    fn emit(&self, text: &str) -> Result<()> {
        emit(self.out.as_deref(), text)
    }

    /// Invariant from `--in`, or from `--builder` and its parameters.
    fn invariant(&self) -> Result<Mipf> {
        if let Some(path) = &self.input {
            let m = read_mipf(path)?;
            if m.theory.is_none() {
                return Err(Error::BadParameters(format!("{} has no theory", path.display())));
            }
            return Ok(m);
        }
        let builder = self
            .builder
            .as_deref()
            .ok_or_else(|| Error::BadParameters("--in or --builder is required".into()))?;
        match builder {
            "dinv" => {
                let rt = self.need(self.rtilde, "rtilde")?;
                let m = self.need(self.m, "m")?;
                let t = match &self.theory {
                    Some(_) => self.theory()?,
                    None => TheoryId::AffineD2(rt * m * m),
                };
                build_dinv(t, rt, m)
            }
            "scinv" => build_scinv(self.theory()?),
            "bseries" => build_b_series(self.need(self.ltilde, "ltilde")?, self.need(self.m, "m")?, self.literal_subscripts),
            "sc" => {
                let md = self.modular_data()?;
                let j = self.current_index(&md)?;
                simple_current_invariant(&md, j)
            }
            "diag" => Ok(diagonal(&self.modular_data()?)),
            "conj" => Ok(charge_conjugation(&self.modular_data()?)),
            other => Err(Error::BadParameters(format!("unknown builder {other:?}"))),
        }
    }

    fn modular_data(&self) -> Result<ModularData> {
        modular_data_with(self.theory()?, self.tolerance()?)
    }

    fn current_index(&self, md: &ModularData) -> Result<usize> {
        let c = self
            .current
            .as_deref()
            .ok_or_else(|| Error::BadParameters("--current is required".into()))?;
        md.index_of(c)
            .or_else(|| c.parse().ok().filter(|&i: &usize| i < md.len()))
            .ok_or_else(|| Error::BadParameters(format!("no primary {c:?} in {}", md.name)))
    }
}

#[derive(Serialize)]
struct CharacterOut {
    lead: String,
    den: u32,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct PrimaryOut {
    label: String,
    h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    character: Option<CharacterOut>,
}

#[derive(Serialize)]
struct SpectrumOut {
    theory: String,
    c: String,
    primaries: Vec<PrimaryOut>,
}

#[derive(Serialize)]
struct ExtendOut {
    parent: String,
    blocks: Vec<Vec<u32>>,
    multiplicities: Vec<u32>,
    s_residual: f64,
    extended: ModularDataFile,
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Spectrum(o) => {
            let md = o.modular_data()?;
            let t = o.theory()?;
            let chars = if t.has_characters() { Some(characters(t, o.qorder)?) } else { None };
            let primaries: Vec<PrimaryOut> = (0..md.len())
                .map(|i| PrimaryOut {
                    label: md.labels[i].clone(),
                    h: fmt_rational(&md.h[i]),
                    character: chars.as_ref().map(|cs| CharacterOut {
                        lead: fmt_rational(&cs[i].lead),
                        den: cs[i].den,
                        coeffs: cs[i].coeffs.iter().map(fmt_rational).collect(),
                    }),
                })
                .collect();
            o.emit(&to_json(&SpectrumOut {
                theory: t.to_string(),
                c: fmt_rational(&md.c),
                primaries,
            })?)?;
            Ok(Outcome::Pass)
        }
        Command::Smatrix(o) => {
            o.emit(&modular_data_json(&o.modular_data()?)?)?;
            Ok(Outcome::Pass)
        }
        Command::Fusion(o) => {
            let md = o.modular_data()?;
            let ring = verlinde_with(&md, o.tolerance()?)?;
            ring.check_axioms()?;
            o.emit(&ring.to_csv(&md.labels)?)?;
            Ok(Outcome::Pass)
        }
        Command::Build(o) => {
            o.emit(&to_json(&o.invariant()?)?)?;
            Ok(Outcome::Pass)
        }
        Command::Verify(o) => {
            let inv = o.invariant()?;
            let t = inv.theory.expect("invariant carries its theory");
            let md = modular_data_with(t, o.tolerance()?)?;
            let rep = verify(&md, &inv, o.tolerance()?)?;
            o.emit(&to_json(&rep)?)?;
            if rep.pass {
                return Ok(Outcome::Pass);
            }
            let mut lines = Vec::new();
            if !o.tolerance()?.accepts(rep.commutes_with_s) {
                lines.push(format!("violated: MS = SM, residual {:.3e} (tol {:.1e})", rep.commutes_with_s, o.tol));
            }
            if !o.tolerance()?.accepts(rep.commutes_with_t) {
                lines.push(format!("violated: MT = TM, residual {:.3e} (tol {:.1e})", rep.commutes_with_t, o.tol));
            }
            if !rep.vacuum_ok {
                lines.push(format!("violated: M_00 = 1, residual {}", (inv.m[0][0] as i64 - 1).abs()));
            }
            if !rep.nonneg_ok {
                lines.push("violated: M has non-negative integer entries".into());
            }
            Ok(Outcome::Fail(lines))
        }
        Command::Search(o) => {
            let md = o.modular_data()?;
            o.emit(&to_json(&automorphism_search(&md, o.tolerance()?)?)?)?;
            Ok(Outcome::Pass)
        }
        Command::Extend(o) => {
            let inv = o.invariant()?;
            let md = modular_data_with(inv.theory.expect("invariant carries its theory"), o.tolerance()?)?;
            let ext = extend(&md, &inv, o.tolerance()?)?;
            let mut file = ModularDataFile::from(&ext.md);
            file.theory = ext.md.name.clone();
            o.emit(&to_json(&ExtendOut {
                parent: ext.parent,
                blocks: ext.decomposition.blocks,
                multiplicities: ext.decomposition.multiplicities,
                s_residual: ext.s_residual,
                extended: file,
            })?)?;
            Ok(Outcome::Pass)
        }
        Command::CloneCheck(o) => {
            let rep = clone_check(o.need(o.rtilde, "rtilde")?, o.need(o.m, "m")?, o.tolerance()?)?;
            o.emit(&to_json(&rep)?)?;
            if rep.pass {
                return Ok(Outcome::Pass);
            }
            Ok(Outcome::Fail(vec![
                match rep.s_match_residual {
                    None => "violated: S-preserving fusion isomorphism exists, residual none found".into(),
                    Some(r) => format!("violated: S_ext = S_target under the isomorphism, residual {r:.3e}"),
                },
                format!(
                    "spinor weight shift {} (expected {})",
                    rep.spinor_weight_difference, rep.expected_spinor_difference
                ),
            ]))
        }
        Command::Meromorphic(o) => {
            let rep = meromorphic_chain(o.need(o.m, "m")?, o.tolerance()?)?;
            o.emit(&to_json(&rep)?)?;
            if rep.final_count == 1 && rep.all_simple_currents {
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail(vec![format!(
                    "violated: single-field endpoint, got {} fields",
                    rep.final_count
                )]))
            }
        }
        Command::Zcompare(o) => zcompare(&o),
    }
}

/// Reference spectrum an invariant should reproduce, when one is known.
fn reference(inv: &Mipf, cutoff: u32) -> Result<(String, ZSpectrum)> {
    let t = inv.theory.expect("invariant carries its theory");
    let param = |k: &str| inv.params.get(k).and_then(|v| v.as_u64()).map(|v| v as u32);
    match (t, inv.builder.as_str()) {
        (TheoryId::CircleU1(r), "diag" | "conj") => {
            Ok((format!("circle R^2=2*{r}"), geometric_circle_spectrum(r as i64, 1, cutoff)?))
        }
        (TheoryId::OrbifoldC1(r), "diag" | "conj") => {
            Ok((format!("orbifold R^2=2*{r}"), geometric_orbifold_spectrum(r as i64, 1, cutoff)?))
        }
        (TheoryId::CircleU1(r), "sc") => {
            let n = param("order").ok_or_else(|| Error::BadParameters("sc invariant without order".into()))? as i64;
            let g = (r as i64).gcd(&(n * n));
            let (p, q) = (r as i64 / g, n * n / g);
            Ok((format!("circle R^2=2*{p}/{q}"), geometric_circle_spectrum(p, q, cutoff)?))
        }
        (TheoryId::OrbifoldC1(_), "dinv") => {
            let rt = param("rtilde").ok_or_else(|| Error::BadParameters("dinv invariant without rtilde".into()))?;
            Ok((format!("orbifold R^2=2*{rt}"), geometric_orbifold_spectrum(rt as i64, 1, cutoff)?))
        }
        _ => Err(Error::BadParameters(format!(
            "no geometric reference for builder {:?} on {t}",
            inv.builder
        ))),
    }
}

fn zcompare(o: &Opts) -> Result<Outcome> {
    let inv = o.invariant()?;
    let t = inv.theory.expect("invariant carries its theory");
    let tol = o.tolerance()?;
    let md = modular_data_with(t, tol)?;
    let z = z_from_mipf(&md, &inv, o.qorder)?;
    o.emit(&z.to_csv()?)?;
    let (name, reference) = reference(&inv, o.qorder)?;
    if z == reference {
        return Ok(Outcome::Pass);
    }
    let first = z
        .entries
        .iter()
        .chain(reference.entries.iter())
        .map(|(k, _)| k)
        .find(|k| z.entries.get(k) != reference.entries.get(k))
        .expect("spectra differ somewhere");
    Ok(Outcome::Fail(vec![format!(
        "violated: Z = Z({name}) to h_L+h_R <= {}; at ({}, {}) multiplicity {} vs {}",
        o.qorder,
        fmt_rational(&first.0),
        fmt_rational(&first.1),
        z.entries.get(first).copied().unwrap_or(0),
        reference.entries.get(first).copied().unwrap_or(0),
    )]))
}
