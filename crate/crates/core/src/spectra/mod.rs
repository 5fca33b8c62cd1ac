//! Theory registry: primaries and validated modular data for the four
//! families, plus the coset dictionaries linking `D_{r,2}`/`B_{s,2}` to the
//! `c = 1` orbifolds.

mod dictionary;
mod orbifold;
mod pattern;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_data::{self, AlgebraId, Level2Rep};
use crate::numerics::{
    as_permutation, mat_mul, max_abs_deviation, phase, rat, unitary_symmetric_residuals, CMatrix,
    Rational, Tolerance,
};

pub use dictionary::{
    coset_dictionary, dictionary_weight_check, CosetField, DictionaryReport, DictionaryRow,
    Realization,
};
pub use orbifold::{orbifold_s, solve_orbifold_s, OrbifoldSolution};
pub use pattern::{d_series_pattern_s, fit_phase_pattern, PhasePattern};

/// One of the four families, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoryId {
    CircleU1(u32),
    OrbifoldC1(u32),
    AffineD2(u32),
    AffineB2(u32),
}

impl TheoryId {
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            TheoryId::CircleU1(r) | TheoryId::OrbifoldC1(r) => r >= 1,
            TheoryId::AffineD2(r) => r >= 2,
            TheoryId::AffineB2(s) => s >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidTheory(format!("{self}: parameter out of range")))
        }
    }

    pub fn algebra(self) -> Option<AlgebraId> {
        match self {
            TheoryId::AffineD2(r) => AlgebraId::d(r).ok(),
            TheoryId::AffineB2(s) => AlgebraId::b(s).ok(),
            _ => None,
        }
    }

    pub fn has_characters(self) -> bool {
        matches!(self, TheoryId::CircleU1(_) | TheoryId::OrbifoldC1(_))
    }

    pub fn primary_count(self) -> usize {
        match self {
            TheoryId::CircleU1(r) => 2 * r as usize,
            TheoryId::OrbifoldC1(r) | TheoryId::AffineD2(r) => r as usize + 7,
            TheoryId::AffineB2(s) => s as usize + 4,
        }
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryId::CircleU1(r) => write!(f, "u1:{r}"),
            TheoryId::OrbifoldC1(r) => write!(f, "orb:{r}"),
            TheoryId::AffineD2(r) => write!(f, "D2:{r}"),
            TheoryId::AffineB2(s) => write!(f, "B2:{s}"),
        }
    }
}

impl FromStr for TheoryId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (fam, p) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("theory string {s:?} is not family:param")))?;
        let p: u32 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter in theory string {s:?}")))?;
        let t = match fam.trim().to_ascii_lowercase().as_str() {
            "u1" | "circle" => TheoryId::CircleU1(p),
            "orb" | "orbifold" => TheoryId::OrbifoldC1(p),
            "d2" | "d" => TheoryId::AffineD2(p),
            "b2" | "b" => TheoryId::AffineB2(p),
            _ => return Err(Error::Parse(format!("unknown family in theory string {s:?}"))),
        };
        t.validate()
    }
}

/// Orbifold primary labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbLabel {
    Zero,
    V,
    S,
    C,
    Sigma,
    SigmaT,
    SigmaP,
    SigmaTP,
    L(u32),
}

impl fmt::Display for OrbLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbLabel::Zero => f.write_str("[0]"),
            OrbLabel::V => f.write_str("[V]"),
            OrbLabel::S => f.write_str("[S]"),
            OrbLabel::C => f.write_str("[C]"),
            OrbLabel::Sigma => f.write_str("[sigma]"),
            OrbLabel::SigmaT => f.write_str("[tsigma]"),
            OrbLabel::SigmaP => f.write_str("[sigma']"),
            OrbLabel::SigmaTP => f.write_str("[tsigma']"),
            OrbLabel::L(l) => write!(f, "[{l}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Circle(u32),
    Orb(OrbLabel),
    Affine(Level2Rep),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Circle(j) => write!(f, "{j}"),
            Label::Orb(o) => o.fmt(f),
            Label::Affine(a) => a.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Primary {
    pub theory: TheoryId,
    pub label: Label,
}

/// Primaries of `t` in canonical order.
///
/// Circle: `0..2r`. Orbifold: `[0] [V] [S] [C] [σ] [σ̃] [σ'] [σ̃'] [1]..[r-1]`.
/// `D_r`: `0 vv ss cc s c vc vs v A2..A(r-2) sc`, index-aligned with the
/// orbifold through the coset dictionary. `B_s`: `0 vv sp spv A1..As`.
pub fn enumerate_primaries(t: TheoryId) -> Result<Vec<Primary>> {
    let t = t.validate()?;
    let labels: Vec<Label> = match t {
        TheoryId::CircleU1(r) => (0..2 * r).map(Label::Circle).collect(),
        TheoryId::OrbifoldC1(r) => orbifold_labels(r).into_iter().map(Label::Orb).collect(),
        TheoryId::AffineD2(_) | TheoryId::AffineB2(_) => t
            .algebra()
            .expect("validated")
            .level2_reps()
            .into_iter()
            .map(Label::Affine)
            .collect(),
    };
    Ok(labels.into_iter().map(|label| Primary { theory: t, label }).collect())
}

pub(crate) fn orbifold_labels(r: u32) -> Vec<OrbLabel> {
    use OrbLabel::*;
    let mut v = vec![Zero, V, S, C, Sigma, SigmaT, SigmaP, SigmaTP];
    v.extend((1..r).map(L));
    v
}

/// Index of an orbifold label in canonical order.
pub fn orbifold_index(r: u32, label: OrbLabel) -> Result<usize> {
    match label {
        OrbLabel::L(l) if l == 0 || l >= r => Err(Error::InvalidRep {
            algebra: TheoryId::OrbifoldC1(r).to_string(),
            rep: label.to_string(),
        }),
        OrbLabel::L(l) => Ok(7 + l as usize),
        _ => Ok(orbifold_labels(r).iter().position(|x| *x == label).expect("listed")),
    }
}

/// Conformal weights in canonical order.
pub fn conformal_weights(t: TheoryId) -> Result<Vec<Rational>> {
    let t = t.validate()?;
    Ok(match t {
        TheoryId::CircleU1(r) => {
            let r = r as i64;
            (0..2 * r).map(|j| rat(j.min(2 * r - j).pow(2), 4 * r)).collect()
        }
        TheoryId::OrbifoldC1(r) => {
            let r = r as i64;
            orbifold_labels(r as u32)
                .into_iter()
                .map(|l| match l {
                    OrbLabel::Zero => rat(0, 1),
                    OrbLabel::V => rat(1, 1),
                    OrbLabel::S | OrbLabel::C => rat(r, 4),
                    OrbLabel::Sigma | OrbLabel::SigmaT => rat(1, 16),
                    OrbLabel::SigmaP | OrbLabel::SigmaTP => rat(9, 16),
                    OrbLabel::L(l) => rat((l as i64).pow(2), 4 * r),
                })
                .collect()
        }
        TheoryId::AffineD2(_) | TheoryId::AffineB2(_) => {
            let alg = t.algebra().expect("validated");
            alg.level2_reps()
                .into_iter()
                .map(|rep| lie_data::conformal_weight(alg, rep))
                .collect::<Result<_>>()?
        }
    })
}

pub fn central_charge(t: TheoryId) -> Result<Rational> {
    let t = t.validate()?;
    Ok(match t.algebra() {
        Some(alg) => lie_data::central_charge(alg),
        None => rat(1, 1),
    })
}

/// Residuals of every modular-data relation, each a max-abs-entry norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularResiduals {
    pub symmetry: f64,
    pub unitarity: f64,
    pub s_squared_permutation: f64,
    pub st_cubed: f64,
    pub vacuum_row_min: f64,
}

impl ModularResiduals {
    pub fn max(&self) -> f64 {
        self.symmetry
            .max(self.unitarity)
            .max(self.s_squared_permutation)
            .max(self.st_cubed)
    }
}

/// S, T, `c` and weights of a rational CFT, checked at construction.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub theory: Option<TheoryId>,
    pub name: String,
    pub labels: Vec<String>,
    pub s: CMatrix,
    pub t: Vec<Complex64>,
    pub c: Rational,
    pub h: Vec<Rational>,
    conjugation: Vec<usize>,
    residuals: ModularResiduals,
}

impl ModularData {
    /// Builds modular data and checks all relations at `tol`.
    pub fn new(
        theory: Option<TheoryId>,
        name: String,
        labels: Vec<String>,
        s: CMatrix,
        h: Vec<Rational>,
        c: Rational,
        tol: Tolerance,
    ) -> Result<Self> {
        let n = s.rows();
        if !s.is_square() || labels.len() != n || h.len() != n {
            return Err(Error::Dimension(format!(
                "S is {}x{}, {} labels, {} weights",
                s.rows(),
                s.cols(),
                labels.len(),
                h.len()
            )));
        }
        let t: Vec<Complex64> = h.iter().map(|hi| phase(*hi - c / 24)).collect();
        let (residuals, conjugation) = check_modular(&s, &t)?;
        let fail = |relation: &str, residual: f64| Error::Invariant {
            relation: format!("{relation} for {name}"),
            residual,
            eps: tol.eps(),
        };
        if !tol.accepts(residuals.symmetry) {
            return Err(fail("S = S^T", residuals.symmetry));
        }
        if !tol.accepts(residuals.unitarity) {
            return Err(fail("S S^dagger = 1", residuals.unitarity));
        }
        if !tol.accepts(residuals.s_squared_permutation) {
            return Err(fail("S^2 = C", residuals.s_squared_permutation));
        }
        if !tol.accepts(residuals.st_cubed) {
            return Err(fail("(ST)^3 = S^2", residuals.st_cubed));
        }
        if residuals.vacuum_row_min <= tol.eps() {
            return Err(fail("positive vacuum row", residuals.vacuum_row_min));
        }
        Ok(ModularData {
            theory,
            name,
            labels,
            s,
            t,
            c,
            h,
            conjugation: conjugation.expect("accepted S^2 is a permutation"),
            residuals,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Charge conjugation read off from `S²`.
    pub fn conjugation(&self) -> &[usize] {
        &self.conjugation
    }

    pub fn residuals(&self) -> ModularResiduals {
        self.residuals
    }

    pub fn t_matrix(&self) -> CMatrix {
        CMatrix::diagonal(&self.t)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn primaries(&self) -> Option<Vec<Primary>> {
        self.theory.and_then(|t| enumerate_primaries(t).ok())
    }

    pub fn is_real(&self, eps: f64) -> bool {
        self.s.max_abs_imag() <= eps
    }
}

fn check_modular(s: &CMatrix, t: &[Complex64]) -> Result<(ModularResiduals, Option<Vec<usize>>)> {
    let n = s.rows();
    let (unitarity, symmetry) = unitary_symmetric_residuals(s)?;
    let s2 = mat_mul(s, s)?;
    let loose = Tolerance::new(1e-4).expect("valid");
    let (perm, s2_res) = match as_permutation(&s2, loose) {
        Some((p, res)) => {
            let involution = (0..n).all(|i| p[p[i]] == i) && p[0] == 0;
            (Some(p), if involution { res } else { f64::INFINITY })
        }
        None => (None, f64::INFINITY),
    };
    let tm = CMatrix::diagonal(t);
    let st = mat_mul(s, &tm)?;
    let st3 = mat_mul(&mat_mul(&st, &st)?, &st)?;
    let st_cubed = max_abs_deviation(&st3, &s2)?;
    let vacuum_row_min = (0..n)
        .map(|j| {
            let z = s[(0, j)];
            if z.im.abs() > 1e-9 {
                -1.0
            } else {
                z.re
            }
        })
        .fold(f64::INFINITY, f64::min);
    Ok((
        ModularResiduals {
            symmetry,
            unitarity,
            s_squared_permutation: s2_res,
            st_cubed,
            vacuum_row_min,
        },
        perm,
    ))
}

/// Circle S matrix `(2r)^{-1/2} e^{-iπjj'/r}`.
pub fn circle_s(r: u32) -> CMatrix {
    let n = 2 * r as usize;
    let norm = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        let x = ((j * k) % n) as f64;
        Complex64::from_polar(norm, -PI * x / r as f64)
    })
}

/// `B_{s,2}` S matrix in the closed form with `a = 1/(2√L)`, reordered to
/// canonical `0 vv sp spv A1..As`.
pub fn b_series_s(s: u32) -> CMatrix {
    let big_l = 2 * s + 1;
    let a = 0.5 / (big_l as f64).sqrt();
    let n = s as usize + 4;
    // canonical index -> (kind, l)
    #[derive(Clone, Copy, PartialEq)]
    enum K {
        Zero,
        VV,
        Sp,
        SpV,
        L(u32),
    }
    let kind = |i: usize| match i {
        0 => K::Zero,
        1 => K::VV,
        2 => K::Sp,
        3 => K::SpV,
        _ => K::L(i as u32 - 3),
    };
    CMatrix::from_real(n, n, |i, j| match (kind(i), kind(j)) {
        (K::Zero | K::VV, K::Zero | K::VV) => a,
        (K::Zero | K::VV, K::L(_)) | (K::L(_), K::Zero | K::VV) => 2.0 * a,
        (K::L(l), K::L(m)) => 4.0 * a * (2.0 * PI * (l * m) as f64 / big_l as f64).cos(),
        (K::L(_), _) | (_, K::L(_)) => 0.0,
        (K::Zero, _) | (_, K::Zero) => 0.5,
        (K::VV, _) | (_, K::VV) => -0.5,
        (x, y) if x == y => 0.5,
        _ => -0.5,
    })
}

/// S matrix of a theory in canonical order.
pub fn s_matrix(t: TheoryId) -> Result<CMatrix> {
    let t = t.validate()?;
    match t {
        TheoryId::CircleU1(r) => Ok(circle_s(r)),
        TheoryId::OrbifoldC1(r) => orbifold_s(r),
        TheoryId::AffineB2(s) => Ok(b_series_s(s)),
        TheoryId::AffineD2(r) if r <= lie_data::MAX_WEYL_RANK => {
            lie_data::kac_peterson_s(AlgebraId::d(r)?)
        }
        TheoryId::AffineD2(r) => d_series_pattern_s(r),
    }
}

/// Validated modular data of a theory at the default tolerance.
pub fn modular_data(t: TheoryId) -> Result<ModularData> {
    modular_data_with(t, Tolerance::default())
}

pub fn modular_data_with(t: TheoryId, tol: Tolerance) -> Result<ModularData> {
    let t = t.validate()?;
    let labels = enumerate_primaries(t)?
        .into_iter()
        .map(|p| p.label.to_string())
        .collect();
    ModularData::new(
        Some(t),
        t.to_string(),
        labels,
        s_matrix(t)?,
        conformal_weights(t)?,
        central_charge(t)?,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_primaries(TheoryId::AffineD2(4)).unwrap().len(), 11);
        assert_eq!(enumerate_primaries(TheoryId::OrbifoldC1(2)).unwrap().len(), 9);
        let b = enumerate_primaries(TheoryId::AffineB2(2)).unwrap();
        let labels: Vec<String> = b.iter().map(|p| p.label.to_string()).collect();
        assert_eq!(labels, ["0", "vv", "sp", "spv", "A1", "A2"]);
        for r in 1..10 {
            for t in [TheoryId::CircleU1(r), TheoryId::OrbifoldC1(r)] {
                assert_eq!(enumerate_primaries(t).unwrap().len(), t.primary_count());
            }
        }
    }

    #[test]
    fn theory_specs() {
        assert_eq!("D2:9".parse::<TheoryId>().unwrap(), TheoryId::AffineD2(9));
        assert_eq!("B2:4".parse::<TheoryId>().unwrap(), TheoryId::AffineB2(4));
        assert_eq!("orb:6".parse::<TheoryId>().unwrap(), TheoryId::OrbifoldC1(6));
        assert_eq!("u1:6".parse::<TheoryId>().unwrap(), TheoryId::CircleU1(6));
        assert!("D2:1".parse::<TheoryId>().is_err());
        assert!("x:3".parse::<TheoryId>().is_err());
        assert!("D2".parse::<TheoryId>().is_err());
        for t in [TheoryId::AffineD2(3), TheoryId::CircleU1(1)] {
            assert_eq!(t.to_string().parse::<TheoryId>().unwrap(), t);
        }
    }

    #[test]
    fn b_vacuum_row() {
        let s = b_series_s(2);
        let a = 1.0 / (2.0 * 5f64.sqrt());
        // canonical order 0 vv sp spv A1 A2
        let expect = [a, a, 0.5, 0.5, 2.0 * a, 2.0 * a];
        for (j, e) in expect.iter().enumerate() {
            assert!((s[(0, j)].re - e).abs() < 1e-15);
        }
        assert!(crate::numerics::is_unitary_symmetric(&s, Tolerance::default()).unwrap());
    }

    #[test]
    fn b_matches_kac_peterson() {
        for s in 1..=6 {
            let kp = lie_data::kac_peterson_s(AlgebraId::b(s).unwrap()).unwrap();
            let dev = max_abs_deviation(&kp, &b_series_s(s)).unwrap();
            assert!(dev < 1e-12, "B{s}: {dev}");
        }
    }

    #[test]
    fn families_validate() {
        for t in [
            TheoryId::CircleU1(1),
            TheoryId::CircleU1(6),
            TheoryId::OrbifoldC1(1),
            TheoryId::OrbifoldC1(5),
            TheoryId::AffineD2(3),
            TheoryId::AffineB2(3),
        ] {
            let md = modular_data(t).unwrap();
            assert!(md.residuals().max() < 1e-10, "{t}");
        }
    }

    #[test]
    fn circle_conjugation() {
        let md = modular_data(TheoryId::CircleU1(5)).unwrap();
        let c = md.conjugation();
        for j in 0..10 {
            assert_eq!(c[j], (10 - j) % 10);
        }
    }

    #[test]
    fn broken_s_is_rejected() {
        let t = TheoryId::CircleU1(2);
        let mut s = circle_s(2);
        s[(1, 2)] += Complex64::new(1e-6, 0.0);
        let err = ModularData::new(
            Some(t),
            "bad".into(),
            (0..4).map(|j| j.to_string()).collect(),
            s,
            conformal_weights(t).unwrap(),
            rat(1, 1),
            Tolerance::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invariant { .. }));
    }
}
