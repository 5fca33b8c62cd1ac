//! Modular invariant partition functions: builders, verification and
//! exhaustive automorphism search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{monodromy_charge, simple_current, verlinde_with};
use crate::numerics::{mat_mul, max_abs_deviation, rat, CMatrix, Rational, Tolerance};
use crate::spectra::{ModularData, TheoryId};

/// Non-negative integer matrix pairing left and right primaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mipf {
    #[serde(with = "theory_str")]
    pub theory: Option<TheoryId>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<u32>>,
    pub builder: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

mod theory_str {
    use super::TheoryId;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &Option<TheoryId>, s: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(t) => s.serialize_str(&t.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<TheoryId>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

impl Mipf {
    pub fn new(theory: Option<TheoryId>, m: Vec<Vec<u32>>, builder: &str) -> Self {
        Mipf {
            theory,
            m,
            builder: builder.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        let n = self.size();
        CMatrix::from_real(n, n, |i, j| self.m[i][j] as f64)
    }

    /// `Some(π)` if this is a permutation matrix with `M[a][π(a)] = 1`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        self.m
            .iter()
            .map(|row| {
                let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j] == 1).collect();
                (ones.len() == 1 && row.iter().sum::<u32>() == 1).then(|| ones[0])
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.m[i][j] == self.m[j][i]))
    }

    fn from_blocks(theory: Option<TheoryId>, n: usize, blocks: &[(u32, Vec<usize>)], builder: &str) -> Self {
        let mut m = vec![vec![0u32; n]; n];
        for (mult, members) in blocks {
            for &i in members {
                for &j in members {
                    m[i][j] += mult;
                }
            }
        }
        Mipf::new(theory, m, builder)
    }
}

pub fn diagonal(md: &ModularData) -> Mipf {
    let n = md.len();
    let m = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
    Mipf::new(md.theory, m, "diag")
}

pub fn charge_conjugation(md: &ModularData) -> Mipf {
    let c = md.conjugation();
    let n = md.len();
    let m = (0..n).map(|i| (0..n).map(|j| u32::from(c[i] == j)).collect()).collect();
    Mipf::new(md.theory, m, "conj")
}

/// Invariant generated by the simple current at index `j`.
///
/// With `N` the order of `J`, an even `t` with `t(N-1) ≡ 2N·h_J (mod 2N)`
/// fixes the spin offset, and `M_{a,b}` counts `n < N` with `b = Jⁿa` and
/// `Q_J(a) + n·t/2N ∈ ℤ`.
pub fn simple_current_invariant(md: &ModularData, j: usize) -> Result<Mipf> {
    let ring = verlinde_with(md, Tolerance::default())?;
    let cur = simple_current(&ring, j)?;
    let n = cur.order as i64;
    let two_n_h = md.h[j] * Rational::from_integer(2 * n);
    if !two_n_h.is_integer() {
        return Err(Error::CurrentObstructed {
            current: j,
            reason: format!("2N h_J = {two_n_h} is not an integer"),
        });
    }
    let target = two_n_h.to_integer().rem_euclid(2 * n);
    let t = (0..2 * n)
        .step_by(2)
        .find(|t| (t * (n - 1) - target).rem_euclid(2 * n) == 0)
        .ok_or_else(|| Error::CurrentObstructed {
            current: j,
            reason: format!("no even spin offset for order {n} and h_J = {}", md.h[j]),
        })?;
    let size = md.len();
    let mut m = vec![vec![0u32; size]; size];
    for (a, row) in m.iter_mut().enumerate() {
        let q = monodromy_charge(md, &cur, a);
        for k in 0..n {
            if (q + rat(k * t, 2 * n)).is_integer() {
                row[cur.power_on(k as usize, a)] += 1;
            }
        }
    }
    Ok(Mipf::new(md.theory, m, "sc")
        .with_param("current", md.labels[j].clone())
        .with_param("order", n)
        .with_param("spin_offset", t))
}

fn d_or_orb(t: TheoryId) -> Result<u32> {
    match t {
        TheoryId::AffineD2(r) | TheoryId::OrbifoldC1(r) => Ok(r),
        _ => Err(Error::BadParameters(format!("{t} is neither D2 nor orb"))),
    }
}

const ZERO: usize = 0;
const VV: usize = 1;
const SS: usize = 2;
const CC: usize = 3;
const S: usize = 4;
const C: usize = 5;
const VC: usize = 6;
const VS: usize = 7;

fn ladder(l: u32) -> usize {
    7 + l as usize
}

/// Simple-current invariant of the spinor current for `4 | r`, written out
/// block by block.
pub fn build_scinv(t: TheoryId) -> Result<Mipf> {
    let r = d_or_orb(t)?;
    if r % 4 != 0 {
        return Err(Error::BadParameters(format!("scinv needs 4 | r, got r = {r}")));
    }
    let mut blocks = vec![
        (1, vec![ZERO, SS]),
        (1, vec![VV, CC]),
        (2, vec![S]),
        (2, vec![VC]),
        (2, vec![ladder(r / 2)]),
    ];
    for l in (2..=r / 2 - 2).step_by(2) {
        blocks.push((1, vec![ladder(l), ladder(r - l)]));
    }
    Ok(Mipf::from_blocks(Some(t), t.primary_count(), &blocks, "scinv").with_param("r", r))
}

/// Extension invariant for `r = r̃M²`, `M` odd.
pub fn build_dinv(t: TheoryId, rtilde: u32, m: u32) -> Result<Mipf> {
    let blocks = dinv_blocks(rtilde, m)?;
    let r = rtilde * m * m;
    let expected = match t {
        TheoryId::AffineD2(_) => TheoryId::AffineD2(r),
        TheoryId::OrbifoldC1(_) => TheoryId::OrbifoldC1(r),
        _ => return Err(Error::BadParameters(format!("{t} is neither D2 nor orb"))),
    };
    if t != expected {
        return Err(Error::BadParameters(format!("r̃M² = {r} does not match {t}")));
    }
    Ok(Mipf::from_blocks(Some(t), t.primary_count(), &blocks, "dinv")
        .with_param("rtilde", rtilde)
        .with_param("m", m))
}

fn check_odd_m(m: u32) -> Result<()> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::BadParameters(format!(
            "M must be odd and at least 3, got {m}; even M is the scinv route"
        )));
    }
    Ok(())
}

fn dinv_blocks(rtilde: u32, m: u32) -> Result<Vec<(u32, Vec<usize>)>> {
    check_odd_m(m)?;
    if rtilde == 0 {
        return Err(Error::BadParameters("r̃ must be at least 1".into()));
    }
    let r = (rtilde * m * m) as i64;
    let rm = (rtilde * m) as i64;
    let half = (m as i64 - 1) / 2;
    let even: Vec<usize> = (1..=half).map(|k| ladder((2 * k * rm) as u32)).collect();
    let odd: Vec<usize> = (1..=half).map(|k| ladder(((2 * k - 1) * rm) as u32)).collect();
    let with = |head: usize, tail: &[usize]| {
        let mut v = vec![head];
        v.extend_from_slice(tail);
        (1, v)
    };
    let mut blocks = vec![
        with(ZERO, &even),
        with(VV, &even),
        with(SS, &odd),
        with(CC, &odd),
        (1, vec![S]),
        (1, vec![C]),
        (1, vec![VC]),
        (1, vec![VS]),
    ];
    for l in 1..rtilde as i64 {
        let members = (0..m as i64)
            .map(|k| ladder((r - (r - l * m as i64 - 2 * k * rm).abs()) as u32))
            .collect();
        blocks.push((1, members));
    }
    Ok(blocks)
}

/// B-series extension invariant for `L = L̃M²`. With `literal` the first
/// block uses the subscript `m·L·M` as printed, which always lands on a
/// multiple of `L` and is rejected.
pub fn build_b_series(ltilde: u32, m: u32, literal: bool) -> Result<Mipf> {
    check_odd_m(m)?;
    if ltilde % 2 == 0 {
        return Err(Error::BadParameters(format!("L̃ must be odd, got {ltilde}")));
    }
    let big_l = (ltilde * m * m) as i64;
    let s = ((big_l - 1) / 2) as u32;
    let t = TheoryId::AffineB2(s).validate()?;
    let lm = (ltilde * m) as i64;
    let idx = |x: i64| -> Result<usize> {
        let x = x.rem_euclid(big_l);
        if x == 0 {
            return Err(Error::BadParameters(format!(
                "tensor subscript is a multiple of L = {big_l}, outside 1..{s}"
            )));
        }
        Ok(3 + x.min(big_l - x) as usize)
    };
    let step = if literal { big_l * m as i64 } else { lm };
    let tail: Vec<usize> = (1..=(m as i64 - 1) / 2).map(|k| idx(k * step)).collect::<Result<_>>()?;
    let mut blocks = vec![
        (1, [vec![0], tail.clone()].concat()),
        (1, [vec![1], tail].concat()),
        (1, vec![2]),
        (1, vec![3]),
    ];
    for l in 1..=(ltilde as i64 - 1) / 2 {
        let members = (0..m as i64).map(|k| idx(l * m as i64 + k * lm)).collect::<Result<_>>()?;
        blocks.push((1, members));
    }
    Ok(Mipf::from_blocks(Some(t), t.primary_count(), &blocks, "bseries")
        .with_param("ltilde", ltilde)
        .with_param("m", m)
        .with_param("literal_subscripts", literal))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub commutes_with_s: f64,
    pub commutes_with_t: f64,
    pub vacuum_ok: bool,
    pub nonneg_ok: bool,
    pub pass: bool,
}

pub fn verify(md: &ModularData, m: &Mipf, tol: Tolerance) -> Result<InvarianceReport> {
    if m.size() != md.len() || m.m.iter().any(|row| row.len() != md.len()) {
        return Err(Error::Dimension(format!(
            "invariant of size {} for {} primaries",
            m.size(),
            md.len()
        )));
    }
    let mm = m.to_cmatrix();
    let sm = mat_mul(&md.s, &mm)?;
    let ms = mat_mul(&mm, &md.s)?;
    let t = md.t_matrix();
    let tm = mat_mul(&t, &mm)?;
    let mt = mat_mul(&mm, &t)?;
    let commutes_with_s = max_abs_deviation(&sm, &ms)?;
    let commutes_with_t = max_abs_deviation(&tm, &mt)?;
    let vacuum_ok = m.m[0][0] == 1;
    let nonneg_ok = true;
    let pass = tol.accepts(commutes_with_s) && tol.accepts(commutes_with_t) && vacuum_ok && nonneg_ok;
    Ok(InvarianceReport {
        commutes_with_s,
        commutes_with_t,
        vacuum_ok,
        nonneg_ok,
        pass,
    })
}

/// Largest theory [`automorphism_search`] accepts.
pub const SEARCH_CAP: usize = 40;

/// All permutations preserving `T` and `S`, sorted lexicographically.
pub fn automorphism_search(md: &ModularData, tol: Tolerance) -> Result<Vec<Mipf>> {
    let n = md.len();
    if n > SEARCH_CAP {
        return Err(Error::SearchTooLarge {
            size: n,
            cap: SEARCH_CAP,
        });
    }
    let eps = tol.eps().max(1e-9);
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            if a == 0 {
                return vec![0];
            }
            (1..n)
                .filter(|&b| {
                    (md.t[a] - md.t[b]).norm() <= eps && (md.s[(0, a)] - md.s[(0, b)]).norm() <= eps
                })
                .collect()
        })
        .collect();
    let first = (1..n).find(|&a| cands[a].len() > 1);
    let branches: Vec<Option<usize>> = match first {
        Some(a) => cands[a].iter().map(|&b| Some(b)).collect(),
        None => vec![None],
    };
    let mut found: Vec<Vec<usize>> = branches
        .into_par_iter()
        .flat_map_iter(|pick| {
            let mut map = vec![usize::MAX; n];
            let mut used = vec![false; n];
            map[0] = 0;
            used[0] = true;
            let mut out = Vec::new();
            if let (Some(a), Some(b)) = (first, pick) {
                map[a] = b;
                used[b] = true;
                if !s_consistent(md, &map, a, eps) {
                    return out.into_iter();
                }
            }
            extend(md, &cands, 1, &mut map, &mut used, eps, &mut out);
            out.into_iter()
        })
        .collect();
    found.sort();
    Ok(found
        .into_iter()
        .map(|p| {
            let m = (0..n).map(|i| (0..n).map(|j| u32::from(p[i] == j)).collect()).collect();
            Mipf::new(md.theory, m, "search")
        })
        .collect())
}

fn s_consistent(md: &ModularData, map: &[usize], a: usize, eps: f64) -> bool {
    let pa = map[a];
    map.iter()
        .enumerate()
        .filter(|(_, &x)| x != usize::MAX)
        .all(|(b, &pb)| (md.s[(pa, pb)] - md.s[(a, b)]).norm() <= eps)
}

fn extend(
    md: &ModularData,
    cands: &[Vec<usize>],
    a: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    eps: f64,
    out: &mut Vec<Vec<usize>>,
) {
    let n = map.len();
    if a == n {
        out.push(map.clone());
        return;
    }
    if map[a] != usize::MAX {
        extend(md, cands, a + 1, map, used, eps, out);
        return;
    }
    for &b in &cands[a] {
        if used[b] {
            continue;
        }
        map[a] = b;
        if s_consistent(md, map, a, eps) {
            used[b] = true;
            extend(md, cands, a + 1, map, used, eps, out);
            used[b] = false;
        }
        map[a] = usize::MAX;
    }
}
