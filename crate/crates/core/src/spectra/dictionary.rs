//! Coset ↔ orbifold dictionaries for `(D_{r,1} × D_{r,1})/D_{r,2}` and
//! `(B_{s,1} × B_{s,1})/B_{s,2}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{conformal_weights, orbifold_index, OrbLabel, TheoryId};
use crate::error::{Error, Result};
use crate::lie_data::{conformal_weight, level1_weight, AlgebraId, Level1Rep, Level2Rep};
use crate::numerics::{fmt_rational, frac, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realization {
    /// `D_r` cosets, orbifold radius `r`.
    D { rank: u32 },
    /// `B_s` cosets, orbifold radius `2L`, `L = 2s+1`.
    B { rank: u32 },
}

impl Realization {
    pub fn algebra(self) -> AlgebraId {
        match self {
            Realization::D { rank } => AlgebraId::d(rank).expect("rank checked"),
            Realization::B { rank } => AlgebraId::b(rank).expect("rank checked"),
        }
    }
}

/// `(left1, left2; bottom)`, with `copy` distinguishing the two resolved
/// fixed-point fields `(s,s;ℓ)_1` and `(s,s;ℓ)_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetField {
    pub left1: Level1Rep,
    pub left2: Level1Rep,
    pub bottom: Level2Rep,
    pub copy: Option<u8>,
}

impl fmt::Display for CosetField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.left1, self.left2, self.bottom)?;
        if let Some(c) = self.copy {
            write!(f, "_{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryRow {
    pub realization: Realization,
    pub field: CosetField,
    pub primary: OrbLabel,
}

fn field(left1: Level1Rep, left2: Level1Rep, bottom: Level2Rep) -> CosetField {
    CosetField {
        left1,
        left2,
        bottom,
        copy: None,
    }
}

fn d_rows(r: u32) -> Vec<DictionaryRow> {
    use Level1Rep as L1;
    use Level2Rep as L2;
    let odd = r % 2 == 1;
    let (ss_left, sig, sig_t) = if odd {
        (L1::V, L1::C, L1::S)
    } else {
        (L1::O, L1::S, L1::C)
    };
    let mut rows = vec![
        (field(L1::O, L1::O, L2::O), OrbLabel::Zero),
        (field(L1::O, L1::O, L2::VV), OrbLabel::V),
        (field(L1::O, ss_left, L2::SS), OrbLabel::S),
        (field(L1::O, ss_left, L2::CC), OrbLabel::C),
        (field(L1::O, sig, L2::S), OrbLabel::Sigma),
        (field(L1::O, sig_t, L2::C), OrbLabel::SigmaT),
        (field(L1::O, sig, L2::VC), OrbLabel::SigmaP),
        (field(L1::O, sig_t, L2::VS), OrbLabel::SigmaTP),
    ];
    let alg = AlgebraId::d(r).expect("r >= 2");
    for l in 1..r {
        let left2 = if l % 2 == 0 { L1::O } else { L1::V };
        let bottom = alg.normalize(L2::A(l)).expect("ladder range");
        rows.push((field(L1::O, left2, bottom), OrbLabel::L(l)));
    }
    rows.into_iter()
        .map(|(field, primary)| DictionaryRow {
            realization: Realization::D { rank: r },
            field,
            primary,
        })
        .collect()
}

fn b_rows(s: u32) -> Vec<DictionaryRow> {
    use Level1Rep as L1;
    use Level2Rep as L2;
    let big_l = 2 * s + 1;
    let mut rows = vec![
        (field(L1::O, L1::O, L2::O), OrbLabel::Zero),
        (field(L1::O, L1::O, L2::VV), OrbLabel::V),
        (field(L1::O, L1::V, L2::O), OrbLabel::S),
        (field(L1::V, L1::O, L2::O), OrbLabel::C),
        (field(L1::O, L1::S, L2::Sp), OrbLabel::Sigma),
        (field(L1::S, L1::O, L2::Sp), OrbLabel::SigmaT),
        (field(L1::O, L1::S, L2::SpV), OrbLabel::SigmaP),
        (field(L1::S, L1::O, L2::SpV), OrbLabel::SigmaTP),
        (field(L1::S, L1::S, L2::O), OrbLabel::L(big_l)),
    ];
    for l in 1..=s {
        let (even, odd) = (2 * l, 2 * big_l - 2 * l);
        let (j00, j0v) = if l % 2 == 0 { (even, odd) } else { (odd, even) };
        rows.push((field(L1::O, L1::O, L2::A(l)), OrbLabel::L(j00)));
        rows.push((field(L1::O, L1::V, L2::A(l)), OrbLabel::L(j0v)));
        let mut one = field(L1::S, L1::S, L2::A(l));
        one.copy = Some(1);
        let mut two = one;
        two.copy = Some(2);
        rows.push((one, OrbLabel::L(big_l - 2 * l)));
        rows.push((two, OrbLabel::L(big_l + 2 * l)));
    }
    rows.into_iter()
        .map(|(field, primary)| DictionaryRow {
            realization: Realization::B { rank: s },
            field,
            primary,
        })
        .collect()
}

/// Dictionary rows for the orbifold at radius `r`: always the `D_r` table
/// when `r ≥ 2`, and additionally the `B_s` table when `r = 2L` with `L = 2s+1`.
pub fn coset_dictionary(r: u32) -> Result<Vec<DictionaryRow>> {
    if r == 0 {
        return Err(Error::InvalidTheory("orb:0".into()));
    }
    let mut rows = Vec::new();
    if r >= 2 {
        rows.extend(d_rows(r));
    }
    if r % 4 == 2 && r >= 6 {
        rows.extend(b_rows((r / 2 - 1) / 2));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DictionaryReport {
    pub r: u32,
    /// `(realization, field, orbifold label, residue)` with residue
    /// `h(left1)+h(left2)-h(bottom)-h(orbifold)` mod 1.
    pub rows: Vec<(String, String, String, String)>,
    pub realizations: usize,
}

/// Checks `h(left1)+h(left2)-h(bottom) ≡ h(orbifold)` mod 1 on every row and
/// that each realization hits every orbifold primary exactly once.
pub fn dictionary_weight_check(r: u32) -> Result<DictionaryReport> {
    let rows = coset_dictionary(r)?;
    let h_orb = conformal_weights(TheoryId::OrbifoldC1(r))?;
    let mut report = DictionaryReport {
        r,
        rows: Vec::new(),
        realizations: 0,
    };
    let mut groups: Vec<(Realization, Vec<usize>)> = Vec::new();
    for row in &rows {
        let alg = row.realization.algebra();
        let idx = orbifold_index(r, row.primary)?;
        let lhs: Rational = level1_weight(alg, row.field.left1) + level1_weight(alg, row.field.left2)
            - conformal_weight(alg, row.field.bottom)?;
        let residue = frac(lhs - h_orb[idx]);
        let tag = alg.to_string();
        if residue != Rational::from_integer(0) {
            return Err(Error::Dictionary {
                row: format!("{tag} {} -> {}", row.field, row.primary),
                residue: fmt_rational(&residue),
            });
        }
        report.rows.push((
            tag,
            row.field.to_string(),
            row.primary.to_string(),
            fmt_rational(&residue),
        ));
        match groups.iter_mut().find(|(g, _)| *g == row.realization) {
            Some((_, v)) => v.push(idx),
            None => groups.push((row.realization, vec![idx])),
        }
    }
    for (g, mut idx) in groups {
        idx.sort_unstable();
        if idx != (0..r as usize + 7).collect::<Vec<_>>() {
            return Err(Error::Dictionary {
                row: format!("{g:?} does not cover every orbifold primary once"),
                residue: "-".into(),
            });
        }
        report.realizations += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(rows: &[DictionaryRow], text: &str) -> OrbLabel {
        rows.iter()
            .find(|r| r.field.to_string() == text)
            .unwrap_or_else(|| panic!("{text}"))
            .primary
    }

    #[test]
    fn quoted_rows() {
        let odd = coset_dictionary(5).unwrap();
        assert_eq!(find(&odd, "(0,c;s)"), OrbLabel::Sigma);
        let even = coset_dictionary(4).unwrap();
        assert_eq!(find(&even, "(0,0;ss)"), OrbLabel::S);
        let b = coset_dictionary(18).unwrap();
        assert_eq!(find(&b, "(s,s;0)"), OrbLabel::L(9));
    }

    #[test]
    fn realizations_present() {
        assert_eq!(dictionary_weight_check(6).unwrap().realizations, 2);
        assert_eq!(dictionary_weight_check(4).unwrap().realizations, 1);
        assert_eq!(dictionary_weight_check(1).unwrap().realizations, 0);
    }
}
