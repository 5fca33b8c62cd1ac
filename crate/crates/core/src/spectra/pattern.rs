//! `S(D_{r,2})` from the orbifold: `S_D = conj(S_orb) · P(class, class')`,
//! where `P` depends only on `r mod 4` and the conjugacy classes of the two
//! primaries. `P` is fitted against the Weyl sum and shipped as data.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbifold::orbifold_s;
use crate::error::{Error, Result};
use crate::lie_data::{kac_peterson_s, AlgebraId, Level1Rep};
use crate::numerics::CMatrix;

const EMBEDDED: &str = include_str!("../../data/d2_phase_pattern.json");

/// Phase table indexed by `[r mod 4][class row][class col]`; class order
/// `0 v s c`. A zero entry means the pair never meets a nonzero orbifold entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePattern {
    pub fitted_ranks: Vec<u32>,
    pub residues: BTreeMap<u32, Vec<Vec<[i64; 2]>>>,
}

impl PhasePattern {
    pub fn embedded() -> &'static PhasePattern {
        static P: OnceLock<PhasePattern> = OnceLock::new();
        P.get_or_init(|| serde_json::from_str(EMBEDDED).expect("embedded phase pattern parses"))
    }

    pub fn get(&self, r: u32, row: Level1Rep, col: Level1Rep) -> Option<Complex64> {
        let [re, im] = self.residues.get(&(r % 4))?[row.index()][col.index()];
        Some(Complex64::new(re as f64, im as f64))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn classes(alg: AlgebraId) -> Result<Vec<Level1Rep>> {
    alg.level2_reps().into_iter().map(|rep| alg.class_of(rep)).collect()
}

/// Fits the table from Weyl-sum S matrices at `ranks`, failing on any
/// ratio that is not a fourth root of unity or disagrees with an earlier rank.
pub fn fit_phase_pattern(ranks: &[u32]) -> Result<PhasePattern> {
    let mut residues: BTreeMap<u32, Vec<Vec<[i64; 2]>>> = BTreeMap::new();
    for &r in ranks {
        let alg = AlgebraId::d(r)?;
        let kp = kac_peterson_s(alg)?;
        let orb = orbifold_s(r)?;
        let cls = classes(alg)?;
        let table = residues.entry(r % 4).or_insert_with(|| vec![vec![[0, 0]; 4]; 4]);
        let n = kp.rows();
        for i in 0..n {
            for j in 0..n {
                let o = orb[(i, j)];
                if o.norm() < 1e-6 {
                    if kp[(i, j)].norm() > 1e-9 {
                        return Err(Error::Invariant {
                            relation: format!("zero pattern of D{r} vs orbifold at ({i},{j})"),
                            residual: kp[(i, j)].norm(),
                            eps: 1e-9,
                        });
                    }
                    continue;
                }
                let ratio = kp[(i, j)] / o.conj();
                let rounded = [ratio.re.round() as i64, ratio.im.round() as i64];
                let dev = (ratio - Complex64::new(rounded[0] as f64, rounded[1] as f64)).norm();
                if dev > 1e-9 || rounded[0].abs() + rounded[1].abs() != 1 {
                    return Err(Error::Invariant {
                        relation: format!("fourth-root phase of D{r} at ({i},{j})"),
                        residual: dev,
                        eps: 1e-9,
                    });
                }
                let slot = &mut table[cls[i].index()][cls[j].index()];
                if *slot == [0, 0] {
                    *slot = rounded;
                } else if *slot != rounded {
                    return Err(Error::Invariant {
                        relation: format!(
                            "class-pair phase ({},{}) at r mod 4 = {}",
                            cls[i],
                            cls[j],
                            r % 4
                        ),
                        residual: 2.0,
                        eps: 1e-9,
                    });
                }
            }
        }
    }
    Ok(PhasePattern {
        fitted_ranks: ranks.to_vec(),
        residues,
    })
}

/// `S(D_{r,2})` from the conjugated orbifold S and the embedded pattern.
pub fn d_series_pattern_s(r: u32) -> Result<CMatrix> {
    let alg = AlgebraId::d(r)?;
    let pattern = PhasePattern::embedded();
    let orb = orbifold_s(r)?;
    let cls = classes(alg)?;
    let n = orb.rows();
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let o = orb[(i, j)];
            if o.norm() < 1e-12 {
                continue;
            }
            let p = pattern
                .get(r, cls[i], cls[j])
                .filter(|p| p.norm() > 0.5)
                .ok_or_else(|| Error::Invariant {
                    relation: format!("phase pattern coverage for D{r} at ({i},{j})"),
                    residual: o.norm(),
                    eps: 1e-12,
                })?;
            s[(i, j)] = o.conj() * p;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::kac_peterson_level1;
    use crate::numerics::max_abs_deviation;

    #[test]
    fn embedded_covers_all_residues() {
        let p = PhasePattern::embedded();
        assert_eq!(p.residues.keys().copied().collect::<Vec<_>>(), [0, 1, 2, 3]);
    }

    #[test]
    fn pattern_matches_weyl_sum_at_small_rank() {
        for r in 2..=8 {
            let kp = kac_peterson_s(AlgebraId::d(r).unwrap()).unwrap();
            let dev = max_abs_deviation(&kp, &d_series_pattern_s(r).unwrap()).unwrap();
            assert!(dev < 1e-10, "D{r}: {dev}");
        }
    }

    /// The pattern is twice the level-1 S matrix, with `s` and `c`
    /// exchanged when `r` is odd.
    #[test]
    fn pattern_is_level_one_s() {
        let p = PhasePattern::embedded();
        for r in 2..=5u32 {
            let s1 = kac_peterson_level1(AlgebraId::d(r).unwrap()).unwrap();
            let neg = |c: Level1Rep| match (c, r % 2) {
                (Level1Rep::S, 1) => Level1Rep::C,
                (Level1Rep::C, 1) => Level1Rep::S,
                _ => c,
            };
            for a in Level1Rep::ALL {
                for b in Level1Rep::ALL {
                    let got = p.get(r, a, b).unwrap();
                    if got.norm() < 0.5 {
                        continue;
                    }
                    let expect = s1[(neg(a).index(), neg(b).index())] * 2.0;
                    assert!((got - expect).norm() < 1e-12, "r={r} {a} {b}");
                }
            }
        }
    }
}
