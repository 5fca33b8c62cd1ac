//! Extensions: split an invariant into character blocks, solve for the
//! extended S and T, and run the clone and meromorphic pipelines.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{fusion_isomorphic_with, simple_currents, verlinde_with};
use crate::invariants::{build_b_series, build_dinv, simple_current_invariant, verify, Mipf};
use crate::numerics::{fmt_rational, frac, mat_mul, max_abs_deviation, rat, CMatrix, Rational, Tolerance};
use crate::spectra::{modular_data_with, ModularData, TheoryId};

/// `M = Σ_I mult_I · b_I b_Iᵀ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Vec<u32>>,
    pub multiplicities: Vec<u32>,
}

impl BlockDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn members(&self, block: usize) -> Vec<usize> {
        (0..self.blocks[block].len()).filter(|&i| self.blocks[block][i] > 0).collect()
    }

    /// Number of extended fields once multiplicity-`k` blocks split into `k`.
    pub fn split_field_count(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// Index of the block containing parent primary `a`.
    pub fn block_of(&self, a: usize) -> Option<usize> {
        (0..self.len()).find(|&i| self.blocks[i][a] > 0)
    }
}

/// Factors `M` into rank-one blocks by pivoting on diagonal entries with
/// backtracking.
pub fn block_decompose(m: &Mipf) -> Result<BlockDecomposition> {
    let n = m.size();
    if !m.is_symmetric() {
        return Err(Error::AutomorphismType);
    }
    let r: Vec<Vec<i64>> = m.m.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect();
    let mut blocks = Vec::new();
    if !peel(r, &mut blocks, n) {
        return Err(Error::AutomorphismType);
    }
    blocks.sort_by_key(|(_, b): &(u32, Vec<u32>)| b.iter().position(|&x| x > 0));
    let (multiplicities, blocks) = blocks.into_iter().unzip();
    Ok(BlockDecomposition { blocks, multiplicities })
}

fn peel(r: Vec<Vec<i64>>, out: &mut Vec<(u32, Vec<u32>)>, n: usize) -> bool {
    if r.iter().all(|row| row.iter().all(|&x| x == 0)) {
        return true;
    }
    for a in (0..n).filter(|&a| r[a][a] > 0) {
        let d = r[a][a];
        for mult in (1..=d).rev().filter(|k| d % k == 0) {
            if r[a].iter().any(|x| x % mult != 0) {
                continue;
            }
            let b: Vec<i64> = r[a].iter().map(|x| x / mult).collect();
            if b[a] != 1 {
                continue;
            }
            let mut rest = r.clone();
            let mut ok = true;
            'outer: for i in 0..n {
                for j in 0..n {
                    rest[i][j] -= mult * b[i] * b[j];
                    if rest[i][j] < 0 {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if !ok {
                continue;
            }
            out.push((mult as u32, b.iter().map(|&x| x as u32).collect()));
            if peel(rest, out, n) {
                return true;
            }
            out.pop();
        }
    }
    false
}

/// Extended theory with its solved modular data.
#[derive(Debug, Clone)]
pub struct ExtendedTheory {
    pub parent: String,
    pub decomposition: BlockDecomposition,
    pub md: ModularData,
    /// `‖S_ext B − B S‖`.
    pub s_residual: f64,
}

/// Solves `S_ext B = B S` as `S_ext = (B S Bᵀ)(B Bᵀ)⁻¹` and takes `T` from
/// the block members.
pub fn extended_modular_data(
    parent: &ModularData,
    dec: &BlockDecomposition,
    tol: Tolerance,
) -> Result<ExtendedTheory> {
    if let Some(i) = dec.multiplicities.iter().position(|&k| k > 1) {
        return Err(Error::FixedPointResolution {
            block: i,
            multiplicity: dec.multiplicities[i],
        });
    }
    let k = dec.len();
    let n = parent.len();
    let b = CMatrix::from_real(k, n, |i, j| dec.blocks[i][j] as f64);
    let bt = b.transpose();
    let gram = mat_mul(&b, &bt)?;
    let bsbt = mat_mul(&mat_mul(&b, &parent.s)?, &bt)?;
    let s_ext = gram.solve(&bsbt.transpose())?.transpose();
    let s_residual = max_abs_deviation(&mat_mul(&s_ext, &b)?, &mat_mul(&b, &parent.s)?)?;
    if !tol.accepts(s_residual) {
        return Err(Error::Invariant {
            relation: "S_ext B = B S".into(),
            residual: s_residual,
            eps: tol.eps(),
        });
    }
    let mut h = Vec::with_capacity(k);
    let mut labels = Vec::with_capacity(k);
    for i in 0..k {
        let members = dec.members(i);
        let first = parent.h[members[0]];
        if let Some(&other) = members.iter().find(|&&a| frac(parent.h[a] - first) != Rational::from_integer(0)) {
            return Err(Error::InconsistentBlockWeight {
                block: i,
                first: fmt_rational(&first),
                second: fmt_rational(&parent.h[other]),
            });
        }
        h.push(members.iter().map(|&a| parent.h[a]).min().expect("nonempty block"));
        labels.push(
            members
                .iter()
                .map(|&a| parent.labels[a].as_str())
                .collect::<Vec<_>>()
                .join("+"),
        );
    }
    let md = ModularData::new(None, format!("ext({})", parent.name), labels, s_ext, h, parent.c, tol)?;
    Ok(ExtendedTheory {
        parent: parent.name.clone(),
        decomposition: dec.clone(),
        md,
        s_residual,
    })
}

/// Decomposes and extends in one step.
pub fn extend(parent: &ModularData, m: &Mipf, tol: Tolerance) -> Result<ExtendedTheory> {
    let dec = block_decompose(m)?;
    extended_modular_data(parent, &dec, tol)
}

/// Best bijection `π` with matching fusion and `S_ext[a][b] = S_t[πa][πb]`.
pub fn s_preserving_isomorphism(a: &ModularData, b: &ModularData, tol: Tolerance) -> Result<Option<(Vec<usize>, f64)>> {
    let ra = verlinde_with(a, tol)?;
    let rb = verlinde_with(b, tol)?;
    let eps = tol.eps().max(1e-8);
    let found = fusion_isomorphic_with(&ra, &rb, |map, x, px| {
        map.iter()
            .enumerate()
            .filter_map(|(y, py)| py.map(|py| (y, py)))
            .all(|(y, py)| (a.s[(x, y)] - b.s[(px, py)]).norm() <= eps)
    });
    Ok(found.map(|p| {
        let n = p.len();
        let res = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| (a.s[(x, y)] - b.s[(p[x], p[y])]).norm())
            .fold(0.0, f64::max);
        (p, res)
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CloneReport {
    pub params: CloneParams,
    pub parent: String,
    pub target: String,
    pub block_count: usize,
    pub multiplicities: Vec<u32>,
    pub s_residual: f64,
    pub iso_bijection: Option<Vec<usize>>,
    pub s_match_residual: Option<f64>,
    pub weights_parent: Vec<String>,
    pub weights_target: Vec<String>,
    pub labels_extended: Vec<String>,
    pub labels_target: Vec<String>,
    /// Blocks whose weight differs from the matched target field by a
    /// nonzero integer.
    pub differing_weights: Vec<(String, String, String)>,
    pub spinor_weight_difference: String,
    pub expected_spinor_difference: String,
    pub invariance_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CloneParams {
    pub rtilde: u32,
    pub m: u32,
}

const SPINOR: usize = 4;

/// Builds the `r = r̃M²` invariant, extends it and compares with the `r̃`
/// theory: `D2:r̃` for `r̃ ≥ 2`, `orb:1` for `r̃ = 1`.
pub fn clone_check(rtilde: u32, m: u32, tol: Tolerance) -> Result<CloneReport> {
    if rtilde == 0 {
        return Err(Error::BadParameters("r̃ must be at least 1".into()));
    }
    let r = rtilde
        .checked_mul(m * m)
        .ok_or_else(|| Error::BadParameters("r̃M² overflows".into()))?;
    let (parent_t, target_t) = if rtilde >= 2 {
        (TheoryId::AffineD2(r), TheoryId::AffineD2(rtilde))
    } else {
        (TheoryId::OrbifoldC1(r), TheoryId::OrbifoldC1(1))
    };
    let parent = modular_data_with(parent_t, tol)?;
    let inv = build_dinv(parent_t, rtilde, m)?;
    let report = verify(&parent, &inv, tol)?;
    if !report.pass {
        return Err(Error::Invariant {
            relation: format!("invariance of dinv({rtilde},{m})"),
            residual: report.commutes_with_s.max(report.commutes_with_t),
            eps: tol.eps(),
        });
    }
    let ext = extend(&parent, &inv, tol)?;
    let target = modular_data_with(target_t, tol)?;
    let iso = s_preserving_isomorphism(&ext.md, &target, tol)?;

    // Spinor weights are compared on the D side, where the spinor block of
    // the extension carries h = (2r-1)/16.
    let d_ext = if rtilde >= 2 {
        ext.clone()
    } else {
        let d = modular_data_with(TheoryId::AffineD2(r), tol)?;
        extend(&d, &build_dinv(TheoryId::AffineD2(r), rtilde, m)?, tol)?
    };
    let spin_block = d_ext
        .decomposition
        .block_of(SPINOR)
        .expect("spinor sits in a singlet block");
    let spinor_diff = d_ext.md.h[spin_block] - target.h[SPINOR];
    let expected = rat((rtilde * (m * m - 1)) as i64, 8);

    let fmt = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>();
    let mut differing = Vec::new();
    if let Some((p, _)) = &iso {
        for (i, &j) in p.iter().enumerate() {
            if ext.md.h[i] != target.h[j] {
                differing.push((
                    ext.md.labels[i].clone(),
                    fmt_rational(&ext.md.h[i]),
                    fmt_rational(&target.h[j]),
                ));
            }
        }
    }
    let s_match = iso.as_ref().map(|(_, res)| *res);
    let pass = s_match.is_some_and(|res| res <= 1e-8) && spinor_diff == expected;
    Ok(CloneReport {
        params: CloneParams { rtilde, m },
        parent: parent.name.clone(),
        target: target.name.clone(),
        block_count: ext.decomposition.len(),
        multiplicities: ext.decomposition.multiplicities.clone(),
        s_residual: ext.s_residual,
        iso_bijection: iso.as_ref().map(|(p, _)| p.clone()),
        s_match_residual: s_match,
        weights_parent: fmt(&ext.md.h),
        weights_target: fmt(&target.h),
        labels_extended: ext.md.labels.clone(),
        labels_target: target.labels.clone(),
        differing_weights: differing,
        spinor_weight_difference: fmt_rational(&spinor_diff),
        expected_spinor_difference: fmt_rational(&expected),
        invariance_residual: report.commutes_with_s.max(report.commutes_with_t),
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeromorphicReport {
    pub m: u32,
    pub parent: String,
    pub intermediate_labels: Vec<String>,
    pub intermediate_weights: Vec<String>,
    pub all_simple_currents: bool,
    pub current: String,
    pub current_weight: String,
    pub final_count: usize,
    pub final_labels: Vec<String>,
    pub c: String,
}

/// `B_{(M²-1)/2, 2}` → four simple currents → one field.
pub fn meromorphic_chain(m: u32, tol: Tolerance) -> Result<MeromorphicReport> {
    let inv = build_b_series(1, m, false)?;
    let t = inv.theory.expect("builder sets the theory");
    let parent = modular_data_with(t, tol)?;
    let first = extend(&parent, &inv, tol)?;
    let ring = verlinde_with(&first.md, tol)?;
    let currents = simple_currents(&ring);
    let all_simple = currents.len() == first.md.len();
    let j = (2..first.md.len())
        .find(|&j| first.md.h[j].is_integer())
        .ok_or_else(|| Error::Invariant {
            relation: "one spinor block has integer weight".into(),
            residual: 1.0,
            eps: 0.0,
        })?;
    let sc = simple_current_invariant(&first.md, j)?;
    let second = extend(&first.md, &sc, tol)?;
    Ok(MeromorphicReport {
        m,
        parent: parent.name.clone(),
        intermediate_labels: first.md.labels.clone(),
        intermediate_weights: first.md.h.iter().map(fmt_rational).collect(),
        all_simple_currents: all_simple,
        current: first.md.labels[j].clone(),
        current_weight: fmt_rational(&first.md.h[j]),
        final_count: second.md.len(),
        final_labels: second.md.labels.clone(),
        c: fmt_rational(&second.md.c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{build_scinv, charge_conjugation, diagonal};
    use crate::spectra::modular_data;

    #[test]
    fn diagonal_extension_is_identity() {
        let md = modular_data(TheoryId::OrbifoldC1(3)).unwrap();
        let ext = extend(&md, &diagonal(&md), Tolerance::default()).unwrap();
        assert!(max_abs_deviation(&ext.md.s, &md.s).unwrap() < 1e-12);
    }

    #[test]
    fn conjugation_is_automorphism_type() {
        let md = modular_data(TheoryId::CircleU1(3)).unwrap();
        assert_eq!(block_decompose(&charge_conjugation(&md)).unwrap_err(), Error::AutomorphismType);
    }

    #[test]
    fn scinv_needs_resolution() {
        let t = TheoryId::AffineD2(8);
        let md = modular_data(t).unwrap();
        let dec = block_decompose(&build_scinv(t).unwrap()).unwrap();
        assert_eq!(dec.multiplicities.iter().filter(|&&k| k == 2).count(), 3);
        let err = extended_modular_data(&md, &dec, Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::FixedPointResolution { multiplicity: 2, .. }));
        assert!(err.to_string().starts_with("fixed point resolution required"));
    }

    #[test]
    fn dinv_blocks_roundtrip() {
        let t = TheoryId::AffineD2(9);
        let inv = build_dinv(t, 1, 3).unwrap();
        let dec = block_decompose(&inv).unwrap();
        assert_eq!(dec.len(), 8);
        assert!(dec.multiplicities.iter().all(|&k| k == 1));
        assert_eq!(dec.members(0), vec![0, 7 + 6]);
    }
}
