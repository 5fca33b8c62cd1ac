//! Verlinde fusion rules, simple currents and fusion-ring isomorphisms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{frac, CMatrix, Rational, Tolerance};
use crate::spectra::ModularData;

/// `N_{ab}^c` stored flat as `a*n*n + b*n + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionRing {
    pub size: usize,
    pub n: Vec<u32>,
    pub vacuum: usize,
    pub conjugation: Vec<usize>,
}

impl FusionRing {
    pub fn from_tensor(size: usize, n: Vec<u32>) -> Result<Self> {
        if n.len() != size * size * size {
            return Err(Error::Dimension(format!("{} entries for size {size}", n.len())));
        }
        let mut ring = FusionRing {
            size,
            n,
            vacuum: 0,
            conjugation: Vec::new(),
        };
        ring.conjugation = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| ring.get(a, b, 0) == 1)
                    .ok_or_else(|| Error::Invariant {
                        relation: format!("conjugate of {a}"),
                        residual: 1.0,
                        eps: 0.0,
                    })
            })
            .collect::<Result<_>>()?;
        Ok(ring)
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[(a * self.size + b) * self.size + c]
    }

    /// Constituents of `a × b` with multiplicities.
    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, u32)> {
        (0..self.size)
            .filter_map(|c| {
                let v = self.get(a, b, c);
                (v > 0).then_some((c, v))
            })
            .collect()
    }

    /// Checks unit, commutativity, conjugation and associativity exactly.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size;
        let fail = |what: String| Error::Invariant {
            relation: what,
            residual: 1.0,
            eps: 0.0,
        };
        for a in 0..n {
            for b in 0..n {
                if self.get(0, a, b) != u32::from(a == b) {
                    return Err(fail(format!("N_0{a}^{b} = delta")));
                }
                if self.get(a, b, 0) != u32::from(b == self.conjugation[a]) {
                    return Err(fail(format!("N_{a}{b}^0 = delta(b, conj a)")));
                }
                for c in 0..n {
                    if self.get(a, b, c) != self.get(b, a, c) {
                        return Err(fail(format!("N_{a}{b}^{c} symmetric")));
                    }
                }
            }
        }
        let bad = (0..n).into_par_iter().find_any(|&a| {
            (0..n).any(|b| {
                (0..n).any(|c| {
                    (0..n).any(|d| {
                        let lhs: u32 = (0..n).map(|e| self.get(a, b, e) * self.get(e, c, d)).sum();
                        let rhs: u32 = (0..n).map(|e| self.get(b, c, e) * self.get(a, e, d)).sum();
                        lhs != rhs
                    })
                })
            })
        });
        match bad {
            Some(a) => Err(fail(format!("associativity with first index {a}"))),
            None => Ok(()),
        }
    }

    /// Rows `(a, b, c, N)` for nonzero entries.
    pub fn to_csv(&self, labels: &[String]) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "b", "c", "N"])?;
        for a in 0..self.size {
            for b in 0..self.size {
                for (c, v) in self.product(a, b) {
                    w.write_record([&labels[a], &labels[b], &labels[c], &v.to_string()])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Verlinde coefficients from a bare S matrix, with the rounding residual.
pub fn verlinde_tensor(s: &CMatrix, tol: Tolerance) -> Result<(Vec<u32>, f64)> {
    let n = s.rows();
    let inv0: Vec<Complex64> = (0..n).map(|m| 1.0 / s[(0, m)]).collect();
    let rows: Vec<Vec<(u32, f64, Option<(usize, usize, i64)>)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::with_capacity(n * n);
            let sa: Vec<Complex64> = (0..n).map(|m| s[(a, m)] * inv0[m]).collect();
            for b in 0..n {
                let sab: Vec<Complex64> = (0..n).map(|m| sa[m] * s[(b, m)]).collect();
                for c in 0..n {
                    let v: Complex64 = (0..n).map(|m| sab[m] * s[(c, m)].conj()).sum();
                    let k = v.re.round();
                    let res = (v - Complex64::new(k, 0.0)).norm();
                    let neg = (k < 0.0).then_some((b, c, k as i64));
                    out.push((k.max(0.0) as u32, res, neg));
                }
            }
            out
        })
        .collect();
    let mut tensor = Vec::with_capacity(n * n * n);
    let mut residual: f64 = 0.0;
    for (a, row) in rows.into_iter().enumerate() {
        for (k, res, neg) in row {
            if let Some((b, c, value)) = neg {
                return Err(Error::NegativeFusion { a, b, c, value });
            }
            residual = residual.max(res);
            tensor.push(k);
        }
    }
    if !tol.accepts(residual) {
        return Err(Error::FusionRounding {
            residual,
            eps: tol.eps(),
        });
    }
    Ok((tensor, residual))
}

/// Fusion ring of validated modular data.
pub fn verlinde(md: &ModularData) -> Result<FusionRing> {
    verlinde_with(md, Tolerance::default())
}

pub fn verlinde_with(md: &ModularData, tol: Tolerance) -> Result<FusionRing> {
    let (n, _) = verlinde_tensor(&md.s, tol)?;
    FusionRing::from_tensor(md.len(), n)
}

/// Quantum dimensions `S_{a0}/S_{00}`.
pub fn quantum_dimensions(md: &ModularData) -> Vec<f64> {
    (0..md.len()).map(|a| (md.s[(a, 0)] / md.s[(0, 0)]).re).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleCurrent {
    pub index: usize,
    pub order: usize,
    /// `action[a] = J × a`.
    pub action: Vec<usize>,
}

impl SimpleCurrent {
    /// `J^k × a`.
    pub fn power_on(&self, k: usize, a: usize) -> usize {
        (0..k).fold(a, |x, _| self.action[x])
    }
}

/// All `a` whose fusion with every primary has a single constituent.
pub fn simple_currents(ring: &FusionRing) -> Vec<SimpleCurrent> {
    (0..ring.size)
        .filter_map(|j| simple_current(ring, j).ok())
        .collect()
}

pub fn simple_current(ring: &FusionRing, j: usize) -> Result<SimpleCurrent> {
    let mut action = Vec::with_capacity(ring.size);
    for b in 0..ring.size {
        match ring.product(j, b).as_slice() {
            [(c, 1)] => action.push(*c),
            _ => return Err(Error::NotSimpleCurrent(j)),
        }
    }
    let mut order = 1;
    let mut x = action[ring.vacuum];
    while x != ring.vacuum {
        x = action[x];
        order += 1;
    }
    Ok(SimpleCurrent {
        index: j,
        order,
        action,
    })
}

/// `Q_J(a) = h_J + h_a - h_{Ja}` mod 1.
pub fn monodromy_charge(md: &ModularData, j: &SimpleCurrent, a: usize) -> Rational {
    frac(md.h[j.index] + md.h[a] - md.h[j.action[a]])
}

/// Fusion-ring isomorphism `π` with `N1_{ab}^c = N2_{πa πb}^{πc}`.
pub fn fusion_isomorphic(r1: &FusionRing, r2: &FusionRing) -> Option<Vec<usize>> {
    fusion_isomorphic_with(r1, r2, |_, _, _| true)
}

/// As [`fusion_isomorphic`], with `accept(partial, a, πa)` vetoing extensions
/// of a partial bijection (`partial[x] = Some(πx)` for assigned `x`).
pub fn fusion_isomorphic_with(
    r1: &FusionRing,
    r2: &FusionRing,
    accept: impl Fn(&[Option<usize>], usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if r1.size != r2.size {
        return None;
    }
    let n = r1.size;
    let sig1: Vec<_> = (0..n).map(|a| signature(r1, a)).collect();
    let sig2: Vec<_> = (0..n).map(|a| signature(r2, a)).collect();
    let mut sorted1 = sig1.clone();
    let mut sorted2 = sig2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }
    // most constrained first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (a != r1.vacuum, sig1.iter().filter(|s| **s == sig1[a]).count(), a));
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    let ok = assign(r1, r2, &sig1, &sig2, &order, 0, &mut map, &mut used, &accept);
    ok.then(|| map.into_iter().map(|x| x.expect("complete")).collect())
}

type Signature = (u32, u32, u32, bool, Vec<u32>);

fn signature(r: &FusionRing, a: usize) -> Signature {
    let n = r.size;
    let total: u32 = (0..n).flat_map(|b| (0..n).map(move |c| (b, c))).map(|(b, c)| r.get(a, b, c)).sum();
    let trace: u32 = (0..n).map(|b| r.get(a, b, b)).sum();
    let square: u32 = (0..n).map(|c| r.get(a, a, c)).sum();
    let mut widths: Vec<u32> = (0..n).map(|b| r.product(a, b).len() as u32).collect();
    widths.sort_unstable();
    (total, trace, square, r.conjugation[a] == a, widths)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    r1: &FusionRing,
    r2: &FusionRing,
    sig1: &[Signature],
    sig2: &[Signature],
    order: &[usize],
    k: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    accept: &impl Fn(&[Option<usize>], usize, usize) -> bool,
) -> bool {
    if k == order.len() {
        return true;
    }
    let a = order[k];
    for x in 0..r2.size {
        if used[x] || sig1[a] != sig2[x] || (a == r1.vacuum) != (x == r2.vacuum) {
            continue;
        }
        map[a] = Some(x);
        if consistent(r1, r2, map, a) && accept(map, a, x) {
            used[x] = true;
            if assign(r1, r2, sig1, sig2, order, k + 1, map, used, accept) {
                return true;
            }
            used[x] = false;
        }
        map[a] = None;
    }
    false
}

fn consistent(r1: &FusionRing, r2: &FusionRing, map: &[Option<usize>], a: usize) -> bool {
    let assigned: Vec<(usize, usize)> = map
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|x| (i, x)))
        .collect();
    let pa = map[a].expect("just assigned");
    for &(b, pb) in &assigned {
        for &(c, pc) in &assigned {
            if r1.get(a, b, c) != r2.get(pa, pb, pc)
                || r1.get(b, c, a) != r2.get(pb, pc, pa)
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{modular_data, orbifold_index, OrbLabel, TheoryId};

    #[test]
    fn circle_is_group_ring() {
        let ring = verlinde(&modular_data(TheoryId::CircleU1(3)).unwrap()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    assert_eq!(ring.get(a, b, c), u32::from(c == (a + b) % 6));
                }
            }
        }
    }

    #[test]
    fn orbifold_v_squared() {
        let md = modular_data(TheoryId::OrbifoldC1(2)).unwrap();
        let ring = verlinde(&md).unwrap();
        assert_eq!(ring.product(1, 1), vec![(0, 1)]);
        ring.check_axioms().unwrap();
    }

    #[test]
    fn orbifold_simple_currents() {
        for r in 2..=8 {
            let ring = verlinde(&modular_data(TheoryId::OrbifoldC1(r)).unwrap()).unwrap();
            let idx: Vec<usize> = simple_currents(&ring).iter().map(|j| j.index).collect();
            assert_eq!(idx, [0, 1, 2, 3], "r={r}");
        }
    }

    #[test]
    fn twist_monodromy() {
        let md = modular_data(TheoryId::OrbifoldC1(5)).unwrap();
        let ring = verlinde(&md).unwrap();
        let v = simple_current(&ring, 1).unwrap();
        let sigma = orbifold_index(5, OrbLabel::Sigma).unwrap();
        assert_eq!(monodromy_charge(&md, &v, sigma), crate::numerics::rat(1, 2));
        assert_eq!(monodromy_charge(&md, &v, 0), crate::numerics::rat(0, 1));
    }

    #[test]
    fn orbifold_one_is_circle_four() {
        let a = verlinde(&modular_data(TheoryId::OrbifoldC1(1)).unwrap()).unwrap();
        let b = verlinde(&modular_data(TheoryId::CircleU1(4)).unwrap()).unwrap();
        assert!(fusion_isomorphic(&a, &b).is_some());
        let c = verlinde(&modular_data(TheoryId::CircleU1(3)).unwrap()).unwrap();
        assert!(fusion_isomorphic(&b, &c).is_none());
    }

    #[test]
    fn csv_rows() {
        let md = modular_data(TheoryId::CircleU1(1)).unwrap();
        let ring = verlinde(&md).unwrap();
        let csv = ring.to_csv(&md.labels).unwrap();
        assert_eq!(csv, "a,b,c,N\n0,0,0,1\n0,1,1,1\n1,0,1,1\n1,1,0,1\n");
    }
}
