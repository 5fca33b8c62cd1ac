//! Weight data for `B_s` and `D_r` at level 2.
//!
//! Weights are written in the orthonormal ε-basis with long roots of length
//! squared 2, so `ρ = Σ (r-i) ε_i` for `D_r` and `ρ = Σ (s-i+1/2) ε_i` for `B_s`.
//! At level `k` the Weyl-sum denominator is `k + g∨`, which for level 2 equals
//! `2r` (D) and `L = 2s+1` (B).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rat, unitary_symmetric_residuals, CMatrix, Rational, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    B,
    D,
}

/// `B_s` (`SO(2s+1)`) or `D_r` (`SO(2r)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraId {
    series: Series,
    rank: u32,
}

impl AlgebraId {
    pub fn new(series: Series, rank: u32) -> Result<Self> {
        let min = match series {
            Series::B => 1,
            Series::D => 2,
        };
        if rank < min {
            return Err(Error::InvalidTheory(format!("{series:?}{rank}: rank below {min}")));
        }
        Ok(AlgebraId { series, rank })
    }

    pub fn d(rank: u32) -> Result<Self> {
        Self::new(Series::D, rank)
    }

    pub fn b(rank: u32) -> Result<Self> {
        Self::new(Series::B, rank)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `N` of `SO(N)`.
    pub fn n(&self) -> u32 {
        match self.series {
            Series::B => 2 * self.rank + 1,
            Series::D => 2 * self.rank,
        }
    }

    pub fn dual_coxeter(&self) -> u32 {
        self.n() - 2
    }

    pub fn dimension(&self) -> u32 {
        let n = self.n();
        n * (n - 1) / 2
    }

    /// All level-2 primaries in canonical order.
    pub fn level2_reps(&self) -> Vec<Level2Rep> {
        use Level2Rep::*;
        let r = self.rank;
        match self.series {
            Series::D => {
                let mut v = vec![O, VV, SS, CC, S, C, VC, VS, V];
                v.extend((2..r.saturating_sub(1)).map(A));
                if r > 2 {
                    v.push(SC);
                }
                v
            }
            Series::B => {
                let mut v = vec![O, VV, Sp, SpV];
                v.extend((1..=r).map(A));
                v
            }
        }
    }

    /// Canonical key for `rep`, folding the tensor-ladder aliases.
    pub fn normalize(&self, rep: Level2Rep) -> Result<Level2Rep> {
        use Level2Rep::*;
        let r = self.rank;
        let bad = || Error::InvalidRep {
            algebra: self.to_string(),
            rep: rep.to_string(),
        };
        match (self.series, rep) {
            (Series::D, O | V | S | C | VV | VS | VC | SS | CC) => Ok(rep),
            (Series::D, SC) => Ok(if r == 2 { V } else { SC }),
            (Series::D, A(l)) => match l {
                1 => Ok(V),
                l if l == r - 1 => Ok(if r == 2 { V } else { SC }),
                l if l >= 2 && l + 2 <= r => Ok(A(l)),
                _ => Err(bad()),
            },
            (Series::B, O | VV | Sp | SpV) => Ok(rep),
            (Series::B, A(l)) if l >= 1 && l <= r => Ok(rep),
            _ => Err(bad()),
        }
    }

    /// Position of `rep` in [`Self::level2_reps`].
    pub fn index_of(&self, rep: Level2Rep) -> Result<usize> {
        let rep = self.normalize(rep)?;
        Ok(self
            .level2_reps()
            .iter()
            .position(|x| *x == rep)
            .expect("normalized rep is listed"))
    }

    pub fn rho(&self) -> Vec<Rational> {
        let r = self.rank as i64;
        (1..=r)
            .map(|i| match self.series {
                Series::D => Rational::from_integer(r - i),
                Series::B => rat(2 * (r - i) + 1, 2),
            })
            .collect()
    }

    /// Highest weight of a level-2 primary in the ε-basis.
    pub fn weight(&self, rep: Level2Rep) -> Result<Vec<Rational>> {
        use Level2Rep::*;
        let rep = self.normalize(rep)?;
        let r = self.rank as usize;
        let half = rat(1, 2);
        let e = |l: usize| -> Vec<Rational> {
            (0..r).map(|i| if i < l { Rational::one() } else { Rational::zero() }).collect()
        };
        let spinor = |last: Rational| -> Vec<Rational> {
            (0..r).map(|i| if i + 1 == r { last } else { half }).collect()
        };
        let add = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> {
            a.into_iter().zip(b).map(|(x, y)| x + y).collect()
        };
        let w = match (self.series, rep) {
            (_, O) => e(0),
            (_, VV) => add(e(1), e(1)),
            (Series::D, V) => e(1),
            (Series::D, S) => spinor(half),
            (Series::D, C) => spinor(-half),
            (Series::D, VS) => add(e(1), spinor(half)),
            (Series::D, VC) => add(e(1), spinor(-half)),
            (Series::D, SS) => add(spinor(half), spinor(half)),
            (Series::D, CC) => add(spinor(-half), spinor(-half)),
            (Series::D, SC) => e(r - 1),
            (Series::D, A(l)) => e(l as usize),
            (Series::B, Sp) => spinor(half),
            (Series::B, SpV) => add(e(1), spinor(half)),
            (Series::B, A(l)) => e(l as usize),
            _ => unreachable!("normalize rejected {rep}"),
        };
        Ok(w)
    }

    /// Highest weights of the level-1 primaries `0, v, s[, c]`.
    pub fn level1_weights(&self) -> Vec<(Level1Rep, Vec<Rational>)> {
        let r = self.rank as usize;
        let half = rat(1, 2);
        let zero = vec![Rational::zero(); r];
        let mut v = zero.clone();
        v[0] = Rational::one();
        let s = vec![half; r];
        let mut out = vec![(Level1Rep::O, zero), (Level1Rep::V, v), (Level1Rep::S, s.clone())];
        if self.series == Series::D {
            let mut c = s;
            c[r - 1] = -half;
            out.push((Level1Rep::C, c));
        }
        out
    }

    /// Conjugacy class of an ε-basis weight of `D_r`.
    pub fn d_class(&self, weight: &[Rational]) -> Level1Rep {
        debug_assert_eq!(self.series, Series::D);
        let half_integral = !weight[0].is_integer();
        if half_integral {
            let shifted: Rational = weight.iter().map(|x| x - rat(1, 2)).sum();
            if (shifted.to_integer() % 2) == 0 {
                Level1Rep::S
            } else {
                Level1Rep::C
            }
        } else {
            let total: Rational = weight.iter().sum();
            if total.to_integer() % 2 == 0 {
                Level1Rep::O
            } else {
                Level1Rep::V
            }
        }
    }

    /// Conjugacy class of a level-2 primary of `D_r`.
    pub fn class_of(&self, rep: Level2Rep) -> Result<Level1Rep> {
        if self.series != Series::D {
            return Err(Error::InvalidRep {
                algebra: self.to_string(),
                rep: "conjugacy classes are only tracked for D".into(),
            });
        }
        Ok(self.d_class(&self.weight(rep)?))
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

/// Level-2 primary labels shared by both series.
///
/// `D_r`: `O V S C VV VS VC SS CC SC A(l)` with `2 <= l <= r-2`.
/// `B_s`: `O VV Sp SpV A(l)` with `1 <= l <= s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level2Rep {
    O,
    V,
    S,
    C,
    VV,
    VS,
    VC,
    SS,
    CC,
    SC,
    A(u32),
    Sp,
    SpV,
}

impl fmt::Display for Level2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Level2Rep::*;
        let s = match self {
            O => "0",
            V => "v",
            S => "s",
            C => "c",
            VV => "vv",
            VS => "vs",
            VC => "vc",
            SS => "ss",
            CC => "cc",
            SC => "sc",
            A(l) => return write!(f, "A{l}"),
            Sp => "sp",
            SpV => "spv",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Level2Rep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Level2Rep::*;
        Ok(match s {
            "0" | "o" => O,
            "v" => V,
            "s" => S,
            "c" => C,
            "vv" => VV,
            "vs" => VS,
            "vc" => VC,
            "ss" => SS,
            "cc" => CC,
            "sc" => SC,
            "sp" => Sp,
            "spv" | "sv" => SpV,
            _ => {
                let l = s
                    .strip_prefix('A')
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown level-2 label {s:?}")))?;
                A(l)
            }
        })
    }
}

/// Level-1 primaries, which double as conjugacy-class labels for `D_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level1Rep {
    O,
    V,
    S,
    C,
}

impl Level1Rep {
    pub const ALL: [Level1Rep; 4] = [Level1Rep::O, Level1Rep::V, Level1Rep::S, Level1Rep::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Level1Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level1Rep::O => "0",
            Level1Rep::V => "v",
            Level1Rep::S => "s",
            Level1Rep::C => "c",
        })
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(λ, λ+2ρ) / (2(k+g∨))`, evaluated exactly.
pub fn casimir_weight(alg: AlgebraId, weight: &[Rational], level: u32) -> Rational {
    let rho = alg.rho();
    let shifted: Vec<Rational> = weight.iter().zip(&rho).map(|(l, p)| l + p * 2).collect();
    dot(weight, &shifted) / Rational::from_integer(2 * (level + alg.dual_coxeter()) as i64)
}

/// Conformal weight of a level-2 primary from the closed-form table.
pub fn conformal_weight(alg: AlgebraId, rep: Level2Rep) -> Result<Rational> {
    use Level2Rep::*;
    let rep = alg.normalize(rep)?;
    let r = alg.rank() as i64;
    Ok(match alg.series() {
        Series::D => match rep {
            O => Rational::zero(),
            V => rat(2 * r - 1, 4 * r),
            VV => Rational::one(),
            S | C => rat(2 * r - 1, 16),
            VS | VC => rat(2 * r - 1, 16) + rat(1, 2),
            SS | CC => rat(r, 4),
            SC => rat(r * r - 1, 4 * r),
            A(l) => {
                let l = l as i64;
                rat(l * (2 * r - l), 4 * r)
            }
            Sp | SpV => unreachable!(),
        },
        Series::B => {
            let big_l = 2 * r + 1;
            match rep {
                O => Rational::zero(),
                VV => Rational::one(),
                Sp => rat(big_l - 1, 16),
                SpV => rat(big_l + 7, 16),
                A(l) => {
                    let l = l as i64;
                    rat(l * (big_l - l), 2 * big_l)
                }
                _ => unreachable!(),
            }
        }
    })
}

/// Level-1 conformal weights used by the coset dictionaries:
/// `h(v) = 1/2`, `h(s) = h(c) = r/8` for `D_r` and `h(s) = L/16` for `B_s`.
pub fn level1_weight(alg: AlgebraId, rep: Level1Rep) -> Rational {
    let r = alg.rank() as i64;
    match rep {
        Level1Rep::O => Rational::zero(),
        Level1Rep::V => rat(1, 2),
        Level1Rep::S | Level1Rep::C => match alg.series() {
            Series::D => rat(r, 8),
            Series::B => rat(2 * r + 1, 16),
        },
    }
}

/// `c = 2·dim(g)/(2+g∨)`, which is `N-1` for `SO(N)_2`.
pub fn central_charge(alg: AlgebraId) -> Rational {
    rat(2 * alg.dimension() as i64, (2 + alg.dual_coxeter()) as i64)
}

/// Largest rank accepted by [`kac_peterson_s`].
pub const MAX_WEYL_RANK: u32 = 8;

/// Level-2 S matrix from the Kac–Peterson Weyl sum, ordered like
/// [`AlgebraId::level2_reps`], normalized to be unitary with a positive
/// vacuum row.
pub fn kac_peterson_s(alg: AlgebraId) -> Result<CMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<AlgebraId, CMatrix>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache poisoned").get(&alg) {
        return Ok(s.clone());
    }
    let weights: Vec<Vec<Rational>> = alg
        .level2_reps()
        .into_iter()
        .map(|rep| alg.weight(rep))
        .collect::<Result<_>>()?;
    let s = weyl_sum_s(alg, &weights, 2)?;
    cache.lock().expect("cache poisoned").insert(alg, s.clone());
    Ok(s)
}

/// Level-1 S matrix over [`AlgebraId::level1_weights`].
pub fn kac_peterson_level1(alg: AlgebraId) -> Result<CMatrix> {
    let weights: Vec<Vec<Rational>> = alg.level1_weights().into_iter().map(|(_, w)| w).collect();
    weyl_sum_s(alg, &weights, 1)
}

struct Permutations {
    perms: Vec<Vec<usize>>,
    signs: Vec<f64>,
}

fn permutations(n: usize) -> Permutations {
    // Heap's algorithm; each swap flips the sign.
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    let mut perms = vec![a.clone()];
    let mut signs = vec![sign];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            perms.push(a.clone());
            signs.push(sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Permutations { perms, signs }
}

/// Alternating sum over `W = S_r ⋉ (Z_2)^r` (B) or its even-sign subgroup (D).
///
/// Permutations are enumerated explicitly; for each one the sign flips are
/// summed in closed form as products of `2cos` and `-2i sin` factors.
fn weyl_sum_s(alg: AlgebraId, weights: &[Vec<Rational>], level: u32) -> Result<CMatrix> {
    let r = alg.rank();
    if r > MAX_WEYL_RANK {
        return Err(Error::RankTooLarge(r));
    }
    let r = r as usize;
    let k = (level + alg.dual_coxeter()) as f64;
    let rho = alg.rho();
    let shifted: Vec<Vec<f64>> = weights
        .iter()
        .map(|w| {
            w.iter()
                .zip(&rho)
                .map(|(x, p)| {
                    let y = x + p;
                    *y.numer() as f64 / *y.denom() as f64
                })
                .collect()
        })
        .collect();
    let perms = permutations(r);
    let n = weights.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let entries: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut cos = vec![0.0; r * r];
            let mut sin = vec![Complex64::zero(); r * r];
            for i in 0..r {
                for j in 0..r {
                    let theta = 2.0 * PI * shifted[a][i] * shifted[b][j] / k;
                    cos[i * r + j] = 2.0 * theta.cos();
                    sin[i * r + j] = Complex64::new(0.0, -2.0 * theta.sin());
                }
            }
            let mut sum_cos = 0.0;
            let mut sum_sin = Complex64::zero();
            for (p, sign) in perms.perms.iter().zip(&perms.signs) {
                let mut pc = *sign;
                let mut ps = Complex64::new(*sign, 0.0);
                for (j, &pj) in p.iter().enumerate() {
                    pc *= cos[pj * r + j];
                    ps *= sin[pj * r + j];
                }
                sum_cos += pc;
                sum_sin += ps;
            }
            match alg.series() {
                Series::D => (Complex64::new(sum_cos, 0.0) + sum_sin) * 0.5,
                Series::B => sum_sin,
            }
        })
        .collect();
    let mut raw = CMatrix::zeros(n, n);
    for (&(a, b), z) in pairs.iter().zip(entries) {
        raw[(a, b)] = z;
        raw[(b, a)] = z;
    }
    let norm = (0..n).map(|j| raw[(0, j)].norm_sqr()).sum::<f64>().sqrt();
    let v = raw[(0, 0)];
    let scale = v.conj() / (v.norm() * norm);
    let s = raw.scale(scale);
    let tol = Tolerance::default();
    let (unit, sym) = unitary_symmetric_residuals(&s)?;
    if !tol.accepts(unit) || !tol.accepts(sym) {
        return Err(Error::Invariant {
            relation: format!("Kac-Peterson unitarity for {alg}"),
            residual: unit.max(sym),
            eps: tol.eps(),
        });
    }
    if let Some(j) = (0..n).find(|&j| s[(0, j)].re <= 0.0 || s[(0, j)].im.abs() > tol.eps()) {
        return Err(Error::Invariant {
            relation: format!("positive vacuum row for {alg} (column {j})"),
            residual: s[(0, j)].im.abs(),
            eps: tol.eps(),
        });
    }
    Ok(s)
}
