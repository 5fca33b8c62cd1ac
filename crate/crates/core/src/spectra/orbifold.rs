//! Orbifold S matrix. The untwisted entries are closed form; the twisted
//! block and the spinor entries are fixed by a finite constraint solve.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use super::{conformal_weights, TheoryId};
use crate::error::{Error, Result};
use crate::fusion::verlinde_tensor;
use crate::numerics::{as_permutation, mat_mul, max_abs_deviation, phase, rat, CMatrix, Tolerance};

const SIGMA: usize = 4;
const SIGMA_T: usize = 5;
const SIGMA_P: usize = 6;
const SIGMA_TP: usize = 7;
const TWISTS: [usize; 4] = [SIGMA, SIGMA_T, SIGMA_P, SIGMA_TP];
const EPS: f64 = 1e-9;

/// Every S matrix that satisfies the constraints, and the chosen one.
#[derive(Debug, Clone)]
pub struct OrbifoldSolution {
    pub r: u32,
    pub solutions: Vec<CMatrix>,
    pub chosen: usize,
    /// For each solution, the relabeling `(swap σσ̃, swap σ'σ̃')` taking the
    /// chosen one to it.
    pub relabelings: Vec<(bool, bool)>,
}

impl OrbifoldSolution {
    pub fn s(&self) -> &CMatrix {
        &self.solutions[self.chosen]
    }
}

struct Var {
    cells: Vec<(usize, usize)>,
    domain: Vec<Complex64>,
}

struct Solver {
    n: usize,
    m: Vec<Option<Complex64>>,
    missing: Vec<usize>,
    vars: Vec<Var>,
    t: Vec<Complex64>,
    found: Vec<CMatrix>,
}

impl Solver {
    fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        self.m[i * self.n + j]
    }

    fn row_ok(&self, i: usize) -> bool {
        let n = self.n;
        let norm: f64 = (0..n).map(|k| self.get(i, k).map_or(0.0, |z| z.norm_sqr())).sum();
        if self.missing[i] > 0 {
            return norm <= 1.0 + EPS;
        }
        if (norm - 1.0).abs() > EPS {
            return false;
        }
        (0..n).filter(|&j| j != i && self.missing[j] == 0).all(|j| {
            let dot: Complex64 = (0..n)
                .map(|k| self.get(i, k).unwrap() * self.get(j, k).unwrap().conj())
                .sum();
            dot.norm() <= EPS
        })
    }

    fn set(&mut self, cells: &[(usize, usize)], v: Option<Complex64>) {
        for &(i, j) in cells {
            let was = self.m[i * self.n + j].is_some();
            self.m[i * self.n + j] = v;
            self.m[j * self.n + i] = v;
            let delta = |miss: &mut usize| {
                if v.is_some() && !was {
                    *miss -= 1
                } else if v.is_none() && was {
                    *miss += 1
                }
            };
            delta(&mut self.missing[i]);
            if i != j {
                delta(&mut self.missing[j]);
            }
        }
    }

    fn search(&mut self, k: usize) {
        if k == self.vars.len() {
            self.leaf();
            return;
        }
        let cells = self.vars[k].cells.clone();
        let domain = self.vars[k].domain.clone();
        let rows: Vec<usize> = cells.iter().flat_map(|&(i, j)| [i, j]).collect();
        for v in domain {
            self.set(&cells, Some(v));
            if rows.iter().all(|&i| self.row_ok(i)) {
                self.search(k + 1);
            }
            self.set(&cells, None);
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let s = CMatrix::from_fn(n, n, |i, j| self.get(i, j).expect("complete"));
        if leaf_ok(&s, &self.t) {
            self.found.push(s);
        }
    }
}

fn leaf_ok(s: &CMatrix, t: &[Complex64]) -> bool {
    let n = s.rows();
    let tol = Tolerance::new(EPS).expect("valid");
    let Ok(s2) = mat_mul(s, s) else { return false };
    let Some((p, _)) = as_permutation(&s2, tol) else { return false };
    if p[0] != 0 || (0..n).any(|i| p[p[i]] != i) {
        return false;
    }
    let st = mat_mul(s, &CMatrix::diagonal(t)).expect("square");
    let st3 = mat_mul(&mat_mul(&st, &st).expect("square"), &st).expect("square");
    if max_abs_deviation(&st3, &s2).expect("square") > EPS {
        return false;
    }
    verlinde_tensor(s, tol).is_ok()
}

fn swap_labels(s: &CMatrix, swap_sigma: bool, swap_prime: bool) -> CMatrix {
    let n = s.rows();
    let mut p: Vec<usize> = (0..n).collect();
    if swap_sigma {
        p.swap(SIGMA, SIGMA_T);
    }
    if swap_prime {
        p.swap(SIGMA_P, SIGMA_TP);
    }
    CMatrix::from_fn(n, n, |i, j| s[(p[i], p[j])])
}

/// Enumerates all orbifold S matrices compatible with the closed-form
/// untwisted entries and the modular constraints, and picks the one with
/// `S([S],[σ]) = S([S],[σ']) = i^{-r}/√8`.
pub fn solve_orbifold_s(r: u32) -> Result<OrbifoldSolution> {
    if r == 0 {
        return Err(Error::InvalidTheory("orb:0".into()));
    }
    let n = r as usize + 7;
    let rf = r as f64;
    let a = 1.0 / (8.0 * rf).sqrt();
    let b = 1.0 / (2.0 * rf).sqrt();
    let w = 1.0 / 8f64.sqrt();
    let c = |x: f64| Complex64::new(x, 0.0);
    let ladder = |i: usize| (i - 7) as i64;

    let mut m = vec![None; n * n];
    let mut put = |i: usize, j: usize, z: Complex64| {
        m[i * n + j] = Some(z);
        m[j * n + i] = Some(z);
    };
    for i in 0..4 {
        put(0, i, c(a));
    }
    for i in 1..4 {
        put(1, i, c(a));
    }
    for i in 8..n {
        let l = ladder(i);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        put(0, i, c(b));
        put(1, i, c(b));
        put(2, i, c(sign * b));
        put(3, i, c(sign * b));
        for j in 8..n {
            let x = std::f64::consts::PI * (l * ladder(j)) as f64 / rf;
            put(i, j, c((2.0 / rf).sqrt() * x.cos()));
        }
        for tw in TWISTS {
            put(tw, i, c(0.0));
        }
    }
    for tw in TWISTS {
        put(0, tw, c(w));
    }

    let units = [c(1.0), c(-1.0), Complex64::i(), -Complex64::i()];
    let mut vars = Vec::new();
    let single = |i, j, dom: Vec<Complex64>| Var {
        cells: vec![(i, j)],
        domain: dom,
    };
    for tw in TWISTS {
        vars.push(single(1, tw, vec![c(w), c(-w)]));
    }
    let spin_a: Vec<Complex64> = units.iter().map(|u| u * a).collect();
    let spin_w: Vec<Complex64> = units.iter().map(|u| u * w).collect();
    vars.push(single(2, 2, spin_a.clone()));
    vars.push(single(2, 3, spin_a.clone()));
    for tw in TWISTS {
        vars.push(single(2, tw, spin_w.clone()));
    }
    vars.push(single(3, 3, spin_a));
    for tw in TWISTS {
        vars.push(single(3, tw, spin_w.clone()));
    }
    let mut twist_dom = vec![c(0.0)];
    twist_dom.extend(units.iter().map(|u| u * 0.5));
    for x in [1.0, -1.0] {
        for y in [1.0, -1.0] {
            twist_dom.push(Complex64::new(x, y) * 0.25);
        }
    }
    for (k, &i) in TWISTS.iter().enumerate() {
        for &j in &TWISTS[k..] {
            vars.push(single(i, j, twist_dom.clone()));
        }
    }

    let missing = (0..n).map(|i| (0..n).filter(|&j| m[i * n + j].is_none()).count()).collect();
    let h = conformal_weights(TheoryId::OrbifoldC1(r))?;
    let t = h.iter().map(|x| phase(*x - rat(1, 24))).collect();
    let mut solver = Solver {
        n,
        m,
        missing,
        vars,
        t,
        found: Vec::new(),
    };
    if let Some(i) = (0..n).find(|&i| solver.missing[i] == 0 && !solver.row_ok(i)) {
        return Err(Error::Solver(format!("closed-form row {i} is not orthonormal at r={r}")));
    }
    solver.search(0);
    let solutions = solver.found;
    if solutions.is_empty() {
        return Err(Error::Solver(format!("no solution at r={r}")));
    }

    let gauge = Complex64::i().powi(-(r as i32)) * w;
    let picks: Vec<usize> = (0..solutions.len())
        .filter(|&k| {
            let s = &solutions[k];
            (s[(2, SIGMA)] - gauge).norm() < EPS && (s[(2, SIGMA_P)] - gauge).norm() < EPS
        })
        .collect();
    let chosen = match picks.as_slice() {
        [k] => *k,
        _ => {
            return Err(Error::Solver(format!(
                "{} solutions match the gauge at r={r}",
                picks.len()
            )))
        }
    };
    let mut relabelings = Vec::new();
    for s in &solutions {
        let rel = [(false, false), (true, false), (false, true), (true, true)]
            .into_iter()
            .find(|&(x, y)| {
                max_abs_deviation(&swap_labels(&solutions[chosen], x, y), s).expect("same shape") < EPS
            })
            .ok_or_else(|| {
                Error::Solver(format!("solutions at r={r} are not related by relabeling"))
            })?;
        relabelings.push(rel);
    }
    Ok(OrbifoldSolution {
        r,
        solutions,
        chosen,
        relabelings,
    })
}

/// Orbifold S matrix in canonical order, cached per `r`.
pub fn orbifold_s(r: u32) -> Result<CMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<u32, CMatrix>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache poisoned").get(&r) {
        return Ok(s.clone());
    }
    let s = solve_orbifold_s(r)?.s().clone();
    cache.lock().expect("cache poisoned").insert(r, s.clone());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solutions_form_one_relabeling_orbit() {
        for r in 1..=10 {
            let sol = solve_orbifold_s(r).unwrap();
            assert_eq!(sol.solutions.len(), 4, "r={r}");
            let mut rel = sol.relabelings.clone();
            rel.sort();
            assert_eq!(rel, [(false, false), (false, true), (true, false), (true, true)]);
        }
    }

    #[test]
    fn twisted_block() {
        for r in 1..=9 {
            let s = orbifold_s(r).unwrap();
            let zeta = Complex64::i().powi(-(r as i32));
            let plus = (Complex64::new(1.0, 0.0) + zeta) / 4.0;
            let minus = (Complex64::new(1.0, 0.0) - zeta) / 4.0;
            assert!((s[(SIGMA, SIGMA)] - plus).norm() < 1e-12);
            assert!((s[(SIGMA, SIGMA_T)] - minus).norm() < 1e-12);
            assert!((s[(SIGMA, SIGMA_P)] + plus).norm() < 1e-12);
            assert!((s[(SIGMA, SIGMA_TP)] + minus).norm() < 1e-12);
            assert!((s[(1, SIGMA)].re + 1.0 / 8f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn spinor_ladder_entries() {
        let r = 5;
        let s = orbifold_s(r).unwrap();
        for l in 1..r as usize {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert!((s[(2, 7 + l)].re - sign / (2.0 * r as f64).sqrt()).abs() < 1e-12);
        }
    }
}
