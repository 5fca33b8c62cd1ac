//! Exact rationals, dense complex matrices and the shared tolerance policy.
//!
//! Every verification in the crate reports a max-abs-entry residual; the
//! boolean verdicts are derived from that residual and a [`Tolerance`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::Rational64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: Rational) -> Rational {
    x - x.floor()
}

/// `"p/q"`, or `"p"` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Global comparison threshold for floating point checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 1e-3 && eps.is_finite() {
            Ok(Tolerance(eps))
        } else {
            Err(Error::Tolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.0
    }

    pub fn accepts(&self, residual: f64) -> bool {
        residual <= self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::DEFAULT_EPS)
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<_> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Dimension("non-finite entry".into()));
        }
        Ok(CMatrix { rows: r, cols: c, data })
    }

    pub fn from_real(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.same_shape(other)?;
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Submatrix picking the given rows and columns in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    fn same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn pow(&self, k: u32) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut out = CMatrix::identity(self.rows);
        for _ in 0..k {
            out = mat_mul(&out, self)?;
        }
        Ok(out)
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if !self.is_square() || self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "solve {}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() < 1e-14 {
                return Err(Error::Dimension("singular system".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                for j in 0..m {
                    b.data.swap(pivot * m + j, col * m + j);
                }
            }
            let p = a[(col, col)];
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)] / p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] -= f * v;
                }
                for j in 0..m {
                    let v = b[(col, j)];
                    b[(i, j)] -= f * v;
                }
            }
        }
        for i in 0..n {
            let p = a[(i, i)];
            for j in 0..m {
                b[(i, j)] /= p;
            }
        }
        Ok(b)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn mat_mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "product {}x{} · {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = CMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += x * b.data[k * b.cols + j];
            }
        }
    }
    Ok(out)
}

/// Largest entrywise `|a - b|`.
pub fn max_abs_deviation(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    a.same_shape(b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Entrywise comparison; always returns the maximum deviation alongside the verdict.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: Tolerance) -> Result<(bool, f64)> {
    let dev = max_abs_deviation(a, b)?;
    Ok((tol.accepts(dev), dev))
}

/// Residuals of `a·a† = 1` and `a = aᵀ`.
pub fn unitary_symmetric_residuals(a: &CMatrix) -> Result<(f64, f64)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", a.rows, a.cols)));
    }
    let unit = max_abs_deviation(&mat_mul(a, &a.adjoint())?, &CMatrix::identity(a.rows))?;
    let sym = max_abs_deviation(a, &a.transpose())?;
    Ok((unit, sym))
}

pub fn is_unitary_symmetric(a: &CMatrix, tol: Tolerance) -> Result<bool> {
    let (u, s) = unitary_symmetric_residuals(a)?;
    Ok(tol.accepts(u) && tol.accepts(s))
}

/// If `a` is within `tol` of a permutation matrix, returns `p` with `a[i][p[i]] = 1`.
pub fn as_permutation(a: &CMatrix, tol: Tolerance) -> Option<(Vec<usize>, f64)> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows;
    let mut perm = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    let mut seen = vec![false; n];
    for i in 0..n {
        let j = (0..n).max_by(|&x, &y| a[(i, x)].norm().total_cmp(&a[(i, y)].norm()))?;
        if seen[j] {
            return None;
        }
        seen[j] = true;
        for k in 0..n {
            let target = if k == j { Complex64::one() } else { Complex64::zero() };
            worst = worst.max((a[(i, k)] - target).norm());
        }
        perm.push(j);
    }
    tol.accepts(worst).then_some((perm, worst))
}

/// `e^{2πi x}` for an exact rational `x`.
pub fn phase(x: Rational) -> Complex64 {
    let f = frac(x);
    let t = *f.numer() as f64 / *f.denom() as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_times_a() {
        let a = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64 - 1.0));
        let p = mat_mul(&CMatrix::identity(3), &a).unwrap();
        assert_eq!(max_abs_deviation(&p, &a).unwrap(), 0.0);
    }

    #[test]
    fn ones_times_ones() {
        let ones = CMatrix::from_real(2, 2, |_, _| 1.0);
        let p = mat_mul(&ones, &ones).unwrap();
        assert_eq!(p, CMatrix::from_real(2, 2, |_, _| 2.0));
    }

    #[test]
    fn product_shape_mismatch() {
        let a = CMatrix::zeros(2, 3);
        assert!(mat_mul(&a, &a).is_err());
    }

    #[test]
    fn approx_eq_reports_deviation() {
        let a = CMatrix::from_real(2, 2, |i, j| (i + 2 * j) as f64);
        assert_eq!(approx_eq(&a, &a, Tolerance::default()).unwrap(), (true, 0.0));
        let mut b = a.clone();
        b[(0, 0)] += c(1e-6);
        let (ok, dev) = approx_eq(&a, &b, Tolerance::default()).unwrap();
        assert!(!ok);
        assert!((dev - 1e-6).abs() < 1e-15);
        assert!(approx_eq(&a, &CMatrix::zeros(3, 2), Tolerance::default()).is_err());
    }

    #[test]
    fn unitary_symmetric_cases() {
        let tol = Tolerance::default();
        assert!(is_unitary_symmetric(&CMatrix::identity(1), tol).unwrap());
        let d = CMatrix::diagonal(&[c(1.0), c(2.0)]);
        assert!(!is_unitary_symmetric(&d, tol).unwrap());
        assert!(is_unitary_symmetric(&CMatrix::zeros(2, 3), tol).is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(1e-3).is_err());
        assert!(Tolerance::new(1e-8).is_ok());
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new((i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 }, i as f64 - j as f64)
        });
        let x = CMatrix::from_fn(3, 2, |i, j| Complex64::new(i as f64, j as f64));
        let b = mat_mul(&a, &x).unwrap();
        let y = a.solve(&b).unwrap();
        assert!(max_abs_deviation(&x, &y).unwrap() < 1e-12);
    }

    #[test]
    fn rationals_roundtrip() {
        for s in ["0", "-3/4", "17/16", "5"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(fmt_rational(&x), s);
        }
        assert_eq!(frac(rat(-1, 4)), rat(3, 4));
    }
}
