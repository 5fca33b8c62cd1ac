//! Truncated q-series, `c = 1` characters and partition-function spectra.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::Mipf;
use crate::numerics::{fmt_rational, rat, Rational};
use crate::spectra::{orbifold_labels, ModularData, OrbLabel, TheoryId};

/// `q^lead · Σ_k c_k q^{k/den}`, exact for `k < coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    pub lead: Rational,
    pub den: u32,
    pub coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(lead: Rational, den: u32, coeffs: Vec<Rational>) -> Self {
        QSeries { lead, den, coeffs }
    }

    pub fn from_ints(lead: Rational, den: u32, coeffs: &[i64]) -> Self {
        Self::new(lead, den, coeffs.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    /// First exponent not covered by the truncation.
    pub fn end(&self) -> Rational {
        self.lead + rat(self.coeffs.len() as i64, self.den as i64)
    }

    pub fn exponent(&self, k: usize) -> Rational {
        self.lead + rat(k as i64, self.den as i64)
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.exponent(k), *c))
    }

    /// Coefficient of `q^exponent`, or `None` outside the truncation.
    pub fn coeff_at(&self, exponent: Rational) -> Option<Rational> {
        if exponent >= self.end() {
            return None;
        }
        if exponent < self.lead {
            return Some(Rational::zero());
        }
        let k = (exponent - self.lead) * Rational::from_integer(self.den as i64);
        if !k.is_integer() {
            return Some(Rational::zero());
        }
        self.coeffs.get(k.to_integer() as usize).copied()
    }

    /// Same series on the finer grid `den`.
    pub fn regrid(&self, den: u32) -> Result<QSeries> {
        if den % self.den != 0 {
            return Err(Error::Dimension(format!("grid 1/{} does not refine 1/{}", den, self.den)));
        }
        let f = (den / self.den) as usize;
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * f + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * f] = *c;
        }
        // the truncation point stays where it was
        coeffs.resize(self.coeffs.len() * f, Rational::zero());
        Ok(QSeries::new(self.lead, den, coeffs))
    }

    fn common(&self, other: &QSeries) -> Result<(QSeries, QSeries)> {
        let den = self.den.lcm(&other.den);
        Ok((self.regrid(den)?, other.regrid(den)?))
    }

    pub fn scale(&self, k: Rational) -> QSeries {
        QSeries::new(self.lead, self.den, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        let (a, b) = self.common(other)?;
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut c = vec![Rational::zero(); len];
        for (i, x) in a.coeffs.iter().take(len).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                c[i + j] += x * y;
            }
        }
        Ok(QSeries::new(a.lead + b.lead, a.den, c))
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        let (a, b) = self.common(other)?;
        let lead = a.lead.min(b.lead);
        let end = a.end().min(b.end());
        let den = Rational::from_integer(a.den as i64);
        for s in [&a, &b] {
            if !((s.lead - lead) * den).is_integer() {
                return Err(Error::Dimension(format!(
                    "exponents {} and {} are incommensurate on grid 1/{}",
                    fmt_rational(&a.lead),
                    fmt_rational(&b.lead),
                    a.den
                )));
            }
        }
        let len = ((end - lead) * den).to_integer().max(0) as usize;
        let mut c = vec![Rational::zero(); len];
        for s in [&a, &b] {
            let off = ((s.lead - lead) * den).to_integer() as usize;
            for (k, x) in s.coeffs.iter().enumerate() {
                if off + k < len {
                    c[off + k] += x;
                }
            }
        }
        Ok(QSeries::new(lead, a.den, c))
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.add(&other.scale(-Rational::one()))
    }

    /// Drops leading zero coefficients.
    pub fn strip(&self) -> QSeries {
        let k = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        QSeries::new(self.exponent(k), self.den, self.coeffs[k..].to_vec())
    }

    fn truncated(&self, len: usize) -> QSeries {
        let mut s = self.clone();
        s.coeffs.truncate(len);
        s
    }

    pub fn inverse(&self) -> Result<QSeries> {
        let c0 = *self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Dimension("inverse of a series with zero leading term".into()))?;
        let n = self.coeffs.len();
        let mut b = vec![Rational::zero(); n];
        b[0] = c0.recip();
        for k in 1..n {
            let s: Rational = (1..=k).map(|i| self.coeffs[i] * b[k - i]).sum();
            b[k] = -s / c0;
        }
        Ok(QSeries::new(-self.lead, self.den, b))
    }

    /// Square root by Newton iteration, branch fixed by a positive leading
    /// coefficient.
    pub fn sqrt(&self) -> Result<QSeries> {
        let c0 = *self
            .coeffs
            .first()
            .filter(|c| c.is_positive())
            .ok_or_else(|| Error::Dimension("square root needs a positive leading term".into()))?;
        let root = rational_sqrt(c0)
            .ok_or_else(|| Error::Dimension(format!("{} is not a rational square", fmt_rational(&c0))))?;
        let n = self.coeffs.len();
        let x = QSeries::new(Rational::zero(), self.den, self.coeffs.iter().map(|c| c / c0).collect());
        let mut y = QSeries::from_ints(Rational::zero(), self.den, &[1]);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let yp = QSeries::new(Rational::zero(), self.den, {
                let mut v = y.coeffs.clone();
                v.resize(prec, Rational::zero());
                v
            });
            let q = x.truncated(prec).mul(&yp.inverse()?)?;
            y = yp.add(&q)?.scale(rat(1, 2)).truncated(prec);
        }
        Ok(QSeries::new(self.lead / 2, self.den, y.coeffs.iter().map(|c| c * root).collect()))
    }

    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }
}

fn rational_sqrt(x: Rational) -> Option<Rational> {
    let isqrt = |n: i64| -> Option<i64> {
        let r = (n as f64).sqrt().round() as i64;
        (r * r == n).then_some(r)
    };
    Some(rat(isqrt(*x.numer())?, isqrt(*x.denom())?))
}

/// `Π_{n≥1} (1 + sign·q^{(n - shift)})^power` on grid `1/den`, `len` terms.
fn product(den: u32, len: usize, shift: Rational, sign: i64, power: u32) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); len];
    c[0] = Rational::one();
    let d = Rational::from_integer(den as i64);
    for n in 1.. {
        let e = ((Rational::from_integer(n) - shift) * d).to_integer() as usize;
        if e >= len {
            break;
        }
        for _ in 0..power {
            for k in (e..len).rev() {
                let v = c[k - e] * Rational::from_integer(sign);
                c[k] += v;
            }
        }
    }
    c
}

fn len_for(order: u32, den: u32) -> usize {
    (order * den) as usize + 1
}

/// `η = q^{1/24} Π (1-qⁿ)` to relative order `order`.
pub fn eta(order: u32) -> QSeries {
    let len = len_for(order, 1);
    QSeries::new(rat(1, 24), 1, product(1, len, Rational::zero(), -1, 1))
}

/// Jacobi θ₂, θ₃, θ₄ in product form.
pub fn theta(k: u32, order: u32) -> Result<QSeries> {
    let len = len_for(order, 2);
    let euler = product(2, len, Rational::zero(), -1, 1);
    let e = QSeries::new(Rational::zero(), 2, euler);
    let (lead, extra, scale) = match k {
        2 => (rat(1, 8), product(2, len, Rational::zero(), 1, 2), 2),
        3 => (Rational::zero(), product(2, len, rat(1, 2), 1, 2), 1),
        4 => (Rational::zero(), product(2, len, rat(1, 2), -1, 2), 1),
        _ => return Err(Error::Parse(format!("theta index {k} not in 2..4"))),
    };
    let s = e.mul(&QSeries::new(Rational::zero(), 2, extra))?;
    Ok(QSeries::new(lead, 2, s.coeffs).scale(Rational::from_integer(scale)))
}

/// θ₂, θ₃, θ₄ from their lattice sums `Σ q^{n²/2}` (shifted or signed).
pub fn theta_sum(k: u32, order: u32) -> Result<QSeries> {
    let len = len_for(order, 2);
    let (lead, shift) = match k {
        2 => (rat(1, 8), rat(1, 2)),
        3 | 4 => (Rational::zero(), Rational::zero()),
        _ => return Err(Error::Parse(format!("theta index {k} not in 2..4"))),
    };
    let mut c = vec![Rational::zero(); len];
    let bound = (order as i64 + 2) * 2;
    for n in -bound..=bound {
        let x = Rational::from_integer(n) + shift;
        let e = (x * x / 2 - lead) * 2;
        let idx = e.to_integer() as usize;
        if idx < len {
            let sign = if k == 4 && n.is_odd() { -1 } else { 1 };
            c[idx] += Rational::from_integer(sign);
        }
    }
    Ok(QSeries::new(lead, 2, c))
}

/// `√(2η/θ₂)`, `√(η/θ₄)`, `√(η/θ₃)` by Newton square roots of the quotients.
pub fn twisted_roots(order: u32) -> Result<[QSeries; 3]> {
    let e = eta(order + 1);
    let quotient = |k: u32, factor: i64| -> Result<QSeries> {
        let th = theta(k, order + 1)?.strip();
        e.scale(Rational::from_integer(factor)).mul(&th.inverse()?)?.sqrt()
    };
    Ok([quotient(2, 2)?, quotient(4, 1)?, quotient(3, 1)?])
}

/// `(1/η) Σ_n q^{(j+2rn)²/4r}`.
pub fn circle_character(r: u32, j: u32, order: u32) -> Result<QSeries> {
    if r == 0 || j >= 2 * r {
        return Err(Error::InvalidRep {
            algebra: format!("u1:{r}"),
            rep: j.to_string(),
        });
    }
    let r = r as i64;
    let j0 = (j as i64).min(2 * r - j as i64);
    let lead = rat(j0 * j0, 4 * r);
    let len = len_for(order + 1, 1);
    let mut c = vec![Rational::zero(); len];
    let bound = order as i64 + 2;
    for n in -bound..=bound {
        let m = j0 + 2 * r * n;
        let e = rat(m * m, 4 * r) - lead;
        let idx = e.to_integer() as usize;
        if idx < len {
            c[idx] += Rational::one();
        }
    }
    let theta = QSeries::new(lead, 1, c);
    theta.mul(&eta(order + 1).inverse()?).map(|s| s.truncated(len_for(order, 1)))
}

/// Orbifold characters in canonical order.
pub fn orbifold_characters(r: u32, order: u32) -> Result<Vec<QSeries>> {
    let [root2, root4, root3] = twisted_roots(order + 1)?;
    let half = rat(1, 2);
    let lam = |l: u32| circle_character(r, l, order + 1);
    let lam0 = lam(0)?;
    let lamr = lam(r)?;
    let mut out = Vec::new();
    for label in orbifold_labels(r) {
        let s = match label {
            OrbLabel::Zero => lam0.add(&root2)?.scale(half),
            OrbLabel::V => lam0.sub(&root2)?.scale(half),
            OrbLabel::S | OrbLabel::C => lamr.scale(half),
            OrbLabel::Sigma | OrbLabel::SigmaT => root4.add(&root3)?.scale(half),
            OrbLabel::SigmaP | OrbLabel::SigmaTP => root4.sub(&root3)?.scale(half),
            OrbLabel::L(l) => lam(l)?,
        };
        out.push(s.strip());
    }
    Ok(out)
}

/// Characters of a `c = 1` theory in canonical order.
pub fn characters(t: TheoryId, order: u32) -> Result<Vec<QSeries>> {
    match t {
        TheoryId::CircleU1(r) => (0..2 * r).map(|j| circle_character(r, j, order)).collect(),
        TheoryId::OrbifoldC1(r) => orbifold_characters(r, order),
        _ => Err(Error::NoCharacters(t.to_string())),
    }
}

/// Multiset of `(h_L, h_R)` with `h_L + h_R ≤ cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSpectrum {
    pub cutoff: Rational,
    pub entries: BTreeMap<(Rational, Rational), u64>,
}

impl ZSpectrum {
    fn from_weighted(cutoff: Rational, acc: BTreeMap<(Rational, Rational), Rational>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for ((hl, hr), m) in acc {
            if m.is_zero() {
                continue;
            }
            if !m.is_integer() || m.is_negative() {
                return Err(Error::Invariant {
                    relation: format!(
                        "multiplicity of ({}, {}) is a non-negative integer",
                        fmt_rational(&hl),
                        fmt_rational(&hr)
                    ),
                    residual: (m - m.round()).abs().to_integer() as f64,
                    eps: 0.0,
                });
            }
            entries.insert((hl, hr), m.to_integer() as u64);
        }
        Ok(ZSpectrum { cutoff, entries })
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["h_L", "h_R", "multiplicity"])?;
        for ((hl, hr), m) in &self.entries {
            w.write_record([fmt_rational(hl), fmt_rational(hr), m.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn accumulate(
    acc: &mut BTreeMap<(Rational, Rational), Rational>,
    left: &QSeries,
    right: &QSeries,
    weight: Rational,
    shift: Rational,
    cutoff: Rational,
) {
    for (el, cl) in left.terms() {
        let hl = el + shift;
        if hl > cutoff {
            continue;
        }
        for (er, cr) in right.terms() {
            let hr = er + shift;
            if hl + hr <= cutoff {
                *acc.entry((hl, hr)).or_insert_with(Rational::zero) += weight * cl * cr;
            }
        }
    }
}

/// `Σ M_ij χ_i(q) χ̄_j(q̄)` collected to `h_L + h_R ≤ cutoff`.
pub fn z_from_mipf(md: &ModularData, m: &Mipf, cutoff: u32) -> Result<ZSpectrum> {
    let t = md.theory.ok_or_else(|| Error::NoCharacters(md.name.clone()))?;
    if !t.has_characters() {
        return Err(Error::NoCharacters(t.to_string()));
    }
    if m.size() != md.len() {
        return Err(Error::Dimension(format!("{}x{} invariant for {} primaries", m.size(), m.size(), md.len())));
    }
    let chars = characters(t, cutoff + 1)?;
    let shift = md.c / 24;
    let cut = Rational::from_integer(cutoff as i64);
    let mut acc = BTreeMap::new();
    for (i, row) in m.m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0 {
                accumulate(&mut acc, &chars[i], &chars[j], Rational::from_integer(v as i64), shift, cut);
            }
        }
    }
    ZSpectrum::from_weighted(cut, acc)
}

fn partitions(n: usize) -> Vec<u64> {
    let euler = QSeries::new(Rational::zero(), 1, product(1, n + 1, Rational::zero(), -1, 1));
    euler
        .inverse()
        .expect("unit leading term")
        .coeffs
        .iter()
        .map(|c| c.to_integer() as u64)
        .collect()
}

fn circle_weighted(p: i64, q: i64, cutoff: u32) -> Result<BTreeMap<(Rational, Rational), Rational>> {
    if p <= 0 || q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let cut = Rational::from_integer(cutoff as i64);
    let part = partitions(cutoff as usize);
    let mmax = ((2 * p * cutoff as i64) as f64 / q as f64).sqrt().ceil() as i64 + 1;
    let wmax = ((2 * q * cutoff as i64) as f64 / p as f64).sqrt().ceil() as i64 + 1;
    let mut acc = BTreeMap::new();
    for m in -mmax..=mmax {
        for w in -wmax..=wmax {
            let base = rat(m * m * q, 4 * p) + rat(w * w * p, 4 * q);
            let hl0 = base + rat(m * w, 2);
            let hr0 = base - rat(m * w, 2);
            if hl0 + hr0 > cut {
                continue;
            }
            for (nl, pl) in part.iter().enumerate() {
                for (nr, pr) in part.iter().enumerate() {
                    let hl = hl0 + Rational::from_integer(nl as i64);
                    let hr = hr0 + Rational::from_integer(nr as i64);
                    if hl + hr <= cut {
                        *acc.entry((hl, hr)).or_insert_with(Rational::zero) +=
                            Rational::from_integer((pl * pr) as i64);
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Momentum–winding spectrum of the circle at `R² = 2p/q`.
pub fn geometric_circle_spectrum(p: i64, q: i64, cutoff: u32) -> Result<ZSpectrum> {
    let acc = circle_weighted(p, q, cutoff)?;
    ZSpectrum::from_weighted(Rational::from_integer(cutoff as i64), acc)
}

/// `½ Z_circle + ½|√(2η/θ₂)|² + |√(η/θ₄)|² + |√(η/θ₃)|²` at `R² = 2p/q`.
pub fn geometric_orbifold_spectrum(p: i64, q: i64, cutoff: u32) -> Result<ZSpectrum> {
    let half = rat(1, 2);
    let mut acc: BTreeMap<_, _> = circle_weighted(p, q, cutoff)?
        .into_iter()
        .map(|(k, v)| (k, v * half))
        .collect();
    let [root2, root4, root3] = twisted_roots(cutoff + 1)?;
    let shift = rat(1, 24);
    let cut = Rational::from_integer(cutoff as i64);
    accumulate(&mut acc, &root2, &root2, half, shift, cut);
    accumulate(&mut acc, &root4, &root4, Rational::one(), shift, cut);
    accumulate(&mut acc, &root3, &root3, Rational::one(), shift, cut);
    ZSpectrum::from_weighted(cut, acc)
}
