//! JSON and CSV artifacts.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::Mipf;
use crate::numerics::{fmt_rational, parse_rational, CMatrix, Tolerance};
use crate::spectra::{ModularData, TheoryId};

/// On-disk form of [`ModularData`]; field order follows the primaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularDataFile {
    pub theory: String,
    pub labels: Vec<String>,
    pub c: String,
    pub h: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    // -0.0 would make otherwise identical artifacts differ byte-wise
    [z.re + 0.0, z.im + 0.0]
}

impl From<&ModularData> for ModularDataFile {
    fn from(md: &ModularData) -> Self {
        ModularDataFile {
            theory: md.theory.map_or_else(|| md.name.clone(), |t| t.to_string()),
            labels: md.labels.clone(),
            c: fmt_rational(&md.c),
            h: md.h.iter().map(fmt_rational).collect(),
            s: md.s.to_rows().into_iter().map(|row| row.into_iter().map(pair).collect()).collect(),
            t: md.t.iter().map(|&z| pair(z)).collect(),
        }
    }
}

impl ModularDataFile {
    /// Rebuilds and re-checks the modular data; `T` is recomputed from `h` and `c`.
    pub fn into_modular_data(self, tol: Tolerance) -> Result<ModularData> {
        let theory = self.theory.parse::<TheoryId>().ok();
        let n = self.labels.len();
        if self.s.len() != n || self.s.iter().any(|r| r.len() != n) || self.h.len() != n {
            return Err(Error::Dimension(format!("{n} labels but S or h of another size")));
        }
        let s = CMatrix::from_fn(n, n, |i, j| Complex64::new(self.s[i][j][0], self.s[i][j][1]));
        let h = self.h.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>()?;
        let c = parse_rational(&self.c)?;
        ModularData::new(theory, self.theory, self.labels, s, h, c, tol)
    }
}

pub fn modular_data_json(md: &ModularData) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ModularDataFile::from(md))? + "\n")
}

pub fn read_modular_data(path: &Path, tol: Tolerance) -> Result<ModularData> {
    let file: ModularDataFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    file.into_modular_data(tol)
}

pub fn read_mipf(path: &Path) -> Result<Mipf> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => Ok(fs::write(p, text)?),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_deviation;
    use crate::spectra::modular_data;

    #[test]
    fn modular_data_roundtrip() {
        let md = modular_data(TheoryId::AffineD2(5)).unwrap();
        let text = modular_data_json(&md).unwrap();
        let file: ModularDataFile = serde_json::from_str(&text).unwrap();
        let back = file.into_modular_data(Tolerance::default()).unwrap();
        assert_eq!(back.theory, md.theory);
        assert_eq!(back.h, md.h);
        assert!(max_abs_deviation(&back.s, &md.s).unwrap() < 1e-15);
        assert!(text.starts_with("{\n  \"theory\": \"D2:5\""));
    }
}
