use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bundle::FixedPointBundle;
use super::center::Center;
use crate::abelian::Phase;
use crate::error::{Error, Result};
use crate::modular::{CMatrix, ModularSource};

pub const BUNDLE_SCHEMA: &str = "fp-bundle v1";

/// On-disk form of a [`FixedPointBundle`]. Fields are referred to by id.
///
/// `F` maps `"a,K"` (fixed field and current field) to the exponent
/// `r/n` of the twist `F(a, K, J)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleFile {
    pub schema: String,
    pub current: usize,
    #[serde(default)]
    pub current_label: String,
    pub fixed_fields: Vec<usize>,
    #[serde(rename = "S_J")]
    pub s_j: Vec<Vec<[f64; 2]>>,
    pub eta: Vec<[f64; 2]>,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, Phase>,
}

impl BundleFile {
    pub fn from_bundle(md: &dyn ModularSource, center: &Center, b: &FixedPointBundle) -> Self {
        let m = b.len();
        let cplx = |z: Complex64| [z.re, z.im];
        BundleFile {
            schema: BUNDLE_SCHEMA.into(),
            current: center.field(b.current()),
            current_label: md.label(center.field(b.current())),
            fixed_fields: b.fixed().to_vec(),
            s_j: (0..m)
                .map(|i| (0..m).map(|j| cplx(b.s_matrix()[(i, j)])).collect())
                .collect(),
            eta: b.etas().iter().map(|&z| cplx(z)).collect(),
            f: b.twists()
                .iter()
                .map(|(&(a, k), &p)| (format!("{a},{}", center.field(k)), p))
                .collect(),
        }
    }

    /// Rebuilds the bundle and checks the stored `η` and `F` against the
    /// values derived from `S_J`.
    pub fn to_bundle(&self, md: &dyn ModularSource, center: &Center, tol: f64) -> Result<FixedPointBundle> {
        if self.schema != BUNDLE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {BUNDLE_SCHEMA:?}, got {:?}",
                self.schema
            )));
        }
        let e = center
            .element_of_field(self.current)
            .ok_or_else(|| Error::MalformedBundle(format!("field {} is not a simple current", self.current)))?;
        let m = self.fixed_fields.len();
        if self.s_j.len() != m || self.s_j.iter().any(|r| r.len() != m) || self.eta.len() != m {
            return Err(Error::Schema("S_J and eta must match fixed_fields".into()));
        }
        let s = CMatrix::from_fn(m, m, |i, j| Complex64::new(self.s_j[i][j][0], self.s_j[i][j][1]));
        let b = FixedPointBundle::new(md, center, e, self.fixed_fields.clone(), s)?;
        for (i, (&have, want)) in b.etas().iter().zip(&self.eta).enumerate() {
            if (have - Complex64::new(want[0], want[1])).norm() > tol {
                return Err(Error::MalformedBundle(format!(
                    "stored eta for field {} disagrees with S_J",
                    self.fixed_fields[i]
                )));
            }
        }
        for (key, &p) in &self.f {
            let (a, k) = parse_key(key)?;
            let ke = center
                .element_of_field(k)
                .ok_or_else(|| Error::MalformedBundle(format!("{k} is not a simple current")))?;
            if b.twist(a, ke) != Some(p) {
                return Err(Error::TwistTable(format!(
                    "stored twist F({a},{k}) = {p} disagrees with S_J"
                )));
            }
        }
        Ok(b)
    }
}

fn parse_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Schema(format!("bad twist key {key:?}"));
    let (a, k) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        k.trim().parse().map_err(|_| bad())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::solve_1x1_bundle;
    use crate::modular::Tolerances;
    use crate::wzw::su2;

    #[test]
    fn round_trip() {
        let md = su2(4).unwrap();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        let b = solve_1x1_bundle(&md, &c, 1).unwrap();
        let f = BundleFile::from_bundle(&md, &c, &b);
        let text = serde_json::to_string(&f).unwrap();
        let back: BundleFile = serde_json::from_str(&text).unwrap();
        let b2 = back.to_bundle(&md, &c, 1e-8).unwrap();
        assert_eq!(b2.s_matrix(), b.s_matrix());

        let mut wrong = back.clone();
        wrong.f.insert("2,4".into(), Phase::from_fraction(1, 2));
        assert!(wrong.to_bundle(&md, &c, 1e-8).is_err());
    }
}
