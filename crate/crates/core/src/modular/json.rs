use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{CMatrix, ModularData, ModularSource, Rational, Tolerances};
use crate::abelian::{format_rational, parse_rational};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "modular-data v1";

/// On-disk form of [`ModularData`].
///
/// `sha256` covers the serialization of every other field and is checked
/// on load when present.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularDataFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
    pub labels: Vec<String>,
    pub h: Vec<String>,
    pub c: String,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    pub conjugation: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

impl ModularDataFile {
    pub fn from_data(md: &ModularData, provenance: Option<Value>) -> Self {
        let n = md.len();
        let mut f = ModularDataFile {
            schema: SCHEMA.into(),
            provenance,
            labels: md.labels().to_vec(),
            h: md.weights().iter().map(format_rational).collect(),
            c: format_rational(&md.central_charge()),
            s: (0..n)
                .map(|a| (0..n).map(|b| [md.s(a, b).re, md.s(a, b).im]).collect())
                .collect(),
            conjugation: md.conjugation().to_vec(),
            sha256: None,
        };
        f.sha256 = Some(f.digest());
        f
    }

    fn digest(&self) -> String {
        let mut copy = self.clone();
        copy.sha256 = None;
        let bytes = serde_json::to_vec(&copy).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn to_data(&self, tol: &Tolerances) -> Result<ModularData> {
        if self.schema != SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {SCHEMA:?}, got {:?}",
                self.schema
            )));
        }
        if let Some(h) = &self.sha256 {
            if *h != self.digest() {
                return Err(Error::Schema("integrity hash mismatch".into()));
            }
        }
        let n = self.labels.len();
        let parse = |s: &str| -> Result<Rational> { parse_rational(s).map_err(Error::Schema) };
        let h = self.h.iter().map(|x| parse(x)).collect::<Result<Vec<_>>>()?;
        let c = parse(&self.c)?;
        if self.s.len() != n || self.s.iter().any(|r| r.len() != n) {
            return Err(Error::Schema("S is not a square matrix over the labels".into()));
        }
        let s = CMatrix::from_fn(n, n, |a, b| {
            let [re, im] = self.s[a][b];
            num_complex::Complex64::new(re, im)
        });
        let md = ModularData::new(self.labels.clone(), h, c, s, self.conjugation.clone())
            .map_err(|e| Error::Schema(e.to_string()))?;
        md.validate(tol)?;
        Ok(md)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl ModularData {
    pub fn to_json(&self) -> String {
        ModularDataFile::from_data(self, None).to_string_pretty()
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<ModularData> {
        let f: ModularDataFile = serde_json::from_str(text)?;
        f.to_data(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper_detection() {
        let md = ModularData::trivial();
        let text = md.to_json();
        let back = ModularData::from_json(&text, &Tolerances::default()).unwrap();
        assert_eq!(back, md);
        let tampered = text.replace("\"0\"", "\"1/2\"");
        assert!(ModularData::from_json(&tampered, &Tolerances::default()).is_err());
    }
}
