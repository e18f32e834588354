use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact root of unity `exp(2πi q)` with `q` a rational in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub const ONE: Phase = Phase(Ratio::new_raw(0, 1));

    pub fn new(q: Ratio<i64>) -> Phase {
        Phase(frac(q))
    }

    pub fn from_fraction(num: i64, den: i64) -> Phase {
        assert!(den != 0, "zero denominator");
        Phase::new(Ratio::new(num, den))
    }

    /// The sign `(-1)^k` as a phase.
    pub fn sign(negative: bool) -> Phase {
        if negative {
            Phase::from_fraction(1, 2)
        } else {
            Phase::ONE
        }
    }

    /// The exponent `q` in `[0, 1)`.
    pub fn exponent(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order of the phase.
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn conj(&self) -> Phase {
        Phase::new(-self.0)
    }

    pub fn pow(&self, k: i64) -> Phase {
        let q = self.0;
        let num = (*q.numer() as i128 * k as i128).rem_euclid(*q.denom() as i128);
        Phase::new(Ratio::new(num as i64, *q.denom()))
    }

    /// The root `exp(2πi q / n)` with `q` the stored exponent in `[0,1)`,
    /// i.e. argument in `[0, 2π)` divided by `n`.
    pub fn principal_root(&self, n: u64) -> Phase {
        assert!(n > 0);
        Phase::new(self.0 / Ratio::from_integer(n as i64))
    }

    pub fn to_complex(&self) -> Complex64 {
        let q = self.0;
        // Exact values on the quarter circle keep real data real.
        match (*q.numer(), *q.denom()) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (n, d) => {
                let angle = 2.0 * std::f64::consts::PI * (n as f64) / (d as f64);
                Complex64::new(angle.cos(), angle.sin())
            }
        }
    }

    /// Snap a unimodular complex number to the nearest `den`-th root of unity.
    /// Returns `None` when the distance to that root exceeds `tol`.
    pub fn snap(z: Complex64, den: u64, tol: f64) -> Option<Phase> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let turns = z.arg() / (2.0 * std::f64::consts::PI);
        let k = (turns * den as f64).round() as i64;
        let p = Phase::from_fraction(k, den as i64);
        if (p.to_complex() - z).norm() > tol {
            return None;
        }
        Some(p)
    }
}

fn frac(q: Ratio<i64>) -> Ratio<i64> {
    let d = *q.denom();
    let n = q.numer().mod_floor(&d);
    Ratio::new(n, d)
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

// Phases multiply by adding exponents.
impl Mul for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl Div for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Phase) -> Phase {
        Phase::new(self.0 - rhs.0)
    }
}

impl std::iter::Product for Phase {
    fn product<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ONE, |a, b| a * b)
    }
}

impl fmt::Display for Phase {
    /// Written as the exponent `r/n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Phase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let q = parse_rational(s)?;
        Ok(Phase::new(q))
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad rational {s:?}"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(n, d))
}

pub fn format_rational(q: &Ratio<i64>) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
