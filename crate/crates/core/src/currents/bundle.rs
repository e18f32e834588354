use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::center::Center;
use crate::abelian::Phase;
use crate::error::{Error, Result};
use crate::modular::{CMatrix, ModularSource};

/// Entries of `S^J` below this magnitude are treated as zero when reading
/// off twists.
pub const NONZERO: f64 = 1e-6;

/// The fixed-point resolution matrix `S^J` of one current together with
/// the data derived from it: `η^J` and the twists `F(a, K, J)` for `K` in
/// the full stabilizer of each fixed field.
#[derive(Clone, Debug)]
pub struct FixedPointBundle {
    current: usize,
    fixed: Vec<usize>,
    index: HashMap<usize, usize>,
    s: CMatrix,
    eta: Vec<Complex64>,
    twists: BTreeMap<(usize, usize), Phase>,
}

impl FixedPointBundle {
    /// `current` is a center element id, `fixed` the fields it fixes in
    /// ascending order and `s` the matrix on them.
    pub fn new(md: &dyn ModularSource, center: &Center, current: usize, fixed: Vec<usize>, s: CMatrix) -> Result<Self> {
        if current == 0 || current >= center.order() {
            return Err(Error::MalformedBundle(format!("{current} is not a nontrivial current")));
        }
        let expected: Vec<usize> = (0..md.len()).filter(|&a| center.act(current, a) == a).collect();
        if fixed != expected {
            return Err(Error::MalformedBundle(format!(
                "fixed-field list of {} does not match its fixed points",
                md.label(center.field(current))
            )));
        }
        let m = fixed.len();
        if s.nrows() != m || s.ncols() != m {
            return Err(Error::MalformedBundle("matrix size does not match fixed fields".into()));
        }
        let index: HashMap<usize, usize> = fixed.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let s2 = &s * &s;
        let eta = fixed
            .iter()
            .enumerate()
            .map(|(i, &a)| s2[(i, index[&md.conj(a)])])
            .collect();
        let mut out = FixedPointBundle {
            current,
            fixed,
            index,
            s,
            eta,
            twists: BTreeMap::new(),
        };
        out.twists = out.extract_twists(md, center)?;
        Ok(out)
    }

    /// `F(a, K, J) = exp(−2πi Q_K(b))` for any `b` with `S^J_{ab} ≠ 0`,
    /// which is condition {4} specialised to `Ka = a`. All such `b` must
    /// agree exactly.
    fn extract_twists(&self, md: &dyn ModularSource, center: &Center) -> Result<BTreeMap<(usize, usize), Phase>> {
        let mut out = BTreeMap::new();
        for (i, &a) in self.fixed.iter().enumerate() {
            let support: Vec<usize> = (0..self.fixed.len())
                .filter(|&j| self.s[(i, j)].norm() > NONZERO)
                .map(|j| self.fixed[j])
                .collect();
            if support.is_empty() {
                return Err(Error::MalformedBundle(format!("row of {} vanishes", md.label(a))));
            }
            for &k in center.stabilizer(a).members() {
                let f = center.charge(md, k, support[0]).conj();
                if let Some(&b) = support.iter().find(|&&b| center.charge(md, k, b).conj() != f) {
                    return Err(Error::MalformedBundle(format!(
                        "twist of {} by {} differs between columns {} and {}",
                        md.label(a),
                        md.label(center.field(k)),
                        md.label(support[0]),
                        md.label(b)
                    )));
                }
                out.insert((a, k), f);
            }
        }
        Ok(out)
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn fixed(&self) -> &[usize] {
        &self.fixed
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn position(&self, a: usize) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub fn s_matrix(&self) -> &CMatrix {
        &self.s
    }

    /// `S^J_{ab}`, zero when either field is not fixed.
    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.s[(i, j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `η^J_a` from `(S^J)²_{a, C(a)}`.
    pub fn eta(&self, a: usize) -> Option<Complex64> {
        self.position(a).map(|i| self.eta[i])
    }

    pub fn etas(&self) -> &[Complex64] {
        &self.eta
    }

    /// `F(a, K, J)` for `K` in the full stabilizer of `a`.
    pub fn twist(&self, a: usize, k: usize) -> Option<Phase> {
        self.twists.get(&(a, k)).copied()
    }

    pub fn twists(&self) -> &BTreeMap<(usize, usize), Phase> {
        &self.twists
    }

    /// Ratio `S^J_{Ka,b} exp(−2πi Q_K(b)) / S^J_{ab}` averaged over columns
    /// with nonzero `S^J_{ab}`, and the spread of the individual values.
    ///
    /// For `Ka ≠ a` the value depends on how fields on the orbit are
    /// labelled, so it is only meaningful for checking condition {4}.
    pub fn twist_ratio(&self, md: &dyn ModularSource, center: &Center, a: usize, k: usize) -> Option<(Complex64, f64)> {
        let i = self.position(a)?;
        let ka = self.position(center.act(k, a))?;
        let vals: Vec<Complex64> = (0..self.fixed.len())
            .filter(|&j| self.s[(i, j)].norm() > NONZERO)
            .map(|j| {
                let q = center.charge(md, k, self.fixed[j]).conj().to_complex();
                self.s[(ka, j)] * q / self.s[(i, j)]
            })
            .collect();
        if vals.is_empty() {
            return None;
        }
        let mean = vals.iter().sum::<Complex64>() / vals.len() as f64;
        let spread = vals.iter().fold(0.0f64, |m, v| m.max((v - mean).norm()));
        Some((mean, spread))
    }
}

/// The unique `S^J` of a current with a single, self-conjugate fixed
/// field `a`: condition {3} with `T^J = T_a` forces `S^J = T_a^{−3}`.
pub fn solve_1x1_bundle(md: &dyn ModularSource, center: &Center, current: usize) -> Result<FixedPointBundle> {
    let fixed: Vec<usize> = (0..md.len()).filter(|&a| center.act(current, a) == a).collect();
    if fixed.len() != 1 {
        return Err(Error::NotApplicable(format!(
            "current {} has {} fixed points",
            md.label(center.field(current)),
            fixed.len()
        )));
    }
    let a = fixed[0];
    if md.conj(a) != a {
        return Err(Error::NotApplicable(format!(
            "fixed point {} is not self-conjugate",
            md.label(a)
        )));
    }
    let s = md.t_exponent(a).pow(-3).to_complex();
    FixedPointBundle::new(md, center, current, fixed, CMatrix::from_element(1, 1, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Tolerances;
    use crate::wzw::{ising, su2};

    #[test]
    fn su2_level4() {
        let md = su2(4).unwrap();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        let b = solve_1x1_bundle(&md, &c, 1).unwrap();
        assert!((b.entry(2, 2) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((b.eta(2).unwrap() + 1.0).norm() < 1e-15);
        assert_eq!(b.twist(2, 1), Some(Phase::ONE));
        assert_eq!(b.twist(2, 0), Some(Phase::ONE));
    }

    #[test]
    fn su2_level2_and_ising() {
        let md = su2(2).unwrap();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        let b = solve_1x1_bundle(&md, &c, 1).unwrap();
        let want = Phase::from_fraction(-3, 8).to_complex();
        assert!((b.entry(1, 1) - want).norm() < 1e-15);
        assert_eq!(b.twist(1, 1), Some(Phase::from_fraction(1, 2)));

        let md = ising();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        let b = solve_1x1_bundle(&md, &c, 1).unwrap();
        assert_eq!(b.twist(2, 1), Some(Phase::from_fraction(1, 2)));
        assert!((b.eta(2).unwrap() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn wrong_fixed_list_rejected() {
        let md = su2(4).unwrap();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        let s = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        assert!(FixedPointBundle::new(&md, &c, 1, vec![1], s).is_err());
    }
}
