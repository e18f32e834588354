//! Modular data `(S, T, C)` of a rational CFT and the standard operations
//! on it: T phases, conjugation, Verlinde fusion, checks, tensor products.

mod fusion;
mod json;
mod relabel;
mod tensor;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::abelian::Phase;
use crate::error::{invalid, Error, Result};

pub use fusion::{fusion_scan, verlinde_fusion, verlinde_rows, FusionRows, FusionScan, FusionTensor};
pub use json::{ModularDataFile, SCHEMA as MODULAR_DATA_SCHEMA};
pub use relabel::find_relabeling;
pub use tensor::TensorTheory;

pub type Rational = Ratio<i64>;
pub type CMatrix = DMatrix<Complex64>;

/// Numerical tolerances used by checks throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Matrix identities such as unitarity and `(ST)³ = S²`.
    pub matrix: f64,
    /// Rounding of fusion coefficients and of `S²` to a permutation.
    pub integer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            matrix: 1e-9,
            integer: 1e-6,
        }
    }
}

/// Read access to modular data, possibly computed lazily.
pub trait ModularSource: Send + Sync {
    fn len(&self) -> usize;
    fn s(&self, a: usize, b: usize) -> Complex64;
    fn h(&self, a: usize) -> Rational;
    fn central_charge(&self) -> Rational;
    fn conj(&self, a: usize) -> usize;
    fn label(&self, a: usize) -> String;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `T_a = exp(2πi (h_a − c/24))` as an exact phase.
    fn t_exponent(&self, a: usize) -> Phase {
        Phase::new(self.h(a) - self.central_charge() / 24)
    }

    fn t_phase(&self, a: usize) -> Complex64 {
        self.t_exponent(a).to_complex()
    }

    /// Field id with the given label, if any.
    fn find_label(&self, label: &str) -> Option<usize> {
        (0..self.len()).find(|&a| self.label(a) == label)
    }
}

/// Dense modular data.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    labels: Vec<String>,
    h: Vec<Rational>,
    c: Rational,
    s: CMatrix,
    conjugation: Vec<usize>,
}

/// Largest deviations from the modular relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct ModularReport {
    pub symmetry: f64,
    pub unitarity: f64,
    /// `|S² − C|`
    pub conjugation: f64,
    /// `|(ST)³ − S²|`
    pub st_cubed: f64,
    /// Most negative real part or largest imaginary part in the vacuum row.
    pub vacuum_row: f64,
}

impl ModularReport {
    pub fn max(&self) -> f64 {
        [
            self.symmetry,
            self.unitarity,
            self.conjugation,
            self.st_cubed,
            self.vacuum_row,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() < tol
    }
}

impl ModularData {
    /// Assembles modular data; checks shapes and that `conjugation` is an
    /// involution fixing the vacuum. Modular relations are not checked here.
    pub fn new(
        labels: Vec<String>,
        h: Vec<Rational>,
        c: Rational,
        s: CMatrix,
        conjugation: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return invalid("modular data needs at least the vacuum");
        }
        if h.len() != n || s.nrows() != n || s.ncols() != n || conjugation.len() != n {
            return invalid("labels, h, S and conjugation disagree in size");
        }
        if conjugation[0] != 0 {
            return invalid("conjugation must fix the vacuum");
        }
        for (a, &ca) in conjugation.iter().enumerate() {
            if ca >= n || conjugation[ca] != a {
                return invalid("conjugation is not an involutive permutation");
            }
        }
        Ok(ModularData {
            labels,
            h,
            c,
            s,
            conjugation,
        })
    }

    /// As [`new`](Self::new) with the conjugation read off from `S²`.
    pub fn with_conjugation_from_s(
        labels: Vec<String>,
        h: Vec<Rational>,
        c: Rational,
        s: CMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        let conj = conjugation_from_s(&s, tol)?;
        Self::new(labels, h, c, s, conj)
    }

    /// The theory with one field, `S = (1)`, `c = 0`.
    pub fn trivial() -> Self {
        ModularData {
            labels: vec!["0".into()],
            h: vec![Rational::from_integer(0)],
            c: Rational::from_integer(0),
            s: CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
            conjugation: vec![0],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Rational] {
        &self.h
    }

    pub fn s_matrix(&self) -> &CMatrix {
        &self.s
    }

    pub fn conjugation(&self) -> &[usize] {
        &self.conjugation
    }

    pub fn t_diagonal(&self) -> Vec<Complex64> {
        (0..self.len()).map(|a| self.t_phase(a)).collect()
    }

    pub fn check_modular(&self) -> ModularReport {
        check_matrix_relations(&self.s, &self.t_diagonal(), &self.conjugation)
    }

    /// Checks and fails on deviations above `tol.matrix`.
    pub fn validate(&self, tol: &Tolerances) -> Result<ModularReport> {
        let r = self.check_modular();
        if !r.passes(tol.matrix) {
            return Err(Error::InvalidInput(format!(
                "modular relations violated (max deviation {:.3e})",
                r.max()
            )));
        }
        Ok(r)
    }

    pub fn tensor(&self, other: &ModularData) -> ModularData {
        TensorTheory::new(vec![self.clone().into(), other.clone().into()]).materialize()
    }

    /// Relabels fields; used when a theory is built from another one.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return invalid("label count does not match");
        }
        self.labels = labels;
        Ok(self)
    }

    /// Copies any modular source into dense storage.
    pub fn from_source(src: &dyn ModularSource) -> ModularData {
        let n = src.len();
        ModularData {
            labels: (0..n).map(|a| src.label(a)).collect(),
            h: (0..n).map(|a| src.h(a)).collect(),
            c: src.central_charge(),
            s: CMatrix::from_fn(n, n, |a, b| src.s(a, b)),
            conjugation: (0..n).map(|a| src.conj(a)).collect(),
        }
    }
}

impl ModularSource for ModularData {
    fn len(&self) -> usize {
        self.labels.len()
    }
    fn s(&self, a: usize, b: usize) -> Complex64 {
        self.s[(a, b)]
    }
    fn h(&self, a: usize) -> Rational {
        self.h[a]
    }
    fn central_charge(&self) -> Rational {
        self.c
    }
    fn conj(&self, a: usize) -> usize {
        self.conjugation[a]
    }
    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }
    fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Checks symmetry, unitarity, `S² = C`, `(ST)³ = S²` and positivity of
/// the first row for a matrix `s` with diagonal `t` and permutation `c`.
///
/// Also used for fixed-point matrices, where the vacuum-row check does not
/// apply; callers ignore that entry there.
pub fn check_matrix_relations(s: &CMatrix, t: &[Complex64], c: &[usize]) -> ModularReport {
    let n = s.nrows();
    let mut r = ModularReport::default();
    for a in 0..n {
        for b in 0..n {
            r.symmetry = r.symmetry.max((s[(a, b)] - s[(b, a)]).norm());
        }
    }
    let id = CMatrix::identity(n, n);
    r.unitarity = max_abs(&(cmul(s, &s.adjoint()) - &id));
    let s2 = cmul(s, s);
    let cm = permutation_matrix(c);
    r.conjugation = max_abs(&(&s2 - &cm));
    let st = CMatrix::from_fn(n, n, |a, b| s[(a, b)] * t[b]);
    let st3 = cmul(&cmul(&st, &st), &st);
    r.st_cubed = max_abs(&(st3 - &s2));
    if n > 0 {
        for b in 0..n {
            let z = s[(0, b)];
            r.vacuum_row = r.vacuum_row.max(z.im.abs()).max((-z.re).max(0.0));
            if z.re <= 0.0 {
                r.vacuum_row = r.vacuum_row.max(1.0);
            }
        }
    }
    r
}

/// Complex matrix product through four real products, which take the
/// optimized real kernel.
pub fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    CMatrix::from_fn(a.nrows(), b.ncols(), |x, y| Complex64::new(re[(x, y)], im[(x, y)]))
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn permutation_matrix(c: &[usize]) -> CMatrix {
    let n = c.len();
    CMatrix::from_fn(n, n, |a, b| {
        if c[a] == b {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The permutation `C` with `S² = C`.
pub fn conjugation_from_s(s: &CMatrix, tol: &Tolerances) -> Result<Vec<usize>> {
    let n = s.nrows();
    let s2 = cmul(s, s);
    let mut c = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let z = s2[(a, b)];
            let dist0 = z.norm();
            let dist1 = (z - Complex64::new(1.0, 0.0)).norm();
            if dist1 < tol.integer {
                if c[a] != usize::MAX {
                    return invalid(format!("row {a} of S² has two unit entries"));
                }
                c[a] = b;
            } else if dist0 > tol.integer {
                return invalid(format!("S² entry ({a},{b}) = {z} is neither 0 nor 1"));
            }
        }
        if c[a] == usize::MAX {
            return invalid(format!("row {a} of S² has no unit entry"));
        }
    }
    Ok(c)
}
