use num_complex::Complex64;

use super::{cmul, CMatrix, ModularData, ModularSource, Tolerances};
use crate::error::{Error, Result};

/// Fusion coefficients `N_{ab}^c` for a selection of rows `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRows {
    n: usize,
    rows: Vec<usize>,
    data: Vec<u32>,
    /// Largest distance of a Verlinde value from its rounded integer.
    pub max_residual: f64,
}

/// The full fusion tensor.
pub type FusionTensor = FusionRows;

impl FusionRows {
    pub fn fields(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// `N_{ab}^c`; `a` must be one of the computed rows.
    pub fn get(&self, a: usize, b: usize, c: usize) -> u32 {
        let r = self
            .rows
            .iter()
            .position(|&x| x == a)
            .unwrap_or_else(|| panic!("fusion row {a} was not computed"));
        self.data[(r * self.n + b) * self.n + c]
    }

    /// Fields `c` with `N_{ab}^c > 0`, with multiplicities.
    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, u32)> {
        (0..self.n)
            .filter_map(|c| {
                let m = self.get(a, b, c);
                (m > 0).then_some((c, m))
            })
            .collect()
    }
}

/// Verlinde formula for all rows.
pub fn verlinde_fusion(md: &ModularData, tol: &Tolerances) -> Result<FusionTensor> {
    let rows: Vec<usize> = (0..md.len()).collect();
    verlinde_rows(md, &rows, tol)
}

/// `N_{ab}^c = Σ_m S_am S_bm conj(S_cm) / S_0m` for `a` in `rows`.
///
/// Each row costs one dense matrix product, so selecting rows keeps large
/// theories tractable.
pub fn verlinde_rows(md: &ModularData, rows: &[usize], tol: &Tolerances) -> Result<FusionRows> {
    let n = md.len();
    let sd = md.s_matrix().adjoint();
    let mut data = Vec::with_capacity(rows.len() * n * n);
    let mut max_residual = 0.0f64;
    for &a in rows {
        let na = verlinde_row(md, &sd, a);
        for b in 0..n {
            for c in 0..n {
                let z = na[(b, c)];
                let r = z.re.round();
                let resid = (z - Complex64::new(r, 0.0)).norm();
                max_residual = max_residual.max(resid);
                if resid > tol.integer || r < -tol.integer {
                    return Err(Error::FusionIntegrality(format!(
                        "N({}, {}, {}) = {z:.6}",
                        md.label(a),
                        md.label(b),
                        md.label(c)
                    )));
                }
                data.push(r.max(0.0) as u32);
            }
        }
    }
    Ok(FusionRows {
        n,
        rows: rows.to_vec(),
        data,
        max_residual,
    })
}

/// The matrix `(b, c) ↦ N_{ab}^c` before rounding.
fn verlinde_row(md: &ModularData, sd: &CMatrix, a: usize) -> CMatrix {
    let n = md.len();
    let s = md.s_matrix();
    let ratio: Vec<Complex64> = (0..n).map(|m| s[(a, m)] / s[(0, m)]).collect();
    cmul(&CMatrix::from_fn(n, n, |b, m| s[(b, m)] * ratio[m]), sd)
}

/// Worst integrality violations over a set of Verlinde rows.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct FusionScan {
    pub rows: usize,
    pub max_residual: f64,
    /// Most negative rounded coefficient, 0 if none.
    pub min_entry: f64,
    /// `(a, b, c)` of the largest residual.
    pub worst: Option<(usize, usize, usize)>,
}

impl FusionScan {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.max_residual <= tol.integer && self.min_entry >= -tol.integer
    }
}

/// Report-only counterpart of [`verlinde_rows`].
pub fn fusion_scan(md: &ModularData, rows: &[usize]) -> FusionScan {
    let n = md.len();
    let sd = md.s_matrix().adjoint();
    let mut out = FusionScan {
        rows: rows.len(),
        ..Default::default()
    };
    for &a in rows {
        let na = verlinde_row(md, &sd, a);
        for b in 0..n {
            for c in 0..n {
                let z = na[(b, c)];
                let r = z.re.round();
                let resid = (z - Complex64::new(r, 0.0)).norm();
                if resid > out.max_residual || out.worst.is_none() {
                    out.max_residual = out.max_residual.max(resid);
                    out.worst = Some((a, b, c));
                }
                out.min_entry = out.min_entry.min(z.re);
            }
        }
    }
    out
}
