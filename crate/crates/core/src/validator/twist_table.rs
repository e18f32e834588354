use serde::Serialize;

use crate::abelian::Phase;
use crate::currents::Model;
use crate::error::{Error, Result};
use crate::modular::Tolerances;
use crate::wzw::{ising, sun};

/// One row of the table of twist realizations. Factors are `A` for
/// `A_{N−1}` (first occurrence) or `A_{M−1}` (second) and `I` for Ising;
/// current components are `J` (generator), `P` (the Ising current) or `1`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TableRow {
    /// Twice the spins of the two currents.
    pub two_s_j: u8,
    pub two_s_k: Option<u8>,
    pub n_even: bool,
    pub m_even: Option<bool>,
    /// Target `F(a, J, K)`, `None` for single-current rows.
    pub f: Option<i8>,
    pub factors: &'static str,
    pub j: &'static str,
    pub k: Option<&'static str>,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    two_s_j: u8,
    two_s_k: Option<u8>,
    n_even: bool,
    m_even: Option<bool>,
    f: Option<i8>,
    factors: &'static str,
    j: &'static str,
    k: Option<&'static str>,
) -> TableRow {
    TableRow {
        two_s_j,
        two_s_k,
        n_even,
        m_even,
        f,
        factors,
        j,
        k,
    }
}

/// The eight rows: two single-current rows, then all real twists of
/// `Z_N × Z_M`.
pub const TWIST_TABLE: [TableRow; 8] = [
    row(0, None, false, None, None, "A", "J", None),
    row(1, None, true, None, None, "AI", "JP", None),
    row(0, Some(0), false, Some(false), Some(1), "AA", "J1", Some("1J")),
    row(0, Some(1), false, Some(true), Some(1), "AAI", "J11", Some("1JP")),
    row(1, Some(1), true, Some(true), Some(1), "AAII", "J1P1", Some("1J1P")),
    row(0, Some(0), true, Some(true), Some(-1), "AAIII", "J1PP1", Some("1JP1P")),
    row(0, Some(1), true, Some(true), Some(-1), "AAII", "J1PP", Some("1JP1")),
    row(1, Some(1), true, Some(true), Some(-1), "AAI", "J1P", Some("1JP")),
];

/// Verification of one table row.
#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub row: usize,
    pub n: u32,
    pub m: Option<u32>,
    pub factors: String,
    pub spins: (Phase, Option<Phase>),
    pub orders: (u64, Option<u64>),
    /// `F(a, J, J)` and, for two currents, `F(a, K, K)` and `F(a, J, K)`.
    pub f_jj: Phase,
    pub f_kk: Option<Phase>,
    pub f_jk: Option<Phase>,
    pub spins_match: bool,
    pub spin_rule: bool,
    pub f_matches: bool,
    /// `G(a,K,J) = F(a,K,J)` for all pairs of generated currents.
    pub g_equals_f: bool,
    /// The diagonal currents `(X, X)` in the doubled theory have integer
    /// spin, are mutually local and act without twist on `(a, a)`.
    pub diagonal_local: bool,
    pub diagonal_untwisted: bool,
    pub passed: bool,
}

/// Level realizing `A_{N−1}` with an integer-spin generator.
fn level(n: u32) -> u32 {
    if n.is_multiple_of(2) {
        2 * n
    } else {
        n
    }
}

struct Factor {
    model: Model,
    /// Element id of the current and its unique fixed field.
    current: usize,
    fixed: usize,
}

fn factor(kind: char, n: u32, tol: &Tolerances) -> Result<Factor> {
    let md = match kind {
        'A' => sun(n, level(n))?,
        'I' => ising(),
        _ => return Err(Error::InvalidInput(format!("unknown factor {kind:?}"))),
    };
    let model = Model::new(md, tol)?;
    let g = model.center().group();
    let current = g
        .ids()
        .find(|&e| g.element_order(e) == g.order() as u64 && g.order() > 1)
        .ok_or_else(|| Error::InvalidInput("factor has no cyclic center".into()))?;
    let fixed = model.fixed_points(current);
    if fixed.len() != 1 {
        return Err(Error::InvalidInput(
            "factor current must have a unique fixed point".into(),
        ));
    }
    Ok(Factor {
        model,
        current,
        fixed: fixed[0],
    })
}

/// Product element id from per-factor element ids, first factor fastest.
fn product_element(models: &[&Model], comps: &[usize]) -> usize {
    comps
        .iter()
        .zip(models)
        .rev()
        .fold(0, |acc, (&c, m)| acc * m.center().order() + c)
}

/// Product field id, first factor most significant.
fn product_field(models: &[&Model], fields: &[usize]) -> usize {
    fields
        .iter()
        .zip(models)
        .fold(0, |acc, (&a, m)| acc * m.source().len() + a)
}

fn components(current: &str, factors: &[Factor]) -> Result<Vec<usize>> {
    if current.len() != factors.len() {
        return Err(Error::InvalidInput(format!(
            "current {current:?} does not match the factors"
        )));
    }
    current.chars()
        .zip(factors)
        .map(|(c, f)| match c {
            '1' => Ok(0),
            'J' | 'P' => Ok(f.current),
            _ => Err(Error::InvalidInput(format!("bad current component {c:?}"))),
        })
        .collect()
}

/// Builds the tensor product for `row` with `A_{N−1}`, `A_{M−1}` factors,
/// and verifies spins, orders, the twist column and the diagonal doubling.
pub fn realize_twist_row(index: usize, r: &TableRow, n: u32, m: u32, tol: &Tolerances) -> Result<RowReport> {
    let bad = |msg: &str| Err(Error::InvalidInput(format!("invalid row {}: {msg}", index + 1)));
    if r.f == Some(-1) && (!n.is_multiple_of(2) || !m.is_multiple_of(2)) {
        return bad("F = -1 needs N and M even");
    }
    if r.n_even && !n.is_multiple_of(2) {
        return bad("N must be even");
    }
    if r.m_even == Some(true) && !m.is_multiple_of(2) {
        return bad("M must be even");
    }
    let mut seen_a = 0;
    let factors: Vec<Factor> = r
        .factors
        .chars()
        .map(|c| {
            let order = if c == 'A' {
                seen_a += 1;
                if seen_a == 1 {
                    n
                } else {
                    m
                }
            } else {
                2
            };
            factor(c, order, tol)
        })
        .collect::<Result<_>>()?;
    let models: Vec<&Model> = factors.iter().map(|f| &f.model).collect();
    let owned: Vec<Model> = factors.iter().map(|f| f.model.clone()).collect();
    let theory = Model::tensor(&owned)?;
    let src = theory.source();
    let center = theory.center();
    let g = center.group();
    let jc = components(r.j, &factors)?;
    let kc = r.k.map(|k| components(k, &factors)).transpose()?;
    let j = product_element(&models, &jc);
    let k = kc.as_ref().map(|kc| product_element(&models, kc));
    let a = product_field(&models, &factors.iter().map(|f| f.fixed).collect::<Vec<_>>());

    let sj = center.spin(src, j);
    let sk = k.map(|k| center.spin(src, k));
    let spins_match = sj == Phase::from_fraction(r.two_s_j as i64, 2)
        && sk
            .zip(r.two_s_k)
            .is_none_or(|(s, t)| s == Phase::from_fraction(t as i64, 2));
    let sign = |s: Phase| {
        if s.is_one() {
            Phase::ONE
        } else {
            Phase::from_fraction(1, 2)
        }
    };
    let f_jj = theory.twist(a, j, j)?;
    let f_kk = k.map(|k| theory.twist(a, k, k)).transpose()?;
    let f_jk = k.map(|k| theory.twist(a, j, k)).transpose()?;
    let spin_rule = f_jj == sign(sj) && f_kk.zip(sk).is_none_or(|(f, s)| f == sign(s));
    let f_matches = match (r.f, f_jk) {
        (Some(t), Some(f)) => f == if t == 1 { Phase::ONE } else { Phase::from_fraction(1, 2) },
        (None, None) => true,
        _ => false,
    };

    let mut gens = vec![j];
    gens.extend(k);
    let h = crate::abelian::Subgroup::generated_by(g, &gens);
    let mut g_equals_f = true;
    let eta = |x: usize| {
        if x == 0 {
            Some(num_complex::Complex64::new(1.0, 0.0))
        } else {
            theory.bundle(x).and_then(|b| b.eta(a))
        }
    };
    for &x in h.members() {
        for &y in h.members() {
            let (Some(ex), Some(ey), Some(exy)) = (eta(x), eta(y), eta(g.add(x, y))) else {
                g_equals_f = false;
                continue;
            };
            let f = theory.twist(a, y, x)?;
            g_equals_f &= (ex * ey / exy - f.to_complex()).norm() < tol.matrix;
        }
    }

    let mut doubled: Vec<Model> = owned.clone();
    doubled.extend(owned.iter().cloned());
    let mut dgens = vec![[jc.clone(), jc.clone()].concat()];
    if let Some(kc) = &kc {
        dgens.push([kc.clone(), kc.clone()].concat());
    }
    let dmodel = Model::tensor_subgroup(&doubled, Some(&dgens))?;
    let dmodels: Vec<&Model> = doubled.iter().collect();
    let dfixed: Vec<usize> = factors.iter().chain(&factors).map(|f| f.fixed).collect();
    let da = product_field(&dmodels, &dfixed);
    let dh_gens: Vec<usize> = (1..dmodel.center().order()).collect();
    let diagonal_local = dmodel.center().extension_group(dmodel.source(), &dh_gens).is_ok();
    let whole = crate::abelian::Subgroup::whole(dmodel.center().group());
    let chain = dmodel.stabilizer_chain(da, &whole)?;
    let diagonal_untwisted = chain.in_h.len() == whole.len() && chain.untwisted.len() == chain.in_h.len();

    let passed = spins_match && spin_rule && f_matches && g_equals_f && diagonal_local && diagonal_untwisted;
    Ok(RowReport {
        row: index + 1,
        n,
        m: r.k.map(|_| m),
        factors: r.factors.into(),
        spins: (sj, sk),
        orders: (g.element_order(j), k.map(|k| g.element_order(k))),
        f_jj,
        f_kk,
        f_jk,
        spins_match,
        spin_rule,
        f_matches,
        g_equals_f,
        diagonal_local,
        diagonal_untwisted,
        passed,
    })
}

/// Every row at the smallest admissible `N = M = 2`.
pub fn realize_table(tol: &Tolerances) -> Result<Vec<RowReport>> {
    TWIST_TABLE
        .iter()
        .enumerate()
        .map(|(i, r)| realize_twist_row(i, r, 2, 2, tol))
        .collect()
}
