use num_complex::Complex64;
use serde::Serialize;

use super::{prefactor, Extension, OrbitData};
use crate::abelian::{FiniteAbelianGroup, Phase};
use crate::currents::{FixedPointBundle, Model};
use crate::error::{Error, Result};
use crate::modular::{CMatrix, Tolerances};

/// Comparison of `F^H` from the representatives with the twist read off
/// from the resolved matrix.
#[derive(Clone, Debug, Serialize)]
pub struct TwistCheck {
    /// Extended field id.
    pub field: usize,
    pub class_k: usize,
    pub class_j: usize,
    pub predicted: Phase,
    pub measured: Option<Phase>,
    pub agrees: bool,
}

/// Comparison of `η^{J^H}` assembled from base data with `(S^{J^H})²`.
#[derive(Clone, Debug, Serialize)]
pub struct EtaCheck {
    pub field: usize,
    pub class: usize,
    /// Extended field id of `(c, π(i))`.
    pub conjugate: usize,
    pub predicted: [f64; 2],
    pub measured: [f64; 2],
    pub deviation: f64,
}

/// A member of `R_a(J) U_a ∩ R_b(J) U_b`, the smallest id if several.
pub fn pair_representative(g: &FiniteAbelianGroup, a: &OrbitData, b: &OrbitData, class: usize) -> Option<usize> {
    let ra = a.representative(class)?;
    let rb = b.representative(class)?;
    a.untwisted()
        .members()
        .iter()
        .map(|&u| g.add(ra, u))
        .filter(|&x| b.untwisted().contains(g.sub(x, rb)))
        .min()
}

fn base_entry(base: &Model, e: usize, a: usize, b: usize) -> Result<Complex64> {
    base.s_j(e, a, b).ok_or_else(|| {
        Error::IncompleteInput(format!(
            "no fixed-point matrix for current {}",
            base.source().label(base.center().field(e))
        ))
    })
}

/// `S^{J^H}` for one residual class, or `None` if it fixes nothing.
pub(super) fn resolve_bundle(
    ext: &Extension,
    base: &Model,
    model: &Model,
    class: usize,
) -> Result<Option<FixedPointBundle>> {
    let g = base.center().group();
    let fixed_orbits: Vec<usize> = (0..ext.orbits.len())
        .filter(|&o| ext.orbits[o].is_fixed_by(class))
        .collect();
    if fixed_orbits.is_empty() {
        return Ok(None);
    }
    let mut fixed = Vec::new();
    for &o in &fixed_orbits {
        fixed.extend((0..ext.orbits[o].n_labels()).map(|i| ext.field_id(o, i)));
    }
    let m = fixed.len();
    let mut s = CMatrix::zeros(m, m);
    let mut row0 = 0;
    for &oa in &fixed_orbits {
        let a = &ext.orbits[oa];
        let mut col0 = 0;
        for &ob in &fixed_orbits {
            let b = &ext.orbits[ob];
            if let Some(rab) = pair_representative(g, a, b, class) {
                let ra = a.representative(class).unwrap();
                let rb = b.representative(class).unwrap();
                let common: Vec<usize> = a
                    .untwisted()
                    .members()
                    .iter()
                    .copied()
                    .filter(|&x| b.untwisted().contains(x))
                    .collect();
                let values: Vec<Complex64> = common
                    .iter()
                    .map(|&h| base_entry(base, g.add(rab, h), a.rep, b.rep))
                    .collect::<Result<_>>()?;
                let norm = prefactor(ext.h.len(), a, b);
                let (da, db) = (g.sub(rab, ra), g.sub(rab, rb));
                for i in 0..a.n_labels() {
                    let left = (a.phi(i, class).unwrap() * a.psi_phase(i, da)).to_complex();
                    for j in 0..b.n_labels() {
                        let right = (b.phi(j, class).unwrap() * b.psi_phase(j, db)).to_complex().conj();
                        let sum: Complex64 = common
                            .iter()
                            .zip(&values)
                            .map(|(&h, &v)| a.psi(i, h) * v * b.psi(j, h).conj())
                            .sum();
                        s[(row0 + i, col0 + j)] = sum * norm * left * right;
                    }
                }
            }
            col0 += b.n_labels();
        }
        row0 += a.n_labels();
    }
    FixedPointBundle::new(model.source(), model.center(), class, fixed, s)
        .map(Some)
        .map_err(|e| Error::Resolution(format!("resolved matrix of class {class}: {e}")))
}

pub(super) fn check_twists(ext: &Extension, base: &Model) -> Result<Vec<TwistCheck>> {
    let mut out = Vec::new();
    let q = ext.residual.quotient();
    for (o, orb) in ext.orbits.iter().enumerate() {
        if orb.resolution.is_none() {
            continue;
        }
        for j in q.ids().skip(1).filter(|&j| orb.is_fixed_by(j)) {
            let bundle = ext.model.bundle(j);
            for k in q.ids().filter(|&k| orb.is_fixed_by(k)) {
                let predicted = ext.extended_twist(base, o, k, j)?.expect("classes fix the orbit");
                for i in 0..orb.n_labels() {
                    let field = ext.field_id(o, i);
                    let measured = bundle.and_then(|b| b.twist(field, k));
                    out.push(TwistCheck {
                        field,
                        class_k: k,
                        class_j: j,
                        predicted,
                        measured,
                        agrees: measured == Some(predicted),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `F(a, K, L)` for `K ∈ H` that may move `a`; exact when `K` fixes `a`.
fn twist_any(base: &Model, a: usize, k: usize, l: usize) -> Result<Complex64> {
    if l == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if base.center().act(k, a) == a {
        return Ok(base.twist(a, k, l)?.to_complex());
    }
    let b = base
        .bundle(l)
        .ok_or_else(|| Error::IncompleteInput(format!("no fixed-point matrix for current element {l}")))?;
    b.twist_ratio(base.source(), base.center(), a, k)
        .map(|(mean, _)| mean)
        .ok_or_else(|| Error::Convention(format!("twist of {} is undefined", base.source().label(a))))
}

fn base_eta(base: &Model, l: usize, x: usize) -> Result<Complex64> {
    if l == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    base.bundle(l)
        .and_then(|b| b.eta(x))
        .ok_or_else(|| Error::IncompleteInput(format!("no eta for current element {l}")))
}

fn cplx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Assembles `η^{J^H}` on every resolved field from base data:
/// `η^{R_ac}_{K_a a} F(a,K_a,R_ac)^* φ_i(a) φ_{π(i)}(c)^* Ψ_i^{R_ac/R_a} Ψ_{π(i)}^{R_ac/R_c}^*`,
/// where `K_a a = c*` and `π` matches `F(a,K_a,h)^* η^h_{K_a a} Ψ_i^h` with
/// a character of `U_c`.
pub(super) fn check_etas(ext: &Extension, base: &Model, tol: &Tolerances) -> Result<Vec<EtaCheck>> {
    let src = base.source();
    let center = base.center();
    let g = center.group();
    let q = ext.residual.quotient();
    let mut out = Vec::new();
    for orb in ext.orbits.iter().filter(|o| o.resolution.is_some()) {
        let a = orb.rep;
        let oc = ext.orbit_of[&src.conj(a)];
        let corb = &ext.orbits[oc];
        let c = corb.rep;
        let cstar = src.conj(c);
        let ka = ext
            .h
            .members()
            .iter()
            .copied()
            .find(|&k| center.act(k, a) == cstar)
            .ok_or_else(|| Error::Convention("conjugate orbit not reached by the extension group".into()))?;

        let mut pi = Vec::with_capacity(orb.n_labels());
        for i in 0..orb.n_labels() {
            let mut lhs = Vec::with_capacity(orb.untwisted().len());
            for &h in orb.untwisted().members() {
                let z = twist_any(base, a, ka, h)?.conj() * base_eta(base, h, cstar)? * orb.psi(i, h);
                let p = Phase::snap(z, g.exponent().max(1), tol.integer).ok_or_else(|| {
                    Error::Convention(format!("conjugation phase on {} is not a root of unity", src.label(a)))
                })?;
                lhs.push((h, p));
            }
            let k = (0..corb.n_labels())
                .find(|&k| {
                    lhs.iter()
                        .all(|&(h, p)| corb.untwisted().contains(h) && corb.psi_phase(k, h) == p)
                })
                .ok_or_else(|| {
                    Error::Convention(format!("no conjugate character for field {} of {}", i, src.label(a)))
                })?;
            pi.push(k);
        }

        for j in q.ids().skip(1).filter(|&j| orb.is_fixed_by(j)) {
            let Some(bundle) = ext.model.bundle(j) else { continue };
            let rac = pair_representative(g, orb, corb, j);
            let ra = orb.representative(j).unwrap();
            let rc = corb.representative(j);
            for (i, &pi_i) in pi.iter().enumerate() {
                let field = ext.field_id(orb_index(ext, orb), i);
                let conjugate = ext.field_id(oc, pi_i);
                let measured = bundle.eta(field).unwrap_or_default();
                let predicted = match (rac, rc) {
                    (Some(rac), Some(rc)) => {
                        base_eta(base, rac, cstar)?
                            * twist_any(base, a, ka, rac)?.conj()
                            * (orb.phi(i, j).unwrap()
                                * corb.phi(pi_i, j).unwrap().conj()
                                * orb.psi_phase(i, g.sub(rac, ra))
                                * corb.psi_phase(pi_i, g.sub(rac, rc)).conj())
                            .to_complex()
                    }
                    _ => Complex64::new(f64::NAN, f64::NAN),
                };
                let mut deviation = (predicted - measured).norm();
                if ext.model.source().conj(field) != conjugate || deviation.is_nan() {
                    deviation = f64::INFINITY;
                }
                out.push(EtaCheck {
                    field,
                    class: j,
                    conjugate,
                    predicted: cplx(predicted),
                    measured: cplx(measured),
                    deviation,
                });
            }
        }
    }
    Ok(out)
}

fn orb_index(ext: &Extension, orb: &OrbitData) -> usize {
    ext.orbit_of[&orb.rep]
}
