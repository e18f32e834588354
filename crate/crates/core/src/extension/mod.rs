//! Simple-current extensions and the resolved fixed-point matrices of the
//! extended theory.

mod orbit;
mod report;
mod resolve;

use std::collections::HashMap;

use num_complex::Complex64;

pub use orbit::{OrbitData, Resolution};
pub use report::{ExtensionReport, REPORT_SCHEMA};
pub use resolve::{EtaCheck, TwistCheck};

use crate::abelian::{CosetPresentation, Subgroup};
use crate::currents::{Center, Model};
use crate::error::{Error, Result};
use crate::modular::{verlinde_rows, CMatrix, ModularData, ModularSource, Tolerances};

/// Choices the extended data may depend on only up to relabelling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conventions {
    /// Use the largest instead of the smallest field id as orbit representative.
    pub largest_orbit_rep: bool,
    /// Use the largest instead of the smallest member of `R_a U_a`.
    pub largest_coset_member: bool,
    /// Extra root-of-unity offset in the cocycle phases; 0 is the principal root.
    pub root_offset: u64,
}

impl Conventions {
    /// Conventions derived from a seed; seed 0 gives the defaults.
    pub fn from_seed(seed: u64) -> Self {
        Conventions {
            largest_orbit_rep: seed & 1 == 1,
            largest_coset_member: seed & 2 == 2,
            root_offset: seed >> 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionOptions {
    pub conventions: Conventions,
    pub tolerances: Tolerances,
    /// Deviation allowed in the cross-checks of resolved data.
    pub check_tolerance: f64,
    /// Fail when a cross-check exceeds `check_tolerance`.
    pub strict: bool,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions {
            conventions: Conventions::default(),
            tolerances: Tolerances::default(),
            check_tolerance: 1e-8,
            strict: true,
        }
    }
}

/// Field `(a, i)` of the extended theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedField {
    pub orbit: usize,
    pub label: usize,
}

/// A residual class that fixes an orbit but permutes its resolved fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recombination {
    pub orbit: usize,
    pub class: usize,
}

/// The theory extended by a group `H` of integer-spin currents, with the
/// residual currents and their resolved fixed-point matrices.
#[derive(Clone, Debug)]
pub struct Extension {
    h: Subgroup,
    local: Subgroup,
    residual: CosetPresentation,
    orbits: Vec<OrbitData>,
    fields: Vec<ExtendedField>,
    orbit_of: HashMap<usize, usize>,
    /// Base field of the representative current of each residual class.
    class_fields: Vec<usize>,
    model: Model,
    recombinations: Vec<Recombination>,
    extra_currents: Vec<usize>,
    twist_checks: Vec<TwistCheck>,
    eta_checks: Vec<EtaCheck>,
}

impl Extension {
    /// Extends `base` by the currents generated by `gens` (center element ids).
    pub fn new(base: &Model, gens: &[usize], opts: &ExtensionOptions) -> Result<Extension> {
        let src = base.source();
        let center = base.center();
        let g = center.group();
        let h = center.extension_group(src, gens)?;

        let local_members: Vec<usize> = g
            .ids()
            .filter(|&x| {
                h.basis()
                    .iter()
                    .all(|&j| center.charge(src, j, center.field(x)).is_one())
            })
            .collect();
        let local = Subgroup::from_members(g, &local_members)?;
        let residual = CosetPresentation::choose_in(&local, &h)?;

        let mut orbit_of = HashMap::new();
        let mut orbits = Vec::new();
        for a in 0..src.len() {
            if orbit_of.contains_key(&a) || !h.basis().iter().all(|&j| center.charge(src, j, a).is_one()) {
                continue;
            }
            let members = center.orbit(&h, a);
            let rep = if opts.conventions.largest_orbit_rep {
                *members.last().unwrap()
            } else {
                members[0]
            };
            for &m in &members {
                orbit_of.insert(m, orbits.len());
            }
            orbits.push(orbit::analyse_orbit(
                base,
                &h,
                &local,
                &residual,
                rep,
                members,
                &opts.conventions,
            )?);
        }

        let mut fields = Vec::new();
        for (o, orb) in orbits.iter_mut().enumerate() {
            orb.first_field = fields.len();
            fields.extend((0..orb.n_labels()).map(|label| ExtendedField { orbit: o, label }));
        }

        let mut ext = Extension {
            h,
            local,
            residual: residual.clone(),
            orbits,
            fields,
            orbit_of,
            class_fields: residual.reps().iter().map(|&r| center.field(r)).collect(),
            model: Model::with_center(ModularData::trivial(), Center::trivial(1))?,
            recombinations: Vec::new(),
            extra_currents: Vec::new(),
            twist_checks: Vec::new(),
            eta_checks: Vec::new(),
        };
        ext.recombinations = ext
            .orbits
            .iter()
            .enumerate()
            .flat_map(|(o, orb)| {
                orb.twisted_classes
                    .iter()
                    .map(move |&class| Recombination { orbit: o, class })
            })
            .collect();

        let md = ext.extended_modular_data(base, &opts.tolerances)?;
        let center = ext.residual_center(&md, &opts.tolerances)?;
        ext.extra_currents = extra_currents(&md, &center, &opts.tolerances);
        let mut model = Model::with_center(md, center)?;
        for class in 1..ext.residual.quotient().order() {
            if let Some(b) = resolve::resolve_bundle(&ext, base, &model, class)? {
                model.insert_bundle(b);
            }
        }
        ext.model = model;
        ext.twist_checks = resolve::check_twists(&ext, base)?;
        ext.eta_checks = resolve::check_etas(&ext, base, &opts.tolerances)?;
        if opts.strict {
            if let Some(c) = ext.twist_checks.iter().find(|c| !c.agrees) {
                return Err(Error::Resolution(format!(
                    "extended twist at field {} for classes ({}, {}) disagrees with the resolved matrix",
                    ext.model.source().label(c.field),
                    c.class_k,
                    c.class_j
                )));
            }
            if let Some(c) = ext.eta_checks.iter().find(|c| c.deviation > opts.check_tolerance) {
                return Err(Error::Resolution(format!(
                    "eta of class {} at field {} deviates by {:.2e} from the resolved matrix",
                    c.class,
                    ext.model.source().label(c.field),
                    c.deviation
                )));
            }
        }
        Ok(ext)
    }

    pub fn extension_group(&self) -> &Subgroup {
        &self.h
    }

    /// Currents local with respect to the extension group.
    pub fn local_currents(&self) -> &Subgroup {
        &self.local
    }

    /// Local currents modulo the extension group; class ids are the element
    /// ids of the extended theory's center.
    pub fn residual(&self) -> &CosetPresentation {
        &self.residual
    }

    pub fn orbits(&self) -> &[OrbitData] {
        &self.orbits
    }

    /// Orbit index of a base field, if it is local.
    pub fn orbit_of(&self, a: usize) -> Option<usize> {
        self.orbit_of.get(&a).copied()
    }

    pub fn fields(&self) -> &[ExtendedField] {
        &self.fields
    }

    /// Extended field id of `(orbit, label)`.
    pub fn field_id(&self, orbit: usize, label: usize) -> usize {
        self.orbits[orbit].first_field + label
    }

    /// The extended theory with its residual center and resolved bundles.
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn into_model(self) -> Model {
        self.model
    }

    pub fn recombinations(&self) -> &[Recombination] {
        &self.recombinations
    }

    /// Fields of quantum dimension one outside the residual center.
    pub fn extra_currents(&self) -> &[usize] {
        &self.extra_currents
    }

    pub fn twist_checks(&self) -> &[TwistCheck] {
        &self.twist_checks
    }

    pub fn eta_checks(&self) -> &[EtaCheck] {
        &self.eta_checks
    }

    /// `F^H(a^H, K^H, J^H) = F(a, R_a(K), R_a(J))` on the orbit's resolved fields.
    pub fn extended_twist(
        &self,
        base: &Model,
        orbit: usize,
        class_k: usize,
        class_j: usize,
    ) -> Result<Option<crate::abelian::Phase>> {
        let orb = &self.orbits[orbit];
        match (orb.representative(class_k), orb.representative(class_j)) {
            (Some(k), Some(j)) => Ok(Some(base.twist(orb.rep, k, j)?)),
            _ => Ok(None),
        }
    }

    /// Extended `S` from the fixed-point matrices of `H`.
    fn extended_modular_data(&self, base: &Model, tol: &Tolerances) -> Result<ModularData> {
        let src = base.source();
        let n = self.fields.len();
        let mut s = CMatrix::zeros(n, n);
        for (oa, a) in self.orbits.iter().enumerate() {
            for b in self.orbits.iter().skip(oa) {
                let common: Vec<usize> = a
                    .untwisted()
                    .members()
                    .iter()
                    .copied()
                    .filter(|&x| b.untwisted().contains(x))
                    .collect();
                let values: Vec<Complex64> = common
                    .iter()
                    .map(|&j| {
                        base.s_j(j, a.rep, b.rep).ok_or_else(|| {
                            Error::IncompleteInput(format!(
                                "no fixed-point matrix for current {}",
                                src.label(base.center().field(j))
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                let norm = prefactor(self.h.len(), a, b);
                for i in 0..a.n_labels() {
                    for j in 0..b.n_labels() {
                        let sum: Complex64 = common
                            .iter()
                            .zip(&values)
                            .map(|(&x, &v)| a.psi(i, x) * v * b.psi(j, x).conj())
                            .sum();
                        let z = sum * norm;
                        let (p, q) = (a.first_field + i, b.first_field + j);
                        s[(p, q)] = z;
                        s[(q, p)] = z;
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(n);
        let mut h = Vec::with_capacity(n);
        for f in &self.fields {
            let orb = &self.orbits[f.orbit];
            let base_label = src.label(orb.members[0]);
            labels.push(if orb.n_labels() == 1 {
                base_label
            } else {
                let l: Vec<String> = orb.labels[f.label].iter().map(|x| x.to_string()).collect();
                format!("{base_label}[{}]", l.join(","))
            });
            h.push(src.h(orb.members[0]));
        }
        let md = ModularData::with_conjugation_from_s(labels, h, src.central_charge(), s, tol)
            .map_err(|e| Error::Inconsistent(format!("extended S: {e}")))?;
        md.validate(tol)
            .map_err(|e| Error::Inconsistent(format!("extended theory is not modular: {e}")))?;
        Ok(md)
    }

    /// The residual currents act on extended fields as read off from fusion.
    fn residual_center(&self, md: &ModularData, tol: &Tolerances) -> Result<Center> {
        let q = self.residual.quotient();
        let class_fields: Vec<usize> = q
            .ids()
            .map(|c| {
                let o = self.orbit_of[&self.base_field_of_class(c)];
                debug_assert_eq!(self.orbits[o].n_labels(), 1);
                self.field_id(o, 0)
            })
            .collect();
        let fusion =
            verlinde_rows(md, &class_fields, tol).map_err(|e| Error::Inconsistent(format!("extended theory: {e}")))?;
        let mut actions = Vec::with_capacity(q.order());
        for &f in &class_fields {
            let perm = (0..md.len())
                .map(|a| match fusion.product(f, a).as_slice() {
                    [(b, 1)] => Ok(*b as u32),
                    _ => Err(Error::Inconsistent(format!(
                        "{} is not a simple current of the extended theory",
                        md.label(f)
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(perm);
        }
        Center::from_parts(q.clone(), actions)
    }

    fn base_field_of_class(&self, class: usize) -> usize {
        self.class_fields[class]
    }
}

fn extra_currents(md: &ModularData, center: &Center, tol: &Tolerances) -> Vec<usize> {
    let s00 = md.s(0, 0).re;
    (0..md.len())
        .filter(|&a| (md.s(a, 0).norm() / s00 - 1.0).abs() < tol.integer && center.element_of_field(a).is_none())
        .collect()
}

/// `|H| / sqrt(|S_a||U_a||S_b||U_b|)`.
pub(crate) fn prefactor(h: usize, a: &OrbitData, b: &OrbitData) -> f64 {
    h as f64 / ((a.chain.in_h.len() * a.untwisted().len() * b.chain.in_h.len() * b.untwisted().len()) as f64).sqrt()
}
