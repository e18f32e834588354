use num_complex::Complex64;

use crate::abelian::{
    cocycle_phases, solve_congruence_system, CocycleData, CosetPresentation, Phase, RootChoice, Subgroup, TwistSystem,
};
use crate::currents::{Model, StabilizerChain};
use crate::error::{Error, Result};

use super::Conventions;

/// Everything the engine needs to know about one local orbit.
#[derive(Clone, Debug)]
pub struct OrbitData {
    /// Representative field.
    pub rep: usize,
    /// All fields on the orbit, ascending.
    pub members: Vec<usize>,
    pub chain: StabilizerChain,
    /// Labels of the `U_a` characters, one extended field each.
    pub labels: Vec<Vec<u64>>,
    /// `Ψ_i(h)` for label `i` and `h` in `U_a` (member order).
    pub characters: Vec<Vec<Complex64>>,
    /// Residual classes whose members can fix `a` but are twisted with
    /// respect to `U_a`; their action permutes the resolved fields.
    pub twisted_classes: Vec<usize>,
    /// Representatives `R_a` of the residual classes that fix every
    /// resolved field of the orbit, when there are any besides the identity.
    pub resolution: Option<Resolution>,
    /// Index of the first extended field of this orbit.
    pub first_field: usize,
}

/// Representatives `R_a(J)` and cocycle phases `φ_i(J, a)` on one orbit.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Classes fixing `a^H`, as a subgroup of the residual group with
    /// basis the classes of the chosen representatives.
    pub fixing: Subgroup,
    /// `⟨R_a(basis), U_a⟩ / U_a` with multiplicative representatives.
    pub presentation: CosetPresentation,
    pub cocycle: CocycleData,
}

impl OrbitData {
    pub fn untwisted(&self) -> &Subgroup {
        &self.chain.untwisted
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    /// `Ψ_i(h)` for `h ∈ U_a`.
    pub fn psi(&self, i: usize, h: usize) -> Complex64 {
        let pos = self
            .chain
            .untwisted
            .members()
            .binary_search(&h)
            .expect("element of the untwisted stabilizer");
        self.characters[i][pos]
    }

    pub fn psi_phase(&self, i: usize, h: usize) -> Phase {
        self.chain.untwisted.character(&self.labels[i], h)
    }

    /// Position of `class` in the fixing subgroup's presentation.
    fn local_class(&self, class: usize) -> Option<(usize, &Resolution)> {
        let res = self.resolution.as_ref()?;
        let coords = res.fixing.coords(class)?;
        Some((res.presentation.quotient().encode(coords), res))
    }

    /// True when the residual class fixes the resolved fields of this orbit.
    pub fn is_fixed_by(&self, class: usize) -> bool {
        class == 0 || self.local_class(class).is_some()
    }

    /// `R_a(J)` as a center element.
    pub fn representative(&self, class: usize) -> Option<usize> {
        if class == 0 {
            return Some(0);
        }
        let (q, res) = self.local_class(class)?;
        Some(res.presentation.rep(q))
    }

    /// `φ_i(J, a)`.
    pub fn phi(&self, i: usize, class: usize) -> Option<Phase> {
        if class == 0 {
            return Some(Phase::ONE);
        }
        let (q, res) = self.local_class(class)?;
        Some(res.cocycle.phase(i, q))
    }
}

/// Computes stabilizers, untwisted representatives and cocycle phases for
/// the orbit of `rep`.
///
/// `residual` presents the group of `H`-local currents modulo `H`.
pub(super) fn analyse_orbit(
    model: &Model,
    h: &Subgroup,
    local: &Subgroup,
    residual: &CosetPresentation,
    rep: usize,
    members: Vec<usize>,
    conv: &Conventions,
) -> Result<OrbitData> {
    let center = model.center();
    let g = center.group();
    let chain = model.stabilizer_chain(rep, h)?;
    let u = &chain.untwisted;
    let labels = u.labels();
    let characters = labels
        .iter()
        .map(|l| u.members().iter().map(|&x| u.character(l, x).to_complex()).collect())
        .collect();

    // Local currents fixing a, split by whether they are untwisted with
    // respect to U_a.
    let mut w_members = Vec::new();
    let mut twisted = std::collections::BTreeSet::new();
    for &x in chain.full.members() {
        if !local.contains(x) {
            continue;
        }
        let mut ok = true;
        for &k in u.members() {
            if !model.twist(rep, x, k)?.is_one() {
                ok = false;
                break;
            }
        }
        let class = residual.class_of(x).expect("local current");
        if ok {
            w_members.push(x);
        } else {
            twisted.insert(class);
        }
    }
    let w = Subgroup::from_members(g, &w_members).map_err(|_| {
        Error::TwistTable(format!(
            "currents fixing {} untwisted on U_a do not form a group",
            model.source().label(rep)
        ))
    })?;
    let mut fixing_classes: Vec<usize> = w.members().iter().map(|&x| residual.class_of(x).unwrap()).collect();
    fixing_classes.sort_unstable();
    fixing_classes.dedup();
    let twisted_classes: Vec<usize> = twisted
        .into_iter()
        .filter(|c| fixing_classes.binary_search(c).is_err())
        .collect();

    let resolution = if w.len() == chain.in_h.len() {
        None
    } else {
        Some(resolve_representatives(model, &chain, &w, residual, rep, conv)?)
    };

    Ok(OrbitData {
        rep,
        members,
        chain,
        labels,
        characters,
        twisted_classes,
        resolution,
        first_field: 0,
    })
}

fn resolve_representatives(
    model: &Model,
    chain: &StabilizerChain,
    w: &Subgroup,
    residual: &CosetPresentation,
    rep: usize,
    conv: &Conventions,
) -> Result<Resolution> {
    let g = model.center().group();
    let s = &chain.in_h;
    let u = &chain.untwisted;
    let basis = w.quotient_basis(s);
    let s_over_u = s.quotient_basis(u);
    let l_orders: Vec<u64> = s_over_u.iter().map(|x| x.1).collect();
    let pairing: Vec<Vec<Phase>> = s_over_u
        .iter()
        .map(|&(li, _)| {
            s_over_u
                .iter()
                .map(|&(lj, _)| model.twist(rep, li, lj))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut reps = Vec::with_capacity(basis.len());
    for &(x, _) in &basis {
        let r = if s_over_u.is_empty() {
            x
        } else {
            let target: Vec<Phase> = s_over_u
                .iter()
                .map(|&(l, _)| model.twist(rep, x, l))
                .collect::<Result<_>>()?;
            let sys = TwistSystem::from_phases(l_orders.clone(), &pairing, &target)?;
            let k = solve_congruence_system(&sys)?;
            let mut r = x;
            for (&(l, _), &kj) in s_over_u.iter().zip(&k) {
                r = g.add(r, g.scale(l, kj as i64));
            }
            r
        };
        for &(l, _) in &s_over_u {
            if !model.twist(rep, r, l)?.is_one() {
                return Err(Error::Inconsistent(format!(
                    "representative on {} is still twisted",
                    model.source().label(rep)
                )));
            }
        }
        let coset = u.coset(r);
        let r = if conv.largest_coset_member {
            *coset.last().unwrap()
        } else {
            coset[0]
        };
        reps.push(r);
    }

    let q = residual.quotient();
    let classes: Vec<usize> = reps.iter().map(|&r| residual.class_of(r).unwrap()).collect();
    let fixing = Subgroup::with_basis(q, &classes)?;
    let mut gens = reps.clone();
    gens.extend_from_slice(u.basis());
    let ambient = Subgroup::generated_by(g, &gens);
    let orders: Vec<u64> = basis.iter().map(|x| x.1).collect();
    let presentation = CosetPresentation::from_basis(&ambient, u, orders.clone(), reps)?;
    let root = match conv.root_offset {
        0 => RootChoice::Principal,
        k => RootChoice::Offset(
            (0..u.len())
                .map(|i| orders.iter().map(|&n| (k * (i as u64 + 1)) % n).collect())
                .collect(),
        ),
    };
    let cocycle = cocycle_phases(&presentation, &root)?;
    Ok(Resolution {
        fixing,
        presentation,
        cocycle,
    })
}
