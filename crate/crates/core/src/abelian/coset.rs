use std::collections::HashMap;

use super::characters::CharacterTable;
use super::group::FiniteAbelianGroup;
use super::phase::Phase;
use super::subgroup::Subgroup;
use crate::error::{invalid, Result};

/// Presentation of the quotient `A / H`, where `A` is a subgroup (the
/// ambient) of a container group and `H ⊆ A`.
///
/// Every class `J` of the quotient carries a representative `R(J) ∈ A`.
/// Classes are indexed by ids of the quotient group `Π Z_{n_l}` in the
/// cyclic basis returned by [`Subgroup::quotient_basis`].
#[derive(Clone, Debug)]
pub struct CosetPresentation {
    ambient: Subgroup,
    subgroup: Subgroup,
    quotient: FiniteAbelianGroup,
    basis_reps: Vec<usize>,
    reps: Vec<usize>,
    class_of: HashMap<usize, usize>,
}

impl CosetPresentation {
    /// Representatives for `G / H` with `G` the whole container group.
    ///
    /// Basis classes get the smallest-id element of their coset as
    /// representative; all other classes are represented multiplicatively.
    pub fn choose(group: &FiniteAbelianGroup, subgroup: &Subgroup) -> Result<Self> {
        Self::choose_in(&Subgroup::whole(group), subgroup)
    }

    /// As [`choose`](Self::choose) for a subgroup `ambient` of the container.
    pub fn choose_in(ambient: &Subgroup, subgroup: &Subgroup) -> Result<Self> {
        if ambient.group() != subgroup.group() || !subgroup.is_subgroup_of(ambient) {
            return invalid("embedding is not a subgroup of the ambient group");
        }
        let basis = ambient.quotient_basis(subgroup);
        let reps: Vec<usize> = basis.iter().map(|&(x, _)| subgroup.coset(x)[0]).collect();
        let orders: Vec<u64> = basis.iter().map(|x| x.1).collect();
        Self::assemble(ambient, subgroup, orders, reps)
    }

    /// Presentation with prescribed representatives of the basis classes.
    ///
    /// `basis_reps` must project to an independent generating set of
    /// `ambient / subgroup` with the given orders.
    pub fn from_basis(
        ambient: &Subgroup,
        subgroup: &Subgroup,
        orders: Vec<u64>,
        basis_reps: Vec<usize>,
    ) -> Result<Self> {
        if !subgroup.is_subgroup_of(ambient) {
            return invalid("embedding is not a subgroup of the ambient group");
        }
        if orders.len() != basis_reps.len() {
            return invalid("basis and order lists differ in length");
        }
        if basis_reps.iter().any(|&r| !ambient.contains(r)) {
            return invalid("representative outside the ambient group");
        }
        Self::assemble(ambient, subgroup, orders, basis_reps)
    }

    fn assemble(ambient: &Subgroup, subgroup: &Subgroup, orders: Vec<u64>, basis_reps: Vec<usize>) -> Result<Self> {
        let g = ambient.group();
        let quotient = FiniteAbelianGroup::from_orders(orders);
        if quotient.order() * subgroup.len() != ambient.len() {
            return invalid("quotient basis has the wrong size");
        }
        let mut reps = Vec::with_capacity(quotient.order());
        let mut class_of = HashMap::with_capacity(ambient.len());
        for q in quotient.ids() {
            let m = quotient.decode(q);
            let mut r = 0usize;
            for (&k, &b) in m.iter().zip(&basis_reps) {
                r = g.add(r, g.scale(b, k as i64));
            }
            for &h in subgroup.members() {
                if class_of.insert(g.add(r, h), q).is_some() {
                    return invalid("basis representatives are not independent modulo the subgroup");
                }
            }
            reps.push(r);
        }
        for (l, (&b, &n)) in basis_reps.iter().zip(quotient.orders()).enumerate() {
            if !subgroup.contains(g.scale(b, n as i64)) {
                return invalid(format!("basis class {l} does not have order {n}"));
            }
        }
        Ok(CosetPresentation {
            ambient: ambient.clone(),
            subgroup: subgroup.clone(),
            quotient,
            basis_reps,
            reps,
            class_of,
        })
    }

    /// Copy with arbitrary representatives `r(J)`, one per class in class
    /// id order. The identity class must be represented by the identity.
    pub fn with_representatives(&self, reps: Vec<usize>) -> Result<Self> {
        if reps.len() != self.reps.len() {
            return invalid("one representative per class required");
        }
        if reps[0] != 0 {
            return invalid("identity class must be represented by the identity");
        }
        for (q, &r) in reps.iter().enumerate() {
            if self.class_of.get(&r) != Some(&q) {
                return invalid(format!("representative {r} is not in class {q}"));
            }
        }
        let mut out = self.clone();
        out.basis_reps = (0..self.quotient.rank())
            .map(|l| {
                let mut e = vec![0u64; self.quotient.rank()];
                e[l] = 1;
                reps[self.quotient.encode(&e)]
            })
            .collect();
        out.reps = reps;
        Ok(out)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.ambient.group()
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn quotient(&self) -> &FiniteAbelianGroup {
        &self.quotient
    }

    pub fn basis_reps(&self) -> &[usize] {
        &self.basis_reps
    }

    pub fn rep(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of.get(&x).copied()
    }

    /// Writes `x = R(class) · h` and returns `(class, h)`.
    pub fn split(&self, x: usize) -> Option<(usize, usize)> {
        let q = self.class_of(x)?;
        Some((q, self.group().sub(x, self.reps[q])))
    }

    /// `h(J,K)` defined by `R(J) R(K) = R(JK) h(J,K)`.
    pub fn discrepancy(&self, j: usize, k: usize) -> usize {
        let g = self.group();
        let jk = self.quotient.add(j, k);
        g.sub(g.add(self.reps[j], self.reps[k]), self.reps[jk])
    }

    /// `h_l = R(J_l)^{n_l}` for the basis class `l`.
    pub fn closure_element(&self, l: usize) -> usize {
        self.group().scale(self.basis_reps[l], self.quotient.orders()[l] as i64)
    }

    /// True when every representative is the product of basis
    /// representatives, `R(Π J_l^{m_l}) = Π R(J_l)^{m_l}`.
    pub fn is_multiplicative(&self) -> bool {
        let g = self.group();
        self.quotient.ids().all(|q| {
            let m = self.quotient.decode(q);
            let mut r = 0usize;
            for (&k, &b) in m.iter().zip(&self.basis_reps) {
                r = g.add(r, g.scale(b, k as i64));
            }
            r == self.reps[q]
        })
    }
}

/// How the `n`-th root in the cocycle phases is chosen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum RootChoice {
    /// The root with argument in `[0, 2π/n)`.
    #[default]
    Principal,
    /// Principal root times `exp(2πi k_l / n_l)`, per subgroup character
    /// label and basis class: `offsets[label][l]`.
    Offset(Vec<Vec<u64>>),
}

/// Phases `φ_i(J)` for each subgroup character `i` and quotient class `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleData {
    labels: Vec<Vec<u64>>,
    phases: Vec<Vec<Phase>>,
}

impl CocycleData {
    pub fn phase(&self, label: usize, class: usize) -> Phase {
        self.phases[label][class]
    }

    pub fn labels(&self) -> &[Vec<u64>] {
        &self.labels
    }

    /// Checks `Ψ_i(h(J,K)) φ_i(JK) = φ_i(J) φ_i(K)` exactly.
    pub fn satisfies_cocycle_law(&self, pres: &CosetPresentation) -> bool {
        let q = pres.quotient();
        let sub = pres.subgroup();
        self.labels.iter().enumerate().all(|(i, label)| {
            self.phases[i][0].is_one()
                && q.ids().all(|j| {
                    q.ids().all(|k| {
                        let h = pres.discrepancy(j, k);
                        sub.character(label, h) * self.phases[i][q.add(j, k)] == self.phases[i][j] * self.phases[i][k]
                    })
                })
        })
    }
}

/// Cocycle phases for a multiplicative presentation: on basis class `l` of
/// order `n`, `φ_i(l)` is an `n`-th root of `Ψ_i(h_l)`; other classes get
/// the product `Π φ_i(l)^{m_l}`.
pub fn cocycle_phases(pres: &CosetPresentation, root: &RootChoice) -> Result<CocycleData> {
    if !pres.is_multiplicative() {
        return invalid("presentation is not multiplicative; use rebase_phases");
    }
    let sub = pres.subgroup();
    let labels = sub.labels();
    let q = pres.quotient();
    let mut phases = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        let roots: Vec<Phase> = (0..q.rank())
            .map(|l| {
                let n = q.orders()[l];
                let base = sub.character(label, pres.closure_element(l)).principal_root(n);
                match root {
                    RootChoice::Principal => base,
                    RootChoice::Offset(off) => base * Phase::from_fraction(off[i][l] as i64, n as i64),
                }
            })
            .collect();
        let row: Vec<Phase> = q
            .ids()
            .map(|c| q.decode(c).iter().zip(&roots).map(|(&m, r)| r.pow(m as i64)).product())
            .collect();
        phases.push(row);
    }
    Ok(CocycleData { labels, phases })
}

/// Phases for a presentation whose representatives differ from those of
/// `old` by subgroup elements, `r(J) = H(J) R(J)`:
/// `φ'_i(J) = φ_i(J) Ψ_i(H(J))`.
pub fn rebase_phases(cocycle: &CocycleData, old: &CosetPresentation, new: &CosetPresentation) -> Result<CocycleData> {
    if old.quotient() != new.quotient() || old.subgroup() != new.subgroup() {
        return invalid("presentations describe different quotients");
    }
    if new.rep(0) != 0 {
        return invalid("identity class must be represented by the identity");
    }
    let g = old.group();
    let sub = old.subgroup();
    let mut phases = cocycle.phases.clone();
    for q in old.quotient().ids() {
        let shift = g.sub(new.rep(q), old.rep(q));
        if !sub.contains(shift) {
            return invalid(format!("representative of class {q} is not in the same coset"));
        }
        for (i, label) in cocycle.labels.iter().enumerate() {
            phases[i][q] = phases[i][q] * sub.character(label, shift);
        }
    }
    Ok(CocycleData {
        labels: cocycle.labels.clone(),
        phases,
    })
}

/// Characters of the ambient group labelled by `(m, i)`, with `m` a
/// character of the quotient and `i` one of the subgroup:
/// `Ξ_{(m,i)}(R(J) h) = ψ_m(J) Ψ_i(h) φ_i(J)`.
///
/// Labels are the concatenation of `m` and `i` coordinates.
pub fn lifted_characters(pres: &CosetPresentation, cocycle: &CocycleData) -> CharacterTable {
    let q = pres.quotient();
    let sub = pres.subgroup();
    let quotient_sub = Subgroup::whole(q);
    let elements = pres.ambient().members().to_vec();
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for mq in q.ids() {
        let m = q.decode(mq);
        for (i, label) in cocycle.labels.iter().enumerate() {
            let mut l = m.clone();
            l.extend_from_slice(label);
            labels.push(l);
            values.push(
                elements
                    .iter()
                    .map(|&x| {
                        let (class, h) = pres.split(x).expect("element of the ambient group");
                        quotient_sub.character(&m, class) * sub.character(label, h) * cocycle.phase(i, class)
                    })
                    .collect(),
            );
        }
    }
    CharacterTable::new(pres.group().clone(), elements, labels, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_mod_z2() -> CosetPresentation {
        let g = FiniteAbelianGroup::cyclic(4);
        let h = Subgroup::generated_by(&g, &[2]);
        CosetPresentation::choose(&g, &h).unwrap()
    }

    #[test]
    fn z4_over_z2() {
        let p = z4_mod_z2();
        assert_eq!(p.quotient().orders(), &[2]);
        assert_eq!(p.rep(1), 1);
        assert_eq!(p.closure_element(0), 2);
        let c = cocycle_phases(&p, &RootChoice::Principal).unwrap();
        assert!(c.satisfies_cocycle_law(&p));
        let nontrivial = c.labels().iter().position(|l| l == &vec![1]).unwrap();
        assert_eq!(c.phase(nontrivial, 1), Phase::from_fraction(1, 4));
        let t = lifted_characters(&p, &c);
        assert!(t.deviations().max() < 1e-12);
    }

    #[test]
    fn rebasing_to_other_representative() {
        let p = z4_mod_z2();
        let c = cocycle_phases(&p, &RootChoice::Principal).unwrap();
        let p2 = p.with_representatives(vec![0, 3]).unwrap();
        let c2 = rebase_phases(&c, &p, &p2).unwrap();
        assert!(c2.satisfies_cocycle_law(&p2));
        assert_eq!(c2.phase(1, 1), c.phase(1, 1) * Phase::from_fraction(1, 2));
        assert!(p.with_representatives(vec![0, 2]).is_err());
    }

    #[test]
    fn klein_group_split() {
        let g = FiniteAbelianGroup::from_orders(vec![2, 2]);
        let h = Subgroup::generated_by(&g, &[g.encode(&[1, 1])]);
        let p = CosetPresentation::choose(&g, &h).unwrap();
        assert_eq!(p.rep(1), g.encode(&[1, 0]));
        assert_eq!(p.closure_element(0), 0);
        let c = cocycle_phases(&p, &RootChoice::Principal).unwrap();
        assert!(c.phases.iter().flatten().all(|x| x.is_one()));
    }

    #[test]
    fn bad_embedding_rejected() {
        let g = FiniteAbelianGroup::cyclic(4);
        let other = FiniteAbelianGroup::cyclic(2);
        let h = Subgroup::whole(&other);
        assert!(CosetPresentation::choose(&g, &h).is_err());
    }
}
