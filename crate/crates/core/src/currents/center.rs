use std::collections::HashMap;

use crate::abelian::{cyclic_basis_mod, FiniteAbelianGroup, Phase, Subgroup};
use crate::error::{invalid, Error, Result};
use crate::modular::{verlinde_rows, ModularData, ModularSource, Tolerances};

/// The group of simple currents of a theory and its action on fields.
///
/// Currents are identified with elements of an abstract
/// [`FiniteAbelianGroup`]; element id 0 is the vacuum.
#[derive(Clone, Debug)]
pub struct Center {
    group: FiniteAbelianGroup,
    fields: Vec<usize>,
    actions: Vec<Vec<u32>>,
    by_field: HashMap<usize, usize>,
}

impl Center {
    /// Validates that `actions` is a faithful action of `group` by field
    /// permutations with `fields[e] = actions[e](0)`.
    pub fn from_parts(group: FiniteAbelianGroup, actions: Vec<Vec<u32>>) -> Result<Center> {
        if actions.len() != group.order() {
            return invalid("one permutation per group element required");
        }
        let n = actions.first().map_or(0, |p| p.len());
        for p in &actions {
            let mut seen = vec![false; n];
            if p.len() != n {
                return invalid("permutations act on different field sets");
            }
            for &x in p {
                if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                    return invalid("current action is not a permutation");
                }
            }
        }
        if actions[0].iter().enumerate().any(|(a, &x)| a != x as usize) {
            return invalid("identity element must act trivially");
        }
        let units: Vec<usize> = (0..group.rank())
            .map(|l| {
                let mut v = group.identity();
                v[l] = 1;
                group.encode(&v)
            })
            .collect();
        for e in group.ids() {
            for &f in &units {
                let ef = group.add(e, f);
                if (0..n).any(|a| actions[ef][a] != actions[e][actions[f][a] as usize]) {
                    return invalid("current action is not a group action");
                }
            }
        }
        let fields: Vec<usize> = actions.iter().map(|p| p[0] as usize).collect();
        let mut by_field = HashMap::new();
        for (e, &f) in fields.iter().enumerate() {
            if by_field.insert(f, e).is_some() {
                return invalid("two group elements give the same current");
            }
        }
        Ok(Center {
            group,
            fields,
            actions,
            by_field,
        })
    }

    /// Only the vacuum.
    pub fn trivial(n_fields: usize) -> Center {
        Center::from_parts(FiniteAbelianGroup::trivial(), vec![(0..n_fields as u32).collect()])
            .expect("identity action")
    }

    /// Simple currents are the fields of quantum dimension one; their
    /// action is read off from the Verlinde fusion rules.
    pub fn detect(md: &ModularData, tol: &Tolerances) -> Result<Center> {
        let n = md.len();
        let s00 = md.s(0, 0).re;
        let candidates: Vec<usize> = (0..n)
            .filter(|&j| (md.s(j, 0).norm() / s00 - 1.0).abs() < tol.integer)
            .collect();
        let fusion = verlinde_rows(md, &candidates, tol)?;
        let mut perm = HashMap::new();
        for &j in &candidates {
            let mut p = vec![0u32; n];
            for (a, slot) in p.iter_mut().enumerate() {
                let prod = fusion.product(j, a);
                if prod.len() != 1 || prod[0].1 != 1 {
                    return Err(Error::FusionIntegrality(format!(
                        "field {} has quantum dimension 1 but is not a simple current",
                        md.label(j)
                    )));
                }
                *slot = prod[0].0 as u32;
            }
            perm.insert(j, p);
        }
        let op = |x: usize, y: usize| perm[&x][y] as usize;
        if candidates
            .iter()
            .any(|&x| candidates.iter().any(|&y| !perm.contains_key(&op(x, y))))
        {
            return Err(Error::Inconsistent(
                "simple currents are not closed under fusion".into(),
            ));
        }
        let basis = cyclic_basis_mod(&op, 0, &candidates, &[0]);
        let group = FiniteAbelianGroup::from_orders(basis.iter().map(|b| b.1).collect());
        let mut actions = Vec::with_capacity(group.order());
        for e in group.ids() {
            let m = group.decode(e);
            let mut field = 0usize;
            for (&k, &(b, _)) in m.iter().zip(&basis) {
                for _ in 0..k {
                    field = op(b, field);
                }
            }
            actions.push(perm[&field].clone());
        }
        Center::from_parts(group, actions)
    }

    /// Center of a tensor product with field ids `a·n_other + b`.
    pub fn tensor(&self, other: &Center) -> Center {
        let group = self.group.product(&other.group);
        let n1 = self.n_fields();
        let n2 = other.n_fields();
        let mut actions = Vec::with_capacity(group.order());
        for e2 in other.group.ids() {
            for e1 in self.group.ids() {
                let mut p = vec![0u32; n1 * n2];
                for a in 0..n1 {
                    for b in 0..n2 {
                        p[a * n2 + b] = self.actions[e1][a] * n2 as u32 + other.actions[e2][b];
                    }
                }
                actions.push(p);
            }
        }
        Center::from_parts(group, actions).expect("product of group actions")
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn n_fields(&self) -> usize {
        self.actions[0].len()
    }

    /// The field of the current with element id `e`.
    pub fn field(&self, e: usize) -> usize {
        self.fields[e]
    }

    pub fn element_of_field(&self, field: usize) -> Option<usize> {
        self.by_field.get(&field).copied()
    }

    /// `J_e · a`.
    pub fn act(&self, e: usize, a: usize) -> usize {
        self.actions[e][a] as usize
    }

    /// Full stabilizer `T_a`.
    pub fn stabilizer(&self, a: usize) -> Subgroup {
        let members: Vec<usize> = self.group.ids().filter(|&e| self.act(e, a) == a).collect();
        Subgroup::from_members(&self.group, &members).expect("stabilizers are subgroups")
    }

    /// Orbit of `a` under a subgroup, sorted.
    pub fn orbit(&self, sub: &Subgroup, a: usize) -> Vec<usize> {
        let mut o: Vec<usize> = sub.members().iter().map(|&e| self.act(e, a)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Monodromy charge `Q_J(a) = h_a + h_J − h_{Ja}` as a phase.
    pub fn charge(&self, md: &dyn ModularSource, e: usize, a: usize) -> Phase {
        Phase::new(md.h(a) + md.h(self.field(e)) - md.h(self.act(e, a)))
    }

    /// `h_J` modulo 1.
    pub fn spin(&self, md: &dyn ModularSource, e: usize) -> Phase {
        Phase::new(md.h(self.field(e)))
    }

    /// Checks that `h` generates a group of mutually local integer-spin
    /// currents and returns it.
    pub fn extension_group(&self, md: &dyn ModularSource, gens: &[usize]) -> Result<Subgroup> {
        if gens.iter().any(|&g| g >= self.order()) {
            return invalid("generator is not a center element");
        }
        let h = Subgroup::generated_by(&self.group, gens);
        for &j in h.members() {
            if !self.spin(md, j).is_one() {
                return Err(Error::InvalidExtension(format!(
                    "current {} has spin {} and cannot extend the chiral algebra",
                    md.label(self.field(j)),
                    crate::abelian::format_rational(&self.spin(md, j).exponent())
                )));
            }
            for &k in h.members() {
                if !self.charge(md, j, self.field(k)).is_one() {
                    return Err(Error::InvalidExtension(format!(
                        "currents {} and {} are not mutually local",
                        md.label(self.field(j)),
                        md.label(self.field(k))
                    )));
                }
            }
        }
        Ok(h)
    }

    /// Parses a current given by element id, field id or field label.
    pub fn parse_current(&self, md: &dyn ModularSource, text: &str) -> Result<usize> {
        let field = match text.parse::<usize>() {
            Ok(f) if f < self.n_fields() => f,
            _ => md
                .find_label(text)
                .ok_or_else(|| Error::InvalidInput(format!("unknown field {text:?}")))?,
        };
        self.element_of_field(field)
            .ok_or_else(|| Error::InvalidInput(format!("{text:?} is not a simple current")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wzw::{ising, su2};

    #[test]
    fn su2_center() {
        let md = su2(4).unwrap();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        assert_eq!(c.order(), 2);
        assert_eq!(c.field(1), 4);
        assert_eq!(c.act(1, 1), 3);
        assert_eq!(c.charge(&md, 1, 1), Phase::from_fraction(1, 2));
        assert!(c.charge(&md, 1, 2).is_one());
        assert_eq!(c.stabilizer(2).len(), 2);
        assert_eq!(c.stabilizer(1).len(), 1);
    }

    #[test]
    fn ising_current_has_half_spin() {
        let md = ising();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        assert_eq!(c.order(), 2);
        assert_eq!(c.spin(&md, 1), Phase::from_fraction(1, 2));
        assert!(matches!(c.extension_group(&md, &[1]), Err(Error::InvalidExtension(_))));
    }

    #[test]
    fn trivial_theory() {
        let md = ModularData::trivial();
        let c = Center::detect(&md, &Tolerances::default()).unwrap();
        assert_eq!(c.order(), 1);
    }
}
