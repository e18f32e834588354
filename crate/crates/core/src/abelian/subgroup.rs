use std::collections::HashMap;

use super::group::FiniteAbelianGroup;
use super::phase::Phase;
use crate::error::{invalid, Result};

/// Greedy cyclic basis of `U / K` for an abelian group given by its
/// operation on integer ids.
///
/// At each step the element of largest order modulo the current span is
/// chosen (smallest id on ties); later basis elements are shifted by
/// multiples of it so that each has exact order `m` modulo `K`. The result
/// lists `(element, order)` with orders non-increasing, and the map
/// `Π Z_{order} → U/K` given by the basis is an isomorphism.
pub fn cyclic_basis_mod<F>(op: &F, zero: usize, members: &[usize], kernel: &[usize]) -> Vec<(usize, u64)>
where
    F: Fn(usize, usize) -> usize,
{
    let in_k: std::collections::HashSet<usize> = kernel.iter().copied().collect();
    if in_k.len() >= members.len() {
        return vec![];
    }
    let order_mod = |x: usize, set: &std::collections::HashSet<usize>| -> u64 {
        let mut y = x;
        let mut n = 1u64;
        while !set.contains(&y) {
            y = op(y, x);
            n += 1;
        }
        n
    };
    let mut best = (0u64, usize::MAX);
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    for &x in &sorted {
        let n = order_mod(x, &in_k);
        if n > best.0 {
            best = (n, x);
        }
    }
    let (n, x) = best;
    // K + <x>
    let mut k2 = Vec::with_capacity(kernel.len() * n as usize);
    let mut mult = zero;
    for _ in 0..n {
        for &k in kernel {
            k2.push(op(k, mult));
        }
        mult = op(mult, x);
    }
    let rest = cyclic_basis_mod(op, zero, members, &k2);
    let mut out = vec![(x, n)];
    for (y, m) in rest {
        let mut shifted = y;
        let mut found = None;
        for _ in 0..n {
            let mut p = zero;
            for _ in 0..m {
                p = op(p, shifted);
            }
            if in_k.contains(&p) {
                found = Some(shifted);
                break;
            }
            shifted = op(shifted, x);
        }
        out.push((found.expect("max-order element generates a direct summand"), m));
    }
    out
}

/// A subgroup of a [`FiniteAbelianGroup`], stored by member ids together
/// with a cyclic basis and coordinates of every member in that basis.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    members: Vec<usize>,
    member: Vec<bool>,
    basis: Vec<usize>,
    orders: Vec<u64>,
    coords: HashMap<usize, Vec<u64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn generated_by(group: &FiniteAbelianGroup, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; group.order()];
        member[0] = true;
        let mut members = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = group.add(x, g);
                if !member[y] {
                    member[y] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        Self::build(group, members, member, None)
    }

    /// Subgroup from an explicit member list; fails if the list is not
    /// closed under the group law.
    pub fn from_members(group: &FiniteAbelianGroup, members: &[usize]) -> Result<Subgroup> {
        let mut member = vec![false; group.order()];
        for &m in members {
            if m >= group.order() {
                return invalid(format!("element id {m} out of range"));
            }
            member[m] = true;
        }
        if !member[0] {
            return invalid("subgroup does not contain the identity");
        }
        for &a in members {
            for &b in members {
                if !member[group.add(a, b)] {
                    return invalid("member list is not closed under the group law");
                }
            }
        }
        let list: Vec<usize> = (0..group.order()).filter(|&i| member[i]).collect();
        Ok(Self::build(group, list, member, None))
    }

    /// Like [`generated_by`](Self::generated_by) but uses `gens` as the
    /// basis as long as they are independent with the given orders.
    pub fn with_basis(group: &FiniteAbelianGroup, gens: &[usize]) -> Result<Subgroup> {
        let s = Self::generated_by(group, gens);
        let orders: Vec<u64> = gens.iter().map(|&g| group.element_order(g)).collect();
        if orders.iter().product::<u64>() as usize != s.len() {
            return invalid("basis elements are not independent");
        }
        let members = s.members.clone();
        let member = s.member.clone();
        Ok(Self::build(group, members, member, Some((gens.to_vec(), orders))))
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Subgroup {
        Self::generated_by(group, &[])
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Subgroup {
        let all: Vec<usize> = group.ids().collect();
        Self::generated_by(group, &all)
    }

    fn build(
        group: &FiniteAbelianGroup,
        mut members: Vec<usize>,
        member: Vec<bool>,
        basis: Option<(Vec<usize>, Vec<u64>)>,
    ) -> Subgroup {
        members.sort_unstable();
        let (basis, orders) = basis.unwrap_or_else(|| {
            let op = |a, b| group.add(a, b);
            let b = cyclic_basis_mod(&op, 0, &members, &[0]);
            (b.iter().map(|x| x.0).collect(), b.iter().map(|x| x.1).collect())
        });
        let abs = FiniteAbelianGroup::from_orders(orders.clone());
        let mut coords = HashMap::with_capacity(members.len());
        for id in abs.ids() {
            let c = abs.decode(id);
            let mut x = 0usize;
            for (ci, &b) in c.iter().zip(&basis) {
                x = group.add(x, group.scale(b, *ci as i64));
            }
            coords.insert(x, c);
        }
        debug_assert_eq!(coords.len(), members.len());
        Subgroup {
            group: group.clone(),
            members,
            member,
            basis,
            orders,
            coords,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, id: usize) -> bool {
        self.member.get(id).copied().unwrap_or(false)
    }

    /// Member ids in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// The subgroup as an abstract group `Π Z_{orders}`.
    pub fn abstract_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_orders(self.orders.clone())
    }

    pub fn coords(&self, id: usize) -> Option<&[u64]> {
        self.coords.get(&id).map(|v| v.as_slice())
    }

    /// Element with the given basis coordinates.
    pub fn element(&self, coords: &[u64]) -> usize {
        let mut x = 0usize;
        for (c, &b) in coords.iter().zip(&self.basis) {
            x = self.group.add(x, self.group.scale(b, *c as i64));
        }
        x
    }

    /// Character labels, i.e. elements of the abstract group in id order.
    pub fn labels(&self) -> Vec<Vec<u64>> {
        let abs = self.abstract_group();
        abs.ids().map(|i| abs.decode(i)).collect()
    }

    /// `Ψ_i(h) = exp(2πi Σ_l i_l h_l / n_l)` for `h` in the subgroup.
    pub fn character(&self, label: &[u64], h: usize) -> Phase {
        let c = self
            .coords(h)
            .unwrap_or_else(|| panic!("element {h} is not in the subgroup"));
        label
            .iter()
            .zip(c)
            .zip(&self.orders)
            .map(|((&i, &x), &n)| Phase::from_fraction((i * x % n) as i64, n as i64))
            .product()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let m: Vec<usize> = self.members.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_members(&self.group, &m).expect("intersection of subgroups")
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.basis.clone();
        gens.extend_from_slice(&other.basis);
        Subgroup::generated_by(&self.group, &gens)
    }

    /// Cyclic basis of `self / sub` as `(representative, order)` pairs.
    pub fn quotient_basis(&self, sub: &Subgroup) -> Vec<(usize, u64)> {
        assert!(sub.is_subgroup_of(self));
        let op = |a, b| self.group.add(a, b);
        cyclic_basis_mod(&op, 0, &self.members, &sub.members)
    }

    /// The coset `x + self` as a sorted list.
    pub fn coset(&self, x: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&h| self.group.add(x, h)).collect();
        c.sort_unstable();
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_basis(s: &Subgroup) {
        assert_eq!(s.orders().iter().product::<u64>() as usize, s.len());
        for w in s.orders().windows(2) {
            assert!(w[0] >= w[1]);
        }
        for &m in s.members() {
            let c = s.coords(m).unwrap();
            assert_eq!(s.element(c), m);
        }
    }

    #[test]
    fn basis_of_whole_groups() {
        for orders in [vec![2, 2], vec![4, 6], vec![3, 9, 2], vec![5, 5], vec![1, 7]] {
            let g = FiniteAbelianGroup::from_orders(orders);
            let s = Subgroup::whole(&g);
            check_basis(&s);
        }
    }

    #[test]
    fn z4_z2_needs_shift() {
        // In Z_4 × Z_2 modulo <(2,0)> the greedy choice must shift the
        // second generator to keep it of order 2 in the full group.
        let g = FiniteAbelianGroup::from_orders(vec![4, 2]);
        let s = Subgroup::whole(&g);
        check_basis(&s);
        assert_eq!(s.orders(), &[4, 2]);
    }

    #[test]
    fn quotient_and_characters() {
        let g = FiniteAbelianGroup::from_orders(vec![4, 4]);
        let h = Subgroup::generated_by(&g, &[g.encode(&[2, 2])]);
        let whole = Subgroup::whole(&g);
        let q = whole.quotient_basis(&h);
        assert_eq!(q.iter().map(|x| x.1).product::<u64>(), 8);
        let labels = h.labels();
        assert_eq!(labels.len(), 2);
        let x = g.encode(&[2, 2]);
        assert_eq!(h.character(&labels[1], x), Phase::from_fraction(1, 2));
        assert!(Subgroup::from_members(&g, &[0, 1]).is_err());
    }
}
