use num_complex::Complex64;

use super::group::FiniteAbelianGroup;
use super::phase::Phase;
use super::subgroup::Subgroup;

/// Dense table of one-dimensional characters on a finite set of elements
/// closed under the group law of a container group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: FiniteAbelianGroup,
    elements: Vec<usize>,
    labels: Vec<Vec<u64>>,
    values: Vec<Vec<Phase>>,
}

/// Largest deviations found when checking the character axioms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CharacterDeviations {
    /// `|χ(x+y) − χ(x)χ(y)|`
    pub group_law: f64,
    /// `|Σ_x χ_i(x) conj(χ_j(x)) − |G| δ_ij|`
    pub orthogonality: f64,
    /// `|Σ_i χ_i(x) conj(χ_i(y)) − |G| δ_xy|`
    pub completeness: f64,
}

impl CharacterDeviations {
    pub fn max(&self) -> f64 {
        self.group_law.max(self.orthogonality).max(self.completeness)
    }
}

impl CharacterTable {
    pub fn new(
        group: FiniteAbelianGroup,
        elements: Vec<usize>,
        labels: Vec<Vec<u64>>,
        values: Vec<Vec<Phase>>,
    ) -> CharacterTable {
        assert_eq!(labels.len(), values.len());
        assert!(values.iter().all(|row| row.len() == elements.len()));
        CharacterTable {
            group,
            elements,
            labels,
            values,
        }
    }

    /// The standard characters of a subgroup in its own cyclic basis.
    pub fn of_subgroup(sub: &Subgroup) -> CharacterTable {
        let labels = sub.labels();
        let elements = sub.members().to_vec();
        let values = labels
            .iter()
            .map(|l| elements.iter().map(|&h| sub.character(l, h)).collect())
            .collect();
        CharacterTable::new(sub.group().clone(), elements, labels, values)
    }

    /// Characters of a whole group, labelled by group elements.
    pub fn of_group(group: &FiniteAbelianGroup) -> CharacterTable {
        Self::of_subgroup(&Subgroup::whole(group))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn labels(&self) -> &[Vec<u64>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn value(&self, label: usize, elem_pos: usize) -> Phase {
        self.values[label][elem_pos]
    }

    pub fn value_at(&self, label: usize, elem: usize) -> Option<Phase> {
        let pos = self.elements.iter().position(|&e| e == elem)?;
        Some(self.values[label][pos])
    }

    pub fn label_index(&self, label: &[u64]) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Checks the group law, row orthogonality and column completeness
    /// numerically over complex values.
    pub fn deviations(&self) -> CharacterDeviations {
        let n = self.elements.len();
        let pos: std::collections::HashMap<usize, usize> =
            self.elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let vals: Vec<Vec<Complex64>> = self
            .values
            .iter()
            .map(|r| r.iter().map(|p| p.to_complex()).collect())
            .collect();
        let mut dev = CharacterDeviations::default();
        for row in &vals {
            for (x, &ex) in self.elements.iter().enumerate() {
                for (y, &ey) in self.elements.iter().enumerate() {
                    let Some(&z) = pos.get(&self.group.add(ex, ey)) else {
                        dev.group_law = f64::INFINITY;
                        continue;
                    };
                    dev.group_law = dev.group_law.max((row[z] - row[x] * row[y]).norm());
                }
            }
        }
        let size = n as f64;
        for (i, ri) in vals.iter().enumerate() {
            for (j, rj) in vals.iter().enumerate() {
                let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                let want = if i == j { size } else { 0.0 };
                dev.orthogonality = dev.orthogonality.max((s - want).norm());
            }
        }
        if vals.len() != n {
            dev.completeness = f64::INFINITY;
        } else {
            for x in 0..n {
                for y in 0..n {
                    let s: Complex64 = vals.iter().map(|r| r[x] * r[y].conj()).sum();
                    let want = if x == y { size } else { 0.0 };
                    dev.completeness = dev.completeness.max((s - want).norm());
                }
            }
        }
        dev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_tables_satisfy_axioms() {
        for orders in [vec![], vec![5], vec![2, 2], vec![4, 6]] {
            let g = FiniteAbelianGroup::from_orders(orders);
            let t = CharacterTable::of_group(&g);
            assert_eq!(t.len(), g.order());
            assert!(t.deviations().max() < 1e-10);
        }
    }
}
