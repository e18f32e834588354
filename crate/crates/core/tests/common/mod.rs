//! Random instances and brute-force oracles for the abelian machinery.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::Rng;

use fpres::abelian::{
    cocycle_phases, lifted_characters, rebase_phases, solve_congruence_system, CocycleData, CosetPresentation,
    FiniteAbelianGroup, RootChoice, Subgroup, TwistSystem,
};

/// Cyclic factor orders with product at most `bound`.
pub fn random_orders(rng: &mut StdRng, bound: u64) -> Vec<u64> {
    let mut orders = Vec::new();
    let mut size = 1;
    for _ in 0..rng.random_range(1..=3) {
        let n = rng.random_range(2..=8u64);
        if size * n > bound {
            break;
        }
        size *= n;
        orders.push(n);
    }
    if orders.is_empty() {
        orders.push(rng.random_range(2..=bound.min(8)));
    }
    orders
}

/// Raw integer data of a twist system: equation `i` reads
/// `Σ_j k_j r[j][i] / gcd(N_i, N_j) + p_i / den_i ≡ 0 (mod 1)`.
#[derive(Clone, Debug)]
pub struct RawSystem {
    pub orders: Vec<u64>,
    pub r: Vec<Vec<i64>>,
    pub p: Vec<i64>,
    pub den: Vec<u64>,
}

impl RawSystem {
    pub fn build(&self) -> TwistSystem {
        TwistSystem::new(self.orders.clone(), self.r.clone(), self.p.clone(), self.den.clone()).unwrap()
    }

    fn lcm(&self) -> i128 {
        self.orders.iter().chain(&self.den).fold(1u64, |a, &b| a.lcm(&b)) as i128
    }

    /// `L` times the left-hand side of equation `i`, mod `L`.
    fn lhs(&self, k: &[u64], i: usize, l: i128) -> i128 {
        (0..self.orders.len())
            .map(|j| {
                let nij = self.orders[i].gcd(&self.orders[j]) as i128;
                k[j] as i128 * self.r[j][i] as i128 * (l / nij)
            })
            .sum::<i128>()
            .rem_euclid(l)
    }

    fn all_k(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|k: Vec<u64>| {
                    (0..n).map(move |x| {
                        let mut k = k.clone();
                        k.push(x);
                        k
                    })
                })
                .collect();
        }
        out
    }

    /// Every solution, by enumeration.
    pub fn brute_force(&self) -> BTreeSet<Vec<u64>> {
        let l = self.lcm();
        self.all_k()
            .into_iter()
            .filter(|k| {
                (0..self.orders.len()).all(|i| {
                    let rhs = (self.p[i] as i128 * (l / self.den[i] as i128)).rem_euclid(l);
                    (self.lhs(k, i, l) + rhs).rem_euclid(l) == 0
                })
            })
            .collect()
    }

    pub fn homogeneous(&self) -> RawSystem {
        RawSystem {
            p: vec![0; self.p.len()],
            ..self.clone()
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.homogeneous().brute_force().len() == 1
    }

    /// Replaces the targets so that `k` solves the system.
    pub fn solved_by(mut self, k: &[u64]) -> RawSystem {
        let l = self.lcm();
        for i in 0..self.orders.len() {
            self.p[i] = -(self.lhs(k, i, l) as i64);
            self.den[i] = l as u64;
        }
        self
    }
}

pub fn random_system(rng: &mut StdRng, bound: u64) -> RawSystem {
    let orders = random_orders(rng, bound);
    let n = orders.len();
    let r = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rng.random_range(0..orders[i].gcd(&orders[j]) as i64))
                .collect()
        })
        .collect();
    let den: Vec<u64> = orders
        .iter()
        .map(|&o| {
            let divisors: Vec<u64> = (1..=o).filter(|d| o % d == 0).collect();
            divisors[rng.random_range(0..divisors.len())]
        })
        .collect();
    let p = den.iter().map(|&d| rng.random_range(0..d as i64)).collect();
    RawSystem { orders, r, p, den }
}

/// A random system whose homogeneous part has only the trivial solution.
pub fn random_nondegenerate(rng: &mut StdRng, bound: u64) -> RawSystem {
    loop {
        let s = random_system(rng, bound);
        if s.is_nondegenerate() {
            return s;
        }
    }
}

/// `particular + span(kernel)` inside `Π Z_{N_j}`.
pub fn span(particular: &[u64], kernel: &[Vec<u64>], orders: &[u64]) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::from([particular.to_vec()]);
    let mut frontier = vec![particular.to_vec()];
    while let Some(x) = frontier.pop() {
        for g in kernel {
            let y: Vec<u64> = x.iter().zip(g).zip(orders).map(|((&a, &b), &n)| (a + b) % n).collect();
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Solver against enumeration for one nondegenerate system.
pub fn congruence_trial(sys: &RawSystem) -> Result<(), String> {
    let brute = sys.brute_force();
    let t = sys.build();
    let k = solve_congruence_system(&t).map_err(|e| format!("{sys:?}: {e}"))?;
    if brute != BTreeSet::from([k.clone()]) {
        return Err(format!("{sys:?}: solver {k:?}, enumeration {brute:?}"));
    }
    let all = t.solve_all().map_err(|e| e.to_string())?;
    if span(&all.particular, &all.kernel, &sys.orders) != brute {
        return Err(format!("{sys:?}: solution set differs"));
    }
    Ok(())
}

/// Solution set of a solvable, possibly degenerate system.
pub fn solution_set_trial(sys: &RawSystem) -> Result<(), String> {
    let brute = sys.brute_force();
    let all = sys.build().solve_all().map_err(|e| format!("{sys:?}: {e}"))?;
    let got = span(&all.particular, &all.kernel, &sys.orders);
    if got != brute {
        return Err(format!(
            "{sys:?}: span has {} elements, enumeration {}",
            got.len(),
            brute.len()
        ));
    }
    Ok(())
}

/// A random group with a random subgroup.
pub fn random_pair(rng: &mut StdRng, bound: u64) -> (FiniteAbelianGroup, Subgroup) {
    let orders: Vec<i64> = random_orders(rng, bound).into_iter().map(|n| n as i64).collect();
    let g = FiniteAbelianGroup::decompose(&orders).unwrap();
    let gens: Vec<usize> = (0..rng.random_range(0..=2))
        .map(|_| rng.random_range(0..g.order()))
        .collect();
    let h = Subgroup::generated_by(&g, &gens);
    (g, h)
}

/// `Ψ_i(h(J,K)) φ_i(JK) = φ_i(J) φ_i(K)` with `h(J,K)` computed from the
/// representatives directly.
pub fn cocycle_law(pres: &CosetPresentation, c: &CocycleData) -> bool {
    let g = pres.group();
    let q = pres.quotient();
    let sub = pres.subgroup();
    c.labels().iter().enumerate().all(|(i, label)| {
        q.ids().all(|j| {
            q.ids().all(|k| {
                let jk = q.add(j, k);
                let h = g.sub(g.add(pres.rep(j), pres.rep(k)), pres.rep(jk));
                sub.contains(h) && sub.character(label, h) * c.phase(i, jk) == c.phase(i, j) * c.phase(i, k)
            })
        })
    })
}

#[derive(Debug)]
pub struct LiftOutcome {
    pub deviation: f64,
    pub complete: bool,
    pub reduces: bool,
    pub cocycle: bool,
    pub rebased_cocycle: bool,
    pub rebased_table: bool,
}

impl LiftOutcome {
    pub fn ok(&self, tol: f64) -> bool {
        self.deviation < tol
            && self.complete
            && self.reduces
            && self.cocycle
            && self.rebased_cocycle
            && self.rebased_table
    }
}

/// Lifted characters for a random `(G, H)`, random root choice and random
/// alternative representatives.
pub fn lift_trial(rng: &mut StdRng, bound: u64) -> LiftOutcome {
    let (g, h) = random_pair(rng, bound);
    let pres = CosetPresentation::choose(&g, &h).unwrap();
    let q = pres.quotient().clone();
    let root = if rng.random_bool(0.5) {
        RootChoice::Principal
    } else {
        RootChoice::Offset(
            (0..h.len())
                .map(|_| q.orders().iter().map(|&n| rng.random_range(0..n)).collect())
                .collect(),
        )
    };
    let cocycle = cocycle_phases(&pres, &root).unwrap();
    let table = lifted_characters(&pres, &cocycle);
    let rank = q.rank();
    let reduces = (0..table.len()).all(|li| {
        let label = &table.labels()[li][rank..];
        h.members()
            .iter()
            .all(|&x| table.value_at(li, x) == Some(h.character(label, x)))
    });

    let members = h.members();
    let reps: Vec<usize> = q
        .ids()
        .map(|c| {
            if c == 0 {
                0
            } else {
                g.add(pres.rep(c), members[rng.random_range(0..members.len())])
            }
        })
        .collect();
    let alt = pres.with_representatives(reps).unwrap();
    let rebased = rebase_phases(&cocycle, &pres, &alt).unwrap();
    let alt_table = lifted_characters(&alt, &rebased);
    let rebased_table = alt_table.labels() == table.labels()
        && (0..table.len()).all(|li| g.ids().all(|x| alt_table.value_at(li, x) == table.value_at(li, x)));

    LiftOutcome {
        deviation: table.deviations().max(),
        complete: table.len() == g.order() && table.elements().len() == g.order(),
        reduces,
        cocycle: cocycle_law(&pres, &cocycle),
        rebased_cocycle: cocycle_law(&alt, &rebased),
        rebased_table,
    }
}
