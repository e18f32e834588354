use num_integer::Integer;

use super::phase::Phase;
use crate::error::{invalid, Error, Result};

/// The linear system `Σ_j k_j r_{ji}/N_{ij} ≡ −p_i/N_{iJ} (mod 1)` in
/// unknowns `k_j ∈ Z_{N_j}`.
///
/// `r[i][j]` is the numerator over `N_{ij} = gcd(N_i, N_j)` and
/// `p[i]` the numerator over `p_den[i]`; all fractions are reduced mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSystem {
    orders: Vec<u64>,
    r: Vec<Vec<i64>>,
    p: Vec<i64>,
    p_den: Vec<u64>,
}

/// All solutions of a twist system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSolution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

impl TwistSystem {
    pub fn new(orders: Vec<u64>, r: Vec<Vec<i64>>, p: Vec<i64>, p_den: Vec<u64>) -> Result<Self> {
        let n = orders.len();
        if orders.contains(&0) || p_den.contains(&0) {
            return invalid("zero order in twist system");
        }
        if r.len() != n || r.iter().any(|row| row.len() != n) || p.len() != n || p_den.len() != n {
            return invalid("twist system dimensions do not match");
        }
        let mut r = r;
        for i in 0..n {
            for j in 0..n {
                let nij = num_integer::gcd(orders[i], orders[j]) as i64;
                r[i][j] = r[i][j].rem_euclid(nij);
            }
        }
        let p = p.iter().zip(&p_den).map(|(&x, &d)| x.rem_euclid(d as i64)).collect();
        Ok(TwistSystem { orders, r, p, p_den })
    }

    /// Builds the system from the twist phases `F(L_i, L_j)` between basis
    /// elements and the targets `F(X, L_i)`.
    pub fn from_phases(orders: Vec<u64>, pairing: &[Vec<Phase>], target: &[Phase]) -> Result<Self> {
        let n = orders.len();
        let mut r = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let nij = num_integer::gcd(orders[i], orders[j]) as i64;
                let q = pairing[i][j].exponent() * nij;
                if !q.is_integer() {
                    return Err(Error::TwistTable(format!(
                        "twist between basis elements {i} and {j} is not an {nij}-th root of unity"
                    )));
                }
                r[i][j] = q.to_integer();
            }
        }
        let p = target.iter().map(|t| *t.exponent().numer()).collect();
        let p_den = target.iter().map(|t| *t.exponent().denom() as u64).collect();
        TwistSystem::new(orders, r, p, p_den)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn pairing(&self, i: usize, j: usize) -> Phase {
        let nij = num_integer::gcd(self.orders[i], self.orders[j]) as i64;
        Phase::from_fraction(self.r[i][j], nij)
    }

    /// Left-hand side of equation `i` at `k`, as a phase.
    pub fn lhs(&self, k: &[u64], i: usize) -> Phase {
        (0..self.orders.len())
            .map(|j| self.pairing(j, i).pow(k[j] as i64))
            .product()
    }

    pub fn rhs(&self, i: usize) -> Phase {
        Phase::from_fraction(-self.p[i], self.p_den[i] as i64)
    }

    pub fn is_solution(&self, k: &[u64]) -> bool {
        (0..self.orders.len()).all(|i| self.lhs(k, i) == self.rhs(i))
    }

    /// Solution set via Smith normal form over `Z / L`, `L` the lcm of
    /// all orders and denominators.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_all(&self) -> Result<CongruenceSolution> {
        let n = self.orders.len();
        let l = self
            .orders
            .iter()
            .chain(&self.p_den)
            .fold(1u64, |a, &b| num_integer::lcm(a, b)) as i128;
        let mut a = vec![vec![0i128; n]; n];
        let mut b = vec![0i128; n];
        for i in 0..n {
            for j in 0..n {
                let nij = num_integer::gcd(self.orders[i], self.orders[j]) as i128;
                a[i][j] = (self.r[j][i] as i128 * (l / nij)).rem_euclid(l);
            }
            b[i] = (-(self.p[i] as i128) * (l / self.p_den[i] as i128)).rem_euclid(l);
        }
        let snf = smith(a, l);
        let c: Vec<i128> = (0..n)
            .map(|i| (0..n).map(|t| snf.u[i][t] * b[t]).sum::<i128>().rem_euclid(l))
            .collect();
        let mut y = vec![0i128; n];
        let mut kernel_y = Vec::new();
        for i in 0..n {
            let d = snf.d[i].rem_euclid(l);
            let g = d.gcd(&l);
            if c[i] % g != 0 {
                return Err(Error::Inconsistent("twist congruence system has no solution".into()));
            }
            let m = l / g;
            if m > 1 {
                let inv = mod_inverse(d / g, m);
                y[i] = ((c[i] / g) * inv).rem_euclid(m);
            }
            if g > 1 || d == 0 {
                let mut e = vec![0i128; n];
                e[i] = m;
                kernel_y.push(e);
            }
        }
        let to_k = |y: &[i128]| -> Vec<u64> {
            (0..n)
                .map(|j| {
                    let v: i128 = (0..n).map(|t| snf.v[j][t] * y[t]).sum();
                    v.rem_euclid(self.orders[j] as i128) as u64
                })
                .collect()
        };
        let particular = to_k(&y);
        let kernel: Vec<Vec<u64>> = kernel_y
            .iter()
            .map(|e| to_k(e))
            .filter(|k| k.iter().any(|&x| x != 0))
            .collect();
        debug_assert!(self.is_solution(&particular));
        Ok(CongruenceSolution { particular, kernel })
    }

    /// True when `Σ_i m_i r_{ij}/N_{ij} ≡ 0` for all `j` forces `m = 0`.
    pub fn is_nondegenerate(&self) -> bool {
        let homogeneous = TwistSystem {
            p: vec![0; self.p.len()],
            ..self.clone()
        };
        homogeneous.solve_all().map(|s| s.kernel.is_empty()).unwrap_or(false)
    }
}

/// Unique solution `k` with `0 ≤ k_j < N_j`.
pub fn solve_congruence_system(sys: &TwistSystem) -> Result<Vec<u64>> {
    let sol = sys.solve_all()?;
    if !sol.kernel.is_empty() {
        return Err(Error::Degenerate(format!(
            "homogeneous system has {} nontrivial kernel generators",
            sol.kernel.len()
        )));
    }
    Ok(sol.particular)
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

struct Smith {
    d: Vec<i128>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

/// Diagonalizes `a` as `d = u a v` with `u`, `v` unimodular.
/// Row transforms are kept mod `modulus`; the column transform is exact.
fn smith(mut a: Vec<Vec<i128>>, modulus: i128) -> Smith {
    let n = a.len();
    let ident = |n: usize| -> Vec<Vec<i128>> { (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect() };
    let mut u = ident(n);
    let mut v = ident(n);
    for t in 0..n {
        loop {
            let mut pivot = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                        u[i][j] = (u[i][j] - q * u[t][j]).rem_euclid(modulus);
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..n {
                        a[i][j] -= q * a[i][t];
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    Smith {
        d: (0..n).map(|i| a[i][i]).collect(),
        u,
        v,
    }
}
