use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::modular::{conjugation_from_s, CMatrix, ModularData, Tolerances};

pub const DEFAULT_WEIGHT_CAP: usize = 5000;

/// Number of level-`k` dominant weights of SU(N), `binom(N−1+k, k)`.
pub fn weight_count(n: u32, k: u32) -> u128 {
    let (top, r) = ((n - 1 + k) as u128, k as u128);
    let mut c = 1u128;
    for i in 0..r {
        c = c.saturating_mul(top - i) / (i + 1);
    }
    c
}

/// Dynkin labels `(λ_1..λ_{N−1})` with `Σ λ_i ≤ k`, lexicographic so that
/// the vacuum comes first.
pub fn dominant_weights(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    rec(0, k, &mut vec![0; (n - 1) as usize], &mut out);
    out
}

pub fn sun(n: u32, k: u32) -> Result<ModularData> {
    sun_with_cap(n, k, DEFAULT_WEIGHT_CAP)
}

/// SU(N) at level `k` via the Kac–Peterson formula.
pub fn sun_with_cap(n: u32, k: u32, cap: usize) -> Result<ModularData> {
    if n < 2 || k == 0 {
        return invalid("SU(N)_k needs N ≥ 2 and k ≥ 1");
    }
    if n > 9 {
        return Err(Error::ResourceLimit(format!("Weyl group of SU({n}) too large")));
    }
    let count = weight_count(n, k);
    if count > cap as u128 {
        return Err(Error::ResourceLimit(format!(
            "SU({n})_{k} has {count} fields, cap is {cap}"
        )));
    }
    let nn = n as i64;
    let kk = k as i64;
    let weights = dominant_weights(n, k);
    let len = weights.len();

    // Orthogonal coordinates of λ+ρ: x_i = Σ_{j≥i} (λ_j + 1), x_N = 0.
    let xs: Vec<Vec<i64>> = weights
        .iter()
        .map(|w| {
            let mut x = vec![0i64; n as usize];
            for i in (0..(n - 1) as usize).rev() {
                x[i] = x[i + 1] + w[i] as i64 + 1;
            }
            x
        })
        .collect();
    // N times the traceless projection, so that ⟨x, y⟩ = Σ x_i Y_i / N.
    let ys: Vec<Vec<i64>> = xs
        .iter()
        .map(|x| {
            let sum: i64 = x.iter().sum();
            x.iter().map(|&v| nn * v - sum).collect()
        })
        .collect();

    let modulus = nn * (kk + nn);
    let roots: Vec<Complex64> = (0..modulus)
        .map(|j| {
            let a = -2.0 * std::f64::consts::PI * j as f64 / modulus as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    let perms = signed_permutations(n as usize);

    let pos_roots = (nn * (nn - 1) / 2) as u32;
    let i_pow = Complex64::new(0.0, 1.0).powu(pos_roots % 4);
    let norm = i_pow / ((nn as f64).sqrt() * ((kk + nn) as f64).powf((nn - 1) as f64 / 2.0));

    let mut s = CMatrix::zeros(len, len);
    for a in 0..len {
        for b in a..len {
            let x = &xs[a];
            let y = &ys[b];
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, sign) in &perms {
                let mut e = 0i64;
                for (i, &pi) in p.iter().enumerate() {
                    e += x[pi] * y[i];
                }
                let z = roots[e.rem_euclid(modulus) as usize];
                if *sign {
                    acc -= z;
                } else {
                    acc += z;
                }
            }
            let v = norm * acc;
            s[(a, b)] = v;
            s[(b, a)] = v;
        }
    }

    let h = weights
        .iter()
        .map(|w| {
            // N ⟨λ, λ+2ρ⟩ from the inverse Cartan matrix min(i,j)(N−max(i,j))/N.
            let mut num = 0i64;
            for i in 0..w.len() {
                for j in 0..w.len() {
                    let g = (i.min(j) as i64 + 1) * (nn - (i.max(j) as i64 + 1));
                    num += w[i] as i64 * (w[j] as i64 + 2) * g;
                }
            }
            Ratio::new(num, 2 * nn * (kk + nn))
        })
        .collect();
    let labels = weights
        .iter()
        .map(|w| {
            let parts: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let c = Ratio::new(kk * (nn * nn - 1), kk + nn);
    let tol = Tolerances::default();
    let conj = conjugation_from_s(&s, &tol)?;
    let md = ModularData::new(labels, h, c, s, conj)?;
    md.validate(&tol)?;
    Ok(md)
}

/// All permutations of `0..n` with their parity (`true` for odd).
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![(p.clone(), false)];
    let mut odd = false;
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            odd = !odd;
            out.push((p.clone(), odd));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::ModularSource;

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, odd) in &perms {
            let mut inv = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            assert_eq!(inv % 2 == 1, *odd);
        }
    }

    #[test]
    fn weight_enumeration() {
        let w = dominant_weights(3, 2);
        assert_eq!(w.len() as u128, weight_count(3, 2));
        assert_eq!(w[0], vec![0, 0]);
        assert_eq!(weight_count(5, 5), 126);
    }

    #[test]
    fn su3_level_one() {
        let md = sun(3, 1).unwrap();
        assert_eq!(md.len(), 3);
        assert_eq!(md.h(1), Ratio::new(1, 3));
        assert_eq!(md.conj(1), 2);
        assert_eq!(md.central_charge(), Ratio::from_integer(2));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(sun_with_cap(5, 5, 100), Err(Error::ResourceLimit(_))));
    }
}
