use num_complex::Complex64;

use super::{ModularData, ModularSource};
use crate::abelian::Phase;

/// A permutation `p` with `S'_{p(x) p(y)} = S_{xy}` and `h'_{p(x)} = h_x`
/// modulo 1, found by backtracking over fields with equal invariants.
/// The vacuum must map to the vacuum.
pub fn find_relabeling(a: &ModularData, b: &ModularData, tol: f64) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n || a.central_charge() != b.central_charge() {
        return None;
    }
    let sorted_row = |md: &ModularData, x: usize| {
        let mut r: Vec<f64> = (0..n).map(|y| md.s(x, y).norm()).collect();
        r.sort_by(f64::total_cmp);
        r
    };
    let rows_b: Vec<Vec<f64>> = (0..n).map(|y| sorted_row(b, y)).collect();
    let close = |u: Complex64, v: Complex64| (u - v).norm() <= tol;
    let mut candidates = Vec::with_capacity(n);
    for x in 0..n {
        let rx = sorted_row(a, x);
        let c: Vec<usize> = (0..n)
            .filter(|&y| {
                (x == 0) == (y == 0)
                    && Phase::new(a.h(x)) == Phase::new(b.h(y))
                    && close(a.s(0, x), b.s(0, y))
                    && rx.iter().zip(&rows_b[y]).all(|(u, v)| (u - v).abs() <= tol)
            })
            .collect();
        if c.is_empty() {
            return None;
        }
        candidates.push(c);
    }
    // Most constrained fields first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(a, b, &order, &candidates, 0, &mut perm, &mut used, tol) {
        Some(perm)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    a: &ModularData,
    b: &ModularData,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    perm: &mut [usize],
    used: &mut [bool],
    tol: f64,
) -> bool {
    let Some(&x) = order.get(depth) else { return true };
    for &y in &candidates[x] {
        if used[y] {
            continue;
        }
        let consistent = order[..depth].iter().chain(std::iter::once(&x)).all(|&z| {
            let pz = if z == x { y } else { perm[z] };
            (a.s(x, z) - b.s(y, pz)).norm() <= tol
        });
        if !consistent {
            continue;
        }
        perm[x] = y;
        used[y] = true;
        if assign(a, b, order, candidates, depth + 1, perm, used, tol) {
            return true;
        }
        used[y] = false;
        perm[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::CMatrix;
    use crate::wzw::su2;

    #[test]
    fn recovers_a_shuffle() {
        let md = su2(6).unwrap();
        let p = [0usize, 6, 2, 4, 3, 5, 1];
        let n = md.len();
        let mut s = CMatrix::zeros(n, n);
        let mut h = vec![md.h(0); n];
        let mut labels = vec![String::new(); n];
        for x in 0..n {
            h[p[x]] = md.h(x);
            labels[p[x]] = md.label(x);
            for y in 0..n {
                s[(p[x], p[y])] = md.s(x, y);
            }
        }
        let shuffled = ModularData::new(labels, h, md.central_charge(), s, (0..n).collect()).unwrap();
        let q = find_relabeling(&md, &shuffled, 1e-10).unwrap();
        for x in 0..n {
            for y in 0..n {
                assert!((md.s(x, y) - shuffled.s(q[x], q[y])).norm() < 1e-10);
            }
        }
        assert!(find_relabeling(&md, &su2(5).unwrap(), 1e-10).is_none());
    }
}
