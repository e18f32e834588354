use num_complex::Complex64;
use proptest::prelude::*;

use fpres::currents::{BundleFile, Model};
use fpres::modular::Tolerances;
use fpres::wzw::{ising, su2, sun};

fn models() -> Vec<Model> {
    let tol = Tolerances::default();
    let mut out: Vec<Model> = (1..=8).map(|k| Model::new(su2(k).unwrap(), &tol).unwrap()).collect();
    out.push(Model::new(ising(), &tol).unwrap());
    for (n, k) in [(3, 3), (3, 6), (4, 4)] {
        out.push(Model::new(sun(n, k).unwrap(), &tol).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `S_{Ja,b} = e^{2πi Q_J(b)} S_{ab}` and `Q` is additive in the current.
    #[test]
    fn charges_match_s(pick in 0usize..12, j in 0usize..64, k in 0usize..64) {
        let models = models();
        let m = &models[pick];
        let (src, c) = (m.source(), m.center());
        let (j, k) = (j % c.order(), k % c.order());
        let g = c.group();
        for a in 0..src.len() {
            let sum = c.charge(src, j, a) * c.charge(src, k, a);
            prop_assert_eq!(c.charge(src, g.add(j, k), a), sum);
            for b in 0..src.len() {
                let lhs = src.s(c.act(j, a), b);
                let rhs = c.charge(src, j, b).to_complex() * src.s(a, b);
                prop_assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    /// Orbit sizes times stabilizer orders give the group order.
    #[test]
    fn orbit_stabilizer(pick in 0usize..12) {
        let models = models();
        let m = &models[pick];
        let c = m.center();
        let whole = fpres::abelian::Subgroup::whole(c.group());
        for a in 0..m.source().len() {
            prop_assert_eq!(c.orbit(&whole, a).len() * c.stabilizer(a).len(), c.order());
        }
    }
}

#[test]
fn bundle_file_round_trip() {
    let m = Model::new(su2(4).unwrap(), &Tolerances::default()).unwrap();
    let b = m.bundle(1).unwrap();
    let file = BundleFile::from_bundle(m.source(), m.center(), b);
    let text = serde_json::to_string(&file).unwrap();
    let back: BundleFile = serde_json::from_str(&text).unwrap();
    let b2 = back.to_bundle(m.source(), m.center(), 1e-12).unwrap();
    assert_eq!(b2.fixed(), b.fixed());
    assert_eq!(b2.s_matrix(), b.s_matrix());
    // su2(4), J = 4, a = 2: t = i, S^J = t^{-3} = i, η = −1.
    assert!((b.s_matrix()[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    assert!((b.eta(2).unwrap() + 1.0).norm() < 1e-12);
}

#[test]
fn corrupted_bundle_file_is_rejected() {
    let m = Model::new(su2(4).unwrap(), &Tolerances::default()).unwrap();
    let mut file = BundleFile::from_bundle(m.source(), m.center(), m.bundle(1).unwrap());
    file.eta[0] = [1.0, 0.0];
    assert!(file.to_bundle(m.source(), m.center(), 1e-8).is_err());
}
