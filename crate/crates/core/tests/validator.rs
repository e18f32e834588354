use num_complex::Complex64;

use fpres::currents::{FixedPointBundle, Model};
use fpres::extension::{Extension, ExtensionOptions};
use fpres::modular::{CMatrix, ModularData, Tolerances};
use fpres::validator::{check_fusion_integrality, check_model, realize_table, realize_twist_row, TWIST_TABLE};
use fpres::wzw::{ising, su2};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn one_by_one_bundles_pass() {
    for k in [4, 8] {
        let m = Model::new(su2(k).unwrap(), &tol()).unwrap();
        let r = check_model(&m, 1e-8);
        assert!(r.passed, "{:#?}", r.results);
        assert!(r.result("{3}").unwrap().checked > 0);
    }
}

#[test]
fn half_integer_currents_fail_only_5c() {
    for md in [su2(2).unwrap(), ising()] {
        let m = Model::new(md, &tol()).unwrap();
        let r = check_model(&m, 1e-8);
        for c in &r.results {
            assert_eq!(c.passed, c.id != "{5c}/half-spin", "{c:?}");
        }
        assert!(r.passed);
        assert_eq!(r.result("{5c}").unwrap().checked, 0);
    }
}

#[test]
fn flipped_eta_sign_is_caught() {
    let md = su2(4).unwrap();
    let mut m = Model::new(md.clone(), &tol()).unwrap();
    // S^J = −i squares to −1 like i but breaks {3}.
    let b = FixedPointBundle::new(
        m.source(),
        m.center(),
        1,
        vec![2],
        CMatrix::from_element(1, 1, Complex64::new(0.0, -1.0)),
    )
    .unwrap();
    m.insert_bundle(b);
    let r = check_model(&m, 1e-8);
    assert!(!r.passed);
    let c3 = r.result("{3}").unwrap();
    assert!(!c3.passed && c3.witness.is_some());
}

#[test]
fn three_factor_extension_passes() {
    let base = Model::tensor(&[
        Model::new(su2(4).unwrap(), &tol()).unwrap(),
        Model::new(su2(6).unwrap(), &tol()).unwrap(),
        Model::new(su2(2).unwrap(), &tol()).unwrap(),
    ])
    .unwrap();
    let j = base.center().parse_current(base.source(), "4⊗6⊗2").unwrap();
    let ext = Extension::new(&base, &[j], &ExtensionOptions::default()).unwrap();
    let r = check_model(ext.model(), 1e-8);
    assert!(r.passed, "{:#?}", r.results);
    assert!(r.result("{5c}").unwrap().checked > 0);
    let scan = check_fusion_integrality(ext.model().dense().unwrap(), None);
    assert!(scan.passes(&tol()));
}

#[test]
fn perturbed_s_fails_fusion_scan() {
    let md = su2(3).unwrap();
    let mut s = md.s_matrix().clone();
    s[(1, 2)] += Complex64::new(0.01, 0.0);
    let bad = ModularData::new(
        md.labels().to_vec(),
        md.weights().to_vec(),
        fpres::modular::ModularSource::central_charge(&md),
        s,
        md.conjugation().to_vec(),
    )
    .unwrap();
    assert!(!check_fusion_integrality(&bad, None).passes(&tol()));
}

#[test]
fn twist_table() {
    let rows = realize_table(&tol()).unwrap();
    for r in &rows {
        assert!(r.passed, "row {}", r.row);
    }
    // F = −1 with odd N is not realizable.
    assert!(realize_twist_row(5, &TWIST_TABLE[5], 3, 2, &tol()).is_err());
}
