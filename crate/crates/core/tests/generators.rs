use fpres::modular::{verlinde_fusion, ModularSource, Tolerances};
use fpres::wzw::{dominant_weights, ising, su2, sun, weight_count};
use num_rational::Ratio;

#[test]
fn sun_two_matches_closed_form() {
    for k in 1..=8 {
        let a = su2(k).unwrap();
        let b = sun(2, k).unwrap();
        assert_eq!(a.len(), b.len());
        for x in 0..a.len() {
            assert_eq!(a.h(x), b.h(x));
            for y in 0..a.len() {
                assert!((a.s(x, y) - b.s(x, y)).norm() < 1e-12, "k={k} ({x},{y})");
            }
        }
    }
}

#[test]
fn su5_level5() {
    let md = sun(5, 5).unwrap();
    assert_eq!(md.len(), 126);
    assert_eq!(md.central_charge(), Ratio::from_integer(12));
    assert_eq!(md.h(0), Ratio::from_integer(0));
    assert!(md.check_modular().passes(1e-9));
    let f = md.find_label("(1,1,1,1)").unwrap();
    assert_eq!(md.h(f), Ratio::new(3, 2));
    // Conjugation reverses Dynkin labels.
    let a = md.find_label("(2,1,0,0)").unwrap();
    assert_eq!(md.label(md.conj(a)), "(0,0,1,2)");
}

#[test]
fn weight_counts_match_binomials() {
    for n in 2..=5 {
        for k in 1..=5 {
            assert_eq!(dominant_weights(n, k).len() as u128, weight_count(n, k));
        }
    }
}

#[test]
fn generated_theories_are_modular_and_integral() {
    let tol = Tolerances::default();
    let theories = vec![
        ising(),
        su2(1).unwrap(),
        su2(4).unwrap(),
        sun(3, 3).unwrap(),
        sun(4, 2).unwrap(),
    ];
    for md in theories {
        assert!(md.check_modular().passes(1e-9));
        let f = verlinde_fusion(&md, &tol).unwrap();
        assert!(f.max_residual < 1e-6);
        let t0 = md.t_exponent(0) * fpres::abelian::Phase::new(md.central_charge() / 24);
        assert!(t0.is_one());
    }
}

#[test]
fn ising_fusion() {
    let md = ising();
    let f = verlinde_fusion(&md, &Tolerances::default()).unwrap();
    assert_eq!(f.product(2, 2), vec![(0, 1), (1, 1)]);
    let md = su2(2).unwrap();
    let f = verlinde_fusion(&md, &Tolerances::default()).unwrap();
    assert_eq!(f.product(1, 1), vec![(0, 1), (2, 1)]);
}
