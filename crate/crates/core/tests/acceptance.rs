//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so the lines show up without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use fpres::abelian::Phase;
use fpres::currents::Model;
use fpres::extension::{Extension, ExtensionOptions};
use fpres::modular::{find_relabeling, verlinde_fusion, ModularData, ModularSource, Tolerances};
use fpres::validator::{check_fusion_integrality, check_model, realize_table, ConditionReport};
use fpres::wzw::{ising, su2, sun, SunCache};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Conditions {1}–{6} of the fixed-point bundles.
const BUNDLE_CONDITIONS: [&str; 10] = ["{1}", "{2}", "{3}", "{4}", "{4a}", "{5}", "{5a}", "{5b}", "{5c}", "{6}"];
/// The exact twist and η algebra.
const TWIST_ALGEBRA: [&str; 4] = ["fprod", "fsym", "spin-rule", "GF"];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn conditions_hold(r: &ConditionReport, ids: &[&str]) -> bool {
    ids.iter().all(|id| r.result(id).is_some_and(|c| c.passed))
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let base = Model::new(su2(4).unwrap(), &tol()).unwrap();
    let ext = match Extension::new(&base, &[1], &ExtensionOptions::default()) {
        Ok(e) => e,
        Err(e) => return verdict(false, e.to_string()),
    };
    let md = ext.model().dense().unwrap();
    let modular = md.check_modular();
    let fusion = match verlinde_fusion(md, &tol()) {
        Ok(f) => f,
        Err(e) => return verdict(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    // Z_3: every product is a single field and the non-vacuum fields have
    // order 3.
    let single = (0..3).all(|a| (0..3).all(|b| fusion.product(a, b) == vec![(fusion.product(a, b)[0].0, 1)]));
    let order3 = (1..3).all(|a| {
        let a2 = fusion.product(a, a)[0].0;
        a2 != 0 && fusion.product(a2, a)[0].0 == 0
    });
    let ok = md.len() == 3
        && modular.passes(1e-9)
        && fusion.max_residual < 1e-6
        && single
        && order3
        && elapsed < Duration::from_secs(1);
    verdict(
        ok,
        format!(
            "{} fields, modular deviation {:.1e}, fusion residual {:.1e}, Z3 ring {}, {:.0?}",
            md.len(),
            modular.max(),
            fusion.max_residual,
            single && order3,
            elapsed
        ),
    )
}

struct Su5 {
    base: Model,
    ext: Extension,
    cold: Duration,
    warm: Duration,
}

fn su5_extension(md: ModularData) -> (Model, Extension) {
    let m = Model::new(md, &tol()).unwrap();
    let base = Model::tensor(&[m.clone(), m]).unwrap();
    let jj = base
        .center()
        .parse_current(base.source(), "(5,0,0,0)⊗(5,0,0,0)")
        .unwrap();
    let ext = Extension::new(&base, &[jj], &ExtensionOptions::default()).unwrap();
    (base, ext)
}

fn su5() -> Su5 {
    let dir = tempfile::tempdir().unwrap();
    let cache = SunCache::new(dir.path());
    let start = Instant::now();
    let (base, ext) = su5_extension(cache.load_or_generate(5, 5).unwrap());
    let cold = start.elapsed();
    let start = Instant::now();
    let _ = su5_extension(cache.lookup(5, 5).expect("cached entry"));
    let warm = start.elapsed();
    Su5 { base, ext, cold, warm }
}

fn criterion_2(s: &Su5, report: &ConditionReport) -> Verdict {
    let ext = &s.ext;
    let base = &s.base;
    let model = ext.model();
    let q = ext.residual().quotient();
    let j0 = base
        .center()
        .parse_current(base.source(), "(5,0,0,0)⊗(0,0,0,0)")
        .unwrap();
    let z5 = q.orders() == [5] && ext.residual().class_of(j0).is_some_and(|c| q.element_order(c) == 5);
    let bundles: Vec<_> = model.bundles().values().collect();
    let max_entry = |m: &fpres::modular::CMatrix| m.iter().fold(0.0f64, |x, z| x.max(z.norm()));
    let asym = bundles
        .iter()
        .map(|b| max_entry(&(b.s_matrix() - b.s_matrix().transpose())))
        .fold(f64::INFINITY, f64::min);
    let mut distinct = f64::INFINITY;
    for x in 0..bundles.len() {
        for y in x + 1..bundles.len() {
            distinct = distinct.min(max_entry(&(bundles[x].s_matrix() - bundles[y].s_matrix())));
        }
    }
    let dev = report.max_deviation(&BUNDLE_CONDITIONS);
    let six = report.result("{6}").map_or(0, |c| c.checked);
    let ok = z5
        && bundles.len() == 4
        && asym > 1e-3
        && distinct > 1e-3
        && conditions_hold(report, &BUNDLE_CONDITIONS)
        && dev < 1e-8
        && six > 0
        && s.cold < Duration::from_secs(60)
        && s.warm < Duration::from_secs(5);
    verdict(
        ok,
        format!(
            "residual Z5 {z5}, {} bundles, min asymmetry {asym:.3}, min pairwise difference {distinct:.3}, \
             conditions deviation {dev:.1e} ({six} {{6}} checks), cold {:.1?}, cached {:.1?}",
            bundles.len(),
            s.cold,
            s.warm
        ),
    )
}

fn three_factor() -> (Model, Extension) {
    let m = |k| Model::new(su2(k).unwrap(), &tol()).unwrap();
    let base = Model::tensor(&[m(4), m(6), m(2)]).unwrap();
    let j = base.center().parse_current(base.source(), "4⊗6⊗2").unwrap();
    let ext = Extension::new(&base, &[j], &ExtensionOptions::default()).unwrap();
    (base, ext)
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let (base, ext) = three_factor();
    let src = base.source();
    let c = base.center();
    let g = c.group();
    let a = src.find_label("2⊗1⊗1").unwrap();
    let a2 = src.find_label("4⊗3⊗1").unwrap();
    // Expected representatives, each up to the untwisted stabilizer.
    let mut reps_ok = true;
    for (field, want) in [(a, &["4⊗0⊗0", "4⊗0⊗2"][..]), (a2, &["0⊗6⊗2"][..])] {
        let orb = &ext.orbits()[ext.orbit_of(field).unwrap()];
        for w in want {
            let x = c.parse_current(src, w).unwrap();
            reps_ok &= (1..4).any(|q| {
                orb.representative(q)
                    .is_some_and(|r| orb.untwisted().contains(g.sub(r, x)))
            });
        }
    }
    let (oa, ob) = (ext.orbit_of(a).unwrap(), ext.orbit_of(a2).unwrap());
    let mut opposite = true;
    for k in 1..4 {
        for l in (1..4).filter(|&l| l != k) {
            let fa = ext.extended_twist(&base, oa, k, l).ok().flatten();
            let fb = ext.extended_twist(&base, ob, k, l).ok().flatten();
            opposite &= matches!((fa, fb), (Some(x), Some(y)) if x == y * Phase::from_fraction(1, 2));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        reps_ok && opposite && elapsed < Duration::from_secs(5),
        format!("representatives match {reps_ok}, twists opposite {opposite}, {elapsed:.1?}"),
    )
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let sys = common::random_nondegenerate(&mut rng, 32);
        if let Err(e) = common::congruence_trial(&sys) {
            failures.push(e);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "200 systems, {} mismatches, {elapsed:.1?}{}",
            failures.len(),
            failures.first().map(|e| format!(": {e}")).unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut bad = 0;
    for _ in 0..100 {
        let out = common::lift_trial(&mut rng, 64);
        worst = worst.max(out.deviation);
        bad += usize::from(!out.ok(1e-12));
    }
    verdict(
        bad == 0,
        format!("100 pairs, {bad} failures, worst character deviation {worst:.1e}"),
    )
}

fn criterion_6(reports: &[(&str, &ConditionReport)]) -> Verdict {
    let mut failed = Vec::new();
    let mut checked = 0;
    for (name, r) in reports {
        if !conditions_hold(r, &TWIST_ALGEBRA) {
            failed.push(*name);
        }
        checked += TWIST_ALGEBRA
            .iter()
            .filter_map(|id| r.result(id))
            .map(|c| c.checked)
            .sum::<usize>();
    }
    verdict(
        failed.is_empty() && checked > 0,
        format!(
            "{} tables, {checked} identities checked, failing: {failed:?}",
            reports.len()
        ),
    )
}

fn criterion_7(s: &Su5) -> Verdict {
    let base = &s.base;
    let ext = &s.ext;
    let parse = |l: &str| base.center().parse_current(base.source(), l).unwrap();
    let class = ext.residual().class_of(parse("(5,0,0,0)⊗(0,0,0,0)")).unwrap();
    let two = match Extension::new(ext.model(), &[class], &ExtensionOptions::default()) {
        Ok(e) => e,
        Err(e) => return verdict(false, format!("second step: {e}")),
    };
    let one = Extension::new(
        base,
        &[parse("(5,0,0,0)⊗(0,0,0,0)"), parse("(0,0,0,0)⊗(5,0,0,0)")],
        &ExtensionOptions::default(),
    )
    .unwrap();
    let (a, b) = (two.model().dense().unwrap(), one.model().dense().unwrap());
    if a.len() != b.len() {
        return verdict(false, format!("{} fields in two steps, {} in one", a.len(), b.len()));
    }
    let Some(p) = find_relabeling(a, b, 1e-8) else {
        return verdict(false, "no relabeling matches");
    };
    let mut dev = 0.0f64;
    for x in 0..a.len() {
        for y in 0..a.len() {
            dev = dev.max((a.s(x, y) - b.s(p[x], p[y])).norm());
        }
    }
    verdict(dev < 1e-8, format!("{} fields, max |S| difference {dev:.1e}", a.len()))
}

fn criterion_8() -> Verdict {
    match realize_table(&tol()) {
        Ok(rows) => {
            let failing: Vec<usize> = rows.iter().filter(|r| !r.passed).map(|r| r.row).collect();
            verdict(failing.is_empty(), format!("{} rows, failing {failing:?}", rows.len()))
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

#[test]
fn acceptance() {
    let mut lines: Vec<(usize, &str, Verdict)> = Vec::new();
    lines.push((1, "su2(4) extension", criterion_1()));

    let s = su5();
    let su5_report = check_model(s.ext.model(), 1e-8);
    lines.push((2, "SU(5)_5^2 diagonal extension", criterion_2(&s, &su5_report)));
    lines.push((3, "field-dependent twists", criterion_3()));
    lines.push((4, "congruence solver", criterion_4()));
    lines.push((5, "lifted characters", criterion_5()));

    let mut bases: Vec<(String, Model)> = (1..=8)
        .map(|k| (format!("su2({k})"), Model::new(su2(k).unwrap(), &tol()).unwrap()))
        .collect();
    bases.push(("ising".into(), Model::new(ising(), &tol()).unwrap()));
    bases.push(("su3(3)".into(), Model::new(sun(3, 3).unwrap(), &tol()).unwrap()));
    let (three_base, three_ext) = three_factor();
    bases.push(("su2(4)xsu2(6)xsu2(2)".into(), three_base));
    bases.push(("SU(5)_5^2".into(), s.base.clone()));
    let mut reports: Vec<(String, ConditionReport)> =
        bases.iter().map(|(n, m)| (n.clone(), check_model(m, 1e-8))).collect();
    reports.push(("three-factor extension".into(), check_model(three_ext.model(), 1e-8)));
    let borrowed: Vec<(&str, &ConditionReport)> = reports
        .iter()
        .map(|(n, r)| (n.as_str(), r))
        .chain([("SU(5)_5^2 extension", &su5_report)])
        .collect();
    lines.push((6, "twist algebra", criterion_6(&borrowed)));
    lines.push((7, "two-step extension", criterion_7(&s)));
    lines.push((8, "twist table realization", criterion_8()));

    let md = s.ext.model().dense().unwrap();
    let rows: Vec<usize> = (0..md.len()).step_by(37).collect();
    let fusion = check_fusion_integrality(md, Some(&rows));

    let mut err = std::io::stderr().lock();
    for (n, name, v) in &lines {
        let status = if v.passed { "PASS" } else { "FAIL" };
        writeln!(err, "{status} criterion {n} ({name}): {}", v.detail).unwrap();
    }
    writeln!(
        err,
        "info: SU(5)_5^2 extension fusion rows {} residual {:.1e}",
        fusion.rows, fusion.max_residual
    )
    .unwrap();
    let failed: Vec<usize> = lines.iter().filter(|l| !l.2.passed).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
