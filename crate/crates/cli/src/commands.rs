use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use fpres::abelian::format_rational;
use fpres::currents::{BundleFile, Model};
use fpres::extension::{Conventions, Extension, ExtensionOptions, ExtensionReport};
use fpres::modular::{verlinde_fusion, ModularData, ModularDataFile, ModularSource, Tolerances};
use fpres::validator::{check_fusion_integrality, check_model, ConditionReport};
use fpres::wzw::{ising, su2, sun_with_cap, SunCache};
use fpres::Error;

use crate::manifest::{sha256_hex, Outputs, RunManifest, ToleranceSettings, MANIFEST_SCHEMA};
use crate::{Cli, Command, Family, Outcome};

/// Largest theory for which `fusion` writes the full tensor.
const FUSION_LIMIT: usize = 400;
/// Theories up to this size get every Verlinde row checked.
const FULL_SCAN: usize = 100;
/// Rows scanned on larger theories; each costs a dense matrix product.
const SCAN_ROWS: usize = 24;

type Hashes = BTreeMap<String, String>;

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Generate { family } => generate(cli, family),
        Command::Tensor { inputs } => tensor(cli, inputs),
        Command::Currents { inputs, bundle_dir } => currents(cli, inputs, bundle_dir.as_deref()),
        Command::Extend {
            inputs,
            currents,
            bundles,
        } => extend(cli, inputs, currents, bundles),
        Command::Validate { inputs, bundles } => validate(cli, inputs, bundles),
        Command::Fusion { input } => fusion(cli, input),
    }
}

fn tolerances() -> Tolerances {
    Tolerances::default()
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn manifest(cli: &Cli, command: &str, inputs: Hashes) -> RunManifest {
    let c = Conventions::from_seed(cli.seed_conventions);
    let tol = tolerances();
    RunManifest {
        schema: MANIFEST_SCHEMA.into(),
        tool: format!("fpres {}", env!("CARGO_PKG_VERSION")),
        command: command.into(),
        arguments: std::env::args().skip(1).collect(),
        inputs,
        conventions: crate::manifest::Conventions {
            seed: cli.seed_conventions,
            largest_orbit_rep: c.largest_orbit_rep,
            largest_coset_member: c.largest_coset_member,
            root_offset: c.root_offset,
        },
        tolerances: ToleranceSettings {
            matrix: tol.matrix,
            integer: tol.integer,
            check: cli.tolerance,
        },
        outputs: BTreeMap::new(),
    }
}

/// Writes a single-file result to `--out` plus `<out>.manifest.json`, or
/// prints it.
fn emit(cli: &Cli, command: &str, inputs: Hashes, text: String, mut extra: Outputs) -> Result<()> {
    match &cli.out {
        Some(path) => {
            extra.add(path.clone(), text);
            let mpath = PathBuf::from(format!("{}.manifest.json", path.display()));
            extra.write(manifest(cli, command, inputs), &mpath)
        }
        None => {
            print!("{text}");
            extra.write_unrecorded()
        }
    }
}

fn read_input(path: &Path, hashes: &mut Hashes) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    hashes.insert(path.display().to_string(), sha256_hex(&bytes));
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

fn load_data(path: &Path, hashes: &mut Hashes) -> Result<ModularData> {
    let text = read_input(path, hashes)?;
    ModularData::from_json(&text, &tolerances()).with_context(|| format!("loading {}", path.display()))
}

/// One theory, or the lazy tensor product of several, with every bundle
/// that follows from `S` alone.
fn load_model(paths: &[PathBuf], hashes: &mut Hashes) -> Result<Model> {
    let models = paths
        .iter()
        .map(|p| Ok(Model::new(load_data(p, hashes)?, &tolerances())?))
        .collect::<Result<Vec<_>>>()?;
    if models.len() == 1 {
        return Ok(models.into_iter().next().expect("one model"));
    }
    Ok(Model::tensor(&models)?)
}

fn load_bundles(model: &mut Model, paths: &[PathBuf], tol: f64, hashes: &mut Hashes) -> Result<()> {
    for path in paths {
        let text = read_input(path, hashes)?;
        let file: BundleFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let b = file
            .to_bundle(model.source(), model.center(), tol)
            .with_context(|| format!("loading {}", path.display()))?;
        model.insert_bundle(b);
    }
    Ok(())
}

fn generate(cli: &Cli, family: &Family) -> Result<Outcome> {
    let (md, provenance) = match *family {
        Family::Su2 { k } => {
            if k as usize + 1 > cli.max_fields {
                return Err(Error::ResourceLimit(format!("su2 level {k} exceeds {} fields", cli.max_fields)).into());
            }
            (su2(k)?, json!({"family": "su2", "k": k}))
        }
        Family::SuN { n, k } => {
            let md = match &cli.cache_dir {
                Some(dir) => SunCache::new(dir).with_cap(cli.max_fields).load_or_generate(n, k)?,
                None => sun_with_cap(n, k, cli.max_fields)?,
            };
            (md, json!({"family": "suN", "N": n, "k": k}))
        }
        Family::Ising => (ising(), json!({"family": "ising"})),
    };
    let text = ModularDataFile::from_data(&md, Some(provenance)).to_string_pretty() + "\n";
    emit(cli, "generate", Hashes::new(), text, Outputs::new())?;
    Ok(Outcome::Passed)
}

fn tensor(cli: &Cli, inputs: &[PathBuf]) -> Result<Outcome> {
    let mut hashes = Hashes::new();
    let mut factors = Vec::new();
    let mut size = 1usize;
    for p in inputs {
        let md = load_data(p, &mut hashes)?;
        size = size.saturating_mul(md.len());
        if size > cli.max_fields {
            return Err(Error::ResourceLimit(format!("tensor product exceeds {} fields", cli.max_fields)).into());
        }
        factors.push(md);
    }
    let md = factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.tensor(f));
    let text = ModularDataFile::from_data(&md, None).to_string_pretty() + "\n";
    emit(cli, "tensor", hashes, text, Outputs::new())?;
    Ok(Outcome::Passed)
}

fn currents(cli: &Cli, inputs: &[PathBuf], bundle_dir: Option<&Path>) -> Result<Outcome> {
    let mut hashes = Hashes::new();
    let model = load_model(inputs, &mut hashes)?;
    let src = model.source();
    let center = model.center();
    let g = center.group();
    let list: Vec<Value> = g
        .ids()
        .map(|e| {
            let field = center.field(e);
            json!({
                "element": e,
                "field": field,
                "label": src.label(field),
                "order": g.element_order(e),
                "spin": format_rational(&center.spin(src, e).exponent()),
                "fixed_points": model.fixed_points(e).len(),
                "bundle": model.bundle(e).is_some(),
            })
        })
        .collect();
    let text = to_json(&json!({
        "schema": "currents v1",
        "fields": src.len(),
        "group_orders": g.orders(),
        "currents": list,
    }))?;
    let mut extra = Outputs::new();
    if let Some(dir) = bundle_dir {
        for (&e, b) in model.bundles() {
            let file = BundleFile::from_bundle(src, center, b);
            extra.add(dir.join(format!("current-{}.json", center.field(e))), to_json(&file)?);
        }
    }
    emit(cli, "currents", hashes, text, extra)?;
    Ok(Outcome::Passed)
}

/// Verlinde rows to scan: all of them for small theories, an even spread
/// for large ones.
fn scan_rows(n: usize) -> Option<Vec<usize>> {
    (n > FULL_SCAN).then(|| (0..n).step_by(n.div_ceil(SCAN_ROWS)).collect())
}

fn report_failures(report: &ConditionReport) {
    for r in report.results.iter().filter(|r| !r.passed && r.enforced) {
        eprintln!(
            "condition {} failed: deviation {:e}{}",
            r.id,
            r.max_deviation,
            r.witness
                .as_deref()
                .map(|w| format!(", witness {w}"))
                .unwrap_or_default()
        );
    }
    if let Some(f) = &report.fusion {
        if !f.passes(&tolerances()) {
            eprintln!(
                "fusion rules not integral: residual {:e} at {:?}",
                f.max_residual, f.worst
            );
        }
    }
}

fn extend(cli: &Cli, inputs: &[PathBuf], currents: &[String], bundles: &[PathBuf]) -> Result<Outcome> {
    let mut hashes = Hashes::new();
    let mut base = load_model(inputs, &mut hashes)?;
    load_bundles(&mut base, bundles, cli.tolerance, &mut hashes)?;
    let gens = currents
        .iter()
        .map(|c| base.center().parse_current(base.source(), c))
        .collect::<fpres::Result<Vec<_>>>()?;
    let opts = ExtensionOptions {
        conventions: Conventions::from_seed(cli.seed_conventions),
        check_tolerance: cli.tolerance,
        ..ExtensionOptions::default()
    };
    let ext = Extension::new(&base, &gens, &opts)?;
    let model = ext.model();

    let mut conditions = check_model(model, cli.tolerance);
    let md = model.dense().expect("extended theories are dense");
    let rows = scan_rows(md.len());
    conditions.attach_fusion(check_fusion_integrality(md, rows.as_deref()), tolerances().integer);
    report_failures(&conditions);
    let mut report = ExtensionReport::new(&ext, &base, cli.tolerance);
    report.conditions = Some(serde_json::to_value(&conditions)?);
    let report_text = to_json(&report)?;
    let outcome = if conditions.passed {
        Outcome::Passed
    } else {
        Outcome::Failed
    };

    let Some(dir) = &cli.out else {
        print!("{report_text}");
        return Ok(outcome);
    };
    let mut out = Outputs::new();
    let provenance = json!({"extension_of": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(), "currents": currents});
    out.add(
        dir.join("extended.json"),
        ModularDataFile::from_data(md, Some(provenance)).to_string_pretty() + "\n",
    );
    for (&class, b) in model.bundles() {
        let file = BundleFile::from_bundle(model.source(), model.center(), b);
        out.add(dir.join("bundles").join(format!("class-{class}.json")), to_json(&file)?);
    }
    out.add(dir.join("report.json"), report_text);
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    out.write(manifest(cli, "extend", hashes), &dir.join("manifest.json"))?;
    Ok(outcome)
}

fn validate(cli: &Cli, inputs: &[PathBuf], bundles: &[PathBuf]) -> Result<Outcome> {
    let mut hashes = Hashes::new();
    let mut model = load_model(inputs, &mut hashes)?;
    load_bundles(&mut model, bundles, cli.tolerance, &mut hashes)?;
    let mut report = check_model(&model, cli.tolerance);
    if let Some(md) = model.dense() {
        let rows = scan_rows(md.len());
        report.attach_fusion(check_fusion_integrality(md, rows.as_deref()), tolerances().integer);
    }
    report_failures(&report);
    emit(cli, "validate", hashes, to_json(&report)?, Outputs::new())?;
    Ok(if report.passed {
        Outcome::Passed
    } else {
        Outcome::Failed
    })
}

fn fusion(cli: &Cli, input: &Path) -> Result<Outcome> {
    let mut hashes = Hashes::new();
    let md = load_data(input, &mut hashes)?;
    let n = md.len();
    if n > FUSION_LIMIT.min(cli.max_fields) {
        return Err(Error::ResourceLimit(format!(
            "full fusion tensor of {n} fields exceeds the limit of {}",
            FUSION_LIMIT.min(cli.max_fields)
        ))
        .into());
    }
    let t = verlinde_fusion(&md, &tolerances())?;
    let table: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|a| (0..n).map(|b| (0..n).map(|c| t.get(a, b, c)).collect()).collect())
        .collect();
    // Compact: the table has n³ entries.
    let text = serde_json::to_string(&json!({
        "schema": "fusion-table v1",
        "labels": md.labels(),
        "N": table,
    }))? + "\n";
    emit(cli, "fusion", hashes, text, Outputs::new())?;
    Ok(Outcome::Passed)
}
