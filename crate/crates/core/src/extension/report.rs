use serde::Serialize;

use super::{EtaCheck, Extension, TwistCheck};
use crate::currents::Model;
use crate::modular::ModularReport;

pub const REPORT_SCHEMA: &str = "extension-report v1";

/// Machine-readable summary of an extension.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub schema: String,
    pub base_fields: usize,
    /// Field labels of the extension currents.
    pub extension_group: Vec<String>,
    pub local_currents: Vec<String>,
    pub residual_orders: Vec<u64>,
    pub extended_fields: usize,
    pub orbits: Vec<OrbitEntry>,
    pub bundles: Vec<BundleEntry>,
    pub recombinations: Vec<RecombinationEntry>,
    /// Extended fields of quantum dimension one outside the residual center.
    pub extra_currents: Vec<String>,
    pub modular: ModularReport,
    pub twist_checks: CheckSummary,
    pub eta_checks: CheckSummary,
    /// Condition-check results attached by the caller.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    pub representative: String,
    pub size: usize,
    /// `|T_a|`, `|S_a|`, `|U_a|`.
    pub stabilizers: [usize; 3],
    /// Extended field ids of the orbit.
    pub fields: Vec<usize>,
    /// `(residual class, R_a as a current label)`.
    pub representatives: Vec<(usize, String)>,
    pub twisted_classes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleEntry {
    pub class: usize,
    pub current: String,
    pub fixed_fields: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecombinationEntry {
    pub orbit: String,
    pub class: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub count: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

impl CheckSummary {
    fn twists(checks: &[TwistCheck]) -> Self {
        let failures = checks.iter().filter(|c| !c.agrees).count();
        CheckSummary {
            count: checks.len(),
            failures,
            max_deviation: if failures == 0 { 0.0 } else { f64::INFINITY },
        }
    }

    fn etas(checks: &[EtaCheck], tol: f64) -> Self {
        CheckSummary {
            count: checks.len(),
            failures: checks
                .iter()
                .filter(|c| c.deviation.is_nan() || c.deviation > tol)
                .count(),
            max_deviation: checks.iter().fold(0.0, |m, c| m.max(c.deviation)),
        }
    }
}

impl ExtensionReport {
    pub fn new(ext: &Extension, base: &Model, tol: f64) -> Self {
        let src = base.source();
        let center = base.center();
        let cur = |e: usize| src.label(center.field(e));
        let model = ext.model();
        let md = model.source();
        let q = ext.residual().quotient();
        ExtensionReport {
            schema: REPORT_SCHEMA.into(),
            base_fields: src.len(),
            extension_group: ext.extension_group().members().iter().map(|&e| cur(e)).collect(),
            local_currents: ext.local_currents().members().iter().map(|&e| cur(e)).collect(),
            residual_orders: q.orders().to_vec(),
            extended_fields: md.len(),
            orbits: ext
                .orbits()
                .iter()
                .map(|o| OrbitEntry {
                    representative: src.label(o.rep),
                    size: o.members.len(),
                    stabilizers: [o.chain.full.len(), o.chain.in_h.len(), o.untwisted().len()],
                    fields: (o.first_field..o.first_field + o.n_labels()).collect(),
                    representatives: q
                        .ids()
                        .skip(1)
                        .filter_map(|c| o.representative(c).map(|r| (c, cur(r))))
                        .collect(),
                    twisted_classes: o.twisted_classes.clone(),
                })
                .collect(),
            bundles: model
                .bundles()
                .values()
                .map(|b| BundleEntry {
                    class: b.current(),
                    current: md.label(model.center().field(b.current())),
                    fixed_fields: b.len(),
                })
                .collect(),
            recombinations: ext
                .recombinations()
                .iter()
                .map(|r| RecombinationEntry {
                    orbit: src.label(ext.orbits()[r.orbit].rep),
                    class: r.class,
                })
                .collect(),
            extra_currents: ext.extra_currents().iter().map(|&f| md.label(f)).collect(),
            modular: model.dense().expect("extended theories are dense").check_modular(),
            twist_checks: CheckSummary::twists(ext.twist_checks()),
            eta_checks: CheckSummary::etas(ext.eta_checks(), tol),
            conditions: None,
        }
    }
}
