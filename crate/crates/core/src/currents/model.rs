use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::bundle::{solve_1x1_bundle, FixedPointBundle};
use super::center::Center;
use crate::abelian::{Phase, Subgroup};
use crate::error::{Error, Result};
use crate::modular::{CMatrix, ModularData, ModularSource, TensorTheory, Tolerances};

/// A theory together with its simple currents and the fixed-point
/// matrices known for them.
#[derive(Clone)]
pub struct Model {
    source: Arc<dyn ModularSource>,
    dense: Option<Arc<ModularData>>,
    center: Center,
    bundles: BTreeMap<usize, FixedPointBundle>,
}

/// Stabilizers of one field: `T_a ⊇ S_a = T_a ∩ H ⊇ U_a`.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    pub full: Subgroup,
    pub in_h: Subgroup,
    pub untwisted: Subgroup,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model")
            .field("fields", &self.source.len())
            .field("center", &self.center.group().orders())
            .field("bundles", &self.bundles.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Model {
    /// Detects the center and attaches every bundle that
    /// [`solve_1x1_bundle`] can produce.
    pub fn new(md: ModularData, tol: &Tolerances) -> Result<Model> {
        let center = Center::detect(&md, tol)?;
        let md = Arc::new(md);
        let mut model = Model {
            source: md.clone(),
            dense: Some(md),
            center,
            bundles: BTreeMap::new(),
        };
        for e in 1..model.center.order() {
            match solve_1x1_bundle(model.source.as_ref(), &model.center, e) {
                Ok(b) => {
                    model.bundles.insert(e, b);
                }
                Err(Error::NotApplicable(_)) => {}
                Err(err) => return Err(err),
            }
        }
        Ok(model)
    }

    /// Model with a given center and no bundles.
    pub fn with_center(md: ModularData, center: Center) -> Result<Model> {
        if center.n_fields() != md.len() {
            return Err(Error::InvalidInput(
                "center acts on a different number of fields".into(),
            ));
        }
        let md = Arc::new(md);
        Ok(Model {
            source: md.clone(),
            dense: Some(md),
            center,
            bundles: BTreeMap::new(),
        })
    }

    /// Lazy tensor product. Bundles of product currents are the tensor
    /// products of factor bundles, with `S` standing in for the identity.
    pub fn tensor(factors: &[Model]) -> Result<Model> {
        Self::tensor_subgroup(factors, None)
    }

    /// Tensor product keeping only the currents generated by `gens`, each
    /// given by its factor components (element ids). `None` keeps the full
    /// product center, with element ids of [`Center::tensor`].
    pub fn tensor_subgroup(factors: &[Model], gens: Option<&[Vec<usize>]>) -> Result<Model> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("tensor product of no theories".into()));
        }
        let dense: Vec<Arc<ModularData>> = factors
            .iter()
            .map(|m| {
                m.dense
                    .clone()
                    .ok_or_else(|| Error::InvalidInput("tensor factors must be dense theories".into()))
            })
            .collect::<Result<_>>()?;
        let theory = TensorTheory::new(dense.clone());
        let groups: Vec<_> = factors.iter().map(|f| f.center.group().clone()).collect();
        let mut product = groups[0].clone();
        for g in &groups[1..] {
            product = product.product(g);
        }
        // Product element id of a component tuple: first factor fastest.
        let encode = |comps: &[usize]| -> usize {
            comps
                .iter()
                .zip(&groups)
                .rev()
                .fold(0, |acc, (&c, g)| acc * g.order() + c)
        };
        let decode = |mut e: usize| -> Vec<usize> {
            groups
                .iter()
                .map(|g| {
                    let c = e % g.order();
                    e /= g.order();
                    c
                })
                .collect()
        };
        let (center, elements) = match gens {
            None => {
                let mut center = factors[0].center.clone();
                for f in &factors[1..] {
                    center = center.tensor(&f.center);
                }
                (center, product.ids().collect::<Vec<_>>())
            }
            Some(gens) => {
                let mut ids = Vec::with_capacity(gens.len());
                for comps in gens {
                    if comps.len() != factors.len() || comps.iter().zip(&groups).any(|(&c, g)| c >= g.order()) {
                        return Err(Error::InvalidInput(
                            "current components do not match the factors".into(),
                        ));
                    }
                    ids.push(encode(comps));
                }
                let sub = Subgroup::generated_by(&product, &ids);
                let group = sub.abstract_group();
                let elements: Vec<usize> = group.ids().map(|e| sub.element(&group.decode(e))).collect();
                let sizes: Vec<usize> = dense.iter().map(|m| m.len()).collect();
                let n: usize = sizes.iter().product();
                let actions = elements
                    .iter()
                    .map(|&e| {
                        let comps = decode(e);
                        (0..n)
                            .map(|x| {
                                let mut rest = x;
                                let mut parts = vec![0usize; sizes.len()];
                                for i in (0..sizes.len()).rev() {
                                    parts[i] = rest % sizes[i];
                                    rest /= sizes[i];
                                }
                                parts
                                    .iter()
                                    .zip(&comps)
                                    .zip(factors)
                                    .zip(&sizes)
                                    .fold(0usize, |acc, (((&a, &c), f), &sz)| acc * sz + f.center.act(c, a))
                                    as u32
                            })
                            .collect()
                    })
                    .collect();
                (Center::from_parts(group, actions)?, elements)
            }
        };
        let mut model = Model {
            source: Arc::new(theory),
            dense: None,
            center,
            bundles: BTreeMap::new(),
        };
        for (e, &pe) in elements.iter().enumerate().skip(1) {
            let comps = decode(pe);
            let mut fixed: Vec<Vec<usize>> = Vec::new();
            let mut mats: Vec<CMatrix> = Vec::new();
            let mut complete = true;
            for ((f, &c), md) in factors.iter().zip(&comps).zip(&dense) {
                if c == 0 {
                    fixed.push((0..md.len()).collect());
                    mats.push(md.s_matrix().clone());
                } else if let Some(b) = f.bundles.get(&c) {
                    fixed.push(b.fixed().to_vec());
                    mats.push(b.s_matrix().clone());
                } else {
                    complete = false;
                    break;
                }
            }
            if !complete || fixed.iter().any(|x| x.is_empty()) {
                continue;
            }
            let sizes: Vec<usize> = dense.iter().map(|m| m.len()).collect();
            let ids = product_ids(&sizes, &fixed);
            let mut s = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
            for m in &mats {
                s = s.kronecker(m);
            }
            let b = FixedPointBundle::new(model.source.as_ref(), &model.center, e, ids, s)?;
            model.bundles.insert(e, b);
        }
        Ok(model)
    }

    pub fn source(&self) -> &dyn ModularSource {
        self.source.as_ref()
    }

    pub fn source_arc(&self) -> Arc<dyn ModularSource> {
        self.source.clone()
    }

    pub fn dense(&self) -> Option<&ModularData> {
        self.dense.as_deref()
    }

    pub fn center(&self) -> &Center {
        &self.center
    }

    pub fn bundles(&self) -> &BTreeMap<usize, FixedPointBundle> {
        &self.bundles
    }

    pub fn bundle(&self, e: usize) -> Option<&FixedPointBundle> {
        self.bundles.get(&e)
    }

    /// Adds or replaces a bundle; its fixed set was checked on creation.
    pub fn insert_bundle(&mut self, b: FixedPointBundle) {
        self.bundles.insert(b.current(), b);
    }

    pub fn fixed_points(&self, e: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&a| self.center.act(e, a) == a).collect()
    }

    /// `S^J_{ab}` with `S^1 = S`; `None` when the bundle is unknown.
    pub fn s_j(&self, e: usize, a: usize, b: usize) -> Option<Complex64> {
        if e == 0 {
            return Some(self.source.s(a, b));
        }
        self.bundles.get(&e).map(|bd| bd.entry(a, b))
    }

    /// `F(a, K, J)` for `K, J` in the full stabilizer of `a`.
    pub fn twist(&self, a: usize, k: usize, j: usize) -> Result<Phase> {
        if j == 0 {
            return Ok(Phase::ONE);
        }
        let b = self.bundles.get(&j).ok_or_else(|| {
            Error::IncompleteInput(format!(
                "no fixed-point matrix for current {}",
                self.source.label(self.center.field(j))
            ))
        })?;
        b.twist(a, k).ok_or_else(|| {
            Error::InvalidInput(format!(
                "{} does not fix {}",
                self.source.label(self.center.field(k)),
                self.source.label(a)
            ))
        })
    }

    /// `U_a = {J ∈ S_a | F(a,K,J) = 1 for all K ∈ S_a}`.
    pub fn untwisted_stabilizer(&self, a: usize, s_a: &Subgroup) -> Result<Subgroup> {
        let mut members = Vec::new();
        for &j in s_a.members() {
            let mut untwisted = true;
            for &k in s_a.members() {
                if !self.twist(a, k, j)?.is_one() {
                    untwisted = false;
                    break;
                }
            }
            if untwisted {
                members.push(j);
            }
        }
        Subgroup::from_members(self.center.group(), &members).map_err(|_| {
            Error::TwistTable(format!(
                "untwisted currents of {} do not form a group",
                self.source.label(a)
            ))
        })
    }

    pub fn stabilizer_chain(&self, a: usize, h: &Subgroup) -> Result<StabilizerChain> {
        let full = self.center.stabilizer(a);
        let in_h = full.intersection(h);
        let untwisted = self.untwisted_stabilizer(a, &in_h)?;
        Ok(StabilizerChain { full, in_h, untwisted })
    }
}

/// Ids of the product fields `Π fixed_i` in a tensor product whose
/// factors have the given sizes, first factor most significant.
fn product_ids(sizes: &[usize], fixed: &[Vec<usize>]) -> Vec<usize> {
    let mut ids = vec![0usize];
    for (&n, fx) in sizes.iter().zip(fixed) {
        ids = ids.iter().flat_map(|&p| fx.iter().map(move |&x| p * n + x)).collect();
    }
    ids
}
