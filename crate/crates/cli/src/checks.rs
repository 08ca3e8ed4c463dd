//! Check names, their anchors, and how each one is run against a [`Model`].

use std::collections::BTreeMap;

use courant_core::battery::Battery;
use courant_core::courant::manin::{build_manin_pair, ManinError, ManinPairData};
use courant_core::laops::{check_identity_lemmas, check_la_dirac, check_ruth_compat, k_algebroid, BasicOps, LieAlgebroidData};
use courant_core::prolong::{
    canonical_form_check, check_geometric_dirac, linear_poisson_check, ta_generator_check, verify_splitting_theorems,
};
use courant_core::{CheckReport, Mat, Status};
use serde::Serialize;
use thiserror::Error;

use crate::model::{DorfmanDecl, Model};

/// A registered check: the CLI name and the anchor printed in reports.
#[derive(Debug, Clone, Copy)]
pub struct CheckDef {
    pub name: &'static str,
    pub anchor: &'static str,
}

pub const CHECKS: &[CheckDef] = &[
    CheckDef { name: "lie", anchor: "Lie algebroid: skew bracket, Jacobi identity, anchor morphism" },
    CheckDef { name: "linear-poisson", anchor: "linear Poisson structure on the dual of a Lie algebroid" },
    CheckDef { name: "predual", anchor: "pre-dual: pairing, anchor and d_B are compatible" },
    CheckDef { name: "dorfman-axioms", anchor: "Dorfman connection axioms (a), (b), (c)" },
    CheckDef { name: "curvature-tensorial", anchor: "curvature of a Dorfman connection is a tensor" },
    CheckDef { name: "curvature-jacobiator", anchor: "curvature pairs with the Jacobiator of the dual bracket" },
    CheckDef { name: "skew", anchor: "Skew tensor of the dual bracket" },
    CheckDef { name: "splitting-theorems", anchor: "linear and core lifts: Lagrangian splitting and Courant brackets" },
    CheckDef { name: "canonical-form", anchor: "pullback of the canonical symplectic form along sigma" },
    CheckDef { name: "bott-dorfman", anchor: "Bott-Dorfman connection of an isotropic subalgebroid" },
    CheckDef { name: "dirac", anchor: "Dirac triple: isotropy, Lagrangian core, bracket closure, Jacobi on U" },
    CheckDef { name: "geometric-dirac", anchor: "total-space Dirac check of the spanned double vector subbundle" },
    CheckDef { name: "basic-identities", anchor: "Omega, Dorfman-like bracket, basic connections and basic curvature" },
    CheckDef { name: "ta-generators", anchor: "TA+T*A over TM+A*: generator table and representation up to homotopy" },
    CheckDef { name: "la-dirac", anchor: "LA-Dirac triple conditions (1)-(5)" },
    CheckDef { name: "identity-lemmas", anchor: "basic-like and complicated identities, pair map of D_u k" },
    CheckDef { name: "k-algebroid", anchor: "K is a Lie algebroid and the pair map is a morphism into U" },
    CheckDef { name: "ruth", anchor: "representation up to homotopy: compatibility identities (1) and (2)" },
    CheckDef { name: "manin-pair", anchor: "Courant algebroid C of an LA-Dirac triple with the Dirac structure U" },
    CheckDef { name: "a-manin", anchor: "A-Manin pair conditions (a) and (c)" },
    CheckDef { name: "roundtrip", anchor: "LA-Dirac triple to A-Manin pair and back" },
    CheckDef { name: "standard-iso", anchor: "C is isomorphic to the standard Courant algebroid" },
    CheckDef { name: "courant-axioms", anchor: "Courant algebroid axioms (1)-(3) and derived properties (4)-(5)" },
    CheckDef { name: "dirac-in-courant", anchor: "Dirac structure in a Courant algebroid" },
];

pub fn lookup(name: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("unknown check '{0}' (see `courant-lab checks`)")]
    UnknownCheck(String),
}

/// One check applied to one declared structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub target: String,
    pub anchor: String,
    pub status: Status,
    pub report: CheckReport,
}

/// Resolves a check list; an empty list selects every registered check.
pub fn resolve(names: &[String]) -> Result<Vec<&'static CheckDef>, RunError> {
    if names.is_empty() {
        return Ok(CHECKS.iter().collect());
    }
    names.iter().map(|n| lookup(n.trim()).ok_or_else(|| RunError::UnknownCheck(n.trim().to_string()))).collect()
}

/// Runs the selected checks in the given order. Targets of one check are
/// visited in name order.
pub fn run(model: &Model, names: &[String], seed: u64) -> Result<Vec<CheckResult>, RunError> {
    let defs = resolve(names)?;
    let mut ctx = Context { model, battery: Battery::new(&model.ring, seed), lie: BTreeMap::new(), manin: BTreeMap::new() };
    let mut out = Vec::new();
    for def in defs {
        let mut targets = ctx.targets(def);
        if targets.is_empty() {
            targets.push(("-".to_string(), CheckReport::not_applicable(def.name, def.anchor, "no matching structure is declared")));
        }
        for (target, report) in targets {
            let report = if report.check == def.name && report.anchor == def.anchor {
                report
            } else {
                CheckReport::combine(def.name, def.anchor, vec![report])
            };
            out.push(CheckResult { check: def.name.to_string(), target, anchor: def.anchor.to_string(), status: report.status, report });
        }
    }
    Ok(out)
}

/// Overall verdict: any failure or error fails the run; not-applicable
/// results are neutral.
pub fn overall(results: &[CheckResult]) -> Status {
    if results.iter().any(|r| matches!(r.status, Status::Fail | Status::Error)) {
        Status::Fail
    } else {
        Status::Pass
    }
}

struct Context<'a> {
    model: &'a Model,
    battery: Battery,
    lie: BTreeMap<String, Result<LieAlgebroidData, String>>,
    manin: BTreeMap<String, Result<ManinPairData, Box<CheckReport>>>,
}

impl Context<'_> {
    fn lie_data(&mut self, name: &str) -> Result<LieAlgebroidData, String> {
        if !self.lie.contains_key(name) {
            let ab = self.model.algebroids[name].clone();
            let built = LieAlgebroidData::new(ab, &self.battery).map_err(|e| format!("algebroid '{name}': {e}"));
            self.lie.insert(name.to_string(), built);
        }
        self.lie[name].clone()
    }

    /// Dorfman connections that carry an algebroid, with its Lie data.
    fn la_pairs(&mut self, need_triple: bool) -> Vec<(String, &DorfmanDecl, Result<LieAlgebroidData, String>)> {
        let model = self.model;
        let mut out = Vec::new();
        for (name, d) in &model.dorfmans {
            if need_triple && d.triple.is_none() {
                continue;
            }
            if let Some(a) = &d.algebroid {
                out.push((name.clone(), d, self.lie_data(a)));
            }
        }
        out
    }

    fn manin_for(&mut self, dorfman: &str) -> Result<ManinPairData, Box<CheckReport>> {
        if let Some(m) = self.manin.get(dorfman) {
            return m.clone();
        }
        let built = self.build_manin(dorfman);
        self.manin.insert(dorfman.to_string(), built.clone());
        built
    }

    fn build_manin(&mut self, dorfman: &str) -> Result<ManinPairData, Box<CheckReport>> {
        let (name, anchor) = ("manin-construction", "C built from an LA-Dirac triple");
        let d = &self.model.dorfmans[dorfman];
        let t = d.triple.as_ref().expect("callers pass triples");
        let la = self
            .lie_data(d.algebroid.as_deref().expect("callers pass LA triples"))
            .map_err(|e| Box::new(CheckReport::error(name, anchor, e)))?;
        let m = match build_manin_pair(&la, t, &self.battery) {
            Ok(m) => m,
            Err(ManinError::Conditions(report)) => {
                return Err(Box::new(
                    CheckReport::combine(name, anchor, vec![*report]).with_note("the triple is not LA-Dirac, so C is not defined"),
                ));
            }
            Err(e) => return Err(Box::new(CheckReport::error(name, anchor, e.to_string()))),
        };
        let presenting = self.model.courants.iter().find(|(_, c)| c.presents.as_deref() == Some(dorfman));
        match presenting {
            Some((cname, c)) if c.data.rank() != m.rank() => Err(Box::new(CheckReport::error(
                name,
                anchor,
                format!("'{cname}' has rank {}, the Manin pair of '{dorfman}' has rank {}", c.data.rank(), m.rank()),
            ))),
            Some((_, c)) if c.data.ring() != m.courant().ring() => {
                Err(Box::new(CheckReport::error(name, anchor, "coordinate patches differ")))
            }
            Some((_, c)) => Ok(m.with_courant(c.data.clone())),
            None => Ok(m),
        }
    }

    fn targets(&mut self, def: &CheckDef) -> Vec<(String, CheckReport)> {
        let model = self.model;
        let b = self.battery.clone();
        let dorfmans = || model.dorfmans.iter();
        let triples = || model.dorfmans.iter().filter_map(|(n, d)| d.triple.as_ref().map(|t| (n.clone(), t)));
        match def.name {
            "lie" => model
                .algebroids
                .iter()
                .map(|(n, a)| (n.clone(), CheckReport::combine(def.name, def.anchor, vec![a.check_lie(&b), a.check_anchor_compat(&b)])))
                .collect(),
            "linear-poisson" => {
                let names: Vec<String> = model.algebroids.keys().cloned().collect();
                names
                    .into_iter()
                    .map(|n| {
                        let r = match self.lie_data(&n) {
                            Ok(la) => linear_poisson_check(&la, &b),
                            Err(e) => CheckReport::error(def.name, def.anchor, e),
                        };
                        (n, r)
                    })
                    .collect()
            }
            "predual" => dorfmans().map(|(n, d)| (n.clone(), d.delta.predual().check_compatibility(&b))).collect(),
            "dorfman-axioms" => dorfmans().map(|(n, d)| (n.clone(), d.delta.check_axioms(&b))).collect(),
            "curvature-tensorial" => dorfmans().map(|(n, d)| (n.clone(), d.delta.check_curvature_tensorial(&b))).collect(),
            "curvature-jacobiator" => dorfmans().map(|(n, d)| (n.clone(), d.delta.check_curvature_vs_jacobiator(&b))).collect(),
            "skew" => dorfmans().map(|(n, d)| (n.clone(), d.delta.check_skew(&b))).collect(),
            "splitting-theorems" => dorfmans().map(|(n, d)| (n.clone(), verify_splitting_theorems(&d.delta, &b))).collect(),
            "canonical-form" => dorfmans()
                .filter_map(|(n, d)| {
                    let nabla = d.nabla.as_ref()?;
                    let sigma = d.sigma.clone().unwrap_or_else(|| Mat::zero(&model.ring, model.ring.len(), nabla.rank()));
                    Some((n.clone(), canonical_form_check(&sigma, nabla, &b)))
                })
                .collect(),
            "bott-dorfman" => dorfmans()
                .filter_map(|(n, d)| {
                    let bd = d.bott.as_ref()?;
                    Some((
                        n.clone(),
                        CheckReport::combine(def.name, def.anchor, vec![bd.check_definition(&b), bd.check_bott_intertwining(&b)]),
                    ))
                })
                .collect(),
            "dirac" => triples().map(|(n, t)| (n, t.check_dirac(&b))).collect(),
            "geometric-dirac" => triples().map(|(n, t)| (n, check_geometric_dirac(t, &b))).collect(),
            "basic-identities" => self
                .la_pairs(false)
                .into_iter()
                .map(|(n, d, la)| {
                    let r = match la.map(|la| BasicOps::new(&la, &d.delta).map_err(|e| e.to_string())) {
                        Ok(Ok(ops)) => CheckReport::combine(
                            def.name,
                            def.anchor,
                            vec![
                                ops.check_omega(&b),
                                ops.check_dlike_identities(&b),
                                ops.check_basic_identities(&b),
                                ops.check_basic_curvature(&b),
                            ],
                        ),
                        Ok(Err(e)) | Err(e) => CheckReport::error(def.name, def.anchor, e),
                    };
                    (n, r)
                })
                .collect(),
            "ta-generators" => self
                .la_pairs(false)
                .into_iter()
                .map(|(n, d, la)| {
                    (n, la.map_or_else(|e| CheckReport::error(def.name, def.anchor, e), |la| ta_generator_check(&la, &d.delta, &b)))
                })
                .collect(),
            "la-dirac" | "identity-lemmas" | "k-algebroid" | "ruth" => self
                .la_pairs(true)
                .into_iter()
                .map(|(n, d, la)| {
                    let t = d.triple.as_ref().expect("filtered to triples");
                    let r = match la {
                        Err(e) => CheckReport::error(def.name, def.anchor, e),
                        Ok(la) => match def.name {
                            "la-dirac" => check_la_dirac(&la, t, &b),
                            "identity-lemmas" => check_identity_lemmas(&la, t, &b),
                            "ruth" => check_ruth_compat(&la, t, &b),
                            _ => match k_algebroid(&la, t, &b) {
                                Ok((_, morphism)) => morphism,
                                Err(e) => {
                                    let conditions = check_la_dirac(&la, t, &b);
                                    if conditions.passed() {
                                        CheckReport::error(def.name, def.anchor, e.to_string())
                                    } else {
                                        CheckReport::combine(def.name, def.anchor, vec![conditions]).with_note(e.to_string())
                                    }
                                }
                            },
                        },
                    };
                    (n, r)
                })
                .collect(),
            "manin-pair" | "a-manin" | "roundtrip" | "standard-iso" => {
                let names: Vec<(String, Option<Mat>)> = self.la_pairs(true).into_iter().map(|(n, d, _)| (n, d.sigma.clone())).collect();
                names
                    .into_iter()
                    .map(|(n, sigma)| {
                        let r = match self.manin_for(&n) {
                            Err(why) => *why,
                            Ok(m) => match def.name {
                                "manin-pair" => m.check_manin_pair(&b),
                                "a-manin" => m.check_manin_conditions(&b),
                                "roundtrip" => m.roundtrip_check(&b),
                                _ => {
                                    let ring = &model.ring;
                                    let r = m.ops().lie_algebroid().rank();
                                    m.check_standard_isomorphism(&sigma.unwrap_or_else(|| Mat::zero(ring, ring.len(), r)), &b)
                                }
                            },
                        };
                        (n, r)
                    })
                    .collect()
            }
            "courant-axioms" => {
                let mut out: Vec<(String, CheckReport)> =
                    model.courants.iter().map(|(n, c)| (n.clone(), c.data.check_axioms(&b))).collect();
                let presented: Vec<&str> = model.courants.values().filter_map(|c| c.presents.as_deref()).collect();
                let names: Vec<String> =
                    self.la_pairs(true).into_iter().map(|(n, _, _)| n).filter(|n| !presented.contains(&n.as_str())).collect();
                for n in names {
                    let r = match self.manin_for(&n) {
                        Ok(m) => m.courant().check_axioms(&b),
                        Err(why) if why.status == Status::Error => *why,
                        Err(_) => CheckReport::not_applicable(def.name, def.anchor, "the triple is not LA-Dirac, so C is not built"),
                    };
                    out.push((format!("C({n})"), r));
                }
                out
            }
            "dirac-in-courant" => model
                .courants
                .iter()
                .filter_map(|(n, c)| c.dirac.as_ref().map(|(l, sub)| (format!("{n}/{l}"), c.data.check_dirac(sub, &b))))
                .collect(),
            other => unreachable!("check '{other}' is registered but has no runner"),
        }
    }
}
