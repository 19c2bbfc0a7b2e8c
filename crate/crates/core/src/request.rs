//! JSON construction requests.
//!
//! A request names a construction in its `"construct"` field and carries that
//! construction's parameters. Inputs that are themselves quasi-actions are
//! given as nested requests. Running a request yields a certificate, or a
//! generator file for `girth_group`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constructions::{
    amenable_extension_qa, build_partitioned_carrier, cyclic_quasi_action, direct_product_qa, finitary_extension_qa,
    girth_group_search, good_action_upgrade, perturb, regular_action, required_kernel_elements, transport_by_pairs,
    ConstructionError, ExtensionData, FinitaryQuotient, FolnerChoice, FolnerSet, GirthCertificate, GirthWitness,
    SearchParams,
};
use crate::groups::{Element, FiniteSubset, Group, GroupError};
use crate::quasiaction::{emit_certificate, verify, Certificate, QaError, QuasiAction};
use crate::rational::{self, Rational, RationalError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RequestError {
    #[error("cannot parse request: {0}")]
    Parse(String),
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Qa(#[from] QaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// A group in a request: full group JSON, or `{"cyclic": m}` for `ℤ/m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Cyclic { cyclic: usize },
    Group(Group),
}

impl GroupSpec {
    pub fn resolve(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Cyclic { cyclic } => Group::cyclic(*cyclic),
            GroupSpec::Group(g) => Ok(g.clone()),
        }
    }
}

/// Where the kernel quasi-action of an extension comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelAction {
    /// Right translation of a finite kernel on itself.
    Regular,
    /// Shifts of `ℤ/modulus` for a kernel `ℤ`, defined on every kernel element the construction reads.
    Cyclic { modulus: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case")]
pub enum Request {
    Regular {
        group: GroupSpec,
        /// Defaults to the whole group.
        #[serde(default, rename = "F")]
        f: Option<Vec<Value>>,
        #[serde(with = "rational::as_string")]
        epsilon: Rational,
    },
    Cyclic {
        #[serde(rename = "F")]
        f: Vec<i64>,
        modulus: usize,
        #[serde(with = "rational::as_string")]
        epsilon: Rational,
    },
    Perturb {
        base: Box<Request>,
        element: Value,
        point: usize,
        image: usize,
    },
    Product {
        factors: Vec<Request>,
        #[serde(default, rename = "F")]
        f: Option<Vec<Value>>,
    },
    Transport {
        source: Box<Request>,
        target: GroupSpec,
        #[serde(rename = "F")]
        f: Vec<Value>,
        /// `[target element, source element]` pairs.
        pairs: Vec<(Value, Value)>,
    },
    GoodAction {
        base: Box<Request>,
        /// Defaults to the base's claimed `F`.
        #[serde(default, rename = "F")]
        f: Option<Vec<Value>>,
        #[serde(with = "rational::as_string")]
        epsilon: Rational,
    },
    FreeProduct {
        left: Box<Request>,
        right: Box<Request>,
        #[serde(rename = "N")]
        n: usize,
        #[serde(default = "default_order_cap")]
        order_cap: usize,
        #[serde(default)]
        degree_schedule: Option<Vec<usize>>,
        #[serde(default)]
        attempts_per_degree: Option<usize>,
    },
    Extension {
        extension: ExtensionData,
        kernel_action: KernelAction,
        #[serde(rename = "F")]
        f: Vec<Value>,
        #[serde(with = "rational::as_string")]
        epsilon: Rational,
        #[serde(default)]
        folner: Option<FolnerChoice>,
    },
    FinitaryExtension {
        rank: usize,
        modulus: usize,
        radius: u64,
        /// Defaults to all of `F_radius`.
        #[serde(default, rename = "F")]
        f: Option<Vec<Value>>,
        #[serde(with = "rational::as_string")]
        epsilon: Rational,
    },
    GirthGroup {
        labels: usize,
        bound: usize,
        #[serde(default = "default_order_cap")]
        order_cap: usize,
        #[serde(default)]
        degree_schedule: Option<Vec<usize>>,
        #[serde(default)]
        attempts_per_degree: Option<usize>,
    },
}

fn default_order_cap() -> usize {
    20_000
}

/// What a request produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Certificate(Certificate),
    Girth(GirthWitness),
}

impl Outcome {
    /// Whether the built object meets its own claim.
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Certificate(c) => c.report.passed,
            Outcome::Girth(_) => true,
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            Outcome::Certificate(c) => c.to_json_string(),
            Outcome::Girth(w) => {
                let mut s = serde_json::to_string(w).expect("witness serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn search_params(order_cap: usize, schedule: &Option<Vec<usize>>, attempts: Option<usize>, seed: u64) -> SearchParams {
    let mut p = SearchParams::new(order_cap, seed);
    if let Some(s) = schedule {
        p.degree_schedule = s.clone();
    }
    if let Some(a) = attempts {
        p.attempts_per_degree = a;
    }
    p
}

fn subset(group: &Group, values: &[Value]) -> Result<FiniteSubset, GroupError> {
    let elements = values.iter().map(|v| group.element_from_json(v)).collect::<Result<Vec<Element>, _>>()?;
    FiniteSubset::new(group, elements)
}

impl Request {
    pub fn from_json_str(text: &str) -> Result<Self, RequestError> {
        serde_json::from_str(text).map_err(|e| RequestError::Parse(e.to_string()))
    }

    /// Runs the request. The result is verified against its own claim;
    /// `good_action` results are verified in strict mode.
    pub fn run(&self, seed: u64) -> Result<Outcome, RequestError> {
        if let Request::GirthGroup { labels, bound, order_cap, degree_schedule, attempts_per_degree } = self {
            let params = search_params(*order_cap, degree_schedule, *attempts_per_degree, seed);
            let v = girth_group_search(*labels, GirthCertificate::Words { bound: *bound }, &params)?;
            return Ok(Outcome::Girth(v.witness()));
        }
        let qa = self.build(seed)?;
        let strict = matches!(self, Request::GoodAction { .. });
        let report = verify(&qa, qa.claimed_f(), qa.claimed_epsilon(), strict)?;
        Ok(Outcome::Certificate(emit_certificate(&qa, &report)?))
    }

    /// Builds the quasi-action a request describes.
    pub fn build(&self, seed: u64) -> Result<QuasiAction, RequestError> {
        Ok(match self {
            Request::Regular { group, f, epsilon } => {
                let g = group.resolve()?;
                let f = match f {
                    Some(f) => subset(&g, f)?,
                    None => FiniteSubset::whole(&g)?,
                };
                regular_action(&g, &f, *epsilon)?
            }
            Request::Cyclic { f, modulus, epsilon } => {
                let f = FiniteSubset::new(&Group::integers(), f.iter().map(|&k| Element::Int(k)))?;
                cyclic_quasi_action(&f, *modulus, *epsilon)?
            }
            Request::Perturb { base, element, point, image } => {
                let qa = base.build(seed)?;
                let e = qa.group().element_from_json(element)?;
                perturb(&qa, &e, *point, *image)?
            }
            Request::Product { factors, f } => {
                let built = factors.iter().map(|r| r.build(seed)).collect::<Result<Vec<_>, _>>()?;
                let f = match f {
                    Some(f) => {
                        let group = Group::product(built.iter().map(|qa| qa.group().clone()).collect());
                        Some(subset(&group, f)?)
                    }
                    None => None,
                };
                direct_product_qa(&built, f.as_ref())?
            }
            Request::Transport { source, target, f, pairs } => {
                let qa = source.build(seed)?;
                let target = target.resolve()?;
                let f = subset(&target, f)?;
                let pairs = pairs
                    .iter()
                    .map(|(t, s)| Ok((target.element_from_json(t)?, qa.group().element_from_json(s)?)))
                    .collect::<Result<Vec<_>, GroupError>>()?;
                transport_by_pairs(&qa, &target, &f, &pairs)?
            }
            Request::GoodAction { base, f, epsilon } => {
                let phi = base.build(seed)?;
                let f = match f {
                    Some(f) => subset(phi.group(), f)?,
                    None => phi.claimed_f().clone(),
                };
                good_action_upgrade(&phi, &f, *epsilon)?
            }
            Request::FreeProduct { left, right, n, order_cap, degree_schedule, attempts_per_degree } => {
                let phi = left.build(seed)?;
                let psi = right.build(seed)?;
                let (a, b) = (phi.carrier_n(), psi.carrier_n());
                let target = GirthCertificate::Incidence { a_size: a, b_size: b, bound: 2 * n };
                let params = search_params(*order_cap, degree_schedule, *attempts_per_degree, seed);
                let v = girth_group_search(a * b, target, &params)?;
                let pc = build_partitioned_carrier(a, b, *n, &v)?;
                crate::constructions::free_product_qa(&phi, &psi, *n, &pc)?
            }
            Request::Extension { extension, kernel_action, f, epsilon, folner } => {
                let f = subset(&extension.group(), f)?;
                let choice = folner.unwrap_or(match extension.quotient()?.order() {
                    Some(_) => FolnerChoice::Whole,
                    None => FolnerChoice::Interval { length: None },
                });
                let folner = FolnerSet::choose(extension, &f, *epsilon, choice)?;
                let kernel = extension.kernel_group();
                let psi = match kernel_action {
                    KernelAction::Regular => regular_action(&kernel, &FiniteSubset::whole(&kernel)?, *epsilon)?,
                    KernelAction::Cyclic { modulus } => {
                        if kernel != Group::integers() {
                            return Err(RequestError::Field {
                                field: "kernel_action",
                                message: format!("cyclic kernel action needs the kernel Z, got {}", kernel.name()),
                            });
                        }
                        let needed = required_kernel_elements(extension, &folner, &f)?;
                        cyclic_quasi_action(&needed, *modulus, *epsilon)?
                    }
                };
                amenable_extension_qa(&psi, extension, &folner, &f, *epsilon)?
            }
            Request::FinitaryExtension { rank, modulus, radius, f, epsilon } => {
                let group = Group::finitary(*rank);
                let f = f.as_deref().map(|f| subset(&group, f)).transpose()?;
                let quot = FinitaryQuotient { rank: *rank, modulus: *modulus };
                finitary_extension_qa(quot, *radius, f.as_ref(), *epsilon)?.qa
            }
            Request::GirthGroup { .. } => {
                return Err(RequestError::Field {
                    field: "construct",
                    message: "girth_group produces a generator file, not a quasi-action".into(),
                })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_request_round_trip() {
        let text = r#"{"construct":"regular","group":{"cyclic":4},"epsilon":"1/100"}"#;
        let req = Request::from_json_str(text).unwrap();
        let out = req.run(0).unwrap();
        assert!(out.passed());
        let Outcome::Certificate(c) = &out else { panic!("expected a certificate") };
        assert_eq!(c.report.max_defect.to_string(), "0/4");
        let again = Certificate::from_json_str(&out.to_json_string()).unwrap();
        assert_eq!(&again, c);
    }

    #[test]
    fn nested_good_action_is_strict() {
        let text = r#"{"construct":"good_action","epsilon":"5/6","base":
            {"construct":"perturb","element":"0","point":0,"image":1,
             "base":{"construct":"cyclic","F":[-2,-1,0,1,2],"modulus":12,"epsilon":"1/2"}},
            "F":["1"]}"#;
        let out = Request::from_json_str(text).unwrap().run(0).unwrap();
        let Outcome::Certificate(c) = out else { panic!("expected a certificate") };
        assert_eq!(c.carrier_n, 24);
        assert!(c.report.passed);
        assert!(c.report.strict.unwrap().condition_b_strict);
    }

    #[test]
    fn unknown_construction_is_a_parse_error() {
        assert!(matches!(Request::from_json_str(r#"{"construct":"nope"}"#), Err(RequestError::Parse(_))));
    }

    #[test]
    fn girth_group_writes_a_witness() {
        let text = r#"{"construct":"girth_group","labels":1,"bound":4,"order_cap":100}"#;
        let out = Request::from_json_str(text).unwrap().run(7).unwrap();
        let Outcome::Girth(w) = &out else { panic!("expected a witness") };
        assert_eq!(w.girth_bound, 4);
        assert_eq!(w.seed, 7);
        assert!(out.to_json_string().starts_with("{\"degree\":"));
    }

    #[test]
    fn extension_request_picks_the_interval() {
        let text = r#"{"construct":"extension","epsilon":"1/20",
            "extension":{"kind":"split_product","quotient":{"kind":"integers"},"kernel":{"kind":"finite","table":[[0,1],[1,0]]}},
            "kernel_action":{"kind":"regular"},
            "F":[["1",0],["-1",0],["0",1],["1",1],["-1",1]]}"#;
        let out = Request::from_json_str(text).unwrap().run(0).unwrap();
        let Outcome::Certificate(c) = out else { panic!("expected a certificate") };
        assert_eq!(c.carrier_n, 40);
        assert!(c.report.passed);
    }
}
