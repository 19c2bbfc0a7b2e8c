//! Certificate documents: a quasi-action together with its measured report.
//!
//! Layout (keys in this order, compact JSON, trailing newline):
//!
//! ```text
//! {"group":…,"carrier_n":…,"F":[…],"epsilon":"p/q","assignment":{key:[images]},"report":{…}}
//! ```
//!
//! Elements are written in their canonical JSON form and assignment keys are
//! the compact text of that form, so serialization is a pure function of
//! the in-memory value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::model::{QaError, QuasiAction};
use super::verify::{ElementDefect, GoodnessFlags, PairDefect, StrictReport, VerificationReport};
use crate::finmap::{Defect, FiniteMap};
use crate::groups::{Element, FiniteSubset, Group};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub group: Group,
    pub carrier_n: usize,
    #[serde(rename = "F")]
    pub f: Vec<Value>,
    #[serde(with = "rational::as_string")]
    pub epsilon: Rational,
    pub assignment: BTreeMap<String, FiniteMap>,
    pub report: ReportDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub passed: bool,
    pub condition_a: bool,
    pub condition_b: bool,
    pub condition_c: bool,
    pub max_defect: Defect,
    pub condition_a_max_defect: Defect,
    pub condition_b_defect: Defect,
    pub pair_defects: Vec<PairDoc>,
    pub separation_defects: Vec<ElementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<StrictDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub left: Value,
    pub right: Value,
    pub defect: Defect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub element: Value,
    pub defect: Defect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrictDoc {
    pub condition_b_strict: bool,
    pub condition_c_strict: bool,
    pub identity_exact: bool,
    pub elements: Vec<FlagsDoc>,
    pub pairwise: Vec<PairDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDoc {
    pub element: Value,
    pub bijective: bool,
    pub fixpoint_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_exact: Option<bool>,
}

fn pair_doc(group: &Group, p: &PairDefect) -> Result<PairDoc, QaError> {
    Ok(PairDoc {
        left: group.element_to_json(&p.left)?,
        right: group.element_to_json(&p.right)?,
        defect: p.defect,
    })
}

fn pair_back(group: &Group, p: &PairDoc) -> Result<PairDefect, QaError> {
    Ok(PairDefect {
        left: group.element_from_json(&p.left)?,
        right: group.element_from_json(&p.right)?,
        defect: p.defect,
    })
}

/// Bundles a quasi-action with a report measured on it.
pub fn emit_certificate(qa: &QuasiAction, report: &VerificationReport) -> Result<Certificate, QaError> {
    let group = qa.group();
    let json = |e: &Element| group.element_to_json(e);
    let assignment = qa
        .assignment()
        .iter()
        .map(|(e, m)| Ok((group.element_key(e)?, m.clone())))
        .collect::<Result<_, QaError>>()?;
    let strict = match &report.strict {
        None => None,
        Some(s) => Some(StrictDoc {
            condition_b_strict: s.condition_b_strict,
            condition_c_strict: s.condition_c_strict,
            identity_exact: s.identity_exact,
            elements: s
                .elements
                .iter()
                .map(|g| {
                    Ok(FlagsDoc {
                        element: json(&g.element)?,
                        bijective: g.bijective,
                        fixpoint_free: g.fixpoint_free,
                        inverse_exact: g.inverse_exact,
                    })
                })
                .collect::<Result<_, QaError>>()?,
            pairwise: s.pairwise.iter().map(|p| pair_doc(group, p)).collect::<Result<_, _>>()?,
        }),
    };
    Ok(Certificate {
        group: group.clone(),
        carrier_n: qa.carrier_n(),
        f: report.f.iter().map(json).collect::<Result<_, _>>()?,
        epsilon: report.epsilon,
        assignment,
        report: ReportDoc {
            passed: report.passed(),
            condition_a: report.condition_a,
            condition_b: report.condition_b,
            condition_c: report.condition_c,
            max_defect: report.max_defect,
            condition_a_max_defect: report.max_pair_defect(),
            condition_b_defect: report.identity_defect,
            pair_defects: report.pair_defects.iter().map(|p| pair_doc(group, p)).collect::<Result<_, _>>()?,
            separation_defects: report
                .separation
                .iter()
                .map(|s| Ok(ElementDoc { element: json(&s.element)?, defect: s.defect }))
                .collect::<Result<_, QaError>>()?,
            strict,
        },
    })
}

impl Certificate {
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string(self).expect("certificate values are always serializable");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<Self, QaError> {
        serde_json::from_str(text).map_err(|e| QaError::Certificate(e.to_string()))
    }

    /// The `F` recorded in the certificate.
    pub fn f_subset(&self) -> Result<FiniteSubset, QaError> {
        let elements = self.f.iter().map(|v| self.group.element_from_json(v)).collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSubset::new(&self.group, elements)?)
    }

    /// Rebuilds the quasi-action, claiming the recorded `F` and `ε`.
    pub fn quasi_action(&self) -> Result<QuasiAction, QaError> {
        let mut assignment = BTreeMap::new();
        for (key, map) in &self.assignment {
            let e = self.group.element_from_key(key)?;
            if self.group.element_key(&e)? != *key {
                return Err(QaError::Certificate(format!("assignment key {key} is not in canonical form")));
            }
            assignment.insert(e, map.clone());
        }
        QuasiAction::new(self.group.clone(), self.carrier_n, assignment, self.f_subset()?, self.epsilon)
    }

    /// Rebuilds the stored report.
    pub fn report(&self) -> Result<VerificationReport, QaError> {
        let g = &self.group;
        let r = &self.report;
        let strict = match &r.strict {
            None => None,
            Some(s) => Some(StrictReport {
                identity_exact: s.identity_exact,
                elements: s
                    .elements
                    .iter()
                    .map(|x| {
                        Ok(GoodnessFlags {
                            element: g.element_from_json(&x.element)?,
                            bijective: x.bijective,
                            fixpoint_free: x.fixpoint_free,
                            inverse_exact: x.inverse_exact,
                        })
                    })
                    .collect::<Result<_, QaError>>()?,
                pairwise: s.pairwise.iter().map(|p| pair_back(g, p)).collect::<Result<_, _>>()?,
                condition_b_strict: s.condition_b_strict,
                condition_c_strict: s.condition_c_strict,
            }),
        };
        Ok(VerificationReport {
            carrier_n: self.carrier_n,
            epsilon: self.epsilon,
            f: self.f.iter().map(|v| g.element_from_json(v)).collect::<Result<_, _>>()?,
            pair_defects: r.pair_defects.iter().map(|p| pair_back(g, p)).collect::<Result<_, _>>()?,
            identity_defect: r.condition_b_defect,
            separation: r
                .separation_defects
                .iter()
                .map(|s| Ok(ElementDefect { element: g.element_from_json(&s.element)?, defect: s.defect }))
                .collect::<Result<_, QaError>>()?,
            condition_a: r.condition_a,
            condition_b: r.condition_b,
            condition_c: r.condition_c,
            max_defect: r.max_defect,
            strict,
        })
    }
}
