//! Exhaustive measurement of the quasi-action conditions.
//!
//! For `F` and `ε`:
//! * (a) `φ(ef)` is ε-similar to `φ(e)φ(f)` for all ordered pairs `(e,f) ∈ F×F`;
//! * (b) `φ(1)` is ε-similar to the identity;
//! * (c) `φ(e)` is `(1-ε)`-different from the identity for `e ∈ F∖{1}`.
//!
//! Strict mode adds (b′): `φ(1)` is the identity and every other assigned
//! `φ(g)` is a fixpoint-free bijection with `φ(g⁻¹) = φ(g)⁻¹`; and (c′):
//! `φ(e)` and `φ(f)` are `(1-ε)`-different for distinct `e, f ∈ F ∪ {1}`.

use rayon::prelude::*;

use super::model::{QaError, QuasiAction};
use crate::finmap::{Defect, FiniteMap};
use crate::groups::{Element, FiniteSubset};
use crate::rational::{check_epsilon, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct PairDefect {
    pub left: Element,
    pub right: Element,
    pub defect: Defect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementDefect {
    pub element: Element,
    pub defect: Defect,
}

/// Per-element (b′) flags. `inverse_exact` is `None` when `g⁻¹` has no map.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessFlags {
    pub element: Element,
    pub bijective: bool,
    pub fixpoint_free: bool,
    pub inverse_exact: Option<bool>,
}

impl GoodnessFlags {
    pub fn ok(&self) -> bool {
        self.bijective && self.fixpoint_free && self.inverse_exact != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrictReport {
    pub identity_exact: bool,
    pub elements: Vec<GoodnessFlags>,
    /// `defect(φ(e), φ(f))` for distinct `e < f` in `F ∪ {1}`.
    pub pairwise: Vec<PairDefect>,
    pub condition_b_strict: bool,
    pub condition_c_strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub carrier_n: usize,
    pub epsilon: Rational,
    pub f: Vec<Element>,
    /// `defect(φ(e)φ(f), φ(ef))` for every ordered pair.
    pub pair_defects: Vec<PairDefect>,
    /// `defect(φ(1), id)`.
    pub identity_defect: Defect,
    /// `defect(φ(e), id)` for `e ∈ F∖{1}`.
    pub separation: Vec<ElementDefect>,
    pub condition_a: bool,
    pub condition_b: bool,
    pub condition_c: bool,
    /// Largest measured fraction: disagreements for (a) and (b), fixpoints for (c).
    pub max_defect: Defect,
    pub strict: Option<StrictReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.condition_a
            && self.condition_b
            && self.condition_c
            && self.strict.as_ref().is_none_or(|s| s.condition_b_strict && s.condition_c_strict)
    }

    pub fn max_pair_defect(&self) -> Defect {
        self.pair_defects.iter().map(|p| p.defect).max().unwrap_or(Defect::zero(self.carrier_n))
    }

    /// Largest fixpoint count among `φ(e)`, `e ∈ F∖{1}`.
    pub fn max_fixpoints(&self) -> usize {
        self.separation.iter().map(|s| s.defect.agreements()).max().unwrap_or(0)
    }

    /// Recomputes every boolean from the stored counts.
    pub fn recheck(&self) -> bool {
        let eps = self.epsilon;
        let a = self.pair_defects.iter().all(|p| p.defect.is_similar(eps));
        let b = self.identity_defect.is_similar(eps);
        let c = self.separation.iter().all(|s| s.defect.is_different(eps));
        let strict_ok = match &self.strict {
            None => true,
            Some(s) => {
                let b2 = s.identity_exact && s.elements.iter().all(GoodnessFlags::ok);
                let c2 = s.pairwise.iter().all(|p| p.defect.is_different(eps));
                b2 == s.condition_b_strict && c2 == s.condition_c_strict
            }
        };
        a == self.condition_a && b == self.condition_b && c == self.condition_c && strict_ok
    }
}

/// Disagreements between `φ(e)φ(f)` and `target` without materialising the product.
pub fn product_defect(e: &FiniteMap, f: &FiniteMap, target: &FiniteMap) -> Defect {
    let (ei, fi, ti) = (e.images(), f.images(), target.images());
    let bad = ei.iter().zip(ti).filter(|&(&x, &t)| fi[x as usize] != t).count();
    Defect::new(bad, e.len())
}

/// Measures conditions (a), (b), (c) and, when `strict`, (b′) and (c′).
pub fn verify(qa: &QuasiAction, f: &FiniteSubset, epsilon: Rational, strict: bool) -> Result<VerificationReport, QaError> {
    check_epsilon(epsilon)?;
    let group = qa.group();
    if f.group() != group {
        return Err(QaError::OwnerMismatch(f.group().name(), group.name()));
    }
    let n = qa.carrier_n();
    qa.require_support(&f.required_support()?)?;
    if strict {
        qa.require_support(&f.inverses()?)?;
    }

    let pairs: Vec<(Element, Element, Element)> = f
        .iter()
        .flat_map(|e| f.iter().map(move |g| (e, g)))
        .map(|(e, g)| Ok((e.clone(), g.clone(), group.multiply(e, g)?)))
        .collect::<Result<_, QaError>>()?;
    let pair_defects: Vec<PairDefect> = pairs
        .into_par_iter()
        .map(|(e, g, eg)| {
            let defect = product_defect(qa.map(&e)?, qa.map(&g)?, qa.map(&eg)?);
            Ok(PairDefect { left: e, right: g, defect })
        })
        .collect::<Result<_, QaError>>()?;

    let one = group.identity();
    let identity_defect = qa.map(&one)?.identity_defect();
    let separation: Vec<ElementDefect> = f
        .without_identity()
        .map(|e| Ok(ElementDefect { element: e.clone(), defect: qa.map(e)?.identity_defect() }))
        .collect::<Result<_, QaError>>()?;

    let condition_a = pair_defects.iter().all(|p| p.defect.is_similar(epsilon));
    let condition_b = identity_defect.is_similar(epsilon);
    let condition_c = separation.iter().all(|s| s.defect.is_different(epsilon));

    let max_defect = pair_defects
        .iter()
        .map(|p| p.defect)
        .chain(std::iter::once(identity_defect))
        .chain(separation.iter().map(|s| Defect::new(s.defect.agreements(), n)))
        .max()
        .unwrap_or(Defect::zero(n));

    let strict = strict.then(|| strict_report(qa, f, epsilon)).transpose()?;

    Ok(VerificationReport {
        carrier_n: n,
        epsilon,
        f: f.elements().to_vec(),
        pair_defects,
        identity_defect,
        separation,
        condition_a,
        condition_b,
        condition_c,
        max_defect,
        strict,
    })
}

fn strict_report(qa: &QuasiAction, f: &FiniteSubset, epsilon: Rational) -> Result<StrictReport, QaError> {
    let group = qa.group();
    let one = group.identity();
    let identity_exact = qa.map(&one)?.is_identity();

    let entries: Vec<(&Element, &FiniteMap)> = qa.assignment().iter().filter(|(g, _)| **g != one).collect();
    let elements: Vec<GoodnessFlags> = entries
        .par_iter()
        .map(|(g, map)| {
            let inverse = map.inverse();
            let inverse_exact = match qa.assignment().get(&group.inverse(g)?) {
                None => None,
                Some(inv_map) => Some(inverse.as_ref() == Some(inv_map)),
            };
            Ok(GoodnessFlags {
                element: (*g).clone(),
                bijective: inverse.is_some(),
                fixpoint_free: map.fixpoint_count() == 0,
                inverse_exact,
            })
        })
        .collect::<Result<_, QaError>>()?;

    let with_one = f.with_identity();
    let members = with_one.elements();
    let mut pairwise = Vec::new();
    for (i, e) in members.iter().enumerate() {
        for g in &members[i + 1..] {
            let defect = qa.map(e)?.similarity_defect(qa.map(g)?)?;
            pairwise.push(PairDefect { left: e.clone(), right: g.clone(), defect });
        }
    }

    let condition_b_strict = identity_exact && elements.iter().all(GoodnessFlags::ok);
    let condition_c_strict = pairwise.iter().all(|p| p.defect.is_different(epsilon));
    Ok(StrictReport { identity_exact, elements, pairwise, condition_b_strict, condition_c_strict })
}
