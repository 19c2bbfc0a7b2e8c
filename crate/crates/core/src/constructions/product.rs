//! Direct products and transport along injections.

use std::collections::BTreeMap;

use super::ConstructionError;
use crate::finmap::{FiniteMap, MapError};
use crate::groups::{Element, FiniteSubset, Group};
use crate::quasiaction::{verify, QuasiAction};
use crate::rational::Rational;

/// The coordinatewise quasi-action of `G₁×…×G_n` on `A₁×…×A_n`.
///
/// Each factor is used with its claimed `(F_i, ε_i)`, which is verified
/// first. The carrier is indexed row-major with the first factor most
/// significant. `f` defaults to `F₁×…×F_n` and must project into the `F_i`.
/// The claimed `ε` is `n·max ε_i`. A single factor is returned unchanged.
pub fn direct_product_qa(factors: &[QuasiAction], f: Option<&FiniteSubset>) -> Result<QuasiAction, ConstructionError> {
    if factors.is_empty() {
        return Err(ConstructionError::Domain("direct product of an empty factor list".into()));
    }
    for (i, qa) in factors.iter().enumerate() {
        let r = verify(qa, qa.claimed_f(), qa.claimed_epsilon(), false)?;
        if !r.passed() {
            return Err(ConstructionError::Precondition(format!(
                "factor {i} does not verify at its claimed epsilon (max defect {})",
                r.max_defect
            )));
        }
    }
    if factors.len() == 1 && f.is_none() {
        return Ok(factors[0].clone());
    }

    let group = Group::product(factors.iter().map(|qa| qa.group().clone()).collect());
    let f = match f {
        Some(f) => {
            if f.group() != &group {
                return Err(ConstructionError::Domain(format!("F belongs to {}, expected {}", f.group().name(), group.name())));
            }
            for e in f.iter() {
                let Element::Tuple(xs) = e else { unreachable!("product element") };
                for (i, (x, qa)) in xs.iter().zip(factors).enumerate() {
                    if !qa.claimed_f().contains(x) {
                        return Err(ConstructionError::Precondition(format!(
                            "component {i} of {e} is outside that factor's F"
                        )));
                    }
                }
            }
            f.clone()
        }
        None => {
            let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
            for qa in factors {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        qa.claimed_f().iter().map(move |x| {
                            let mut t = t.clone();
                            t.push(x.clone());
                            t
                        })
                    })
                    .collect();
            }
            FiniteSubset::new(&group, tuples.into_iter().map(Element::Tuple))?
        }
    };

    let n_factors = factors.len() as i64;
    let eps_max = factors.iter().map(QuasiAction::claimed_epsilon).max().expect("nonempty");
    let epsilon = eps_max * Rational::from_integer(n_factors);
    if epsilon >= Rational::from_integer(1) {
        return Err(ConstructionError::Precondition(format!(
            "the product claim n*epsilon = {epsilon} is not below 1"
        )));
    }

    let sizes: Vec<usize> = factors.iter().map(QuasiAction::carrier_n).collect();
    let n = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).filter(|&n| n <= u32::MAX as usize);
    let n = n.ok_or(MapError::TooLarge(usize::MAX))?;

    let support = f.required_support()?.union(&f)?;
    QuasiAction::from_fn(&group, n, &support, &f, epsilon, |g| {
        let Element::Tuple(xs) = g else { unreachable!("product element") };
        let maps: Vec<&FiniteMap> = xs.iter().zip(factors).map(|(x, qa)| qa.map(x)).collect::<Result<_, _>>()?;
        Ok::<_, ConstructionError>(FiniteMap::from_fn(n, |p| {
            let mut rest = p;
            let mut out = 0;
            let mut scale = 1;
            for (map, &size) in maps.iter().zip(&sizes).rev() {
                let digit = rest % size;
                rest /= size;
                out += map.apply(digit) * scale;
                scale *= size;
            }
            out
        })?)
    })
}

/// Transports `qa` along a partial map `j` from a target group into
/// `qa`'s group: `Φ(g) = φ(j(g))` where `j(g)` is defined, the identity
/// elsewhere.
///
/// `Φ` is defined on `{1} ∪ F ∪ F·F` and claims `(F, ε)` with `qa`'s `ε`.
/// `j` must be injective on the elements of `F ∪ {1}` where it is defined.
pub fn transport_qa(
    qa: &QuasiAction,
    target: &Group,
    f: &FiniteSubset,
    j: impl Fn(&Element) -> Result<Option<Element>, ConstructionError>,
) -> Result<QuasiAction, ConstructionError> {
    if f.group() != target {
        return Err(ConstructionError::Domain(format!("F belongs to {}, expected {}", f.group().name(), target.name())));
    }
    let mut seen: BTreeMap<Element, Element> = BTreeMap::new();
    for g in f.with_identity().iter() {
        if let Some(x) = j(g)? {
            qa.group().check(&x)?;
            if let Some(prev) = seen.insert(x.clone(), g.clone()) {
                return Err(ConstructionError::Precondition(format!(
                    "j is not injective on F and 1: {prev} and {g} both map to {x}"
                )));
            }
        }
    }
    let n = qa.carrier_n();
    let support = f.required_support()?.union(f)?;
    QuasiAction::from_fn(target, n, &support, f, qa.claimed_epsilon(), |g| match j(g)? {
        Some(x) => {
            qa.group().check(&x)?;
            Ok(qa.map(&x)?.clone())
        }
        None => Ok(FiniteMap::identity(n)),
    })
}

/// `transport_qa` with `j` given as an explicit list of `(target, source)` pairs.
pub fn transport_by_pairs(
    qa: &QuasiAction,
    target: &Group,
    f: &FiniteSubset,
    pairs: &[(Element, Element)],
) -> Result<QuasiAction, ConstructionError> {
    let mut table = BTreeMap::new();
    for (t, s) in pairs {
        target.check(t)?;
        if table.insert(t.clone(), s.clone()).is_some() {
            return Err(ConstructionError::Domain(format!("j lists {t} twice")));
        }
    }
    transport_qa(qa, target, f, |g| Ok(table.get(g).cloned()))
}
