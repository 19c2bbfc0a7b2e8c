use super::ConstructionError;
use crate::finmap::FiniteMap;
use crate::groups::{Element, FiniteSubset, Group};
use crate::quasiaction::QuasiAction;
use crate::rational::Rational;

/// A finite group acting on itself by right translation.
///
/// The carrier is the group's element list; the support is the whole group.
pub fn regular_action(group: &Group, f: &FiniteSubset, epsilon: Rational) -> Result<QuasiAction, ConstructionError> {
    let elements = group.elements()?;
    let n = elements.len();
    let all = FiniteSubset::new(group, elements.iter().cloned())?;
    QuasiAction::from_fn(group, n, &all, f, epsilon, |g| {
        let mut images = Vec::with_capacity(n);
        for x in &elements {
            images.push(group.index_of(&group.multiply(x, g)?)? as u32);
        }
        Ok::<_, ConstructionError>(FiniteMap::from_images(images)?)
    })
}

/// `ℤ` acting on `ℤ/m` by shifts, defined on `F̃ = (F∪F⁻¹∪{1})²`.
///
/// Requires `m` larger than every `|k|` in `F̃`, so that every nonzero
/// shift in the support is fixpoint-free.
pub fn cyclic_quasi_action(f: &FiniteSubset, modulus: usize, epsilon: Rational) -> Result<QuasiAction, ConstructionError> {
    if f.group() != &Group::Integers {
        return Err(ConstructionError::Domain(format!("cyclic witness needs a subset of Z, got {}", f.group().name())));
    }
    let support = f.tilde()?;
    let reach = support
        .iter()
        .map(|e| match e {
            Element::Int(k) => k.unsigned_abs(),
            _ => unreachable!("subset of Z"),
        })
        .max()
        .unwrap_or(0);
    if (modulus as u64) <= reach {
        return Err(ConstructionError::Precondition(format!(
            "modulus {modulus} must exceed {reach}, the largest shift in the support"
        )));
    }
    QuasiAction::from_fn(&Group::Integers, modulus, &support, f, epsilon, |e| {
        let Element::Int(k) = e else { unreachable!("subset of Z") };
        Ok::<_, ConstructionError>(FiniteMap::rotation(modulus, *k))
    })
}

/// Redirects one point of `φ(element)` to `image`, keeping the claim.
pub fn perturb(qa: &QuasiAction, element: &Element, point: usize, image: usize) -> Result<QuasiAction, ConstructionError> {
    let n = qa.carrier_n();
    if point >= n || image >= n {
        return Err(ConstructionError::Domain(format!("point {point} or image {image} outside carrier of size {n}")));
    }
    let mut images = qa.map(element)?.images().to_vec();
    images[point] = image as u32;
    Ok(qa.with_map(element.clone(), FiniteMap::from_images(images)?)?)
}
