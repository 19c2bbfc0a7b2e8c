//! Finite subsets of a group and their products.

use std::collections::BTreeSet;

use super::{Element, Group, GroupError};

/// A finite, duplicate-free set of elements of one group, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    group: Group,
    elements: Vec<Element>,
}

impl FiniteSubset {
    pub fn new(group: &Group, elements: impl IntoIterator<Item = Element>) -> Result<Self, GroupError> {
        let mut set = BTreeSet::new();
        for e in elements {
            group.check(&e)?;
            set.insert(e);
        }
        Ok(FiniteSubset { group: group.clone(), elements: set.into_iter().collect() })
    }

    pub fn singleton_identity(group: &Group) -> Self {
        FiniteSubset { group: group.clone(), elements: vec![group.identity()] }
    }

    /// Every element of a finite group.
    pub fn whole(group: &Group) -> Result<Self, GroupError> {
        FiniteSubset::new(group, group.elements()?)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    fn same_owner(&self, other: &FiniteSubset) -> Result<(), GroupError> {
        if self.group != other.group {
            return Err(GroupError::OwnerMismatch(self.group.name(), other.group.name()));
        }
        Ok(())
    }

    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset, GroupError> {
        self.same_owner(other)?;
        FiniteSubset::new(&self.group, self.elements.iter().chain(&other.elements).cloned())
    }

    /// `{e·f : e ∈ self, f ∈ other}`.
    pub fn product_set(&self, other: &FiniteSubset) -> Result<FiniteSubset, GroupError> {
        self.same_owner(other)?;
        let mut set = BTreeSet::new();
        for e in &self.elements {
            for f in &other.elements {
                set.insert(self.group.multiply(e, f)?);
            }
        }
        Ok(FiniteSubset { group: self.group.clone(), elements: set.into_iter().collect() })
    }

    pub fn inverses(&self) -> Result<FiniteSubset, GroupError> {
        FiniteSubset::new(&self.group, self.elements.iter().map(|e| self.group.inverse(e)).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn with_identity(&self) -> FiniteSubset {
        let mut out = self.clone();
        let one = self.group.identity();
        if let Err(pos) = out.elements.binary_search(&one) {
            out.elements.insert(pos, one);
        }
        out
    }

    /// `F ∪ F⁻¹ ∪ {1}`.
    pub fn symmetric(&self) -> Result<FiniteSubset, GroupError> {
        Ok(self.union(&self.inverses()?)?.with_identity())
    }

    /// `F̃ = (F ∪ F⁻¹ ∪ {1})·(F ∪ F⁻¹ ∪ {1})`.
    pub fn tilde(&self) -> Result<FiniteSubset, GroupError> {
        let s = self.symmetric()?;
        s.product_set(&s)
    }

    /// `{1} ∪ F·F`, the set a quasi-action must be defined on.
    pub fn required_support(&self) -> Result<FiniteSubset, GroupError> {
        Ok(self.product_set(self)?.with_identity())
    }

    pub fn without_identity(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| !self.group.is_identity(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> FiniteSubset {
        FiniteSubset::new(&Group::integers(), xs.iter().map(|&k| Element::Int(k))).unwrap()
    }

    #[test]
    fn identity_squared() {
        let one = FiniteSubset::singleton_identity(&Group::integers());
        assert_eq!(one.product_set(&one).unwrap(), one);
    }

    #[test]
    fn integer_products() {
        assert_eq!(ints(&[1, 2]).product_set(&ints(&[1, 2])).unwrap(), ints(&[2, 3, 4]));
        assert_eq!(ints(&[1]).tilde().unwrap(), ints(&[-2, -1, 0, 1, 2]));
    }

    #[test]
    fn tilde_fills_z2() {
        let z2 = Group::cyclic(2).unwrap();
        let f = FiniteSubset::new(&z2, [Element::Fin(1)]).unwrap();
        assert_eq!(f.tilde().unwrap(), FiniteSubset::whole(&z2).unwrap());
    }

    #[test]
    fn owner_mismatch() {
        let z2 = FiniteSubset::whole(&Group::cyclic(2).unwrap()).unwrap();
        assert!(matches!(ints(&[1]).product_set(&z2), Err(GroupError::OwnerMismatch(..))));
    }

    #[test]
    fn deduplicates() {
        assert_eq!(ints(&[3, 1, 3, 1]).len(), 2);
    }

    proptest! {
        #[test]
        fn product_cardinality_bound(a in proptest::collection::vec(-9i64..9, 0..6), b in proptest::collection::vec(-9i64..9, 0..6)) {
            let (fa, fb) = (ints(&a), ints(&b));
            prop_assert!(fa.product_set(&fb).unwrap().len() <= fa.len() * fb.len());
        }
    }
}
