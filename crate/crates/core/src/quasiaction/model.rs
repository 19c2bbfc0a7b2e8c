use std::collections::BTreeMap;

use crate::finmap::{FiniteMap, MapError};
use crate::groups::{Element, FiniteSubset, Group, GroupError};
use crate::rational::{check_epsilon, Rational, RationalError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QaError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("no map assigned to element {element}")]
    IncompleteSupport { element: String },
    #[error("map for {element} acts on {found} points, carrier has {expected}")]
    CarrierMismatch { element: String, found: usize, expected: usize },
    #[error("F belongs to {0}, the quasi-action to {1}")]
    OwnerMismatch(String, String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}

/// A partial map `φ: G → Map(A)` with the `(F, ε)` it claims to satisfy.
///
/// The support (elements with an assigned map) always contains
/// `{1} ∪ F·F` for the claimed `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiAction {
    group: Group,
    carrier_n: usize,
    assignment: BTreeMap<Element, FiniteMap>,
    claimed_f: FiniteSubset,
    claimed_epsilon: Rational,
}

impl QuasiAction {
    pub fn new(
        group: Group,
        carrier_n: usize,
        assignment: BTreeMap<Element, FiniteMap>,
        claimed_f: FiniteSubset,
        claimed_epsilon: Rational,
    ) -> Result<Self, QaError> {
        check_epsilon(claimed_epsilon)?;
        if claimed_f.group() != &group {
            return Err(QaError::OwnerMismatch(claimed_f.group().name(), group.name()));
        }
        for (e, map) in &assignment {
            group.check(e)?;
            if map.len() != carrier_n {
                return Err(QaError::CarrierMismatch { element: e.to_string(), found: map.len(), expected: carrier_n });
            }
        }
        let qa = QuasiAction { group, carrier_n, assignment, claimed_f, claimed_epsilon };
        qa.require_support(&qa.claimed_f.required_support()?)?;
        Ok(qa)
    }

    /// Builds the assignment by evaluating `map_of` on every element of `support`.
    pub fn from_fn<E>(
        group: &Group,
        carrier_n: usize,
        support: &FiniteSubset,
        claimed_f: &FiniteSubset,
        claimed_epsilon: Rational,
        mut map_of: impl FnMut(&Element) -> Result<FiniteMap, E>,
    ) -> Result<Self, E>
    where
        E: From<QaError>,
    {
        let mut assignment = BTreeMap::new();
        for e in support.iter() {
            assignment.insert(e.clone(), map_of(e)?);
        }
        Ok(QuasiAction::new(group.clone(), carrier_n, assignment, claimed_f.clone(), claimed_epsilon)?)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn carrier_n(&self) -> usize {
        self.carrier_n
    }

    pub fn claimed_f(&self) -> &FiniteSubset {
        &self.claimed_f
    }

    pub fn claimed_epsilon(&self) -> Rational {
        self.claimed_epsilon
    }

    pub fn assignment(&self) -> &BTreeMap<Element, FiniteMap> {
        &self.assignment
    }

    pub fn support(&self) -> FiniteSubset {
        FiniteSubset::new(&self.group, self.assignment.keys().cloned()).expect("keys checked at construction")
    }

    pub fn is_defined(&self, e: &Element) -> bool {
        self.assignment.contains_key(e)
    }

    /// `φ(e)`, or an incomplete-support error naming `e`.
    pub fn map(&self, e: &Element) -> Result<&FiniteMap, QaError> {
        self.assignment.get(e).ok_or_else(|| QaError::IncompleteSupport { element: e.to_string() })
    }

    pub fn require_support(&self, needed: &FiniteSubset) -> Result<(), QaError> {
        match needed.iter().find(|e| !self.is_defined(e)) {
            Some(e) => Err(QaError::IncompleteSupport { element: e.to_string() }),
            None => Ok(()),
        }
    }

    /// Replaces (or adds) the map assigned to `e`.
    pub fn with_map(&self, e: Element, map: FiniteMap) -> Result<Self, QaError> {
        let mut assignment = self.assignment.clone();
        assignment.insert(e, map);
        QuasiAction::new(self.group.clone(), self.carrier_n, assignment, self.claimed_f.clone(), self.claimed_epsilon)
    }

    /// Same data, different claim.
    pub fn with_claim(&self, claimed_f: FiniteSubset, claimed_epsilon: Rational) -> Result<Self, QaError> {
        QuasiAction::new(self.group.clone(), self.carrier_n, self.assignment.clone(), claimed_f, claimed_epsilon)
    }

    /// Assigns a map to every element of `elements` that has none: the
    /// half-swap involution `a ↔ a + n/2` when `n` is even, the identity
    /// otherwise. Never called implicitly.
    pub fn extend_arbitrarily(&self, elements: &FiniteSubset) -> Result<Self, QaError> {
        let filler = FiniteMap::half_swap(self.carrier_n).unwrap_or_else(|| FiniteMap::identity(self.carrier_n));
        let mut assignment = self.assignment.clone();
        for e in elements.iter() {
            self.group.check(e)?;
            let map = if self.group.is_identity(e) { FiniteMap::identity(self.carrier_n) } else { filler.clone() };
            assignment.entry(e.clone()).or_insert(map);
        }
        QuasiAction::new(self.group.clone(), self.carrier_n, assignment, self.claimed_f.clone(), self.claimed_epsilon)
    }
}
