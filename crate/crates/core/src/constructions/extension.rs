//! Quasi-actions of an extension `1 → N → G → Q → 1` with amenable `Q`.
//!
//! Given a quasi-action `ψ` of `N` on `B` and a Følner set `Ā ⊆ Q`, the
//! carrier is `B×A` with `A = σ(Ā)` and index `b·|A| + i` for the `i`-th
//! element of `Ā`. For `g ∈ G`, a point `(b, a)` goes to
//! `(b·ψ(a·g·σ(ā·ḡ)⁻¹), σ(ā·ḡ))` when `ā·ḡ ∈ Ā` and stays put otherwise.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::finmap::FiniteMap;
use crate::groups::{Element, FiniteSubset, Group};
use crate::quasiaction::{verify, QuasiAction};
use crate::rational::{check_epsilon, Rational};

/// A concrete extension with a computable projection, section and kernel test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionData {
    /// `N = G`, `Q` trivial.
    TrivialQuotient { group: Group },
    /// `G = ℤ`, `N = index·ℤ` identified with `ℤ` by division, `Q = ℤ/index`.
    IntegerSublattice { index: usize },
    /// `G = Q×N` with section `q ↦ (q, 1)`.
    SplitProduct { quotient: Group, kernel: Group },
}

impl ExtensionData {
    pub fn group(&self) -> Group {
        match self {
            ExtensionData::TrivialQuotient { group } => group.clone(),
            ExtensionData::IntegerSublattice { .. } => Group::integers(),
            ExtensionData::SplitProduct { quotient, kernel } => Group::product(vec![quotient.clone(), kernel.clone()]),
        }
    }

    pub fn kernel_group(&self) -> Group {
        match self {
            ExtensionData::TrivialQuotient { group } => group.clone(),
            ExtensionData::IntegerSublattice { .. } => Group::integers(),
            ExtensionData::SplitProduct { kernel, .. } => kernel.clone(),
        }
    }

    pub fn quotient(&self) -> Result<Group, ConstructionError> {
        Ok(match self {
            ExtensionData::TrivialQuotient { .. } => Group::trivial(),
            ExtensionData::IntegerSublattice { index } => Group::cyclic(*index)?,
            ExtensionData::SplitProduct { quotient, .. } => quotient.clone(),
        })
    }

    /// `g ↦ ḡ`.
    pub fn project(&self, g: &Element) -> Result<Element, ConstructionError> {
        self.group().check(g)?;
        Ok(match (self, g) {
            (ExtensionData::TrivialQuotient { .. }, _) => Group::trivial().identity(),
            (ExtensionData::IntegerSublattice { index }, Element::Int(k)) => Element::Fin(k.rem_euclid(*index as i64) as u32),
            (ExtensionData::SplitProduct { .. }, Element::Tuple(xs)) => xs[0].clone(),
            _ => unreachable!("checked against the group"),
        })
    }

    /// `σ(q)`, with `σ(q)‾ = q`.
    pub fn section(&self, q: &Element) -> Result<Element, ConstructionError> {
        self.quotient()?.check(q)?;
        Ok(match (self, q) {
            (ExtensionData::TrivialQuotient { group }, _) => group.identity(),
            (ExtensionData::IntegerSublattice { .. }, Element::Fin(r)) => Element::Int(*r as i64),
            (ExtensionData::SplitProduct { kernel, .. }, q) => Element::Tuple(vec![q.clone(), kernel.identity()]),
            _ => unreachable!("checked against the quotient"),
        })
    }

    /// The kernel element corresponding to `g`, or `None` when `g ∉ N`.
    pub fn to_kernel(&self, g: &Element) -> Result<Option<Element>, ConstructionError> {
        self.group().check(g)?;
        Ok(match (self, g) {
            (ExtensionData::TrivialQuotient { .. }, g) => Some(g.clone()),
            (ExtensionData::IntegerSublattice { index }, Element::Int(k)) => {
                let index = *index as i64;
                (k % index == 0).then(|| Element::Int(k / index))
            }
            (ExtensionData::SplitProduct { quotient, .. }, Element::Tuple(xs)) => quotient.is_identity(&xs[0]).then(|| xs[1].clone()),
            _ => unreachable!("checked against the group"),
        })
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        if let ExtensionData::IntegerSublattice { index: 0 } = self {
            return Err(ConstructionError::Domain("sublattice index must be positive".into()));
        }
        Ok(())
    }
}

/// How to pick the Følner set `Ā ⊆ Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FolnerChoice {
    /// `Ā = Q` for finite `Q`; expansion 0.
    Whole,
    /// `Ā = {0..m−1}` for `Q = ℤ`. Without a length, the least `m` meeting `ε`.
    Interval { length: Option<usize> },
}

/// `Ā` in a fixed order together with its measured expansion against `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerSet {
    pub elements: Vec<Element>,
    /// `max_{g ∈ F} |Ā·ḡ ∖ Ā| / |Ā|`.
    pub expansion: Rational,
}

impl FolnerSet {
    pub fn choose(ext: &ExtensionData, f: &FiniteSubset, epsilon: Rational, choice: FolnerChoice) -> Result<Self, ConstructionError> {
        check_epsilon(epsilon)?;
        let q = ext.quotient()?;
        let elements = match choice {
            FolnerChoice::Whole => q.elements().map_err(|_| {
                ConstructionError::Domain(format!("the whole quotient {} is not a finite Følner set", q.name()))
            })?,
            FolnerChoice::Interval { length } => {
                if q != Group::integers() {
                    return Err(ConstructionError::Domain(format!("interval Følner sets need the quotient Z, got {}", q.name())));
                }
                let m = match length {
                    Some(0) => return Err(ConstructionError::Domain("Følner interval must be nonempty".into())),
                    Some(m) => m,
                    None => {
                        let reach = f
                            .iter()
                            .map(|g| match ext.project(g)? {
                                Element::Int(k) => Ok(k.unsigned_abs() as i64),
                                _ => unreachable!("quotient is Z"),
                            })
                            .collect::<Result<Vec<i64>, ConstructionError>>()?
                            .into_iter()
                            .max()
                            .unwrap_or(0);
                        // Least m with reach/m ≤ ε.
                        let needed = (Rational::from_integer(reach) / epsilon).ceil().to_integer();
                        needed.max(1) as usize
                    }
                };
                (0..m as i64).map(Element::Int).collect()
            }
        };
        let expansion = Self::measure(ext, &elements, f)?;
        Ok(FolnerSet { elements, expansion })
    }

    /// `max_{g ∈ F} |Ā·ḡ ∖ Ā| / |Ā|`, exactly.
    pub fn measure(ext: &ExtensionData, elements: &[Element], f: &FiniteSubset) -> Result<Rational, ConstructionError> {
        let q = ext.quotient()?;
        let set: BTreeSet<&Element> = elements.iter().collect();
        let mut worst = Rational::from_integer(0);
        for g in f.iter() {
            let gq = ext.project(g)?;
            let mut escaped = 0i64;
            for a in elements {
                if !set.contains(&q.multiply(a, &gq)?) {
                    escaped += 1;
                }
            }
            worst = worst.max(Rational::new(escaped, elements.len() as i64));
        }
        Ok(worst)
    }
}

/// `H = N ∩ (A·F·A⁻¹)` as kernel elements, by enumeration over `A×F×A`.
pub fn kernel_window(ext: &ExtensionData, folner: &FolnerSet, f: &FiniteSubset) -> Result<FiniteSubset, ConstructionError> {
    let g = ext.group();
    let lifts = lifts(ext, folner)?;
    let mut out = BTreeSet::new();
    for a in &lifts {
        for x in f.iter() {
            let ax = g.multiply(a, x)?;
            for a2 in &lifts {
                if let Some(n) = ext.to_kernel(&g.multiply(&ax, &g.inverse(a2)?)?)? {
                    out.insert(n);
                }
            }
        }
    }
    Ok(FiniteSubset::new(&ext.kernel_group(), out)?)
}

/// Every kernel element whose `ψ`-map the construction reads when `Φ` is
/// built on `{1} ∪ F ∪ F·F`.
pub fn required_kernel_elements(ext: &ExtensionData, folner: &FolnerSet, f: &FiniteSubset) -> Result<FiniteSubset, ConstructionError> {
    let support = f.required_support()?.union(f)?;
    let table = Lifting::new(ext, folner)?;
    let mut out = BTreeSet::new();
    for g in support.iter() {
        for step in table.steps(g)? {
            if let Some((n, _)) = step {
                out.insert(n);
            }
        }
    }
    Ok(FiniteSubset::new(&ext.kernel_group(), out)?)
}

/// Builds `Φ` on `B×A` and claims `(F, 3ε)`.
///
/// `ψ` must verify as an `(H, ε)`-quasi-action for `H = N ∩ (A·F·A⁻¹)`,
/// and the Følner expansion of `Ā` against `F` must be at most `ε`.
pub fn amenable_extension_qa(
    psi: &QuasiAction,
    ext: &ExtensionData,
    folner: &FolnerSet,
    f: &FiniteSubset,
    epsilon: Rational,
) -> Result<QuasiAction, ConstructionError> {
    check_epsilon(epsilon)?;
    ext.validate()?;
    let group = ext.group();
    if f.group() != &group {
        return Err(ConstructionError::Domain(format!("F belongs to {}, expected {}", f.group().name(), group.name())));
    }
    if psi.group() != &ext.kernel_group() {
        return Err(ConstructionError::Domain(format!(
            "psi acts by {}, the kernel is {}",
            psi.group().name(),
            ext.kernel_group().name()
        )));
    }
    let claim = epsilon * Rational::from_integer(3);
    if claim >= Rational::from_integer(1) {
        return Err(ConstructionError::Precondition(format!("3*epsilon = {claim} is not below 1")));
    }
    let expansion = FolnerSet::measure(ext, &folner.elements, f)?;
    if expansion > epsilon {
        return Err(ConstructionError::Precondition(format!(
            "Følner expansion {expansion} of a set of size {} exceeds epsilon {epsilon}",
            folner.elements.len()
        )));
    }
    for g in f.iter() {
        let s = ext.section(&ext.project(g)?)?;
        if ext.to_kernel(&group.multiply(g, &group.inverse(&s)?)?)?.is_none() {
            return Err(ConstructionError::Invariant(format!("{g} times the inverse of its section lift is outside N")));
        }
    }

    let h = kernel_window(ext, folner, f)?;
    let report = verify(psi, &h, epsilon, false)?;
    if !report.passed() {
        return Err(ConstructionError::Precondition(format!(
            "psi is not an (H, {epsilon})-quasi-action for H = N ∩ AFA^-1 (max defect {})",
            report.max_defect
        )));
    }

    let table = Lifting::new(ext, folner)?;
    let (a_len, b_len) = (folner.elements.len(), psi.carrier_n());
    let n = a_len.checked_mul(b_len).ok_or(crate::finmap::MapError::TooLarge(usize::MAX))?;
    let support = f.required_support()?.union(f)?;
    QuasiAction::from_fn(&group, n, &support, f, claim, |g| {
        let steps = table.steps(g)?;
        let mut images = vec![0u32; n];
        for (i, step) in steps.iter().enumerate() {
            match step {
                Some((k, j)) => {
                    let map = psi.map(k)?;
                    for b in 0..b_len {
                        images[b * a_len + i] = (map.apply(b) * a_len + j) as u32;
                    }
                }
                None => {
                    for b in 0..b_len {
                        images[b * a_len + i] = (b * a_len + i) as u32;
                    }
                }
            }
        }
        Ok(FiniteMap::from_images(images)?)
    })
}

fn lifts(ext: &ExtensionData, folner: &FolnerSet) -> Result<Vec<Element>, ConstructionError> {
    folner.elements.iter().map(|q| ext.section(q)).collect()
}

/// `Ā` with its lifts and positions.
struct Lifting<'a> {
    ext: &'a ExtensionData,
    group: Group,
    quotient: Group,
    bar: &'a [Element],
    lifts: Vec<Element>,
    position: BTreeMap<&'a Element, usize>,
}

impl<'a> Lifting<'a> {
    fn new(ext: &'a ExtensionData, folner: &'a FolnerSet) -> Result<Self, ConstructionError> {
        let lifts = lifts(ext, folner)?;
        for (q, a) in folner.elements.iter().zip(&lifts) {
            if ext.project(a)? != *q {
                return Err(ConstructionError::Invariant(format!("section of {q} does not project back")));
            }
        }
        let position: BTreeMap<&Element, usize> = folner.elements.iter().enumerate().map(|(i, q)| (q, i)).collect();
        if position.len() != folner.elements.len() {
            return Err(ConstructionError::Domain("Følner set lists an element twice".into()));
        }
        Ok(Lifting { ext, group: ext.group(), quotient: ext.quotient()?, bar: &folner.elements, lifts, position })
    }

    /// For each position `i` of `Ā`: `Some((a·g·σ(ā·ḡ)⁻¹, j))` when `ā·ḡ` is at position `j`.
    fn steps(&self, g: &Element) -> Result<Vec<Option<(Element, usize)>>, ConstructionError> {
        let gq = self.ext.project(g)?;
        let mut out = Vec::with_capacity(self.bar.len());
        for (q, a) in self.bar.iter().zip(&self.lifts) {
            let target = self.quotient.multiply(q, &gq)?;
            let Some(&j) = self.position.get(&target) else {
                out.push(None);
                continue;
            };
            let x = self.group.multiply(&self.group.multiply(a, g)?, &self.group.inverse(&self.lifts[j])?)?;
            let k = self
                .ext
                .to_kernel(&x)?
                .ok_or_else(|| ConstructionError::Invariant(format!("a*g*sigma(ag)^-1 = {x} is outside N")))?;
            out.push(Some((k, j)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic_quasi_action, regular_action};

    fn subset(g: &Group, xs: Vec<Element>) -> FiniteSubset {
        FiniteSubset::new(g, xs).unwrap()
    }

    fn pair(k: i64, r: u32) -> Element {
        Element::Tuple(vec![Element::Int(k), Element::Fin(r)])
    }

    #[test]
    fn trivial_quotient_reproduces_psi() {
        let g = Group::cyclic(3).unwrap();
        let all = FiniteSubset::whole(&g).unwrap();
        let psi = regular_action(&g, &all, Rational::new(1, 10)).unwrap();
        let ext = ExtensionData::TrivialQuotient { group: g.clone() };
        let folner = FolnerSet::choose(&ext, &all, Rational::new(1, 10), FolnerChoice::Whole).unwrap();
        assert_eq!(folner.elements.len(), 1);
        let qa = amenable_extension_qa(&psi, &ext, &folner, &all, Rational::new(1, 10)).unwrap();
        assert_eq!(qa.carrier_n(), 3);
        for (e, map) in qa.assignment() {
            assert_eq!(map, psi.map(e).unwrap());
        }
    }

    #[test]
    fn even_sublattice_of_z_is_exact() {
        let ext = ExtensionData::IntegerSublattice { index: 2 };
        let z = Group::integers();
        let f = subset(&z, vec![Element::Int(-1), Element::Int(1), Element::Int(2)]);
        let eps = Rational::new(1, 10);
        let folner = FolnerSet::choose(&ext, &f, eps, FolnerChoice::Whole).unwrap();
        assert_eq!(folner.expansion, Rational::from_integer(0));
        let needed = required_kernel_elements(&ext, &folner, &f).unwrap();
        let psi = cyclic_quasi_action(&needed, 12, eps).unwrap();
        let qa = amenable_extension_qa(&psi, &ext, &folner, &f, eps).unwrap();
        assert_eq!(qa.carrier_n(), 24);
        let r = verify(&qa, &f, eps * Rational::from_integer(3), false).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_pair_defect().disagreements, 0);
        assert_eq!(r.max_fixpoints(), 0);
    }

    #[test]
    fn kernel_window_by_enumeration() {
        let ext = ExtensionData::IntegerSublattice { index: 2 };
        let z = Group::integers();
        let f = subset(&z, vec![Element::Int(1)]);
        let folner = FolnerSet::choose(&ext, &f, Rational::new(1, 2), FolnerChoice::Whole).unwrap();
        // A = {0, 1}: a + 1 − a′ ∈ 2ℤ gives 0+1−1 = 0 and 1+1−0 = 2.
        let h = kernel_window(&ext, &folner, &f).unwrap();
        assert_eq!(h.elements(), &[Element::Int(0), Element::Int(1)]);
    }

    #[test]
    fn z_times_z2_over_interval() {
        let q = Group::integers();
        let k = Group::cyclic(2).unwrap();
        let ext = ExtensionData::SplitProduct { quotient: q, kernel: k.clone() };
        let g = ext.group();
        let f = subset(&g, vec![pair(1, 0), pair(-1, 0), pair(0, 1), pair(1, 1), pair(-1, 1)]);
        let eps = Rational::new(1, 20);
        let folner = FolnerSet::choose(&ext, &f, eps, FolnerChoice::Interval { length: Some(20) }).unwrap();
        assert_eq!(folner.expansion, eps);
        let psi = regular_action(&k, &FiniteSubset::whole(&k).unwrap(), eps).unwrap();
        let qa = amenable_extension_qa(&psi, &ext, &folner, &f, eps).unwrap();
        assert_eq!(qa.carrier_n(), 40);
        let r = verify(&qa, &f, Rational::new(3, 20), false).unwrap();
        assert!(r.passed());
        assert!(r.max_pair_defect().is_similar(Rational::new(2, 20)));
        for e in f.iter() {
            let fixed = qa.map(e).unwrap().fixpoint_count();
            if ext.to_kernel(e).unwrap().is_none() {
                assert!(fixed <= 2, "{e} has {fixed} fixpoints");
            } else {
                assert_eq!(fixed, 0);
            }
        }
    }

    #[test]
    fn automatic_interval_is_least() {
        let ext = ExtensionData::SplitProduct { quotient: Group::integers(), kernel: Group::trivial() };
        let g = ext.group();
        let f = subset(&g, vec![Element::Tuple(vec![Element::Int(3), Element::Fin(0)])]);
        let folner = FolnerSet::choose(&ext, &f, Rational::new(1, 4), FolnerChoice::Interval { length: None }).unwrap();
        assert_eq!(folner.elements.len(), 12);
        assert_eq!(folner.expansion, Rational::new(1, 4));
    }

    #[test]
    fn wide_expansion_rejected() {
        let k = Group::cyclic(2).unwrap();
        let ext = ExtensionData::SplitProduct { quotient: Group::integers(), kernel: k.clone() };
        let f = subset(&ext.group(), vec![pair(1, 0)]);
        let eps = Rational::new(1, 20);
        let folner = FolnerSet::choose(&ext, &f, eps, FolnerChoice::Interval { length: Some(5) }).unwrap();
        assert_eq!(folner.expansion, Rational::new(1, 5));
        let psi = regular_action(&k, &FiniteSubset::whole(&k).unwrap(), eps).unwrap();
        let err = amenable_extension_qa(&psi, &ext, &folner, &f, eps).unwrap_err();
        assert!(matches!(err, ConstructionError::Precondition(_)));
    }

    #[test]
    fn missing_kernel_support_is_reported() {
        let ext = ExtensionData::IntegerSublattice { index: 2 };
        let z = Group::integers();
        let f = subset(&z, vec![Element::Int(3)]);
        let eps = Rational::new(1, 10);
        let folner = FolnerSet::choose(&ext, &f, eps, FolnerChoice::Whole).unwrap();
        let psi = cyclic_quasi_action(&subset(&z, vec![Element::Int(1)]), 12, eps).unwrap();
        let err = amenable_extension_qa(&psi, &ext, &folner, &f, eps).unwrap_err();
        assert!(matches!(err, ConstructionError::Qa(crate::quasiaction::QaError::IncompleteSupport { .. })), "{err}");
    }
}
