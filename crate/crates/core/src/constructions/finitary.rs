//! Maps `Ψₙ` from the finitary group of `K = ℤ^d` into `Sym(K/Nₙ)`.
//!
//! `K/Nₙ` is `(ℤ/m)^d` with points indexed row-major. `Ψₙ(σ)` moves `τ(a)`
//! to `τ(σ(a))` for `a` in the ball `B₂ₙ` and fixes every other point;
//! `Ψₙ(k)` is translation by `τ(k)`. Maps act on the right, so the stored
//! image table of `Ψₙ(kσ)` is the inverse of `x ↦ τ(k) + Ψₙ(σ)(x)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::finmap::{FiniteMap, MapError};
use crate::groups::{ball, word_length, Element, FinitaryElement, FiniteSubset, Group, Point};
use crate::quasiaction::QuasiAction;
use crate::rational::Rational;

/// Largest ball whose full symmetric group is enumerated.
const ENUMERATION_LIMIT: usize = 6;

/// The finite quotient `τ: ℤ^rank → (ℤ/modulus)^rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitaryQuotient {
    pub rank: usize,
    pub modulus: usize,
}

impl FinitaryQuotient {
    pub fn carrier_len(&self) -> Result<usize, MapError> {
        u32::try_from(self.modulus)
            .ok()
            .and_then(|m| (m as usize).checked_pow(self.rank as u32))
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or(MapError::TooLarge(usize::MAX))
    }

    /// Row-major index of `τ(p)`.
    pub fn index(&self, p: &[i64]) -> usize {
        let m = self.modulus as i64;
        p.iter().fold(0usize, |acc, x| acc * self.modulus + x.rem_euclid(m) as usize)
    }

    fn coordinates(&self, mut x: usize) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for c in out.iter_mut().rev() {
            *c = (x % self.modulus) as i64;
            x /= self.modulus;
        }
        out
    }

    /// Whether `τ` is injective on the ball of the given radius.
    pub fn injective_on_ball(&self, radius: u64) -> bool {
        let mut seen = HashSet::new();
        ball(self.rank, radius).iter().all(|p| seen.insert(self.index(p)))
    }
}

/// The output of [`finitary_extension_qa`].
#[derive(Debug, Clone, PartialEq)]
pub struct FinitaryQa {
    pub qa: QuasiAction,
    pub radius: u64,
    /// Elements whose maps were compared for injectivity.
    pub injectivity_checked: usize,
    /// Whether the comparison ran over all of `F₂ₙ` or only over the support.
    pub injectivity_on_double_ball: bool,
}

/// `Ψₙ` on `{1} ∪ F ∪ F·F`, claiming `(F, ε)`.
///
/// `F` defaults to all of `Fₙ = {kσ : k ∈ Bₙ, σ ∈ Sym(Bₙ)}`; a supplied `F`
/// must lie inside `Fₙ`. Injectivity is checked over `F₂ₙ` when that set is
/// small enough to enumerate and over the support otherwise.
pub fn finitary_extension_qa(
    quot: FinitaryQuotient,
    radius: u64,
    f: Option<&FiniteSubset>,
    epsilon: Rational,
) -> Result<FinitaryQa, ConstructionError> {
    if quot.rank == 0 || quot.modulus == 0 || radius == 0 {
        return Err(ConstructionError::Domain("rank, modulus and radius must be positive".into()));
    }
    let group = Group::finitary(quot.rank);
    let n_points = quot.carrier_len()?;
    let r10 = radius.checked_mul(10).ok_or(ConstructionError::Domain("radius too large".into()))?;
    if !quot.injective_on_ball(r10) {
        return Err(ConstructionError::Precondition(format!(
            "reduction mod {} is not injective on the ball of radius {r10}",
            quot.modulus
        )));
    }

    let f = match f {
        Some(f) => {
            if f.group() != &group {
                return Err(ConstructionError::Domain(format!("F belongs to {}, expected {}", f.group().name(), group.name())));
            }
            for e in f.iter() {
                let Element::Finitary(x) = e else { unreachable!("finitary element") };
                if word_length(x.shift()) > radius || x.support_radius() > radius {
                    return Err(ConstructionError::Domain(format!("{e} is outside F_{radius}")));
                }
            }
            f.clone()
        }
        None => FiniteSubset::new(&group, enumerate_f(quot.rank, radius)?)?,
    };

    let psi = Psi::new(quot, radius);
    let support = f.required_support()?.union(&f)?;
    let mut assignment = BTreeMap::new();
    for e in support.iter() {
        assignment.insert(e.clone(), psi.map(e)?);
    }

    let double = 2 * radius;
    let enumerable = ball(quot.rank, double).len() <= ENUMERATION_LIMIT;
    let (checked, on_double) = if enumerable {
        let elements = enumerate_f(quot.rank, double)?;
        let maps: Vec<(Element, FiniteMap)> =
            elements.into_iter().map(|e| psi.map(&e).map(|m| (e, m))).collect::<Result<_, _>>()?;
        check_injective(&maps)?;
        (maps.len(), true)
    } else {
        let maps: Vec<(Element, FiniteMap)> = assignment.iter().map(|(e, m)| (e.clone(), m.clone())).collect();
        check_injective(&maps)?;
        (maps.len(), false)
    };

    let qa = QuasiAction::new(group, n_points, assignment, f, epsilon)?;
    Ok(FinitaryQa { qa, radius, injectivity_checked: checked, injectivity_on_double_ball: on_double })
}

/// `Ψₙ(e)` for a single element whose permutation part moves only points of `B₂ₙ`.
pub fn finitary_map(quot: FinitaryQuotient, radius: u64, e: &Element) -> Result<FiniteMap, ConstructionError> {
    Group::finitary(quot.rank).check(e)?;
    Psi::new(quot, radius).map(e)
}

fn check_injective(maps: &[(Element, FiniteMap)]) -> Result<(), ConstructionError> {
    let mut seen: HashMap<&FiniteMap, &Element> = HashMap::with_capacity(maps.len());
    for (e, m) in maps {
        if let Some(prev) = seen.insert(m, e) {
            return Err(ConstructionError::Invariant(format!("Psi({prev}) and Psi({e}) coincide")));
        }
    }
    Ok(())
}

struct Psi {
    quot: FinitaryQuotient,
    radius: u64,
    /// `τ(a) ↦ a` for `a ∈ B₂ₙ`.
    lifts: HashMap<usize, Point>,
}

impl Psi {
    fn new(quot: FinitaryQuotient, radius: u64) -> Self {
        let lifts = ball(quot.rank, 2 * radius).into_iter().map(|p| (quot.index(&p), p)).collect();
        Psi { quot, radius, lifts }
    }

    fn map(&self, e: &Element) -> Result<FiniteMap, ConstructionError> {
        let Element::Finitary(x) = e else { unreachable!("finitary element") };
        if x.support_radius() > 2 * self.radius {
            return Err(ConstructionError::Domain(format!("{e} moves points outside the ball of radius {}", 2 * self.radius)));
        }
        let q = self.quot;
        let n = q.carrier_len()?;
        let shift = x.shift();
        let forward = FiniteMap::from_fn(n, |i| {
            let moved = match self.lifts.get(&i) {
                Some(a) => x.permute(a),
                None => q.coordinates(i),
            };
            let sum: Vec<i64> = moved.iter().zip(shift).map(|(a, k)| a.rem_euclid(q.modulus as i64) + k.rem_euclid(q.modulus as i64)).collect();
            q.index(&sum)
        })?;
        Ok(forward.inverse().ok_or_else(|| ConstructionError::Invariant(format!("Psi({e}) is not a bijection")))?)
    }
}

/// `{kσ : k ∈ B_r, σ ∈ Sym(B_r)}`.
fn enumerate_f(rank: usize, radius: u64) -> Result<Vec<Element>, ConstructionError> {
    let points = ball(rank, radius);
    if points.len() > ENUMERATION_LIMIT {
        return Err(ConstructionError::Domain(format!(
            "Sym of a ball with {} points is too large to enumerate; pass F explicitly",
            points.len()
        )));
    }
    let mut out = Vec::new();
    for perm in permutations(points.len()) {
        for k in &points {
            let pairs = points.iter().cloned().zip(perm.iter().map(|&j| points[j].clone()));
            out.push(Element::Finitary(FinitaryElement::new(k.clone(), pairs)?));
        }
    }
    Ok(out)
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasiaction::verify;

    const Z21: FinitaryQuotient = FinitaryQuotient { rank: 1, modulus: 21 };

    fn elt(k: i64, moves: &[(i64, i64)]) -> Element {
        Element::Finitary(FinitaryElement::new(vec![k], moves.iter().map(|&(p, q)| (vec![p], vec![q]))).unwrap())
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn translation_is_fixpoint_free() {
        let psi = Psi::new(Z21, 1);
        let map = psi.map(&elt(1, &[])).unwrap();
        assert_eq!(map.fixpoint_count(), 0);
        assert_eq!(map, FiniteMap::rotation(21, -1));
    }

    #[test]
    fn swap_product_is_exact() {
        let psi = Psi::new(Z21, 1);
        let g = Group::finitary(1);
        let f = elt(1, &[(0, 1), (1, 0)]);
        let h = elt(-1, &[(-1, 0), (0, -1)]);
        let fh = g.multiply(&f, &h).unwrap();
        let lhs = psi.map(&f).unwrap().compose(&psi.map(&h).unwrap()).unwrap();
        assert_eq!(lhs, psi.map(&fh).unwrap());
    }

    #[test]
    fn z_mod_21_radius_one() {
        let out = finitary_extension_qa(Z21, 1, None, Rational::new(20, 21)).unwrap();
        assert_eq!(out.qa.claimed_f().len(), 18);
        assert!(out.injectivity_on_double_ball);
        assert_eq!(out.injectivity_checked, 600);
        let r = verify(&out.qa, out.qa.claimed_f(), Rational::new(20, 21), false).unwrap();
        assert_eq!(r.max_pair_defect().disagreements, 0);
        assert!(r.passed());
    }

    #[test]
    fn small_modulus_rejected() {
        let q = FinitaryQuotient { rank: 1, modulus: 20 };
        assert!(matches!(finitary_extension_qa(q, 1, None, Rational::new(1, 2)), Err(ConstructionError::Precondition(_))));
    }

    #[test]
    fn f_outside_the_ball_rejected() {
        let g = Group::finitary(1);
        let f = FiniteSubset::new(&g, vec![elt(0, &[(2, 3), (3, 2)])]).unwrap();
        let err = finitary_extension_qa(Z21, 1, Some(&f), Rational::new(1, 2)).unwrap_err();
        assert!(matches!(err, ConstructionError::Domain(_)));
    }

    #[test]
    fn rank_two_uses_support_for_injectivity() {
        let q = FinitaryQuotient { rank: 2, modulus: 21 };
        let g = Group::finitary(2);
        let gen = |k: Vec<i64>| Element::Finitary(FinitaryElement::new(k, Vec::new()).unwrap());
        let swap = Element::Finitary(FinitaryElement::new(vec![0, 0], vec![(vec![0, 0], vec![1, 0]), (vec![1, 0], vec![0, 0])]).unwrap());
        let f = FiniteSubset::new(&g, vec![gen(vec![1, 0]), gen(vec![0, 1]), swap]).unwrap();
        let out = finitary_extension_qa(q, 1, Some(&f), Rational::new(440, 441)).unwrap();
        assert!(!out.injectivity_on_double_ball);
        assert_eq!(out.qa.carrier_n(), 441);
        let r = verify(&out.qa, &f, Rational::new(440, 441), false).unwrap();
        assert_eq!(r.max_pair_defect().disagreements, 0);
    }
}
