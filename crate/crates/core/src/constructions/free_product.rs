//! Quasi-actions of a free product `G*H` on a partitioned carrier.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::carrier::PartitionedCarrier;
use super::ConstructionError;
use crate::finmap::FiniteMap;
use crate::groups::{reduce_pairs, Element, FiniteSubset, Group};
use crate::quasiaction::{verify, QuasiAction};

/// Words `g₁h₁…g_kh_k` in normal form with `k ≤ n`, `g_i ∈ F_G`, `h_i ∈ F_H`.
///
/// `k` counts the pairs of the normal form, so a leading `g₁ = 1` or a
/// trailing `h_k = 1` needs `1` in the respective set.
pub fn free_product_f(left: &Group, right: &Group, f_g: &FiniteSubset, f_h: &FiniteSubset, n: usize) -> Result<FiniteSubset, ConstructionError> {
    let group = Group::free_product(left.clone(), right.clone());
    if f_g.group() != left || f_h.group() != right {
        return Err(ConstructionError::Domain("F_G and F_H must belong to the two factors".into()));
    }
    let inner_g: Vec<&Element> = f_g.without_identity().collect();
    let inner_h: Vec<&Element> = f_h.without_identity().collect();
    let mut out = Vec::new();
    for k in 1..=n {
        let mut partial: Vec<Vec<(Element, Element)>> = vec![Vec::new()];
        for i in 0..k {
            let gs: Vec<&Element> = if i == 0 { f_g.iter().collect() } else { inner_g.clone() };
            let hs: Vec<&Element> = if i == k - 1 { f_h.iter().collect() } else { inner_h.clone() };
            let mut next = Vec::with_capacity(partial.len() * gs.len() * hs.len());
            for p in &partial {
                for &g in &gs {
                    for &h in &hs {
                        let mut q = p.clone();
                        q.push((g.clone(), h.clone()));
                        next.push(q);
                    }
                }
            }
            partial = next;
        }
        for pairs in partial {
            let w = reduce_pairs(left, right, &pairs)?;
            if w.pair_count() == k {
                out.push(Element::Word(w));
            }
        }
    }
    Ok(FiniteSubset::new(&group, out)?)
}

/// `Φ(g₁h₁…g_kh_k) = φ′(g₁)ψ′(h₁)…φ′(g_k)ψ′(h_k)` on the carrier `C`.
///
/// `phi` and `psi` must satisfy the strict conditions at their claimed
/// `(F, ε)`. The result is defined on `{1} ∪ F ∪ F·F` for
/// `F = free_product_f(F_G, F_H, n)` and claims `(F, ε)` with the larger of
/// the two claimed `ε`. `Φ(g)` is checked to be fixpoint-free for every
/// `1 ≠ g ∈ F`.
pub fn free_product_qa(phi: &QuasiAction, psi: &QuasiAction, n: usize, pc: &PartitionedCarrier) -> Result<QuasiAction, ConstructionError> {
    for (name, qa) in [("left", phi), ("right", psi)] {
        let r = verify(qa, qa.claimed_f(), qa.claimed_epsilon(), true)?;
        let strict = r.strict.as_ref().expect("strict report requested");
        if !strict.condition_b_strict || !strict.condition_c_strict || !r.condition_a {
            return Err(ConstructionError::Precondition(format!(
                "{name} factor is not a good quasi-action: (a) {}, (b') {}, (c') {}",
                r.condition_a, strict.condition_b_strict, strict.condition_c_strict
            )));
        }
    }
    if pc.a_size() != phi.carrier_n() || pc.b_size() != psi.carrier_n() {
        return Err(ConstructionError::Domain(format!(
            "carrier is built for |A| = {}, |B| = {}; factors act on {} and {} points",
            pc.a_size(),
            pc.b_size(),
            phi.carrier_n(),
            psi.carrier_n()
        )));
    }
    if pc.girth_bound() < 2 * n {
        return Err(ConstructionError::Precondition(format!(
            "carrier incidence girth is certified only above {}, need above {}",
            pc.girth_bound(),
            2 * n
        )));
    }

    let (left, right) = (phi.group(), psi.group());
    let group = Group::free_product(left.clone(), right.clone());
    let f = free_product_f(left, right, phi.claimed_f(), psi.claimed_f(), n)?;
    let support = f.required_support()?.union(&f)?;
    let epsilon = phi.claimed_epsilon().max(psi.claimed_epsilon());

    // Lift every syllable once.
    let mut lifted_g: BTreeMap<Element, FiniteMap> = BTreeMap::new();
    let mut lifted_h: BTreeMap<Element, FiniteMap> = BTreeMap::new();
    for e in support.iter() {
        let Element::Word(w) = e else { unreachable!("free product element") };
        for (g, h) in w.pairs() {
            if !lifted_g.contains_key(g) {
                lifted_g.insert(g.clone(), pc.lift_alpha(phi.map(g)?)?);
            }
            if !lifted_h.contains_key(h) {
                lifted_h.insert(h.clone(), pc.lift_beta(psi.map(h)?)?);
            }
        }
    }

    let size = pc.len();
    let maps: Vec<(Element, FiniteMap)> = support
        .elements()
        .par_iter()
        .map(|e| {
            let Element::Word(w) = e else { unreachable!("free product element") };
            let mut images: Vec<u32> = (0..size as u32).collect();
            for (g, h) in w.pairs() {
                let (mg, mh) = (lifted_g[g].images(), lifted_h[h].images());
                for x in images.iter_mut() {
                    *x = mh[mg[*x as usize] as usize];
                }
            }
            Ok((e.clone(), FiniteMap::from_images(images)?))
        })
        .collect::<Result<_, ConstructionError>>()?;
    let assignment: BTreeMap<Element, FiniteMap> = maps.into_iter().collect();

    let one = group.identity();
    if !assignment[&one].is_identity() {
        return Err(ConstructionError::Invariant("Phi(1) is not the identity".into()));
    }
    for g in f.without_identity() {
        let fixed = assignment[g].fixpoint_count();
        if fixed != 0 {
            return Err(ConstructionError::Invariant(format!("Phi({g}) has {fixed} fixpoints")));
        }
    }
    Ok(QuasiAction::new(group, size, assignment, f, epsilon)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_partitioned_carrier, girth_group_search, good_action_upgrade, regular_action, GirthCertificate, SearchParams};
    use crate::groups::{product_case, ProductCase};
    use crate::rational::Rational;

    fn good_regular(m: usize) -> QuasiAction {
        let g = Group::cyclic(m).unwrap();
        let all = FiniteSubset::whole(&g).unwrap();
        let phi = regular_action(&g, &all, Rational::new(1, 100)).unwrap();
        good_action_upgrade(&phi, &all, Rational::new(1, 10)).unwrap()
    }

    #[test]
    fn f_enumeration_counts() {
        let (l, r) = (Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap());
        let f = free_product_f(&l, &r, &FiniteSubset::whole(&l).unwrap(), &FiniteSubset::whole(&r).unwrap(), 2).unwrap();
        // k = 1: 2·3; k = 2: g₁ ∈ {0,1}, h₁ ∈ {1,2}, g₂ = 1, h₂ ∈ {0,1,2}.
        assert_eq!(f.len(), 6 + 12);
        assert!(f.contains(&f.group().identity()));
    }

    #[test]
    fn z2_free_z2_has_no_fixpoints() {
        let (phi, psi) = (good_regular(2), good_regular(2));
        let v = girth_group_search(16, GirthCertificate::Incidence { a_size: 4, b_size: 4, bound: 4 }, &SearchParams::new(5000, 0))
            .unwrap();
        let pc = build_partitioned_carrier(4, 4, 2, &v).unwrap();
        let qa = free_product_qa(&phi, &psi, 2, &pc).unwrap();
        assert!(qa.map(&qa.group().identity()).unwrap().is_identity());
        for g in qa.claimed_f().without_identity() {
            assert!(qa.map(g).unwrap().fixpoint_set().is_empty());
        }
        let r = verify(&qa, qa.claimed_f(), Rational::new(1, 10), false).unwrap();
        assert!(r.passed());
        let Group::FreeProduct { left, right } = qa.group() else { unreachable!() };
        for p in &r.pair_defects {
            let (Element::Word(u), Element::Word(w)) = (&p.left, &p.right) else { unreachable!() };
            if product_case(left, right, u, w) != ProductCase::Cancellation {
                assert_eq!(p.defect.disagreements, 0);
            }
        }
    }

    #[test]
    fn bad_factor_rejected() {
        let g = Group::cyclic(2).unwrap();
        let all = FiniteSubset::whole(&g).unwrap();
        // The plain regular action is exact but ε = 1/100 allows nothing else; it is good.
        let phi = regular_action(&g, &all, Rational::new(1, 100)).unwrap();
        let mut assignment = phi.assignment().clone();
        assignment.insert(Element::Fin(1), FiniteMap::identity(2));
        let bad = QuasiAction::new(g, 2, assignment, all, Rational::new(1, 100)).unwrap();
        let v = girth_group_search(4, GirthCertificate::Words { bound: 2 }, &SearchParams::new(5000, 0)).unwrap();
        let pc = build_partitioned_carrier(2, 2, 1, &v).unwrap();
        assert!(matches!(free_product_qa(&bad, &phi, 1, &pc), Err(ConstructionError::Precondition(_))));
    }
}
