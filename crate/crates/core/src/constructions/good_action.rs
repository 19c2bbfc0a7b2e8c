//! Upgrading a quasi-action to one with bijective, fixpoint-free,
//! inverse-compatible maps on a doubled carrier.

use std::collections::BTreeMap;

use super::ConstructionError;
use crate::finmap::FiniteMap;
use crate::groups::{Element, FiniteSubset};
use crate::quasiaction::{verify, QuasiAction};
use crate::rational::Rational;

/// Builds `ψ` on `A′ = A ⊔ A` from an `(F̃, ε/10)`-quasi-action `φ`.
///
/// Point `a` of the first copy is `a`, of the second copy `n + a`.
/// The output is defined on `F̃`, claims `(F, ε)`, has `ψ(1) = id`, and
/// every other `ψ(g)` is a fixpoint-free bijection with `ψ(g⁻¹) = ψ(g)⁻¹`.
pub fn good_action_upgrade(phi: &QuasiAction, f: &FiniteSubset, epsilon: Rational) -> Result<QuasiAction, ConstructionError> {
    let group = phi.group();
    let tilde = f.tilde()?;
    let tenth = epsilon / Rational::from_integer(10);
    let pre = verify(phi, &tilde, tenth, false)?;
    if !pre.passed() {
        let failed: Vec<&str> = [(pre.condition_a, "(a)"), (pre.condition_b, "(b)"), (pre.condition_c, "(c)")]
            .into_iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, name)| name)
            .collect();
        return Err(ConstructionError::Precondition(format!(
            "input is not an (F~, epsilon/10)-quasi-action: condition {} fails at {tenth} (max defect {})",
            failed.join(", "),
            pre.max_defect
        )));
    }

    let n = phi.carrier_n();
    let one = group.identity();
    let mut assignment: BTreeMap<Element, FiniteMap> = BTreeMap::new();
    assignment.insert(one.clone(), FiniteMap::identity(2 * n));
    for e in tilde.iter() {
        if *e == one || assignment.contains_key(e) {
            continue;
        }
        let e_inv = group.inverse(e)?;
        let psi = upgrade_one(phi.map(e)?, phi.map(&e_inv)?)
            .map_err(|why| ConstructionError::Invariant(format!("upgrading {e}: {why}")))?;
        let psi_inv = psi.inverse().expect("upgrade_one returns bijections");
        if e_inv == *e && psi_inv != psi {
            return Err(ConstructionError::Invariant(format!("psi({e}) should be an involution")));
        }
        assignment.insert(e_inv, psi_inv);
        assignment.insert(e.clone(), psi);
    }
    Ok(QuasiAction::new(group.clone(), 2 * n, assignment, f.clone(), epsilon)?)
}

/// `ψ(e)` from `φ(e)` and `φ(e⁻¹)`.
fn upgrade_one(pe: &FiniteMap, pi: &FiniteMap) -> Result<FiniteMap, String> {
    let n = pe.len();
    let (pe, pi) = (pe.images(), pi.images());
    // A_e: fixed by φ(e)φ(e⁻¹) but not by φ(e).
    let in_a_e: Vec<bool> = (0..n).map(|a| pi[pe[a] as usize] as usize == a && pe[a] as usize != a).collect();
    let in_a_inv: Vec<bool> = (0..n).map(|a| pe[pi[a] as usize] as usize == a && pi[a] as usize != a).collect();

    let mut images: Vec<Option<u32>> = vec![None; 2 * n];
    let mut set = |from: usize, to: usize| {
        images[from] = Some(to as u32);
        images[n + from] = Some((n + to) as u32);
    };
    for a in (0..n).filter(|&a| in_a_e[a]) {
        set(a, pe[a] as usize);
    }
    let only_inv: Vec<usize> = (0..n).filter(|&a| in_a_inv[a] && !in_a_e[a]).collect();
    let only_e: Vec<usize> = (0..n).filter(|&a| in_a_e[a] && !in_a_inv[a]).collect();
    if only_inv.len() != only_e.len() {
        return Err(format!("|A_e-inverse minus A_e| = {} but |A_e minus A_e-inverse| = {}", only_inv.len(), only_e.len()));
    }
    for (&from, &to) in only_inv.iter().zip(&only_e) {
        set(from, to);
    }
    // Copy swap on the complement.
    for a in (0..n).filter(|&a| !in_a_e[a] && !in_a_inv[a]) {
        images[a] = Some((n + a) as u32);
        images[n + a] = Some(a as u32);
    }

    let images: Vec<u32> = images.into_iter().collect::<Option<_>>().ok_or("some point left unassigned")?;
    let psi = FiniteMap::from_images(images).map_err(|e| e.to_string())?;
    if !psi.is_bijective() {
        return Err("result is not a bijection".into());
    }
    if psi.fixpoint_count() != 0 {
        return Err("result has fixpoints".into());
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic_quasi_action, perturb, regular_action};
    use crate::groups::Group;

    fn ints(xs: &[i64]) -> FiniteSubset {
        FiniteSubset::new(&Group::integers(), xs.iter().map(|&k| Element::Int(k))).unwrap()
    }

    #[test]
    fn good_input_is_just_doubled() {
        let g = Group::cyclic(3).unwrap();
        let all = FiniteSubset::whole(&g).unwrap();
        let phi = regular_action(&g, &all, Rational::new(1, 100)).unwrap();
        let psi = good_action_upgrade(&phi, &all, Rational::new(1, 2)).unwrap();
        assert_eq!(psi.carrier_n(), 6);
        for (e, map) in psi.assignment() {
            assert_eq!(map, &phi.map(e).unwrap().double());
        }
        let r = verify(&psi, &all, Rational::new(1, 2), true).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_defect.disagreements, 0);
    }

    /// `φ(e)` on 40 points: 19 transpositions on `0..38`, then `38 ↦ 39 ↦ 39`.
    /// With `e` of order 2 in `ℤ/2`, `A_e = 0..38`, and `38, 39` fall in the complement.
    fn almost_involution() -> (QuasiAction, FiniteSubset) {
        let g = Group::cyclic(2).unwrap();
        let all = FiniteSubset::whole(&g).unwrap();
        let mut images: Vec<u32> = (0..40).map(|a| if a < 38 { a ^ 1 } else { 39 }).collect();
        images[39] = 39;
        let mut assignment = BTreeMap::new();
        assignment.insert(Element::Fin(0), FiniteMap::identity(40));
        assignment.insert(Element::Fin(1), FiniteMap::from_images(images).unwrap());
        (QuasiAction::new(g, 40, assignment, all.clone(), Rational::new(1, 20)).unwrap(), all)
    }

    #[test]
    fn one_fixpoint_involution() {
        let (phi, all) = almost_involution();
        let eps = Rational::new(1, 2);
        let psi = good_action_upgrade(&phi, &all, eps).unwrap();
        let e = Element::Fin(1);
        let map = psi.map(&e).unwrap();
        assert_eq!(map.len(), 80);
        assert_eq!(map.fixpoint_count(), 0);
        assert!(map.compose(map).unwrap().is_identity());
        // Only 38, 39 and their copies move differently from φ′(e).
        let d = map.similarity_defect(&phi.map(&e).unwrap().double()).unwrap();
        assert_eq!(d.disagreements, 4);
        assert!(d.is_similar(eps * Rational::new(3, 10)));
        assert!(verify(&psi, &all, eps, true).unwrap().passed());
    }

    #[test]
    fn difference_sets_are_paired_in_order() {
        // A_e = {0,1}, A_{e⁻¹} = {1,2}, and 3 is fixed by both maps.
        let pe = FiniteMap::from_images(vec![1, 2, 0, 3]).unwrap();
        let pi = FiniteMap::from_images(vec![1, 0, 1, 3]).unwrap();
        let psi = upgrade_one(&pe, &pi).unwrap();
        // 0 ↦ 1 and 1 ↦ 2 follow φ(e); 2 ↦ 0 closes the difference sets;
        // 3 goes to its other copy.
        assert_eq!(psi.images(), &[1, 2, 0, 7, 5, 6, 4, 3]);
    }

    #[test]
    fn failed_precondition_names_the_condition() {
        let f = ints(&[1]);
        let phi = cyclic_quasi_action(&f.tilde().unwrap(), 12, Rational::new(1, 2)).unwrap();
        let bad = perturb(&phi, &Element::Int(0), 0, 1).unwrap();
        let err = good_action_upgrade(&bad, &f, Rational::new(1, 2)).unwrap_err();
        let ConstructionError::Precondition(msg) = err else { panic!("expected precondition error") };
        assert!(msg.contains("(b)"), "{msg}");
    }

    #[test]
    fn inverse_pairs_are_exact_on_perturbed_shifts() {
        let f = ints(&[1]);
        let phi = cyclic_quasi_action(&f.tilde().unwrap(), 12, Rational::new(1, 2)).unwrap();
        let phi = perturb(&phi, &Element::Int(0), 0, 1).unwrap();
        // Every defect is now 1/12, which is ε/10 for ε = 5/6.
        let eps = Rational::new(5, 6);
        let psi = good_action_upgrade(&phi, &f, eps).unwrap();
        for (g, map) in psi.assignment() {
            let inv = psi.map(&Group::integers().inverse(g).unwrap()).unwrap();
            assert!(map.compose(inv).unwrap().is_identity());
            if *g != Element::Int(0) {
                assert_eq!(map.fixpoint_count(), 0);
            }
        }
        assert!(psi.map(&Element::Int(0)).unwrap().is_identity());
        assert_eq!(psi.support(), f.tilde().unwrap());
    }
}
