//! The group generated by translations of `K = ℤ^d` and finitely supported
//! permutations of `K`.
//!
//! An element `kσ` is the bijection `s ↦ k + σ(s)` of `K`. Products compose
//! as functions, right to left: `(k₁σ₁)(k₂σ₂) = k₁σ₁k₂σ₂`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::GroupError;

pub type Point = Vec<i64>;

/// `kσ` with `σ` stored as its moved points only, sorted by point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitaryElement {
    shift: Point,
    moves: Vec<(Point, Point)>,
}

fn add(a: &[i64], b: &[i64]) -> Result<Point, GroupError> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or(GroupError::Overflow)).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Result<Point, GroupError> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y).ok_or(GroupError::Overflow)).collect()
}

/// Word-metric length for the standard generators: the ℓ¹ norm.
pub fn word_length(p: &[i64]) -> u64 {
    p.iter().map(|x| x.unsigned_abs()).sum()
}

impl FinitaryElement {
    pub fn identity(rank: usize) -> Self {
        FinitaryElement { shift: vec![0; rank], moves: Vec::new() }
    }

    /// Builds `kσ` from a shift and a permutation given as `(point, image)` pairs.
    /// Fixed pairs are dropped.
    pub fn new(shift: Point, perm: impl IntoIterator<Item = (Point, Point)>) -> Result<Self, GroupError> {
        let rank = shift.len();
        let mut map = BTreeMap::new();
        for (p, q) in perm {
            if p.len() != rank || q.len() != rank {
                return Err(GroupError::Malformed(format!("point of wrong rank in permutation (rank {rank})")));
            }
            if map.insert(p.clone(), q).is_some() {
                return Err(GroupError::Malformed(format!("point {p:?} listed twice")));
            }
        }
        map.retain(|p, q| p != q);
        let domain: BTreeSet<&Point> = map.keys().collect();
        let image: BTreeSet<&Point> = map.values().collect();
        if domain != image || image.len() != map.len() {
            return Err(GroupError::Malformed("permutation part is not a bijection of its support".into()));
        }
        Ok(FinitaryElement { shift, moves: map.into_iter().collect() })
    }

    pub fn rank(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    pub fn moves(&self) -> &[(Point, Point)] {
        &self.moves
    }

    pub fn is_identity(&self) -> bool {
        self.moves.is_empty() && self.shift.iter().all(|&x| x == 0)
    }

    /// `σ(s)`.
    pub fn permute(&self, s: &[i64]) -> Point {
        match self.moves.binary_search_by(|(p, _)| p.as_slice().cmp(s)) {
            Ok(i) => self.moves[i].1.clone(),
            Err(_) => s.to_vec(),
        }
    }

    /// `k + σ(s)`.
    pub fn act(&self, s: &[i64]) -> Result<Point, GroupError> {
        add(&self.shift, &self.permute(s))
    }

    /// Largest word length of a moved point (0 when `σ` is trivial).
    pub fn support_radius(&self) -> u64 {
        self.moves.iter().map(|(p, _)| word_length(p)).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, GroupError> {
        // (k₁σ₁)(k₂σ₂) = (k₁+k₂) · [s ↦ σ₁(σ₂(s) + k₂) − k₂].
        let k2 = &other.shift;
        let mut candidates: BTreeSet<Point> = other.moves.iter().map(|(p, _)| p.clone()).collect();
        for (p, _) in &self.moves {
            candidates.insert(sub(p, k2)?);
        }
        let mut perm = Vec::with_capacity(candidates.len());
        for s in candidates {
            let t = add(&other.permute(&s), k2)?;
            let image = sub(&self.permute(&t), k2)?;
            perm.push((s, image));
        }
        FinitaryElement::new(add(&self.shift, k2)?, perm)
    }

    pub fn inverse(&self) -> Result<Self, GroupError> {
        // (kσ)⁻¹ = (−k) · [y ↦ σ⁻¹(y − k) + k].
        let k = &self.shift;
        let mut perm = Vec::with_capacity(self.moves.len());
        for (p, q) in &self.moves {
            perm.push((add(q, k)?, add(p, k)?));
        }
        let neg: Point = k.iter().map(|x| x.checked_neg().ok_or(GroupError::Overflow)).collect::<Result<_, _>>()?;
        FinitaryElement::new(neg, perm)
    }
}

impl fmt::Display for FinitaryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}", self.shift)?;
        if !self.moves.is_empty() {
            f.write_str("σ{")?;
            for (i, (p, q)) in self.moves.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p:?}→{q:?}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// All points of `ℤ^rank` with ℓ¹ norm at most `radius`, in lexicographic order.
pub fn ball(rank: usize, radius: u64) -> Vec<Point> {
    fn rec(rank: usize, budget: i64, prefix: &mut Point, out: &mut Vec<Point>) {
        if prefix.len() == rank {
            out.push(prefix.clone());
            return;
        }
        for x in -budget..=budget {
            prefix.push(x);
            rec(rank, budget - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, radius as i64, &mut Vec::with_capacity(rank), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(k: i64, perm: &[(i64, i64)]) -> FinitaryElement {
        FinitaryElement::new(vec![k], perm.iter().map(|&(p, q)| (vec![p], vec![q]))).unwrap()
    }

    #[test]
    fn product_acts_as_composition() {
        let f = elem(1, &[(0, 1), (1, 0)]);
        let g = elem(-1, &[(-1, 0), (0, -1)]);
        let fg = f.multiply(&g).unwrap();
        for s in -6..=6 {
            let direct = f.act(&g.act(&[s]).unwrap()).unwrap();
            assert_eq!(fg.act(&[s]).unwrap(), direct, "at {s}");
        }
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(FinitaryElement::new(vec![0], [(vec![0], vec![1])]).is_err());
        assert!(FinitaryElement::new(vec![0], [(vec![0, 0], vec![0, 0])]).is_err());
    }

    #[test]
    fn balls() {
        assert_eq!(ball(1, 2), vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
        assert_eq!(ball(2, 1).len(), 5);
        assert_eq!(ball(2, 2).len(), 13);
    }

    fn small_elem() -> impl Strategy<Value = FinitaryElement> {
        (-3i64..=3, Just(vec![-1i64, 0, 1, 2]).prop_shuffle()).prop_map(|(k, imgs)| {
            let perm = [-1i64, 0, 1, 2].into_iter().zip(imgs).map(|(p, q)| (vec![p], vec![q]));
            FinitaryElement::new(vec![k], perm).unwrap()
        })
    }

    proptest! {
        #[test]
        fn group_axioms(a in small_elem(), b in small_elem(), c in small_elem()) {
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(a.multiply(&a.inverse().unwrap()).unwrap().is_identity());
            prop_assert!(a.inverse().unwrap().multiply(&a).unwrap().is_identity());
        }
    }
}
