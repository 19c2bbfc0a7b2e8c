//! The set `C = A×B×V` with its two partitions.
//!
//! Point `(a,b,v)` has index `((a·|B|)+b)·|V| + v`. Generator `(a,b)` of
//! `V` is label `a·|B| + b`.
//!
//! * α-class `A[b,v] = {(a,b,v) : a ∈ A}` has id `b·|V| + v`; `(a,b,v)` sits at position `a`.
//! * β-class `B[a,w] = {(a,b,w·(a,b)) : b ∈ B}` has id `a·|V| + w`; `(a,b,v)` sits at position `b`.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use super::girth::{GirthCertificate, GirthGroup};
use super::ConstructionError;
use crate::finmap::{FiniteMap, MapError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedCarrier {
    a_size: usize,
    b_size: usize,
    v_order: usize,
    girth_bound: usize,
    /// β-class id of each point.
    beta_of: Vec<u32>,
    /// `beta_members[id·|B| + b]` is the point at position `b` of β-class `id`.
    beta_members: Vec<u32>,
}

impl PartitionedCarrier {
    /// The layout alone, without any checks.
    pub(super) fn layout(a_size: usize, b_size: usize, v: &GirthGroup) -> Result<Self, ConstructionError> {
        let v_order = v.order();
        let n = a_size
            .checked_mul(b_size)
            .and_then(|x| x.checked_mul(v_order))
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or(MapError::TooLarge(usize::MAX))?;
        let mut beta_of = vec![0u32; n];
        let mut beta_members = vec![0u32; n];
        for a in 0..a_size {
            for b in 0..b_size {
                let label = a * b_size + b;
                for vi in 0..v_order {
                    let p = (a * b_size + b) * v_order + vi;
                    let w = v.times_inverse(vi, label);
                    let id = a * v_order + w;
                    beta_of[p] = id as u32;
                    beta_members[id * b_size + b] = p as u32;
                }
            }
        }
        Ok(PartitionedCarrier { a_size, b_size, v_order, girth_bound: 0, beta_of, beta_members })
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    pub fn len(&self) -> usize {
        self.beta_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta_of.is_empty()
    }

    /// The bound `2N` the incidence girth was certified against.
    pub fn girth_bound(&self) -> usize {
        self.girth_bound
    }

    pub fn alpha_class_count(&self) -> usize {
        self.b_size * self.v_order
    }

    pub fn beta_class_count(&self) -> usize {
        self.a_size * self.v_order
    }

    /// `(a, α-class id)` of a point.
    pub fn alpha_ident(&self, p: usize) -> (usize, usize) {
        let v = p % self.v_order;
        let ab = p / self.v_order;
        (ab / self.b_size, (ab % self.b_size) * self.v_order + v)
    }

    /// The point with α-coordinates `(a, class)`.
    pub fn alpha_point(&self, a: usize, class: usize) -> usize {
        let (b, v) = (class / self.v_order, class % self.v_order);
        (a * self.b_size + b) * self.v_order + v
    }

    /// `(b, β-class id)` of a point.
    pub fn beta_ident(&self, p: usize) -> (usize, usize) {
        let b = (p / self.v_order) % self.b_size;
        (b, self.beta_of[p] as usize)
    }

    pub fn beta_point(&self, b: usize, class: usize) -> usize {
        self.beta_members[class * self.b_size + b] as usize
    }

    /// `φ′`: acts by `map` on the α-coordinate.
    pub fn lift_alpha(&self, map: &FiniteMap) -> Result<FiniteMap, ConstructionError> {
        if map.len() != self.a_size {
            return Err(ConstructionError::Domain(format!("map on {} points cannot act on A of size {}", map.len(), self.a_size)));
        }
        Ok(FiniteMap::from_fn(self.len(), |p| {
            let (a, x) = self.alpha_ident(p);
            self.alpha_point(map.apply(a), x)
        })?)
    }

    /// `ψ′`: acts by `map` on the β-coordinate.
    pub fn lift_beta(&self, map: &FiniteMap) -> Result<FiniteMap, ConstructionError> {
        if map.len() != self.b_size {
            return Err(ConstructionError::Domain(format!("map on {} points cannot act on B of size {}", map.len(), self.b_size)));
        }
        Ok(FiniteMap::from_fn(self.len(), |p| {
            let (b, y) = self.beta_ident(p);
            self.beta_point(map.apply(b), y)
        })?)
    }

    /// Class sizes and the `|α-class ∩ β-class| ≤ 1` property, checked exhaustively.
    pub fn check_classes(&self) -> Result<(), String> {
        let mut alpha_count = vec![0usize; self.alpha_class_count()];
        let mut beta_count = vec![0usize; self.beta_class_count()];
        let mut pairs = HashSet::with_capacity(self.len());
        for p in 0..self.len() {
            let (_, x) = self.alpha_ident(p);
            let (_, y) = self.beta_ident(p);
            alpha_count[x] += 1;
            beta_count[y] += 1;
            if !pairs.insert((x, y)) {
                return Err(format!("alpha-class {x} meets beta-class {y} in more than one point"));
            }
        }
        if let Some(x) = alpha_count.iter().position(|&c| c != self.a_size) {
            return Err(format!("alpha-class {x} has {} points, expected {}", alpha_count[x], self.a_size));
        }
        if let Some(y) = beta_count.iter().position(|&c| c != self.b_size) {
            return Err(format!("beta-class {y} has {} points, expected {}", beta_count[y], self.b_size));
        }
        Ok(())
    }

    /// Length of the shortest cycle of length `≤ limit` in the incidence
    /// graph, found by a breadth-first search from every class.
    pub fn shortest_cycle_within(&self, limit: usize) -> Option<usize> {
        let alphas = self.alpha_class_count();
        let nodes = alphas + self.beta_class_count();
        let depth = limit / 2;
        // Neighbours of a node as (edge = point, other node).
        let edges = |node: usize| -> Vec<(usize, usize)> {
            if node < alphas {
                (0..self.a_size)
                    .map(|a| {
                        let p = self.alpha_point(a, node);
                        (p, alphas + self.beta_of[p] as usize)
                    })
                    .collect()
            } else {
                let class = node - alphas;
                (0..self.b_size)
                    .map(|b| {
                        let p = self.beta_point(b, class);
                        (p, self.alpha_ident(p).1)
                    })
                    .collect()
            }
        };
        (0..nodes)
            .into_par_iter()
            .filter_map(|root| {
                let mut dist: std::collections::HashMap<usize, (usize, usize)> = std::collections::HashMap::new();
                dist.insert(root, (0, usize::MAX));
                let mut queue = VecDeque::from([root]);
                let mut best: Option<usize> = None;
                while let Some(u) = queue.pop_front() {
                    let (du, parent_edge) = dist[&u];
                    if du > depth {
                        break;
                    }
                    for (e, w) in edges(u) {
                        if e == parent_edge {
                            continue;
                        }
                        match dist.get(&w) {
                            Some(&(dw, _)) => {
                                let len = du + dw + 1;
                                if len <= limit && best.is_none_or(|b| len < b) {
                                    best = Some(len);
                                }
                            }
                            None => {
                                dist.insert(w, (du + 1, e));
                                queue.push_back(w);
                            }
                        }
                    }
                }
                best
            })
            .min()
    }
}

/// Builds `C = A×B×V` for a `V` labelled by `A×B` and certifies the
/// structure: class sizes, intersections, and incidence girth `> 2N`,
/// the last by direct search rather than from `V`'s certificate.
pub fn build_partitioned_carrier(
    a_size: usize,
    b_size: usize,
    n: usize,
    v: &GirthGroup,
) -> Result<PartitionedCarrier, ConstructionError> {
    if a_size == 0 || b_size == 0 || a_size * b_size != v.label_count() {
        return Err(ConstructionError::Domain(format!(
            "V has {} generator labels, expected {a_size}x{b_size}",
            v.label_count()
        )));
    }
    let bound = 2 * n;
    let certified = match v.certificate() {
        GirthCertificate::Words { bound: b } => b >= bound,
        GirthCertificate::Incidence { a_size: a, b_size: bb, bound: b } => a == a_size && bb == b_size && b >= bound,
    };
    if !certified {
        return Err(ConstructionError::Precondition(format!(
            "V is certified for \"{}\", which does not cover incidence girth > {bound}",
            v.certificate()
        )));
    }
    let mut pc = PartitionedCarrier::layout(a_size, b_size, v)?;
    pc.check_classes().map_err(ConstructionError::Invariant)?;
    if let Some(len) = pc.shortest_cycle_within(bound) {
        return Err(ConstructionError::Invariant(format!("incidence graph has a cycle of length {len} <= {bound}")));
    }
    pc.girth_bound = bound;
    Ok(pc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{girth_group_search, SearchParams};

    fn words_v(labels: usize, bound: usize, seed: u64) -> GirthGroup {
        girth_group_search(labels, GirthCertificate::Words { bound }, &SearchParams::new(5000, seed)).unwrap()
    }

    #[test]
    fn singleton_classes() {
        let v = GirthGroup::from_generators(vec![FiniteMap::rotation(5, 1)], GirthCertificate::Words { bound: 4 }, 10, 0)
            .unwrap();
        let pc = build_partitioned_carrier(1, 1, 2, &v).unwrap();
        assert_eq!(pc.len(), 5);
        assert_eq!(pc.alpha_class_count(), 5);
        assert_eq!(pc.beta_class_count(), 5);
    }

    #[test]
    fn two_by_two() {
        let v = words_v(4, 4, 0);
        let pc = build_partitioned_carrier(2, 2, 2, &v).unwrap();
        assert_eq!(pc.len(), 4 * v.order());
        assert_eq!(pc.alpha_class_count(), pc.len() / 2);
        assert_eq!(pc.beta_class_count(), pc.len() / 2);
        assert!(pc.check_classes().is_ok());
    }

    #[test]
    fn identifications_are_bijections() {
        let v = words_v(6, 2, 1);
        let pc = build_partitioned_carrier(2, 3, 1, &v).unwrap();
        for p in 0..pc.len() {
            let (a, x) = pc.alpha_ident(p);
            assert_eq!(pc.alpha_point(a, x), p);
            let (b, y) = pc.beta_ident(p);
            assert_eq!(pc.beta_point(b, y), p);
            // β-class B[a,w] contains (a,b,w·(a,b)).
            let (a2, rest) = (p / (3 * v.order()), p % (3 * v.order()));
            let (b2, vi) = (rest / v.order(), rest % v.order());
            assert_eq!((a2, b2), (a, b));
            assert_eq!(v.times(y % v.order(), a * 3 + b), vi);
        }
    }

    #[test]
    fn lifts_preserve_the_other_partition() {
        let v = words_v(4, 2, 2);
        let pc = build_partitioned_carrier(2, 2, 1, &v).unwrap();
        let swap = FiniteMap::swap(2, 0, 1).unwrap();
        let up = pc.lift_alpha(&swap).unwrap();
        for p in 0..pc.len() {
            assert_eq!(pc.alpha_ident(up.apply(p)).1, pc.alpha_ident(p).1);
        }
        let across = pc.lift_beta(&swap).unwrap();
        for p in 0..pc.len() {
            assert_eq!(pc.beta_ident(across.apply(p)).1, pc.beta_ident(p).1);
        }
    }

    #[test]
    fn short_cycles_are_found() {
        // All four labels equal: x(0,0)⁻¹·x(0,1)·x(1,1)⁻¹·x(1,0) = 1 closes a 4-cycle.
        let x = FiniteMap::rotation(5, 1);
        let v = GirthGroup::from_generators(vec![x; 4], GirthCertificate::Words { bound: 1 }, 10, 0).unwrap();
        let pc = PartitionedCarrier::layout(2, 2, &v).unwrap();
        assert!(pc.check_classes().is_ok());
        assert_eq!(pc.shortest_cycle_within(8), Some(4));
        assert_eq!(pc.shortest_cycle_within(3), None);
        assert!(matches!(build_partitioned_carrier(2, 2, 2, &v), Err(ConstructionError::Precondition(_))));
    }

    #[test]
    fn mismatched_labels_rejected() {
        let v = words_v(4, 2, 0);
        assert!(matches!(build_partitioned_carrier(1, 3, 1, &v), Err(ConstructionError::Domain(_))));
    }
}
