//! Finite permutation groups whose generators satisfy no short relation.
//!
//! Generators are labelled `0..g`; letter `s < g` is generator `s` and
//! letter `g + s` its inverse. Elements multiply on the right, matching
//! [`FiniteMap::compose`].

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::carrier::PartitionedCarrier;
use super::ConstructionError;
use crate::finmap::FiniteMap;

/// What a [`GirthGroup`] is certified to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GirthCertificate {
    /// No nonempty reduced word of length `≤ bound` evaluates to 1.
    Words { bound: usize },
    /// Labels read as `a·b_size + b`; the incidence graph of the carrier
    /// `A×B×V` has no cycle of length `≤ bound`.
    Incidence { a_size: usize, b_size: usize, bound: usize },
}

impl std::fmt::Display for GirthCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GirthCertificate::Words { bound } => write!(f, "no relation of length <= {bound}"),
            GirthCertificate::Incidence { a_size, b_size, bound } => {
                write!(f, "incidence girth > {bound} for {a_size}x{b_size} labels")
            }
        }
    }
}

pub type GirthTarget = GirthCertificate;

/// Search schedule for [`girth_group_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub degree_schedule: Vec<usize>,
    pub attempts_per_degree: usize,
    pub order_cap: usize,
    pub seed: u64,
}

impl SearchParams {
    pub fn new(order_cap: usize, seed: u64) -> Self {
        SearchParams { degree_schedule: (5..=12).collect(), attempts_per_degree: 64, order_cap, seed }
    }
}

/// A finite group `V` given by permutation generators, fully enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthGroup {
    degree: usize,
    generators: Vec<FiniteMap>,
    elements: Vec<FiniteMap>,
    /// `right_mul[s][v]` is the index of `v·x_s` (letters as above).
    right_mul: Vec<Vec<u32>>,
    certificate: GirthCertificate,
    seed: u64,
}

/// The generator file written for a [`GirthGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthWitness {
    pub degree: usize,
    pub generators: Vec<FiniteMap>,
    pub order: usize,
    pub girth_bound: usize,
    pub seed: u64,
}

impl GirthGroup {
    /// Enumerates the group generated by `generators` and certifies it
    /// against `certificate`. Fails if the order exceeds `order_cap` or the
    /// certificate does not hold.
    pub fn from_generators(
        generators: Vec<FiniteMap>,
        certificate: GirthCertificate,
        order_cap: usize,
        seed: u64,
    ) -> Result<Self, ConstructionError> {
        let v = Self::enumerate(generators, certificate, order_cap, seed)?
            .ok_or_else(|| ConstructionError::Precondition(format!("generated group exceeds order cap {order_cap}")))?;
        if !v.satisfies(&certificate)? {
            return Err(ConstructionError::Precondition(format!("generators violate: {certificate}")));
        }
        Ok(v)
    }

    fn enumerate(
        generators: Vec<FiniteMap>,
        certificate: GirthCertificate,
        order_cap: usize,
        seed: u64,
    ) -> Result<Option<Self>, ConstructionError> {
        let Some(first) = generators.first() else {
            return Err(ConstructionError::Domain("a girth group needs at least one generator".into()));
        };
        let degree = first.len();
        if generators.iter().any(|x| x.len() != degree || !x.is_bijective()) {
            return Err(ConstructionError::Domain("generators must be permutations of one common degree".into()));
        }
        if let GirthCertificate::Incidence { a_size, b_size, .. } = certificate {
            if a_size * b_size != generators.len() {
                return Err(ConstructionError::Domain(format!(
                    "{} generators cannot be labelled by {a_size}x{b_size}",
                    generators.len()
                )));
            }
        }
        let letters: Vec<FiniteMap> = generators
            .iter()
            .cloned()
            .chain(generators.iter().map(|x| x.inverse().expect("checked bijective")))
            .collect();

        let identity = FiniteMap::identity(degree);
        let mut index: HashMap<FiniteMap, u32> = HashMap::from([(identity.clone(), 0)]);
        let mut elements = vec![identity];
        let mut right_mul: Vec<Vec<u32>> = vec![Vec::new(); letters.len()];
        let mut next = 0;
        while next < elements.len() {
            for (s, x) in letters.iter().enumerate() {
                let w = elements[next].compose(x)?;
                let id = match index.get(&w) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= order_cap {
                            return Ok(None);
                        }
                        let id = elements.len() as u32;
                        index.insert(w.clone(), id);
                        elements.push(w);
                        id
                    }
                };
                right_mul[s].push(id);
            }
            next += 1;
        }
        Ok(Some(GirthGroup { degree, generators, elements, right_mul, certificate, seed }))
    }

    fn satisfies(&self, certificate: &GirthCertificate) -> Result<bool, ConstructionError> {
        Ok(match *certificate {
            GirthCertificate::Words { bound } => self.shortest_relation(bound).is_none(),
            GirthCertificate::Incidence { a_size, b_size, bound } => {
                let pc = PartitionedCarrier::layout(a_size, b_size, self)?;
                pc.check_classes().is_ok() && pc.shortest_cycle_within(bound).is_none()
            }
        })
    }

    pub fn label_count(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[FiniteMap] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element `v` as a permutation; index 0 is the identity.
    pub fn element(&self, v: usize) -> &FiniteMap {
        &self.elements[v]
    }

    pub fn certificate(&self) -> GirthCertificate {
        self.certificate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of `v·x_label`.
    pub fn times(&self, v: usize, label: usize) -> usize {
        self.right_mul[label][v] as usize
    }

    /// Index of `v·x_label⁻¹`.
    pub fn times_inverse(&self, v: usize, label: usize) -> usize {
        self.right_mul[self.generators.len() + label][v] as usize
    }

    /// The first nonempty reduced word of length `≤ bound` that evaluates to
    /// the identity, in depth-first order, as `(label, inverted)` letters.
    pub fn shortest_relation(&self, bound: usize) -> Option<Vec<(usize, bool)>> {
        let g = self.generators.len();
        let mut word: Vec<usize> = Vec::with_capacity(bound);
        let mut best: Option<Vec<usize>> = None;
        fn dfs(v: &GirthGroup, g: usize, at: usize, bound: usize, word: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
            if !word.is_empty() && at == 0 {
                if best.as_ref().is_none_or(|b| word.len() < b.len()) {
                    *best = Some(word.clone());
                }
                return;
            }
            let limit = best.as_ref().map_or(bound, |b| b.len() - 1);
            if word.len() >= limit {
                return;
            }
            for s in 0..2 * g {
                if let Some(&last) = word.last() {
                    if s == (last + g) % (2 * g) {
                        continue;
                    }
                }
                word.push(s);
                dfs(v, g, v.right_mul[s][at] as usize, bound, word, best);
                word.pop();
            }
        }
        dfs(self, g, 0, bound, &mut word, &mut best);
        best.map(|w| w.into_iter().map(|s| (s % g, s >= g)).collect())
    }

    pub fn witness(&self) -> GirthWitness {
        let girth_bound = match self.certificate {
            GirthCertificate::Words { bound } | GirthCertificate::Incidence { bound, .. } => bound,
        };
        GirthWitness {
            degree: self.degree,
            generators: self.generators.clone(),
            order: self.order(),
            girth_bound,
            seed: self.seed,
        }
    }
}

fn random_even_permutation(rng: &mut ChaCha8Rng, degree: usize) -> FiniteMap {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    images.shuffle(rng);
    let map = FiniteMap::from_images(images.clone()).expect("shuffled identity");
    if degree >= 2 && !is_even(&map) {
        images.swap(0, 1);
    }
    FiniteMap::from_images(images).expect("shuffled identity")
}

fn is_even(p: &FiniteMap) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            a = p.apply(a);
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

/// Seeded search for `labels` even permutations generating a group of
/// order `≤ order_cap` that satisfies `target`.
///
/// Degrees are tried in schedule order, each `attempts_per_degree` times,
/// drawing from one ChaCha8 stream seeded with `seed`.
pub fn girth_group_search(labels: usize, target: GirthTarget, params: &SearchParams) -> Result<GirthGroup, ConstructionError> {
    if labels == 0 {
        return Err(ConstructionError::Domain("label count must be at least 1".into()));
    }
    let bound = match target {
        GirthCertificate::Words { bound } | GirthCertificate::Incidence { bound, .. } => bound,
    };
    if bound == 0 {
        return Err(ConstructionError::Domain("girth bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for &degree in &params.degree_schedule {
        for _ in 0..params.attempts_per_degree {
            let generators: Vec<FiniteMap> = (0..labels).map(|_| random_even_permutation(&mut rng, degree)).collect();
            let Some(v) = GirthGroup::enumerate(generators, target, params.order_cap, params.seed)? else {
                continue;
            };
            if v.satisfies(&target)? {
                return Ok(v);
            }
        }
    }
    Err(ConstructionError::SearchFailure { labels, target: target.to_string(), order_cap: params.order_cap })
}
